//! Exact computations for symmetric powers of the Airy connection: de Rham
//! cohomology by brute force and in closed form, the asymptotic series of
//! `Ai * Bi`, and irregular Hodge numbers.

pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod connection;
pub mod error;
pub mod hodge;
pub mod limits;
pub mod moments;

pub use error::{Error, Result};
pub use limits::Limits;
