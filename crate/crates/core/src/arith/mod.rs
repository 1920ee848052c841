//! Exact scalar layer: rationals, polynomials, sparse matrices, offset series.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod series;

pub use matrix::{cokernel_basis, row_reduce, Echelon, RationalMatrix, RowReduction, SparseRow};
pub use poly::Polynomial;
pub use rational::{int, parse_rational, rat, Rational};
pub use series::{series_mul, series_pow, OffsetSeries};
