use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arith::{parse_rational, Rational};

#[derive(Debug, Parser)]
#[command(name = "airy-hodge", version, about = "Cohomology and irregular Hodge numbers of symmetric powers of Airy")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// dim H^1 and dim H^1_mid of Sym^k Ai_n over the affine line.
    Dims {
        #[command(flatten)]
        common: Common,
        /// Also compute the dimension by brute-force linear algebra.
        #[arg(long)]
        brute_force: bool,
    },
    /// A basis of de Rham cohomology with filtration levels.
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SpaceArg::A1)]
        space: SpaceArg,
        /// Twist of the G_m module: 0 or 1/2.
        #[arg(long, default_value = "0", value_parser = parse_rho)]
        rho: Rational,
    },
    /// Coefficients of (2 pi Ai Bi)^(k/2) in 1/z.
    Gamma {
        #[command(flatten)]
        common: Common,
    },
    /// Irregular Hodge numbers of H^1(A^1, Sym^k Ai).
    Hodge {
        #[command(flatten)]
        common: Common,
        /// Print the middle-cohomology table instead.
        #[arg(long)]
        mid: bool,
    },
    /// Graded Hodge dimensions of the mu_3-extended middle cohomology (even k >= 4).
    Tilde {
        #[command(flatten)]
        common: Common,
    },
    /// Formal decomposition at infinity of Sym^k Ai_n.
    Decomp {
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check Hodge tables, G-levels and pole orders.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Order of the Airy equation.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// A single k, or an inclusive range a..b.
    #[arg(long, value_parser = parse_k_range)]
    pub k: KRange,
    #[arg(long, value_enum)]
    pub parity: Option<Parity>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for cached JSON results.
    #[arg(long, env = "AIRY_HODGE_CACHE")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000_000, value_parser = parse_positive_u128)]
    pub enumeration_cap: u128,
    #[arg(long, default_value_t = 2048, value_parser = parse_positive_usize)]
    pub truncation_ceiling: usize,
    #[arg(long, default_value_t = 30, value_parser = parse_positive_usize)]
    pub series_terms: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    A1,
    Gm,
    Mid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRange {
    pub start: usize,
    pub end: usize,
    /// Whether the user wrote `a..b` rather than a single value.
    pub is_range: bool,
}

impl KRange {
    pub fn values(&self, parity: Option<Parity>) -> Vec<usize> {
        (self.start..=self.end)
            .filter(|k| match parity {
                None => true,
                Some(Parity::Odd) => k % 2 == 1,
                Some(Parity::Even) => k % 2 == 0,
            })
            .collect()
    }
}

pub fn parse_k_range(s: &str) -> Result<KRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a nonnegative integer: {t:?}"));
    match s.split_once("..") {
        None => {
            let k = num(s)?;
            Ok(KRange {
                start: k,
                end: k,
                is_range: false,
            })
        }
        Some((a, b)) => {
            let (start, end) = (num(a)?, num(b)?);
            if start > end {
                return Err(format!("empty range {s}"));
            }
            Ok(KRange {
                start,
                end,
                is_range: true,
            })
        }
    }
}

fn parse_rho(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r != Rational::new(0.into(), 1.into()) && r != Rational::new(1.into(), 2.into()) {
        return Err(format!("rho must be 0 or 1/2, got {s}"));
    }
    Ok(r)
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}
