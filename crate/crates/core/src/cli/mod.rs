//! Command-line front end.

mod args;
mod cache;

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::io::Write;

use clap::Parser;
use num_traits::Zero;
use rayon::prelude::*;
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use args::{Cli, Command, Common, Format, KRange, Parity, SpaceArg};
pub use cache::Cache;

use crate::arith::{Polynomial, Rational};
use crate::asymptotics::{gamma, mid_basis, GammaTable};
use crate::connection::{build_symk_with, gm_cokernel_basis_with, h1_a1_basis, h1_dim_bruteforce, CohomologyBasis, Space};
use crate::error::{Error, Result};
use crate::hodge::{hodge_numbers, hodge_polynomial, tilde_mid_hodge, verify, HodgeTable, KReport, VerifyReport};
use crate::limits::Limits;
use crate::moments::{formal_decomposition_with, h1_dims_with, irr_with};

/// Exit code for malformed invocations.
pub const EXIT_USAGE: i32 = 64;
/// Exit code when `verify` finds a failing check.
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Dims,
    Basis,
    Gamma,
    Hodge,
    Tilde,
    Decomp,
    Verify,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Dims => "dims",
            CommandKind::Basis => "basis",
            CommandKind::Gamma => "gamma",
            CommandKind::Hodge => "hodge",
            CommandKind::Tilde => "tilde",
            CommandKind::Decomp => "decomp",
            CommandKind::Verify => "verify",
        })
    }
}

/// Everything one invocation needs, after flag parsing.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub ks: Vec<usize>,
    /// Single `k` given: emit a bare document rather than a list.
    pub single: bool,
    pub format: Format,
    pub cache: Cache,
    pub limits: Limits,
    pub series_terms: usize,
    pub space: Space,
    pub rho: Rational,
    pub mid: bool,
    pub brute_force: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, common, space, rho, mid, brute_force) = match cli.command {
            Command::Dims { common, brute_force } => (CommandKind::Dims, common, None, None, false, brute_force),
            Command::Basis { common, space, rho } => (CommandKind::Basis, common, Some(space), Some(rho), false, false),
            Command::Gamma { common } => (CommandKind::Gamma, common, None, None, false, false),
            Command::Hodge { common, mid } => (CommandKind::Hodge, common, None, None, mid, false),
            Command::Tilde { common } => (CommandKind::Tilde, common, None, None, false, false),
            Command::Decomp { common } => (CommandKind::Decomp, common, None, None, false, false),
            Command::Verify { common } => (CommandKind::Verify, common, None, None, false, false),
        };
        let ks = common.k.values(common.parity);
        if ks.is_empty() {
            return Err(Error::Parse("no k values left after the parity filter".into()));
        }
        let space = match space.unwrap_or(SpaceArg::A1) {
            SpaceArg::A1 => Space::A1,
            SpaceArg::Gm => Space::Gm,
            SpaceArg::Mid => Space::Mid,
        };
        Ok(Self {
            command,
            n: common.n,
            single: !common.k.is_range,
            ks,
            format: common.format,
            cache: Cache::new(common.cache_dir),
            limits: Limits {
                enumeration_cap: common.enumeration_cap,
                truncation_ceiling: common.truncation_ceiling,
                ..Limits::default()
            },
            series_terms: common.series_terms,
            space,
            rho: rho.unwrap_or_else(Rational::zero),
            mid,
            brute_force,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub all: usize,
    pub mid: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bruteforce: Option<usize>,
}

/// A module element as `{generator label: coefficient polynomial}`, in
/// generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledClass(pub Vec<(String, Polynomial)>);

impl Serialize for LabeledClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (label, p) in &self.0 {
            map.serialize_entry(label, p)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LabeledClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LabeledClass;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from generator labels to coefficient arrays")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<LabeledClass, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Polynomial>()? {
                    out.push((k, v));
                }
                Ok(LabeledClass(out))
            }
        }
        d.deserialize_map(V)
    }
}

impl fmt::Display for LabeledClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.0.iter().map(|(l, p)| format!("({p})*{l}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub k: usize,
    pub space: String,
    #[serde(with = "crate::arith::rational::serde_str")]
    pub rho: Rational,
    pub names: Vec<String>,
    #[serde(with = "crate::arith::rational::serde_vec")]
    pub levels: Vec<Rational>,
    pub classes: Vec<LabeledClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentDoc {
    /// Coefficients in ascending powers of a primitive `n`-th root of unity.
    #[serde(with = "crate::arith::rational::serde_vec")]
    pub coefficients: Vec<Rational>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompDoc {
    pub n: usize,
    pub k: usize,
    pub regular_rank: usize,
    #[serde(with = "crate::arith::rational::serde_str")]
    pub irregularity: Rational,
    pub exponents: Vec<ExponentDoc>,
}

fn basis_doc(b: &CohomologyBasis) -> Result<BasisDoc> {
    let module = build_symk_with(2, b.k, &b.twist, &Limits::default())?;
    let labels = module.labels();
    let classes = b
        .classes
        .iter()
        .map(|c| {
            LabeledClass(
                c.coords()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(g, p)| (labels[g].clone(), p.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(BasisDoc {
        k: b.k,
        space: b.space.to_string(),
        rho: b.twist.clone(),
        names: b.names.clone(),
        levels: b.g_levels.clone(),
        classes,
    })
}

fn zeta_polynomial(c: &[Rational]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| match i {
            0 => x.to_string(),
            1 => format!("({x})*zeta"),
            _ => format!("({x})*zeta^{i}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn require_n2(cfg: &RunConfig) -> Result<()> {
    if cfg.n != 2 {
        return Err(Error::Domain(format!("{} is only available for n = 2", cfg.command)));
    }
    Ok(())
}

fn key(cfg: &RunConfig, k: usize, extra: &str) -> String {
    format!("{}-n{}-k{}{}", cfg.command, cfg.n, k, extra)
}

fn compute_dims(cfg: &RunConfig, k: usize) -> Result<DimsDoc> {
    let extra = if cfg.brute_force { "-bf" } else { "" };
    let mut doc = cfg.cache.get_or_compute(&key(cfg, k, extra), || {
        let d = h1_dims_with(cfg.n, k, &cfg.limits)?;
        let bruteforce = if cfg.brute_force {
            let m = build_symk_with(cfg.n, k, &Rational::zero(), &cfg.limits)?;
            Some(h1_dim_bruteforce(&m, Space::A1, &cfg.limits)?.dim)
        } else {
            None
        };
        Ok(DimsDoc {
            k: None,
            all: d.all,
            mid: d.mid,
            bruteforce,
        })
    })?;
    if !cfg.single {
        doc.k = Some(k);
    }
    Ok(doc)
}

fn compute_basis(cfg: &RunConfig, k: usize) -> Result<BasisDoc> {
    require_n2(cfg)?;
    let extra = format!("-{}-rho{}", cfg.space, cfg.rho.to_string().replace('/', "_"));
    cfg.cache.get_or_compute(&key(cfg, k, &extra), || {
        let b = match cfg.space {
            Space::A1 if cfg.rho.is_zero() => h1_a1_basis(k)?,
            Space::Mid if cfg.rho.is_zero() => mid_basis(k)?,
            Space::A1 | Space::Mid => {
                return Err(Error::Domain("a twisted module only has G_m cohomology; use --space gm".into()))
            }
            Space::Gm => gm_cokernel_basis_with(k, &cfg.rho, &cfg.limits)?,
        };
        basis_doc(&b)
    })
}

fn compute_gamma(cfg: &RunConfig, k: usize) -> Result<GammaTable> {
    require_n2(cfg)?;
    let extra = format!("-terms{}", cfg.series_terms);
    cfg.cache.get_or_compute(&key(cfg, k, &extra), || gamma(k, cfg.series_terms))
}

fn compute_hodge(cfg: &RunConfig, k: usize) -> Result<HodgeTable> {
    require_n2(cfg)?;
    let extra = if cfg.mid { "-mid" } else { "" };
    cfg.cache.get_or_compute(&key(cfg, k, extra), || {
        let t = hodge_numbers(k)?;
        Ok(if cfg.mid { t.mid } else { t.full })
    })
}

fn compute_tilde(cfg: &RunConfig, k: usize) -> Result<HodgeTable> {
    require_n2(cfg)?;
    cfg.cache.get_or_compute(&key(cfg, k, ""), || tilde_mid_hodge(k))
}

fn compute_decomp(cfg: &RunConfig, k: usize) -> Result<DecompDoc> {
    cfg.cache.get_or_compute(&key(cfg, k, ""), || {
        let d = formal_decomposition_with(cfg.n, k, &cfg.limits)?;
        Ok(DecompDoc {
            n: cfg.n,
            k,
            regular_rank: d.regular_rank,
            irregularity: irr_with(cfg.n, k, &cfg.limits)?,
            exponents: d
                .entries
                .into_iter()
                .map(|(coefficients, multiplicity)| ExponentDoc {
                    coefficients,
                    multiplicity,
                })
                .collect(),
        })
    })
}

fn compute_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    require_n2(cfg)?;
    let results: Vec<KReport> = cfg
        .ks
        .par_iter()
        .map(|&k| {
            cfg.cache.get_or_compute(&key(cfg, k, ""), || {
                Ok(verify(&[k])?.results.pop().expect("one k requested"))
            })
        })
        .collect::<Result<_>>()?;
    let failures = results.iter().flat_map(|r| &r.checks).filter(|c| !c.passed).count();
    Ok(VerifyReport { results, failures })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn unsupported(cfg: &RunConfig) -> Error {
    let f = match cfg.format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Latex => "latex",
    };
    Error::Parse(format!("{f} output is not available for {}", cfg.command))
}

fn json<T: Serialize>(cfg: &RunConfig, items: &[T]) -> String {
    let s = if cfg.single && items.len() == 1 {
        serde_json::to_string(&items[0])
    } else {
        serde_json::to_string(items)
    };
    s.expect("documents serialize") + "\n"
}

fn blocks<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join("\n")
}

fn render_tables(cfg: &RunConfig, tables: &[HodgeTable]) -> Result<String> {
    Ok(match cfg.format {
        Format::Json => json(cfg, tables),
        Format::Text => blocks(tables, |t| format!("{t}spectrum: {}\n", hodge_polynomial(t))),
        Format::Csv => {
            let mut out = String::from("k,family,p,q,h\n");
            for t in tables {
                out.extend(t.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
            }
            out
        }
        Format::Latex => blocks(tables, |t| format!("% k = {}, {}\n{}", t.k, t.family, t.to_latex())),
    })
}

/// Computes the requested documents and renders them in the chosen format.
/// Returns the output and whether every verification check passed.
pub fn run(cfg: &RunConfig) -> Result<(String, bool)> {
    let mut ok = true;
    let out = match cfg.command {
        CommandKind::Dims => {
            let docs: Vec<DimsDoc> = cfg.ks.iter().map(|&k| compute_dims(cfg, k)).collect::<Result<_>>()?;
            match cfg.format {
                Format::Json => json(cfg, &docs),
                Format::Text => docs
                    .iter()
                    .zip(&cfg.ks)
                    .map(|(d, k)| {
                        let bf = d.bruteforce.map(|b| format!(" bruteforce={b}")).unwrap_or_default();
                        format!("n={} k={k}: all={} mid={}{bf}\n", cfg.n, d.all, d.mid)
                    })
                    .collect(),
                Format::Csv => {
                    let mut out = String::from(if cfg.brute_force { "n,k,all,mid,bruteforce\n" } else { "n,k,all,mid\n" });
                    for (d, k) in docs.iter().zip(&cfg.ks) {
                        let _ = write!(out, "{},{k},{},{}", cfg.n, d.all, d.mid);
                        if let Some(b) = d.bruteforce {
                            let _ = write!(out, ",{b}");
                        }
                        out.push('\n');
                    }
                    out
                }
                Format::Latex => return Err(unsupported(cfg)),
            }
        }
        CommandKind::Basis => {
            let docs: Vec<BasisDoc> = cfg.ks.iter().map(|&k| compute_basis(cfg, k)).collect::<Result<_>>()?;
            match cfg.format {
                Format::Json => json(cfg, &docs),
                Format::Text => blocks(&docs, |d| {
                    let mut s = format!("k={} space={} rho={}: {} classes\n", d.k, d.space, d.rho, d.names.len());
                    for ((name, level), class) in d.names.iter().zip(&d.levels).zip(&d.classes) {
                        let _ = writeln!(s, "  {name:<24} level {:<6} {class}", level.to_string());
                    }
                    s
                }),
                Format::Csv => {
                    let mut out = String::from("k,space,rho,name,level,class\n");
                    for d in &docs {
                        for ((name, level), class) in d.names.iter().zip(&d.levels).zip(&d.classes) {
                            let _ = writeln!(
                                out,
                                "{},{},{},{},{},{}",
                                d.k,
                                d.space,
                                d.rho,
                                csv_field(name),
                                level,
                                csv_field(&class.to_string())
                            );
                        }
                    }
                    out
                }
                Format::Latex => return Err(unsupported(cfg)),
            }
        }
        CommandKind::Gamma => {
            let docs: Vec<GammaTable> = cfg.ks.iter().map(|&k| compute_gamma(cfg, k)).collect::<Result<_>>()?;
            let index = |t: &GammaTable, j: usize| &t.offset + Rational::from_integer((3 * j).into());
            match cfg.format {
                Format::Json => json(cfg, &docs),
                Format::Text => blocks(&docs, |t| {
                    let mut s = format!("k={}: gamma_(k,i) for i in {} + 3Z\n", t.k, t.offset);
                    for (j, v) in t.values.iter().enumerate() {
                        let _ = writeln!(s, "  i={:<8} {v}", index(t, j).to_string());
                    }
                    s
                }),
                Format::Csv => {
                    let mut out = String::from("k,i,gamma\n");
                    for t in &docs {
                        for (j, v) in t.values.iter().enumerate() {
                            let _ = writeln!(out, "{},{},{v}", t.k, index(t, j));
                        }
                    }
                    out
                }
                Format::Latex => return Err(unsupported(cfg)),
            }
        }
        CommandKind::Hodge => {
            let docs: Vec<HodgeTable> = cfg.ks.iter().map(|&k| compute_hodge(cfg, k)).collect::<Result<_>>()?;
            render_tables(cfg, &docs)?
        }
        CommandKind::Tilde => {
            let docs: Vec<HodgeTable> = cfg.ks.iter().map(|&k| compute_tilde(cfg, k)).collect::<Result<_>>()?;
            render_tables(cfg, &docs)?
        }
        CommandKind::Decomp => {
            let docs: Vec<DecompDoc> = cfg.ks.iter().map(|&k| compute_decomp(cfg, k)).collect::<Result<_>>()?;
            match cfg.format {
                Format::Json => json(cfg, &docs),
                Format::Text => blocks(&docs, |d| {
                    let mut s = format!(
                        "n={} k={}: regular rank {}, irregularity {}\n",
                        d.n, d.k, d.regular_rank, d.irregularity
                    );
                    for e in &d.exponents {
                        let _ = writeln!(s, "  exp(c t^{}) x{}  c = {}", d.n + 1, e.multiplicity, zeta_polynomial(&e.coefficients));
                    }
                    s
                }),
                Format::Csv => {
                    let mut out = String::from("n,k,exponent,multiplicity\n");
                    for d in &docs {
                        let _ = writeln!(out, "{},{},0,{}", d.n, d.k, d.regular_rank);
                        for e in &d.exponents {
                            let _ = writeln!(
                                out,
                                "{},{},{},{}",
                                d.n,
                                d.k,
                                csv_field(&zeta_polynomial(&e.coefficients)),
                                e.multiplicity
                            );
                        }
                    }
                    out
                }
                Format::Latex => return Err(unsupported(cfg)),
            }
        }
        CommandKind::Verify => {
            let report = compute_verify(cfg)?;
            ok = report.passed();
            match cfg.format {
                Format::Json => serde_json::to_string(&report).expect("report serializes") + "\n",
                Format::Text => report.to_string(),
                Format::Csv => {
                    let mut out = String::from("k,check,name,passed,expected,got\n");
                    for r in &report.results {
                        for c in &r.checks {
                            let _ = writeln!(
                                out,
                                "{},{},{},{},{},{}",
                                r.k,
                                c.id,
                                csv_field(&c.name),
                                c.passed,
                                csv_field(&c.expected),
                                csv_field(&c.got)
                            );
                        }
                    }
                    out
                }
                Format::Latex => return Err(unsupported(cfg)),
            }
        }
    };
    Ok((out, ok))
}

/// Parses `args` (including the program name), runs, and writes to the
/// given streams. Returns the process exit code.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok((out, ok)) => {
            if stdout.write_all(out.as_bytes()).is_err() {
                return 1;
            }
            if ok {
                0
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ! {
    let code = execute(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code)
}
