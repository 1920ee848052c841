//! Irregular Hodge numbers of `H^1(A^1, Sym^k Ai)`, the levels of the
//! filtration `G` on the monomial bases, pole orders of the compactified
//! forms, and a cross-check of all of these against each other.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::rational::{from_usize, int, rat};
use crate::arith::Rational;
use crate::connection::{kprime, omega_level, omega_range_end};
use crate::error::{Error, Result};
use crate::moments::{h1_dims, rho_preimage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "Ai")]
    Ai,
    #[serde(rename = "Ai-mid")]
    AiMid,
    #[serde(rename = "Ai-tilde-mid")]
    AiTildeMid,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ai => "Ai",
            Family::AiMid => "Ai-mid",
            Family::AiTildeMid => "Ai-tilde-mid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeEntry {
    #[serde(with = "crate::arith::rational::serde_str")]
    pub p: Rational,
    #[serde(with = "crate::arith::rational::serde_str")]
    pub q: Rational,
    pub h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeTable {
    pub k: usize,
    pub family: Family,
    pub weight: usize,
    /// Sorted by `p`, then `q`.
    pub entries: Vec<HodgeEntry>,
}

impl HodgeTable {
    fn new(k: usize, family: Family, mut entries: Vec<HodgeEntry>) -> Self {
        entries.sort_by(|a, b| a.p.cmp(&b.p).then_with(|| a.q.cmp(&b.q)));
        Self {
            k,
            family,
            weight: k + 1,
            entries,
        }
    }

    /// Least common multiple of the denominators of all `p`.
    pub fn denominator_bound(&self) -> usize {
        self.entries.iter().fold(1usize, |acc, e| {
            let d: usize = e.p.denom().try_into().expect("small denominator");
            acc.lcm(&d)
        })
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.h).sum()
    }

    /// `p -> sum of h`.
    pub fn p_multiset(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.p.clone()).or_default() += e.h;
        }
        out
    }

    /// Whether the `(p, q)` multiset is invariant under `p <-> q`.
    pub fn is_symmetric(&self) -> bool {
        let mut fwd: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
        let mut rev: BTreeMap<(Rational, Rational), usize> = BTreeMap::new();
        for e in &self.entries {
            *fwd.entry((e.p.clone(), e.q.clone())).or_default() += e.h;
            *rev.entry((e.q.clone(), e.p.clone())).or_default() += e.h;
        }
        fwd == rev
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,family,p,q,h\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{},{}", self.k, self.family, e.p, e.q, e.h);
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{ccc}\n$p$ & $q$ & $h^{p,q}$ \\\\\n\\hline\n");
        for e in &self.entries {
            let _ = writeln!(out, "{} & {} & {} \\\\", latex_rational(&e.p), latex_rational(&e.q), e.h);
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

impl fmt::Display for HodgeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}, {}, weight {}", self.k, self.family, self.weight)?;
        if self.entries.is_empty() {
            return writeln!(f, "(empty)");
        }
        writeln!(f, "{:>6} {:>6} {:>3}", "p", "q", "h")?;
        for e in &self.entries {
            writeln!(f, "{:>6} {:>6} {:>3}", e.p.to_string(), e.q.to_string(), e.h)?;
        }
        Ok(())
    }
}

fn latex_rational(x: &Rational) -> String {
    if x.is_integer() {
        format!("${x}$")
    } else {
        format!("$\\frac{{{}}}{{{}}}$", x.numer(), x.denom())
    }
}

fn entry(p: Rational, q: Rational) -> HodgeEntry {
    HodgeEntry { p, q, h: 1 }
}

/// Hodge numbers of `H^1(A^1, Sym^k Ai)` and of its middle part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeNumbers {
    pub full: HodgeTable,
    pub mid: HodgeTable,
}

pub fn hodge_numbers(k: usize) -> Result<HodgeNumbers> {
    if k < 2 {
        return Err(Error::Domain(format!("Hodge numbers need k >= 2, got {k}")));
    }
    let kp = kprime(k);
    let w = from_usize(k + 1);
    let third = |i: usize| rat((k + 2 * i) as i64, 3);
    let mut pure = Vec::new();
    let mut extra = None;
    if k % 2 == 1 {
        for i in 1..=kp + 1 {
            pure.push(entry(third(i), &w - third(i)));
        }
    } else {
        let pairs = if k % 4 == 2 { kp / 2 } else { (kp - 1) / 2 };
        for i in 1..=pairs {
            let low = third(i);
            let high = &w - &low;
            pure.push(entry(low.clone(), high.clone()));
            pure.push(entry(high, low));
        }
        if k.is_multiple_of(4) {
            let p = from_usize(k / 2 + 1);
            extra = Some(entry(p.clone(), p));
        }
    }
    let mid = HodgeTable::new(k, Family::AiMid, pure.clone());
    pure.extend(extra);
    Ok(HodgeNumbers {
        full: HodgeTable::new(k, Family::Ai, pure),
        mid,
    })
}

/// `sum_p h t^p`, with terms in increasing `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgePolynomial {
    pub terms: Vec<(Rational, usize)>,
}

impl fmt::Display for HodgePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (p, h)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let coeff = if *h == 1 { String::new() } else { h.to_string() };
            if p.is_zero() {
                write!(f, "{}", h)?;
            } else if p.is_one() {
                write!(f, "{coeff}t")?;
            } else if p.is_integer() && *p > Rational::zero() {
                write!(f, "{coeff}t^{p}")?;
            } else {
                write!(f, "{coeff}t^{{{p}}}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for HodgePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn hodge_polynomial(table: &HodgeTable) -> HodgePolynomial {
    HodgePolynomial {
        terms: table.p_multiset().into_iter().collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GFamily {
    Ai,
    LTwist,
    Tilde,
}

impl fmt::Display for GFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GFamily::Ai => "ai",
            GFamily::LTwist => "l-twist",
            GFamily::Tilde => "tilde",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GLevelMultiset {
    pub k: usize,
    pub which: GFamily,
    /// Ascending, with repetition.
    #[serde(with = "crate::arith::rational::serde_vec")]
    pub levels: Vec<Rational>,
}

impl GLevelMultiset {
    pub fn counts(&self) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for l in &self.levels {
            *out.entry(l.clone()).or_default() += 1;
        }
        out
    }

    pub fn multiplicity(&self, level: &Rational) -> usize {
        self.levels.iter().filter(|l| *l == level).count()
    }
}

/// Level of `omega^-_i` in the twisted cohomology.
pub fn twisted_omega_level(k: usize, i: usize) -> Rational {
    from_usize(k + 1) - rat((k + 2 * i + 1) as i64, 3)
}

/// Level of `eta^-_j` in the twisted cohomology.
pub fn twisted_eta_level(k: usize, j: usize) -> Rational {
    from_usize(k + 1) - rat((k + j + 1) as i64, 3)
}

pub fn g_levels(k: usize, which: GFamily) -> Result<GLevelMultiset> {
    if k < 2 {
        return Err(Error::Domain(format!("G-levels need k >= 2, got {k}")));
    }
    let top = omega_range_end(k);
    let ai = (1..=top).map(|i| omega_level(k, i));
    let twisted = (1..=top)
        .map(|i| twisted_omega_level(k, i))
        .chain((0..=k).map(|j| twisted_eta_level(k, j)));
    let mut levels: Vec<Rational> = match which {
        GFamily::Ai => ai.collect(),
        GFamily::LTwist => twisted.collect(),
        GFamily::Tilde => ai.chain(twisted).collect(),
    };
    levels.sort();
    Ok(GLevelMultiset { k, which, levels })
}

/// Graded dimensions of the irregular Hodge filtration on the middle
/// cohomology of `Sym^k` of the `mu_3`-extended Airy module, for even `k`.
/// Level `p - eps/3` carries the `eps`-isotypic contribution.
pub fn tilde_mid_hodge(k: usize) -> Result<HodgeTable> {
    if k % 2 == 1 {
        return Err(Error::Domain(format!("tilde table needs even k, got {k}")));
    }
    if k == 2 {
        return Err(Error::Domain(
            "k = 2 is excluded: the graded dimensions sum to 4 but the cohomology has dimension 3".into(),
        ));
    }
    if k < 4 {
        return Err(Error::Domain(format!("tilde table needs k >= 4, got {k}")));
    }
    let half = (k / 2) as i64;
    let w = from_usize(k + 1);
    let mut entries = Vec::new();
    for eps in 0..3usize {
        // rho_eps takes values in [floor((k+eps)/3), floor((2k+eps)/3)].
        for p in 0..=(k as i64 + 2) {
            let h = match (eps, p) {
                (0, p) if p == half || p == half + 1 => 1,
                (e, p) if e != 0 && p == half + 1 => 1,
                _ => rho_preimage(k, eps, p - 1),
            };
            if h > 0 {
                let level = int(p) - rat(eps as i64, 3);
                entries.push(HodgeEntry {
                    q: &w - &level,
                    p: level,
                    h,
                });
            }
        }
    }
    Ok(HodgeTable::new(k, Family::AiTildeMid, entries))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoleVariant {
    Plain,
    Twisted,
    OddSimple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleLevel {
    #[serde(with = "crate::arith::rational::serde_str")]
    pub m: Rational,
    pub admissible: bool,
    #[serde(with = "crate::arith::rational::serde_str")]
    pub f_level: Rational,
}

/// Pole order `m` along the boundary of the compactified form attached to
/// `(r, nu)`, whether the construction applies, and the resulting level
/// `k + 1 - m`.
pub fn yu_pole_level(k: usize, r: usize, nu: usize, variant: PoleVariant) -> Result<PoleLevel> {
    if nu > k {
        return Err(Error::Domain(format!("nu = {nu} exceeds k = {k}")));
    }
    if r == 0 && variant != PoleVariant::Twisted {
        return Err(Error::Domain("r must be >= 1 for the untwisted forms".into()));
    }
    let (numer, admissible) = match variant {
        PoleVariant::Plain => (k + 2 * r + nu, k >= 4 * r + 2 * nu),
        PoleVariant::Twisted => (k + 2 * r + nu + 1, k >= 4 * r + 2 * nu + 2),
        PoleVariant::OddSimple => (k + 2 * r + nu, k % 2 == 1 && nu == 0 && r <= kprime(k) + 1),
    };
    let m = rat(numer as i64, 3);
    Ok(PoleLevel {
        f_level: from_usize(k + 1) - &m,
        m,
        admissible,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: char,
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KReport {
    pub k: usize,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub results: Vec<KReport>,
    pub failures: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            for c in &r.checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                write!(f, "{tag} k={:<3} ({}) {}", r.k, c.id, c.name)?;
                if !c.passed {
                    write!(f, ": expected {}, got {}", c.expected, c.got)?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "{} failure(s)", self.failures)
    }
}

fn fmt_multiset(m: &BTreeMap<Rational, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(l, c)| format!("{l}:{c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn check<T: PartialEq + fmt::Display>(id: char, name: &'static str, expected: T, got: T) -> Check {
    Check {
        id,
        name: name.into(),
        passed: expected == got,
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

fn multiset_check(
    id: char,
    name: &'static str,
    expected: BTreeMap<Rational, usize>,
    got: BTreeMap<Rational, usize>,
) -> Check {
    Check {
        id,
        name: name.into(),
        passed: expected == got,
        expected: fmt_multiset(&expected),
        got: fmt_multiset(&got),
    }
}

fn above(m: BTreeMap<Rational, usize>, bound: &Rational) -> BTreeMap<Rational, usize> {
    m.into_iter().filter(|(l, _)| l > bound).collect()
}

fn verify_one(k: usize) -> Result<KReport> {
    let tables = hodge_numbers(k)?;
    let dims = h1_dims(2, k)?;
    let mut checks = Vec::new();

    let mut symmetric = tables.full.is_symmetric() && tables.mid.is_symmetric();
    let tilde = if k.is_multiple_of(2) && k >= 4 { Some(tilde_mid_hodge(k)?) } else { None };
    if let Some(t) = &tilde {
        symmetric &= t.is_symmetric();
    }
    checks.push(check('a', "Hodge symmetry", true, symmetric));
    checks.push(check('b', "total of Ai table is dim H^1", dims.all, tables.full.total()));
    checks.push(check('b', "total of Ai-mid table is dim H^1_mid", dims.mid, tables.mid.total()));

    if k % 2 == 1 {
        checks.push(multiset_check(
            'c',
            "Hodge levels equal G-levels",
            g_levels(k, GFamily::Ai)?.counts(),
            tables.full.p_multiset(),
        ));
    }

    let bound = from_usize(k / 2 + 1);
    if let Some(t) = &tilde {
        checks.push(multiset_check(
            'd',
            "tilde table matches G-levels above k/2+1",
            above(g_levels(k, GFamily::Tilde)?.counts(), &bound),
            above(t.p_multiset(), &bound),
        ));
    }

    if k.is_multiple_of(2) {
        let mut expected = BTreeMap::new();
        for i in (1..).take_while(|i| 4 * i < k) {
            *expected.entry(omega_level(k, i)).or_default() += 1;
        }
        checks.push(multiset_check(
            'e',
            "Ai-mid levels above k/2+1 are the omega levels",
            expected,
            above(tables.mid.p_multiset(), &bound),
        ));
    }

    let mut bad: Vec<String> = Vec::new();
    let mut probe = |what: String, r: usize, nu: usize, v: PoleVariant, level: Rational| -> Result<()> {
        let y = yu_pole_level(k, r, nu, v)?;
        if !y.admissible || y.f_level != level {
            bad.push(what);
        }
        Ok(())
    };
    if k.is_multiple_of(2) {
        for i in 1..=k / 4 {
            probe(format!("omega_{i}"), i, 0, PoleVariant::Plain, omega_level(k, i))?;
        }
        for i in 1..=kprime(k) / 2 {
            probe(format!("omega^-_{i}"), i, 0, PoleVariant::Twisted, twisted_omega_level(k, i))?;
        }
        for j in 0..=kprime(k) {
            probe(format!("eta^-_{j}"), 0, j, PoleVariant::Twisted, twisted_eta_level(k, j))?;
        }
    } else {
        for i in 1..=kprime(k) + 1 {
            probe(format!("omega_{i}"), i, 0, PoleVariant::OddSimple, omega_level(k, i))?;
        }
    }
    checks.push(Check {
        id: 'f',
        name: "pole orders admissible with matching levels".into(),
        passed: bad.is_empty(),
        expected: "none".into(),
        got: if bad.is_empty() { "none".into() } else { bad.join(", ") },
    });
    Ok(KReport { k, checks })
}

/// Runs all consistency checks for each `k`, in parallel, reporting in the
/// order given.
pub fn verify(ks: &[usize]) -> Result<VerifyReport> {
    let results: Vec<KReport> = ks.par_iter().map(|&k| verify_one(k)).collect::<Result<_>>()?;
    let failures = results
        .iter()
        .flat_map(|r| &r.checks)
        .filter(|c| !c.passed)
        .count();
    Ok(VerifyReport { results, failures })
}
