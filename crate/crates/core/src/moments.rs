//! Closed-form invariants of `Sym^k Ai_n`: the regular-rank count `S_{n,k}`,
//! irregularity, dimension formulas, the formal decomposition at infinity,
//! and the combinatorics of the Fourier-side modules `M_{k,eps}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{binomial, from_usize, int, rat};
use crate::arith::{Polynomial, Rational};
use crate::connection::compositions;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Divisors of `n` in increasing order.
fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// The `n`-th cyclotomic polynomial, by exact division of `x^n - 1` by
/// `Phi_d` for every proper divisor `d`.
pub fn cyclotomic(n: usize) -> Polynomial {
    assert!(n > 0, "cyclotomic polynomial of order zero");
    let mut p = Polynomial::from_coeffs(
        std::iter::once(int(-1))
            .chain(std::iter::repeat_n(Rational::zero(), n - 1))
            .chain(std::iter::once(int(1))),
    );
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let (q, r) = p.div_rem(&cyclotomic(d));
        assert!(r.is_zero(), "Phi_{d} does not divide x^{n} - 1");
        p = q;
    }
    p
}

fn rank_of(n: usize, k: usize) -> BigInt {
    binomial((n - 1 + k) as u64, k as u64)
}

fn check_cap(n: usize, k: usize, limits: &Limits) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let size: u128 = rank_of(n, k).try_into().unwrap_or(u128::MAX);
    if size > limits.enumeration_cap {
        return Err(Error::SizeLimit {
            what: "composition count",
            size,
            cap: limits.enumeration_cap,
        });
    }
    Ok(size as usize)
}

/// Reduction of integer polynomials modulo a monic integer polynomial.
struct CyclotomicReducer {
    n: usize,
    /// `Phi_n` coefficients, ascending, monic.
    phi: Vec<i64>,
}

impl CyclotomicReducer {
    fn new(n: usize) -> Self {
        let phi = cyclotomic(n)
            .to_dense()
            .iter()
            .map(|c| c.to_integer().to_i64().expect("cyclotomic coefficient"))
            .collect();
        Self { n, phi }
    }

    fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// `sum_i a_i x^i mod Phi_n`, for `a` indexed by exponent `0..n`.
    fn reduce(&self, a: &[u32]) -> Vec<i64> {
        let mut c: Vec<i64> = a.iter().map(|&v| v as i64).collect();
        c.resize(self.n, 0);
        let d = self.degree();
        for top in (d..c.len()).rev() {
            let lead = c[top];
            if lead == 0 {
                continue;
            }
            for (i, &p) in self.phi.iter().enumerate() {
                c[top - d + i] -= lead * p;
            }
        }
        c.truncate(d);
        c
    }
}

/// `S_{n,k}`: compositions `a` of `k` into `n` parts with
/// `sum_i a_i zeta_n^i = 0`, i.e. `sum_i a_i x^i ≡ 0 mod Phi_n`.
pub fn s_nk(n: usize, k: usize) -> Result<usize> {
    s_nk_with(n, k, &Limits::default())
}

pub fn s_nk_with(n: usize, k: usize, limits: &Limits) -> Result<usize> {
    check_cap(n, k, limits)?;
    let red = CyclotomicReducer::new(n);
    Ok(compositions(n, k)
        .iter()
        .filter(|a| red.reduce(a).iter().all(|&c| c == 0))
        .count())
}

/// `irr(n, k) = (n+1)/n * (binom(n-1+k, k) - S_{n,k})`.
pub fn irr(n: usize, k: usize) -> Result<Rational> {
    irr_with(n, k, &Limits::default())
}

pub fn irr_with(n: usize, k: usize, limits: &Limits) -> Result<Rational> {
    let s = s_nk_with(n, k, limits)?;
    let total = Rational::from_integer(rank_of(n, k));
    Ok(rat((n + 1) as i64, n as i64) * (total - from_usize(s)))
}

/// `dim H^1` and `dim H^1_mid` of `Sym^k Ai_n` over the affine line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Dims {
    pub all: usize,
    pub mid: usize,
}

/// `all = binom(k+n-1, k)/n - (n+1)/n S_{n,k}`; `mid` drops `S_{n,k}` when
/// `n | k` (odd `n`) or `2n | k` (even `n`).
pub fn h1_dims(n: usize, k: usize) -> Result<H1Dims> {
    h1_dims_with(n, k, &Limits::default())
}

pub fn h1_dims_with(n: usize, k: usize, limits: &Limits) -> Result<H1Dims> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let s = s_nk_with(n, k, limits)?;
    let all = Rational::from_integer(rank_of(n, k)) / from_usize(n)
        - rat((n + 1) as i64, n as i64) * from_usize(s);
    if !all.is_integer() || all < Rational::zero() {
        return Err(Error::Inconsistency(format!(
            "dimension formula gives {all} for n={n}, k={k}"
        )));
    }
    let all = all.to_integer().to_usize().expect("dimension fits usize");
    let period = if n % 2 == 1 { n } else { 2 * n };
    let mid = if k.is_multiple_of(period) { all - s } else { all };
    Ok(H1Dims { all, mid })
}

/// Formal type of `Sym^k Ai_n` at infinity: the exponential factors
/// `exp(c t^{n+1})`, each `c` stored as its reduced residue modulo `Phi_n`,
/// plus the rank of the regular part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMultiset {
    pub n: usize,
    pub k: usize,
    /// Residue coefficients (ascending powers of `zeta_n`) -> multiplicity.
    pub entries: BTreeMap<Vec<Rational>, usize>,
    pub regular_rank: usize,
}

impl ExponentMultiset {
    pub fn total(&self) -> usize {
        self.regular_rank + self.entries.values().sum::<usize>()
    }

    /// For `n = 2` each exponent is a rational number.
    pub fn rational_exponents(&self) -> Option<BTreeMap<Rational, usize>> {
        if self.n != 2 {
            return None;
        }
        Some(
            self.entries
                .iter()
                .map(|(c, m)| (c.first().cloned().unwrap_or_else(Rational::zero), *m))
                .collect(),
        )
    }
}

/// Multiset of `-n (sum_i a_i zeta_n^i) / (n+1)` over compositions with a
/// nonzero sum, and the number `S_{n,k}` of compositions with a zero sum.
pub fn formal_decomposition(n: usize, k: usize) -> Result<ExponentMultiset> {
    formal_decomposition_with(n, k, &Limits::default())
}

pub fn formal_decomposition_with(n: usize, k: usize, limits: &Limits) -> Result<ExponentMultiset> {
    let size = check_cap(n, k, limits)?;
    let red = CyclotomicReducer::new(n);
    let scale = rat(-(n as i64), (n + 1) as i64);
    let mut entries: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    let mut regular = 0;
    for a in compositions(n, k) {
        let r = red.reduce(&a);
        if r.iter().all(|&c| c == 0) {
            regular += 1;
            continue;
        }
        let key: Vec<Rational> = r.iter().map(|&c| int(c) * &scale).collect();
        *entries.entry(key).or_default() += 1;
    }
    let out = ExponentMultiset {
        n,
        k,
        entries,
        regular_rank: regular,
    };
    if out.total() != size {
        return Err(Error::Inconsistency(format!(
            "formal decomposition has total rank {} instead of {size}",
            out.total()
        )));
    }
    Ok(out)
}

fn check_eps(eps: usize) -> Result<()> {
    if eps > 2 {
        return Err(Error::Domain(format!("epsilon must be 0, 1 or 2, got {eps}")));
    }
    Ok(())
}

/// Domain of `rho_eps`: `j in [0, k]` with `k + j + eps ≢ 0 mod 3`.
pub fn rho_domain(k: usize, eps: usize) -> impl Iterator<Item = usize> {
    (0..=k).filter(move |j| !(k + j + eps).is_multiple_of(3))
}

/// `#{j in dom(rho_eps) : floor((k + j + eps)/3) = p}`.
pub fn rho_preimage(k: usize, eps: usize, p: i64) -> usize {
    rho_domain(k, eps)
        .filter(|j| ((k + j + eps) / 3) as i64 == p)
        .count()
}

/// `#{j in [0, k] : k + j ≡ eps' - eps mod 3}`.
pub fn psi_eigenspace_dim(k: usize, eps: usize, eps_prime: usize) -> usize {
    let target = (3 + eps_prime % 3 - eps % 3) % 3;
    (0..=k).filter(|j| (k + j) % 3 == target).count()
}

/// Rank, singular points and nearby/vanishing-cycle dimensions of `M_{k,eps}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MkInvariants {
    pub k: usize,
    pub epsilon: usize,
    pub rank: usize,
    #[serde(with = "crate::arith::rational::serde_vec")]
    pub singular_points: Vec<Rational>,
    pub nu: usize,
    pub psi_unit_dim: usize,
    pub phi_unit_dim: usize,
}

/// Closed-form rank of `M_{k,eps}` by residues of `k` mod 3.
fn rank_closed_form(k: usize, eps: usize) -> usize {
    let f = k / 3;
    match (eps, k % 3) {
        (0, 0) => 2 * f,
        (0, _) => 2 * (f + 1),
        (_, 2) => 2 * (f + 1),
        (_, _) => 2 * f + 1,
    }
}

pub fn mk_invariants(k: usize, eps: usize) -> Result<MkInvariants> {
    check_eps(eps)?;
    if k % 2 == 1 || k < 2 {
        return Err(Error::Domain(format!("M_(k,eps) needs even k >= 2, got {k}")));
    }
    let counted = (0..=k).filter(|j| !(k + j + eps).is_multiple_of(3)).count();
    let rank = rank_closed_form(k, eps);
    if counted != rank {
        return Err(Error::Inconsistency(format!(
            "rank of M_({k},{eps}): count {counted} vs closed form {rank}"
        )));
    }
    let singular_points = (0..=k)
        .map(|j| rat(2 * (2 * j as i64 - k as i64), 3))
        .collect();
    let nu = (0..=k).filter(|j| (k + j) % 3 == eps).count();
    let (psi_unit_dim, phi_unit_dim) = if eps == 0 { (rank, 1) } else { (rank - 1, 0) };
    Ok(MkInvariants {
        k,
        epsilon: eps,
        rank,
        singular_points,
        nu,
        psi_unit_dim,
        phi_unit_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), Polynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), Polynomial::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), Polynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), Polynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), Polynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn s_nk_examples() {
        for k in 0..12 {
            assert_eq!(s_nk(2, k).unwrap(), usize::from(k % 2 == 0), "k={k}");
        }
        assert_eq!(s_nk(3, 3).unwrap(), 1);
        assert_eq!(s_nk(2, 3).unwrap(), 0);
    }

    /// Independent count for n = 3: a_0 + a_1 w + a_2 w^2 = 0 iff all equal.
    #[test]
    fn s_3k_is_divisibility_indicator() {
        for k in 0..15 {
            assert_eq!(s_nk(3, k).unwrap(), usize::from(k % 3 == 0));
        }
    }

    /// For n = 4: a_0 - a_2 + i(a_1 - a_3) = 0.
    #[test]
    fn s_4k_by_pairs() {
        for k in 0..12usize {
            let expect = if k % 2 == 1 { 0 } else { k / 2 + 1 };
            assert_eq!(s_nk(4, k).unwrap(), expect, "k={k}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let tiny = Limits {
            enumeration_cap: 5,
            ..Limits::default()
        };
        assert!(matches!(s_nk_with(3, 3, &tiny), Err(Error::SizeLimit { .. })));
        assert!(matches!(s_nk(1, 3), Err(Error::InvalidOrder(1))));
    }

    #[test]
    fn irregularity() {
        for k in 1..20 {
            assert_eq!(irr(2, k).unwrap(), int(3 * ((k as i64 + 1) / 2)));
        }
        assert_eq!(irr(2, 3).unwrap(), int(6));
        assert_eq!(irr(3, 3).unwrap(), int(12));
    }

    #[test]
    fn dims() {
        assert_eq!(h1_dims(2, 5).unwrap(), H1Dims { all: 3, mid: 3 });
        assert_eq!(h1_dims(2, 4).unwrap(), H1Dims { all: 1, mid: 0 });
        assert_eq!(h1_dims(3, 3).unwrap(), H1Dims { all: 2, mid: 1 });
        for k in 1..40usize {
            let kp = (k - 1) / 2;
            let all = if k % 2 == 1 { kp + 1 } else { kp };
            let mid = if k % 4 == 0 { all - 1 } else { all };
            assert_eq!(h1_dims(2, k).unwrap(), H1Dims { all, mid });
        }
    }

    #[test]
    fn decomposition_n2() {
        let d = formal_decomposition(2, 3).unwrap();
        assert_eq!(d.regular_rank, 0);
        let ex = d.rational_exponents().unwrap();
        let expect: BTreeMap<Rational, usize> =
            (0..=3).map(|j| (rat(2 * (2 * j - 3), 3), 1)).collect();
        assert_eq!(ex, expect);

        let d = formal_decomposition(2, 4).unwrap();
        assert_eq!(d.regular_rank, 1);
        let expect: BTreeMap<Rational, usize> = (0..=4)
            .filter(|&j| j != 2)
            .map(|j| (rat(2 * (2 * j - 4), 3), 1))
            .collect();
        assert_eq!(d.rational_exponents().unwrap(), expect);

        let d = formal_decomposition(2, 2).unwrap();
        assert_eq!(d.regular_rank, 1);
        assert_eq!(d.entries.len(), 2);
    }

    #[test]
    fn decomposition_totals() {
        for (n, k) in [(3, 4), (4, 5), (5, 3), (6, 4)] {
            let d = formal_decomposition(n, k).unwrap();
            assert_eq!(d.regular_rank, s_nk(n, k).unwrap());
            assert_eq!(d.total(), rank_of(n, k).to_usize().unwrap());
        }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_preimage(6, 0, 2), 2);
        assert_eq!(rho_preimage(6, 1, 4), 1);
        assert_eq!(rho_preimage(6, 0, 0), 0);
        for k in 1..30 {
            for eps in 0..3 {
                for p in -2..30 {
                    assert!(rho_preimage(k, eps, p) <= 2);
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_eigenspace_dim(6, 0, 0), 3);
        assert_eq!(psi_eigenspace_dim(6, 1, 1), 3);
        for k in 1..20 {
            for eps in 0..3 {
                let s: usize = (0..3).map(|e| psi_eigenspace_dim(k, eps, e)).sum();
                assert_eq!(s, k + 1);
            }
        }
    }

    #[test]
    fn mk_examples() {
        let m = mk_invariants(6, 0).unwrap();
        assert_eq!(m.rank, 4);
        assert_eq!((m.psi_unit_dim, m.phi_unit_dim), (4, 1));
        let m = mk_invariants(6, 1).unwrap();
        assert_eq!(m.rank, 5);
        assert_eq!(m.psi_unit_dim, 4);
        let expect: Vec<Rational> = [-4, -8, -4, 0, 4, 8, 4]
            .iter()
            .zip([1, 3, 3, 1, 3, 3, 1])
            .map(|(&a, b)| rat(a, b))
            .collect();
        for eps in 0..3 {
            assert_eq!(mk_invariants(6, eps).unwrap().singular_points, expect);
        }
        assert!(mk_invariants(5, 0).is_err());
        assert!(mk_invariants(6, 3).is_err());
    }
}
