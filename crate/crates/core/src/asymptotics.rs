//! The asymptotic expansion of `2 pi Ai(z) Bi(z)` in `w = 1/z`, its
//! `k/2`-th powers `sum_i gamma_{k,i} w^i`, and the basis of middle
//! cohomology they determine.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{falling, from_usize, int, rat, rising};
use crate::arith::{series_pow, OffsetSeries, Polynomial, Rational};
use crate::connection::{build_symk, h1_a1_basis, omega, omega_level, omega_range_end, ConnectionModule, ModuleElement, Space};
use crate::connection::CohomologyBasis;
use crate::error::{Error, Result};

/// `c_n = (n + 1/2)_{2n} / (54^n n!)`, the Airy asymptotic coefficients.
fn airy_coefficients(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut denom = Rational::one();
    for n in 0..count {
        if n > 0 {
            denom *= from_usize(54 * n);
        }
        out.push(rising(&(from_usize(n) + rat(1, 2)), 2 * n) / &denom);
    }
    out
}

/// `2 pi Ai Bi ~ sqrt(w) sum_j e_j w^{3j}`, from the product of the two
/// Airy expansions. Odd cross terms cancel; this is checked.
pub fn aibi_series(terms: usize) -> Result<OffsetSeries> {
    if terms == 0 {
        return Err(Error::Domain("need at least one series term".into()));
    }
    let c = airy_coefficients(2 * terms + 1);
    let cross = |m: usize| -> Rational {
        let mut s = Rational::zero();
        for a in 0..=m {
            let t = &c[a] * &c[m - a];
            if a % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    };
    for m in (1..=2 * terms).step_by(2) {
        let s = cross(m);
        if !s.is_zero() {
            return Err(Error::Inconsistency(format!("odd cross term {m} is {s}, not zero")));
        }
    }
    let nine_fourths = rat(9, 4);
    let mut scale = Rational::one();
    let mut coeffs = Vec::with_capacity(terms);
    for j in 0..terms {
        coeffs.push(cross(2 * j) * &scale);
        scale *= &nine_fourths;
    }
    OffsetSeries::new(rat(1, 2), int(3), coeffs)
}

/// Determinant by cofactor expansion along the first row.
fn poly_det(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][col] * &poly_det(&minor);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Polynomial coefficients `p_0, ..., p_r` of the operator
/// `sum_j p_j(z) d^j/dz^j` that annihilates the generator `e` of `module`.
fn annihilator(module: &ConnectionModule, e: &ModuleElement) -> Result<Vec<Polynomial>> {
    let r = module.rank();
    let mut derivs = vec![e.clone()];
    for _ in 0..r {
        let next = module.apply_d(derivs.last().expect("nonempty"))?;
        derivs.push(next);
    }
    // Columns are d^j e for j < r; Cramer's rule expresses d^r e in them.
    let matrix = |replace: Option<usize>| -> Vec<Vec<Polynomial>> {
        (0..r)
            .map(|row| {
                (0..r)
                    .map(|col| {
                        let src = if replace == Some(col) { r } else { col };
                        derivs[src].coord(row).clone()
                    })
                    .collect()
            })
            .collect()
    };
    let det = poly_det(&matrix(None));
    if det.is_zero() {
        return Err(Error::Inconsistency("generator is not a cyclic vector".into()));
    }
    let mut coeffs: Vec<Polynomial> = (0..r).map(|j| -&poly_det(&matrix(Some(j)))).collect();
    coeffs.push(det);
    Ok(coeffs)
}

/// Solves `P f = 0` for `f = sum_m e_m z^{alpha - m}`, `e_0 = 1`, where `P`
/// is given by polynomial coefficients of `d^j/dz^j`.
fn solve_at_infinity(op: &[Polynomial], alpha: &Rational, count: usize) -> Result<Vec<Rational>> {
    // Group the terms p_{j,d} z^d d^j by the shift d - j.
    let shifts: Vec<(i64, usize, Rational)> = op
        .iter()
        .enumerate()
        .flat_map(|(j, p)| p.terms().map(move |(d, c)| (d as i64 - j as i64, j, c.clone())))
        .collect();
    let top = shifts.iter().map(|s| s.0).max().expect("nonzero operator");
    // q(t, beta): contribution of shift `top - t` evaluated at z^beta.
    let q = |t: i64, beta: &Rational| -> Rational {
        shifts
            .iter()
            .filter(|(s, _, _)| *s == top - t)
            .map(|(_, j, c)| c * falling(beta, *j))
            .sum()
    };
    let depth = shifts.iter().map(|s| top - s.0).max().unwrap_or(0);
    if !q(0, alpha).is_zero() {
        return Err(Error::Inconsistency(format!("{alpha} is not an indicial root at infinity")));
    }
    let mut e = vec![Rational::one()];
    for m in 1..count {
        let lead = q(0, &(alpha - from_usize(m)));
        if lead.is_zero() {
            return Err(Error::Inconsistency(format!("recurrence degenerates at index {m}")));
        }
        let mut acc = Rational::zero();
        for t in 1..=depth.min(m as i64) {
            let prev = &e[m - t as usize];
            if prev.is_zero() {
                continue;
            }
            acc += q(t, &(alpha - from_usize(m) + int(t))) * prev;
        }
        e.push(-acc / lead);
    }
    Ok(e)
}

/// The same series as [`aibi_series`], obtained instead as the solution of
/// the symmetric square of the Airy equation at infinity with leading term
/// `z^{-1/2}`.
pub fn aibi_series_ode_oracle(terms: usize) -> Result<OffsetSeries> {
    if terms == 0 {
        return Err(Error::Domain("need at least one series term".into()));
    }
    let module = build_symk(2, 2, &Rational::zero())?;
    let op = annihilator(&module, &ModuleElement::monomial(module.rank(), 0, Rational::one(), 0))?;
    let e = solve_at_infinity(&op, &rat(-1, 2), 3 * (terms - 1) + 1)?;
    for (m, v) in e.iter().enumerate() {
        if m % 3 != 0 && !v.is_zero() {
            return Err(Error::Inconsistency(format!("coefficient {m} off the w^3 lattice is {v}")));
        }
    }
    OffsetSeries::new(rat(1, 2), int(3), e.into_iter().step_by(3).collect())
}

/// `gamma_{k,i}` for `i = k/4 + 3j`, `j < values.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaTable {
    pub k: usize,
    #[serde(with = "crate::arith::rational::serde_str")]
    pub offset: Rational,
    #[serde(with = "crate::arith::rational::serde_vec")]
    pub values: Vec<Rational>,
}

impl GammaTable {
    /// `gamma_{k,i}`: zero off the lattice, `None` past the truncation.
    pub fn gamma_at(&self, i: usize) -> Option<Rational> {
        let t = (from_usize(i) - &self.offset) / int(3);
        if t < Rational::zero() || !t.is_integer() {
            return Some(Rational::zero());
        }
        let j: usize = t.to_integer().try_into().ok()?;
        self.values.get(j).cloned()
    }
}

/// Coefficients of `(2 pi Ai Bi)^{k/2}` on the lattice `k/4 + 3 Z_{>=0}`.
pub fn gamma(k: usize, terms: usize) -> Result<GammaTable> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!("gamma needs even k >= 2, got {k}")));
    }
    let power = series_pow(&aibi_series(terms)?, (k / 2) as u32)?;
    if power.coeffs.first() != Some(&Rational::one()) {
        return Err(Error::Inconsistency(format!("gamma_(k,k/4) is not 1 for k={k}")));
    }
    if let Some(j) = power.coeffs.iter().position(|c| *c <= Rational::zero()) {
        return Err(Error::Inconsistency(format!(
            "gamma_(k,i) is not positive at k={k}, i={}",
            power.exponent(j)
        )));
    }
    Ok(GammaTable {
        k,
        offset: power.offset,
        values: power.coeffs,
    })
}

/// Index `k/4` of the class dropped from the middle basis, when `4 | k`.
pub fn mid_quotient_index(k: usize) -> Option<usize> {
    (k >= 4 && k.is_multiple_of(4)).then_some(k / 4)
}

/// Basis of the middle cohomology inside `H^1(A^1, Sym^k Ai)`:
/// `omega_i - gamma_{k,i} omega_{k/4}` for `i != k/4` when `4 | k`, and the
/// full `omega` basis otherwise.
pub fn mid_basis(k: usize) -> Result<CohomologyBasis> {
    let mut basis = h1_a1_basis(k)?;
    basis.space = Space::Mid;
    let Some(q) = mid_quotient_index(k) else {
        return Ok(basis);
    };
    let top = omega_range_end(k);
    let terms = top.saturating_sub(q) / 3 + 2;
    let table = gamma(k, terms)?;
    let anchor = omega(k, q);
    let mut names = Vec::new();
    let mut classes = Vec::new();
    let mut g_levels = Vec::new();
    for i in (1..=top).filter(|&i| i != q) {
        let g = table.gamma_at(i).expect("gamma table covers the omega range");
        if g.is_zero() {
            names.push(format!("omega_{i}"));
            classes.push(omega(k, i));
        } else {
            names.push(format!("omega_{i} - {g} omega_{q}"));
            classes.push(omega(k, i).axpy(&-g, &anchor));
        }
        g_levels.push(omega_level(k, i));
    }
    basis.names = names;
    basis.classes = classes;
    basis.g_levels = g_levels;
    Ok(basis)
}
