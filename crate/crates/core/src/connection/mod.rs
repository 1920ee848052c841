//! Free `Q[z]`-modules with a connection: the order-`n` Airy module, its
//! symmetric powers, and the square-root twist for `n = 2`.
//!
//! Every module stores the untwisted derivation `d/dz` as one column per
//! generator. A twist `rho` adds `rho / z` to the derivation; it only has a
//! polynomial presentation through the Euler operator `z d/dz`, so twisted
//! modules are studied on the punctured line only.

mod cohomology;

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arith::rational::{from_usize, int, rat};
use crate::arith::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::limits::Limits;

pub use cohomology::{class_rank, h1_dim_bruteforce, reduce_to_basis, BruteForceDim};

/// `k' = floor((k - 1) / 2)`.
pub fn kprime(k: usize) -> usize {
    k.saturating_sub(1) / 2
}

/// Upper end of the index range `[1, k']` used by the `omega` bases:
/// `k' + 1` for odd `k`, `k'` for even `k`.
pub fn omega_range_end(k: usize) -> usize {
    if k % 2 == 1 {
        kprime(k) + 1
    } else {
        kprime(k)
    }
}

/// Where a de Rham class lives, which also fixes its implicit 1-form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// `H^1` over the affine line; classes are `m dz`.
    A1,
    /// `H^1` over the punctured line, computed on the lattice `Q[z]^r`;
    /// classes are `m dz/z`.
    Gm,
    /// Middle cohomology inside `H^1(A^1)`; classes are `m dz`.
    Mid,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::A1 => "a1",
            Space::Gm => "gm",
            Space::Mid => "mid",
        })
    }
}

/// Element of the free module: one polynomial per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    coords: Vec<Polynomial>,
}

impl ModuleElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            coords: vec![Polynomial::zero(); rank],
        }
    }

    /// `c z^deg e_gen`.
    pub fn monomial(rank: usize, gen: usize, c: Rational, deg: usize) -> Self {
        let mut e = Self::zero(rank);
        e.coords[gen] = Polynomial::monomial(c, deg);
        e
    }

    pub fn from_coords(coords: Vec<Polynomial>) -> Self {
        Self { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, gen: usize) -> &Polynomial {
        &self.coords[gen]
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Polynomial::is_zero)
    }

    pub fn add_assign(&mut self, other: &ModuleElement) {
        assert_eq!(self.rank(), other.rank(), "rank mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a = &*a + b;
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coords: self.coords.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplication by `z^m`.
    pub fn shift(&self, m: usize) -> Self {
        Self {
            coords: self.coords.iter().map(|p| p.shift(m)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &ModuleElement) -> Self {
        let mut out = self.clone();
        out.add_assign(&other.scale(c));
        out
    }

    /// Nonzero terms as `(generator, z-degree, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.coords
            .iter()
            .enumerate()
            .flat_map(|(g, p)| p.terms().map(move |(d, c)| (g, d, c)))
    }

    /// Serializable view keyed by the module's generator labels.
    pub fn labeled<'a>(&'a self, module: &'a ConnectionModule) -> LabeledElement<'a> {
        LabeledElement { elem: self, module }
    }
}

/// `{label: coefficient-array}` for the nonzero coordinates, in generator order.
pub struct LabeledElement<'a> {
    elem: &'a ModuleElement,
    module: &'a ConnectionModule,
}

impl Serialize for LabeledElement<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nonzero: Vec<_> = self
            .elem
            .coords
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .collect();
        let mut map = s.serialize_map(Some(nonzero.len()))?;
        for (g, p) in nonzero {
            map.serialize_entry(&self.module.label(g), p)?;
        }
        map.end()
    }
}

impl fmt::Display for LabeledElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, p) in self.elem.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})*{}", self.module.label(g))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Sym^k` of the order-`n` Airy connection, possibly twisted by `rho`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionModule {
    n: usize,
    k: usize,
    twist: Rational,
    exponents: Vec<Vec<u32>>,
    /// `columns[b]` is `d/dz e_b` without the twist term.
    columns: Vec<ModuleElement>,
}

impl ConnectionModule {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn twist(&self) -> &Rational {
        &self.twist
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Exponent vector `a` of generator `v_0^{a_0} ... v_{n-1}^{a_{n-1}}`.
    pub fn exponents(&self, gen: usize) -> &[u32] {
        &self.exponents[gen]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.exponents.iter().position(|e| e == exps)
    }

    /// `u_a` for `n = 2`, otherwise `v^(a_0,...,a_{n-1})`.
    pub fn label(&self, gen: usize) -> String {
        if self.n == 2 {
            format!("u{}", self.exponents[gen][1])
        } else {
            let parts: Vec<String> = self.exponents[gen].iter().map(u32::to_string).collect();
            format!("v^({})", parts.join(","))
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.rank()).map(|g| self.label(g)).collect()
    }

    /// The untwisted derivation column `d/dz e_gen`.
    pub fn derivation_column(&self, gen: usize) -> &ModuleElement {
        &self.columns[gen]
    }

    /// Weight of `z` in the grading for which `d/dz` raises weight by one.
    pub fn z_weight(&self) -> usize {
        self.n
    }

    /// Weight of generator `v^a`: `sum_i i a_i`.
    pub fn generator_weight(&self, gen: usize) -> usize {
        self.exponents[gen]
            .iter()
            .enumerate()
            .map(|(i, &a)| i * a as usize)
            .sum()
    }

    /// Weight of `z^m e_gen`.
    pub fn monomial_weight(&self, gen: usize, m: usize) -> usize {
        self.n * m + self.generator_weight(gen)
    }

    /// Largest weight of a term of `e`, `None` for zero.
    pub fn weight(&self, e: &ModuleElement) -> Option<usize> {
        e.terms().map(|(g, d, _)| self.monomial_weight(g, d)).max()
    }

    /// `d/dz` applied to `e`. Only defined without twist.
    pub fn apply_d(&self, e: &ModuleElement) -> Result<ModuleElement> {
        if !self.twist.is_zero() {
            return Err(Error::Domain(
                "d/dz has no polynomial form on a twisted module".into(),
            ));
        }
        let mut out = ModuleElement::zero(self.rank());
        for (g, p) in e.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            out.coords[g] = &out.coords[g] + &p.derivative();
            for (h, q) in self.columns[g].coords.iter().enumerate() {
                if !q.is_zero() {
                    out.coords[h] = &out.coords[h] + &(p * q);
                }
            }
        }
        Ok(out)
    }

    /// `z d/dz` applied to `e`, including the twist.
    pub fn apply_euler(&self, e: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero(self.rank());
        for (g, p) in e.coords.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let zp = &p.derivative().shift(1) + &p.scale(&self.twist);
            out.coords[g] = &out.coords[g] + &zp;
            let zpoly = p.shift(1);
            for (h, q) in self.columns[g].coords.iter().enumerate() {
                if !q.is_zero() {
                    out.coords[h] = &out.coords[h] + &(&zpoly * q);
                }
            }
        }
        out
    }

    /// Matrix of `z d/dz` on the generators: entry `(a, b)` is the
    /// coefficient of `e_a` in `z d/dz e_b`.
    pub fn euler_matrix(&self) -> Vec<Vec<Polynomial>> {
        let r = self.rank();
        let mut m = vec![vec![Polynomial::zero(); r]; r];
        for b in 0..r {
            let col = self.apply_euler(&ModuleElement::monomial(r, b, Rational::one(), 0));
            for (a, p) in col.coords.into_iter().enumerate() {
                m[a][b] = p;
            }
        }
        m
    }
}

/// Compositions of `k` into `n` parts, lexicographically decreasing.
pub(crate) fn compositions(n: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(n, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

/// The order-`n` Airy connection `d^n/dz^n - z` in companion form:
/// `d v_i = v_{i+1}` for `i < n - 1` and `d v_{n-1} = z v_0`.
pub fn build_airy(n: usize) -> Result<ConnectionModule> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    let exponents: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let columns = (0..n)
        .map(|i| {
            if i + 1 < n {
                ModuleElement::monomial(n, i + 1, Rational::one(), 0)
            } else {
                ModuleElement::monomial(n, 0, Rational::one(), 1)
            }
        })
        .collect();
    Ok(ConnectionModule {
        n,
        k: 1,
        twist: Rational::zero(),
        exponents,
        columns,
    })
}

/// `Sym^k` of the order-`n` Airy connection via the Leibniz rule, with
/// generators `v^a` (`|a| = k`) in decreasing lexicographic order of `a`.
/// For `n = 2` generator `a` is `u_a = v_0^{k-a} v_1^a`.
pub fn build_symk(n: usize, k: usize, rho: &Rational) -> Result<ConnectionModule> {
    build_symk_with(n, k, rho, &Limits::default())
}

pub fn build_symk_with(n: usize, k: usize, rho: &Rational, limits: &Limits) -> Result<ConnectionModule> {
    let base = build_airy(n)?;
    if k == 0 {
        return Err(Error::Domain("symmetric power k must be >= 1".into()));
    }
    let half = rat(1, 2);
    if !rho.is_zero() && (rho != &half || n != 2) {
        return Err(Error::UnsupportedTwist { n, rho: rho.to_string() });
    }
    let size = crate::arith::rational::binomial((n - 1 + k) as u64, k as u64);
    let size_u: u128 = size.try_into().unwrap_or(u128::MAX);
    if size_u > limits.module_cap as u128 {
        return Err(Error::SizeLimit {
            what: "symmetric power rank",
            size: size_u,
            cap: limits.module_cap as u128,
        });
    }
    let exponents = compositions(n, k);
    let index: std::collections::HashMap<&[u32], usize> = exponents
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let r = exponents.len();
    let mut columns = Vec::with_capacity(r);
    for a in &exponents {
        let mut col = ModuleElement::zero(r);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            // a_i v^{a - e_i} * d(v_i), with d(v_i) = sum_l A_{l i} v_l.
            for (l, poly) in base.columns[i].coords.iter().enumerate() {
                if poly.is_zero() {
                    continue;
                }
                let mut b = a.clone();
                b[i] -= 1;
                b[l] += 1;
                let target = index[b.as_slice()];
                col.coords[target] = &col.coords[target] + &poly.scale(&int(ai as i64));
            }
        }
        columns.push(col);
    }
    Ok(ConnectionModule {
        n,
        k,
        twist: rho.clone(),
        exponents,
        columns,
    })
}

/// An ordered family of de Rham classes with their filtration levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub space: Space,
    pub k: usize,
    pub twist: Rational,
    pub names: Vec<String>,
    pub classes: Vec<ModuleElement>,
    pub g_levels: Vec<Rational>,
}

impl CohomologyBasis {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// `omega_i = z^{i-1} u_0 dz`.
pub(crate) fn omega(k: usize, i: usize) -> ModuleElement {
    ModuleElement::monomial(k + 1, 0, Rational::one(), i - 1)
}

/// Level `k + 1 - (k + 2i)/3` of `omega_i`.
pub fn omega_level(k: usize, i: usize) -> Rational {
    from_usize(k + 1) - rat((k + 2 * i) as i64, 3)
}

/// Basis `{omega_i | i in [1, k']}` of `H^1(A^1, Sym^k Ai)`.
pub fn h1_a1_basis(k: usize) -> Result<CohomologyBasis> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let top = omega_range_end(k);
    Ok(CohomologyBasis {
        space: Space::A1,
        k,
        twist: Rational::zero(),
        names: (1..=top).map(|i| format!("omega_{i}")).collect(),
        classes: (1..=top).map(|i| omega(k, i)).collect(),
        g_levels: (1..=top).map(|i| omega_level(k, i)).collect(),
    })
}

/// The monomial basis of `coker(z d/dz)` on `Q[z]^{k+1}` for `n = 2`:
/// `z^{top} u_0, ..., z u_0, u_0, u_1, ..., u_k` with `top = k' + 1` for odd
/// `k` and `k'` for even `k`. Each class is checked against the brute-force
/// cokernel.
///
/// Levels follow the degree grading `deg z = 2/3`, `deg u_a = a/3`:
/// `z^i u_a` sits at `k + 1 - (k + 2i + a + 2 rho)/3`.
pub fn gm_cokernel_basis(k: usize, rho: &Rational) -> Result<CohomologyBasis> {
    gm_cokernel_basis_with(k, rho, &Limits::default())
}

pub fn gm_cokernel_basis_with(k: usize, rho: &Rational, limits: &Limits) -> Result<CohomologyBasis> {
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let module = build_symk_with(2, k, rho, limits)?;
    let r = k + 1;
    let top = omega_range_end(k);
    let suffix = if rho.is_zero() { "" } else { "^-" };
    let level = |i: usize, a: usize| {
        from_usize(k + 1) - (from_usize(k + 2 * i + a) + int(2) * rho) / int(3)
    };
    let mut names = Vec::new();
    let mut classes = Vec::new();
    let mut g_levels = Vec::new();
    for i in (1..=top).rev() {
        names.push(format!("omega{suffix}_{i}"));
        classes.push(ModuleElement::monomial(r, 0, Rational::one(), i));
        g_levels.push(level(i, 0));
    }
    for j in 0..=k {
        names.push(format!("eta{suffix}_{j}"));
        classes.push(ModuleElement::monomial(r, j, Rational::one(), 0));
        g_levels.push(level(0, j));
    }
    let basis = CohomologyBasis {
        space: Space::Gm,
        k,
        twist: rho.clone(),
        names,
        classes,
        g_levels,
    };
    let dim = h1_dim_bruteforce(&module, Space::Gm, limits)?;
    if dim.dim != basis.len() {
        return Err(Error::Inconsistency(format!(
            "G_m cokernel basis has {} classes but brute force gives {}",
            basis.len(),
            dim.dim
        )));
    }
    cohomology::check_independent(&module, &basis, limits)?;
    Ok(basis)
}

/// Residue of a `dz/z` class: the value of its coefficient vector at `z = 0`.
pub fn residue(c: &ModuleElement) -> Vec<Rational> {
    c.coords().iter().map(Polynomial::constant_term).collect()
}

/// Rewrites an `m dz` class as the `dz/z` class `z m dz/z`.
pub fn to_log_form(c: &ModuleElement) -> ModuleElement {
    c.shift(1)
}
