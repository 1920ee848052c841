//! Brute-force `H^1` by exact elimination on weight-truncated polynomial
//! modules.
//!
//! Grade `Q[z]^r` by `wt(z) = n`, `wt(v^a) = sum_i i a_i`. Then `d/dz` raises
//! weight by at most one and `z d/dz` by at most `n + 1`. For a cut `D` we
//! take the images of all source monomials of weight `<= 2D`, eliminate with
//! target columns sorted by decreasing weight, and count the target
//! monomials of weight `<= D` that are not pivots. Because the column order
//! puts every weight-`<= D` coordinate after the heavier ones, echelon rows
//! with a light leading column lie entirely in weight `<= D`, so that count
//! is `dim F_D / (image ∩ F_D)`. The cut is doubled until two consecutive
//! counts agree.

use std::collections::HashMap;

use num_traits::Zero;

use super::{CohomologyBasis, ConnectionModule, ModuleElement, Space};
use crate::arith::matrix::{solve_in_span, Echelon, SparseRow};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operator {
    /// `d/dz`, computing `H^1(A^1)`.
    Partial,
    /// `z d/dz` on the lattice, computing `H^1(G_m)`.
    Euler,
}

impl Operator {
    fn for_space(space: Space) -> Self {
        match space {
            Space::A1 | Space::Mid => Operator::Partial,
            Space::Gm => Operator::Euler,
        }
    }

    fn raise(self, module: &ConnectionModule) -> usize {
        match self {
            Operator::Partial => 1,
            Operator::Euler => module.z_weight() + 1,
        }
    }
}

/// Dimension found by brute force and the cut at which it stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceDim {
    pub dim: usize,
    pub truncation_used: usize,
}

pub(crate) struct Truncated<'m> {
    module: &'m ConnectionModule,
    cut: usize,
    col_of: HashMap<(usize, usize), usize>,
    /// Weight of each target column, non-increasing.
    col_weight: Vec<usize>,
    echelon: Echelon,
}

impl<'m> Truncated<'m> {
    fn build(module: &'m ConnectionModule, op: Operator, cut: usize) -> Result<Self> {
        let source_cut = 2 * cut;
        let target_cut = source_cut + op.raise(module);
        let cols = monomials_by_weight(module, target_cut);
        let col_of: HashMap<(usize, usize), usize> = cols
            .iter()
            .enumerate()
            .map(|(i, &(g, m, _))| ((g, m), i))
            .collect();
        let col_weight = cols.iter().map(|&(_, _, w)| w).collect();
        let mut this = Self {
            module,
            cut,
            col_of,
            col_weight,
            echelon: Echelon::new(),
        };
        for (g, m, _) in monomials_by_weight(module, source_cut) {
            let src = ModuleElement::monomial(module.rank(), g, Rational::from_integer(1.into()), m);
            let img = match op {
                Operator::Partial => module.apply_d(&src)?,
                Operator::Euler => module.apply_euler(&src),
            };
            let row = this.encode_unchecked(&img);
            if !this.echelon.insert(row) {
                return Err(Error::Inconsistency(format!(
                    "derivation has a kernel on the truncated module (n={}, k={}, generator {}, z^{m})",
                    module.n(),
                    module.k(),
                    module.label(g)
                )));
            }
        }
        Ok(this)
    }

    fn encode_unchecked(&self, e: &ModuleElement) -> SparseRow {
        let mut row: SparseRow = e
            .terms()
            .map(|(g, m, c)| (self.col_of[&(g, m)], c.clone()))
            .collect();
        row.sort_by_key(|(j, _)| *j);
        row
    }

    fn encode(&self, e: &ModuleElement) -> Result<SparseRow> {
        match self.module.weight(e) {
            Some(w) if w > self.cut => Err(Error::Inconsistency(format!(
                "class of weight {w} exceeds truncation cut {}",
                self.cut
            ))),
            _ => Ok(self.encode_unchecked(e)),
        }
    }

    /// Number of weight-`<= cut` monomials that are not pivots.
    pub(crate) fn dim(&self) -> usize {
        self.col_weight
            .iter()
            .enumerate()
            .filter(|(j, w)| **w <= self.cut && !self.echelon.is_pivot(*j))
            .count()
    }

    pub(crate) fn normal_form(&self, e: &ModuleElement) -> Result<SparseRow> {
        Ok(self.echelon.normal_form(&self.encode(e)?))
    }
}

/// `(generator, z-exponent, weight)` for all monomials of weight `<= cut`,
/// sorted by decreasing weight, then generator index.
fn monomials_by_weight(module: &ConnectionModule, cut: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for g in 0..module.rank() {
        let mut m = 0;
        loop {
            let w = module.monomial_weight(g, m);
            if w > cut {
                break;
            }
            out.push((g, m, w));
            m += 1;
        }
    }
    out.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)));
    out
}

fn initial_cut(module: &ConnectionModule) -> usize {
    3 * (module.k() + 1) + 6
}

fn stabilized<'m>(
    module: &'m ConnectionModule,
    op: Operator,
    min_cut: usize,
    limits: &Limits,
) -> Result<(Truncated<'m>, usize)> {
    let mut cut = initial_cut(module).max(min_cut);
    let mut history: Vec<(usize, usize)> = Vec::new();
    let mut prev: Option<usize> = None;
    loop {
        if cut > limits.truncation_ceiling {
            return Err(Error::StabilityFailure {
                ceiling: limits.truncation_ceiling,
                history,
            });
        }
        let t = Truncated::build(module, op, cut)?;
        let d = t.dim();
        history.push((cut, d));
        if prev == Some(d) {
            return Ok((t, cut));
        }
        prev = Some(d);
        cut *= 2;
    }
}

/// `dim H^1` of `module` over `A^1` (cokernel of `d/dz`) or over `G_m`
/// (cokernel of `z d/dz` on the polynomial lattice).
///
/// A twisted module has no `A^1` presentation; its `A^1` dimension is the
/// `G_m` one.
pub fn h1_dim_bruteforce(module: &ConnectionModule, space: Space, limits: &Limits) -> Result<BruteForceDim> {
    let space = if module.twist().is_zero() { space } else { Space::Gm };
    let (t, cut) = stabilized(module, Operator::for_space(space), 0, limits)?;
    Ok(BruteForceDim {
        dim: t.dim(),
        truncation_used: cut,
    })
}

fn max_weight<'a, I: IntoIterator<Item = &'a ModuleElement>>(module: &ConnectionModule, es: I) -> usize {
    es.into_iter()
        .filter_map(|e| module.weight(e))
        .max()
        .unwrap_or(0)
}

/// Coordinates of the class of `c` in `basis`.
pub fn reduce_to_basis(
    c: &ModuleElement,
    basis: &CohomologyBasis,
    module: &ConnectionModule,
    limits: &Limits,
) -> Result<Vec<Rational>> {
    let op = Operator::for_space(basis.space);
    let w = max_weight(module, basis.classes.iter().chain(std::iter::once(c)));
    let (t, _) = stabilized(module, op, w, limits)?;
    let cols: Vec<SparseRow> = basis
        .classes
        .iter()
        .map(|b| t.normal_form(b))
        .collect::<Result<_>>()?;
    let rhs = t.normal_form(c)?;
    let (x, unique) = solve_in_span(&cols, &rhs);
    match x {
        None => Err(Error::Inconsistency(
            "class is not in the span of the given basis".into(),
        )),
        Some(_) if !unique => Err(Error::Inconsistency(
            "basis classes are linearly dependent in cohomology".into(),
        )),
        Some(x) => Ok(x),
    }
}

/// Rank of the span of `classes` in cohomology.
pub fn class_rank(
    module: &ConnectionModule,
    space: Space,
    classes: &[ModuleElement],
    limits: &Limits,
) -> Result<usize> {
    let w = max_weight(module, classes.iter());
    let (t, _) = stabilized(module, Operator::for_space(space), w, limits)?;
    let mut ech = Echelon::new();
    for c in classes {
        ech.insert(t.normal_form(c)?);
    }
    Ok(ech.rank())
}

pub(crate) fn check_independent(module: &ConnectionModule, basis: &CohomologyBasis, limits: &Limits) -> Result<()> {
    let r = class_rank(module, basis.space, &basis.classes, limits)?;
    if r != basis.len() {
        return Err(Error::Inconsistency(format!(
            "{} classes span only a {r}-dimensional subspace",
            basis.len()
        )));
    }
    Ok(())
}
