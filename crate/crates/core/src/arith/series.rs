//! Truncated formal series with exponents on a shifted lattice
//! `offset + step * {0, 1, 2, ...}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{from_usize, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetSeries {
    #[serde(with = "super::rational::serde_str")]
    pub offset: Rational,
    #[serde(with = "super::rational::serde_str")]
    pub step: Rational,
    /// Coefficient `j` belongs to exponent `offset + j * step`. The length is
    /// the truncation order: later coefficients are unknown, not zero.
    #[serde(with = "super::rational::serde_vec")]
    pub coeffs: Vec<Rational>,
}

impl OffsetSeries {
    pub fn new(offset: Rational, step: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        if step <= Rational::zero() {
            return Err(Error::Domain("series step must be positive".into()));
        }
        Ok(Self { offset, step, coeffs })
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Exponent of coefficient `j`.
    pub fn exponent(&self, j: usize) -> Rational {
        &self.offset + &self.step * from_usize(j)
    }

    /// Coefficient of `x^e`: zero off the lattice, `None` past the truncation.
    pub fn coeff_at(&self, e: &Rational) -> Option<Rational> {
        let t = (e - &self.offset) / &self.step;
        if t < Rational::zero() || !t.is_integer() {
            return Some(Rational::zero());
        }
        let j: usize = t.to_integer().try_into().ok()?;
        self.coeffs.get(j).cloned()
    }

    fn check_step(&self, other: &Self) -> Result<()> {
        if self.step != other.step {
            return Err(Error::StepMismatch {
                left: self.step.to_string(),
                right: other.step.to_string(),
            });
        }
        Ok(())
    }
}

/// Exact Cauchy product. The result keeps `min` of the two truncation orders.
pub fn series_mul(a: &OffsetSeries, b: &OffsetSeries) -> Result<OffsetSeries> {
    a.check_step(b)?;
    let len = a.coeffs.len().min(b.coeffs.len());
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.coeffs.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    Ok(OffsetSeries {
        offset: &a.offset + &b.offset,
        step: a.step.clone(),
        coeffs: out,
    })
}

/// `a^e` for `e >= 1`.
///
/// With an invertible leading coefficient this uses the power recurrence
/// `j a_0 b_j = sum_{i=1}^{j} ((e + 1) i - j) a_i b_{j-i}`; otherwise it
/// falls back to binary powering.
pub fn series_pow(a: &OffsetSeries, e: u32) -> Result<OffsetSeries> {
    if e == 0 {
        return Err(Error::Domain("series_pow needs a positive exponent".into()));
    }
    let offset = &a.offset * Rational::from_integer(e.into());
    let len = a.coeffs.len();
    if len == 0 {
        return Ok(OffsetSeries {
            offset,
            step: a.step.clone(),
            coeffs: Vec::new(),
        });
    }
    let a0 = &a.coeffs[0];
    if a0.is_zero() {
        let mut result: Option<OffsetSeries> = None;
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => series_mul(&r, &base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = series_mul(&base, &base)?;
            }
        }
        return Ok(result.expect("e >= 1"));
    }
    let e_r = Rational::from_integer(e.into());
    let mut b = Vec::with_capacity(len);
    let mut p = Rational::one();
    for _ in 0..e {
        p *= a0;
    }
    b.push(p);
    let a0_inv = a0.recip();
    for j in 1..len {
        let j_r = from_usize(j);
        let mut acc = Rational::zero();
        for i in 1..=j {
            if a.coeffs[i].is_zero() {
                continue;
            }
            let w = (&e_r + Rational::one()) * from_usize(i) - &j_r;
            acc += w * &a.coeffs[i] * &b[j - i];
        }
        b.push(acc * &a0_inv / &j_r);
    }
    Ok(OffsetSeries {
        offset,
        step: a.step.clone(),
        coeffs: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};
    use proptest::prelude::*;

    fn s(offset: Rational, coeffs: &[i64]) -> OffsetSeries {
        OffsetSeries::new(offset, int(1), coeffs.iter().map(|&c| int(c)).collect()).unwrap()
    }

    #[test]
    fn square_of_one_plus_x() {
        let a = s(int(0), &[1, 1, 0, 0]);
        assert_eq!(series_mul(&a, &a).unwrap().coeffs, vec![int(1), int(2), int(1), int(0)]);
    }

    #[test]
    fn cube_of_one_plus_x() {
        let a = s(int(0), &[1, 1, 0, 0, 0]);
        let c = series_pow(&a, 3).unwrap();
        assert_eq!(c.coeffs, vec![int(1), int(3), int(3), int(1), int(0)]);
    }

    #[test]
    fn offsets_add() {
        let a = OffsetSeries::new(rat(1, 2), int(3), vec![int(1), rat(5, 32)]).unwrap();
        let sq = series_mul(&a, &a).unwrap();
        assert_eq!(sq.offset, int(1));
        assert_eq!(sq.coeffs, vec![int(1), rat(5, 16)]);
        assert_eq!(series_pow(&a, 2).unwrap(), sq);
    }

    #[test]
    fn step_mismatch_is_an_error() {
        let a = OffsetSeries::new(int(0), int(1), vec![int(1)]).unwrap();
        let b = OffsetSeries::new(int(0), int(3), vec![int(1)]).unwrap();
        assert!(matches!(series_mul(&a, &b), Err(Error::StepMismatch { .. })));
    }

    #[test]
    fn truncation_takes_minimum() {
        let a = s(int(0), &[1, 1, 1]);
        let b = s(int(0), &[1, 1]);
        assert_eq!(series_mul(&a, &b).unwrap().truncation_order(), 2);
    }

    #[test]
    fn lattice_lookup() {
        let a = OffsetSeries::new(int(1), int(3), vec![int(1), int(7)]).unwrap();
        assert_eq!(a.coeff_at(&int(4)), Some(int(7)));
        assert_eq!(a.coeff_at(&int(2)), Some(int(0)));
        assert_eq!(a.coeff_at(&int(0)), Some(int(0)));
        assert_eq!(a.coeff_at(&int(7)), None);
    }

    #[test]
    fn zero_leading_coefficient_power() {
        let a = s(int(0), &[0, 1, 1, 0, 0, 0]);
        let c = series_pow(&a, 3).unwrap();
        let naive = series_mul(&series_mul(&a, &a).unwrap(), &a).unwrap();
        assert_eq!(c, naive);
    }

    proptest! {
        #[test]
        fn pow_matches_repeated_mul(
            coeffs in proptest::collection::vec(-4i64..5, 1..7),
            num in -3i64..4,
            e in 1u32..6,
        ) {
            let a = OffsetSeries::new(rat(num, 2), int(3), coeffs.iter().map(|&c| int(c)).collect()).unwrap();
            let mut naive = a.clone();
            for _ in 1..e {
                naive = series_mul(&naive, &a).unwrap();
            }
            prop_assert_eq!(series_pow(&a, e).unwrap(), naive);
        }
    }
}
