//! Univariate polynomials over `Rational`, stored sparsely.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{from_usize, parse_rational, Rational};

/// A polynomial in one variable. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: BTreeMap<usize, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * x^deg`.
    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        Self { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// From coefficients in ascending degree order.
    pub fn from_coeffs<I: IntoIterator<Item = Rational>>(coeffs: I) -> Self {
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| super::rational::int(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, deg: usize) -> Rational {
        self.coeffs.get(&deg).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Nonzero terms `(degree, coefficient)` in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// Dense coefficient list, ascending, empty for zero.
    pub fn to_dense(&self) -> Vec<Rational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(d, a)| (*d, a * c)).collect(),
        }
    }

    /// Multiplication by `x^m`.
    pub fn shift(&self, m: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(d, a)| (d + m, a.clone())).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| **d > 0)
                .map(|(d, a)| (d - 1, a * from_usize(*d)))
                .collect(),
        }
    }

    /// Adds `c * x^deg` in place.
    pub fn add_term(&mut self, deg: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(deg).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut last = self.degree().unwrap_or(0);
        for (d, c) in self.coeffs.iter().rev() {
            for _ in *d..last {
                acc *= x;
            }
            acc += c;
            last = *d;
        }
        for _ in 0..last {
            acc *= x;
        }
        acc
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading_coeff().unwrap().clone();
        let mut quot = Polynomial::zero();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &lead;
            let shift = rd - dd;
            quot.add_term(shift, &c);
            for (d, a) in divisor.terms() {
                rem.add_term(d + shift, &(-(a * &c)));
            }
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Polynomial) -> Polynomial {
        self.div_rem(divisor).1
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (d, c) in rhs.terms() {
            out.add_term(d, &(-c));
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (da, a) in self.terms() {
            for (db, b) in rhs.terms() {
                out.add_term(da + db, &(a * b));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().rev() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match (*d, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{abs}*z")?,
                (_, true) => write!(f, "z^{d}")?,
                (_, false) => write!(f, "{abs}*z^{d}")?,
            }
        }
        Ok(())
    }
}

// Ordered coefficient array, ascending degree, rationals as strings.
impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::rational::serde_vec::serialize(&self.to_dense(), s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::from_coeffs(coeffs))
    }
}
