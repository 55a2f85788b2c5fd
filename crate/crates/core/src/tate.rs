//! Polynomials in the Tate class `L` with nonnegative integer coefficients.
//!
//! A [`TatePolynomial`] is a finite formal sum `a_0 + a_1 L + ... + a_d L^d`
//! with `a_k` natural numbers. These are the multiplicities of Tate twists in
//! every decomposition the engine manipulates. There is no subtraction; the
//! only inverse operation is [`TatePolynomial::try_div_exact`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sparse polynomial in `L` over the naturals. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TatePolynomial {
    coeffs: BTreeMap<u32, BigUint>,
}

impl TatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit `1 = L^0`.
    pub fn one() -> Self {
        Self::lefschetz(0)
    }

    /// The monomial `L^k`.
    pub fn lefschetz(k: u32) -> Self {
        Self::monomial(k, 1u32)
    }

    pub fn monomial(k: u32, coeff: impl Into<BigUint>) -> Self {
        let mut p = Self::zero();
        p.add_term(k, coeff.into());
        p
    }

    /// `L^lo + L^(lo+1) + ... + L^hi`; zero when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> Self {
        let mut p = Self::zero();
        for k in lo..=hi {
            p.add_term(k, BigUint::one());
        }
        p
    }

    /// Builds from dense coefficients, index = exponent.
    pub fn from_dense<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigUint>,
    {
        let mut p = Self::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            p.add_term(k as u32, c.into());
        }
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigUint>,
    {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c.into());
        }
        p
    }

    pub fn add_term(&mut self, k: u32, coeff: BigUint) {
        if coeff.is_zero() {
            return;
        }
        *self.coeffs.entry(k).or_default() += coeff;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: u32) -> BigUint {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigUint)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Dense coefficient vector up to the degree.
    pub fn to_dense(&self) -> Vec<BigUint> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: u32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Total multiplicity: the value at `L = 1`.
    pub fn eval_at_one(&self) -> BigUint {
        self.coeffs.values().sum()
    }

    /// Coefficientwise `self >= other`.
    pub fn dominates(&self, other: &Self) -> bool {
        other.terms().all(|(k, c)| self.coeffs.get(&k).is_some_and(|s| s >= c))
    }

    /// Coefficientwise difference, `None` if some coefficient would go negative.
    pub(crate) fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !self.dominates(other) {
            return None;
        }
        let mut out = self.clone();
        for (k, c) in other.terms() {
            let slot = out.coeffs.get_mut(&k).expect("dominated");
            *slot -= c;
            if slot.is_zero() {
                out.coeffs.remove(&k);
            }
        }
        Some(out)
    }

    /// Exact division: the unique `q` with `q * divisor == self`, required to
    /// have natural coefficients.
    pub fn try_div_exact(&self, divisor: &Self) -> Result<Self> {
        let (dlead_exp, dlead) = match divisor.coeffs.iter().next_back() {
            Some((k, c)) => (*k, BigInt::from(c.clone())),
            None => return Err(Error::DivisionByZero),
        };
        let not_divisible = || Error::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };

        // Long division over Z from the top degree down.
        let mut rem: BTreeMap<u32, BigInt> = self.coeffs.iter().map(|(k, c)| (*k, BigInt::from(c.clone()))).collect();
        let mut quot: BTreeMap<u32, BigInt> = BTreeMap::new();
        while let Some((&top, lead)) = rem.iter().next_back() {
            if top < dlead_exp {
                return Err(not_divisible());
            }
            if !(lead % &dlead).is_zero() {
                return Err(not_divisible());
            }
            let q = lead / &dlead;
            let shift = top - dlead_exp;
            for (k, c) in divisor.terms() {
                let slot = rem.entry(k + shift).or_default();
                *slot -= &q * BigInt::from(c.clone());
                if slot.is_zero() {
                    rem.remove(&(k + shift));
                }
            }
            quot.insert(shift, q);
        }

        let mut out = Self::zero();
        for (k, c) in quot {
            if c.is_negative() {
                return Err(not_divisible());
            }
            out.add_term(k, c.magnitude().clone());
        }
        Ok(out)
    }

    pub(crate) fn coeff_u64(&self, k: u32) -> Result<u64> {
        self.coeff(k).to_u64().ok_or(Error::Overflow)
    }
}

impl Add for &TatePolynomial {
    type Output = TatePolynomial;

    fn add(self, rhs: &TatePolynomial) -> TatePolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for TatePolynomial {
    type Output = TatePolynomial;

    fn add(mut self, rhs: TatePolynomial) -> TatePolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&TatePolynomial> for TatePolynomial {
    fn add_assign(&mut self, rhs: &TatePolynomial) {
        for (k, c) in rhs.terms() {
            self.add_term(k, c.clone());
        }
    }
}

impl Mul for &TatePolynomial {
    type Output = TatePolynomial;

    fn mul(self, rhs: &TatePolynomial) -> TatePolynomial {
        let mut out = TatePolynomial::zero();
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Mul for TatePolynomial {
    type Output = TatePolynomial;

    fn mul(self, rhs: TatePolynomial) -> TatePolynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for TatePolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for TatePolynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| acc * p)
    }
}

impl fmt::Display for TatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (k, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("L")?,
                (1, false) => write!(f, "{c}L")?,
                (_, true) => write!(f, "L^{k}")?,
                (_, false) => write!(f, "{c}L^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TatePolynomial({self})")
    }
}

impl FromStr for TatePolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(crate::dsl::parse_polynomial(s)?)
    }
}

impl Serialize for TatePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TatePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
