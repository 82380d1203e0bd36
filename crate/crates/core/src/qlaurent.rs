//! Laurent polynomials in `q^{1/2}` with integer coefficients.
//!
//! Exponents are stored doubled: the key `e` stands for `q^{e/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QLaurentError {
    #[error("no exact quotient exists in Z[q^(+-1/2)]")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of `Z[q^{±1/2}]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff · q^{e2/2}`.
    pub fn monomial(e2: i64, coeff: impl Into<BigInt>) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e2, c);
        }
        Self { terms }
    }

    /// `q^{e2/2}`.
    pub fn q_half_pow(e2: i64) -> Self {
        Self::monomial(e2, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    /// The quantum integer `[n]_q = q^{n-1} + q^{n-3} + … + q^{1-n}`.
    pub fn quantum_integer(n: u32) -> Self {
        let n = i64::from(n);
        Self::from_terms((0..n).map(|i| (2 * (n - 1 - 2 * i), 1)))
    }

    fn add_term(&mut self, e2: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e2).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e2);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order, exponents doubled.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e2: i64) -> BigInt {
        self.terms.get(&e2).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn leading(&self) -> Option<(i64, &BigInt)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Returns `(e2, c)` when `self = c · q^{e2/2}`.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.leading()
        } else {
            None
        }
    }

    /// Units of `Z_q` are `±q^{e/2}`.
    pub fn is_unit(&self) -> bool {
        self.as_monomial().is_some_and(|(_, c)| c.abs().is_one())
    }

    /// Multiplication by `q^{e2/2}`.
    pub fn shift(&self, e2: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + e2, c.clone()))
                .collect(),
        }
    }

    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// The exact quotient `self / b`, if it exists in `Z_q`.
    pub fn exact_div(&self, b: &QLaurent) -> Result<QLaurent, QLaurentError> {
        let (eb, cb) = b.leading().ok_or(QLaurentError::DivisionByZero)?;
        let cap = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => 1 + (hi - lo),
            _ => return Ok(Self::zero()),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero();
        for _ in 0..cap {
            let Some((er, cr)) = rem.leading() else {
                return Ok(quot);
            };
            if !(cr % cb).is_zero() {
                return Err(QLaurentError::NotDivisible);
            }
            let t = Self::monomial(er - eb, cr / cb);
            rem = &rem - &(b * &t);
            quot += &t;
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            Err(QLaurentError::NotDivisible)
        }
    }
}

impl From<i64> for QLaurent {
    fn from(c: i64) -> Self {
        Self::monomial(0, c)
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(mut self, rhs: QLaurent) -> QLaurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(mut self, rhs: QLaurent) -> QLaurent {
        self -= &rhs;
        self
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}

/// Formats a doubled exponent as `1`, `-1/2`, …
pub(crate) fn half_exponent(e2: i64) -> String {
    if e2 % 2 == 0 {
        (e2 / 2).to_string()
    } else {
        format!("{e2}/2")
    }
}

/// `q^{e}` with the usual abbreviations: empty for `e = 0`, `q` for `e = 1`.
pub(crate) fn power_symbol(var: &str, e2: i64) -> String {
    match e2 {
        0 => String::new(),
        2 => var.to_string(),
        _ => format!("{var}^{{{}}}", half_exponent(e2)),
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let sym = power_symbol("q", *e);
            if sym.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{mag}{sym}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), c.to_string()))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = QLaurent::zero();
        for (e, c) in map {
            let e: i64 = e
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent key {e:?}")))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e2: i64) -> QLaurent {
        QLaurent::q_half_pow(e2)
    }

    #[test]
    fn addition_examples() {
        let a = &q(2) + &q(-2);
        assert_eq!(&a + &QLaurent::zero(), a);
        assert_eq!(&q(1) + &q(1), QLaurent::monomial(1, 2));
        let b = &q(2) - &q(-2);
        let c = &q(-2) - &q(2);
        assert!((&b + &c).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        assert!((&q(1) * &q(-1)).is_one());
        let two = QLaurent::quantum_integer(2);
        assert_eq!(&two * &two, QLaurent::from_terms([(4, 1), (0, 2), (-4, 1)]));
        let three = QLaurent::quantum_integer(3);
        assert_eq!(three, QLaurent::from_terms([(4, 1), (0, 1), (-4, 1)]));
        let lhs = &(&q(2) - &q(-2)) * &three;
        assert_eq!(lhs, &q(6) - &q(-6));
    }

    #[test]
    fn division_examples() {
        let a = &q(4) - &q(-4);
        let b = &q(2) - &q(-2);
        assert_eq!(a.exact_div(&b).unwrap(), &q(2) + &q(-2));
        let x = QLaurent::from_terms([(3, 5), (-1, -2)]);
        assert!(x.exact_div(&x).unwrap().is_one());
        let num = &q(2) + &QLaurent::one();
        let den = &q(2) - &QLaurent::one();
        assert_eq!(num.exact_div(&den), Err(QLaurentError::NotDivisible));
        assert_eq!(
            num.exact_div(&QLaurent::zero()),
            Err(QLaurentError::DivisionByZero)
        );
    }

    #[test]
    fn bar_and_positivity() {
        assert_eq!(q(1).bar(), q(-1));
        let two = QLaurent::quantum_integer(2);
        assert_eq!(two.bar(), two);
        assert!(two.is_positive());
        assert!(!(&q(2) - &q(-2)).is_positive());
        assert!(QLaurent::zero().is_positive());
    }

    #[test]
    fn display_and_json() {
        let x = QLaurent::from_terms([(-1, 1), (2, -3), (0, 1)]);
        assert_eq!(x.to_string(), "-3q + 1 + q^{-1/2}");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"-1":"1","0":"1","2":"-3"}"#);
        let back: QLaurent = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
    }
}
