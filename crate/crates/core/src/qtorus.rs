//! Based quantum tori `T_Π`: `M^α · M^β = q^{Π(α,β)/2} M^{α+β}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SquareMatrix;
use crate::qlaurent::{QLaurent, QLaurentError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("operands live in different quantum tori")]
    FormMismatch,
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("negative power of non-invertible frame entry {index}")]
    NegativePower { index: usize },
    #[error("left division has no Laurent quotient")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent overflow")]
    Overflow,
}

impl From<QLaurentError> for TorusError {
    fn from(e: QLaurentError) -> Self {
        match e {
            QLaurentError::NotDivisible => TorusError::NotDivisible,
            QLaurentError::DivisionByZero => TorusError::DivisionByZero,
        }
    }
}

/// Integral skew-symmetric form on `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SquareMatrix", into = "SquareMatrix")]
pub struct SkewForm(SquareMatrix);

impl SkewForm {
    pub fn new(pi: SquareMatrix) -> Result<Self, TorusError> {
        if pi.is_skew() {
            Ok(Self(pi))
        } else {
            Err(TorusError::NotSkew)
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let n = rows.len();
        let m = SquareMatrix::from_rows(rows).map_err(|e| TorusError::RankMismatch {
            expected: n,
            found: e.found,
        })?;
        Self::new(m)
    }

    pub fn zero(n: usize) -> Self {
        Self(SquareMatrix::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    /// `αᵀ Π β`.
    pub fn pairing(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        alpha
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0)
            .map(|(i, a)| a * dot(self.matrix().row(i), beta))
            .sum()
    }

    /// `Π β`, so that `pairing(α, β)` is `α · apply(β)`.
    pub fn apply(&self, beta: &[i64]) -> Vec<i64> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.entry(i, j) * beta[j]).sum())
            .collect()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl TryFrom<SquareMatrix> for SkewForm {
    type Error = TorusError;
    fn try_from(m: SquareMatrix) -> Result<Self, TorusError> {
        Self::new(m)
    }
}

impl From<SkewForm> for SquareMatrix {
    fn from(f: SkewForm) -> Self {
        f.0
    }
}

fn same_form(a: &Arc<SkewForm>, b: &Arc<SkewForm>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn checked_add(a: &[i64], b: &[i64]) -> Result<Vec<i64>, TorusError> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(TorusError::Overflow))
        .collect()
}

fn checked_sub(a: &[i64], b: &[i64]) -> Result<Vec<i64>, TorusError> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y).ok_or(TorusError::Overflow))
        .collect()
}

/// A finite `Z_q`-combination of basis monomials `M^α`.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement {
    form: Arc<SkewForm>,
    terms: BTreeMap<Vec<i64>, QLaurent>,
}

impl TorusElement {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self {
            form: Arc::clone(form),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::monomial(form, &vec![0; form.n()], QLaurent::one())
            .expect("zero vector has the right rank")
    }

    pub fn monomial(
        form: &Arc<SkewForm>,
        alpha: &[i64],
        coeff: QLaurent,
    ) -> Result<Self, TorusError> {
        if alpha.len() != form.n() {
            return Err(TorusError::RankMismatch {
                expected: form.n(),
                found: alpha.len(),
            });
        }
        let mut out = Self::zero(form);
        out.add_term(alpha.to_vec(), coeff);
        Ok(out)
    }

    /// `M^{e_i}`.
    pub fn basis(form: &Arc<SkewForm>, i: usize) -> Self {
        let mut alpha = vec![0; form.n()];
        alpha[i] = 1;
        Self::monomial(form, &alpha, QLaurent::one()).expect("basis vector has the right rank")
    }

    fn add_term(&mut self, alpha: Vec<i64>, c: QLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &QLaurent)> + '_ {
        self.terms.iter().map(|(a, c)| (a.as_slice(), c))
    }

    pub fn coeff(&self, alpha: &[i64]) -> QLaurent {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    /// Largest term in lexicographic order.
    pub fn leading(&self) -> Option<(&[i64], &QLaurent)> {
        self.terms
            .iter()
            .next_back()
            .map(|(a, c)| (a.as_slice(), c))
    }

    /// Returns `(α, c)` when the element is the single term `c·M^α`.
    pub fn as_monomial(&self) -> Option<(&[i64], &QLaurent)> {
        if self.terms.len() == 1 {
            self.leading()
        } else {
            None
        }
    }

    fn check_form(&self, other: &Self) -> Result<(), TorusError> {
        if same_form(&self.form, &other.form) {
            Ok(())
        } else {
            Err(TorusError::FormMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_form(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_form(other)?;
        let mut out = Self::zero(&self.form);
        let images: Vec<Vec<i64>> = other.terms.keys().map(|b| self.form.apply(b)).collect();
        for (a, ca) in &self.terms {
            for ((b, cb), pb) in other.terms.iter().zip(&images) {
                out.add_term(checked_add(a, b)?, (ca * cb).shift(dot(a, pb)));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(&self.form);
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x * c);
        }
        out
    }

    /// Multiplication by `q^{e2/2}`.
    pub fn shift(&self, e2: i64) -> Self {
        Self {
            form: Arc::clone(&self.form),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.shift(e2)))
                .collect(),
        }
    }

    /// Two-sided inverse of a unit monomial `±q^{e/2} M^α`.
    pub fn inverse(&self) -> Option<Self> {
        let (alpha, c) = self.as_monomial()?;
        let (e2, k) = c.as_monomial()?;
        if !k.abs().is_one() {
            return None;
        }
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        Self::monomial(&self.form, &neg, QLaurent::monomial(-e2, k.clone())).ok()
    }

    pub fn pow(&self, k: u32) -> Result<Self, TorusError> {
        let mut out = Self::one(&self.form);
        for _ in 0..k {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// The `x` with `self · x = c`, found by lexicographic leading-term peeling.
    pub fn left_divide(&self, c: &Self) -> Result<Self, TorusError> {
        self.check_form(c)?;
        let (lead_a, lead_ca) = self.leading().ok_or(TorusError::DivisionByZero)?;
        let lead_a = lead_a.to_vec();
        let lead_ca = lead_ca.clone();
        let cap = c.support_size() + 64 * self.support_size();
        let mut rem = c.clone();
        let mut quot = Self::zero(&self.form);
        for _ in 0..cap {
            let Some((beta, r)) = rem.terms.last_key_value() else {
                break;
            };
            let gamma = checked_sub(beta, &lead_a)?;
            let image = self.form.apply(&gamma);
            let t = r.exact_div(&lead_ca.shift(dot(&lead_a, &image)))?;
            for (a, ca) in &self.terms {
                rem.add_term(checked_add(a, &gamma)?, -(ca * &t).shift(dot(a, &image)));
            }
            quot.add_term(gamma, t);
        }
        if !rem.is_zero() || self.try_mul(&quot)? != *c {
            return Err(TorusError::NotDivisible);
        }
        Ok(quot)
    }

    pub fn bar(&self) -> Self {
        Self {
            form: Arc::clone(&self.form),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.bar()))
                .collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(QLaurent::is_positive)
    }

    pub fn to_json(&self) -> TorusElementJson {
        TorusElementJson {
            pi: self.form.matrix().rows(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    alpha: a.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds an element; `form` is reused when it matches the stored matrix.
    pub fn from_json(
        js: &TorusElementJson,
        form: Option<&Arc<SkewForm>>,
    ) -> Result<Self, TorusError> {
        let parsed = SkewForm::from_rows(js.pi.clone())?;
        let form = match form {
            Some(f) if **f == parsed => Arc::clone(f),
            Some(_) => return Err(TorusError::FormMismatch),
            None => Arc::new(parsed),
        };
        let mut out = Self::zero(&form);
        for t in &js.terms {
            if t.alpha.len() != form.n() {
                return Err(TorusError::RankMismatch {
                    expected: form.n(),
                    found: t.alpha.len(),
                });
            }
            out.add_term(t.alpha.clone(), t.coeff.clone());
        }
        Ok(out)
    }
}

/// The Weyl-ordered product `[∏ A_i^{x_i}]`.
///
/// `form` gives the q-commutation exponents of the frame entries. Without a
/// frame the entries are the basis monomials of `form` itself.
pub fn weyl(
    form: &Arc<SkewForm>,
    x: &[i64],
    frame: Option<&[TorusElement]>,
) -> Result<TorusElement, TorusError> {
    if x.len() != form.n() {
        return Err(TorusError::RankMismatch {
            expected: form.n(),
            found: x.len(),
        });
    }
    let Some(frame) = frame else {
        return TorusElement::monomial(form, x, QLaurent::one());
    };
    if frame.len() != form.n() {
        return Err(TorusError::RankMismatch {
            expected: form.n(),
            found: frame.len(),
        });
    }
    let ambient = frame
        .first()
        .map(|f| Arc::clone(f.form()))
        .unwrap_or_else(|| Arc::clone(form));
    let mut twist = 0i64;
    for k in 0..x.len() {
        for l in 0..k {
            twist += x[k] * x[l] * form.entry(k, l);
        }
    }
    let mut out = TorusElement::one(&ambient).shift(twist);
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let base = if xi > 0 {
            frame[i].clone()
        } else {
            frame[i]
                .inverse()
                .ok_or(TorusError::NegativePower { index: i })?
        };
        let p = base.pow(xi.unsigned_abs() as u32)?;
        out = out.try_mul(&p)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<i64>,
    pub coeff: QLaurent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusElementJson {
    pub pi: Vec<Vec<i64>>,
    pub terms: Vec<TermJson>,
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("torus form mismatch in addition")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.try_sub(rhs)
            .expect("torus form mismatch in subtraction")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("torus form mismatch in product")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        self.scale(&QLaurent::from(-1))
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (alpha, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})M{alpha:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form2(p: i64) -> Arc<SkewForm> {
        Arc::new(SkewForm::from_rows(vec![vec![0, p], vec![-p, 0]]).unwrap())
    }

    fn mono(f: &Arc<SkewForm>, a: &[i64], e2: i64) -> TorusElement {
        TorusElement::monomial(f, a, QLaurent::q_half_pow(e2)).unwrap()
    }

    #[test]
    fn basis_products() {
        let f = form2(1);
        let e1 = TorusElement::basis(&f, 0);
        let e2 = TorusElement::basis(&f, 1);
        assert_eq!(&e1 * &e1, mono(&f, &[2, 0], 0));
        assert_eq!(&e1 * &e2, mono(&f, &[1, 1], 1));
        assert_eq!(&e2 * &e1, mono(&f, &[1, 1], -1));
        assert!(TorusElement::monomial(&f, &[1], QLaurent::one()).is_err());
    }

    #[test]
    fn expansion_with_pi_two() {
        let f = form2(2);
        let e1 = TorusElement::basis(&f, 0);
        let e2 = TorusElement::basis(&f, 1);
        let lhs = &(&e1 + &e2) * &(&e1 - &e2);
        let mid = QLaurent::q_half_pow(-2) - QLaurent::q_half_pow(2);
        let expected = TorusElement::monomial(&f, &[2, 0], QLaurent::one())
            .unwrap()
            .try_add(&TorusElement::monomial(&f, &[1, 1], mid).unwrap())
            .unwrap()
            .try_sub(&mono(&f, &[0, 2], 0))
            .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn weyl_basis_frame() {
        let f = form2(1);
        assert_eq!(weyl(&f, &[1, 1], None).unwrap(), mono(&f, &[1, 1], 0));
        let frame = [TorusElement::basis(&f, 0), TorusElement::basis(&f, 1)];
        assert_eq!(
            weyl(&f, &[1, 1], Some(&frame)).unwrap(),
            mono(&f, &[1, 1], 0)
        );
        assert_eq!(
            weyl(&f, &[2, 1], Some(&frame)).unwrap(),
            mono(&f, &[2, 1], 0)
        );
        assert_eq!(
            weyl(&f, &[-1, 3], Some(&frame)).unwrap(),
            mono(&f, &[-1, 3], 0)
        );
    }

    #[test]
    fn weyl_rejects_negative_power_of_sum() {
        let f = form2(1);
        let s = &TorusElement::basis(&f, 0) + &TorusElement::basis(&f, 1);
        let frame = [s, TorusElement::basis(&f, 1)];
        assert_eq!(
            weyl(&f, &[-1, 0], Some(&frame)),
            Err(TorusError::NegativePower { index: 0 })
        );
    }

    #[test]
    fn left_division_examples() {
        let f = form2(1);
        let e1 = TorusElement::basis(&f, 0);
        let e2 = TorusElement::basis(&f, 1);
        let x = e1.left_divide(&(&e1 + &e2)).unwrap();
        let expected = &TorusElement::one(&f) + &mono(&f, &[-1, 1], -1);
        assert_eq!(x, expected);
        assert_eq!(&e1 * &x, &e1 + &e2);
        assert_eq!((&e1 + &e2).left_divide(&e1), Err(TorusError::NotDivisible));
        assert_eq!(
            TorusElement::zero(&f).left_divide(&e1),
            Err(TorusError::DivisionByZero)
        );
    }

    #[test]
    fn bar_fixes_basis() {
        let f = form2(1);
        let m = mono(&f, &[1, -2], 0);
        assert_eq!(m.bar(), m);
        assert_eq!(mono(&f, &[1, 0], 1).bar(), mono(&f, &[1, 0], -1));
    }

    #[test]
    fn json_round_trip() {
        let f = form2(1);
        let x = &mono(&f, &[1, 0], 1) + &mono(&f, &[0, -1], 4);
        let js = serde_json::to_string(&x.to_json()).unwrap();
        let back: TorusElementJson = serde_json::from_str(&js).unwrap();
        assert_eq!(TorusElement::from_json(&back, Some(&f)).unwrap(), x);
    }
}
