//! Quantum seeds `(B, Π, frame)` and their mutations.

mod canonical;
mod explore;
mod relation;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{self, DegreeVector, GradingError};
use crate::matrix::SquareMatrix;
use crate::qlaurent::QLaurent;
use crate::qtorus::{weyl, SkewForm, TorusElement, TorusElementJson, TorusError};
use crate::weight::Weight;

pub use canonical::{CanonicalKey, CanonicalScope};
pub use explore::{explore, ExchangeGraph, ExploreOptions, GraphEdge, GraphNode};
pub use relation::{parse_rhs, ExchangeRelation, Naming, ParseRelationError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("index {index} out of range for a seed of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vertex {} is frozen", index + 1)]
    FrozenMutation { index: usize },
    #[error("mutation at vertex {} left no Laurent quotient: {source}", index + 1)]
    LaurentFailure { index: usize, source: TorusError },
    #[error("illegal permutation: {0}")]
    IllegalPermutation(String),
    #[error("malformed seed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Degree(#[from] GradingError),
    #[error(transparent)]
    Torus(#[from] TorusError),
}

/// Cluster variables expressed in a fixed ambient quantum torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    ambient: Arc<SkewForm>,
    vars: Vec<TorusElement>,
}

impl Frame {
    pub fn ambient(&self) -> &Arc<SkewForm> {
        &self.ambient
    }

    pub fn vars(&self) -> &[TorusElement] {
        &self.vars
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumSeed {
    weights: Vec<Weight>,
    unfrozen: Vec<bool>,
    b2: SquareMatrix,
    pi: Arc<SkewForm>,
    frame: Option<Frame>,
    names: Vec<String>,
    degrees: Option<Vec<DegreeVector>>,
}

/// Sign choice `ε` in the `E_{k,ε}`, `F_{k,ε}` matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationSign {
    Plus,
    Minus,
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

impl QuantumSeed {
    /// Validates and assembles a seed without a frame. `b2` holds `2B`.
    pub fn new(
        b2: SquareMatrix,
        pi: SkewForm,
        weights: Vec<Weight>,
        unfrozen: Vec<bool>,
    ) -> Result<Self, SeedError> {
        let n = b2.n();
        if pi.n() != n || weights.len() != n || unfrozen.len() != n {
            return Err(SeedError::Malformed(format!(
                "size mismatch: B2 is {n}x{n}, Pi is {0}x{0}, {1} weights, {2} frozen flags",
                pi.n(),
                weights.len(),
                unfrozen.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                if weights[i].d() * b2.get(i, j) != -weights[j].d() * b2.get(j, i) {
                    return Err(SeedError::Malformed(format!(
                        "DB is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                if (unfrozen[i] || unfrozen[j]) && b2.get(i, j) % 2 != 0 {
                    return Err(SeedError::Malformed(format!(
                        "half-integral entry at ({}, {}) outside the frozen block",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            names: (1..=n).map(|i| format!("e{i}")).collect(),
            weights,
            unfrozen,
            b2,
            pi: Arc::new(pi),
            frame: None,
            degrees: None,
        })
    }

    /// Attaches the initial frame: the basis monomials of the current `Π`.
    pub fn with_initial_frame(mut self) -> Self {
        let ambient = Arc::clone(&self.pi);
        let vars = (0..self.n())
            .map(|i| TorusElement::basis(&ambient, i))
            .collect();
        self.frame = Some(Frame { ambient, vars });
        self
    }

    pub fn with_frame(
        mut self,
        ambient: Arc<SkewForm>,
        vars: Vec<TorusElement>,
    ) -> Result<Self, SeedError> {
        if vars.len() != self.n() {
            return Err(SeedError::Malformed(format!(
                "frame has {} entries, seed has {}",
                vars.len(),
                self.n()
            )));
        }
        if vars.iter().any(|v| **v.form() != *ambient) {
            return Err(SeedError::Torus(TorusError::FormMismatch));
        }
        self.frame = Some(Frame { ambient, vars });
        Ok(self)
    }

    pub fn without_frame(mut self) -> Self {
        self.frame = None;
        self
    }

    pub fn with_degrees(mut self, degrees: Vec<DegreeVector>) -> Result<Self, SeedError> {
        if degrees.len() != self.n() {
            return Err(SeedError::Malformed(format!(
                "{} degree vectors for {} variables",
                degrees.len(),
                self.n()
            )));
        }
        self.degrees = Some(degrees);
        Ok(self)
    }

    pub fn without_degrees(mut self) -> Self {
        self.degrees = None;
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, SeedError> {
        if names.len() != self.n() {
            return Err(SeedError::Malformed(format!(
                "{} names for {} variables",
                names.len(),
                self.n()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.b2.n()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.weights[i]
    }

    pub fn is_unfrozen(&self, i: usize) -> bool {
        self.unfrozen[i]
    }

    pub fn unfrozen_flags(&self) -> &[bool] {
        &self.unfrozen
    }

    pub fn unfrozen_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.unfrozen[i]).collect()
    }

    /// `2B`.
    pub fn b2(&self) -> &SquareMatrix {
        &self.b2
    }

    /// `b_ij` for entries known to be integral.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b2.get(i, j) / 2
    }

    pub fn pi(&self) -> &SkewForm {
        &self.pi
    }

    pub fn pi_arc(&self) -> &Arc<SkewForm> {
        &self.pi
    }

    pub fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> Option<&[DegreeVector]> {
        self.degrees.as_deref()
    }

    fn check_mutable(&self, k: usize) -> Result<(), SeedError> {
        if k >= self.n() {
            return Err(SeedError::IndexOutOfRange {
                index: k,
                n: self.n(),
            });
        }
        if !self.unfrozen[k] {
            return Err(SeedError::FrozenMutation { index: k });
        }
        Ok(())
    }

    /// The matrices `E_{k,ε}` and `F_{k,ε}`.
    pub fn exchange_matrices(
        &self,
        k: usize,
        sign: MutationSign,
    ) -> Result<(SquareMatrix, SquareMatrix), SeedError> {
        self.check_mutable(k)?;
        let n = self.n();
        let s = match sign {
            MutationSign::Plus => 1,
            MutationSign::Minus => -1,
        };
        let mut e = SquareMatrix::identity(n);
        let mut f = SquareMatrix::identity(n);
        for i in 0..n {
            e.set(i, k, if i == k { -1 } else { pos(-s * self.b(i, k)) });
            f.set(k, i, if i == k { -1 } else { pos(s * self.b(k, i)) });
        }
        Ok((e, f))
    }

    /// `(B', Π')` after mutation at `k` with sign `ε`; `B'` doubled.
    pub fn mutated_matrices(
        &self,
        k: usize,
        sign: MutationSign,
    ) -> Result<(SquareMatrix, SquareMatrix), SeedError> {
        let (e, f) = self.exchange_matrices(k, sign)?;
        let b2 = e.mul(&self.b2).mul(&f);
        let pi = e.transpose().mul(self.pi.matrix()).mul(&e);
        Ok((b2, pi))
    }

    pub fn predict_exchange(&self, k: usize) -> Result<ExchangeRelation, SeedError> {
        self.check_mutable(k)?;
        let n = self.n();
        let plus: Vec<i64> = (0..n).map(|j| pos(self.b(j, k))).collect();
        let minus: Vec<i64> = (0..n).map(|j| pos(-self.b(j, k))).collect();
        let m2 = (0..n).map(|j| plus[j] * self.pi.entry(k, j)).sum();
        Ok(ExchangeRelation {
            index: k,
            prefactor2: m2,
            plus,
            gap2: 2 * self.weights[k].d(),
            minus,
        })
    }

    /// Right-hand side of the exchange relation at `k`, in the ambient torus.
    pub fn exchange_rhs(&self, k: usize) -> Result<TorusElement, SeedError> {
        let rel = self.predict_exchange(k)?;
        let frame = self
            .frame
            .as_ref()
            .ok_or_else(|| SeedError::Malformed("seed has no frame".into()))?;
        let p = weyl(&self.pi, &rel.plus, Some(&frame.vars))?;
        let m = weyl(&self.pi, &rel.minus, Some(&frame.vars))?;
        Ok(p.try_add(&m.shift(rel.gap2))?.shift(rel.prefactor2))
    }

    pub fn mutate(&self, k: usize) -> Result<QuantumSeed, SeedError> {
        self.mutate_with_sign(k, MutationSign::Plus)
    }

    /// Mutation computed through `E_{k,ε}`, `F_{k,ε}`; the result does not depend on `ε`.
    pub fn mutate_with_sign(&self, k: usize, sign: MutationSign) -> Result<QuantumSeed, SeedError> {
        self.check_mutable(k)?;
        let (b2, pi) = self.mutated_matrices(k, sign)?;
        let pi = SkewForm::new(pi)?;
        let frame = match &self.frame {
            None => None,
            Some(fr) => {
                let rhs = self.exchange_rhs(k)?;
                let new_var = fr.vars[k]
                    .left_divide(&rhs)
                    .map_err(|source| SeedError::LaurentFailure { index: k, source })?;
                let mut vars = fr.vars.clone();
                vars[k] = new_var;
                Some(Frame {
                    ambient: Arc::clone(&fr.ambient),
                    vars,
                })
            }
        };
        let degrees = match &self.degrees {
            None => None,
            Some(d) => Some(grading::propagate(self, d, k)?),
        };
        let mut names = self.names.clone();
        names[k].push('\'');
        Ok(QuantumSeed {
            weights: self.weights.clone(),
            unfrozen: self.unfrozen.clone(),
            b2,
            pi: Arc::new(pi),
            frame,
            names,
            degrees,
        })
    }

    /// Applies mutations left to right.
    pub fn mutate_word(&self, word: &[usize]) -> Result<QuantumSeed, SeedError> {
        let mut s = self.clone();
        for &k in word {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Relabels vertex `i` as `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<QuantumSeed, SeedError> {
        let n = self.n();
        if sigma.len() != n {
            return Err(SeedError::IllegalPermutation(format!(
                "length {} for a seed of size {n}",
                sigma.len()
            )));
        }
        let mut seen = vec![false; n];
        for (i, &t) in sigma.iter().enumerate() {
            if t >= n || seen[t] {
                return Err(SeedError::IllegalPermutation("not a bijection".into()));
            }
            seen[t] = true;
            if self.unfrozen[i] != self.unfrozen[t] {
                return Err(SeedError::IllegalPermutation(format!(
                    "vertex {} and vertex {} differ in frozen status",
                    i + 1,
                    t + 1
                )));
            }
            if self.weights[i] != self.weights[t] {
                return Err(SeedError::IllegalPermutation(format!(
                    "vertex {} and vertex {} differ in weight",
                    i + 1,
                    t + 1
                )));
            }
        }
        let place = |v: &[String]| {
            let mut out = v.to_vec();
            for i in 0..n {
                out[sigma[i]] = v[i].clone();
            }
            out
        };
        let frame = self.frame.as_ref().map(|fr| {
            let mut vars = fr.vars.clone();
            for i in 0..n {
                vars[sigma[i]] = fr.vars[i].clone();
            }
            Frame {
                ambient: Arc::clone(&fr.ambient),
                vars,
            }
        });
        let degrees = self.degrees.as_ref().map(|d| {
            let mut out = d.clone();
            for i in 0..n {
                out[sigma[i]] = d[i].clone();
            }
            out
        });
        Ok(QuantumSeed {
            weights: self.weights.clone(),
            unfrozen: self.unfrozen.clone(),
            b2: self.b2.permuted(sigma),
            pi: Arc::new(SkewForm::new(self.pi.matrix().permuted(sigma))?),
            frame,
            names: place(&self.names),
            degrees,
        })
    }

    pub fn check_compatibility(&self) -> CompatibilityReport {
        let n = self.n();
        let rows = self
            .unfrozen_indices()
            .into_iter()
            .map(|i| {
                let actual: Vec<i64> = (0..n)
                    .map(|j| (0..n).map(|k| self.b(k, i) * self.pi.entry(k, j)).sum())
                    .collect();
                let expected: Vec<i64> = (0..n)
                    .map(|j| if i == j { 2 * self.weights[i].d() } else { 0 })
                    .collect();
                CompatibilityRow {
                    index: i,
                    pass: actual == expected,
                    actual,
                    expected,
                }
            })
            .collect();
        CompatibilityReport { rows }
    }

    /// Indices whose frame entry is not fixed by the bar involution.
    pub fn check_bar_invariance(&self) -> Result<Vec<usize>, SeedError> {
        let fr = self.require_frame()?;
        Ok((0..self.n())
            .filter(|&i| fr.vars[i].bar() != fr.vars[i])
            .collect())
    }

    /// Indices whose frame entry has a negative coefficient.
    pub fn check_positivity(&self) -> Result<Vec<usize>, SeedError> {
        let fr = self.require_frame()?;
        Ok((0..self.n())
            .filter(|&i| !fr.vars[i].is_positive())
            .collect())
    }

    /// Pairs `(i, j)` violating `A_i A_j = q^{π_ij} A_j A_i`.
    pub fn check_commutation(&self) -> Result<Vec<(usize, usize)>, SeedError> {
        let fr = self.require_frame()?;
        let n = self.n();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = fr.vars[i].try_mul(&fr.vars[j])?;
                let rhs = fr.vars[j]
                    .try_mul(&fr.vars[i])?
                    .shift(2 * self.pi.entry(i, j));
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }

    fn require_frame(&self) -> Result<&Frame, SeedError> {
        self.frame
            .as_ref()
            .ok_or_else(|| SeedError::Malformed("seed has no frame".into()))
    }

    /// Replaces one frame entry; used for fault injection in diagnostics.
    pub fn with_frame_entry(mut self, i: usize, value: TorusElement) -> Result<Self, SeedError> {
        let fr = self
            .frame
            .as_mut()
            .ok_or_else(|| SeedError::Malformed("seed has no frame".into()))?;
        if value.form() != &fr.ambient && **value.form() != *fr.ambient {
            return Err(SeedError::Torus(TorusError::FormMismatch));
        }
        fr.vars[i] = value;
        Ok(self)
    }

    /// Replaces `Π` without any check; used for fault injection.
    pub fn with_pi_unchecked(mut self, pi: SkewForm) -> Self {
        self.pi = Arc::new(pi);
        self
    }

    /// Replaces one degree vector; used for fault injection.
    pub fn with_degree_entry(mut self, i: usize, d: DegreeVector) -> Result<Self, SeedError> {
        let degs = self
            .degrees
            .as_mut()
            .ok_or_else(|| SeedError::Malformed("seed has no degrees".into()))?;
        degs[i] = d;
        Ok(self)
    }

    /// Equality of `(B, Π)` only.
    pub fn same_matrices(&self, other: &QuantumSeed) -> bool {
        self.b2 == other.b2 && *self.pi == *other.pi
    }

    /// Equality of `(B, Π, frame, degrees)`, ignoring display names.
    pub fn same_data(&self, other: &QuantumSeed) -> bool {
        self.same_matrices(other)
            && self.weights == other.weights
            && self.unfrozen == other.unfrozen
            && self.frame == other.frame
            && self.degrees == other.degrees
    }

    pub fn to_json(&self) -> SeedJson {
        SeedJson {
            n: self.n(),
            unfrozen: self.unfrozen_indices().iter().map(|i| i + 1).collect(),
            weights: self.weights.clone(),
            b2: self.b2.rows(),
            pi: self.pi.matrix().rows(),
            names: self.names.clone(),
            frame: self
                .frame
                .as_ref()
                .map(|f| f.vars.iter().map(TorusElement::to_json).collect()),
            degrees: self
                .degrees
                .as_ref()
                .map(|d| d.iter().map(|v| v.pairs().to_vec()).collect()),
        }
    }

    pub fn from_json(js: &SeedJson) -> Result<Self, SeedError> {
        let n = js.n;
        let mut unfrozen = vec![false; n];
        for &i in &js.unfrozen {
            if i == 0 || i > n {
                return Err(SeedError::Malformed(format!(
                    "unfrozen index {i} out of 1..={n}"
                )));
            }
            unfrozen[i - 1] = true;
        }
        let b2 = SquareMatrix::from_rows(js.b2.clone())
            .map_err(|e| SeedError::Malformed(format!("B2: {e}")))?;
        let pi = SkewForm::from_rows(js.pi.clone())
            .map_err(|e| SeedError::Malformed(format!("Pi: {e}")))?;
        if b2.n() != n {
            return Err(SeedError::Malformed(format!(
                "B2 is {0}x{0}, n = {n}",
                b2.n()
            )));
        }
        let mut seed =
            Self::new(b2, pi, js.weights.clone(), unfrozen)?.with_names(js.names.clone())?;
        if let Some(frame) = &js.frame {
            let first = frame
                .first()
                .ok_or_else(|| SeedError::Malformed("empty frame".into()))?;
            let ambient = Arc::new(SkewForm::from_rows(first.pi.clone())?);
            let vars = frame
                .iter()
                .map(|t| TorusElement::from_json(t, Some(&ambient)))
                .collect::<Result<Vec<_>, _>>()?;
            seed = seed.with_frame(ambient, vars)?;
        }
        if let Some(d) = &js.degrees {
            seed = seed.with_degrees(d.iter().cloned().map(DegreeVector::from_pairs).collect())?;
        }
        Ok(seed)
    }

    /// The frame variable at vertex `i`, if the seed carries a frame.
    pub fn frame_entry(&self, i: usize) -> Option<&TorusElement> {
        self.frame.as_ref().map(|f| &f.vars[i])
    }

    pub fn exchange_rhs_coefficients(&self, k: usize) -> Result<(QLaurent, QLaurent), SeedError> {
        let rel = self.predict_exchange(k)?;
        Ok((
            QLaurent::q_half_pow(rel.prefactor2),
            QLaurent::q_half_pow(rel.prefactor2 + rel.gap2),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityRow {
    pub index: usize,
    pub actual: Vec<i64>,
    pub expected: Vec<i64>,
    pub pass: bool,
}

/// Rows of `BᵀΠ` for the unfrozen indices against `(2D, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub rows: Vec<CompatibilityRow>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failing_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.index)
            .collect()
    }

    pub fn value(&self, i: usize, j: usize) -> Option<i64> {
        self.rows.iter().find(|r| r.index == i).map(|r| r.actual[j])
    }
}

impl std::fmt::Display for CompatibilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.rows {
            let status = if r.pass { "ok" } else { "FAIL" };
            writeln!(f, "row {:>2}: {status} {:?}", r.index + 1, r.actual)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub n: usize,
    pub unfrozen: Vec<usize>,
    pub weights: Vec<Weight>,
    #[serde(rename = "B2")]
    pub b2: Vec<Vec<i64>>,
    #[serde(rename = "Pi")]
    pub pi: Vec<Vec<i64>>,
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<Vec<TorusElementJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<Vec<[i64; 2]>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank-2 example: B = [[0,-1],[2,0]] with D = diag(2,1), both unfrozen.
    fn small() -> QuantumSeed {
        let b2 = SquareMatrix::from_rows(vec![vec![0, -2], vec![4, 0]]).unwrap();
        // Bᵀ Π = diag(4, 2) forces π12 = -2.
        let pi = SkewForm::from_rows(vec![vec![0, -2], vec![2, 0]]).unwrap();
        QuantumSeed::new(b2, pi, vec![Weight::Two, Weight::One], vec![true, true])
            .unwrap()
            .with_initial_frame()
    }

    #[test]
    fn small_seed_is_compatible() {
        assert!(small().check_compatibility().passed());
    }

    #[test]
    fn mutation_is_involutive() {
        let s = small();
        for k in 0..2 {
            let t = s.mutate(k).unwrap().mutate(k).unwrap();
            assert!(t.same_data(&s));
        }
    }

    #[test]
    fn b2_pentagon_type_period() {
        // Rank-2 of finite type B2: (μ1μ2)^3 returns (B, Π) up to the swap.
        let s = small();
        let t = s.mutate_word(&[0, 1, 0, 1, 0, 1]).unwrap();
        assert!(t.same_matrices(&s));
        assert!(t.check_bar_invariance().unwrap().is_empty());
        assert!(t.check_positivity().unwrap().is_empty());
    }

    #[test]
    fn sign_independence() {
        let s = small();
        for k in 0..2 {
            assert_eq!(
                s.mutated_matrices(k, MutationSign::Plus).unwrap(),
                s.mutated_matrices(k, MutationSign::Minus).unwrap()
            );
        }
    }

    #[test]
    fn rejects_non_symmetrizable() {
        let b2 = SquareMatrix::from_rows(vec![vec![0, -2], vec![2, 0]]).unwrap();
        let pi = SkewForm::zero(2);
        assert!(
            QuantumSeed::new(b2, pi, vec![Weight::Two, Weight::One], vec![true, true]).is_err()
        );
    }

    #[test]
    fn json_round_trip() {
        let s = small().mutate(0).unwrap();
        let js = serde_json::to_string(&s.to_json()).unwrap();
        let back = QuantumSeed::from_json(&serde_json::from_str(&js).unwrap()).unwrap();
        assert!(back.same_data(&s));
        assert_eq!(back.names(), s.names());
    }
}
