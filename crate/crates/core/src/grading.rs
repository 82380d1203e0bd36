//! Ensemble degrees: one pair `(c₁, c₂) ↔ c₁ϖ₁ + c₂ϖ₂` per special point.

use std::fmt;
use std::ops::{Add, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::qseed::{QuantumSeed, SeedError};
use crate::surface::{DecoratedTriangulation, PointPermutation, Sign, VertexRole};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("exchange monomials at vertex {} have degrees {plus} and {minus}", index + 1)]
    DegreeImbalance {
        index: usize,
        plus: DegreeVector,
        minus: DegreeVector,
    },
    #[error("vertices {} and {} do not span a Kronecker subquiver (b = {b})", i + 1, j + 1)]
    NotKronecker { i: usize, j: usize, b: i64 },
    #[error("no stable linear growth within {nmax} steps")]
    NoConvergence { nmax: usize },
    #[error("seed carries no degrees")]
    MissingDegrees,
    #[error("mutation failed: {0}")]
    Mutation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct DegreeVector(Vec<[i64; 2]>);

impl DegreeVector {
    pub fn zero(points: usize) -> Self {
        Self(vec![[0, 0]; points])
    }

    pub fn from_pairs(pairs: Vec<[i64; 2]>) -> Self {
        Self(pairs)
    }

    /// `k·ϖ_w` at point `p`.
    pub fn unit(points: usize, p: usize, w: Weight, k: i64) -> Self {
        let mut v = Self::zero(points);
        v.0[p][w as usize - 1] = k;
        v
    }

    /// The same pair at every point.
    pub fn uniform(points: usize, pair: [i64; 2]) -> Self {
        Self(vec![pair; points])
    }

    pub fn pairs(&self) -> &[[i64; 2]] {
        &self.0
    }

    pub fn points(&self) -> usize {
        self.0.len()
    }

    pub fn at(&self, p: usize) -> [i64; 2] {
        self.0[p]
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|[a, b]| [a * k, b * k]).collect())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|[a, b]| *a >= 0 && *b >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|[a, b]| *a == 0 && *b == 0)
    }

    fn add_assign_scaled(&mut self, other: &Self, k: i64) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            x[0] += k * y[0];
            x[1] += k * y[1];
        }
    }

    /// Moves the block of point `p` to `perm[p]`.
    pub fn relabeled(&self, perm: &PointPermutation) -> Self {
        let mut out = Self::zero(self.points());
        for (p, pair) in self.0.iter().enumerate() {
            out.0[perm.apply(p)] = *pair;
        }
        out
    }
}

impl Add for &DegreeVector {
    type Output = DegreeVector;
    fn add(self, rhs: &DegreeVector) -> DegreeVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, 1);
        out
    }
}

impl Sub for &DegreeVector {
    type Output = DegreeVector;
    fn sub(self, rhs: &DegreeVector) -> DegreeVector {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, -1);
        out
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&[a, b]| {
                let term = |k: i64, s: &str| match k {
                    0 => None,
                    1 => Some(s.to_string()),
                    _ => Some(format!("{k}{s}")),
                };
                let ts: Vec<String> = [term(a, "ϖ1"), term(b, "ϖ2")]
                    .into_iter()
                    .flatten()
                    .collect();
                if ts.is_empty() {
                    "0".to_string()
                } else {
                    ts.join("+")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Degrees of the two face variables at corners `(λ, μ, ν)`, as `(c₁, c₂)` pairs.
fn face_table(sign: Sign, w: Weight) -> [[i64; 2]; 3] {
    match (sign, w) {
        (Sign::Plus, Weight::One) => [[1, 0], [0, 1], [1, 0]],
        (Sign::Plus, Weight::Two) => [[0, 1], [0, 1], [2, 0]],
        (Sign::Minus, Weight::One) => [[1, 0], [1, 0], [0, 1]],
        (Sign::Minus, Weight::Two) => [[0, 1], [2, 0], [0, 1]],
    }
}

/// Degrees of all variables of the seed built from `dt`.
pub fn initial_degrees(dt: &DecoratedTriangulation) -> Vec<DegreeVector> {
    let layout = dt.layout();
    let np = dt.special_point_count();
    layout
        .roles
        .iter()
        .map(|role| match *role {
            VertexRole::Face { triangle, weight } => {
                let tri = dt.triangle(triangle);
                let mut v = DegreeVector::zero(np);
                for (k, pair) in face_table(tri.sign, weight).iter().enumerate() {
                    let p = dt.point(triangle, tri.m + k);
                    v.0[p][0] += pair[0];
                    v.0[p][1] += pair[1];
                }
                v
            }
            VertexRole::Edge { edge, weight } => {
                let (t, s) = layout.edges[edge].sides[0];
                let a = DegreeVector::unit(np, dt.point(t, s), weight, 1);
                let b = DegreeVector::unit(np, dt.point(t, s + 1), weight, 1);
                &a + &b
            }
        })
        .collect()
}

/// Degrees after mutating `seed` at `k`; fails unless both exchange monomials agree.
pub fn propagate(
    seed: &QuantumSeed,
    degrees: &[DegreeVector],
    k: usize,
) -> Result<Vec<DegreeVector>, GradingError> {
    let np = degrees.first().map_or(0, DegreeVector::points);
    let mut plus = DegreeVector::zero(np);
    let mut minus = DegreeVector::zero(np);
    for (j, d) in degrees.iter().enumerate() {
        let b = seed.b(j, k);
        if b > 0 {
            plus.add_assign_scaled(d, b);
        } else if b < 0 {
            minus.add_assign_scaled(d, -b);
        }
    }
    if plus != minus {
        return Err(GradingError::DegreeImbalance {
            index: k,
            plus,
            minus,
        });
    }
    let mut out = degrees.to_vec();
    out[k] = &plus - &degrees[k];
    Ok(out)
}

/// Degree growth along `(μ_i μ_j)^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticReport {
    /// `deg[n]`: degree of the variable at `i` after `n` rounds.
    pub degrees: Vec<DegreeVector>,
    /// `deg[n+1] - deg[n]` once the second differences vanish.
    pub limit: Option<DegreeVector>,
    /// First `n` from which the growth is linear.
    pub stable_from: Option<usize>,
}

pub fn asymptotic_degree(
    seed: &QuantumSeed,
    i: usize,
    j: usize,
    nmax: usize,
) -> Result<AsymptoticReport, GradingError> {
    let b = seed.b2().get(i, j);
    let kronecker = seed.is_unfrozen(i)
        && seed.is_unfrozen(j)
        && seed.weight(i) == seed.weight(j)
        && b.abs() == 4;
    if !kronecker {
        return Err(GradingError::NotKronecker { i, j, b: b / 2 });
    }
    let mut s = seed.clone().without_frame();
    let first = s.degrees().ok_or(GradingError::MissingDegrees)?[i].clone();
    let mut degrees = vec![first];
    let lift = |e: SeedError| match e {
        SeedError::Degree(g) => g,
        other => GradingError::Mutation(other.to_string()),
    };
    for _ in 0..nmax {
        s = s.mutate(i).map_err(lift)?.mutate(j).map_err(lift)?;
        degrees.push(s.degrees().ok_or(GradingError::MissingDegrees)?[i].clone());
    }
    if nmax == 0 {
        return Ok(AsymptoticReport {
            degrees,
            limit: None,
            stable_from: None,
        });
    }
    let second = |n: usize| {
        let d = &(&degrees[n + 1] - &degrees[n]) - &(&degrees[n] - &degrees[n - 1]);
        d.is_zero()
    };
    for n0 in 1..nmax.saturating_sub(2) {
        if second(n0) && second(n0 + 1) && second(n0 + 2) {
            let limit = &degrees[n0 + 1] - &degrees[n0];
            return Ok(AsymptoticReport {
                degrees,
                limit: Some(limit),
                stable_from: Some(n0 - 1),
            });
        }
    }
    Err(GradingError::NoConvergence { nmax })
}

pub fn dt_on_degrees(degrees: &[DegreeVector], perm: &PointPermutation) -> Vec<DegreeVector> {
    degrees.iter().map(|d| d.relabeled(perm)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::triangle_surface;

    #[test]
    fn triangle_tables() {
        let plus = initial_degrees(&triangle_surface(0, Sign::Plus));
        assert_eq!(plus[0].pairs(), &[[1, 0], [0, 1], [1, 0]]);
        assert_eq!(plus[1].pairs(), &[[0, 1], [0, 1], [2, 0]]);
        let minus = initial_degrees(&triangle_surface(0, Sign::Minus));
        assert_eq!(minus[1].pairs(), &[[0, 1], [2, 0], [0, 1]]);
        // weight-2 arc on the side p2 p0 (vertex 8)
        assert_eq!(plus[7].pairs(), &[[0, 1], [0, 0], [0, 1]]);
    }

    #[test]
    fn square_shift() {
        let perm = PointPermutation(vec![1, 2, 3, 0]);
        let d = DegreeVector::from_pairs(vec![[1, 0], [0, 1], [0, 0], [0, 0]]);
        assert_eq!(
            d.relabeled(&perm).pairs(),
            &[[0, 0], [1, 0], [0, 1], [0, 0]]
        );
        assert_eq!(d.relabeled(&perm.power(4)), d);
    }

    #[test]
    fn display() {
        let d = DegreeVector::from_pairs(vec![[2, 1], [0, 0], [1, 0]]);
        assert_eq!(d.to_string(), "(2ϖ1+ϖ2, 0, ϖ1)");
    }
}
