//! Weighted quivers with half-arrows.
//!
//! `sigma2[i][j]` is twice the signed number of arrows `i → j`: a dashed
//! half-arrow counts 1, a solid arrow 2.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SquareMatrix;
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("entry ({}, {}) of the structure matrix is not a half-integer", i + 1, j + 1)]
    NonIntegral { i: usize, j: usize },
    #[error("vertex {} is frozen", index + 1)]
    FrozenMutation { index: usize },
    #[error("vertex {} out of range", index + 1)]
    IndexOutOfRange { index: usize },
    #[error(
        "identified vertices have different weights: part {0} vertex {1} and part {2} vertex {3}"
    )]
    WeightMismatch(usize, usize, usize, usize),
    #[error("part {part} vertex {} is identified more than once", vertex + 1)]
    DoubleIdentification { part: usize, vertex: usize },
    #[error("structure matrix is not skew-symmetric")]
    NotSkew,
    #[error("malformed quiver: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedQuiver {
    weights: Vec<Weight>,
    sigma2: SquareMatrix,
    frozen: Vec<bool>,
    labels: Vec<String>,
}

/// Gluing of vertex `a.1` of part `a.0` to vertex `b.1` of part `b.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identification {
    pub a: (usize, usize),
    pub b: (usize, usize),
    /// The glued pair sits on an interior edge and becomes unfrozen.
    pub interior: bool,
}

/// Result of [`amalgamate`]: the glued quiver and, per vertex, the part vertices it came from.
#[derive(Debug, Clone)]
pub struct Amalgamation {
    pub quiver: WeightedQuiver,
    pub origins: Vec<Vec<(usize, usize)>>,
}

impl WeightedQuiver {
    pub fn new(
        weights: Vec<Weight>,
        sigma2: SquareMatrix,
        frozen: Vec<bool>,
        labels: Vec<String>,
    ) -> Result<Self, QuiverError> {
        let n = weights.len();
        if sigma2.n() != n || frozen.len() != n || labels.len() != n {
            return Err(QuiverError::Malformed("inconsistent vertex counts".into()));
        }
        if !sigma2.is_skew() {
            return Err(QuiverError::NotSkew);
        }
        Ok(Self {
            weights,
            sigma2,
            frozen,
            labels,
        })
    }

    /// Builds a quiver from `(from, to, 2σ)` triples with zero-based vertices.
    pub fn from_arrows(
        weights: Vec<Weight>,
        frozen: Vec<bool>,
        labels: Vec<String>,
        arrows: &[(usize, usize, i64)],
    ) -> Result<Self, QuiverError> {
        let n = weights.len();
        let mut s = SquareMatrix::zeros(n);
        for &(i, j, v) in arrows {
            if i >= n || j >= n {
                return Err(QuiverError::IndexOutOfRange { index: i.max(j) });
            }
            s.set(i, j, s.get(i, j) + v);
            s.set(j, i, s.get(j, i) - v);
        }
        Self::new(weights, s, frozen, labels)
    }

    /// `σ_ij = d_i⁻¹ ε_ij gcd(d_i, d_j)` with `ε = Bᵀ`; `b2` holds `2B`.
    pub fn from_exchange(
        b2: &SquareMatrix,
        weights: &[Weight],
        frozen: &[bool],
    ) -> Result<Self, QuiverError> {
        let n = b2.n();
        let mut s = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let num = b2.get(j, i) * weights[i].gcd(weights[j]);
                if num % weights[i].d() != 0 {
                    return Err(QuiverError::NonIntegral { i, j });
                }
                s.set(i, j, num / weights[i].d());
            }
        }
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Self::new(weights.to_vec(), s, frozen.to_vec(), labels)
    }

    /// Inverse of [`WeightedQuiver::from_exchange`]: returns `(2B, D, frozen)`.
    pub fn to_exchange(&self) -> (SquareMatrix, Vec<Weight>, Vec<bool>) {
        let n = self.n();
        let mut b2 = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = self.weights[i].d() / self.weights[i].gcd(self.weights[j]);
                b2.set(j, i, self.sigma2.get(i, j) * d);
            }
        }
        (b2, self.weights.clone(), self.frozen.clone())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn sigma2(&self) -> &SquareMatrix {
        &self.sigma2
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mutate(&self, k: usize) -> Result<Self, QuiverError> {
        if k >= self.n() {
            return Err(QuiverError::IndexOutOfRange { index: k });
        }
        if self.frozen[k] {
            return Err(QuiverError::FrozenMutation { index: k });
        }
        let n = self.n();
        let s = &self.sigma2;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -s.get(i, j)
                } else {
                    let alpha = if self.weights[i] == self.weights[j]
                        && self.weights[i] != self.weights[k]
                    {
                        2
                    } else {
                        1
                    };
                    let (a, b) = (s.get(i, k), s.get(k, j));
                    let delta = alpha * (a.max(0) * b.max(0) - (-a).max(0) * (-b).max(0));
                    if delta % 2 != 0 {
                        return Err(QuiverError::NonIntegral { i, j });
                    }
                    s.get(i, j) + delta / 2
                };
                out.set(i, j, v);
            }
        }
        Ok(Self {
            sigma2: out,
            ..self.clone()
        })
    }

    /// Reorders vertices so that vertex `i` moves to `sigma[i]`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let n = self.n();
        let mut weights = self.weights.clone();
        let mut frozen = self.frozen.clone();
        let mut labels = self.labels.clone();
        for i in 0..n {
            weights[sigma[i]] = self.weights[i];
            frozen[sigma[i]] = self.frozen[i];
            labels[sigma[i]] = self.labels[i].clone();
        }
        Self {
            weights,
            sigma2: self.sigma2.permuted(sigma),
            frozen,
            labels,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, QuiverError> {
        if labels.len() != self.n() {
            return Err(QuiverError::Malformed("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Graphviz drawing: weight-2 vertices doubled, half-arrows dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for i in 0..self.n() {
            let shape = match self.weights[i] {
                Weight::One => "circle",
                Weight::Two => "doublecircle",
            };
            let style = if self.frozen[i] { ", style=dashed" } else { "" };
            let _ = writeln!(
                s,
                "  v{i} [label=\"{}\", shape={shape}{style}];",
                self.labels[i]
            );
        }
        for i in 0..self.n() {
            for j in 0..self.n() {
                let v = self.sigma2.get(i, j);
                if v <= 0 {
                    continue;
                }
                for _ in 0..v / 2 {
                    let _ = writeln!(s, "  v{i} -> v{j};");
                }
                if v % 2 == 1 {
                    let _ = writeln!(s, "  v{i} -> v{j} [style=dashed];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Glues quivers along identified vertices, adding arrow multiplicities.
///
/// Vertices are numbered in order of first appearance across the parts.
pub fn amalgamate(
    parts: &[WeightedQuiver],
    identifications: &[Identification],
) -> Result<Amalgamation, QuiverError> {
    let mut partner: HashMap<(usize, usize), ((usize, usize), bool)> = HashMap::new();
    for id in identifications {
        for (x, y) in [(id.a, id.b), (id.b, id.a)] {
            let (p, v) = x;
            if p >= parts.len() || v >= parts[p].n() {
                return Err(QuiverError::IndexOutOfRange { index: v });
            }
            if partner.insert(x, (y, id.interior)).is_some() {
                return Err(QuiverError::DoubleIdentification { part: p, vertex: v });
            }
        }
        if parts[id.a.0].weights[id.a.1] != parts[id.b.0].weights[id.b.1] {
            return Err(QuiverError::WeightMismatch(id.a.0, id.a.1, id.b.0, id.b.1));
        }
    }
    let mut global: HashMap<(usize, usize), usize> = HashMap::new();
    let mut origins: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut weights = Vec::new();
    let mut frozen = Vec::new();
    let mut labels = Vec::new();
    for (p, q) in parts.iter().enumerate() {
        for v in 0..q.n() {
            if global.contains_key(&(p, v)) {
                continue;
            }
            let g = origins.len();
            global.insert((p, v), g);
            let mut origin = vec![(p, v)];
            let mut is_frozen = q.frozen[v];
            if let Some(&(other, interior)) = partner.get(&(p, v)) {
                global.insert(other, g);
                origin.push(other);
                is_frozen = if interior {
                    false
                } else {
                    is_frozen && parts[other.0].frozen[other.1]
                };
            }
            origins.push(origin);
            weights.push(q.weights[v]);
            frozen.push(is_frozen);
            labels.push(q.labels[v].clone());
        }
    }
    let n = origins.len();
    let mut s = SquareMatrix::zeros(n);
    for (p, q) in parts.iter().enumerate() {
        for i in 0..q.n() {
            for j in 0..q.n() {
                let v = q.sigma2.get(i, j);
                if v != 0 {
                    let (gi, gj) = (global[&(p, i)], global[&(p, j)]);
                    s.set(gi, gj, s.get(gi, gj) + v);
                }
            }
        }
    }
    Ok(Amalgamation {
        quiver: WeightedQuiver::new(weights, s, frozen, labels)?,
        origins,
    })
}

#[derive(Deserialize)]
struct TemplateVertices {
    labels: Vec<String>,
    weights: Vec<Weight>,
    frozen: Vec<usize>,
}

#[derive(Deserialize)]
struct TemplateFile {
    vertices: TemplateVertices,
    arrows: HashMap<String, Vec<(usize, usize, i64)>>,
}

const TEMPLATES: &str = include_str!("../fixtures/triangle_quivers.json");

/// The 8-vertex quiver of a decorated triangle; `plus` selects the sign.
///
/// Local vertices: 0, 1 interior; then two per edge λμ, μν, νλ, weight 1 first.
pub fn triangle_template(plus: bool) -> WeightedQuiver {
    let file: TemplateFile =
        serde_json::from_str(TEMPLATES).expect("bundled quiver fixture parses");
    let key = if plus { "+" } else { "-" };
    let arrows: Vec<(usize, usize, i64)> = file.arrows[key]
        .iter()
        .map(|&(i, j, v)| (i - 1, j - 1, v))
        .collect();
    let n = file.vertices.weights.len();
    let mut frozen = vec![false; n];
    for &f in &file.vertices.frozen {
        frozen[f - 1] = true;
    }
    WeightedQuiver::from_arrows(file.vertices.weights, frozen, file.vertices.labels, &arrows)
        .expect("bundled quiver fixture is well formed")
}
