//! Decorated triangulations of unpunctured surfaces and the seeds built from them.
//!
//! Triangle `t` lists its corners counterclockwise; slot `s` is the side from
//! corner `s` to corner `s + 1`. Vertex numbering of a built seed: for each
//! triangle in order its two face vertices (weight 1, then weight 2) followed by
//! its not yet numbered interior sides, then the boundary sides in
//! counterclockwise order starting from the first boundary slot of triangle 0.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading;
use crate::qseed::{CompatibilityReport, QuantumSeed, SeedError};
use crate::qtorus::SkewForm;
use crate::webcat::{self, WebError};
use crate::weight::Weight;
use crate::wquiver::{amalgamate, triangle_template, Identification, QuiverError, WeightedQuiver};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("Pi has size {found}, the triangulation needs {expected}")]
    MissingPi { expected: usize, found: usize },
    #[error("built seed fails the compatibility relation on rows {:?}", .0.failing_rows().iter().map(|i| i + 1).collect::<Vec<_>>())]
    CompatibilityFailure(CompatibilityReport),
    #[error("side {slot} of triangle {triangle} is a boundary side")]
    BoundaryEdge { triangle: usize, slot: usize },
    #[error("flip needs a quadrilateral with four distinct special points and sides")]
    UnsupportedFlip,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Web(#[from] WebError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub corners: [String; 3],
    /// Index of the distinguished corner.
    pub m: usize,
    pub sign: Sign,
}

/// Position of a corner: `(triangle, corner index)`.
pub type CornerRef = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub triangles: Vec<Triangle>,
    #[serde(default)]
    pub gluings: Vec<[usize; 4]>,
    #[serde(rename = "specialPoints")]
    pub special_points: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedTriangulation {
    triangles: Vec<Triangle>,
    glue: Vec<[Option<(usize, usize)>; 3]>,
    special_points: Vec<Vec<CornerRef>>,
    point_of: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    Face { triangle: usize, weight: Weight },
    Edge { edge: usize, weight: Weight },
}

/// A side of the triangulation: one slot if on the boundary, two if interior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub sides: Vec<(usize, usize)>,
}

impl EdgeClass {
    pub fn interior(&self) -> bool {
        self.sides.len() == 2
    }
}

/// Assignment of seed indices to faces and sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedLayout {
    pub roles: Vec<VertexRole>,
    pub edges: Vec<EdgeClass>,
    edge_of_slot: Vec<[usize; 3]>,
    face_index: Vec<[usize; 2]>,
    edge_index: Vec<[usize; 2]>,
}

impl SeedLayout {
    pub fn n(&self) -> usize {
        self.roles.len()
    }

    pub fn face(&self, t: usize, w: Weight) -> usize {
        self.face_index[t][w as usize - 1]
    }

    pub fn edge_vertex(&self, edge: usize, w: Weight) -> usize {
        self.edge_index[edge][w as usize - 1]
    }

    pub fn edge_of_slot(&self, t: usize, s: usize) -> usize {
        self.edge_of_slot[t][s]
    }

    pub fn slot_vertex(&self, t: usize, s: usize, w: Weight) -> usize {
        self.edge_vertex(self.edge_of_slot(t, s), w)
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.roles
            .iter()
            .map(|r| match *r {
                VertexRole::Face { weight, .. } | VertexRole::Edge { weight, .. } => weight,
            })
            .collect()
    }

    pub fn unfrozen(&self) -> Vec<bool> {
        self.roles
            .iter()
            .map(|r| match *r {
                VertexRole::Face { .. } => true,
                VertexRole::Edge { edge, .. } => self.edges[edge].interior(),
            })
            .collect()
    }

    /// Seed index of template vertex `local` (0..8) of triangle `t` with distinguished corner `m`.
    pub fn template_vertex(&self, t: usize, m: usize, local: usize) -> usize {
        let w = if local.is_multiple_of(2) {
            Weight::One
        } else {
            Weight::Two
        };
        match local {
            0 | 1 => self.face(t, w),
            _ => self.slot_vertex(t, (m + (local - 2) / 2) % 3, w),
        }
    }
}

/// How `Π` is supplied to [`build_seed`].
#[derive(Debug, Clone)]
pub enum PiSource {
    /// Computed from web skeletons.
    Auto,
    Given(SkewForm),
}

/// Mutation words changing the decoration of one triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationWords {
    /// `(μ₁μ₂)`: moves the distinguished corner by one step.
    pub rotate: Vec<usize>,
    /// `(μ₁μ₂μ₁)`: changes the sign and keeps the distinguished corner.
    pub sign_change: Vec<usize>,
}

/// A permutation of special points: `p ↦ perm[p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointPermutation(pub Vec<usize>);

impl PointPermutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn apply(&self, p: usize) -> usize {
        self.0[p]
    }

    pub fn compose(&self, then: &PointPermutation) -> Self {
        Self(self.0.iter().map(|&p| then.0[p]).collect())
    }

    pub fn power(&self, k: usize) -> Self {
        let mut out = Self::identity(self.0.len());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }
}

/// Data for realizing a flip by mutations.
#[derive(Debug, Clone)]
pub struct FlipPlan {
    /// Rotation and sign words bringing both triangles to the start decoration.
    pub prepare: Vec<usize>,
    pub prepared: DecoratedTriangulation,
    /// The 8-step word `(μ₃μ₄)(μ₁μ₂μ₅μ₆)(μ₃μ₄)` in seed indices.
    pub word: Vec<usize>,
    pub flipped: DecoratedTriangulation,
    /// Vertex `i` of the endpoint seed is vertex `relabeling[i]` of the flipped build.
    pub relabeling: Vec<usize>,
    /// Seed indices of the local quadrilateral labels 1..=14.
    pub local: [usize; 14],
}

const SECTOR: i64 = 100;

impl DecoratedTriangulation {
    pub fn from_json(js: &TriangulationJson) -> Result<Self, SurfaceError> {
        let nt = js.triangles.len();
        let bad = |m: String| Err(SurfaceError::Invalid(m));
        if nt == 0 {
            return bad("no triangles".into());
        }
        for (t, tri) in js.triangles.iter().enumerate() {
            if tri.m > 2 {
                return bad(format!(
                    "triangle {t}: distinguished corner {} out of range",
                    tri.m
                ));
            }
        }
        let mut glue = vec![[None; 3]; nt];
        for g in &js.gluings {
            let (a, b) = ((g[0], g[1]), (g[2], g[3]));
            for (t, s) in [a, b] {
                if t >= nt || s > 2 {
                    return bad(format!("gluing {g:?} out of range"));
                }
            }
            if a == b {
                return bad(format!("slot {a:?} glued to itself"));
            }
            if glue[a.0][a.1].is_some() || glue[b.0][b.1].is_some() {
                return bad(format!("gluing {g:?} reuses a slot"));
            }
            glue[a.0][a.1] = Some(b);
            glue[b.0][b.1] = Some(a);
        }
        let mut point_of = vec![[usize::MAX; 3]; nt];
        for (p, corners) in js.special_points.iter().enumerate() {
            if corners.is_empty() {
                return bad(format!("special point {p} has no corners"));
            }
            for &[t, c] in corners {
                if t >= nt || c > 2 {
                    return bad(format!("corner {:?} out of range", (t, c)));
                }
                if point_of[t][c] != usize::MAX {
                    return bad(format!("corner {:?} listed twice", (t, c)));
                }
                point_of[t][c] = p;
            }
        }
        if point_of.iter().flatten().any(|&p| p == usize::MAX) {
            return bad("some corner belongs to no special point".into());
        }
        let dt = Self {
            triangles: js.triangles.clone(),
            glue,
            special_points: js
                .special_points
                .iter()
                .map(|v| v.iter().map(|&[t, c]| (t, c)).collect())
                .collect(),
            point_of,
        };
        for t in 0..nt {
            for s in 0..3 {
                if let Some((u, r)) = dt.glue[t][s] {
                    if dt.point(t, s) != dt.point(u, (r + 1) % 3)
                        || dt.point(t, (s + 1) % 3) != dt.point(u, r)
                    {
                        return bad(format!(
                            "gluing of ({t},{s}) with ({u},{r}) mismatches special points"
                        ));
                    }
                }
            }
        }
        for p in 0..dt.special_points.len() {
            dt.sector_chain(p)?;
        }
        Ok(dt)
    }

    pub fn to_json(&self) -> TriangulationJson {
        let mut gluings = Vec::new();
        for t in 0..self.triangles.len() {
            for s in 0..3 {
                if let Some((u, r)) = self.glue[t][s] {
                    if (t, s) < (u, r) {
                        gluings.push([t, s, u, r]);
                    }
                }
            }
        }
        TriangulationJson {
            triangles: self.triangles.clone(),
            gluings,
            special_points: self
                .special_points
                .iter()
                .map(|v| v.iter().map(|&(t, c)| [t, c]).collect())
                .collect(),
        }
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &Triangle {
        &self.triangles[t]
    }

    pub fn special_point_count(&self) -> usize {
        self.special_points.len()
    }

    /// Special point at corner `c` of triangle `t`.
    pub fn point(&self, t: usize, c: usize) -> usize {
        self.point_of[t][c % 3]
    }

    pub fn glued(&self, t: usize, s: usize) -> Option<(usize, usize)> {
        self.glue[t][s]
    }

    /// Corners at special point `p` in clockwise order, starting at the
    /// sector that touches the incoming boundary side.
    pub fn sector_chain(&self, p: usize) -> Result<Vec<CornerRef>, SurfaceError> {
        let corners = &self.special_points[p];
        let starts: Vec<CornerRef> = corners
            .iter()
            .copied()
            .filter(|&(t, c)| self.glue[t][(c + 2) % 3].is_none())
            .collect();
        if starts.len() != 1 {
            return Err(SurfaceError::Invalid(format!(
                "special point {p} must touch exactly one incoming boundary side, found {}",
                starts.len()
            )));
        }
        let mut chain = vec![starts[0]];
        loop {
            let (t, c) = *chain.last().expect("nonempty");
            match self.glue[t][c] {
                None => break,
                Some((u, r)) => {
                    let next = (u, (r + 1) % 3);
                    if chain.contains(&next) || chain.len() > corners.len() {
                        return Err(SurfaceError::Invalid(format!(
                            "special point {p}: corners form a cycle"
                        )));
                    }
                    chain.push(next);
                }
            }
        }
        if chain.len() != corners.len() {
            return Err(SurfaceError::Invalid(format!(
                "special point {p}: corners do not form one fan"
            )));
        }
        Ok(chain)
    }

    /// Angular offset of corner `(t, c)` within its special point.
    pub fn sector_offset(&self, t: usize, c: usize) -> i64 {
        let chain = self
            .sector_chain(self.point(t, c))
            .expect("validated on construction");
        let k = chain
            .iter()
            .position(|&x| x == (t, c % 3))
            .expect("corner in its fan");
        k as i64 * SECTOR
    }

    pub fn sector_width(&self) -> i64 {
        SECTOR
    }

    /// Outgoing boundary slot at special point `p`.
    fn outgoing_boundary(&self, p: usize) -> (usize, usize) {
        let chain = self.sector_chain(p).expect("validated on construction");
        *chain.last().expect("nonempty")
    }

    pub fn layout(&self) -> SeedLayout {
        let nt = self.triangles.len();
        let mut roles = Vec::new();
        let mut edges: Vec<EdgeClass> = Vec::new();
        let mut edge_of_slot = vec![[usize::MAX; 3]; nt];
        let mut face_index = vec![[0; 2]; nt];
        let mut edge_index = Vec::new();
        let mut new_edge = |sides: Vec<(usize, usize)>,
                            roles: &mut Vec<VertexRole>,
                            edge_of_slot: &mut Vec<[usize; 3]>| {
            let e = edges.len();
            for &(t, s) in &sides {
                edge_of_slot[t][s] = e;
            }
            edges.push(EdgeClass { sides });
            let base = roles.len();
            roles.push(VertexRole::Edge {
                edge: e,
                weight: Weight::One,
            });
            roles.push(VertexRole::Edge {
                edge: e,
                weight: Weight::Two,
            });
            edge_index.push([base, base + 1]);
        };
        for t in 0..nt {
            face_index[t] = [roles.len(), roles.len() + 1];
            roles.push(VertexRole::Face {
                triangle: t,
                weight: Weight::One,
            });
            roles.push(VertexRole::Face {
                triangle: t,
                weight: Weight::Two,
            });
            for s in 0..3 {
                if let Some(other) = self.glue[t][s] {
                    if edge_of_slot[t][s] == usize::MAX {
                        new_edge(vec![(t, s), other], &mut roles, &mut edge_of_slot);
                    }
                }
            }
        }
        for t in 0..nt {
            for s in 0..3 {
                if self.glue[t][s].is_some() || edge_of_slot[t][s] != usize::MAX {
                    continue;
                }
                let start = (t, s);
                let mut cur = start;
                loop {
                    new_edge(vec![cur], &mut roles, &mut edge_of_slot);
                    let end = self.point(cur.0, cur.1 + 1);
                    cur = self.outgoing_boundary(end);
                    if cur == start {
                        break;
                    }
                }
            }
        }
        SeedLayout {
            roles,
            edges,
            edge_of_slot,
            face_index,
            edge_index,
        }
    }

    /// The amalgamated weighted quiver, vertices numbered by [`SeedLayout`].
    pub fn quiver(&self) -> Result<WeightedQuiver, SurfaceError> {
        let layout = self.layout();
        let parts: Vec<WeightedQuiver> = self
            .triangles
            .iter()
            .map(|tri| triangle_template(tri.sign == Sign::Plus))
            .collect();
        let local_of_slot = |t: usize, s: usize| 2 + 2 * ((s + 3 - self.triangles[t].m) % 3);
        let mut ids = Vec::new();
        for t in 0..self.triangles.len() {
            for s in 0..3 {
                if let Some((u, r)) = self.glue[t][s] {
                    if (t, s) < (u, r) {
                        for w in 0..2 {
                            ids.push(Identification {
                                a: (t, local_of_slot(t, s) + w),
                                b: (u, local_of_slot(u, r) + w),
                                interior: true,
                            });
                        }
                    }
                }
            }
        }
        let glued = amalgamate(&parts, &ids)?;
        let mut sigma = vec![0; glued.quiver.n()];
        for (g, origin) in glued.origins.iter().enumerate() {
            let (t, local) = origin[0];
            sigma[g] = layout.template_vertex(t, self.triangles[t].m, local);
        }
        let q = glued.quiver.permuted(&sigma);
        let labels = (1..=q.n()).map(|i| i.to_string()).collect();
        Ok(q.with_labels(labels)?)
    }

    /// Shift of special points by one step along the boundary.
    pub fn dt_transform(&self) -> PointPermutation {
        PointPermutation(
            (0..self.special_points.len())
                .map(|p| {
                    let (t, s) = self.outgoing_boundary(p);
                    self.point(t, s + 1)
                })
                .collect(),
        )
    }

    pub fn with_decoration(&self, t: usize, m: usize, sign: Sign) -> Self {
        let mut out = self.clone();
        out.triangles[t].m = m % 3;
        out.triangles[t].sign = sign;
        out
    }

    pub fn rotation_sequence(&self, t: usize) -> RotationWords {
        let layout = self.layout();
        let (a, b) = (layout.face(t, Weight::One), layout.face(t, Weight::Two));
        RotationWords {
            rotate: vec![a, b],
            sign_change: vec![a, b, a],
        }
    }

    /// Decoration of triangle `t` after applying `word` built from its two face vertices.
    pub fn decoration_after(&self, t: usize, word: &[usize]) -> Option<(usize, Sign)> {
        let layout = self.layout();
        let (a, b) = (layout.face(t, Weight::One), layout.face(t, Weight::Two));
        let tri = &self.triangles[t];
        let (mut m, mut sign) = (tri.m, tri.sign);
        let mut rest = word;
        while !rest.is_empty() {
            if rest.len() >= 3 && rest[..3] == [a, b, a] {
                sign = sign.flipped();
                rest = &rest[3..];
            } else if rest.len() >= 2 && rest[..2] == [a, b] {
                m = match sign {
                    Sign::Plus => (m + 2) % 3,
                    Sign::Minus => (m + 1) % 3,
                };
                rest = &rest[2..];
            } else if rest.len() >= 2 && rest[..2] == [b, a] {
                m = match sign {
                    Sign::Plus => (m + 1) % 3,
                    Sign::Minus => (m + 2) % 3,
                };
                rest = &rest[2..];
            } else {
                return None;
            }
        }
        Some((m, sign))
    }

    /// Word changing triangle `t` to decoration `(m, sign)`.
    pub fn normalize_word(&self, t: usize, m: usize, sign: Sign) -> Vec<usize> {
        let words = self.rotation_sequence(t);
        let tri = &self.triangles[t];
        let mut word = Vec::new();
        if tri.sign != sign {
            word.extend(&words.sign_change);
        }
        let (a, b) = (words.rotate[0], words.rotate[1]);
        let forward = match sign {
            Sign::Plus => vec![b, a],
            Sign::Minus => vec![a, b],
        };
        let backward = vec![forward[1], forward[0]];
        match (m + 3 - tri.m) % 3 {
            1 => word.extend(forward),
            2 => word.extend(backward),
            _ => {}
        }
        word
    }

    /// Mutation data realizing the flip of side `slot` of triangle `t`.
    pub fn flip_sequence(&self, t: usize, slot: usize) -> Result<FlipPlan, SurfaceError> {
        let s = slot % 3;
        let (u, r) = self.glue[t][s].ok_or(SurfaceError::BoundaryEdge { triangle: t, slot })?;
        if u == t {
            return Err(SurfaceError::UnsupportedFlip);
        }
        let (a, b, x) = ((s + 1) % 3, s, (s + 2) % 3);
        let (ub, uy) = ((r + 1) % 3, (r + 2) % 3);
        let pts = [
            self.point(t, a),
            self.point(t, x),
            self.point(t, b),
            self.point(u, uy),
        ];
        let mut sorted = pts;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(SurfaceError::UnsupportedFlip);
        }
        let mut prepare = self.normalize_word(t, a, Sign::Plus);
        prepare.extend(self.normalize_word(u, ub, Sign::Minus));
        let prepared = self
            .with_decoration(t, a, Sign::Plus)
            .with_decoration(u, ub, Sign::Minus);
        let layout = self.layout();
        let side = |tt: usize, ss: usize, w: Weight| layout.slot_vertex(tt, ss % 3, w);
        let local = [
            layout.face(t, Weight::One),
            layout.face(t, Weight::Two),
            side(t, s, Weight::One),
            side(t, s, Weight::Two),
            layout.face(u, Weight::One),
            layout.face(u, Weight::Two),
            side(t, a, Weight::One),
            side(t, a, Weight::Two),
            side(t, x, Weight::One),
            side(t, x, Weight::Two),
            side(u, ub, Weight::One),
            side(u, ub, Weight::Two),
            side(u, uy, Weight::One),
            side(u, uy, Weight::Two),
        ];
        let word: Vec<usize> = [3, 4, 1, 2, 5, 6, 3, 4]
            .iter()
            .map(|&l| local[l - 1])
            .collect();

        // New triangles: t = (a, x, y) with (-, x); u = (x, b, y) with (+, y).
        let name = |tt: usize, c: usize| self.triangles[tt].corners[c].clone();
        let mut flipped = self.clone();
        flipped.triangles[t] = Triangle {
            corners: [name(t, a), name(t, x), name(u, uy)],
            m: 1,
            sign: Sign::Minus,
        };
        flipped.triangles[u] = Triangle {
            corners: [name(t, x), name(t, b), name(u, uy)],
            m: 2,
            sign: Sign::Plus,
        };
        // Old side slot -> new side slot.
        let side_map: HashMap<(usize, usize), (usize, usize)> = [
            ((t, a), (t, 0)),
            ((t, x), (u, 0)),
            ((u, ub), (u, 1)),
            ((u, uy), (t, 2)),
        ]
        .into_iter()
        .collect();
        let remap = |slot: (usize, usize)| side_map.get(&slot).copied().unwrap_or(slot);
        let mut glue = vec![[None; 3]; self.triangles.len()];
        for tt in 0..self.triangles.len() {
            for ss in 0..3 {
                if (tt, ss) == (t, s) || (tt, ss) == (u, r) {
                    continue;
                }
                if tt == t || tt == u {
                    let Some(&new) = side_map.get(&(tt, ss)) else {
                        continue;
                    };
                    glue[new.0][new.1] = self.glue[tt][ss].map(remap);
                } else {
                    glue[tt][ss] = self.glue[tt][ss].map(remap);
                }
            }
        }
        glue[t][1] = Some((u, 2));
        glue[u][2] = Some((t, 1));
        flipped.glue = glue;
        let (pa, px, pb, py) = (pts[0], pts[1], pts[2], pts[3]);
        for (p, corners) in flipped.special_points.iter_mut().enumerate() {
            corners.retain(|&(tt, _)| tt != t && tt != u);
            if p == pa {
                corners.push((t, 0));
            }
            if p == px {
                corners.push((t, 1));
                corners.push((u, 0));
            }
            if p == pb {
                corners.push((u, 1));
            }
            if p == py {
                corners.push((t, 2));
                corners.push((u, 2));
            }
        }
        flipped.point_of = vec![[usize::MAX; 3]; flipped.triangles.len()];
        for (p, corners) in flipped.special_points.iter().enumerate() {
            for &(tt, c) in corners {
                flipped.point_of[tt][c] = p;
            }
        }
        for p in 0..flipped.special_points.len() {
            flipped.sector_chain(p)?;
        }

        let new_layout = flipped.layout();
        let relabeling = layout
            .roles
            .iter()
            .map(|role| match *role {
                VertexRole::Face { triangle, weight } => new_layout.face(triangle, weight),
                VertexRole::Edge { edge, weight } => {
                    let sides = &layout.edges[edge].sides;
                    let target = if sides.contains(&(t, s)) {
                        (t, 1)
                    } else {
                        let &(tt, ss) = sides
                            .iter()
                            .find(|&&(tt, _)| tt != t && tt != u)
                            .unwrap_or(&sides[0]);
                        remap((tt, ss))
                    };
                    new_layout.slot_vertex(target.0, target.1, weight)
                }
            })
            .collect();
        Ok(FlipPlan {
            prepare,
            prepared,
            word,
            flipped,
            relabeling,
            local,
        })
    }
}

/// Builds the quantum seed of a decorated triangulation.
pub fn build_seed(dt: &DecoratedTriangulation, pi: &PiSource) -> Result<QuantumSeed, SurfaceError> {
    let layout = dt.layout();
    let n = layout.n();
    let q = dt.quiver()?;
    let (b2, weights, _) = q.to_exchange();
    let pi = match pi {
        PiSource::Auto => webcat::catalog_for(dt)?.pi_matrix()?,
        PiSource::Given(f) => {
            if f.n() != n {
                return Err(SurfaceError::MissingPi {
                    expected: n,
                    found: f.n(),
                });
            }
            f.clone()
        }
    };
    let seed = QuantumSeed::new(b2, pi, weights, layout.unfrozen())?
        .with_initial_frame()
        .with_degrees(grading::initial_degrees(dt))?;
    let report = seed.check_compatibility();
    if !report.passed() {
        return Err(SurfaceError::CompatibilityFailure(report));
    }
    Ok(seed)
}

/// The triangle `p0 p1 p2` with decoration `(m, sign)`.
pub fn triangle_surface(m: usize, sign: Sign) -> DecoratedTriangulation {
    let js = TriangulationJson {
        triangles: vec![Triangle {
            corners: ["p0".into(), "p1".into(), "p2".into()],
            m,
            sign,
        }],
        gluings: vec![],
        special_points: vec![vec![[0, 0]], vec![[0, 1]], vec![[0, 2]]],
    };
    DecoratedTriangulation::from_json(&js).expect("triangle is valid")
}

/// The square `p0 p1 p2 p3` (counterclockwise) with diagonal `p0 p2`.
/// Triangle 0 is `(p0, p1, p2)`, triangle 1 is `(p2, p3, p0)`; decorations are
/// given as special-point indices.
pub fn square_surface(lower: (usize, Sign), upper: (usize, Sign)) -> DecoratedTriangulation {
    let lower_m = match lower.0 {
        0 => 0,
        1 => 1,
        2 => 2,
        p => panic!("p{p} is not a corner of the lower triangle"),
    };
    let upper_m = match upper.0 {
        2 => 0,
        3 => 1,
        0 => 2,
        p => panic!("p{p} is not a corner of the upper triangle"),
    };
    let js = TriangulationJson {
        triangles: vec![
            Triangle {
                corners: ["p0".into(), "p1".into(), "p2".into()],
                m: lower_m,
                sign: lower.1,
            },
            Triangle {
                corners: ["p2".into(), "p3".into(), "p0".into()],
                m: upper_m,
                sign: upper.1,
            },
        ],
        gluings: vec![[0, 2, 1, 2]],
        special_points: vec![
            vec![[0, 0], [1, 2]],
            vec![[0, 1]],
            vec![[0, 2], [1, 0]],
            vec![[1, 1]],
        ],
    };
    DecoratedTriangulation::from_json(&js).expect("square is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_layout_matches_labels() {
        let dt = square_surface((0, Sign::Plus), (2, Sign::Plus));
        let l = dt.layout();
        assert_eq!(l.n(), 14);
        assert_eq!(l.face(0, Weight::One), 0);
        assert_eq!(l.slot_vertex(0, 2, Weight::One), 2);
        assert_eq!(l.face(1, Weight::Two), 5);
        assert_eq!(l.slot_vertex(0, 0, Weight::One), 6);
        assert_eq!(l.slot_vertex(0, 1, Weight::Two), 9);
        assert_eq!(l.slot_vertex(1, 0, Weight::One), 10);
        assert_eq!(l.slot_vertex(1, 1, Weight::Two), 13);
        assert_eq!(l.unfrozen(), [vec![true; 6], vec![false; 8]].concat());
    }

    #[test]
    fn dt_is_boundary_rotation() {
        let sq = square_surface((0, Sign::Plus), (2, Sign::Plus));
        assert_eq!(sq.dt_transform().0, vec![1, 2, 3, 0]);
        assert_eq!(sq.dt_transform().power(4), PointPermutation::identity(4));
        let tri = triangle_surface(0, Sign::Plus);
        assert_eq!(tri.dt_transform().power(3), PointPermutation::identity(3));
    }

    #[test]
    fn rejects_bad_gluing() {
        let mut js = square_surface((0, Sign::Plus), (2, Sign::Plus)).to_json();
        js.gluings = vec![[0, 2, 1, 0]];
        assert!(DecoratedTriangulation::from_json(&js).is_err());
    }

    #[test]
    fn normalize_reaches_target() {
        let dt = triangle_surface(0, Sign::Plus);
        for sign in [Sign::Plus, Sign::Minus] {
            for m in 0..3 {
                let w = dt.normalize_word(0, m, sign);
                assert_eq!(dt.decoration_after(0, &w), Some((m, sign)));
            }
        }
    }

    #[test]
    fn boundary_flip_rejected() {
        let dt = square_surface((0, Sign::Plus), (2, Sign::Plus));
        assert!(matches!(
            dt.flip_sequence(0, 0),
            Err(SurfaceError::BoundaryEdge { .. })
        ));
    }
}
