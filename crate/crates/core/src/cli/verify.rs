//! Built-in oracle suites behind `qcluster verify`.

use std::fmt;

use clap::ValueEnum;
use serde::Serialize;

use crate::grading::{asymptotic_degree, DegreeVector};
use crate::qseed::{explore, parse_rhs, CanonicalScope, ExploreOptions, QuantumSeed, Term};
use crate::surface::{
    build_seed, square_surface, triangle_surface, DecoratedTriangulation, PiSource, Sign,
};
use crate::webcat::{catalog_for, dt_on_skeleton, pinwheel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifySuite {
    Triangle,
    Quad,
    Flip,
    Infinite,
    All,
}

impl VerifySuite {
    fn parts(self) -> &'static [VerifySuite] {
        use VerifySuite::*;
        match self {
            All => &[Triangle, Quad, Flip, Infinite],
            Triangle => &[Triangle],
            Quad => &[Quad],
            Flip => &[Flip],
            Infinite => &[Infinite],
        }
    }

    fn label(self) -> &'static str {
        match self {
            VerifySuite::Triangle => "triangle",
            VerifySuite::Quad => "quad",
            VerifySuite::Flip => "flip",
            VerifySuite::Infinite => "infinite",
            VerifySuite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Depth of the quadrilateral exploration.
    pub depth: usize,
    /// Rounds of the Kronecker mutation sequences.
    pub nmax: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { depth: 2, nmax: 20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}", self.suite, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

struct Report {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn fail(&mut self, name: impl Into<String>, err: impl fmt::Display) {
        self.push(name, false, format!("error: {err}"));
    }

    /// Compares the relation predicted at `k` with `expected`, written in positional names.
    fn relation(&mut self, name: &str, seed: &QuantumSeed, k: usize, expected: &str) {
        match seed.predict_exchange(k) {
            Ok(rel) => {
                let want = parse_rhs(expected, seed.n()).expect("oracle strings parse");
                let got = rel.expanded(crate::qseed::Naming::Positional, "v");
                let detail = if rel.same_terms(&want) {
                    got
                } else {
                    format!("engine {got}; expected {expected}")
                };
                self.push(name, rel.same_terms(&want), detail);
            }
            Err(e) => self.fail(name, e),
        }
    }
}

/// The five decorations of the square used throughout the quadrilateral suite.
pub fn quad_case(case: usize) -> DecoratedTriangulation {
    let (lower, upper) = [(0, 2), (0, 0), (1, 3), (2, 3), (0, 3)][case];
    square_surface((lower, Sign::Plus), (upper, Sign::Plus))
}

const CASE_NAMES: [&str; 5] = ["I", "II", "III", "IV", "V"];

fn auto(dt: &DecoratedTriangulation) -> Result<QuantumSeed, String> {
    build_seed(dt, &PiSource::Auto).map_err(|e| e.to_string())
}

pub fn run(suite: VerifySuite, opts: VerifyOptions) -> Vec<Check> {
    suite
        .parts()
        .iter()
        .flat_map(|&part| {
            let mut r = Report {
                suite: part.label(),
                checks: Vec::new(),
            };
            match part {
                VerifySuite::Triangle => triangle(&mut r),
                VerifySuite::Quad => quad(&mut r, opts.depth),
                VerifySuite::Flip => flip(&mut r),
                VerifySuite::Infinite => infinite(&mut r, opts.nmax),
                VerifySuite::All => unreachable!(),
            }
            r.checks
        })
        .collect()
}

fn triangle(r: &mut Report) {
    let seed = match auto(&triangle_surface(0, Sign::Plus)) {
        Ok(s) => s,
        Err(e) => return r.fail("build", e),
    };
    let rep = seed.check_compatibility();
    r.push(
        "compatibility",
        rep.passed() && rep.value(0, 0) == Some(2) && rep.value(1, 1) == Some(4),
        format!(
            "Pi(X1,e1) = {:?}, Pi(X2,e2) = {:?}",
            rep.value(0, 0),
            rep.value(1, 1)
        ),
    );
    let pi = seed.pi();
    let block = [
        ((1, 0), 1),
        ((0, 2), 0),
        ((0, 4), 0),
        ((0, 6), 0),
        ((0, 7), 0),
        ((0, 3), 1),
        ((0, 5), -1),
        ((1, 2), 0),
        ((1, 3), 0),
        ((1, 5), 0),
        ((1, 7), 0),
        ((1, 4), 1),
        ((1, 6), -1),
    ];
    let bad: Vec<String> = block
        .iter()
        .filter(|((i, j), v)| pi.entry(*i, *j) != *v)
        .map(|((i, j), v)| format!("pi{}{} = {} (want {v})", i + 1, j + 1, pi.entry(*i, *j)))
        .collect();
    r.push("commutation block", bad.is_empty(), bad.join(", "));
    r.relation(
        "relation at 1",
        &seed,
        0,
        "v^{-1/2}[e2 e3] + v^{1/2}[e4 e5 e7]",
    );
    r.relation("relation at 2", &seed, 1, "v^{-1}[e4 e6 e7^2] + v[e1^2 e8]");

    for sign in [Sign::Plus, Sign::Minus] {
        for m in 0..3 {
            let name = format!(
                "exchange graph ({}, m={m})",
                if sign == Sign::Plus { "+" } else { "-" }
            );
            match auto(&triangle_surface(m, sign))
                .map_err(|e| e.to_string())
                .and_then(|s| explore(&s, &ExploreOptions::default()).map_err(|e| e.to_string()))
            {
                Ok(g) => r.push(
                    name,
                    g.vertex_count() == 6 && g.is_single_cycle(),
                    format!("{} seeds, {} edges", g.vertex_count(), g.edge_count()),
                ),
                Err(e) => r.fail(name, e),
            }
        }
    }

    let key = |s: &QuantumSeed| s.canonical_form(CanonicalScope::Unfrozen);
    match seed.mutate_word(&[0, 1, 0, 1, 0, 1]) {
        Ok(s) => r.push("period (mu1 mu2)^3", key(&s) == key(&seed), ""),
        Err(e) => r.fail("period (mu1 mu2)^3", e),
    }
    match (seed.mutate_word(&[0, 1, 0]), seed.mutate_word(&[1, 0, 1])) {
        (Ok(a), Ok(b)) => r.push("braid mu1 mu2 mu1 = mu2 mu1 mu2", key(&a) == key(&b), ""),
        (Err(e), _) | (_, Err(e)) => r.fail("braid mu1 mu2 mu1 = mu2 mu1 mu2", e),
    }
}

fn quad(r: &mut Report, depth: usize) {
    const FIRST: [&str; 5] = [
        "v[e2 e6] + [e1 e5 e4]",
        "v^{1/2}[e2 e6] + v^{-1/2}[e1 e4 e11]",
        "[e1 e5] + v[e4 e9 e13]",
        "v^{-1/2}[e5 e7] + v^{1/2}[e1 e13]",
        "[e1 e5] + v[e2 e13]",
    ];
    const SECOND: [&str; 5] = [
        "[e2 e6] + v^2[e1 e5 e4]",
        "v^{-1}[e2 e5^2] + v[e3^2 e6 e10]",
        "[e2 e6] + v^{-2}[e3^2 e8 e12]",
        "[e2 e6] + v^2[e1^2 e12]",
        "v[e6 e10] + v^{-1}[e2 e12]",
    ];
    const COUNTS: [(usize, usize); 5] = [(31, 36), (31, 36), (29, 36), (29, 36), (29, 36)];
    for (c, name) in CASE_NAMES.iter().enumerate() {
        let seed = match auto(&quad_case(c)) {
            Ok(s) => s,
            Err(e) => {
                r.fail(format!("({name}) build"), e);
                continue;
            }
        };
        let rep = seed.check_compatibility();
        let local = (2..4).all(|i| {
            (0..6).all(|j| rep.value(i, j) == Some(if i == j { 2 * seed.weight(i).d() } else { 0 }))
        });
        r.push(format!("({name}) compatibility"), local && rep.passed(), "");
        let pi = seed.pi();
        r.push(
            format!("({name}) pi21 = pi65 = 1"),
            pi.entry(1, 0) == 1 && pi.entry(5, 4) == 1,
            format!("pi21 = {}, pi65 = {}", pi.entry(1, 0), pi.entry(5, 4)),
        );
        if c == 4 {
            let vals = [pi.entry(2, 3), pi.entry(2, 8), pi.entry(3, 9)];
            r.push(
                "(V) pi34 = 0, pi39 = 1, pi4,10 = 2",
                vals == [0, 1, 2],
                format!("{vals:?}"),
            );
        }
        r.relation(&format!("({name}) relation at 3"), &seed, 2, FIRST[c]);
        r.relation(&format!("({name}) relation at 4"), &seed, 3, SECOND[c]);

        let opts = ExploreOptions {
            depth: Some(depth),
            ..Default::default()
        };
        match explore(&seed, &opts) {
            Ok(g) => {
                let got = (g.vertex_count(), g.edge_count());
                let pass = depth != 2 || got == COUNTS[c];
                r.push(
                    format!("({name}) explore depth {depth}"),
                    pass && !g.truncated,
                    format!("{} seeds, {} edges", got.0, got.1),
                );
            }
            Err(e) => r.fail(format!("({name}) explore"), e),
        }
    }

    let iv = match auto(&quad_case(3)) {
        Ok(s) => s,
        Err(e) => return r.fail("(IV) build", e),
    };
    match iv.mutate(3) {
        Ok(s4) => {
            r.relation(
                "after mu4 (IV): relation at 1",
                &s4,
                0,
                "[e6 e7 e9] + v^{-1}[e3 e4]",
            );
            match s4.mutate(0) {
                Ok(s41) => {
                    for (k, rhs) in [
                        (2, "[e6 e9 e13] + v^{-1}[e1 e5]"),
                        (3, "v^{-1}[e1^2 e2] + v[e6 e7^2 e9^2 e12]"),
                        (5, "v^{-1}[e3 e4 e11 e13] + v[e1^2 e5^2]"),
                    ] {
                        r.relation(
                            &format!("after mu4 mu1 (IV): relation at {}", k + 1),
                            &s41,
                            k,
                            rhs,
                        );
                    }
                }
                Err(e) => r.fail("after mu4 mu1 (IV)", e),
            }
        }
        Err(e) => r.fail("after mu4 (IV)", e),
    }

    webs(r);
}

fn webs(r: &mut Report) {
    let mut grading_ok = true;
    let mut moved = true;
    let mut surfaces: Vec<DecoratedTriangulation> = (0..5).map(quad_case).collect();
    for sign in [Sign::Plus, Sign::Minus] {
        surfaces.extend((0..3).map(|m| triangle_surface(m, sign)));
    }
    for dt in &surfaces {
        let cat = match catalog_for(dt) {
            Ok(c) => c,
            Err(e) => return r.fail("web catalog", e),
        };
        let degrees = crate::grading::initial_degrees(dt);
        grading_ok &= cat
            .webs
            .iter()
            .zip(&degrees)
            .all(|(w, d)| w.endpoint_degree() == *d);
        let perm = dt.dt_transform();
        moved &= cat.webs.iter().all(|w| dt_on_skeleton(w, &perm) != *w);
    }
    r.push("endpoint degrees equal gradings", grading_ok, "");
    r.push("catalog webs are moved by DT", moved, "");
    let pw = pinwheel();
    let perm = square_surface((0, Sign::Plus), (2, Sign::Plus)).dt_transform();
    r.push(
        "pinwheel is DT-fixed",
        pw.webs.iter().all(|w| dt_on_skeleton(w, &perm) == *w),
        "",
    );
}

fn flip(r: &mut Report) {
    let dt = square_surface((0, Sign::Plus), (2, Sign::Minus));
    let plan = match dt.flip_sequence(0, 2) {
        Ok(p) => p,
        Err(e) => return r.fail("flip plan", e),
    };
    let mut seed = match auto(&plan.prepared) {
        Ok(s) => s,
        Err(e) => return r.fail("build", e),
    };
    let expected = [
        "[e1 e5] + v[e2 e11]",
        "[e2 e6] + v^2[e5^2 e10]",
        "[e'3 e7] + v[e8 e9 e10]",
        "[e'4 e8] + v^2[e'3^2]",
        "[e'3 e13] + v[e'4]",
        "[e'4 e14] + v^2[e10 e12 e13^2]",
    ];
    for (step, &k) in plan.word.iter().enumerate() {
        let local = plan.local.iter().position(|&v| v == k).map_or(k, |l| l) + 1;
        if let Some(rhs) = expected.get(step) {
            r.relation(&format!("step {} (mu{local})", step + 1), &seed, k, rhs);
        }
        seed = match seed.mutate(k) {
            Ok(s) => s,
            Err(e) => return r.fail(format!("step {}", step + 1), e),
        };
    }
    let end = match auto(&plan.flipped) {
        Ok(s) => s,
        Err(e) => return r.fail("flipped build", e),
    };
    match seed.permute(&plan.relabeling) {
        Ok(p) => r.push(
            "endpoint equals flipped build",
            p.same_matrices(&end) && p.weights() == end.weights() && p.degrees() == end.degrees(),
            "",
        ),
        Err(e) => r.fail("endpoint equals flipped build", e),
    }
}

fn kronecker(
    r: &mut Report,
    name: &str,
    seed: &QuantumSeed,
    (i, j): (usize, usize),
    nmax: usize,
    limit: DegreeVector,
) {
    match asymptotic_degree(seed, i, j, nmax) {
        Ok(rep) => {
            let got = rep.limit.clone().unwrap_or_default();
            r.push(
                format!("{name}: limit per round"),
                got == limit,
                format!("engine {got}; expected {limit}"),
            );
        }
        Err(e) => r.fail(format!("{name}: limit per round"), e),
    }
}

fn infinite(r: &mut Report, nmax: usize) {
    let points = 4;
    let first = square_surface((2, Sign::Plus), (2, Sign::Minus));
    match auto(&first).and_then(|s| s.mutate(3).map_err(|e| e.to_string())) {
        Ok(s) => {
            let limit = DegreeVector::uniform(points, [2, 0]);
            kronecker(r, "sequence 1", &s, (0, 4), nmax, limit.clone());
            r.push(
                "sequence 1: DT-invariant limit",
                limit.relabeled(&first.dt_transform()) == limit,
                "",
            );
            let mut cur = s;
            let mut shape = true;
            'outer: for _ in 0..nmax {
                for (k, partner) in [(0, 4), (4, 0)] {
                    let Ok(rel) = cur.predict_exchange(k) else {
                        shape = false;
                        break 'outer;
                    };
                    let squared = [&rel.plus, &rel.minus].iter().any(|m| {
                        m[partner] == 2
                            && (0..cur.n())
                                .all(|v| v == partner || m[v] == 0 || !cur.is_unfrozen(v))
                    });
                    shape &= squared;
                    cur = match cur.mutate(k) {
                        Ok(s) => s.without_frame(),
                        Err(_) => {
                            shape = false;
                            break 'outer;
                        }
                    };
                }
            }
            r.push("sequence 1: partner squared times frozens", shape, "");
        }
        Err(e) => r.fail("sequence 1", e),
    }

    let second = square_surface((1, Sign::Plus), (2, Sign::Minus));
    match auto(&second).and_then(|s| s.mutate_word(&[2, 3, 2, 1]).map_err(|e| e.to_string())) {
        Ok(s) => {
            let limit = DegreeVector::uniform(points, [2, 1]);
            kronecker(r, "sequence 2", &s, (3, 5), nmax, limit.clone());
            r.push(
                "sequence 2: DT-invariant limit",
                limit.relabeled(&second.dt_transform()) == limit,
                "",
            );
            let first_rel = "[e6^2 e7 e9^2 e11^2 e12 e13 e14] + [e2 e3^2]";
            let second_rel = "[e2 e3^2 e11^2 e14] + [e4^2]";
            monomials(r, "sequence 2: first relation", &s, 3, first_rel);
            match s.mutate(3) {
                Ok(t) => monomials(r, "sequence 2: second relation", &t, 5, second_rel),
                Err(e) => r.fail("sequence 2: second relation", e),
            }
        }
        Err(e) => r.fail("sequence 2", e),
    }
}

fn monomials(r: &mut Report, name: &str, seed: &QuantumSeed, k: usize, expected: &str) {
    let want: Vec<Term> = parse_rhs(expected, seed.n()).expect("oracle strings parse");
    match seed.predict_exchange(k) {
        Ok(rel) => {
            let got = rel.expanded(crate::qseed::Naming::Positional, "v");
            r.push(
                name,
                rel.same_monomials(&want),
                format!("engine {got}; expected up to v-powers {expected}"),
            );
        }
        Err(e) => r.fail(name, e),
    }
}
