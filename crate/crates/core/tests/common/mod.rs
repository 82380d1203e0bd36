#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use qcluster::qseed::{parse_rhs, QuantumSeed, Term};
use qcluster::qtorus::{SkewForm, TorusElement};
use qcluster::surface::{
    build_seed, square_surface, triangle_surface, DecoratedTriangulation, PiSource, Sign,
};

/// Square decorations by corner: `(lower point, upper point)`, all `+`.
pub const QUAD_CASES: [(&str, usize, usize); 5] = [
    ("I", 0, 2),
    ("II", 0, 0),
    ("III", 1, 3),
    ("IV", 2, 3),
    ("V", 0, 3),
];

pub fn quad(case: usize) -> DecoratedTriangulation {
    let (_, lo, up) = QUAD_CASES[case];
    square_surface((lo, Sign::Plus), (up, Sign::Plus))
}

pub fn seed(dt: &DecoratedTriangulation) -> QuantumSeed {
    build_seed(dt, &PiSource::Auto).expect("catalog surfaces build")
}

pub fn triangle(m: usize, sign: Sign) -> QuantumSeed {
    seed(&triangle_surface(m, sign))
}

pub fn flip_start() -> DecoratedTriangulation {
    square_surface((0, Sign::Plus), (2, Sign::Minus))
}

pub fn kronecker_one() -> DecoratedTriangulation {
    square_surface((2, Sign::Plus), (2, Sign::Minus))
}

pub fn kronecker_two() -> DecoratedTriangulation {
    square_surface((1, Sign::Plus), (2, Sign::Minus))
}

/// Every seed family exercised by the suites.
pub fn all_starts() -> Vec<QuantumSeed> {
    let mut v = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for m in 0..3 {
            v.push(triangle(m, sign));
        }
    }
    v.extend((0..5).map(|c| seed(&quad(c))));
    v.extend(
        [flip_start(), kronecker_one(), kronecker_two()]
            .iter()
            .map(seed),
    );
    v
}

/// `(Bᵀ Π)_{ij}` computed from the stored matrices.
pub fn b_transpose_pi(s: &QuantumSeed, i: usize, j: usize) -> i64 {
    (0..s.n())
        .map(|k| s.b2().get(k, i) * s.pi().entry(k, j))
        .sum::<i64>()
        / 2
}

/// `q^{½ Σ_{l<k} x_k x_l π_kl} A_1^{x_1} ⋯ A_n^{x_n}` for a nonnegative exponent vector.
pub fn weyl_product(pi: &SkewForm, frame: &[TorusElement], x: &[i64]) -> TorusElement {
    let ambient: &Arc<SkewForm> = frame[0].form();
    let mut twist = 0;
    for k in 0..x.len() {
        for l in 0..k {
            twist += x[k] * x[l] * pi.entry(k, l);
        }
    }
    let mut out = TorusElement::one(ambient).shift(twist);
    for (i, &e) in x.iter().enumerate() {
        assert!(e >= 0, "negative exponent in an exchange monomial");
        for _ in 0..e {
            out = out.try_mul(&frame[i]).unwrap();
        }
    }
    out
}

/// `A_k · A'_k` in the ambient torus, with `A'_k` taken from the mutated seed.
pub fn exchange_product(s: &QuantumSeed, k: usize) -> Result<TorusElement, String> {
    let after = s.mutate(k).map_err(|e| e.to_string())?;
    let a = &s.frame().expect("frame").vars()[k];
    let b = &after.frame().expect("frame").vars()[k];
    a.try_mul(b).map_err(|e| e.to_string())
}

pub fn rhs_element(s: &QuantumSeed, terms: &[Term]) -> TorusElement {
    let frame = s.frame().expect("frame").vars();
    let mut sum = TorusElement::zero(frame[0].form());
    for t in terms {
        sum = sum
            .try_add(&weyl_product(s.pi(), frame, &t.mono).shift(t.power2))
            .unwrap();
    }
    sum
}

/// Whether `A_k A'_k` equals the stated right-hand side in the ambient torus.
pub fn relation_holds(s: &QuantumSeed, k: usize, rhs: &str) -> Result<bool, String> {
    let terms = parse_rhs(rhs, s.n()).map_err(|e| e.to_string())?;
    Ok(exchange_product(s, k)? == rhs_element(s, &terms))
}

/// The `(a, b)` in `[-limit, limit]` (doubled) making `v^{a/2}[m1] + v^{b/2}[m2]` hold.
pub fn fitting_powers(
    s: &QuantumSeed,
    k: usize,
    m1: &[i64],
    m2: &[i64],
    limit: i64,
) -> Option<(i64, i64)> {
    let lhs = exchange_product(s, k).ok()?;
    let frame = s.frame()?.vars();
    let x = weyl_product(s.pi(), frame, m1);
    let y = weyl_product(s.pi(), frame, m2);
    for a in -limit..=limit {
        for b in -limit..=limit {
            if x.shift(a).try_add(&y.shift(b)).ok()? == lhs {
                return Some((a, b));
            }
        }
    }
    None
}

/// Brute-force canonical key: the minimum over relabelings that preserve
/// weight and fix every frozen vertex of the flattened `(B, Π)` data.
pub fn brute_key(s: &QuantumSeed) -> Vec<i64> {
    let n = s.n();
    let movable: Vec<usize> = s.unfrozen_indices();
    let mut best: Option<Vec<i64>> = None;
    let mut perm: Vec<usize> = movable.clone();
    permutations(&mut perm, 0, &mut |p| {
        let mut sigma: Vec<usize> = (0..n).collect();
        for (from, to) in movable.iter().zip(p) {
            if s.weight(*from) != s.weight(*to) {
                return;
            }
            sigma[*from] = *to;
        }
        let mut inv = vec![0; n];
        for (i, &t) in sigma.iter().enumerate() {
            inv[t] = i;
        }
        let mut key = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            for j in 0..n {
                key.push(s.b2().get(inv[i], inv[j]));
                key.push(s.pi().entry(inv[i], inv[j]));
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    });
    best.expect("identity is always admissible")
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Breadth-first search over brute-force keys; returns `(seeds, undirected edges)`.
pub fn brute_graph(start: &QuantumSeed, depth: Option<usize>) -> (usize, usize) {
    let start = start.clone().without_frame();
    let mut keys = vec![brute_key(&start)];
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::from([(start, 0usize, 0usize)]);
    while let Some((s, id, d)) = queue.pop_front() {
        if depth.is_some_and(|m| d >= m) {
            continue;
        }
        for k in s.unfrozen_indices() {
            let t = s.mutate(k).expect("mutation");
            let key = brute_key(&t);
            let to = match keys.iter().position(|x| *x == key) {
                Some(i) => i,
                None => {
                    keys.push(key);
                    queue.push_back((t, keys.len() - 1, d + 1));
                    keys.len() - 1
                }
            };
            if to != id {
                edges.insert((id.min(to), id.max(to)));
            }
        }
    }
    (keys.len(), edges.len())
}
