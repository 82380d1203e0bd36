mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qcluster::qseed::{CanonicalScope, QuantumSeed, SeedJson};
use qcluster::qtorus::{SkewForm, TorusElement};
use qcluster::surface::{triangle_surface, PointPermutation, Sign, TriangulationJson};
use qcluster::webcat::{catalog_for, Catalog};
use qcluster::wquiver::WeightedQuiver;
use qcluster::{build_seed, DecoratedTriangulation, PiSource, QLaurent};

fn laurent() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..5).prop_map(QLaurent::from_terms)
}

fn form3() -> Arc<SkewForm> {
    Arc::new(SkewForm::from_rows(vec![vec![0, 1, -2], vec![-1, 0, 3], vec![2, -3, 0]]).unwrap())
}

fn element(form: Arc<SkewForm>) -> impl Strategy<Value = TorusElement> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 3), laurent()), 1..4).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(TorusElement::zero(&form), |acc, (a, c)| {
                    acc.try_add(&TorusElement::monomial(&form, &a, c).unwrap())
                        .unwrap()
                })
        },
    )
}

fn start_seeds() -> Vec<QuantumSeed> {
    common::all_starts()
}

fn shuffle_classes(s: &QuantumSeed, picks: &[usize]) -> Vec<usize> {
    let n = s.n();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut pick = picks.iter().cycle();
    for i in s.unfrozen_indices() {
        let same: Vec<usize> = s
            .unfrozen_indices()
            .into_iter()
            .filter(|&j| j > i && s.weight(j) == s.weight(i))
            .collect();
        if same.is_empty() {
            continue;
        }
        let choice = pick.next().copied().unwrap_or(0) % (same.len() + 1);
        if choice > 0 {
            sigma.swap(i, same[choice - 1]);
        }
    }
    sigma
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &QLaurent::one(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn torus_associative(x in element(form3()), y in element(form3()), z in element(form3())) {
        let l = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let r = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn left_divide_inverts_product(x in element(form3()), y in element(form3())) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let p = x.try_mul(&y).unwrap();
        prop_assert_eq!(x.left_divide(&p).unwrap(), y);
    }

    #[test]
    fn bar_reverses_products(x in element(form3()), y in element(form3())) {
        let lhs = x.try_mul(&y).unwrap().bar();
        let rhs = y.bar().try_mul(&x.bar()).unwrap();
        prop_assert_eq!(lhs.bar(), x.try_mul(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_key_ignores_relabeling(
        idx in 0usize..14,
        word in prop::collection::vec(0usize..32, 0..3),
        picks in prop::collection::vec(0usize..8, 1..8),
    ) {
        let mut s = start_seeds().swap_remove(idx).without_frame();
        let un = s.unfrozen_indices();
        for w in word {
            s = s.mutate(un[w % un.len()]).unwrap();
        }
        let sigma = shuffle_classes(&s, &picks);
        let t = s.permute(&sigma).unwrap();
        let key = s.canonical_form(CanonicalScope::Unfrozen);
        prop_assert_eq!(&key, &t.canonical_form(CanonicalScope::Unfrozen));
        let brute = common::brute_key(&t);
        prop_assert_eq!(brute, common::brute_key(&s));
    }

    #[test]
    fn quiver_mutation_tracks_exchange_matrix(
        idx in 0usize..14,
        word in prop::collection::vec(0usize..32, 1..5),
    ) {
        let mut s = start_seeds().swap_remove(idx).without_frame();
        let mut q = WeightedQuiver::from_exchange(s.b2(), s.weights(), &s.unfrozen_flags().iter().map(|u| !u).collect::<Vec<_>>()).unwrap();
        let un = s.unfrozen_indices();
        for w in word {
            let k = un[w % un.len()];
            s = s.mutate(k).unwrap();
            q = q.mutate(k).unwrap();
            prop_assert_eq!(&q.to_exchange().0, s.b2());
        }
    }

    #[test]
    fn seed_json_round_trip(idx in 0usize..14, word in prop::collection::vec(0usize..32, 0..3)) {
        let mut s = start_seeds().swap_remove(idx);
        let un = s.unfrozen_indices();
        for w in word {
            s = s.mutate(un[w % un.len()]).unwrap();
        }
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let js: SeedJson = serde_json::from_str(&text).unwrap();
        prop_assert!(QuantumSeed::from_json(&js).unwrap().same_data(&s));
    }

    #[test]
    fn point_permutation_powers(v in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(), a in 0usize..7, b in 0usize..7) {
        let p = PointPermutation(v);
        prop_assert_eq!(p.power(a).compose(&p.power(b)), p.power(a + b));
        prop_assert_eq!(p.power(120), PointPermutation::identity(5));
    }
}

#[test]
fn catalog_round_trips() {
    let mut dts: Vec<DecoratedTriangulation> = (0..3)
        .flat_map(|m| {
            [
                triangle_surface(m, Sign::Plus),
                triangle_surface(m, Sign::Minus),
            ]
        })
        .collect();
    dts.extend((0..5).map(common::quad));
    dts.extend([
        common::flip_start(),
        common::kronecker_one(),
        common::kronecker_two(),
    ]);
    for dt in dts {
        let cat = catalog_for(&dt).unwrap();
        let back: Catalog = serde_json::from_str(&serde_json::to_string(&cat).unwrap()).unwrap();
        assert_eq!(back, cat);
        assert_eq!(
            &cat.pi_matrix().unwrap(),
            build_seed(&dt, &PiSource::Auto).unwrap().pi()
        );
    }
}

#[test]
fn fixture_surfaces_match_constructors() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/surfaces");
    let load = |name: &str| -> DecoratedTriangulation {
        let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let js: TriangulationJson = serde_json::from_str(&text).unwrap();
        DecoratedTriangulation::from_json(&js).unwrap()
    };
    assert_eq!(load("triangle_plus"), triangle_surface(0, Sign::Plus));
    assert_eq!(load("triangle_minus"), triangle_surface(0, Sign::Minus));
    for (c, (name, _, _)) in common::QUAD_CASES.iter().enumerate() {
        assert_eq!(load(&format!("quad_{name}")), common::quad(c));
    }
    assert_eq!(load("flip_start"), common::flip_start());
    assert_eq!(load("kronecker_weight1"), common::kronecker_one());
    assert_eq!(load("kronecker_weight2"), common::kronecker_two());
}
