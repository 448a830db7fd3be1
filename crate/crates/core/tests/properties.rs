use proptest::prelude::*;
use rug::{Integer, Rational};

use brauerlab::algebra::{jucys_murphy_all, multiply, regular_representation, AlgebraElement, ScalarMode};
use brauerlab::cache::MultTable;
use brauerlab::cellular::{cell_module, labels, verify_cell_relations};
use brauerlab::diagram::{compose, double_factorial, flip, BrauerDiagram};
use brauerlab::kl::KlTable;
use brauerlab::numeric::{principal_sqrt, AppComplex, IntPoly, Var};
use brauerlab::tableau::{enumerate_updown, is_small};

fn diagram(d: usize) -> impl Strategy<Value = BrauerDiagram> {
    Just((0..2 * d).collect::<Vec<usize>>()).prop_shuffle().prop_map(move |order| {
        let mut pairing = vec![0; 2 * d];
        for p in order.chunks(2) {
            pairing[p[0]] = p[1];
            pairing[p[1]] = p[0];
        }
        BrauerDiagram::from_pairing(pairing).unwrap()
    })
}

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..20, 0..5)
        .prop_map(|cs| IntPoly::from_coeffs(Var::Delta, cs.into_iter().map(Integer::from).collect()))
}

/// Seed from `BRAUERLAB_SEED`, default 0.
fn config() -> ProptestConfig {
    let seed = std::env::var("BRAUERLAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(seed), ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn principal_sqrt_squares_back(a in -10_000i64..10_000, b in -10_000i64..10_000, den in 1i64..1000) {
        let prec = 256;
        let z = AppComplex::from_parts(&Rational::from((a, den)), &Rational::from((b, den)), prec);
        let r = principal_sqrt(&z);
        let err = (&(&r * &r) - &z).abs().to_f64();
        let scale = z.abs().to_f64().max(f64::MIN_POSITIVE);
        // four units in the last place of |z|
        prop_assert!(err <= 4.0 * 2f64.powi(1 - prec as i32) * scale, "err {err:e}");
        // principal branch: nonnegative real part
        prop_assert!(r.to_f64().0 >= 0.0);
    }

    #[test]
    fn polynomial_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        let x = Rational::from((3, 7));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
    }

    #[test]
    fn compose_is_associative_with_loops(a in diagram(5), b in diagram(5), c in diagram(5)) {
        let (ab, k1) = compose(&a, &b).unwrap();
        let (left, k2) = compose(&ab, &c).unwrap();
        let (bc, k3) = compose(&b, &c).unwrap();
        let (right, k4) = compose(&a, &bc).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(k1 + k2, k3 + k4);
    }

    #[test]
    fn flip_reverses_composition(a in diagram(4), b in diagram(4)) {
        let (ab, k) = compose(&a, &b).unwrap();
        let (ba, k2) = compose(&flip(&b), &flip(&a)).unwrap();
        prop_assert_eq!(flip(&ab), ba);
        prop_assert_eq!(k, k2);
    }

    #[test]
    fn regular_representation_is_multiplicative(a in diagram(4), b in diagram(4), delta in -3i64..4) {
        let delta = Rational::from(delta);
        let mode = ScalarMode::Specialized(delta.clone());
        let reg = regular_representation(4, &delta).unwrap();
        let (x, y) = (AlgebraElement::basis(a, &mode), AlgebraElement::basis(b, &mode));
        let xy = multiply(&x, &y).unwrap();
        let lhs = reg.matrix_of(&xy, &delta).to_dense();
        let rhs = reg.matrix_of(&x, &delta).to_dense().mul(&reg.matrix_of(&y, &delta).to_dense());
        prop_assert!(lhs == rhs);
    }

    #[test]
    fn cell_modules_satisfy_relations(d in 1usize..=4, which in 0usize..8, pick in 0usize..7) {
        let deltas = ["-2", "-1", "0", "1", "2", "3", "1/2"];
        let delta: Rational = deltas[pick].parse().unwrap();
        let ls = labels(d, &delta).labels;
        let lambda = &ls[which % ls.len()];
        let module = cell_module(lambda, d, &delta).unwrap();
        for c in verify_cell_relations(&module) {
            prop_assert!(c.passed(), "{} failed for {} at delta={}", c.name, lambda, delta);
        }
    }

    #[test]
    fn kl_support_and_positivity(n in 2usize..=6, x in 0usize..32, y in 0usize..32) {
        let t = KlTable::new(n);
        let (x, y) = (x % t.len(), y % t.len());
        let p = t.poly(x, y);
        if x == y {
            prop_assert_eq!(p, IntPoly::one(Var::Q));
        } else {
            prop_assert!(p.coeff(0) == 0);
            prop_assert!(t.bruhat_le(x, y) || p.is_zero());
            prop_assert!(p.coeffs().iter().all(|c| *c >= 0));
        }
    }

    #[test]
    fn cached_tables_round_trip(d in 1usize..=3, generic in any::<bool>()) {
        let dir = tempfile::tempdir().unwrap();
        let mode = if generic { ScalarMode::Generic } else { ScalarMode::Specialized(Rational::from(2)) };
        let fresh = MultTable::compute(d, &mode).unwrap();
        fresh.save(dir.path()).unwrap();
        let back = MultTable::load(dir.path(), d, &mode).unwrap().unwrap();
        prop_assert_eq!(back.to_text(), fresh.to_text());
        prop_assert_eq!(back, fresh);
    }
}

#[test]
fn compose_is_associative_exhaustively_small() {
    for d in 1..=3 {
        let all = brauerlab::diagram::enumerate_diagrams(d);
        for a in &all {
            for b in &all {
                let (ab, k1) = compose(a, b).unwrap();
                for c in &all {
                    let (left, k2) = compose(&ab, c).unwrap();
                    let (bc, k3) = compose(b, c).unwrap();
                    let (right, k4) = compose(a, &bc).unwrap();
                    assert_eq!((left, k1 + k2), (right, k3 + k4));
                }
            }
        }
    }
}

#[test]
fn diagram_counts() {
    for d in 1..=7 {
        assert_eq!(brauerlab::diagram::enumerate_diagrams(d).len() as u64, double_factorial(2 * d as u64 - 1));
    }
}

#[test]
fn jucys_murphy_elements_commute_generically() {
    let mode = ScalarMode::Generic;
    for d in 1..=4 {
        let xi = jucys_murphy_all(d, &mode);
        for i in 0..d {
            for j in 0..d {
                assert_eq!(&xi[i] * &xi[j], &xi[j] * &xi[i]);
            }
        }
    }
}

#[test]
fn small_paths_count_the_brauer_dimension() {
    use std::collections::BTreeMap;
    for d in 1..=6 {
        let mut ends: BTreeMap<String, u64> = BTreeMap::new();
        for p in enumerate_updown(d, 2 * d).unwrap().iter().filter(|p| is_small(p)) {
            *ends.entry(p.last().to_string()).or_default() += 1;
        }
        let sum: u64 = ends.values().map(|c| c * c).sum();
        assert_eq!(sum, double_factorial(2 * d as u64 - 1), "d = {d}");
    }
}

#[test]
fn paths_change_one_box_per_step() {
    for d in 1..=4 {
        for p in enumerate_updown(d, 2 * d).unwrap() {
            for w in p.shapes().windows(2) {
                assert_eq!(w[0].boxes().abs_diff(w[1].boxes()), 1);
            }
        }
    }
}

#[test]
fn principal_sqrt_on_ten_thousand_samples() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let prec = 256;
    let mut rng = StdRng::seed_from_u64(0);
    for _ in 0..10_000 {
        let (a, b, den) = (rng.gen_range(-1_000_000i64..1_000_000), rng.gen_range(-1_000_000i64..1_000_000), rng.gen_range(1i64..10_000));
        let z = AppComplex::from_parts(&Rational::from((a, den)), &Rational::from((b, den)), prec);
        let r = principal_sqrt(&z);
        let err = (&(&r * &r) - &z).abs().to_f64();
        assert!(err <= 4.0 * 2f64.powi(1 - prec as i32) * z.abs().to_f64().max(f64::MIN_POSITIVE), "{a}/{den} + {b}/{den} i");
    }
}
