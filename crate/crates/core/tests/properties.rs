mod common;

use common::naive_periods;
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_lg::catalog::Catalog;
use toric_lg::laurent::parse;
use toric_lg::period::period_sequence;
use toric_lg::{LatticeVector, LaurentPolynomial, UnimodularMap};

const MAPS: usize = 120;
const SEED: u64 = 20_241_015;

#[test]
fn unimodular_invariance_over_random_maps() {
    let catalog = Catalog::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for k in 0..MAPS {
        let row = &catalog.rows()[k % catalog.len()];
        let u = UnimodularMap::random(3, 3, &mut rng);
        let p = row.newton_polytope().unwrap();
        let q = p.apply_unimodular(&u).unwrap();
        let dual_back = q.dual().unwrap().dual().unwrap().to_lattice();
        let g = row.polynomial.substitute_monomial(&u).unwrap();
        let checks = [
            ("dual involution", dual_back.as_ref() == Some(&q)),
            ("volume", q.normalized_volume() == p.normalized_volume()),
            ("points", q.lattice_points().all == p.lattice_points().all),
            (
                "dual points",
                q.dual().unwrap().lattice_points().all == p.dual().unwrap().lattice_points().all,
            ),
            (
                "normal form",
                q.normal_form().unwrap() == p.normal_form().unwrap(),
            ),
            (
                "period",
                period_sequence(&g, 6).values == period_sequence(&row.polynomial, 6).values,
            ),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("row {} map {:?}: {name}", row.id, u.matrix()));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

/// A random polynomial supported on some lattice points of a reflexive
/// polytope, always including its vertices.
fn sparse_reflexive(rng: &mut ChaCha8Rng, catalog: &Catalog) -> LaurentPolynomial {
    let row = catalog.rows().choose(rng).unwrap();
    let u = UnimodularMap::random(3, 2, rng);
    let p = row.newton_polytope().unwrap().apply_unimodular(&u).unwrap();
    let mut support: Vec<LatticeVector> = p.vertices().to_vec();
    for pt in p.lattice_points().points {
        if !pt.is_zero() && !support.contains(&pt) && rng.random_bool(0.3) {
            support.push(pt);
        }
    }
    let terms = support.into_iter().map(|e| {
        let c: i64 = rng.random_range(1..=3) * if rng.random_bool(0.3) { -1 } else { 1 };
        (e, c)
    });
    LaurentPolynomial::from_terms(3, terms).unwrap()
}

#[test]
fn pruning_is_sound_on_random_sparse_polynomials() {
    let catalog = Catalog::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for k in 0..20 {
        let f = sparse_reflexive(&mut rng, &catalog);
        assert!(f.newton_polytope().unwrap().is_reflexive().unwrap());
        assert_eq!(
            period_sequence(&f, 5).values,
            naive_periods(&f, 5),
            "sample {k}: {f}"
        );
    }
}

fn small_poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-2i64..=2, -2i64..=2), -3i64..=3), 0..6).prop_map(|terms| {
        let mut f = LaurentPolynomial::zero(2);
        for ((a, b), c) in terms {
            let m = LaurentPolynomial::monomial(c, LatticeVector::new(&[a, b]).unwrap());
            f = &f + &m;
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_parses_back(a in small_poly()) {
        let text = a.to_string();
        prop_assert_eq!(parse(&text, 2).unwrap(), a);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b).unwrap(), Some(a));
    }

    #[test]
    fn term_list_round_trip(a in small_poly()) {
        let back = LaurentPolynomial::from_term_list(2, &a.to_term_list()).unwrap();
        prop_assert_eq!(back, a);
    }
}
