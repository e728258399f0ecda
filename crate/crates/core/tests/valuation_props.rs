use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use precint::field::point::galois_norm_uniformizer;
use precint::field::{AlgebraicPoint, Field, Poly, Rational, RationalFunction, Valuation};
use precint::ore::{OreOperator, QuotientElement};
use precint::valuation::{val_at, OrbitAnalysis};
use precint::verify::{random_element, RandomOperatorSpec, RootShape};

fn integer_root_op(r: usize, seed: u64) -> OreOperator {
    RandomOperatorSpec::new(r, 2, 4, seed)
        .with_roots(RootShape::IntegerRoots)
        .generate(1)
        .remove(0)
}

fn poly(c: &[i64]) -> Poly<Rational> {
    Poly::from_ints(c)
}

fn nu(f: &RationalFunction, z: &AlgebraicPoint) -> Valuation {
    f.nu_at_poly(&galois_norm_uniformizer(z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn val_is_a_value_function(r in 1usize..=3, seed in any::<u64>(), n in -4i64..=4) {
        let l = integer_root_op(r, seed);
        let z = AlgebraicPoint::integer(n);
        let analysis = OrbitAnalysis::new(&l, &z.orbit()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b1 = random_element(&mut rng, r, 2, 3);
        let b2 = random_element(&mut rng, r, 2, 3);
        let a = random_element(&mut rng, 1, 2, 3).coord(0).clone();
        let val = |b: &QuotientElement| val_at(b, &z, &analysis).unwrap();
        prop_assert_eq!(val(&b1.scale(&a)), nu(&a, &z) + val(&b1));
        prop_assert!(val(&b1.add(&b2)) >= val(&b1).min(val(&b2)));
        prop_assert_eq!(val(&QuotientElement::zero(r)), Valuation::Infinity);
        prop_assert_eq!(val(&b1) == Valuation::Infinity, b1.is_zero());
    }

    #[test]
    fn val_does_not_depend_on_anchor(r in 1usize..=3, seed in any::<u64>(), n in -5i64..=5) {
        let l = integer_root_op(r, seed);
        let orbit = AlgebraicPoint::integer(0);
        let near = OrbitAnalysis::new(&l, &orbit).unwrap();
        let far = OrbitAnalysis::with_anchor(&l, &orbit, near.anchor() - 3).unwrap();
        let z = AlgebraicPoint::integer(n);
        for i in 0..r {
            let b = QuotientElement::unit(r, i);
            prop_assert_eq!(val_at(&b, &z, &near).unwrap(), val_at(&b, &z, &far).unwrap());
        }
    }

    #[test]
    fn growth_windows_are_stable(r in 1usize..=3, seed in any::<u64>()) {
        let l = integer_root_op(r, seed);
        let analysis = OrbitAnalysis::new(&l, &AlgebraicPoint::integer(0)).unwrap();
        prop_assert!(analysis.windows_stable(2 * r as i64));
    }

    #[test]
    fn nonsingular_orbit_val_is_coefficient_minimum(r in 1usize..=3, seed in any::<u64>(), n in -3i64..=3) {
        // ℓ_0 and ℓ_r without roots in 1/2 + Z.
        let l = RandomOperatorSpec::new(r, 2, 4, seed)
            .with_roots(RootShape::IntegerRoots)
            .generate(1)
            .remove(0);
        let half = AlgebraicPoint::rational(&Rational::new(1.into(), 2.into()));
        let analysis = OrbitAnalysis::new(&l, &half).unwrap();
        prop_assert!(!analysis.is_singular());
        let z = half.at(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let b = random_element(&mut rng, r, 2, 3);
        let expected = b.coords().iter().map(|c| nu(c, &z)).min().unwrap();
        prop_assert_eq!(val_at(&b, &z, &analysis).unwrap(), expected);
    }
}

#[test]
fn element_of_wrong_orbit_is_rejected() {
    let l = OreOperator::from_polys(vec![poly(&[0, 1]), poly(&[1])]);
    let analysis = OrbitAnalysis::new(&l, &AlgebraicPoint::integer(0)).unwrap();
    let half = AlgebraicPoint::rational(&Rational::new(1.into(), 2.into()));
    assert!(val_at(&QuotientElement::unit(1, 0), &half, &analysis).is_err());
    assert!(RationalFunction::one().is_one());
}
