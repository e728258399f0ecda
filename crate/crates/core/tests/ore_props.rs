use proptest::prelude::*;

use precint::field::{AlgebraicPoint, Poly, Rational, RationalFunction};
use precint::ore::{reduce_mod, OreOperator, SolutionBasis};
use precint::verify::{RandomOperatorSpec, RootShape};

fn poly(c: &[i64]) -> Poly<Rational> {
    Poly::from_ints(c)
}

fn operator(max_order: usize) -> impl Strategy<Value = OreOperator> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 1..=3), 1..=max_order + 1)
        .prop_map(|cs| OreOperator::from_polys(cs.iter().map(|c| poly(c)).collect()))
}

/// Operator with rational-function coefficients.
fn rational_operator(max_order: usize) -> impl Strategy<Value = OreOperator> {
    (operator(max_order), prop::collection::vec(-3i64..=3, 2)).prop_map(|(a, d)| {
        let den = poly(&[d[0] * 2 + 1, d[1]]);
        a.scale(&RationalFunction::new(Poly::one(), den))
    })
}

fn modulus() -> impl Strategy<Value = OreOperator> {
    (1usize..=3, any::<u64>()).prop_map(|(r, seed)| {
        RandomOperatorSpec::new(r, 2, 4, seed)
            .with_roots(RootShape::IntegerRoots)
            .generate(1)
            .remove(0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative_and_distributive(
        a in rational_operator(3), b in operator(3), c in operator(3),
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(b.add(&c).mul(&a), b.mul(&a).add(&c.mul(&a)));
    }

    #[test]
    fn reduction_ignores_left_multiples(l in modulus(), a in rational_operator(2), rest in operator(4)) {
        let lhs = reduce_mod(&a.mul(&l).add(&rest), &l).unwrap();
        prop_assert_eq!(lhs, reduce_mod(&rest, &l).unwrap());
    }

    #[test]
    fn cache_satisfies_recurrence(l in modulus(), lo in -6i64..0, hi in 0i64..6) {
        let b = SolutionBasis::new(&l, &AlgebraicPoint::integer(0), 0).unwrap();
        b.value(0, lo);
        b.value(0, hi);
        prop_assert!(b.check_cache());
    }

    #[test]
    fn action_factors_through_quotient(l in modulus(), a in operator(6), n in -3i64..3) {
        let r = l.order().unwrap();
        prop_assume!(a.order().unwrap_or(0) <= 2 * r);
        let b = SolutionBasis::new(&l, &AlgebraicPoint::integer(0), -2).unwrap();
        let reduced = reduce_mod(&a, &l).unwrap();
        for j in 0..r {
            prop_assert_eq!(b.apply_element(&reduced, j, n), b.apply_operator(&a, j, n));
        }
    }
}
