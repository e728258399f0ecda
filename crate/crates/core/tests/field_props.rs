use num_traits::ToPrimitive;
use proptest::prelude::*;

use precint::field::factor::{factor, primitive_integer};
use precint::field::point::{galois_norm_uniformizer, galois_trace_sum, integer_shift};
use precint::field::{
    AlgebraicPoint, Field, NFElem, NumberField, Poly, Rational, RationalFunction, Valuation,
};

fn poly(c: &[i64]) -> Poly<Rational> {
    Poly::from_ints(c)
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| poly(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (small_poly(3), nonzero_poly(2)).prop_map(|(n, d)| RationalFunction::new(n, d))
}

/// `x - 1`, `x^2 + 1` and `x` stand in for finite places; infinity is the third kind.
fn places() -> Vec<Poly<Rational>> {
    vec![poly(&[0, 1]), poly(&[-1, 1]), poly(&[1, 0, 1])]
}

fn has_rational_root(p: &Poly<Rational>) -> bool {
    let ints: Vec<i64> = primitive_integer(p).iter().map(|c| c.to_i64().unwrap()).collect();
    let (a0, lc) = (ints[0], *ints.last().unwrap());
    if a0 == 0 {
        return true;
    }
    let divisors = |n: i64| (1..=n.abs()).filter(move |d| n % d == 0);
    divisors(a0).any(|d| {
        divisors(lc).any(|l| {
            [d, -d]
                .iter()
                .any(|&num| p.eval(&Rational::new(num.into(), l.into())) == Rational::zero())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuations_are_multiplicative_and_ultrametric(f in ratfunc(), g in ratfunc()) {
        let prod = f.mul_ref(&g);
        let sum = f.add_ref(&g);
        for place in places() {
            let nu = |h: &RationalFunction| h.nu_at_factor(&place).unwrap();
            prop_assert_eq!(nu(&prod), nu(&f) + nu(&g));
            prop_assert!(nu(&sum) >= nu(&f).min(nu(&g)));
        }
        prop_assert_eq!(prod.nu_infinity(), f.nu_infinity() + g.nu_infinity());
        prop_assert!(sum.nu_infinity() >= f.nu_infinity().min(g.nu_infinity()));
    }

    #[test]
    fn factorization_reproduces_input(p in nonzero_poly(5)) {
        prop_assume!(!p.is_constant());
        let parts = factor(&p);
        let product = parts
            .iter()
            .fold(Poly::one(), |acc: Poly<Rational>, (f, e)| acc.mul_poly(&f.pow(*e as u32)));
        let (quot, rem) = p.div_rem(&product);
        prop_assert!(rem.is_zero());
        prop_assert!(quot.is_constant());
        for (f, _) in &parts {
            if f.deg() <= 3 && f.deg() >= 2 {
                prop_assert!(!has_rational_root(f), "{} has a rational root", f);
            }
        }
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(a in nonzero_poly(4), b in nonzero_poly(4), c in nonzero_poly(3)) {
        let (ac, bc) = (a.mul_poly(&c), b.mul_poly(&c));
        let g = ac.gcd(&bc);
        prop_assert!(g.is_monic());
        prop_assert!(ac.rem(&g).is_zero() && bc.rem(&g).is_zero());
        prop_assert!(g.rem(&c.monic()).is_zero());
        prop_assert_eq!(g, a.gcd(&b).mul_poly(&c.monic()));
    }

    #[test]
    fn integer_shift_recovers_shift(p in nonzero_poly(4), n in -20i64..=20) {
        prop_assume!(!p.is_constant());
        prop_assert_eq!(integer_shift(&p, &p.shift_int(-n)), Some(n));
    }

    #[test]
    fn number_field_inverse(
        m in prop::sample::select(vec![poly(&[-2, 0, 1]), poly(&[1, 1, 1]), poly(&[-2, 0, 0, 1]), poly(&[1, 0, 0, 0, 1])]),
        coords in prop::collection::vec(-9i64..=9, 4),
    ) {
        let k = NumberField::new(m).unwrap();
        let d = k.degree();
        let a = k.element(poly(&coords[..d]));
        prop_assume!(!a.is_zero());
        prop_assert!(a.mul_ref(&a.invert().unwrap()).is_one());
    }

    #[test]
    fn trace_sum_of_one_is_log_derivative(
        m in prop::sample::select(vec![poly(&[-2, 0, 1]), poly(&[1, 1, 1]), poly(&[-1, -2, 1]), poly(&[-2, 0, 0, 1])]),
        shift in -3i64..=3,
    ) {
        let z = AlgebraicPoint::root_of(&m, shift).unwrap();
        let norm = galois_norm_uniformizer(&z);
        let sum = galois_trace_sum(&NFElem::one(), &z);
        let lhs = sum.mul_ref(&RationalFunction::from_poly(norm.clone()));
        prop_assert_eq!(lhs, RationalFunction::from_poly(norm.derivative()));
    }
}

#[test]
fn infinity_valuation_of_zero() {
    assert_eq!(RationalFunction::zero().nu_infinity(), Valuation::Infinity);
}
