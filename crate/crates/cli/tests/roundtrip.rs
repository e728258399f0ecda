use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use precint::integral::{global_integral_basis, LocalOptions};
use precint::valuation::ZSpec;
use precint::verify::{random_element, RandomOperatorSpec, RootShape};
use precint_cli::parse::{parse_operator, parse_point};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_reparse_to_themselves(r in 1usize..=3, deg in 0usize..=3, seed in any::<u64>()) {
        let l = RandomOperatorSpec::new(r, deg, 9, seed).generate(1).remove(0);
        prop_assert_eq!(parse_operator(&l.to_string()).unwrap(), l);
    }

    #[test]
    fn elements_reparse_to_themselves(r in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_element(&mut rng, r, 3, 5);
        let back = parse_operator(&b.to_string()).unwrap();
        prop_assert_eq!(back, b.to_operator());
    }

    #[test]
    fn points_reparse_to_themselves(shift in -5i64..=5, which in 0usize..4) {
        let src = ["x^2 - 2", "x^2 + x + 1", "x^3 - 2", "2*x^2 - 3"][which];
        let z = parse_point(&format!("root({src}) + {shift}")).unwrap();
        prop_assert_eq!(parse_point(&z.to_string()).unwrap(), z);
    }
}

#[test]
fn computed_bases_reparse() {
    let ops = RandomOperatorSpec::new(2, 2, 4, 11)
        .with_roots(RootShape::IntegerRoots)
        .generate(4);
    for l in ops {
        let run = global_integral_basis(&l, &ZSpec::new().with_bound("Z", 0), &LocalOptions::default()).unwrap();
        for b in run.basis.rows() {
            assert_eq!(parse_operator(&b.to_string()).unwrap(), b.to_operator(), "{b}");
        }
    }
}
