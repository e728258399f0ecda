//! Keeping outputs over Q(x) at algebraic points: interpolation against the
//! conjugate trace sum.

use precint::field::point::{galois_norm_uniformizer, galois_trace_sum};
use precint::field::{AlgebraicPoint, Field, NFElem, Poly, Rational, Valuation};
use precint::integral::{global_integral_basis, DescentUpdate, LocalOptions};
use precint::ore::OreOperator;
use precint::valuation::ZSpec;
use precint::verify::{certificate, module_equal_at};

fn p(c: &[i64]) -> Poly<Rational> {
    Poly::from_ints(c)
}

// ℓ_0 = (x - 1)·m², m = (x - 1)² - 2.
fn operator() -> (OreOperator, AlgebraicPoint) {
    let m = p(&[-1, -2, 1]);
    let l0 = m.mul_poly(&m).mul_poly(&p(&[-1, 1]));
    let l = OreOperator::from_polys(vec![l0, p(&[1]), p(&[1])]);
    (l, AlgebraicPoint::root_of(&m, 0).unwrap())
}

fn run(update: DescentUpdate) -> precint::integral::GlobalRun {
    let (l, root) = operator();
    let zspec = ZSpec::new().with_bound(root.orbit_key(), 3).with_bound("Z", 3);
    global_integral_basis(&l, &zspec, &LocalOptions { update, max_iter: None }).unwrap()
}

#[test]
fn interpolation_keeps_every_point_integral() {
    let (l, _) = operator();
    let out = run(DescentUpdate::Interpolate);
    assert!(out.points().iter().any(|p| !p.is_rational()));
    for pt in out.points() {
        let report = certificate(&l, &out.basis, &pt, 100, 3).unwrap();
        assert!(report.is_clean(), "{report}");
    }
}

#[test]
fn trace_sum_breaks_where_norm_derivative_vanishes() {
    let (l, root) = operator();
    let z = root.at(2);
    // The trace sum of 1 is N'/N, which vanishes at 2 = (z + conj z) / 2.
    let norm = galois_norm_uniformizer(&z);
    let two = AlgebraicPoint::integer(2);
    assert_eq!(norm.derivative().eval(&Rational::from_integer(2.into())), Rational::zero());
    let g = galois_trace_sum(&NFElem::one(), &z);
    assert_eq!(g.nu_at_poly(&p(&[-2, 1])), Valuation::Finite(1));

    let good = run(DescentUpdate::Interpolate);
    let bad = run(DescentUpdate::TraceSum);
    assert!(!module_equal_at(&bad.basis, &good.basis, &two).unwrap());
    let report = certificate(&l, &bad.basis, &two, 100, 3).unwrap();
    assert!(!report.is_clean());
    // Away from the roots of N' both variants agree.
    let one = AlgebraicPoint::integer(1);
    assert!(module_equal_at(&bad.basis, &good.basis, &one).unwrap());
    for pt in good.points().into_iter().filter(|p| !p.is_rational()) {
        assert!(module_equal_at(&bad.basis, &good.basis, &pt).unwrap(), "{pt}");
    }
}
