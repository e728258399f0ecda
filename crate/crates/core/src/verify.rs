//! Independent checks: valuations recomputed from scratch, module equality
//! of two bases at a point, the integrality certificate, and random
//! operators for property tests.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::point::galois_norm_uniformizer;
use crate::field::{AlgebraicPoint, Field, NFElem, Poly, Rational, RationalFunction, Valuation};
use crate::integral::BasisMatrix;
use crate::linalg;
use crate::ore::{OreOperator, QValue, QuotientElement};
use crate::qvalues::{eval_shifted, eval_shifted_poly, nu_q, q_expand, QExpansion};
use crate::valuation::{default_anchor, singular_points};

/// Window used by [`certificate`] for its oracle.
pub const DEFAULT_WINDOW: i64 = 4;

/// Solutions of the deformed recurrence on `[lo, hi]` of one orbit, with
/// identity initial values at `anchor`, computed eagerly without caching
/// tricks.
pub struct BruteTable {
    lo: i64,
    root: NFElem,
    cols: Vec<Vec<QValue>>,
}

impl BruteTable {
    pub fn new(l: &OreOperator, orbit: &AlgebraicPoint, anchor: i64, lo: i64, hi: i64) -> Result<Self> {
        let l = l.normalize();
        let r = l.check_modulus()?;
        let ri = r as i64;
        if anchor < lo || anchor + ri - 1 > hi {
            return Err(Error::Precondition(format!(
                "identity block at {anchor} does not fit in [{lo}, {hi}]"
            )));
        }
        let k = orbit.orbit().number_field();
        let root = k.generator();
        let ell: Vec<Poly<Rational>> = (0..=r).map(|i| l.poly_coeff(i)).collect();
        let deformed = |w: i64| -> Vec<QValue> {
            let at = root.add_ref(&NFElem::from_int(w));
            ell.iter()
                .map(|c| QValue::from_poly(eval_shifted_poly(c, &at)))
                .collect()
        };
        let len = (hi - lo + 1) as usize;
        let mut cols = vec![vec![QValue::zero(); len]; r];
        for (j, col) in cols.iter_mut().enumerate() {
            col[(anchor - lo) as usize + j] = QValue::one();
        }
        for h in anchor + ri..=hi {
            let w = h - ri;
            let c = deformed(w);
            for col in cols.iter_mut() {
                let mut acc = QValue::zero();
                for i in 0..r {
                    acc = &acc + &(&c[i] * &col[(w - lo) as usize + i]);
                }
                col[(h - lo) as usize] = -&(&acc / &c[r]);
            }
        }
        for w in (lo..anchor).rev() {
            let c = deformed(w);
            for col in cols.iter_mut() {
                let mut acc = QValue::zero();
                for i in 1..=r {
                    acc = &acc + &(&c[i] * &col[(w - lo) as usize + i]);
                }
                col[(w - lo) as usize] = -&(&acc / &c[0]);
            }
        }
        Ok(BruteTable { lo, root, cols })
    }

    /// `b_j(ρ + n)`.
    pub fn value(&self, j: usize, n: i64) -> &QValue {
        &self.cols[j][(n - self.lo) as usize]
    }

    /// `(B·b_j)(ρ + n)` for every `j`.
    pub fn evaluations(&self, b: &QuotientElement, n: i64) -> Vec<QValue> {
        let at = self.root.add_ref(&NFElem::from_int(n));
        let shifted: Vec<QValue> = b.coords().iter().map(|c| eval_shifted(c, &at)).collect();
        (0..self.cols.len())
            .map(|j| {
                shifted.iter().enumerate().fold(QValue::zero(), |acc, (i, c)| {
                    &acc + &(c * self.value(j, n + i as i64))
                })
            })
            .collect()
    }

    /// `min_j ν_q((B·b_j)(ρ + n))`.
    pub fn val(&self, b: &QuotientElement, n: i64) -> Valuation {
        if b.is_zero() {
            return Valuation::Infinity;
        }
        self.evaluations(b, n)
            .iter()
            .map(nu_q)
            .min()
            .unwrap_or(Valuation::Infinity)
    }
}

/// Table covering `point` with the identity block `window` positions left of
/// the leftmost singular point of the orbit.
fn brute_table(l: &OreOperator, point: &AlgebraicPoint, window: i64) -> Result<BruteTable> {
    let r = l.check_modulus()? as i64;
    let orbit = point.orbit();
    let anchor = default_anchor(l, &orbit) - window.max(0);
    let n = point.offset();
    BruteTable::new(l, &orbit, anchor, anchor.min(n), (anchor + r - 1).max(n + r - 1))
}

/// `val_z(B)` recomputed by unrolling the recurrence from a fresh anchor.
pub fn brute_val(b: &QuotientElement, point: &AlgebraicPoint, l: &OreOperator, window: i64) -> Result<Valuation> {
    if b.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let r = l.check_modulus()?;
    if b.dim() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: b.dim(),
        });
    }
    Ok(brute_table(l, point, window)?.val(b, point.offset()))
}

/// Valuation growth of the `j`-th solution anchored at the default anchor,
/// read off windows `extra` positions wider than the order.
pub fn brute_growth(l: &OreOperator, orbit: &AlgebraicPoint, j: usize, extra: i64) -> Result<i64> {
    let r = l.check_modulus()? as i64;
    let orbit = orbit.orbit();
    let anchor = default_anchor(l, &orbit);
    let (left, right) = singular_points(l, &orbit);
    let top = left.iter().chain(&right).copied().max().unwrap_or(anchor).max(anchor);
    let width = r + extra.max(0);
    let lo = anchor - width;
    let hi = top + width;
    let table = BruteTable::new(l, &orbit, anchor, lo, hi)?;
    let min_over = |from: i64, to: i64| (from..=to).map(|n| nu_q(table.value(j, n))).min();
    match (min_over(top + 1, hi), min_over(lo, anchor - 1)) {
        (Some(Valuation::Finite(a)), Some(Valuation::Finite(b))) => Ok(a - b),
        _ => Ok(0),
    }
}

fn nu_z(f: &RationalFunction, point: &AlgebraicPoint) -> Valuation {
    f.nu_at_poly(&galois_norm_uniformizer(point))
}

/// Whether `a` and `b` generate the same module of integral elements at
/// `point`: the transition matrix `T` with `a = T·b` has entries of
/// nonnegative valuation and a unit determinant.
pub fn module_equal_at(a: &BasisMatrix, b: &BasisMatrix, point: &AlgebraicPoint) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: a.dim(),
        });
    }
    let b_inv = linalg::inverse(&b.coords()).ok_or(Error::SingularTransition)?;
    let t = linalg::mul(&a.coords(), &b_inv);
    let det = linalg::det(&t);
    if det.is_zero() {
        return Err(Error::SingularTransition);
    }
    let entries_ok = t
        .iter()
        .flatten()
        .all(|c| nu_z(c, point) >= Valuation::Finite(0));
    Ok(entries_ok && nu_z(&det, point) == Valuation::Finite(0))
}

/// One sample where `val ≥ 0` and `all ν_z(a_i) ≥ 0` disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub sample: usize,
    /// `ν_z` of each coordinate; `None` for a zero coordinate.
    pub exponents: Vec<Option<i64>>,
    pub val: Valuation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub point: String,
    pub seed: u64,
    pub samples: usize,
    /// Samples whose combination turned out integral.
    pub integral_samples: usize,
    pub violations: Vec<Violation>,
}

impl CertificateReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CertificateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "certificate at {} (seed {}): {} samples, {} integral, {} violations",
            self.point,
            self.seed,
            self.samples,
            self.integral_samples,
            self.violations.len()
        )?;
        for v in &self.violations {
            let exps: Vec<String> = v
                .exponents
                .iter()
                .map(|e| e.map_or("inf".to_string(), |e| e.to_string()))
                .collect();
            writeln!(f, "  sample {}: exponents [{}], val {}", v.sample, exps.join(", "), v.val)?;
        }
        Ok(())
    }
}

/// Terms of each expansion compared before falling back to exact sums.
const SERIES_TERMS: i64 = 6;

/// `E_ij = (B_i·b_j)(z)` for a fixed basis, exactly and expanded, so that
/// `val(Σ a_i B_i) = min_j ν_q(Σ_i a_i(z + q) E_ij)` is cheap per sample.
struct RowEvaluations {
    exact: Vec<Vec<QValue>>,
    series: Vec<Vec<QExpansion<NFElem>>>,
}

impl RowEvaluations {
    fn new(table: &BruteTable, basis: &BasisMatrix, n: i64) -> Self {
        let exact: Vec<Vec<QValue>> = basis.rows().iter().map(|b| table.evaluations(b, n)).collect();
        let series = exact
            .iter()
            .map(|row| row.iter().map(|e| expand_window(e)).collect())
            .collect();
        RowEvaluations { exact, series }
    }

    fn val(&self, coeffs: &[RationalFunction], at: &NFElem) -> Valuation {
        let shifted: Vec<QValue> = coeffs.iter().map(|c| eval_shifted(c, at)).collect();
        let expanded: Vec<QExpansion<NFElem>> = shifted.iter().map(expand_window).collect();
        let cols = self.exact.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| self.column_val(j, &shifted, &expanded))
            .min()
            .unwrap_or(Valuation::Infinity)
    }

    fn column_val(&self, j: usize, shifted: &[QValue], expanded: &[QExpansion<NFElem>]) -> Valuation {
        let terms: Vec<(usize, i64, i64)> = (0..shifted.len())
            .filter_map(|i| match (expanded[i].valuation, self.series[i][j].valuation) {
                (Valuation::Finite(a), Valuation::Finite(e)) => Some((i, a, e)),
                _ => None,
            })
            .collect();
        let Some(low) = terms.iter().map(|&(_, a, e)| a + e).min() else {
            return Valuation::Infinity;
        };
        for k in low..low + SERIES_TERMS {
            let mut c = NFElem::zero();
            for &(i, a, e) in &terms {
                for t in a..=k - e {
                    let x = expanded[i].coeff(t);
                    if x.is_zero() {
                        continue;
                    }
                    c = c.add_ref(&x.mul_ref(&self.series[i][j].coeff(k - t)));
                }
            }
            if !c.is_zero() {
                return Valuation::Finite(k);
            }
        }
        let sum = terms.iter().fold(QValue::zero(), |acc, &(i, _, _)| {
            &acc + &(&shifted[i] * &self.exact[i][j])
        });
        nu_q(&sum)
    }
}

fn expand_window(f: &QValue) -> QExpansion<NFElem> {
    match nu_q(f) {
        Valuation::Finite(v) => q_expand(f, v + SERIES_TERMS),
        Valuation::Infinity => q_expand(f, 0),
    }
}

/// Random polynomial of degree at most `deg` with coefficients in
/// `[-height, height]`.
pub fn random_poly<R: Rng>(rng: &mut R, deg: usize, height: i64) -> Poly<Rational> {
    Poly::from_ints(&(0..=deg).map(|_| rng.gen_range(-height..=height)).collect::<Vec<_>>())
}

/// Random nonzero polynomial not divisible by `avoid`.
fn random_coprime_poly<R: Rng>(rng: &mut R, deg: usize, height: i64, avoid: &Poly<Rational>) -> Poly<Rational> {
    loop {
        let p = random_poly(rng, deg, height);
        if !p.is_zero() && !p.rem(avoid).is_zero() {
            return p;
        }
    }
}

/// Rational function with `ν_z = 0`.
fn random_unit<R: Rng>(rng: &mut R, norm: &Poly<Rational>) -> RationalFunction {
    let num = random_coprime_poly(rng, 2, 4, norm);
    let den = random_coprime_poly(rng, 1, 3, norm);
    RationalFunction::new(num, den)
}

/// Random element of `V` with coordinates of degree ≤ `deg`.
pub fn random_element<R: Rng>(rng: &mut R, r: usize, deg: usize, height: i64) -> QuotientElement {
    QuotientElement::new(
        (0..r)
            .map(|_| {
                let num = random_poly(rng, deg, height);
                let den = loop {
                    let d = if rng.gen_bool(0.5) {
                        Poly::one()
                    } else {
                        random_poly(rng, 1, height.max(1))
                    };
                    if !d.is_zero() {
                        break d;
                    }
                };
                RationalFunction::new(num, den)
            })
            .collect(),
    )
}

/// Checks `val(Σ a_i B_i) ≥ 0 ⇔ all ν_z(a_i) ≥ 0` on random coefficient
/// vectors with valuations drawn from `-2..=2`, using [`brute_val`]'s
/// recomputation as the value function.
pub fn certificate(
    l: &OreOperator,
    basis: &BasisMatrix,
    point: &AlgebraicPoint,
    samples: usize,
    seed: u64,
) -> Result<CertificateReport> {
    let mut report = CertificateReport {
        point: point.to_string(),
        seed,
        samples,
        integral_samples: 0,
        violations: Vec::new(),
    };
    if samples == 0 {
        return Ok(report);
    }
    let table = brute_table(l, point, DEFAULT_WINDOW)?;
    let rows = RowEvaluations::new(&table, basis, point.offset());
    let norm = galois_norm_uniformizer(point);
    let uniformizer = RationalFunction::from_poly(norm.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = basis.dim();
    for sample in 0..samples {
        let mut exponents = Vec::with_capacity(r);
        let mut coeffs = Vec::with_capacity(r);
        for _ in 0..r {
            // One draw in six leaves the coordinate zero.
            if rng.gen_range(0..6) == 0 {
                exponents.push(None);
                coeffs.push(RationalFunction::zero());
                continue;
            }
            let e = rng.gen_range(-2..=2);
            coeffs.push(random_unit(&mut rng, &norm).mul_ref(&uniformizer.pow(e)));
            exponents.push(Some(e));
        }
        let val = rows.val(&coeffs, &table.root.add_ref(&NFElem::from_int(point.offset())));
        let integral = val >= Valuation::Finite(0);
        let expected = exponents.iter().all(|e| e.map_or(true, |e| e >= 0));
        if integral {
            report.integral_samples += 1;
        }
        if integral != expected {
            report.violations.push(Violation {
                sample,
                exponents,
                val,
            });
        }
    }
    Ok(report)
}

/// Root structure imposed on `ℓ_0` and `ℓ_r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootShape {
    #[default]
    Any,
    /// Products of linear factors `x - k` with small integers `k`.
    IntegerRoots,
    /// Constants or quadratics without rational roots.
    NoRationalRoots,
}

/// Parameters for random operators `ℓ_0 + ℓ_1 S + ⋯ + ℓ_r S^r`.
#[derive(Clone, Debug)]
pub struct RandomOperatorSpec {
    pub order: usize,
    pub degree: usize,
    pub height: i64,
    pub seed: u64,
    pub roots: RootShape,
}

impl RandomOperatorSpec {
    pub fn new(order: usize, degree: usize, height: i64, seed: u64) -> Self {
        RandomOperatorSpec {
            order,
            degree,
            height,
            seed,
            roots: RootShape::Any,
        }
    }

    pub fn with_roots(mut self, roots: RootShape) -> Self {
        self.roots = roots;
        self
    }

    /// `count` operators drawn from one seeded stream.
    pub fn generate(&self, count: usize) -> Vec<OreOperator> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count).map(|_| self.draw(&mut rng)).collect()
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> OreOperator {
        let r = self.order.max(1);
        let mut coeffs = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let c = if i == 0 || i == r {
                self.end_coeff(rng)
            } else {
                random_poly(rng, self.degree, self.height)
            };
            coeffs.push(c);
        }
        OreOperator::from_polys(coeffs)
    }

    fn end_coeff<R: Rng>(&self, rng: &mut R) -> Poly<Rational> {
        let h = self.height.max(1);
        let nonzero = |rng: &mut R| loop {
            let c = rng.gen_range(-h..=h);
            if c != 0 {
                return c;
            }
        };
        match self.roots {
            RootShape::Any => loop {
                let p = random_poly(rng, self.degree, h);
                if !p.is_zero() {
                    return p;
                }
            },
            RootShape::IntegerRoots => {
                let deg = rng.gen_range(0..=self.degree);
                let mut p = Poly::constant(Rational::from_integer(nonzero(rng).into()));
                for _ in 0..deg {
                    let k = rng.gen_range(-3..=3);
                    p = p.mul_poly(&Poly::from_ints(&[-k, 1]));
                }
                p
            }
            RootShape::NoRationalRoots => {
                if self.degree < 2 || rng.gen_bool(0.3) {
                    return Poly::constant(Rational::from_integer(nonzero(rng).into()));
                }
                loop {
                    let b = rng.gen_range(-h..=h);
                    let c = rng.gen_range(-h..=h);
                    let disc = b * b - 4 * c;
                    let s = (disc.max(0) as f64).sqrt() as i64;
                    let square = disc >= 0 && (s - 1..=s + 1).any(|t| t >= 0 && t * t == disc);
                    if !square {
                        return Poly::from_ints(&[c, b, 1]).scale(&Rational::from_integer(nonzero(rng).into()));
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::{local_integral_basis, LocalOptions, ShiftSpace};
    use crate::valuation::{val_at, OrbitAnalysis};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(p(num), p(den))
    }

    fn sample_operator() -> OreOperator {
        OreOperator::from_polys(vec![p(&[4, 4, 1]), p(&[]), p(&[0, 1]), p(&[2, 1])])
    }

    fn printed_local() -> BasisMatrix {
        BasisMatrix::from_rows(vec![
            QuotientElement::unit(3, 0),
            QuotientElement::new(vec![rf(&[-2, 1], &[0, 0, 1]), rf(&[1], &[0, 1]), RationalFunction::zero()]),
            QuotientElement::new(vec![rf(&[-2], &[0, 1]), RationalFunction::zero(), RationalFunction::one()]),
        ])
        .unwrap()
    }

    #[test]
    fn brute_val_examples() {
        let z = AlgebraicPoint::integer(0);
        assert_eq!(brute_val(&QuotientElement::unit(3, 1), &z, &sample_operator(), 10).unwrap(), Valuation::Finite(-1));
        assert_eq!(brute_val(&QuotientElement::zero(3), &z, &sample_operator(), 10).unwrap(), Valuation::Infinity);
        let plain = OreOperator::from_polys(vec![p(&[-1]), p(&[]), p(&[1])]);
        assert_eq!(brute_val(&QuotientElement::unit(2, 0), &z, &plain, 3).unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn brute_val_matches_cached() {
        let l = sample_operator();
        let analysis = OrbitAnalysis::new(&l, &AlgebraicPoint::integer(0)).unwrap();
        for n in -4..3 {
            let z = AlgebraicPoint::integer(n);
            for i in 0..3 {
                let b = QuotientElement::unit(3, i);
                assert_eq!(brute_val(&b, &z, &l, 5).unwrap(), val_at(&b, &z, &analysis).unwrap());
            }
        }
    }

    #[test]
    fn growth_of_third_solution() {
        assert_eq!(brute_growth(&sample_operator(), &AlgebraicPoint::integer(0), 2, 6).unwrap(), -1);
    }

    #[test]
    fn module_equality() {
        let z = AlgebraicPoint::integer(0);
        let b = printed_local();
        assert!(module_equal_at(&b, &b, &z).unwrap());
        assert!(!module_equal_at(&b.scale_row(1, &RationalFunction::var()), &b, &z).unwrap());
        // A unit at 0 does not matter.
        assert!(module_equal_at(&b.scale_row(1, &rf(&[1, 1], &[1])), &b, &z).unwrap());
        let space = ShiftSpace::new(&sample_operator()).unwrap();
        let run = local_integral_basis(&space, &BasisMatrix::standard(3), &z, &LocalOptions::default()).unwrap();
        assert!(module_equal_at(&run.basis, &b, &z).unwrap());
    }

    #[test]
    fn certificate_examples() {
        let z = AlgebraicPoint::integer(0);
        let report = certificate(&sample_operator(), &printed_local(), &z, 200, 7).unwrap();
        assert!(report.is_clean(), "{report}");
        assert!(report.integral_samples > 0);
        let bad = certificate(&sample_operator(), &BasisMatrix::standard(3), &z, 200, 7).unwrap();
        assert!(!bad.is_clean());
        let empty = certificate(&sample_operator(), &BasisMatrix::standard(3), &z, 0, 7).unwrap();
        assert!(empty.is_clean());
        assert_eq!(empty.seed, 7);
    }

    #[test]
    fn expanded_val_matches_exact() {
        let l = sample_operator();
        let z = AlgebraicPoint::integer(-1);
        let table = brute_table(&l, &z, DEFAULT_WINDOW).unwrap();
        let basis = printed_local();
        let rows = RowEvaluations::new(&table, &basis, -1);
        let at = table.root.add_ref(&NFElem::from_int(-1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let coeffs: Vec<RationalFunction> = random_element(&mut rng, 3, 2, 3).coords().to_vec();
            let elem = basis
                .rows()
                .iter()
                .zip(&coeffs)
                .fold(QuotientElement::zero(3), |acc, (b, c)| acc.add(&b.scale(c)));
            assert_eq!(rows.val(&coeffs, &at), table.val(&elem, -1));
        }
        // Exact cancellation falls back to the exact sum.
        let cancel = vec![RationalFunction::one(), RationalFunction::zero(), RationalFunction::zero()];
        assert_eq!(rows.val(&cancel, &at), table.val(basis.row(0), -1));
    }

    #[test]
    fn random_operators() {
        let ops = RandomOperatorSpec::new(3, 2, 5, 1).generate(20);
        for l in &ops {
            let r = l.order().unwrap();
            assert!(r <= 3);
            assert!(!l.coeff(0).is_zero() && !l.coeff(r).is_zero());
        }
        let again = RandomOperatorSpec::new(3, 2, 5, 1).generate(20);
        assert_eq!(ops, again);
        let free = RandomOperatorSpec::new(2, 2, 5, 2)
            .with_roots(RootShape::NoRationalRoots)
            .generate(20);
        for l in &free {
            let r = l.order().unwrap();
            for c in [l.poly_coeff(0), l.poly_coeff(r)] {
                assert!(crate::field::factor::factor(&c).iter().all(|(f, _)| f.deg() > 1));
            }
        }
    }
}
