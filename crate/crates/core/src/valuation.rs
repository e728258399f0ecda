//! The value function `val_z` on `V = Q(x)[S]/⟨L⟩`, singular points per
//! orbit, valuation growth and the finite set of points that need work.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::factor::factor;
use crate::field::{AlgebraicPoint, Field, Poly, Rational, Valuation};
use crate::ore::{OreOperator, QValue, QuotientElement, SolutionBasis};
use crate::qvalues::nu_q;

fn offsets_in_orbit(p: &Poly<Rational>, orbit: &AlgebraicPoint) -> Vec<i64> {
    if p.is_constant() {
        return Vec::new();
    }
    let mut out: Vec<i64> = factor(p)
        .iter()
        .filter_map(|(f, _)| orbit.offset_of_root(f))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Offsets `n` in the orbit with `ℓ_0(ρ + n) = 0` (leftward) and with
/// `ℓ_r(ρ + n - r) = 0` (rightward).
pub fn singular_points(l: &OreOperator, orbit: &AlgebraicPoint) -> (Vec<i64>, Vec<i64>) {
    let l = l.normalize();
    let r = match l.order() {
        Some(r) if r > 0 => r,
        _ => return (Vec::new(), Vec::new()),
    };
    let leftward = offsets_in_orbit(&l.poly_coeff(0), orbit);
    let rightward = offsets_in_orbit(&l.poly_coeff(r).shift_int(-(r as i64)), orbit);
    (leftward, rightward)
}

/// Orbit representatives of all roots of `ℓ_0 ℓ_r`, rational orbits first.
pub fn singular_orbits(l: &OreOperator) -> Vec<AlgebraicPoint> {
    let l = l.normalize();
    let r = match l.order() {
        Some(r) if r > 0 => r,
        _ => return Vec::new(),
    };
    let mut orbits: BTreeMap<(usize, String), AlgebraicPoint> = BTreeMap::new();
    for c in [l.poly_coeff(0), l.poly_coeff(r)] {
        if c.is_constant() {
            continue;
        }
        for (f, _) in factor(&c) {
            let pt = AlgebraicPoint::root_of(&f, 0)
                .expect("factors are irreducible")
                .orbit();
            orbits.insert((pt.degree(), pt.orbit_key()), pt);
        }
    }
    orbits.into_values().collect()
}

/// Leftmost root of `ℓ_0 ℓ_r` in the orbit, or 0 when there is none. Every
/// value left of the identity block placed here is free of valuation drops.
pub fn default_anchor(l: &OreOperator, orbit: &AlgebraicPoint) -> i64 {
    let (leftward, rightward) = singular_points(l, orbit);
    let r = l.order().unwrap_or(0) as i64;
    leftward
        .iter()
        .copied()
        .chain(rightward.iter().map(|n| n - r))
        .min()
        .unwrap_or(0)
}

/// Everything needed to evaluate `val` along one orbit.
#[derive(Debug)]
pub struct OrbitAnalysis {
    orbit: AlgebraicPoint,
    leftward: Vec<i64>,
    rightward: Vec<i64>,
    basis: SolutionBasis,
    growths: Vec<i64>,
}

impl OrbitAnalysis {
    pub fn new(l: &OreOperator, orbit: &AlgebraicPoint) -> Result<Self> {
        Self::with_anchor(l, orbit, default_anchor(l, orbit))
    }

    /// Analysis with an explicit anchor, which must not exceed the default.
    pub fn with_anchor(l: &OreOperator, orbit: &AlgebraicPoint, anchor: i64) -> Result<Self> {
        let default = default_anchor(l, orbit);
        if anchor > default {
            return Err(Error::Precondition(format!(
                "anchor {anchor} lies right of the leftmost singular point {default}"
            )));
        }
        let basis = SolutionBasis::new(l, orbit, anchor)?;
        let (leftward, rightward) = singular_points(l, orbit);
        let mut analysis = OrbitAnalysis {
            orbit: orbit.orbit(),
            leftward,
            rightward,
            basis,
            growths: Vec::new(),
        };
        analysis.growths = (0..analysis.order())
            .map(|j| analysis.growth_of_values(|n| analysis.basis.value(j, n), 0))
            .collect();
        Ok(analysis)
    }

    pub fn orbit(&self) -> &AlgebraicPoint {
        &self.orbit
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    pub fn leftward(&self) -> &[i64] {
        &self.leftward
    }

    pub fn rightward(&self) -> &[i64] {
        &self.rightward
    }

    pub fn basis(&self) -> &SolutionBasis {
        &self.basis
    }

    pub fn anchor(&self) -> i64 {
        self.basis.anchor()
    }

    /// Valuation growth of each anchored basis solution.
    pub fn growths(&self) -> &[i64] {
        &self.growths
    }

    pub fn has_nonzero_growth(&self) -> bool {
        self.growths.iter().any(|&g| g != 0)
    }

    /// Whether the orbit contains any root of `ℓ_0 ℓ_r(x - r)`.
    pub fn is_singular(&self) -> bool {
        !self.leftward.is_empty() || !self.rightward.is_empty()
    }

    /// Leftmost offset where the standard basis can fail to be integral.
    pub fn left_end(&self) -> i64 {
        self.anchor()
    }

    /// Rightmost singular offset; beyond it no valuation drops occur.
    pub fn right_end(&self) -> i64 {
        self.leftward
            .iter()
            .chain(&self.rightward)
            .copied()
            .max()
            .unwrap_or(self.anchor())
            .max(self.anchor())
    }

    fn window_min(&self, value: &impl Fn(i64) -> QValue, from: i64, len: i64) -> Valuation {
        (from..from + len).map(|n| nu_q(&value(n))).min().unwrap_or(Valuation::Infinity)
    }

    /// Right liminf minus left liminf of the sequence `value`, each read off
    /// a window of `r + extra` positions just outside the singular range.
    fn growth_of_values(&self, value: impl Fn(i64) -> QValue, extra: i64) -> i64 {
        let r = self.order() as i64;
        let right = self.window_min(&value, self.right_end() + 1, r + extra);
        let left = self.window_min(&value, self.anchor() - r - extra, r + extra);
        match (right, left) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a - b,
            _ => 0,
        }
    }

    /// Growth of `j`-th anchored solution.
    pub fn valuation_growth(&self, j: usize) -> i64 {
        self.growths[j]
    }

    /// Growth of the solution `Σ c_j b_j` with coefficients in `K(q)`.
    pub fn growth_of_combination(&self, coeffs: &[QValue]) -> i64 {
        self.growth_of_values(|n| self.combination_value(coeffs, n), 0)
    }

    /// `(Σ c_j b_j)(ρ + n)`.
    pub fn combination_value(&self, coeffs: &[QValue], n: i64) -> QValue {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(QValue::zero(), |acc, (j, c)| {
                &acc + &(c * &self.basis.value(j, n))
            })
    }

    /// Oracle for the liminf claim: widening both growth windows by `extra`
    /// positions does not change any window minimum.
    pub fn windows_stable(&self, extra: i64) -> bool {
        let r = self.order() as i64;
        (0..self.order()).all(|j| {
            let value = |n| self.basis.value(j, n);
            let right = self.right_end() + 1;
            let left = self.anchor() - r;
            self.window_min(&value, right, r) == self.window_min(&value, right, r + extra)
                && self.window_min(&value, left, r)
                    == self.window_min(&value, left - extra, r + extra)
        })
    }

    /// `val` at offset `n`: `min_j ν_q((B·b_j)(ρ + n))`.
    pub fn val_at(&self, b: &QuotientElement, n: i64) -> Valuation {
        if b.is_zero() {
            return Valuation::Infinity;
        }
        (0..self.order())
            .map(|j| nu_q(&self.basis.apply_element(b, j, n)))
            .min()
            .unwrap_or(Valuation::Infinity)
    }
}

/// `val_z(B)` for a point of the analysed orbit.
pub fn val_at(b: &QuotientElement, point: &AlgebraicPoint, analysis: &OrbitAnalysis) -> Result<Valuation> {
    if !point.same_orbit(analysis.orbit()) {
        return Err(Error::InvalidPoint(format!(
            "{point} is not in orbit {}",
            analysis.orbit().orbit_key()
        )));
    }
    if b.dim() != analysis.order() {
        return Err(Error::DimensionMismatch {
            expected: analysis.order(),
            found: b.dim(),
        });
    }
    Ok(analysis.val_at(b, point.offset()))
}

/// Which orbits the set `Z` meets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZDomain {
    /// Every orbit.
    #[default]
    All,
    /// Only orbits of rational points.
    Rational,
}

/// The set `Z` of points where integrality is required: per-orbit right
/// bounds keyed by orbit name, and the orbits it meets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZSpec {
    bounds: BTreeMap<String, i64>,
    domain: ZDomain,
}

impl ZSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_bound(mut self, orbit_key: impl Into<String>, bound: i64) -> Self {
        self.bounds.insert(orbit_key.into(), bound);
        self
    }

    pub fn with_domain(mut self, domain: ZDomain) -> Self {
        self.domain = domain;
        self
    }

    pub fn bound(&self, orbit_key: &str) -> Option<i64> {
        self.bounds.get(orbit_key).copied()
    }

    pub fn bounds(&self) -> &BTreeMap<String, i64> {
        &self.bounds
    }

    pub fn domain(&self) -> ZDomain {
        self.domain
    }

    pub fn contains_orbit(&self, orbit: &AlgebraicPoint) -> bool {
        match self.domain {
            ZDomain::All => true,
            ZDomain::Rational => orbit.is_rational(),
        }
    }
}

/// One orbit of the worklist with the offsets to process, ascending.
#[derive(Debug)]
pub struct WorkItem {
    pub analysis: OrbitAnalysis,
    pub points: Vec<i64>,
}

/// Points of `Z` where the standard basis may fail to be integral.
pub fn worklist(l: &OreOperator, zspec: &ZSpec) -> Result<Vec<WorkItem>> {
    let mut out = Vec::new();
    for orbit in singular_orbits(l) {
        if !zspec.contains_orbit(&orbit) {
            continue;
        }
        let analysis = OrbitAnalysis::new(l, &orbit)?;
        let key = orbit.orbit_key();
        let bound = zspec.bound(&key);
        let upper = if analysis.has_nonzero_growth() {
            bound.ok_or_else(|| Error::MissingRightBound {
                orbit: key.clone(),
                growths: analysis.growths().to_vec(),
            })?
        } else {
            let end = analysis.right_end();
            bound.map_or(end, |b| b.min(end))
        };
        let points: Vec<i64> = (analysis.left_end()..=upper).collect();
        if !points.is_empty() {
            out.push(WorkItem { analysis, points });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{NFElem, RationalFunction};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    fn sample_operator() -> OreOperator {
        OreOperator::from_polys(vec![p(&[4, 4, 1]), p(&[]), p(&[0, 1]), p(&[2, 1])])
    }

    #[test]
    fn singular_point_examples() {
        let z = AlgebraicPoint::integer(0);
        assert_eq!(singular_points(&sample_operator(), &z), (vec![-2], vec![1]));
        let osc = OreOperator::from_polys(vec![p(&[-1]), p(&[]), p(&[1])]);
        assert_eq!(singular_points(&osc, &z), (vec![], vec![]));
        let alg = OreOperator::from_polys(vec![p(&[-2, 0, 1]), p(&[1]), p(&[1])]);
        let orbit = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), 0).unwrap();
        assert!(singular_points(&alg, &orbit).0.contains(&0));
    }

    #[test]
    fn worked_example_valuations() {
        let a = OrbitAnalysis::new(&sample_operator(), &AlgebraicPoint::integer(0)).unwrap();
        assert_eq!(a.anchor(), -2);
        assert_eq!(a.val_at(&QuotientElement::unit(3, 0), 0), Valuation::Finite(0));
        assert_eq!(a.val_at(&QuotientElement::unit(3, 1), 0), Valuation::Finite(-1));
        assert_eq!(a.val_at(&QuotientElement::unit(3, 2), 0), Valuation::Finite(-1));
        assert_eq!(a.val_at(&QuotientElement::zero(3), 0), Valuation::Infinity);
        let xs = QuotientElement::new(vec![
            RationalFunction::zero(),
            RationalFunction::var(),
            RationalFunction::zero(),
        ]);
        assert_eq!(a.val_at(&xs, 0), Valuation::Finite(0));
        assert_eq!(a.valuation_growth(2), -1);
        assert!(a.windows_stable(6));
    }

    #[test]
    fn oscillating_solution_has_zero_growth() {
        // f(z) = 1 + q + (-1)^z solves S^2 - 1; f(0) = 2 + q, f(1) = q.
        let osc = OreOperator::from_polys(vec![p(&[-1]), p(&[]), p(&[1])]);
        let a = OrbitAnalysis::new(&osc, &AlgebraicPoint::integer(0)).unwrap();
        let q = |c: &[i64]| QValue::from_poly(p(c).map(NFElem::from_rational));
        let coeffs = [q(&[2, 1]), q(&[0, 1])];
        assert_eq!(a.combination_value(&coeffs, 5), q(&[0, 1]));
        assert_eq!(a.growth_of_combination(&coeffs), 0);
        assert_eq!(a.growths(), &[0, 0]);
    }

    #[test]
    fn worklist_examples() {
        let w = worklist(&sample_operator(), &ZSpec::new().with_bound("Z", 0)).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].points, vec![-2, -1, 0]);
        let osc = OreOperator::from_polys(vec![p(&[-1]), p(&[]), p(&[1])]);
        assert!(worklist(&osc, &ZSpec::new()).unwrap().is_empty());
        match worklist(&sample_operator(), &ZSpec::new()) {
            Err(Error::MissingRightBound { orbit, .. }) => assert_eq!(orbit, "Z"),
            other => panic!("expected missing bound, got {other:?}"),
        }
    }

    #[test]
    fn left_end_tracks_constant_coefficient_roots() {
        // (x - 5) + x S: solution drops at 1 and recovers at 6.
        let l = OreOperator::from_polys(vec![p(&[-5, 1]), p(&[0, 1])]);
        let a = OrbitAnalysis::new(&l, &AlgebraicPoint::integer(0)).unwrap();
        assert_eq!(a.anchor(), 0);
        assert_eq!(a.growths(), &[0]);
        let one = QuotientElement::unit(1, 0);
        let vals: Vec<_> = (-1..=7).map(|n| a.val_at(&one, n)).collect();
        let expect: Vec<Valuation> = [0, 0, -1, -1, -1, -1, -1, 0, 0]
            .iter()
            .map(|&v| Valuation::Finite(v))
            .collect();
        assert_eq!(vals, expect);
        let w = worklist(&l, &ZSpec::new()).unwrap();
        assert_eq!(w[0].points, (0..=5).collect::<Vec<_>>());
    }
}
