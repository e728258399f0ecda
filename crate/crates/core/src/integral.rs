//! Local and global integral bases over a valued vector space.
//!
//! The local algorithm works against the [`ValuedSpace`] capabilities only;
//! [`ShiftSpace`] instantiates them for `Q(x)[S]/⟨L⟩` and [`ToySpace`] for a
//! space with a weighted-minimum value function.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::point::{self, galois_norm_uniformizer, galois_trace_sum};
use crate::field::{AlgebraicPoint, Field, NFElem, Poly, Rational, RationalFunction, Valuation};
use crate::linalg;
use crate::ore::{OreOperator, QValue, QuotientElement};
use crate::qvalues::{eval_shifted, eval_shifted_poly, nu_q, q_coeff};
use crate::valuation::{worklist, OrbitAnalysis, ZSpec};

/// A vector space over `Q(x)` with a value function at every algebraic point.
///
/// Elements are coordinate vectors with respect to a fixed ambient basis.
/// The one required capability is `evaluate`: a list of `K(q)` values
/// (`K = Q(z)`) whose least `q`-valuation is `val_z` of the element and which
/// is linear over `Q(x)` with `x` acting as `z + q`. Everything else has a
/// default built on it.
pub trait ValuedSpace {
    fn dimension(&self) -> usize;

    fn evaluate(&self, elem: &QuotientElement, point: &AlgebraicPoint) -> Result<Vec<QValue>>;

    fn val(&self, elem: &QuotientElement, point: &AlgebraicPoint) -> Result<Valuation> {
        Ok(min_nu(&self.evaluate(elem, point)?))
    }

    /// Constants `α_i ∈ Q(z)` with `val(Σ α_i B_i + B_d) > 0`, if any.
    fn find_alpha(
        &self,
        prefix: &[QuotientElement],
        target: &QuotientElement,
        point: &AlgebraicPoint,
    ) -> Result<Option<Vec<NFElem>>> {
        let mut all: Vec<QuotientElement> = prefix.to_vec();
        all.push(target.clone());
        if linalg::rank(&coords_matrix(&all)) < all.len() {
            return Err(Error::Precondition(
                "candidate is linearly dependent on the prefix".into(),
            ));
        }
        let prefix_evals: Vec<Vec<QValue>> = prefix
            .iter()
            .map(|b| self.evaluate(b, point))
            .collect::<Result<_>>()?;
        if prefix_evals.iter().any(|e| min_nu(e) < Valuation::Finite(0)) {
            return Err(Error::Precondition("prefix is not integral".into()));
        }
        let target_eval = self.evaluate(target, point)?;
        if min_nu(&target_eval) < Valuation::Finite(0) {
            return Err(Error::Precondition("candidate has negative value".into()));
        }
        Ok(solve_alpha(&prefix_evals, &target_eval))
    }

    /// A polynomial in `Q[x]` with valuation 1 at `z` and its conjugates and
    /// valuation 0 elsewhere.
    fn uniformizer_norm(&self, point: &AlgebraicPoint) -> Poly<Rational> {
        galois_norm_uniformizer(point)
    }

    /// `Σ_σ σ(c / (x - z))`.
    fn galois_sum(&self, c: &NFElem, point: &AlgebraicPoint) -> RationalFunction {
        galois_trace_sum(c, point)
    }

    /// A polynomial taking the value `σ(c)` at every conjugate `σ(z)`.
    fn interpolate(&self, c: &NFElem, point: &AlgebraicPoint) -> Poly<Rational> {
        point::interpolate(c, point)
    }

    /// `ν_q` of the determinant of the evaluation matrix.
    fn discriminant(&self, rows: &[QuotientElement], point: &AlgebraicPoint) -> Result<i64> {
        let evals: Vec<Vec<QValue>> = rows
            .iter()
            .map(|b| self.evaluate(b, point))
            .collect::<Result<_>>()?;
        disc_of(&evals)
    }
}

fn min_nu(values: &[QValue]) -> Valuation {
    values.iter().map(nu_q).min().unwrap_or(Valuation::Infinity)
}

fn disc_of(evals: &[Vec<QValue>]) -> Result<i64> {
    nu_q(&linalg::det(&evals.to_vec()))
        .finite()
        .ok_or(Error::SingularTransition)
}

/// Clear the `q^0` coefficient of every evaluation of `Σ α_i B_i + B_d`.
fn solve_alpha(prefix: &[Vec<QValue>], target: &[QValue]) -> Option<Vec<NFElem>> {
    let a: linalg::Matrix<NFElem> = (0..target.len())
        .map(|j| prefix.iter().map(|e| q_coeff(&e[j], 0)).collect())
        .collect();
    let rhs: Vec<NFElem> = target.iter().map(|v| q_coeff(v, 0).neg_ref()).collect();
    if prefix.is_empty() {
        return rhs.iter().all(NFElem::is_zero).then(Vec::new);
    }
    linalg::solve(&a, &rhs)
}

fn coords_matrix(rows: &[QuotientElement]) -> linalg::Matrix<RationalFunction> {
    rows.iter().map(|b| b.coords().to_vec()).collect()
}

/// One step of the local algorithm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Update {
    pub point: String,
    pub row: usize,
    pub kind: UpdateKind,
    pub disc_before: i64,
    pub disc_after: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateKind {
    /// Row multiplied by the `power`-th power of the uniformizer norm.
    Scale { power: i64 },
    /// Row replaced by a combination with the printed constants.
    Combine { alphas: Vec<String> },
}

/// Candidate integral basis: rows are coordinate vectors over `Q(x)`.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    rows: Vec<QuotientElement>,
    log: Vec<Update>,
}

impl PartialEq for BasisMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl BasisMatrix {
    /// `1, S, …, S^{r-1}`.
    pub fn standard(r: usize) -> Self {
        BasisMatrix {
            rows: (0..r).map(|i| QuotientElement::unit(r, i)).collect(),
            log: Vec::new(),
        }
    }

    /// Checks shape and linear independence.
    pub fn from_rows(rows: Vec<QuotientElement>) -> Result<Self> {
        let r = rows.len();
        if let Some(bad) = rows.iter().find(|b| b.dim() != r) {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: bad.dim(),
            });
        }
        let basis = BasisMatrix {
            rows,
            log: Vec::new(),
        };
        if basis.det().is_zero() {
            return Err(Error::SingularTransition);
        }
        Ok(basis)
    }

    pub fn rows(&self) -> &[QuotientElement] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QuotientElement {
        &self.rows[i]
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn log(&self) -> &[Update] {
        &self.log
    }

    pub fn coords(&self) -> linalg::Matrix<RationalFunction> {
        coords_matrix(&self.rows)
    }

    pub fn det(&self) -> RationalFunction {
        linalg::det(&self.coords())
    }

    /// Same rows with row `i` multiplied by `c`.
    pub fn scale_row(&self, i: usize, c: &RationalFunction) -> Self {
        let mut out = self.clone();
        out.rows[i] = out.rows[i].scale(c);
        out
    }

    /// Every coordinate is a rational function over Q. Always true by
    /// construction; kept as an explicit check for callers that build rows
    /// by hand.
    pub fn has_rational_coords(&self) -> bool {
        self.rows.iter().all(|b| b.dim() == self.dim())
    }
}

impl fmt::Display for BasisMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.rows.iter().enumerate() {
            writeln!(f, "B{} = {}", i + 1, b)?;
        }
        Ok(())
    }
}

/// How the while-loop update avoids leaving `Q(x)` at an algebraic point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DescentUpdate {
    /// `B_d ← (Σ a_i(x) B_i + B_d) / N(x)` with `a_i(σ(z)) = σ(α_i)` and
    /// `N` the uniformizer norm.
    #[default]
    Interpolate,
    /// `B_d ← Σ_i (Σ_σ σ(α_i/(x - z))) B_i` with `α_d = 1`. Loses
    /// integrality at any other point of the worklist where `N'` vanishes.
    TraceSum,
}

#[derive(Clone, Debug, Default)]
pub struct LocalOptions {
    pub update: DescentUpdate,
    /// Bound on while-loop iterations per point; default is the initial
    /// discriminant plus a small margin.
    pub max_iter: Option<usize>,
}

const ITERATION_MARGIN: usize = 4;

/// Result of one local run.
#[derive(Clone, Debug)]
pub struct LocalRun {
    pub basis: BasisMatrix,
    /// While-loop iterations performed.
    pub updates: usize,
    /// Discriminant of the input with every row scaled to value 0.
    pub initial_disc: i64,
    /// `(before, after)` discriminants of every while-loop iteration.
    pub disc_steps: Vec<(i64, i64)>,
}

/// Local integral basis at one point, starting from `input`.
pub fn local_integral_basis<S: ValuedSpace + ?Sized>(
    space: &S,
    input: &BasisMatrix,
    point: &AlgebraicPoint,
    opts: &LocalOptions,
) -> Result<LocalRun> {
    let r = space.dimension();
    if input.dim() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: input.dim(),
        });
    }
    let label = point.to_string();
    let norm = RationalFunction::from_poly(space.uniformizer_norm(point));
    let mut rows = input.rows.clone();
    let mut log = input.log.clone();
    let mut evals: Vec<Vec<QValue>> = rows
        .iter()
        .map(|b| space.evaluate(b, point))
        .collect::<Result<_>>()?;
    let vals: Vec<i64> = evals
        .iter()
        .map(|e| min_nu(e).finite().ok_or(Error::SingularTransition))
        .collect::<Result<_>>()?;
    let initial_disc = disc_of(&evals)? - vals.iter().sum::<i64>();
    let cap = opts
        .max_iter
        .unwrap_or(initial_disc.max(0) as usize + ITERATION_MARGIN);
    let mut updates = 0;
    let mut disc_steps = Vec::new();

    for d in 0..r {
        let v = min_nu(&evals[d]).finite().ok_or(Error::SingularTransition)?;
        if v != 0 {
            let before = disc_of(&evals)?;
            rows[d] = rows[d].scale(&norm.pow(-v));
            evals[d] = space.evaluate(&rows[d], point)?;
            log.push(Update {
                point: label.clone(),
                row: d,
                kind: UpdateKind::Scale { power: -v },
                disc_before: before,
                disc_after: disc_of(&evals)?,
            });
        }
        while let Some(alphas) = solve_alpha(&evals[..d], &evals[d]) {
            if updates >= cap {
                return Err(Error::IterationCap {
                    point: label,
                    cap,
                });
            }
            let before = disc_of(&evals)?;
            rows[d] = combine(space, &rows, d, &alphas, point, &norm, opts.update);
            evals[d] = space.evaluate(&rows[d], point)?;
            let after = disc_of(&evals)?;
            log.push(Update {
                point: label.clone(),
                row: d,
                kind: UpdateKind::Combine {
                    alphas: alphas.iter().map(|a| a.to_string()).collect(),
                },
                disc_before: before,
                disc_after: after,
            });
            disc_steps.push((before, after));
            updates += 1;
        }
    }
    Ok(LocalRun {
        basis: BasisMatrix { rows, log },
        updates,
        initial_disc,
        disc_steps,
    })
}

fn combine<S: ValuedSpace + ?Sized>(
    space: &S,
    rows: &[QuotientElement],
    d: usize,
    alphas: &[NFElem],
    point: &AlgebraicPoint,
    norm: &RationalFunction,
    update: DescentUpdate,
) -> QuotientElement {
    match update {
        DescentUpdate::Interpolate => {
            let mut acc = rows[d].clone();
            for (b, a) in rows.iter().zip(alphas) {
                if a.is_zero() {
                    continue;
                }
                let poly = RationalFunction::from_poly(space.interpolate(a, point));
                acc = acc.add(&b.scale(&poly));
            }
            acc.scale(&norm.inverse().expect("norm is nonzero"))
        }
        DescentUpdate::TraceSum => {
            let mut acc = rows[d].scale(&space.galois_sum(&NFElem::one(), point));
            for (b, a) in rows.iter().zip(alphas) {
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&b.scale(&space.galois_sum(a, point)));
            }
            acc
        }
    }
}

/// `ν_q` of the evaluation determinant of `basis` at `point`.
pub fn discriminant<S: ValuedSpace + ?Sized>(
    space: &S,
    basis: &BasisMatrix,
    point: &AlgebraicPoint,
) -> Result<i64> {
    space.discriminant(basis.rows(), point)
}

/// `Q(x)[S]/⟨L⟩` with `val_z` computed from anchored solution bases.
pub struct ShiftSpace {
    modulus: OreOperator,
    order: usize,
    analyses: RefCell<BTreeMap<String, Rc<OrbitAnalysis>>>,
}

impl ShiftSpace {
    pub fn new(l: &OreOperator) -> Result<Self> {
        let modulus = l.normalize();
        let order = modulus.check_modulus()?;
        Ok(ShiftSpace {
            modulus,
            order,
            analyses: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn modulus(&self) -> &OreOperator {
        &self.modulus
    }

    /// The analysis of the orbit of `point`, built on first use.
    pub fn analysis(&self, point: &AlgebraicPoint) -> Result<Rc<OrbitAnalysis>> {
        let key = point.orbit_key();
        if let Some(a) = self.analyses.borrow().get(&key) {
            return Ok(Rc::clone(a));
        }
        let a = Rc::new(OrbitAnalysis::new(&self.modulus, point)?);
        self.analyses.borrow_mut().insert(key, Rc::clone(&a));
        Ok(a)
    }

    /// Reuse an analysis built elsewhere, e.g. by the worklist.
    pub fn insert_analysis(&self, analysis: OrbitAnalysis) {
        self.analyses
            .borrow_mut()
            .insert(analysis.orbit().orbit_key(), Rc::new(analysis));
    }
}

impl ValuedSpace for ShiftSpace {
    fn dimension(&self) -> usize {
        self.order
    }

    fn evaluate(&self, elem: &QuotientElement, point: &AlgebraicPoint) -> Result<Vec<QValue>> {
        if elem.dim() != self.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: elem.dim(),
            });
        }
        let a = self.analysis(point)?;
        Ok((0..self.order)
            .map(|j| a.basis().apply_element(elem, j, point.offset()))
            .collect())
    }
}

/// The weighted space: `val(Σ a_i e_i) = min_i (γ_i + ν_z(a_i))`.
#[derive(Clone, Debug)]
pub struct ToySpace {
    weights: Vec<i64>,
}

impl ToySpace {
    pub fn new(weights: Vec<i64>) -> Self {
        ToySpace { weights }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

impl ValuedSpace for ToySpace {
    fn dimension(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, elem: &QuotientElement, point: &AlgebraicPoint) -> Result<Vec<QValue>> {
        if elem.dim() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: elem.dim(),
            });
        }
        let k = point.number_field();
        let z = point.as_nfelem(&k);
        let q = QValue::var();
        Ok(elem
            .coords()
            .iter()
            .zip(&self.weights)
            .map(|(c, &g)| eval_shifted(c, &z).mul_ref(&q.pow(g)))
            .collect())
    }
}

/// Result of the global algorithm.
#[derive(Clone, Debug)]
pub struct GlobalRun {
    pub basis: BasisMatrix,
    /// Every processed point with its local run, in processing order.
    pub runs: Vec<(AlgebraicPoint, LocalRun)>,
}

impl GlobalRun {
    pub fn points(&self) -> Vec<AlgebraicPoint> {
        self.runs.iter().map(|(p, _)| p.clone()).collect()
    }
}

/// Global basis: run the local algorithm at every worklist point, ascending
/// within each orbit, feeding each output into the next run.
pub fn global_integral_basis(l: &OreOperator, zspec: &ZSpec, opts: &LocalOptions) -> Result<GlobalRun> {
    let space = ShiftSpace::new(l)?;
    global_in_space(&space, zspec, opts)
}

/// Same as [`global_integral_basis`], reusing the caller's space (and its
/// cached orbit analyses).
pub fn global_in_space(space: &ShiftSpace, zspec: &ZSpec, opts: &LocalOptions) -> Result<GlobalRun> {
    let work = worklist(space.modulus(), zspec)?;
    let mut basis = BasisMatrix::standard(space.dimension());
    let mut runs = Vec::new();
    for item in work {
        let orbit = item.analysis.orbit().clone();
        space.insert_analysis(item.analysis);
        for n in item.points {
            let pt = orbit.at(n);
            let run = local_integral_basis(space, &basis, &pt, opts)?;
            basis = run.basis.clone();
            runs.push((pt, run));
        }
    }
    Ok(GlobalRun { basis, runs })
}

/// `p(z + q)` as a `K(q)` value; convenience for callers that scale
/// evaluations by hand.
pub fn deform_poly(p: &Poly<Rational>, point: &AlgebraicPoint) -> QValue {
    let k = point.number_field();
    QValue::from_poly(eval_shifted_poly(p, &point.as_nfelem(&k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(p(num), p(den))
    }

    fn sample_operator() -> OreOperator {
        OreOperator::from_polys(vec![p(&[4, 4, 1]), p(&[]), p(&[0, 1]), p(&[2, 1])])
    }

    #[test]
    fn toy_space_examples() {
        let z = AlgebraicPoint::integer(0);
        let flat = ToySpace::new(vec![0, 0, 0]);
        let run = local_integral_basis(&flat, &BasisMatrix::standard(3), &z, &LocalOptions::default()).unwrap();
        assert_eq!(run.basis, BasisMatrix::standard(3));
        assert_eq!(run.updates, 0);

        let toy = ToySpace::new(vec![2, -1]);
        let run = local_integral_basis(&toy, &BasisMatrix::standard(2), &z, &LocalOptions::default()).unwrap();
        let expect = BasisMatrix::from_rows(vec![
            QuotientElement::new(vec![rf(&[1], &[0, 0, 1]), RationalFunction::zero()]),
            QuotientElement::new(vec![RationalFunction::zero(), rf(&[0, 1], &[1])]),
        ])
        .unwrap();
        assert_eq!(run.basis, expect);
        assert_eq!(run.updates, 0);
        assert_eq!(toy.find_alpha(&expect.rows()[..1], expect.row(1), &z).unwrap(), None);
    }

    #[test]
    fn toy_space_cancellation() {
        // e_1, e_1 + x e_2 with zero weights: e_1 + x e_2 - e_1 has value 1.
        let z = AlgebraicPoint::integer(0);
        let toy = ToySpace::new(vec![0, 0]);
        let b1 = QuotientElement::unit(2, 0);
        let b2 = QuotientElement::new(vec![RationalFunction::one(), rf(&[0, 1], &[1])]);
        let alpha = toy.find_alpha(&[b1.clone()], &b2, &z).unwrap().unwrap();
        assert_eq!(alpha, vec![NFElem::from_int(-1)]);
        let run = local_integral_basis(
            &toy,
            &BasisMatrix::from_rows(vec![b1.clone(), b2]).unwrap(),
            &z,
            &LocalOptions::default(),
        )
        .unwrap();
        assert_eq!(run.basis.row(1), &QuotientElement::unit(2, 1));
        assert_eq!(run.disc_steps, vec![(1, 0)]);
        assert!(toy.find_alpha(&[b1.clone()], &b1, &z).is_err());
    }

    #[test]
    fn standard_discriminant() {
        let space = ShiftSpace::new(&sample_operator()).unwrap();
        let z = AlgebraicPoint::integer(0);
        let std = BasisMatrix::standard(3);
        assert_eq!(discriminant(&space, &std, &z).unwrap(), 1);
        let scaled = std.scale_row(0, &RationalFunction::var());
        assert_eq!(discriminant(&space, &scaled, &z).unwrap(), 2);
    }

    #[test]
    fn worked_example_local_basis() {
        let space = ShiftSpace::new(&sample_operator()).unwrap();
        let z = AlgebraicPoint::integer(0);
        let run = local_integral_basis(&space, &BasisMatrix::standard(3), &z, &LocalOptions::default()).unwrap();
        for b in run.basis.rows() {
            assert_eq!(space.val(b, &z).unwrap(), Valuation::Finite(0));
        }
        let again = local_integral_basis(&space, &run.basis, &z, &LocalOptions::default()).unwrap();
        assert_eq!(again.updates, 0);
        for (before, after) in &run.disc_steps {
            assert_eq!(before - after, 1);
        }
        assert!(run.updates as i64 <= run.initial_disc);
    }

    #[test]
    fn worked_example_global_basis() {
        let run = global_integral_basis(&sample_operator(), &ZSpec::new().with_bound("Z", 0), &LocalOptions::default()).unwrap();
        let space = ShiftSpace::new(&sample_operator()).unwrap();
        for n in -2..=0 {
            let z = AlgebraicPoint::integer(n);
            for b in run.basis.rows() {
                assert!(space.val(b, &z).unwrap() >= Valuation::Finite(0));
            }
        }
        assert_eq!(run.points().len(), 3);
    }
}
