//! The subcommands. Each returns an [`Output`] holding both renderings.

use serde::Serialize;
use serde_json::{json, Value};

use precint::field::point::galois_norm_uniformizer;
use precint::field::{AlgebraicPoint, RationalFunction, Valuation};
use precint::integral::{
    discriminant, global_in_space, local_integral_basis, BasisMatrix, DescentUpdate, GlobalRun,
    LocalOptions, ShiftSpace, ValuedSpace,
};
use precint::ore::{reduce_mod, OreOperator, QValue, QuotientElement, SolutionBasis};
use precint::valuation::{default_anchor, val_at, OrbitAnalysis, ZDomain, ZSpec};
use precint::verify::{certificate, module_equal_at, CertificateReport};
use precint::Error;

use crate::parse::ParseError;

/// What a command prints, and whether it succeeded.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub clean: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            clean: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Core(Error::MissingRightBound { .. }) => 3,
            CliError::Core(
                Error::InvalidFactor(_)
                | Error::InvalidOperator(_)
                | Error::InvalidPoint(_)
                | Error::DimensionMismatch { .. }
                | Error::Precondition(_)
                | Error::DivisionByZero,
            ) => 2,
            CliError::Core(_) => 1,
        }
    }

    /// Message with a hint where one helps.
    pub fn message(&self) -> String {
        match self {
            CliError::Core(Error::MissingRightBound { orbit, growths }) => format!(
                "orbit {orbit} needs a right bound: its anchored solutions have valuation \
                 growths {growths:?}, so integrality cannot hold on the whole orbit; \
                 pass --right-bound '{orbit}=R' to keep only offsets up to R \
                 (for Z, R = 0 excludes 1, 2, ...)"
            ),
            other => other.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn rf_json(f: &RationalFunction) -> Value {
    json!({ "num": f.num().to_string(), "den": f.den().to_string() })
}

fn q_json(f: &QValue) -> Value {
    json!({ "num": f.num().display_var("q"), "den": f.den().display_var("q") })
}

fn basis_json(b: &BasisMatrix) -> Value {
    Value::Array(
        b.rows()
            .iter()
            .map(|row| Value::Array(row.coords().iter().map(rf_json).collect()))
            .collect(),
    )
}

fn val_string(v: Valuation) -> String {
    v.to_string()
}

/// Options shared by the basis commands.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub update: DescentUpdate,
    pub max_iter: Option<usize>,
}

impl RunOptions {
    fn local(&self) -> LocalOptions {
        LocalOptions {
            update: self.update,
            max_iter: self.max_iter,
        }
    }
}

pub fn solutions(
    l: &OreOperator,
    orbit: &AlgebraicPoint,
    from: i64,
    to: i64,
    anchor: Option<i64>,
) -> CliResult<Output> {
    if from > to {
        return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let base = orbit.offset();
    let rep = orbit.orbit();
    let anchor_abs = anchor.map_or_else(|| default_anchor(l, &rep), |a| a + base);
    let basis = SolutionBasis::new(l, &rep, anchor_abs)?;
    let r = basis.order();
    let mut text = format!(
        "orbit {}, anchor {}\nn: {}\n",
        rep.orbit_key(),
        anchor_abs - base,
        (from..=to).map(|n| n.to_string()).collect::<Vec<_>>().join("; ")
    );
    let mut rows = Vec::with_capacity(r);
    for j in 0..r {
        let values: Vec<QValue> = (from..=to).map(|n| basis.value(j, base + n)).collect();
        let shown: Vec<String> = values.iter().map(|v| v.display_var("q")).collect();
        text.push_str(&format!("b{}: {}\n", j + 1, shown.join("; ")));
        rows.push(Value::Array(values.iter().map(q_json).collect()));
    }
    if !rep.is_rational() {
        text.push_str(&format!("t denotes a root of {}\n", rep.min_poly()));
    }
    let json = json!({
        "orbit": rep.orbit_key(),
        "anchor": anchor_abs - base,
        "from": from,
        "to": to,
        "rows": rows,
    });
    Ok(Output::ok(text, json))
}

fn element_of(l: &OreOperator, b: &OreOperator, reduce: bool) -> CliResult<QuotientElement> {
    let r = l.order().unwrap_or(0);
    let order = b.order().unwrap_or(0);
    if order >= r && !b.is_zero() {
        if !reduce {
            return Err(CliError::Usage(format!(
                "element has order {order}, which is not below the operator order {r}; \
                 reduce it modulo the operator first (pass --reduce to do this automatically)"
            )));
        }
        return Ok(reduce_mod(b, l)?);
    }
    Ok(QuotientElement::from_operator(b, r)?)
}

pub fn val(l: &OreOperator, b: &OreOperator, at: &AlgebraicPoint, reduce: bool) -> CliResult<Output> {
    let l = l.normalize();
    let elem = element_of(&l, b, reduce)?;
    let analysis = OrbitAnalysis::new(&l, &at.orbit())?;
    let v = val_at(&elem, at, &analysis)?;
    let json = json!({ "point": at.to_string(), "element": elem.to_string(), "val": v });
    Ok(Output::ok(format!("{}\n", val_string(v)), json))
}

pub fn growth(l: &OreOperator, orbit: &AlgebraicPoint) -> CliResult<Output> {
    let analysis = OrbitAnalysis::new(l, &orbit.orbit())?;
    let key = analysis.orbit().orbit_key();
    let text = format!(
        "orbit {key}\nanchor {}\nleftward singular offsets {:?}\nrightward singular offsets {:?}\n\
         growths {:?}\nright bound required: {}\n",
        analysis.anchor(),
        analysis.leftward(),
        analysis.rightward(),
        analysis.growths(),
        if analysis.has_nonzero_growth() { "yes" } else { "no" }
    );
    let json = json!({
        "orbit": key,
        "anchor": analysis.anchor(),
        "leftward": analysis.leftward(),
        "rightward": analysis.rightward(),
        "growths": analysis.growths(),
        "needs_right_bound": analysis.has_nonzero_growth(),
    });
    Ok(Output::ok(text, json))
}

pub fn local_basis(l: &OreOperator, at: &AlgebraicPoint, opts: &RunOptions) -> CliResult<Output> {
    let space = ShiftSpace::new(l)?;
    let r = space.dimension();
    let run = local_integral_basis(&space, &BasisMatrix::standard(r), at, &opts.local())?;
    let disc = discriminant(&space, &run.basis, at)?;
    let text = format!(
        "local integral basis at {at} ({} updates, normalized discriminant {} -> {disc})\n{}",
        run.updates, run.initial_disc, run.basis
    );
    let json = json!({
        "order": r,
        "point": at.to_string(),
        "basis": basis_json(&run.basis),
        "updates": run.updates,
        "initial_disc": run.initial_disc,
        "disc": disc,
    });
    Ok(Output::ok(text, json))
}

pub fn zspec(bounds: &[(String, i64)], rational_only: bool) -> ZSpec {
    let mut z = ZSpec::new();
    for (k, r) in bounds {
        z = z.with_bound(k.clone(), *r);
    }
    if rational_only {
        z = z.with_domain(ZDomain::Rational);
    }
    z
}

fn check_rows(space: &ShiftSpace, basis: &BasisMatrix, points: &[AlgebraicPoint]) -> CliResult<Vec<String>> {
    let mut ok = Vec::new();
    for pt in points {
        let mut integral = true;
        for b in basis.rows() {
            integral &= space.val(b, pt)? >= Valuation::Finite(0);
        }
        if integral {
            ok.push(pt.to_string());
        }
    }
    Ok(ok)
}

fn global(l: &OreOperator, z: &ZSpec, opts: &RunOptions) -> CliResult<(ShiftSpace, GlobalRun)> {
    let space = ShiftSpace::new(l)?;
    let run = global_in_space(&space, z, &opts.local())?;
    Ok((space, run))
}

pub fn global_basis(l: &OreOperator, z: &ZSpec, opts: &RunOptions) -> CliResult<Output> {
    let (space, run) = global(l, z, opts)?;
    let points = run.points();
    let verified = check_rows(&space, &run.basis, &points)?;
    let clean = verified.len() == points.len();
    let mut text = format!("global integral basis ({} points processed)\n{}", points.len(), run.basis);
    text.push_str(&format!("verified at: {}\n", verified.join(", ")));
    let json = json!({
        "order": run.basis.dim(),
        "basis": basis_json(&run.basis),
        "verified_points": verified,
    });
    Ok(Output { text, json, clean })
}

pub fn disc(l: &OreOperator, at: &AlgebraicPoint, rows: &[OreOperator]) -> CliResult<Output> {
    let space = ShiftSpace::new(l)?;
    let r = space.dimension();
    let basis = if rows.is_empty() {
        BasisMatrix::standard(r)
    } else {
        if rows.len() != r {
            return Err(CliError::Usage(format!("expected {r} rows, got {}", rows.len())));
        }
        let elems = rows
            .iter()
            .map(|b| element_of(&space.modulus().clone(), b, false))
            .collect::<CliResult<Vec<_>>>()?;
        BasisMatrix::from_rows(elems)?
    };
    let d = discriminant(&space, &basis, at)?;
    Ok(Output::ok(format!("{d}\n"), json!({ "point": at.to_string(), "disc": d })))
}

#[derive(Serialize)]
struct PointCheck {
    point: String,
    module_equal: bool,
    certificate: CertificateReport,
}

pub fn verify(
    l: &OreOperator,
    z: &ZSpec,
    opts: &RunOptions,
    samples: usize,
    seed: u64,
    perturb_row: Option<usize>,
) -> CliResult<Output> {
    let (space, run) = global(l, z, opts)?;
    let points = run.points();
    let mut basis = run.basis.clone();
    if let (Some(i), Some(first)) = (perturb_row, points.first()) {
        if i == 0 || i > basis.dim() {
            return Err(CliError::Usage(format!("--perturb-row must be in 1..={}", basis.dim())));
        }
        let norm = RationalFunction::from_poly(galois_norm_uniformizer(first));
        basis = basis.scale_row(i - 1, &norm);
    }
    let r = space.dimension();
    let mut checks = Vec::new();
    for (k, pt) in points.iter().enumerate() {
        let local = local_integral_basis(&space, &BasisMatrix::standard(r), pt, &opts.local())?;
        let module_equal = module_equal_at(&basis, &local.basis, pt)?;
        let report = certificate(space.modulus(), &basis, pt, samples, seed.wrapping_add(k as u64))?;
        checks.push(PointCheck {
            point: pt.to_string(),
            module_equal,
            certificate: report,
        });
    }
    let clean = checks.iter().all(|c| c.module_equal && c.certificate.is_clean());
    let mut text = format!("{}\n", basis.to_string().trim_end());
    if checks.is_empty() {
        text.push_str("no points to check: the standard basis is integral everywhere in Z\n");
    }
    for c in &checks {
        text.push_str(&format!(
            "{}: module-equal to local basis: {}; {}",
            c.point,
            if c.module_equal { "yes" } else { "no" },
            c.certificate
        ));
    }
    text.push_str(if clean { "clean\n" } else { "VIOLATIONS FOUND\n" });
    let json = json!({
        "order": r,
        "seed": seed,
        "basis": basis_json(&basis),
        "points": checks,
        "clean": clean,
    });
    Ok(Output { text, json, clean })
}

/// `PRECINT_MAX_ITER`, if set to a number.
pub fn max_iter_from_env() -> CliResult<Option<usize>> {
    match std::env::var("PRECINT_MAX_ITER") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("PRECINT_MAX_ITER={v} is not a number"))),
        Err(_) => Ok(None),
    }
}
