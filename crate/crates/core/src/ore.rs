//! The shift algebra `Q(x)[S]` with `S x = (x + 1) S`, its quotient by a
//! left ideal, and the `q`-deformed action on sequences over one orbit.

use std::cell::RefCell;
use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{AlgebraicPoint, Field, NFElem, NumberField, Poly, Rational, RationalFunction};
use crate::qvalues::{eval_shifted, eval_shifted_poly, QRational};

/// Values of sequences on an orbit.
pub type QValue = QRational<NFElem>;

/// `ℓ_0 + ℓ_1 S + … + ℓ_r S^r`, trailing zero coefficients trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OreOperator {
    coeffs: Vec<RationalFunction>,
}

impl OreOperator {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOperator { coeffs }
    }

    pub fn zero() -> Self {
        OreOperator { coeffs: Vec::new() }
    }

    pub fn from_polys(coeffs: Vec<Poly<Rational>>) -> Self {
        Self::new(coeffs.into_iter().map(RationalFunction::from_poly).collect())
    }

    /// `c S^k`.
    pub fn monomial(c: RationalFunction, k: usize) -> Self {
        let mut coeffs = vec![RationalFunction::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn shift() -> Self {
        Self::monomial(RationalFunction::one(), 1)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs.get(i).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `S`; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    /// Left multiplication by a rational function.
    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Noncommutative product: `S^i a(x) = a(x + i) S^i`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * &b.shift_int(i as i64));
            }
        }
        Self::new(out)
    }

    /// Clear denominators and remove the polynomial content, so that every
    /// coefficient lies in `Z[x]`, the coefficients have no common factor and
    /// the leading coefficient of `ℓ_r` is positive.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut den = Poly::<Rational>::one();
        for c in &self.coeffs {
            let g = den.gcd(c.den());
            den = den.mul_poly(&c.den().div_rem(&g).0);
        }
        let polys: Vec<Poly<Rational>> = self
            .coeffs
            .iter()
            .map(|c| c.num().mul_poly(&den.div_rem(c.den()).0))
            .collect();
        let content = polys
            .iter()
            .filter(|p| !p.is_zero())
            .fold(Poly::zero(), |g: Poly<Rational>, p| if g.is_zero() { p.monic() } else { g.gcd(p) });
        let polys: Vec<Poly<Rational>> = polys.iter().map(|p| p.div_rem(&content).0).collect();
        // Integer content.
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for p in &polys {
            for c in p.coeffs() {
                lcm = lcm.lcm(c.denom());
                gcd = gcd.gcd(c.numer());
            }
        }
        let mut factor = Rational::new(lcm, gcd);
        if polys.last().expect("nonzero").leading().is_negative() {
            factor = -factor;
        }
        Self::from_polys(polys.iter().map(|p| p.scale(&factor)).collect())
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// Polynomial coefficient `ℓ_i` of a normalized operator.
    pub fn poly_coeff(&self, i: usize) -> Poly<Rational> {
        let c = self.coeff(i);
        debug_assert!(c.is_polynomial(), "operator must be normalized");
        c.num().clone()
    }

    /// Check that this operator can serve as a modulus: order at least one,
    /// `ℓ_0 ≠ 0`.
    pub fn check_modulus(&self) -> Result<usize> {
        match self.order() {
            None | Some(0) => Err(Error::InvalidOperator(format!(
                "operator {self} must have order at least 1"
            ))),
            Some(r) if self.coeffs[0].is_zero() => Err(Error::InvalidOperator(format!(
                "operator of order {r} has zero constant coefficient"
            ))),
            Some(r) => Ok(r),
        }
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, coeffs: &[RationalFunction]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = !c.is_compound() && c.to_string().starts_with('-');
        let magnitude = if negative { -c } else { c.clone() };
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        let shift = match i {
            0 => String::new(),
            1 => "S".to_string(),
            _ => format!("S^{i}"),
        };
        if shift.is_empty() {
            if magnitude.is_compound() && !(i == 0 && coeffs.len() == 1) {
                write!(f, "({magnitude})")?;
            } else {
                write!(f, "{magnitude}")?;
            }
        } else if magnitude.is_one() {
            f.write_str(&shift)?;
        } else if magnitude.is_compound() {
            write!(f, "({magnitude})*{shift}")?;
        } else {
            write!(f, "{magnitude}*{shift}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs)
    }
}

/// Element of `V = Q(x)[S]/⟨L⟩` in coordinates `1, S, …, S^{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientElement {
    coords: Vec<RationalFunction>,
}

impl QuotientElement {
    pub fn new(coords: Vec<RationalFunction>) -> Self {
        QuotientElement { coords }
    }

    pub fn zero(r: usize) -> Self {
        Self::new(vec![RationalFunction::zero(); r])
    }

    /// `S^i` in a space of dimension `r`.
    pub fn unit(r: usize, i: usize) -> Self {
        let mut coords = vec![RationalFunction::zero(); r];
        coords[i] = RationalFunction::one();
        Self::new(coords)
    }

    /// Lift an operator of order below `r`.
    pub fn from_operator(a: &OreOperator, r: usize) -> Result<Self> {
        if a.coeffs().len() > r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: a.coeffs().len(),
            });
        }
        Ok(Self::new((0..r).map(|i| a.coeff(i)).collect()))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RationalFunction {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_operator(&self) -> OreOperator {
        OreOperator::new(self.coords.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        Self::new(self.coords.iter().map(|a| a * c).collect())
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coords)
    }
}

/// Residue class of `a` modulo the left ideal generated by `l`.
pub fn reduce_mod(a: &OreOperator, l: &OreOperator) -> Result<QuotientElement> {
    let r = match l.order() {
        None | Some(0) => {
            return Err(Error::InvalidOperator(
                "modulus must have order at least 1".into(),
            ))
        }
        Some(r) => r,
    };
    let lead_inv = l.coeff(r).inverse().expect("leading coefficient is nonzero");
    // S^r ≡ -Σ_{i<r} (ℓ_i/ℓ_r) S^i
    let tail: Vec<RationalFunction> = (0..r).map(|i| -&(&l.coeff(i) * &lead_inv)).collect();
    let mut work: Vec<RationalFunction> = a.coeffs().to_vec();
    for k in (r..work.len()).rev() {
        let c = std::mem::replace(&mut work[k], RationalFunction::zero());
        if c.is_zero() {
            continue;
        }
        let s = (k - r) as i64;
        for (i, t) in tail.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            let idx = k - r + i;
            work[idx] = &work[idx] + &(&c * &t.shift_int(s));
        }
    }
    work.resize(r, RationalFunction::zero());
    Ok(QuotientElement::new(work))
}

/// The anchored basis at the default anchor: the leftmost root of `ℓ_0 ℓ_r`
/// in the orbit, or offset 0 when the orbit holds none.
pub fn anchored_basis(l: &OreOperator, orbit: &AlgebraicPoint) -> Result<SolutionBasis> {
    SolutionBasis::new(l, orbit, crate::valuation::default_anchor(l, orbit))
}

struct Table {
    lo: i64,
    cols: Vec<VecDeque<QValue>>,
}

impl Table {
    fn hi(&self) -> i64 {
        self.lo + self.cols[0].len() as i64 - 1
    }
}

/// The `r` solutions `b_j` of `L` on one orbit with `b_j(anchor + i) = δ_ij`
/// for `0 ≤ i, j < r`, extended on demand in both directions.
///
/// Solution indices are 0-based. The memo table sits behind a `RefCell`, so
/// a basis belongs to one worker.
pub struct SolutionBasis {
    modulus: OreOperator,
    coeffs: Vec<Poly<Rational>>,
    orbit: AlgebraicPoint,
    field: Arc<NumberField>,
    root: NFElem,
    anchor: i64,
    table: RefCell<Table>,
}

impl fmt::Debug for SolutionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionBasis")
            .field("modulus", &self.modulus.to_string())
            .field("orbit", &self.orbit.orbit_key())
            .field("anchor", &self.anchor)
            .finish()
    }
}

impl SolutionBasis {
    /// Normalizes `l` and places the identity block at `anchor`.
    pub fn new(l: &OreOperator, orbit: &AlgebraicPoint, anchor: i64) -> Result<Self> {
        let modulus = l.normalize();
        let r = modulus.check_modulus()?;
        let coeffs: Vec<Poly<Rational>> = (0..=r).map(|i| modulus.poly_coeff(i)).collect();
        let field = orbit.number_field();
        let root = field.generator();
        let cols = (0..r)
            .map(|j| {
                (0..r)
                    .map(|i| if i == j { QValue::one() } else { QValue::zero() })
                    .collect()
            })
            .collect();
        Ok(SolutionBasis {
            modulus,
            coeffs,
            orbit: orbit.orbit(),
            field,
            root,
            anchor,
            table: RefCell::new(Table { lo: anchor, cols }),
        })
    }

    pub fn modulus(&self) -> &OreOperator {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// Orbit representative (offset 0).
    pub fn orbit(&self) -> &AlgebraicPoint {
        &self.orbit
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// The orbit point at offset `n`, as an element of the orbit's field.
    pub fn point(&self, n: i64) -> NFElem {
        self.root.add_ref(&NFElem::from_int(n))
    }

    /// Range of cached offsets.
    pub fn cached_range(&self) -> (i64, i64) {
        let t = self.table.borrow();
        (t.lo, t.hi())
    }

    fn deformed_coeffs(&self, w: i64) -> Vec<Poly<NFElem>> {
        let at = self.point(w);
        self.coeffs
            .iter()
            .map(|c| eval_shifted_poly(c, &at))
            .collect()
    }

    fn extend_to(&self, n: i64) {
        let r = self.order();
        let mut t = self.table.borrow_mut();
        while t.hi() < n {
            let h = t.hi() + 1;
            let w = h - r as i64;
            let ell = self.deformed_coeffs(w);
            let lead = QValue::from_poly(ell[r].clone())
                .inverse()
                .expect("ℓ_r(w + q) is nonzero");
            let base = (w - t.lo) as usize;
            for col in t.cols.iter_mut() {
                let mut acc = QValue::zero();
                for (i, li) in ell.iter().take(r).enumerate() {
                    if li.is_zero() || col[base + i].is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&col[base + i].mul_poly(li));
                }
                col.push_back(acc.mul_ref(&lead).neg_ref());
            }
        }
        while t.lo > n {
            let w = t.lo - 1;
            let ell = self.deformed_coeffs(w);
            let lead = QValue::from_poly(ell[0].clone())
                .inverse()
                .expect("ℓ_0(w + q) is nonzero");
            for col in t.cols.iter_mut() {
                let mut acc = QValue::zero();
                for (i, li) in ell.iter().enumerate().skip(1) {
                    if li.is_zero() || col[i - 1].is_zero() {
                        continue;
                    }
                    acc = acc.add_ref(&col[i - 1].mul_poly(li));
                }
                col.push_front(acc.mul_ref(&lead).neg_ref());
            }
            t.lo = w;
        }
    }

    /// `b_j(ρ + n)`.
    pub fn value(&self, j: usize, n: i64) -> QValue {
        self.extend_to(n);
        let t = self.table.borrow();
        t.cols[j][(n - t.lo) as usize].clone()
    }

    /// `(A·b_j)(ρ + n) = Σ_i a_i(ρ + n + q) b_j(ρ + n + i)` for any operator.
    pub fn apply_operator(&self, a: &OreOperator, j: usize, n: i64) -> QValue {
        self.apply_coeffs(a.coeffs(), j, n)
    }

    /// The same action for a reduced element.
    pub fn apply_element(&self, b: &QuotientElement, j: usize, n: i64) -> QValue {
        self.apply_coeffs(b.coords(), j, n)
    }

    fn apply_coeffs(&self, coeffs: &[RationalFunction], j: usize, n: i64) -> QValue {
        if coeffs.is_empty() {
            return QValue::zero();
        }
        let at = self.point(n);
        let mut acc = QValue::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = self.value(j, n + i as i64);
            if v.is_zero() {
                continue;
            }
            acc = acc.add_ref(&eval_shifted(c, &at).mul_ref(&v));
        }
        acc
    }

    /// Every cached window of `r + 1` consecutive values satisfies the
    /// deformed recurrence.
    pub fn check_cache(&self) -> bool {
        let r = self.order();
        let t = self.table.borrow();
        let len = t.cols[0].len();
        if len <= r {
            return true;
        }
        (0..len - r).all(|start| {
            let ell = self.deformed_coeffs(t.lo + start as i64);
            t.cols.iter().all(|col| {
                (0..=r)
                    .fold(QValue::zero(), |acc, i| {
                        acc.add_ref(&col[start + i].mul_poly(&ell[i]))
                    })
                    .is_zero()
            })
        })
    }
}
