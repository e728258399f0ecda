//! Rational functions in the deformation variable `q` and the `q`-adic
//! valuation.
//!
//! Sequence values produced by the deformed recurrence are always rational in
//! `q`, so an exact `K(q)` stands in for Laurent series: an expansion is only
//! produced on request.

use crate::field::{Field, Poly, RatFunc, RationalFunction, Valuation};

/// An element of `K(q)`.
pub type QRational<F> = RatFunc<F>;

/// `ν_q`: order of vanishing at `q = 0`.
pub fn nu_q<F: Field>(f: &QRational<F>) -> Valuation {
    f.ord_at_zero()
}

/// Size measure for diagnostics: the larger of the numerator and denominator
/// degrees.
pub fn q_degree<F: Field>(f: &QRational<F>) -> usize {
    f.num().degree().unwrap_or(0).max(f.den().degree().unwrap_or(0))
}

/// Truncated Laurent expansion at `q = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion<F> {
    /// `ν_q` of the expanded element.
    pub valuation: Valuation,
    /// Coefficients of `q^valuation, q^(valuation+1), …, q^order`.
    pub coeffs: Vec<F>,
    /// Highest exponent covered.
    pub order: i64,
}

impl<F: Field> QExpansion<F> {
    /// `[q^n]`, zero outside the computed range below `order`.
    pub fn coeff(&self, n: i64) -> F {
        match self.valuation {
            Valuation::Finite(v) if n >= v => self
                .coeffs
                .get((n - v) as usize)
                .cloned()
                .unwrap_or_else(F::zero),
            _ => F::zero(),
        }
    }
}

/// Coefficients of `q^ν … q^upto` of `f`.
pub fn q_expand<F: Field>(f: &QRational<F>, upto: i64) -> QExpansion<F> {
    let v = match nu_q(f) {
        Valuation::Infinity => {
            return QExpansion {
                valuation: Valuation::Infinity,
                coeffs: Vec::new(),
                order: upto,
            }
        }
        Valuation::Finite(v) => v,
    };
    let (_, num) = f.num().split_x_power();
    let (_, den) = f.den().split_x_power();
    let terms = if upto < v { 0 } else { (upto - v + 1) as usize };
    // Power-series division num/den with den(0) != 0.
    let d0_inv = den.coeff(0).inv().expect("den(0) is nonzero after splitting");
    let mut coeffs: Vec<F> = Vec::with_capacity(terms);
    for n in 0..terms {
        let mut acc = num.coeff(n);
        for k in 1..=n.min(den.degree().unwrap_or(0)) {
            acc = acc.sub_ref(&den.coeff(k).mul_ref(&coeffs[n - k]));
        }
        coeffs.push(acc.mul_ref(&d0_inv));
    }
    QExpansion {
        valuation: Valuation::Finite(v),
        coeffs,
        order: upto,
    }
}

/// `[q^n] f`.
pub fn q_coeff<F: Field>(f: &QRational<F>, n: i64) -> F {
    q_expand(f, n).coeff(n)
}

/// `f(z + q)` for `f ∈ Q(x)` and `z ∈ K`.
pub fn eval_shifted<F: Field>(f: &RationalFunction, z: &F) -> QRational<F> {
    let num = f.num().map(F::from_rational).shift(z);
    if f.den().is_one() {
        return RatFunc::from_poly(num);
    }
    let den = f.den().map(F::from_rational).shift(z);
    // A shift preserves coprimality.
    RatFunc::from_coprime(num, den)
}

/// `p(z + q)` for a polynomial `p ∈ Q[x]`.
pub fn eval_shifted_poly<F: Field>(p: &Poly<crate::field::Rational>, z: &F) -> Poly<F> {
    p.map(F::from_rational).shift(z)
}
