use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Field, Poly, Rational, Valuation};
use crate::error::{Error, Result};

/// A rational function `num / den` in canonical form: coprime, monic
/// denominator, zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

/// Rational functions in `x` over the rationals.
pub type RationalFunction = RatFunc<Rational>;

impl<F: Field> RatFunc<F> {
    /// Canonicalizing constructor. Panics if `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        Self::normalize_lc(num, den)
    }

    /// Constructor for inputs already known to be coprime.
    pub fn from_coprime(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: Poly<F>, den: Poly<F>) -> Self {
        let lc = den.leading();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let c = if negate {
            other.num.neg_poly()
        } else {
            other.num.clone()
        };
        if self.num.is_zero() {
            return RatFunc {
                num: c,
                den: other.den.clone(),
            };
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add_poly(&c), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let b1 = self.den.div_rem(&g).0;
        let d1 = other.den.div_rem(&g).0;
        let num = self.num.mul_poly(&d1).add_poly(&c.mul_poly(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        // Only common factors with g can survive.
        let h = num.gcd(&g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_rem(&h).0, g.div_rem(&h).0)
        };
        Self::normalize_lc(num, b1.mul_poly(&d1).mul_poly(&g))
    }

    pub fn mul_impl(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_rem(&g1).0;
        let d = other.den.div_rem(&g1).0;
        let c = other.num.div_rem(&g2).0;
        let b = self.den.div_rem(&g2).0;
        Self::normalize_lc(a.mul_poly(&c), b.mul_poly(&d))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::normalize_lc(self.den.clone(), self.num.clone()))
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let e = e.unsigned_abs() as u32;
        RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        RatFunc::from_coprime(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &Poly<F>) -> Self {
        self.mul_impl(&Self::from_poly(p.clone()))
    }

    /// Substitute `x ↦ x + c`.
    pub fn shift(&self, c: &F) -> Self {
        if self.is_constant() {
            return self.clone();
        }
        RatFunc::from_coprime(self.num.shift(c), self.den.shift(c))
    }

    pub fn shift_int(&self, n: i64) -> Self {
        self.shift(&F::from_int(n))
    }

    /// Value at a point; `None` at a pole.
    pub fn eval(&self, at: &F) -> Option<F> {
        self.num.eval(at).div_ref(&self.den.eval(at))
    }

    /// Multiplicity of the irreducible `p` in this function (negative for
    /// poles). No irreducibility check is made here; see
    /// [`nu_at_factor`](RatFunc::nu_at_factor) for the checked variant over
    /// the rationals.
    pub fn nu_at_poly(&self, p: &Poly<F>) -> Valuation {
        if self.num.is_zero() {
            return Valuation::Infinity;
        }
        let count = |mut a: Poly<F>| {
            let mut m = 0i64;
            while let Some(q) = a.exact_div(p) {
                a = q;
                m += 1;
            }
            m
        };
        let up = count(self.num.clone());
        if up > 0 {
            Valuation::Finite(up)
        } else {
            Valuation::Finite(-count(self.den.clone()))
        }
    }

    /// Order of vanishing at `x = 0`, i.e. the valuation at the factor `x`.
    pub fn ord_at_zero(&self) -> Valuation {
        match self.num.low_order() {
            None => Valuation::Infinity,
            Some(k) => Valuation::Finite(k as i64 - self.den.low_order().unwrap_or(0) as i64),
        }
    }

    /// Valuation at infinity: `deg den - deg num`.
    pub fn nu_infinity(&self) -> Valuation {
        if self.num.is_zero() {
            Valuation::Infinity
        } else {
            Valuation::Finite(self.den.deg() - self.num.deg())
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn display_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display_var(var);
        }
        let wrap = |p: &Poly<F>, allow_minus: bool| {
            let s = p.display_var(var);
            let single_term = p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
                && !p.leading().is_compound();
            if single_term && (allow_minus || !s.starts_with('-')) && !s.contains('/') {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(&self.num, true), wrap(&self.den, false))
    }
}

impl RationalFunction {
    /// Valuation at an irreducible polynomial over the rationals.
    ///
    /// Rejects constant and reducible `p`.
    pub fn nu_at_factor(&self, p: &Poly<Rational>) -> Result<Valuation> {
        if p.is_constant() {
            return Err(Error::InvalidFactor(format!("constant polynomial {p}")));
        }
        if !super::factor::is_irreducible(p) {
            return Err(Error::InvalidFactor(format!("{p} is reducible over Q")));
        }
        Ok(self.nu_at_poly(p))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add_impl(other, false)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }
    fn neg_ref(&self) -> Self {
        RatFunc {
            num: self.num.neg_poly(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(F::from_rational(r))
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn is_compound(&self) -> bool {
        !self.den.is_one()
            || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
            || self.num.leading().is_compound()
    }
    fn is_negative_display(&self) -> bool {
        self.den.is_one() && self.num.is_constant() && self.num.leading().is_negative_display()
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("x"))
    }
}

macro_rules! ratfunc_op {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<F: Field> $tr for &RatFunc<F> {
            type Output = RatFunc<F>;
            fn $method(self, rhs: &RatFunc<F>) -> RatFunc<F> {
                $body(self, rhs)
            }
        }
        impl<F: Field> $tr for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $method(self, rhs: RatFunc<F>) -> RatFunc<F> {
                $body(&self, &rhs)
            }
        }
    };
}

ratfunc_op!(Add, add, |a: &RatFunc<F>, b: &RatFunc<F>| a.add_impl(b, false));
ratfunc_op!(Sub, sub, |a: &RatFunc<F>, b: &RatFunc<F>| a.add_impl(b, true));
ratfunc_op!(Mul, mul, |a: &RatFunc<F>, b: &RatFunc<F>| a.mul_impl(b));
ratfunc_op!(Div, div, |a: &RatFunc<F>, b: &RatFunc<F>| a
    .mul_impl(&b.inverse().expect("division by zero rational function")));

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        self.neg_ref()
    }
}
