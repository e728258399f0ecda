//! Exact arithmetic for the constant-field tower.
//!
//! The tower is small: the rationals, number fields `Q[t]/(m)` built on top of
//! them, univariate polynomials and rational functions over either. Every
//! type here is immutable after construction and safe to share across
//! threads.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub mod factor;
pub mod numberfield;
pub mod point;
pub mod poly;
pub mod ratfunc;
mod valuation;

pub use numberfield::{NFElem, NumberField};
pub use point::AlgebraicPoint;
pub use poly::Poly;
pub use ratfunc::{RatFunc, RationalFunction};
pub use valuation::Valuation;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// A commutative field of characteristic zero with exact arithmetic.
///
/// Methods take references so that big-number coefficients are not cloned on
/// every operation. The names carry a `_ref` suffix to stay clear of the
/// `std::ops` methods that concrete types may also implement.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_rational(r: &Rational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Image in `Z/p` for a prime `p`, when the element is rational with a
    /// denominator prime to `p`.
    fn residue(&self, _p: u64) -> Option<u64> {
        None
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.mul_ref(&inv))
    }

    /// Whether the printed form needs parentheses when used as a factor.
    fn is_compound(&self) -> bool {
        false
    }

    /// Whether the printed form starts with a minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn residue(&self, p: u64) -> Option<u64> {
        factor::rational_residue(self, p)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn is_negative_display(&self) -> bool {
        self.is_negative()
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
