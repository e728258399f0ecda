use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

/// An element of `Z ∪ {∞}`.
///
/// The derived ordering places every finite value below `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinity
    }

    /// Finite value, panicking on `∞`. Only for call sites where zero inputs
    /// were ruled out beforehand.
    pub fn unwrap(self) -> i64 {
        self.finite().expect("valuation of zero is infinite")
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl Add<i64> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

/// `∞ - x = ∞` for any `x`, which covers the `∞ - ∞ = ∞` convention.
impl Sub<i64> for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: i64) -> Valuation {
        self + Valuation::Finite(-rhs)
    }
}

impl Neg for Valuation {
    type Output = Valuation;
    fn neg(self) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(-a),
            Valuation::Infinity => panic!("cannot negate an infinite valuation"),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_i64(*v),
            Valuation::Infinity => serializer.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_and_orders_last() {
        assert_eq!(Valuation::Finite(3) + Valuation::Infinity, Valuation::Infinity);
        assert_eq!(Valuation::Infinity - 5, Valuation::Infinity);
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinity);
        assert_eq!(
            [Valuation::Infinity, Valuation::Finite(-1), Valuation::Finite(2)]
                .into_iter()
                .min(),
            Some(Valuation::Finite(-1))
        );
    }
}
