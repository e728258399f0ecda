//! Points `ρ + n` with `ρ` algebraic over Q, grouped into orbits `ρ + Z`.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{factor, Field, NFElem, NumberField, Poly, RationalFunction, Rational};
use crate::error::{Error, Result};

/// The point `ρ + offset`, where `ρ` is a root of `min_poly`.
///
/// `min_poly` is shift-normalized: the sum of its roots lies in `[0, deg)`.
/// Every orbit `ρ + Z` therefore has exactly one representative polynomial,
/// and for a rational point that polynomial is `x - frac(c)`. The integer
/// orbit is represented by `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicPoint {
    min_poly: Poly<Rational>,
    offset: i64,
}

impl AlgebraicPoint {
    pub fn integer(n: i64) -> Self {
        AlgebraicPoint {
            min_poly: Poly::var(),
            offset: n,
        }
    }

    pub fn rational(c: &Rational) -> Self {
        let n = c.floor().to_integer();
        let frac = c - Rational::from_integer(n.clone());
        AlgebraicPoint {
            min_poly: Poly::linear(&frac),
            offset: n.to_i64().expect("point offset fits in i64"),
        }
    }

    /// The root of `p` (any irreducible polynomial) shifted by `shift`.
    ///
    /// For `deg p > 1` the choice of root is immaterial: conjugate points are
    /// handled together.
    pub fn root_of(p: &Poly<Rational>, shift: i64) -> Result<Self> {
        if p.is_constant() {
            return Err(Error::InvalidPoint(format!("constant polynomial {p}")));
        }
        if !factor::is_irreducible(p) {
            return Err(Error::InvalidPoint(format!("{p} is reducible over Q")));
        }
        let m = p.monic();
        let d = m.deg();
        let root_sum = -m.coeff(d as usize - 1);
        let n = (root_sum / Rational::from_integer(d.into())).floor().to_integer();
        let n = n
            .to_i64()
            .ok_or_else(|| Error::InvalidPoint("offset out of range".into()))?;
        Ok(AlgebraicPoint {
            min_poly: m.shift_int(n),
            offset: n + shift,
        })
    }

    /// Shift-normalized minimal polynomial of the orbit representative.
    pub fn min_poly(&self) -> &Poly<Rational> {
        &self.min_poly
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// The value of a rational point.
    pub fn value(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| -self.min_poly.coeff(0) + Rational::from_integer(self.offset.into()))
    }

    /// The point at another offset of the same orbit.
    pub fn at(&self, offset: i64) -> Self {
        AlgebraicPoint {
            min_poly: self.min_poly.clone(),
            offset,
        }
    }

    /// The orbit representative (offset 0).
    pub fn orbit(&self) -> Self {
        self.at(0)
    }

    pub fn same_orbit(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }

    /// Printable orbit name: `Z` for the integers, otherwise the normalized
    /// minimal polynomial.
    pub fn orbit_key(&self) -> String {
        if self.min_poly == Poly::var() {
            "Z".to_string()
        } else {
            self.min_poly.to_string()
        }
    }

    /// `Q[t]/(min_poly)`; `t` is the representative root.
    pub fn number_field(&self) -> Arc<NumberField> {
        NumberField::new(self.min_poly.clone()).expect("normalized min poly is irreducible")
    }

    /// The point itself as an element of its number field.
    pub fn as_nfelem(&self, k: &Arc<NumberField>) -> NFElem {
        k.generator().add_ref(&NFElem::from_int(self.offset))
    }

    /// Offset `n` such that `ρ + n` is a root of `p`, if any root of the
    /// irreducible `p` lies in this orbit.
    pub fn offset_of_root(&self, p: &Poly<Rational>) -> Option<i64> {
        integer_shift(&self.min_poly, &p.monic())
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.value() {
            return write!(f, "{c}");
        }
        write!(f, "root({})", self.min_poly)?;
        match self.offset {
            0 => Ok(()),
            n if n < 0 => write!(f, " - {}", -n),
            n => write!(f, " + {n}"),
        }
    }
}

/// The integer `n` with `s(x) = p(x - n)`, if one exists.
pub fn integer_shift(p: &Poly<Rational>, s: &Poly<Rational>) -> Option<i64> {
    let d = p.degree()?;
    if s.degree() != Some(d) || d == 0 {
        return None;
    }
    let (p, s) = (p.monic(), s.monic());
    // root sums differ by n*d
    let diff = p.coeff(d - 1) - s.coeff(d - 1);
    let n = diff / Rational::from_integer(d.into());
    if !n.is_integer() {
        return None;
    }
    let n = n.to_integer().to_i64()?;
    (p.shift_int(-n) == s).then_some(n)
}

/// `Σ_σ σ(g) / (x - σ(z))` over the embeddings of the point's number field,
/// as an element of `Q(x)`.
///
/// With `y = x - offset`, `1/(y - t) = Q(y, t)/m(y)` in `Q(y)[t]/(m)` where
/// `Q = (m(y) - m(t))/(y - t)`; the sum is the trace of `g·Q` over `m(y)`.
pub fn galois_trace_sum(g: &NFElem, point: &AlgebraicPoint) -> RationalFunction {
    let k = point.number_field();
    let m = k.min_poly();
    let d = k.degree();
    // Q(y, t) as coefficients of t^j, each a polynomial in y.
    let quotient: Vec<Poly<Rational>> = (0..d)
        .map(|j| {
            Poly::new(
                (0..d - j)
                    .map(|i| m.coeff(i + j + 1))
                    .collect(),
            )
        })
        .collect();
    // Multiply by g(t) and reduce modulo m(t); m is monic.
    let gc = g.as_poly();
    let mut prod = vec![Poly::<Rational>::zero(); 2 * d];
    for (a, ga) in gc.coeffs().iter().enumerate() {
        for (b, qb) in quotient.iter().enumerate() {
            prod[a + b] = prod[a + b].add_poly(&qb.scale(ga));
        }
    }
    for top in (d..prod.len()).rev() {
        let c = std::mem::replace(&mut prod[top], Poly::zero());
        if c.is_zero() {
            continue;
        }
        for i in 0..d {
            let mi = m.coeff(i);
            prod[top - d + i] = prod[top - d + i].sub_poly(&c.scale(&mi));
        }
    }
    let mut num = Poly::zero();
    let mut power = k.element(Poly::one());
    let t = k.generator();
    for coeff in prod.iter().take(d) {
        num = num.add_poly(&coeff.scale(&power.trace(&k)));
        power = power.mul_ref(&t);
    }
    let shift = -point.offset;
    RationalFunction::new(num.shift_int(shift), m.shift_int(shift))
}

/// `∏_σ (x - σ(z))`, the minimal polynomial over Q of the point.
pub fn galois_norm_uniformizer(point: &AlgebraicPoint) -> Poly<Rational> {
    point.min_poly.shift_int(-point.offset)
}

/// The polynomial `a(x)` of degree below `deg` with `a(σ(z)) = σ(c)` for
/// every embedding `σ`: substitute `t = x - offset` into the coordinates of
/// `c`.
pub fn interpolate(c: &NFElem, point: &AlgebraicPoint) -> Poly<Rational> {
    let k = point.number_field();
    k.element(c.as_poly().clone()).as_poly().shift_int(-point.offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::from_ints(c)
    }

    #[test]
    fn integer_shift_examples() {
        assert_eq!(integer_shift(&p(&[1, 1]), &p(&[-2, 1])), Some(3));
        assert_eq!(integer_shift(&p(&[-2, 0, 1]), &p(&[-2, 0, 1])), Some(0));
        assert_eq!(integer_shift(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])), None);
    }

    #[test]
    fn normalization_is_canonical() {
        let a = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), 0).unwrap();
        // (x-1)^2 - 2 = x^2 - 2x - 1
        let b = AlgebraicPoint::root_of(&p(&[-1, -2, 1]), 0).unwrap();
        assert!(a.same_orbit(&b));
        assert_eq!(b.offset(), 1);
        assert_eq!(a.orbit_key(), "-2 + x^2");
        let z = AlgebraicPoint::rational(&rat(-3));
        assert_eq!(z.orbit_key(), "Z");
        assert_eq!(z.offset(), -3);
        let h = AlgebraicPoint::rational(&ratio(-1, 2));
        assert_eq!(h.offset(), -1);
        assert_eq!(h.value(), Some(ratio(-1, 2)));
        assert!(AlgebraicPoint::root_of(&p(&[-1, 0, 1]), 0).is_err());
    }

    #[test]
    fn trace_sum_examples() {
        let pt = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), 0).unwrap();
        let k = pt.number_field();
        assert_eq!(
            galois_trace_sum(&NFElem::one(), &pt),
            RationalFunction::new(p(&[0, 2]), p(&[-2, 0, 1]))
        );
        assert_eq!(
            galois_trace_sum(&k.generator(), &pt),
            RationalFunction::new(p(&[4]), p(&[-2, 0, 1]))
        );
        let q = AlgebraicPoint::rational(&ratio(7, 2));
        assert_eq!(
            galois_trace_sum(&NFElem::from_int(5), &q),
            RationalFunction::new(p(&[5]), Poly::linear(&ratio(7, 2)))
        );
    }

    #[test]
    fn norm_examples() {
        let pt = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), 0).unwrap();
        assert_eq!(galois_norm_uniformizer(&pt), p(&[-2, 0, 1]));
        assert_eq!(galois_norm_uniformizer(&AlgebraicPoint::integer(-1)), p(&[1, 1]));
        assert_eq!(galois_norm_uniformizer(&pt.at(1)), p(&[-1, -2, 1]));
    }

    #[test]
    fn interpolation_hits_conjugates() {
        let pt = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), 1).unwrap();
        let k = pt.number_field();
        let c = k.element(p(&[3, 5]));
        let a = interpolate(&c, &pt);
        // a(z) = c where z = t + 1
        let z = pt.as_nfelem(&k);
        assert_eq!(a.map(|r| NFElem::from_rational(r)).eval(&z), c);
    }

    #[test]
    fn display_points() {
        let pt = AlgebraicPoint::root_of(&p(&[-2, 0, 1]), -1).unwrap();
        assert_eq!(pt.to_string(), "root(-2 + x^2) - 1");
        assert_eq!(AlgebraicPoint::rational(&ratio(5, 3)).to_string(), "5/3");
    }
}
