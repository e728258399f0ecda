//! Number fields `Q[t]/(m(t))` and their elements.

use std::fmt;
use std::sync::Arc;

use super::{factor, Field, Poly, Rational};
use crate::error::{Error, Result};

/// `Q[t]/(m)` for a monic polynomial `m` irreducible over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    min_poly: Poly<Rational>,
}

impl NumberField {
    /// Checks that `min_poly` is monic, nonconstant and irreducible.
    pub fn new(min_poly: Poly<Rational>) -> Result<Arc<Self>> {
        if min_poly.is_constant() {
            return Err(Error::InvalidFactor(format!(
                "constant minimal polynomial {min_poly}"
            )));
        }
        if !min_poly.is_monic() {
            return Err(Error::InvalidFactor(format!("{min_poly} is not monic")));
        }
        if !factor::is_irreducible(&min_poly) {
            return Err(Error::InvalidFactor(format!(
                "{min_poly} is reducible over Q"
            )));
        }
        Ok(Arc::new(NumberField { min_poly }))
    }

    pub fn min_poly(&self) -> &Poly<Rational> {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap_or(0)
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> NFElem {
        self.element(Poly::var())
    }

    pub fn element(self: &Arc<Self>, p: Poly<Rational>) -> NFElem {
        NFElem {
            coords: p.rem(&self.min_poly),
            field: Some(Arc::clone(self)),
        }
    }

    /// Element from power-basis coordinates; the slice must have length
    /// `degree`.
    pub fn from_coords(self: &Arc<Self>, coords: &[Rational]) -> Result<NFElem> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: coords.len(),
            });
        }
        Ok(self.element(Poly::new(coords.to_vec())))
    }
}

/// Element of a number field, stored as a reduced polynomial in `t`.
///
/// Elements that are known to be rational may omit the field; this lets
/// [`Field::zero`] and [`Field::one`] exist without a context. Binary
/// operations adopt whichever field either operand carries.
#[derive(Clone, Debug)]
pub struct NFElem {
    field: Option<Arc<NumberField>>,
    coords: Poly<Rational>,
}

impl NFElem {
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Power-basis coordinates, padded to the field degree (length 1 for a
    /// field-less rational).
    pub fn coords(&self) -> Vec<Rational> {
        let n = self.field.as_ref().map_or(1, |k| k.degree());
        (0..n).map(|i| self.coords.coeff(i)).collect()
    }

    /// The representative polynomial in `t` of degree below the field degree.
    pub fn as_poly(&self) -> &Poly<Rational> {
        &self.coords
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coords.is_constant().then(|| self.coords.coeff(0))
    }

    fn join(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                debug_assert!(
                    Arc::ptr_eq(a, b) || a == b,
                    "mixing elements of different number fields"
                );
                Some(Arc::clone(a))
            }
            (Some(a), None) | (None, Some(a)) => Some(Arc::clone(a)),
            (None, None) => None,
        }
    }

    fn with(field: Option<Arc<NumberField>>, coords: Poly<Rational>) -> Self {
        NFElem { field, coords }
    }

    /// Inverse via the extended gcd with the minimal polynomial.
    pub fn invert(&self) -> Result<NFElem> {
        if self.coords.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = self.as_rational() {
            return Ok(NFElem::with(
                self.field.clone(),
                Poly::constant(c.inv().expect("nonzero")),
            ));
        }
        let k = self.field.as_ref().expect("non-rational element has a field");
        let (g, s, _) = self.coords.ext_gcd(&k.min_poly);
        debug_assert!(g.is_one(), "minimal polynomial must be irreducible");
        Ok(k.element(s))
    }

    /// Trace from `k` down to the rationals: the trace of the
    /// multiplication-by-self map on the power basis of `k`.
    pub fn trace(&self, k: &NumberField) -> Rational {
        let mut acc = <Rational as Field>::zero();
        let mut basis = Poly::<Rational>::one();
        for i in 0..k.degree() {
            let image = self.coords.mul_poly(&basis).rem(&k.min_poly);
            acc = acc.add_ref(&image.coeff(i));
            basis = basis.shift_up(1).rem(&k.min_poly);
        }
        acc
    }
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for NFElem {}

impl Field for NFElem {
    fn zero() -> Self {
        NFElem::with(None, Poly::zero())
    }
    fn one() -> Self {
        NFElem::with(None, Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        NFElem::with(self.join(other), self.coords.add_poly(&other.coords))
    }
    fn sub_ref(&self, other: &Self) -> Self {
        NFElem::with(self.join(other), self.coords.sub_poly(&other.coords))
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let field = self.join(other);
        if let Some(c) = self.as_rational() {
            return NFElem::with(field, other.coords.scale(&c));
        }
        if let Some(c) = other.as_rational() {
            return NFElem::with(field, self.coords.scale(&c));
        }
        let k = field.expect("non-rational element has a field");
        k.element(self.coords.mul_poly(&other.coords))
    }
    fn neg_ref(&self) -> Self {
        NFElem::with(self.field.clone(), self.coords.neg_poly())
    }
    fn inv(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn from_rational(r: &Rational) -> Self {
        NFElem::with(None, Poly::constant(r.clone()))
    }
    fn residue(&self, p: u64) -> Option<u64> {
        self.as_rational().and_then(|r| r.residue(p))
    }
    fn is_one(&self) -> bool {
        self.coords.is_one()
    }
    fn is_compound(&self) -> bool {
        self.coords.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }
    fn is_negative_display(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_negative_display())
    }
}

impl fmt::Display for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.coords.display_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, ratio};

    fn sqrt2_field() -> Arc<NumberField> {
        NumberField::new(Poly::from_ints(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn invert_examples() {
        let k = sqrt2_field();
        let t = k.generator();
        assert_eq!(t.invert().unwrap(), k.element(Poly::new(vec![rat(0), ratio(1, 2)])));
        assert_eq!(NFElem::one().invert().unwrap(), NFElem::one());
        let one_plus_t = k.element(Poly::from_ints(&[1, 1]));
        assert_eq!(one_plus_t.invert().unwrap(), k.element(Poly::from_ints(&[-1, 1])));
        assert_eq!(NFElem::zero().invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(NumberField::new(Poly::from_ints(&[-1, 0, 1])).is_err());
        assert!(NumberField::new(Poly::from_ints(&[-2, 0, 2])).is_err());
    }

    #[test]
    fn trace_of_power_basis() {
        let k = sqrt2_field();
        assert_eq!(NFElem::one().trace(&k), rat(2));
        assert_eq!(k.generator().trace(&k), rat(0));
        assert_eq!(k.generator().mul_ref(&k.generator()).trace(&k), rat(4));
    }

    #[test]
    fn coords_are_padded() {
        let k = sqrt2_field();
        assert_eq!(k.element(Poly::from_ints(&[3])).coords(), vec![rat(3), rat(0)]);
        assert!(k.from_coords(&[rat(1)]).is_err());
    }
}
