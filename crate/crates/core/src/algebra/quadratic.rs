//! Quadratic extensions `F[y] / (y^2 + p*y + q)` of an exact field.
//!
//! Elements are stored as `a + b*y`. The same code serves the function field
//! of a kernel curve (`F = Q(t)(x)`) and numeric points with coordinates in
//! `Q(sqrt(d))` (`F = Q`).

use super::poly::UniPoly;
use super::ring::{Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem<F> {
    pub a: F,
    pub b: F,
}

impl<F: Ring> QuadElem<F> {
    pub fn new(a: F, b: F) -> Self {
        QuadElem { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElem::new(self.a.add(&o.a), self.b.add(&o.b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadElem::new(self.a.sub(&o.a), self.b.sub(&o.b))
    }

    pub fn neg(&self) -> Self {
        QuadElem::new(self.a.neg(), self.b.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        QuadElem::new(self.a.mul(c), self.b.mul(c))
    }

    /// `Some(a)` when the element lies in the base field.
    pub fn as_base(&self) -> Option<&F> {
        self.b.is_zero().then_some(&self.a)
    }
}

/// The defining relation `y^2 + p*y + q = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadModulus<F> {
    pub p: F,
    pub q: F,
}

impl<F: Field> QuadModulus<F> {
    pub fn new(p: F, q: F) -> Self {
        QuadModulus { p, q }
    }

    /// The class of `y`.
    pub fn generator(&self) -> QuadElem<F> {
        QuadElem::new(F::zero(), F::one())
    }

    pub fn embed(&self, a: F) -> QuadElem<F> {
        QuadElem::new(a, F::zero())
    }

    pub fn one(&self) -> QuadElem<F> {
        self.embed(F::one())
    }

    pub fn zero(&self) -> QuadElem<F> {
        self.embed(F::zero())
    }

    pub fn mul(&self, u: &QuadElem<F>, v: &QuadElem<F>) -> QuadElem<F> {
        if u.b.is_zero() {
            return v.scale(&u.a);
        }
        if v.b.is_zero() {
            return u.scale(&v.a);
        }
        let bb = u.b.mul(&v.b);
        QuadElem::new(
            u.a.mul(&v.a).sub(&self.q.mul(&bb)),
            u.a.mul(&v.b).add(&v.a.mul(&u.b)).sub(&self.p.mul(&bb)),
        )
    }

    /// The other root substituted for `y`: `y -> -p - y`.
    pub fn conj(&self, u: &QuadElem<F>) -> QuadElem<F> {
        QuadElem::new(u.a.sub(&u.b.mul(&self.p)), u.b.neg())
    }

    pub fn norm(&self, u: &QuadElem<F>) -> F {
        let QuadElem { a, b } = u;
        a.mul(a).sub(&a.mul(b).mul(&self.p)).add(&b.mul(b).mul(&self.q))
    }

    pub fn trace(&self, u: &QuadElem<F>) -> F {
        u.a.add(&u.a).sub(&u.b.mul(&self.p))
    }

    /// `None` when the norm vanishes (zero, or a zero divisor if the
    /// modulus is reducible).
    pub fn inv(&self, u: &QuadElem<F>) -> Option<QuadElem<F>> {
        if u.b.is_zero() {
            return (!u.a.is_zero()).then(|| self.embed(u.a.inv()));
        }
        let n = self.norm(u);
        if n.is_zero() {
            return None;
        }
        Some(self.conj(u).scale(&n.inv()))
    }

    pub fn div(&self, u: &QuadElem<F>, v: &QuadElem<F>) -> Option<QuadElem<F>> {
        Some(self.mul(u, &self.inv(v)?))
    }

    pub fn pow(&self, u: &QuadElem<F>, e: i64) -> Option<QuadElem<F>> {
        let base = if e < 0 { self.inv(u)? } else { u.clone() };
        let mut e = e.unsigned_abs();
        let mut base = base;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        Some(acc)
    }

    /// Horner evaluation of a polynomial with base-field coefficients.
    pub fn eval_poly(&self, poly: &UniPoly<F>, u: &QuadElem<F>) -> QuadElem<F> {
        let mut acc = self.zero();
        for c in poly.coeffs().iter().rev() {
            acc = self.mul(&acc, u);
            acc.a = acc.a.add(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, Rational};

    #[test]
    fn gaussian_rationals() {
        // y^2 + 1 = 0
        let m = QuadModulus::new(int(0), int(1));
        let i = m.generator();
        assert_eq!(m.mul(&i, &i), m.embed(int(-1)));
        let u = QuadElem::new(int(3), int(4));
        assert_eq!(m.norm(&u), int(25));
        let inv = m.inv(&u).unwrap();
        assert_eq!(m.mul(&u, &inv), m.one());
        assert_eq!(m.pow(&i, -3).unwrap(), i);
        // y^2 + 1 evaluated at the generator
        let p = UniPoly::<Rational>::from_i64s(&[1, 0, 1]);
        assert!(m.eval_poly(&p, &i).is_zero());
    }

    #[test]
    fn conjugate_is_other_root() {
        // y^2 - 3y + 2 = (y - 1)(y - 2); reducible, 1 - y is a zero divisor
        let m = QuadModulus::new(int(-3), int(2));
        let y = m.generator();
        assert_eq!(m.trace(&y), int(3));
        assert_eq!(m.norm(&y), int(2));
        assert!(m.inv(&y.sub(&m.one())).is_none());
    }
}
