//! The prime field of order `2^61 - 1`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::rational::Rational;
use super::ring::{Field, GcdDomain, Ring};

pub const P: u64 = (1 << 61) - 1;

/// A residue modulo [`P`], kept in `0..P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// `None` when the denominator vanishes modulo the prime.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let d = Self::from_bigint(r.denom());
        if d.0 == 0 {
            return None;
        }
        Some(Self::from_bigint(r.numer()).mul(&d.inv()))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let p = BigInt::from(P);
        let m = n % &p;
        let m = if m.is_negative() { m + &p } else { m };
        Fp(m.to_u64().expect("residue fits in u64"))
    }

    pub fn pow_u64(self, mut e: u64) -> Self {
        let (mut base, mut acc) = (self, Fp(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(P as i64);
        Fp(r as u64)
    }
}

impl GcdDomain for Fp {
    const IS_FIELD: bool = true;

    fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() && o.is_zero() {
            Fp(0)
        } else {
            Fp(1)
        }
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        (!o.is_zero()).then(|| self.mul(&o.inv()))
    }
    fn unit_part(&self) -> Self {
        if self.is_zero() {
            Fp(1)
        } else {
            *self
        }
    }
}

impl Field for Fp {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero residue");
        self.pow_u64(P - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn field_operations() {
        let a = Fp::from_i64(-3);
        assert_eq!(a.add(&Fp::from_i64(3)), Fp::zero());
        assert_eq!(a.mul(&a.inv()), Fp::one());
        let h = Fp::from_rational(&rat(1, 2)).unwrap();
        assert_eq!(h.add(&h), Fp::one());
        assert_eq!(Fp::from_rational(&rat(-5, 7)).unwrap().mul(&Fp::from_i64(7)), Fp::from_i64(-5));
    }
}
