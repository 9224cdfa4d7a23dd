//! Minimal algebraic traits shared by every exact type in the crate.
//!
//! The tower used throughout is
//!
//! ```text
//! Rational -> QPoly = Q[t] -> RatFuncT = Q(t) -> UPoly = Q(t)[x] -> URatFunc = Q(t)(x)
//!                                             -> BPoly = Q(t)[x][y] -> BRatFunc = Q(t)(x, y)
//! ```
//!
//! Methods take `&self` so generic code never has to spell out
//! higher-ranked operator bounds.

use std::fmt::Debug;
use super::frac::Frac;
use super::poly::UniPoly;

pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    /// Coefficients of a polynomial product, when `Self` has a faster
    /// route than the schoolbook loop. Both inputs are nonempty.
    fn poly_mul(_a: &[Self], _b: &[Self]) -> Option<Vec<Self>> {
        None
    }

    /// Same for polynomials over polynomials over `Self`.
    fn poly_poly_mul(_a: &[UniPoly<Self>], _b: &[UniPoly<Self>]) -> Option<Vec<UniPoly<Self>>> {
        None
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// An integral domain with a normalized gcd and exact division.
pub trait GcdDomain: Ring {
    /// True when every nonzero element is a unit.
    const IS_FIELD: bool;

    /// Normalized greatest common divisor; `gcd(0, 0) = 0`.
    fn gcd(&self, other: &Self) -> Self;

    /// `Some(q)` with `self = q * other` when the division is exact.
    fn exact_div(&self, other: &Self) -> Option<Self>;

    /// A unit `u` such that `self / u` is the canonical associate.
    /// Returns one for zero.
    fn unit_part(&self) -> Self;

    fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.exact_div(&self.unit_part())
            .expect("division by a unit is exact")
    }

    /// A faster gcd for polynomials over `Self`, when one is available.
    /// Nonzero arguments only; must return the normalized gcd.
    fn poly_gcd(_a: &UniPoly<Self>, _b: &UniPoly<Self>) -> Option<UniPoly<Self>> {
        None
    }

    /// Same for polynomials over polynomials over `Self`.
    fn bivariate_gcd(
        _a: &UniPoly<UniPoly<Self>>,
        _b: &UniPoly<UniPoly<Self>>,
    ) -> Option<UniPoly<UniPoly<Self>>> {
        None
    }

    /// Same for polynomials over the fraction field of `Self`.
    fn fraction_poly_gcd(
        _a: &UniPoly<Frac<Self>>,
        _b: &UniPoly<Frac<Self>>,
    ) -> Option<UniPoly<Frac<Self>>> {
        None
    }
}

pub trait Field: GcdDomain {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

/// t-adic valuation (order of vanishing at t = 0).
pub trait TValuation {
    /// `None` for zero.
    fn t_valuation(&self) -> Option<i64>;
}
