//! Arbitrary-precision rationals and integers as ring elements.

use num_bigint::BigInt;
use super::poly::UniPoly;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{Field, GcdDomain, Ring};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Decimal points and exponents are rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let ok = |part: &str| {
        let body = part.strip_prefix('-').or_else(|| part.strip_prefix('+')).unwrap_or(part);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            if !ok(n) || !ok(d) {
                return None;
            }
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if Zero::is_zero(&d) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            if !ok(s) {
                return None;
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if One::is_one(r.denom()) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        int(n)
    }

    fn poly_mul(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        (a.len() * b.len() >= 9).then(|| super::kronecker::mul_q(a, b))
    }

    fn poly_poly_mul(a: &[UniPoly<Self>], b: &[UniPoly<Self>]) -> Option<Vec<UniPoly<Self>>> {
        let size = |v: &[UniPoly<Self>]| v.iter().map(|p| p.coeffs().len()).sum::<usize>();
        (size(a) * size(b) >= 16).then(|| super::kronecker::mul_qbiv(a, b))
    }
}

impl GcdDomain for BigRational {
    const IS_FIELD: bool = true;

    fn poly_gcd(a: &UniPoly<Self>, b: &UniPoly<Self>) -> Option<UniPoly<Self>> {
        Some(super::modgcd::gcd_qpoly(a, b))
    }

    fn bivariate_gcd(
        a: &UniPoly<UniPoly<Self>>,
        b: &UniPoly<UniPoly<Self>>,
    ) -> Option<UniPoly<UniPoly<Self>>> {
        Some(super::modgcd::gcd_qbiv(a, b))
    }

    fn gcd(&self, other: &Self) -> Self {
        if Ring::is_zero(self) && Ring::is_zero(other) {
            <Self as Ring>::zero()
        } else {
            <Self as Ring>::one()
        }
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Ring::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn unit_part(&self) -> Self {
        if Ring::is_zero(self) {
            <Self as Ring>::one()
        } else {
            self.clone()
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        assert!(!Ring::is_zero(self), "inverse of zero rational");
        self.recip()
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl GcdDomain for BigInt {
    const IS_FIELD: bool = false;

    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }
    fn unit_part(&self) -> Self {
        if self.is_negative() {
            -<BigInt as One>::one()
        } else {
            <BigInt as One>::one()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational(" 4/-8 "), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1.5"), None);
        assert_eq!(parse_rational("1e3"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational(""), None);
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn bigint_exact_division() {
        let a = BigInt::from(12);
        assert_eq!(a.exact_div(&BigInt::from(-4)), Some(BigInt::from(-3)));
        assert_eq!(a.exact_div(&BigInt::from(5)), None);
        assert_eq!(BigInt::from(-6).normalize(), BigInt::from(6));
    }
}
