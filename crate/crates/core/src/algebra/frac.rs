//! Fraction fields of gcd domains, kept in lowest terms.

use std::fmt;

use super::poly::{Pretty, UniPoly};
use super::rational::Rational;
use super::ring::{Field, GcdDomain, Ring, TValuation};

/// `num / den` with `gcd(num, den) = 1` and `den` normalized
/// (monic for polynomials over a field).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac<D> {
    num: D,
    den: D,
}

impl<D: GcdDomain> Frac<D> {
    pub fn new(num: D, den: D) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Frac { num, den: D::one() };
        }
        let g = num.gcd(&den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let u = d.unit_part();
        if u.is_one() {
            Frac { num: n, den: d }
        } else {
            Frac {
                num: n.exact_div(&u).expect("unit divides"),
                den: d.exact_div(&u).expect("unit divides"),
            }
        }
    }

    pub fn from_base(d: D) -> Self {
        Frac { num: d, den: D::one() }
    }

    pub fn num(&self) -> &D {
        &self.num
    }

    pub fn den(&self) -> &D {
        &self.den
    }

    pub fn into_parts(self) -> (D, D) {
        (self.num, self.den)
    }

    /// `Some(num)` when the denominator is one.
    pub fn as_base(&self) -> Option<&D> {
        self.den.is_one().then_some(&self.num)
    }
}

impl<D: GcdDomain> Ring for Frac<D> {
    fn zero() -> Self {
        Frac { num: D::zero(), den: D::one() }
    }
    fn one() -> Self {
        Frac { num: D::one(), den: D::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Frac::new(self.num.add(&other.num), self.den.clone());
        }
        if other.den.is_one() {
            return Frac::new(self.num.add(&other.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Frac::new(self.num.mul(&other.den).add(&other.num), other.den.clone());
        }
        Frac::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let div = |a: &D, g: &D| {
            if g.is_one() {
                a.clone()
            } else {
                a.exact_div(g).expect("gcd divides")
            }
        };
        let n = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let d = div(&self.den, &g2).mul(&div(&other.den, &g1));
        let u = d.unit_part();
        if u.is_one() {
            Frac { num: n, den: d }
        } else {
            Frac {
                num: n.exact_div(&u).expect("unit divides"),
                den: d.exact_div(&u).expect("unit divides"),
            }
        }
    }
    fn neg(&self) -> Self {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Frac::new(D::from_i64(n), D::one())
    }
}

impl<D: GcdDomain> GcdDomain for Frac<D> {
    const IS_FIELD: bool = true;

    fn poly_gcd(a: &UniPoly<Self>, b: &UniPoly<Self>) -> Option<UniPoly<Self>> {
        D::fraction_poly_gcd(a, b)
    }

    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() && other.is_zero() {
            Self::zero()
        } else {
            Self::one()
        }
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self.div(other))
    }
    fn unit_part(&self) -> Self {
        if self.is_zero() {
            Self::one()
        } else {
            self.clone()
        }
    }
}

impl<D: GcdDomain> Field for Frac<D> {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Frac::new(self.den.clone(), self.num.clone())
    }
}

impl<D: GcdDomain + TValuation> TValuation for Frac<D> {
    fn t_valuation(&self) -> Option<i64> {
        Some(self.num.t_valuation()? - self.den.t_valuation()?)
    }
}

impl<D: GcdDomain + Pretty> Pretty for Frac<D> {
    fn pretty(&self, vars: &[&str]) -> String {
        if self.den.is_one() {
            return self.num.pretty(vars);
        }
        let n = self.num.pretty(vars);
        let d = self.den.pretty(vars);
        let n = if self.num.is_compound(vars) { format!("({n})") } else { n };
        let d = if self.den.is_compound(vars) || d.contains(['*', '^']) {
            format!("({d})")
        } else {
            d
        };
        format!("{n}/{d}")
    }
}

impl<D: fmt::Debug> fmt::Debug for Frac<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

/// Q[t].
pub type QPoly = UniPoly<Rational>;
/// Q(t), the base field of every curve-level object.
pub type RatFuncT = Frac<QPoly>;
/// Q(t)[x] (or Q(t)[y]).
pub type UPoly = UniPoly<RatFuncT>;
/// Q(t)(x).
pub type URatFunc = Frac<UPoly>;
/// Q(t)[x][y] with `y` outermost.
pub type BPoly = UniPoly<UPoly>;
/// Q(t)(x, y).
pub type BRatFunc = Frac<BPoly>;

impl RatFuncT {
    pub fn from_rational(r: Rational) -> Self {
        Frac::from_base(QPoly::constant(r))
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Frac::from_base(QPoly::var())
    }

    /// `Some(c)` when the element is a constant rational.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.as_base()?;
        if n.is_constant() {
            Some(n.coeff(0))
        } else {
            None
        }
    }

    /// Maximum of numerator and denominator t-degrees.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn eval_t(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn ratfunc_normal_form() {
        let t = QPoly::var();
        // (2t^2 - 2) / (4t + 4) = (t - 1)/2
        let a = RatFuncT::new(
            QPoly::from_i64s(&[-2, 0, 2]),
            t.scale(&int(4)).add(&QPoly::from_i64s(&[4])),
        );
        assert_eq!(a, RatFuncT::new(QPoly::from_i64s(&[-1, 1]), QPoly::from_i64s(&[2])));
        assert!(a.den().is_one() || a.den().leading().unwrap().is_one());
        let inv = a.inv();
        assert!(inv.mul(&a).is_one());
        assert_eq!(RatFuncT::t().t_valuation(), Some(1));
        assert_eq!(RatFuncT::t().inv().t_valuation(), Some(-1));
    }

    #[test]
    fn urat_arithmetic() {
        let x = URatFunc::from_base(UPoly::var());
        let one = URatFunc::one();
        let a = one.div(&x).add(&x); // 1/x + x
        let b = a.mul(&x).sub(&one); // x^2
        assert_eq!(b, x.mul(&x));
        assert_eq!(
            a.pretty(&["x", "t"]),
            "(x^2 + 1)/x"
        );
    }
}
