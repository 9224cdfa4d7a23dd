//! Dense univariate polynomials over an arbitrary coefficient ring.

use std::fmt;

use super::frac::Frac;
use super::rational::{format_rational, Rational};
use super::ring::{Field, GcdDomain, Ring, TValuation};

/// Dense polynomial; `coeffs[k]` is the coefficient of `var^k`.
///
/// The last stored coefficient is never zero, so the zero polynomial
/// has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::new(Vec::new());
        }
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        UniPoly { coeffs: v }
    }

    /// The polynomial variable itself.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| C::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Index of the lowest nonzero coefficient.
    pub fn trailing_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() || k == 0 {
            return self.clone();
        }
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: v }
    }

    /// Drops the factor `var^k` (the caller guarantees divisibility).
    pub fn unshift(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Horner evaluation in another ring through a coefficient embedding.
    pub fn eval_in<T: Ring>(&self, x: &T, embed: impl Fn(&C) -> T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul(x).add(&embed(c)))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&C::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    /// Pseudo-remainder: `lc(b)^k * self mod b` for some `k`.
    pub fn prem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let lb = b.coeffs[db].clone();
        let mut r = self.coeffs.clone();
        while r.len() > db {
            let top = r.len() - 1;
            let lr = r[top].clone();
            if lr.is_zero() {
                r.pop();
                continue;
            }
            let off = top - db;
            for c in r.iter_mut() {
                *c = c.mul(&lb);
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[off + j] = r[off + j].sub(&lr.mul(bj));
            }
            r.pop();
        }
        Self::new(r)
    }

    /// `var^deg * self(1/var)`.
    pub fn reciprocal(&self, deg: usize) -> Self {
        let mut v = vec![C::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            assert!(k <= deg, "reciprocal degree too small");
            v[deg - k] = c.clone();
        }
        Self::new(v)
    }
}

impl<C: GcdDomain> UniPoly<C> {
    /// Normalized gcd of the coefficients.
    pub fn content(&self) -> C {
        let mut g = C::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_scalar_exact(&self, c: &C) -> Option<Self> {
        let v: Option<Vec<C>> = self.coeffs.iter().map(|a| a.exact_div(c)).collect();
        v.map(Self::new)
    }

    /// Content removed and leading coefficient normalized.
    /// Over a field this is the monic associate.
    pub fn primitive_part(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let c = self.content();
        let p = if c.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&c).expect("content divides")
        };
        let u = p.coeffs.last().unwrap().unit_part();
        if u.is_one() {
            p
        } else {
            p.div_scalar_exact(&u).expect("unit divides")
        }
    }

    /// Euclidean division; the coefficient domain must be a field.
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let lb = &b.coeffs[db];
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![C::zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            if r[top].is_zero() {
                continue;
            }
            let c = r[top].exact_div(lb).expect("leading coefficient must be invertible");
            let off = top - db;
            for (j, bj) in b.coeffs.iter().enumerate().take(db) {
                r[off + j] = r[off + j].sub(&c.mul(bj));
            }
            r[top] = C::zero();
            q[off] = c;
        }
        r.truncate(db);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    /// True iff `gcd(p, p')` is constant; the witness is that gcd.
    /// Panics on the zero polynomial.
    pub fn squarefree_witness(&self) -> (bool, Self) {
        assert!(!self.is_zero(), "squarefree test of zero polynomial");
        let g = self.gcd(&self.derivative());
        (g.is_constant(), g)
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_witness().0
    }

    /// Square-free decomposition `p = c * prod f_i^i` (Yun). Characteristic zero only.
    pub fn squarefree_factors(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        let a = self.gcd(&d);
        let mut b = self.exact_div(&a).expect("gcd divides");
        let mut c = d.exact_div(&a).expect("gcd divides");
        let mut i = 1;
        loop {
            let dd = c.sub(&b.derivative());
            if b.is_constant() {
                break;
            }
            let f = b.gcd(&dd);
            if !f.is_constant() {
                out.push((f.clone(), i));
            }
            b = b.exact_div(&f).expect("gcd divides");
            c = dd.exact_div(&f).expect("gcd divides");
            i += 1;
        }
        out
    }
}

impl<C: Field> UniPoly<C> {
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv()),
        }
    }
}

impl<C: Ring> Ring for UniPoly<C> {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        C::poly_poly_mul(a, b)
    }
    fn one() -> Self {
        UniPoly { coeffs: vec![C::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut v = long.coeffs.clone();
        for (a, b) in v.iter_mut().zip(short.coeffs.iter()) {
            *a = a.add(b);
        }
        Self::new(v)
    }
    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = other.coeffs.get(k);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a.sub(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(v)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        if let Some(v) = C::poly_mul(&self.coeffs, &other.coeffs) {
            return Self::new(v);
        }
        let mut v = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }
    fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }
}

impl<C: GcdDomain> GcdDomain for UniPoly<C> {
    const IS_FIELD: bool = false;

    fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize();
        }
        if other.is_zero() {
            return self.normalize();
        }
        if let Some(g) = C::poly_gcd(self, other) {
            return g;
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_constant() {
            let r = if C::IS_FIELD { a.rem(&b) } else { a.prem(&b) };
            a = b;
            if r.is_zero() {
                return a.scale(&cont).normalize();
            }
            b = r.primitive_part();
        }
        // b is a nonzero constant: the primitive gcd is one
        Self::constant(cont).normalize()
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        let db = other.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.coeffs.len() <= db {
            return None;
        }
        let lb = &other.coeffs[db];
        let mut r = self.coeffs.clone();
        let mut q = vec![C::zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            if r[top].is_zero() {
                continue;
            }
            let c = r[top].exact_div(lb)?;
            let off = top - db;
            for (j, bj) in other.coeffs.iter().enumerate().take(db) {
                r[off + j] = r[off + j].sub(&c.mul(bj));
            }
            r[top] = C::zero();
            q[off] = c;
        }
        if r.iter().take(db).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    fn poly_gcd(a: &UniPoly<Self>, b: &UniPoly<Self>) -> Option<UniPoly<Self>> {
        C::bivariate_gcd(a, b)
    }

    // Over the fraction field of C[t] the gcd is the primitive gcd of the
    // cleared polynomials (Gauss), which avoids fractions in the remainders.
    fn fraction_poly_gcd(
        a: &UniPoly<Frac<Self>>,
        b: &UniPoly<Frac<Self>>,
    ) -> Option<UniPoly<Frac<Self>>> {
        if !C::IS_FIELD {
            return None;
        }
        let clear = |p: &UniPoly<Frac<Self>>| -> UniPoly<Self> {
            let l = p.coeffs.iter().fold(Self::one(), |l, c| {
                let g = l.gcd(c.den());
                l.mul(&c.den().exact_div(&g).expect("gcd divides"))
            });
            UniPoly::new(
                p.coeffs
                    .iter()
                    .map(|c| c.num().mul(&l.exact_div(c.den()).expect("lcm is a multiple")))
                    .collect(),
            )
        };
        let g = clear(a).gcd(&clear(b));
        let lead = Frac::from_base(g.leading().expect("nonzero gcd").clone());
        Some(UniPoly::new(
            g.coeffs.iter().map(|c| Frac::from_base(c.clone()).div(&lead)).collect(),
        ))
    }

    fn unit_part(&self) -> Self {
        match self.coeffs.last() {
            None => Self::one(),
            Some(l) => Self::constant(l.unit_part()),
        }
    }

    fn normalize(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let u = l.unit_part();
                if u.is_one() {
                    self.clone()
                } else {
                    self.div_scalar_exact(&u).expect("unit divides")
                }
            }
        }
    }
}

impl TValuation for UniPoly<Rational> {
    fn t_valuation(&self) -> Option<i64> {
        self.trailing_degree().map(|k| k as i64)
    }
}

/// Human-readable rendering with explicit variable names, outermost first.
pub trait Pretty {
    fn pretty(&self, vars: &[&str]) -> String;

    /// Whether the rendering needs parentheses when used as a factor.
    fn is_compound(&self, vars: &[&str]) -> bool {
        let s = self.pretty(vars);
        s.trim_start_matches('-').contains([' ', '/'])
    }
}

impl Pretty for Rational {
    fn pretty(&self, _vars: &[&str]) -> String {
        format_rational(self)
    }
    fn is_compound(&self, _vars: &[&str]) -> bool {
        false
    }
}

impl<C: Ring + Pretty> Pretty for UniPoly<C> {
    fn pretty(&self, vars: &[&str]) -> String {
        let (v, rest) = vars.split_first().expect("variable name required");
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{k}"),
            };
            let cs = c.pretty(rest);
            let term = if mono.is_empty() {
                if c.is_compound(rest) {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if c.is_one() {
                mono
            } else if c.neg().is_one() {
                format!("-{mono}")
            } else if c.is_compound(rest) {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

impl<C: Ring + fmt::Debug> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    type QP = UniPoly<Rational>;

    fn qp(cs: &[i64]) -> QP {
        QP::from_i64s(cs)
    }

    #[test]
    fn gcd_examples() {
        // (x^2 - 1, x - 1) -> x - 1
        assert_eq!(qp(&[-1, 0, 1]).gcd(&qp(&[-1, 1])), qp(&[-1, 1]));
        // (x, 1) -> 1
        assert_eq!(qp(&[0, 1]).gcd(&QP::one()), QP::one());
        assert_eq!(QP::zero().gcd(&QP::zero()), QP::zero());
        // monic output
        assert_eq!(qp(&[2, 2]).gcd(&qp(&[4, 4])), qp(&[1, 1]));
    }

    #[test]
    fn gcd_over_polynomial_coefficients() {
        // Q[t][x]: (x - t)(x + 1) and (x - t)(x - 2)
        type TX = UniPoly<QP>;
        let t = QP::var();
        let x_minus_t = TX::new(vec![t.neg(), QP::one()]);
        let a = x_minus_t.mul(&TX::new(vec![QP::one(), QP::one()]));
        let b = x_minus_t.mul(&TX::new(vec![QP::from_i64(-2), QP::one()]));
        assert_eq!(a.gcd(&b), x_minus_t);
        assert_eq!(a.exact_div(&x_minus_t), Some(TX::new(vec![QP::one(), QP::one()])));
        assert_eq!(a.exact_div(&TX::new(vec![QP::from_i64(3), QP::one()])), None);
    }

    #[test]
    fn squarefree_examples() {
        let (ok, w) = qp(&[1, -2, 1]).squarefree_witness();
        assert!(!ok);
        assert_eq!(w, qp(&[-1, 1]));
        let (ok, w) = qp(&[0, 0, 0, 1]).squarefree_witness();
        assert!(!ok);
        assert_eq!(w, qp(&[0, 0, 1]));
        assert!(qp(&[-2, 0, 1]).is_squarefree());
    }

    #[test]
    fn squarefree_decomposition() {
        // (x+1)^3 (x-2)
        let p = qp(&[1, 1]).pow(3).mul(&qp(&[-2, 1]));
        let f = p.squarefree_factors();
        assert_eq!(f, vec![(qp(&[-2, 1]), 1), (qp(&[1, 1]), 3)]);
    }

    #[test]
    fn division_and_prem() {
        let a = qp(&[1, 2, 3, 4]);
        let b = qp(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
        let p = a.prem(&b);
        assert!(p.is_constant());
        assert_eq!(qp(&[0, 1]).derivative(), QP::one());
        assert_eq!(qp(&[1, 1]).compose(&qp(&[0, 0, 1])), qp(&[1, 0, 1]));
        assert_eq!(qp(&[2, 4]).monic(), UniPoly::new(vec![rat(1, 2), int(1)]));
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(qp(&[1, -3, 1]).pretty(&["x"]), "x^2 - 3*x + 1");
        type TX = UniPoly<QP>;
        let p = TX::new(vec![qp(&[0, 1]), qp(&[1, 1])]);
        assert_eq!(p.pretty(&["x", "t"]), "(t + 1)*x + t");
    }
}
