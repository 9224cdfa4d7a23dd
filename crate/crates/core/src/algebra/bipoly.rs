//! Sparse bivariate Laurent polynomials in `x`, `y` over Q(t).

use std::collections::BTreeMap;

use super::frac::{BPoly, RatFuncT, UPoly};
use super::poly::Pretty;
use super::rational::Rational;
use super::ring::Ring;

/// Map from `(x exponent, y exponent)` to a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct BiPoly {
    terms: BTreeMap<(i32, i32), RatFuncT>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: RatFuncT, i: i32, j: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn constant(c: RatFuncT) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::term(RatFuncT::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(RatFuncT::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((i32, i32), RatFuncT)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in it {
            p.add_term(c, i, j);
        }
        p
    }

    pub fn add_term(&mut self, c: RatFuncT, i: i32, j: i32) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(RatFuncT::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i32, j: i32) -> RatFuncT {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(RatFuncT::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &RatFuncT)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&(i, j), c) in &other.terms {
            p.add_term(c.clone(), i, j);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &RatFuncT) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, a.mul(c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                p.add_term(a.mul(b), i + k, j + l);
            }
        }
        p
    }

    /// Multiplies by `x^dx y^dy`.
    pub fn shift(&self, dx: i32, dy: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), c)| ((i + dx, j + dy), c.clone())).collect(),
        }
    }

    /// `(min, max)` exponent of `x` over the support.
    pub fn x_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|k| k.0);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn y_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|k| k.1);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Largest t-degree among numerator and denominator of the coefficients.
    pub fn t_degree(&self) -> usize {
        self.terms.values().map(|c| c.height()).max().unwrap_or(0)
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i >= 0 && j >= 0)
    }

    /// Dense form with `y` outermost. `None` if a negative exponent occurs.
    pub fn to_bpoly(&self) -> Option<BPoly> {
        if !self.is_polynomial() {
            return None;
        }
        let (_, ymax) = match self.y_range() {
            None => return Some(BPoly::zero()),
            Some(r) => r,
        };
        let mut rows: Vec<Vec<RatFuncT>> = vec![Vec::new(); ymax as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, RatFuncT::zero());
            }
            row[i as usize] = c.clone();
        }
        Some(BPoly::new(rows.into_iter().map(UPoly::new).collect()))
    }

    pub fn from_bpoly(p: &BPoly) -> Self {
        let mut out = Self::zero();
        for (j, row) in p.coeffs().iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                out.add_term(c.clone(), i as i32, j as i32);
            }
        }
        out
    }

    /// Collects the coefficient of `y^j` as a polynomial in `x`
    /// (requires nonnegative `x` exponents).
    pub fn y_coefficient(&self, j: i32) -> UPoly {
        let mut v: Vec<RatFuncT> = Vec::new();
        for (&(i, jj), c) in &self.terms {
            if jj != j {
                continue;
            }
            assert!(i >= 0, "negative x exponent");
            if v.len() <= i as usize {
                v.resize(i as usize + 1, RatFuncT::zero());
            }
            v[i as usize] = c.clone();
        }
        UPoly::new(v)
    }

    pub fn x_coefficient(&self, i: i32) -> UPoly {
        self.transpose().y_coefficient(i)
    }

    /// Evaluates at rational `x`, `y`, `t`. `None` on a pole of a coefficient
    /// or a zero base with negative exponent.
    pub fn eval(&self, x: &Rational, y: &Rational, t: &Rational) -> Option<Rational> {
        let mut acc = <Rational as Ring>::zero();
        for (&(i, j), c) in &self.terms {
            let c = c.eval_t(t)?;
            acc += c * rpow(x, i)? * rpow(y, j)?;
        }
        Some(acc)
    }
}

fn rpow(x: &Rational, e: i32) -> Option<Rational> {
    if e >= 0 {
        Some(Ring::pow(x, e as u32))
    } else if x.is_zero() {
        None
    } else {
        Some(Ring::pow(&x.recip(), (-e) as u32))
    }
}

impl Pretty for BiPoly {
    fn pretty(&self, vars: &[&str]) -> String {
        let (vx, vy) = (vars[0], vars[1]);
        let rest = &vars[2..];
        if self.terms.is_empty() {
            return "0".into();
        }
        let mono = |v: &str, e: i32| match e {
            0 => String::new(),
            1 => v.to_string(),
            _ => format!("{v}^{e}"),
        };
        let mut parts: Vec<String> = Vec::new();
        // descending total degree, then descending x
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|b| std::cmp::Reverse((b.0 + b.1, b.0)));
        for (i, j) in keys {
            let c = &self.terms[&(i, j)];
            let m: Vec<String> = [mono(vx, i), mono(vy, j)].into_iter().filter(|s| !s.is_empty()).collect();
            let m = m.join("*");
            let cs = c.pretty(rest);
            let term = if m.is_empty() {
                if c.is_compound(rest) { format!("({cs})") } else { cs }
            } else if c.is_one() {
                m
            } else if c.neg().is_one() {
                format!("-{m}")
            } else if c.is_compound(rest) {
                format!("({cs})*{m}")
            } else {
                format!("{cs}*{m}")
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(s) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(s);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip_and_transpose() {
        let t = RatFuncT::t();
        let p = BiPoly::from_terms([((1, 1), RatFuncT::one()), ((2, 1), t.neg()), ((0, 2), t.clone())]);
        let d = p.to_bpoly().unwrap();
        assert_eq!(BiPoly::from_bpoly(&d), p);
        assert_eq!(p.transpose().transpose(), p);
        assert_eq!(p.y_coefficient(1), UPoly::new(vec![RatFuncT::zero(), RatFuncT::one(), t.neg()]));
        assert!(BiPoly::term(RatFuncT::one(), -1, 0).to_bpoly().is_none());
    }

    #[test]
    fn laurent_products_cancel() {
        let a = BiPoly::x().add(&BiPoly::term(RatFuncT::one(), -1, 0));
        let b = BiPoly::x().sub(&BiPoly::term(RatFuncT::one(), -1, 0));
        // (x + 1/x)(x - 1/x) = x^2 - x^-2
        let p = a.mul(&b);
        assert_eq!(p.len(), 2);
        assert_eq!(p.x_range(), Some((-2, 2)));
        assert_eq!(p.pretty(&["x", "y", "t"]), "x^2 - x^-2");
    }
}
