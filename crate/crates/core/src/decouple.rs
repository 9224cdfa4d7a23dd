//! Decoupling modulo the kernel: `r(x, y) = f(x) + g(y) + K(x, y) h(x, y)`
//! with `h` regular.
//!
//! The search is a bounded linear ansatz in the function field
//! `L = Q(t)(x)[y] / (K)`. Every ansatz term reduces to `P + Q y` with
//! `P, Q` in `Q(t)(x)`, so `r - f - g` vanishes on the curve exactly when
//! both components vanish, which is a linear system over `Q(t)` after
//! clearing denominators. `h` is then recovered by exact division by `K`.

use serde::Serialize;

use crate::algebra::{
    newton_valuations, BPoly, BRatFunc, BiPoly, Field, GcdDomain, Pretty,
    QPoly, QuadModulus, RatFuncT, Rational, Ring, UPoly, URatFunc, ValuationProfile,
};
use crate::algebra::modsolve::solve_ratfunc_particular;
use crate::curve::genus;
use crate::group::XtPoly;
use crate::model::KernelData;

pub const DEFAULT_LAURENT_DEGREE: usize = 6;
pub const MAX_LAURENT_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DenominatorMode {
    /// `f` and `g` are Laurent polynomials.
    LaurentOnly,
    /// Laurent terms plus simple poles at the roots of the discriminants
    /// and of the outer sections (where one of the two roots of `K` meets
    /// `0` or `inf`).
    DiscriminantFactors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchBounds {
    pub laurent_degree: usize,
    pub denominator_mode: DenominatorMode,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            laurent_degree: DEFAULT_LAURENT_DEGREE,
            denominator_mode: DenominatorMode::DiscriminantFactors,
        }
    }
}

impl SearchBounds {
    pub fn new(laurent_degree: usize, denominator_mode: DenominatorMode) -> Self {
        assert!(
            laurent_degree <= MAX_LAURENT_DEGREE,
            "laurent degree {laurent_degree} above cap {MAX_LAURENT_DEGREE}"
        );
        SearchBounds {
            laurent_degree,
            denominator_mode,
        }
    }
}

/// `r = f(x) + g(y) + K h`. `g` is stored as a univariate fraction in `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecouplingCertificate {
    pub f: URatFunc,
    pub g: URatFunc,
    pub h: BRatFunc,
    /// Smallest Laurent window at which the ansatz was solvable.
    pub laurent_degree: usize,
    pub mode: DenominatorMode,
}

impl Serialize for DecouplingCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DecouplingCertificate", 5)?;
        st.serialize_field("f", &self.f.pretty(&["x", "t"]))?;
        st.serialize_field("g", &self.g.pretty(&["y", "t"]))?;
        st.serialize_field("h", &self.h.pretty(&["y", "x", "t"]))?;
        st.serialize_field("laurentDegree", &self.laurent_degree)?;
        st.serialize_field("mode", &self.mode)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum DecouplingOutcome {
    Found(DecouplingCertificate),
    NoneUpToBounds(SearchBounds),
}

impl DecouplingOutcome {
    pub fn certificate(&self) -> Option<&DecouplingCertificate> {
        match self {
            DecouplingOutcome::Found(c) => Some(c),
            DecouplingOutcome::NoneUpToBounds(_) => None,
        }
    }
}

/// One unknown of the ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    X(i32),
    Y(i32),
    /// `x^i / p(x)` with `p` the square-free discriminant part.
    XOverDisc(usize),
    YOverDisc(usize),
}

/// Least common multiple of the `t`-denominators.
fn t_lcm<'a>(cs: impl IntoIterator<Item = &'a RatFuncT>) -> QPoly {
    cs.into_iter().fold(QPoly::one(), |l, c| {
        let g = l.gcd(c.den());
        l.mul(&c.den().exact_div(&g).expect("gcd divides"))
    })
}

/// `l * p` as a polynomial over `Q[t]`; `l` must clear `p`.
fn scale_t(p: &UPoly, l: &QPoly) -> XtPoly {
    p.map(|c| c.num().mul(&l.exact_div(c.den()).expect("lcm is a multiple")))
}

/// `(p + q y) / prod_k factors[k]^den[k]` in `L`, with `p, q` in `Q[t][x]`.
#[derive(Clone, Debug)]
struct Elem {
    p: XtPoly,
    q: XtPoly,
    den: Vec<u32>,
}

impl Elem {
    fn exp(&self, k: usize) -> u32 {
        self.den.get(k).copied().unwrap_or(0)
    }
}

const ALPHA: usize = 0;
const GAMMA: usize = 1;
const X: usize = 2;

/// Arithmetic in `L` that keeps denominators as products of known factors,
/// so no gcd is ever taken.
struct Reducer {
    alpha: XtPoly,
    beta: XtPoly,
    gamma: XtPoly,
    factors: Vec<XtPoly>,
}

impl Reducer {
    fn new(k: &KernelData) -> Self {
        let [gamma, beta, alpha] = k.y_quadratic();
        let l = t_lcm([&gamma, &beta, &alpha].into_iter().flat_map(|p| p.coeffs()));
        let (alpha, beta, gamma) = (scale_t(&alpha, &l), scale_t(&beta, &l), scale_t(&gamma, &l));
        let x = XtPoly::monomial(QPoly::one(), 1);
        Reducer {
            factors: vec![alpha.clone(), gamma.clone(), x],
            alpha,
            beta,
            gamma,
        }
    }

    fn push_factor(&mut self, f: XtPoly) -> usize {
        self.factors.push(f);
        self.factors.len() - 1
    }

    fn constant(p: XtPoly) -> Elem {
        Elem { p, q: XtPoly::zero(), den: vec![] }
    }

    fn over(p: XtPoly, factor: usize, e: u32) -> Elem {
        let mut den = vec![0; factor + 1];
        den[factor] = e;
        Elem { p, q: XtPoly::zero(), den }
    }

    fn bump(den: &[u32], k: usize) -> Vec<u32> {
        let mut d = den.to_vec();
        if d.len() <= k {
            d.resize(k + 1, 0);
        }
        d[k] += 1;
        d
    }

    fn mul_y(&self, e: &Elem) -> Elem {
        Elem {
            p: e.q.mul(&self.gamma).neg(),
            q: self.alpha.mul(&e.p).sub(&self.beta.mul(&e.q)),
            den: Self::bump(&e.den, ALPHA),
        }
    }

    fn div_y(&self, e: &Elem) -> Elem {
        Elem {
            p: e.q.mul(&self.gamma).sub(&e.p.mul(&self.beta)),
            q: e.p.mul(&self.alpha).neg(),
            den: Self::bump(&e.den, GAMMA),
        }
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let pp = a.p.mul(&b.p);
        let qq = a.q.mul(&b.q);
        let mixed = a.p.mul(&b.q).add(&a.q.mul(&b.p));
        let n = a.den.len().max(b.den.len());
        let den: Vec<u32> = (0..n).map(|k| a.exp(k) + b.exp(k)).collect();
        Elem {
            p: self.alpha.mul(&pp).sub(&self.gamma.mul(&qq)),
            q: self.alpha.mul(&mixed).sub(&self.beta.mul(&qq)),
            den: Self::bump(&den, ALPHA),
        }
    }

    fn multiplier(&self, from: &Elem, to: &[u32]) -> XtPoly {
        let mut m = XtPoly::one();
        for (k, &e) in to.iter().enumerate() {
            for _ in from.exp(k)..e {
                m = m.mul(&self.factors[k]);
            }
        }
        m
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let n = a.den.len().max(b.den.len());
        let den: Vec<u32> = (0..n).map(|k| a.exp(k).max(b.exp(k))).collect();
        let (ma, mb) = (self.multiplier(a, &den), self.multiplier(b, &den));
        Elem {
            p: a.p.mul(&ma).add(&b.p.mul(&mb)),
            q: a.q.mul(&ma).add(&b.q.mul(&mb)),
            den,
        }
    }

    /// `None` when `e` is zero in `L`.
    fn inv(&mut self, e: &Elem) -> Option<Elem> {
        let d = self.multiplier(&Self::constant(XtPoly::zero()), &e.den);
        if e.q.is_zero() {
            if e.p.is_zero() {
                return None;
            }
            let k = self.push_factor(e.p.clone());
            return Some(Self::over(d, k, 1));
        }
        let norm = self
            .alpha
            .mul(&e.p.mul(&e.p))
            .sub(&self.beta.mul(&e.p.mul(&e.q)))
            .add(&self.gamma.mul(&e.q.mul(&e.q)));
        if norm.is_zero() {
            return None;
        }
        let k = self.push_factor(norm);
        let p = d.mul(&self.alpha.mul(&e.p).sub(&self.beta.mul(&e.q)));
        let q = d.mul(&self.alpha.mul(&e.q)).neg();
        let mut den = vec![0; k + 1];
        den[k] = 1;
        Some(Elem { p, q, den })
    }

    /// `sum_j c_j y^j` by Horner.
    fn horner(&self, coeffs: &[XtPoly]) -> Elem {
        let mut acc = Self::constant(XtPoly::zero());
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul_y(&acc), &Self::constant(c.clone()));
        }
        acc
    }

    /// The class of `r` in `L` as `scale * elem`, with `scale` in `Q(t)`.
    fn fraction(&mut self, r: &BRatFunc) -> Option<(Elem, RatFuncT)> {
        let clear = |p: &BPoly| -> (Vec<XtPoly>, QPoly) {
            let l = t_lcm(p.coeffs().iter().flat_map(|c| c.coeffs()));
            (p.coeffs().iter().map(|c| scale_t(c, &l)).collect(), l)
        };
        let (n, ln) = clear(r.num());
        let (d, ld) = clear(r.den());
        let inv = self.inv(&self.horner(&d))?;
        let e = self.mul(&self.horner(&n), &inv);
        Some((e, RatFuncT::new(ld, ln)))
    }
}

fn power(i: i32) -> URatFunc {
    let mono = UPoly::monomial(RatFuncT::one(), i.unsigned_abs() as usize);
    if i >= 0 {
        URatFunc::from_base(mono)
    } else {
        URatFunc::new(UPoly::one(), mono)
    }
}

/// Square-free part of the product of the given polynomials, with factors
/// of the variable removed; `None` when nothing is left.
fn pole_denominator(ps: &[UPoly]) -> Option<UPoly> {
    let mut acc = UPoly::one();
    for p in ps.iter().filter(|p| !p.is_zero()) {
        let p = p.unshift(p.trailing_degree().expect("nonzero"));
        let sqf = p
            .squarefree_factors()
            .into_iter()
            .fold(UPoly::one(), |a, (f, _)| a.mul(&f));
        let g = acc.gcd(&sqf);
        acc = acc.mul(&sqf.exact_div(&g).expect("gcd divides"));
    }
    let acc = acc.monic();
    (acc.deg() > 0).then_some(acc)
}

/// Everything the solver needs about one ansatz.
struct Ansatz {
    terms: Vec<Term>,
    px: Option<UPoly>,
    py: Option<UPoly>,
}

impl Ansatz {
    fn new(k: &KernelData, d: usize, mode: DenominatorMode) -> Self {
        let d = d as i32;
        let mut terms = vec![Term::X(0)];
        for i in 1..=d {
            terms.extend([Term::X(i), Term::X(-i)]);
        }
        // y^0 is omitted: constants are absorbed by f
        for j in 1..=d {
            terms.extend([Term::Y(j), Term::Y(-j)]);
        }
        let (mut px, mut py) = (None, None);
        if mode == DenominatorMode::DiscriminantFactors {
            if let Ok(g) = genus(k) {
                let [am, _, ap] = &k.x_sections;
                let [bm, _, bp] = &k.y_sections;
                px = pole_denominator(&[g.disc_x, am.shifted_over_t(), ap.shifted_over_t()]);
                py = pole_denominator(&[g.disc_y, bm.shifted_over_t(), bp.shifted_over_t()]);
            }
            if let Some(p) = &px {
                terms.extend((0..p.deg() as usize).map(Term::XOverDisc));
            }
            if let Some(p) = &py {
                terms.extend((0..p.deg() as usize).map(Term::YOverDisc));
            }
        }
        // polynomial coefficients in t, so the columns see the same poles
        let integral = |p: UPoly| scale_t(&p, &t_lcm(p.coeffs())).map(|c| RatFuncT::from_base(c.clone()));
        Ansatz {
            terms,
            px: px.map(integral),
            py: py.map(integral),
        }
    }

    /// The classes of the terms in `L`, in order.
    fn columns(&self, red: &mut Reducer) -> Vec<Elem> {
        let d = self.terms.iter().map(|t| match *t {
            Term::X(i) | Term::Y(i) => i.unsigned_abs() as usize,
            Term::XOverDisc(i) | Term::YOverDisc(i) => i,
        });
        let d = d.max().unwrap_or(0);
        let mut pos = vec![Reducer::constant(XtPoly::one())];
        let mut neg = vec![Reducer::constant(XtPoly::one())];
        for j in 1..=d {
            pos.push(red.mul_y(&pos[j - 1]));
            neg.push(red.div_y(&neg[j - 1]));
        }
        let px = self.px.as_ref().map(|p| red.push_factor(scale_t(p, &QPoly::one())));
        let inv_py = self.py.as_ref().map(|p| {
            let c = scale_t(p, &QPoly::one());
            let coeffs: Vec<XtPoly> = c.coeffs().iter().map(|a| XtPoly::constant(a.clone())).collect();
            let e = red.horner(&coeffs);
            red.inv(&e).expect("a nonzero polynomial in y alone is not divisible by K")
        });
        let xpow = |i: usize| XtPoly::monomial(QPoly::one(), i);
        self.terms
            .iter()
            .map(|&t| match t {
                Term::X(i) if i >= 0 => Reducer::constant(xpow(i as usize)),
                Term::X(i) => Reducer::over(XtPoly::one(), X, i.unsigned_abs()),
                Term::Y(j) if j >= 0 => pos[j as usize].clone(),
                Term::Y(j) => neg[j.unsigned_abs() as usize].clone(),
                Term::XOverDisc(i) => Reducer::over(xpow(i), px.expect("x discriminant present"), 1),
                Term::YOverDisc(i) => red.mul(&pos[i], inv_py.as_ref().expect("y discriminant present")),
            })
            .collect()
    }

    /// `(f, g)` from a solution vector aligned with `terms`.
    fn assemble(&self, sol: &[RatFuncT]) -> (URatFunc, URatFunc) {
        let mut f = URatFunc::zero();
        let mut g = URatFunc::zero();
        for (term, c) in self.terms.iter().zip(sol) {
            if c.is_zero() {
                continue;
            }
            let c = URatFunc::from_base(UPoly::constant(c.clone()));
            match *term {
                Term::X(i) => f = f.add(&c.mul(&power(i))),
                Term::Y(j) => g = g.add(&c.mul(&power(j))),
                Term::XOverDisc(i) => {
                    let p = URatFunc::from_base(self.px.clone().expect("present"));
                    f = f.add(&c.mul(&power(i as i32)).div(&p));
                }
                Term::YOverDisc(i) => {
                    let p = URatFunc::from_base(self.py.clone().expect("present"));
                    g = g.add(&c.mul(&power(i as i32)).div(&p));
                }
            }
        }
        (f, g)
    }
}

/// Rows stating that `sum_c u_c cols[c] = scale * rhs` in `L`: both
/// components over a common denominator, coefficient by coefficient in `x`.
fn coefficient_rows(
    red: &Reducer,
    cols: &[Elem],
    rhs: &Elem,
    scale: &RatFuncT,
) -> (Vec<Vec<RatFuncT>>, Vec<RatFuncT>) {
    let all = || cols.iter().chain(std::iter::once(rhs));
    let n = all().map(|e| e.den.len()).max().unwrap_or(0);
    let common: Vec<u32> = (0..n).map(|k| all().map(|e| e.exp(k)).max().unwrap_or(0)).collect();
    let mut pows: Vec<Vec<XtPoly>> = red
        .factors
        .iter()
        .zip(&common)
        .map(|(f, &e)| {
            let mut v = vec![XtPoly::one()];
            for i in 0..e as usize {
                v.push(v[i].mul(f));
            }
            v
        })
        .collect();
    pows.resize(n, vec![XtPoly::one()]);
    let mut memo: std::collections::HashMap<Vec<u32>, XtPoly> = Default::default();
    let mut clear = |e: &Elem| {
        let key: Vec<u32> = (0..n).map(|k| common[k] - e.exp(k)).collect();
        let m = memo
            .entry(key)
            .or_insert_with_key(|key| {
                key.iter().enumerate().fold(XtPoly::one(), |m, (k, &d)| m.mul(&pows[k][d as usize]))
            })
            .clone();
        [e.p.mul(&m), e.q.mul(&m)]
    };
    let cleared: Vec<[XtPoly; 2]> = cols.iter().map(&mut clear).collect();
    let r = clear(rhs);
    let entry = |c: QPoly| RatFuncT::from_base(c);
    let mut m = Vec::new();
    let mut b = Vec::new();
    for part in 0..2 {
        let len = cleared.iter().chain(std::iter::once(&r)).map(|p| p[part].coeffs().len()).max().unwrap_or(0);
        for k in 0..len {
            m.push(cleared.iter().map(|p| entry(p[part].coeff(k))).collect());
            b.push(entry(r[part].coeff(k)).mul(scale));
        }
    }
    (m, b)
}

/// `g(y)` as a polynomial with `y` outermost.
fn y_poly(p: &UPoly) -> BPoly {
    p.map(|c| UPoly::constant(c.clone()))
}

fn x_poly(p: &UPoly) -> BPoly {
    BPoly::constant(p.clone())
}

pub fn kernel_bpoly(k: &KernelData) -> BPoly {
    k.kernel.to_bpoly().expect("kernel is a polynomial")
}

/// `x y` as a fraction.
pub fn xy() -> BRatFunc {
    BRatFunc::from_base(BiPoly::term(RatFuncT::one(), 1, 1).to_bpoly().expect("polynomial"))
}

/// Solves the ansatz at one Laurent window. `column_order` permutes the
/// unknowns before elimination; the answer is the same whenever the
/// solution is unique.
pub fn decouple_at(
    k: &KernelData,
    r: &BRatFunc,
    degree: usize,
    mode: DenominatorMode,
    column_order: Option<&[usize]>,
) -> Option<DecouplingCertificate> {
    let mut ansatz = Ansatz::new(k, degree, mode);
    if let Some(order) = column_order {
        assert_eq!(order.len(), ansatz.terms.len(), "permutation length");
        ansatz.terms = order.iter().map(|&i| ansatz.terms[i]).collect();
    }
    let mut red = Reducer::new(k);
    let (target, scale) = red.fraction(r)?;
    let cols = ansatz.columns(&mut red);
    let (mat, rhs) = coefficient_rows(&red, &cols, &target, &scale);
    let sol = solve_ratfunc_particular(&mat, &rhs)?;
    let (f, g) = ansatz.assemble(&sol);
    let h = quotient(k, r, &f, &g).expect("a solution of the reduced system is divisible by K");
    Some(DecouplingCertificate {
        f,
        g,
        h,
        laurent_degree: degree,
        mode,
    })
}

/// `(r - f - g) / K`, or `None` if the division is not exact.
fn quotient(k: &KernelData, r: &BRatFunc, f: &URatFunc, g: &URatFunc) -> Option<BRatFunc> {
    let (nf, df) = (x_poly(f.num()), x_poly(f.den()));
    let (ng, dg) = (y_poly(g.num()), y_poly(g.den()));
    let dfg = df.mul(&dg);
    let num = r.num().mul(&dfg).sub(&r.den().mul(&nf.mul(&dg).add(&ng.mul(&df))));
    let q = num.exact_div(&kernel_bpoly(k))?;
    Some(BRatFunc::new(q, r.den().mul(&dfg)))
}

/// Decides the full window first; on success, returns the certificate of
/// the smallest window that works. The ansatz spaces are nested, so this
/// agrees with scanning upwards.
pub fn decouple_r(k: &KernelData, r: &BRatFunc, b: SearchBounds) -> DecouplingOutcome {
    let Some(top) = decouple_at(k, r, b.laurent_degree, b.denominator_mode, None) else {
        return DecouplingOutcome::NoneUpToBounds(b);
    };
    for d in 0..b.laurent_degree {
        if let Some(c) = decouple_at(k, r, d, b.denominator_mode, None) {
            return DecouplingOutcome::Found(c);
        }
    }
    DecouplingOutcome::Found(top)
}

pub fn decouple_xy(k: &KernelData, b: SearchBounds) -> DecouplingOutcome {
    decouple_r(k, &xy(), b)
}

/// Moves the constant term of `f` (of its polynomial part) into `g`.
pub fn normalize_certificate(c: &DecouplingCertificate) -> DecouplingCertificate {
    let c0 = c.f.num().div_rem(c.f.den()).0.coeff(0);
    if c0.is_zero() {
        return c.clone();
    }
    let shift = URatFunc::from_base(UPoly::constant(c0));
    DecouplingCertificate {
        f: c.f.sub(&shift),
        g: c.g.add(&shift),
        ..c.clone()
    }
}

/// Cross-multiplied check of `r = f + g + K h` and regularity of `h`.
pub fn verify_identity(k: &KernelData, r: &BRatFunc, c: &DecouplingCertificate) -> bool {
    let kp = kernel_bpoly(k);
    let (nf, df) = (x_poly(c.f.num()), x_poly(c.f.den()));
    let (ng, dg) = (y_poly(c.g.num()), y_poly(c.g.den()));
    let (nh, dh) = (c.h.num(), c.h.den());
    let lhs = r.num().mul(&df).mul(&dg).mul(dh);
    let rhs = r.den().mul(
        &nf.mul(&dg)
            .mul(dh)
            .add(&ng.mul(&df).mul(dh))
            .add(&kp.mul(nh).mul(&df).mul(&dg)),
    );
    lhs == rhs && dh.exact_div(&kp).is_none()
}

fn eval_upoly(p: &UPoly, x: &Rational, t: &Rational) -> Option<Rational> {
    let c: Option<Vec<Rational>> = p.coeffs().iter().map(|c| c.eval_t(t)).collect();
    Some(QPoly::new(c?).eval(x))
}

fn eval_bpoly_at_x(p: &BPoly, x: &Rational, t: &Rational) -> Option<QPoly> {
    let c: Option<Vec<Rational>> = p.coeffs().iter().map(|c| eval_upoly(c, x, t)).collect();
    Some(QPoly::new(c?))
}

fn eval_ypoly(p: &UPoly, t: &Rational) -> Option<QPoly> {
    let c: Option<Vec<Rational>> = p.coeffs().iter().map(|c| c.eval_t(t)).collect();
    Some(QPoly::new(c?))
}

/// Substitutes curve points `(x0, y0)` at rational `t0`, with `y0` a root
/// of `K(x0, y, t0)` in a quadratic extension of Q, and checks
/// `r - f - g = 0` there. Returns the number of points checked; points
/// where something is undefined are skipped.
pub fn verify_on_curve(
    k: &KernelData,
    r: &BRatFunc,
    c: &DecouplingCertificate,
    points: usize,
    seed: u64,
) -> Result<usize, String> {
    let [gamma, beta, alpha] = k.y_quadratic();
    let mut state = seed;
    let mut next = move |lo: i64, hi: i64| -> i64 {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        lo + (z % (hi - lo + 1) as u64) as i64
    };
    let mut checked = 0;
    let mut attempts = 0;
    while checked < points {
        attempts += 1;
        if attempts > 50 * points {
            return Err(format!("only {checked} usable points found"));
        }
        let x0 = Rational::new(next(-40, 40).into(), next(1, 17).into());
        let t0 = Rational::new(next(1, 9).into(), next(10, 97).into());
        let (Some(a), Some(b), Some(g)) = (
            eval_upoly(&alpha, &x0, &t0),
            eval_upoly(&beta, &x0, &t0),
            eval_upoly(&gamma, &x0, &t0),
        ) else {
            continue;
        };
        if a.is_zero() || x0.is_zero() {
            continue;
        }
        let q = QuadModulus::new(b.div(&a), g.div(&a));
        let y = q.generator();
        let value = (|| {
            let rn = q.eval_poly(&eval_bpoly_at_x(r.num(), &x0, &t0)?, &y);
            let rd = q.eval_poly(&eval_bpoly_at_x(r.den(), &x0, &t0)?, &y);
            let rv = q.div(&rn, &rd)?;
            let fd = eval_upoly(c.f.den(), &x0, &t0)?;
            if fd.is_zero() {
                return None;
            }
            let fv = eval_upoly(c.f.num(), &x0, &t0)?.div(&fd);
            let gn = q.eval_poly(&eval_ypoly(c.g.num(), &t0)?, &y);
            let gd = q.eval_poly(&eval_ypoly(c.g.den(), &t0)?, &y);
            let gv = q.div(&gn, &gd)?;
            Some(rv.sub(&q.embed(fv)).sub(&gv))
        })();
        let Some(v) = value else { continue };
        if !v.is_zero() {
            return Err(format!("r - f - g = {v:?} at x = {x0}, t = {t0}"));
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PoleDiskReport {
    pub f_poles: ValuationProfile,
    pub g_poles: ValuationProfile,
    pub f_in_disk: usize,
    pub g_in_disk: usize,
    pub in_disk_pole: bool,
    /// Set when neither `f` nor `g` has a finite pole.
    pub red_flag: Option<String>,
}

/// Valuations of the finite poles of `f` and `g`; a pole lies in the
/// closed unit disk when its valuation is nonnegative (the root 0 counts).
pub fn pole_disk_check(c: &DecouplingCertificate) -> PoleDiskReport {
    let profile = |d: &UPoly| newton_valuations(d).expect("denominator is nonzero");
    let f_poles = profile(c.f.den());
    let g_poles = profile(c.g.den());
    let f_in_disk = f_poles.in_closed_unit_disk();
    let g_in_disk = g_poles.in_closed_unit_disk();
    let red_flag = (f_poles.root_count() == 0 && g_poles.root_count() == 0)
        .then(|| "f and g have no finite poles".to_string());
    PoleDiskReport {
        in_disk_pole: f_in_disk + g_in_disk > 0,
        f_poles,
        g_poles,
        f_in_disk,
        g_in_disk,
        red_flag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::model::{build_kernel, WeightedModel};

    fn certificate(m: &WeightedModel, r: &BRatFunc, d: usize, mode: DenominatorMode) -> DecouplingOutcome {
        decouple_r(&build_kernel(m), r, SearchBounds::new(d, mode))
    }

    #[test]
    fn already_decoupled() {
        let k = build_kernel(&WeightedModel::kreweras());
        let r = BRatFunc::from_base(
            BiPoly::from_terms([((1, 0), RatFuncT::one()), ((0, 1), RatFuncT::one())])
                .to_bpoly()
                .unwrap(),
        );
        let c = decouple_r(&k, &r, SearchBounds::default());
        let c = normalize_certificate(c.certificate().expect("x + y decouples"));
        assert_eq!(c.f, power(1));
        assert_eq!(c.g, power(1));
        assert!(c.h.is_zero());
        assert!(verify_identity(&k, &r, &c));
    }

    #[test]
    fn kreweras_decouples() {
        let m = WeightedModel::kreweras();
        let k = build_kernel(&m);
        for mode in [DenominatorMode::LaurentOnly, DenominatorMode::DiscriminantFactors] {
            let out = certificate(&m, &xy(), 2, mode);
            let c = out.certificate().expect("Kreweras decouples");
            assert!(verify_identity(&k, &xy(), c));
            assert_eq!(verify_on_curve(&k, &xy(), c, 5, 7), Ok(5));
            // xy = 1/t - 1/x - 1/y - K/(t x y)
            let n = normalize_certificate(c);
            assert_eq!(n.f, power(-1).neg());
            let inv_t = URatFunc::from_base(UPoly::constant(RatFuncT::t().inv()));
            assert_eq!(n.g, power(-1).neg().add(&inv_t));
        }
    }

    #[test]
    fn simple_walk_has_no_small_decoupling() {
        let m = WeightedModel::simple();
        for mode in [DenominatorMode::LaurentOnly, DenominatorMode::DiscriminantFactors] {
            assert!(certificate(&m, &xy(), 6, mode).certificate().is_none());
        }
    }

    #[test]
    fn normalization_absorbs_constant_shifts() {
        let k = build_kernel(&WeightedModel::kreweras());
        let c = decouple_xy(&k, SearchBounds::default());
        let c = c.certificate().unwrap();
        let five = URatFunc::from_base(UPoly::constant(RatFuncT::from_i64(5)));
        let shifted = DecouplingCertificate {
            f: c.f.add(&five),
            g: c.g.sub(&five),
            ..c.clone()
        };
        let n = normalize_certificate(c);
        assert_eq!(normalize_certificate(&shifted), n);
        assert_eq!(normalize_certificate(&n), n);
    }

    #[test]
    fn pole_valuations() {
        let dummy = |den: UPoly| DecouplingCertificate {
            f: URatFunc::new(UPoly::one(), den),
            g: URatFunc::zero(),
            h: BRatFunc::zero(),
            laurent_degree: 0,
            mode: DenominatorMode::LaurentOnly,
        };
        let r = pole_disk_check(&dummy(power(1).num().clone()));
        assert!(r.in_disk_pole);
        // t x - 1 has its root 1/t of valuation -1
        let tx1 = UPoly::new(vec![RatFuncT::from_i64(-1), RatFuncT::t()]);
        let r = pole_disk_check(&dummy(tx1));
        assert!(!r.in_disk_pole);
        assert_eq!(r.f_poles.classes[0].valuation, rat(-1, 1));
        let flat = pole_disk_check(&dummy(UPoly::one()));
        assert!(flat.red_flag.is_some());
    }

    /// An infinite-group model seen through `x -> 2x, y -> y/3`.
    fn weighted_infinite() -> WeightedModel {
        WeightedModel::unweighted(&[(-1, -1), (-1, 0), (0, 1), (1, 0)])
            .unwrap()
            .rescale(&rat(2, 1), &rat(1, 3))
    }

    #[test]
    fn shuffled_unknowns_give_the_same_certificate() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let k = build_kernel(&weighted_infinite());
        let mode = DenominatorMode::DiscriminantFactors;
        let n = Ansatz::new(&k, 3, mode).terms.len();
        let base = normalize_certificate(&decouple_at(&k, &xy(), 3, mode, None).expect("decouples"));
        assert!(verify_identity(&k, &xy(), &base));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2 {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let c = decouple_at(&k, &xy(), 3, mode, Some(&order)).expect("decouples");
            assert_eq!(normalize_certificate(&c), base);
        }
    }

    #[test]
    fn larger_windows_keep_succeeding() {
        let k = build_kernel(&weighted_infinite());
        for mode in [DenominatorMode::LaurentOnly, DenominatorMode::DiscriminantFactors] {
            let first = decouple_r(&k, &xy(), SearchBounds::new(6, mode));
            let d0 = first.certificate().expect("decouples").laurent_degree;
            for d in d0..=6 {
                let c = decouple_at(&k, &xy(), d, mode, None).expect("nested windows");
                assert_eq!(verify_on_curve(&k, &xy(), &c, 5, d as u64), Ok(5));
            }
        }
    }
}
