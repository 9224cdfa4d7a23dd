//! The involutions of the kernel curve and the order of their product.
//!
//! By Vieta, the second root in `y` of `K(x, y) = 0` is `gamma(x)/(alpha(x) y)`,
//! and `t` cancels from that quotient: `iota1(x, y) = (x, xA_{-1}(x)/(xA_1(x) y))`.
//! The plane maps therefore have rational coefficients. The order is searched
//! twice: by composing plane maps, and by iterating the pullback of
//! `theta = iota1 o iota2` on the function field `Q(t)(x)[y]/(K)` of the curve.

use serde::{Serialize, Serializer};

use crate::algebra::{
    Field, Fp, Frac, GcdDomain, Pretty, QPoly, RatFuncT, Rational, Ring, UPoly,
    UniPoly,
};
use crate::model::KernelData;

/// Polynomials in `x, y` stored with `y` outermost.
pub type Biv<F> = UniPoly<UniPoly<F>>;
pub type BivFrac<F> = Frac<Biv<F>>;

fn biv_x<F: Field>() -> Biv<F> {
    Biv::constant(UniPoly::var())
}

fn biv_y<F: Field>() -> Biv<F> {
    Biv::var()
}

/// Embeds a polynomial in `x` (or in `y` when `in_y`) as a bivariate one.
fn embed_univariate<F: Field>(p: &UniPoly<F>, in_y: bool) -> Biv<F> {
    if in_y {
        p.map(|c| UniPoly::constant(c.clone()))
    } else {
        Biv::constant(p.clone())
    }
}

/// `(deg_x, deg_y)` of a bivariate polynomial.
fn bidegree<F: Field>(p: &Biv<F>) -> (usize, usize) {
    let dy = p.degree().unwrap_or(0);
    let dx = p.coeffs().iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    (dx, dy)
}

fn total_degree<F: Field>(p: &Biv<F>) -> usize {
    p.coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, c)| c.degree().map(|d| d + j))
        .max()
        .unwrap_or(0)
}

/// A rational self-map `(x, y) -> (x_image, y_image)` of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMap<F: Field = Rational> {
    pub x_image: BivFrac<F>,
    pub y_image: BivFrac<F>,
}

impl<F: Field + Pretty> PlaneMap<F> {
    pub fn identity() -> Self {
        PlaneMap {
            x_image: Frac::from_base(biv_x()),
            y_image: Frac::from_base(biv_y()),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Largest total degree among the numerators and denominators.
    pub fn degree(&self) -> usize {
        [&self.x_image, &self.y_image]
            .iter()
            .flat_map(|f| [total_degree(f.num()), total_degree(f.den())])
            .max()
            .unwrap_or(0)
    }

    /// `self o inner`, reduced to lowest terms.
    pub fn compose(&self, inner: &Self) -> Self {
        PlaneMap {
            x_image: substitute(&self.x_image, &inner.x_image, &inner.y_image),
            y_image: substitute(&self.y_image, &inner.x_image, &inner.y_image),
        }
    }

    pub fn map_coeffs<G: Field + Pretty>(&self, f: impl Fn(&F) -> G + Copy) -> PlaneMap<G> {
        let m = |r: &BivFrac<F>| {
            let n = r.num().map(|c| c.map(f));
            let d = r.den().map(|c| c.map(f));
            Frac::new(n, d)
        };
        PlaneMap {
            x_image: m(&self.x_image),
            y_image: m(&self.y_image),
        }
    }

    pub fn pretty(&self, coeff_vars: &[&str]) -> String {
        let mut vars = vec!["y", "x"];
        vars.extend_from_slice(coeff_vars);
        format!("({}, {})", self.x_image.pretty(&vars), self.y_image.pretty(&vars))
    }
}

/// `f(gx, gy)` for a bivariate fraction `f`, by homogenizing in both
/// variables so that only polynomial arithmetic is needed before one final
/// reduction.
pub fn substitute<F: Field>(f: &BivFrac<F>, gx: &BivFrac<F>, gy: &BivFrac<F>) -> BivFrac<F> {
    let (n, d) = substitute_unreduced(f, gx, gy);
    Frac::new(n, d)
}

/// Numerator and denominator of `f(gx, gy)` before cancellation.
fn substitute_unreduced<F: Field>(f: &BivFrac<F>, gx: &BivFrac<F>, gy: &BivFrac<F>) -> (Biv<F>, Biv<F>) {
    let (nx, ny) = bidegree(f.num());
    let (dx, dy) = bidegree(f.den());
    let (mx, my) = (nx.max(dx), ny.max(dy));
    let powers = |p: &Biv<F>, k: usize| {
        let mut v = vec![Biv::one()];
        for i in 1..=k {
            v.push(v[i - 1].mul(p));
        }
        v
    };
    let (a, b) = (powers(gx.num(), mx), powers(gx.den(), mx));
    let (c, d) = (powers(gy.num(), my), powers(gy.den(), my));
    let eval = |p: &Biv<F>| {
        let mut acc = Biv::zero();
        for (j, row) in p.coeffs().iter().enumerate() {
            if row.is_zero() {
                continue;
            }
            let ymono = c[j].mul(&d[my - j]);
            let mut inner = Biv::zero();
            for (i, coeff) in row.coeffs().iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let xm = a[i].mul(&b[mx - i]);
                inner = inner.add(&xm.scale(&UniPoly::constant(coeff.clone())));
            }
            acc = acc.add(&inner.mul(&ymono));
        }
        acc
    };
    (eval(f.num()), eval(f.den()))
}

/// The two involutions, over Q.
pub fn involutions(k: &KernelData) -> (PlaneMap, PlaneMap) {
    // shifted sections: x A_{-1}(x), x A_1(x), y B_{-1}(y), y B_1(y)
    let am = embed_univariate(&k.x_sections[0].shifted(), false);
    let ap = embed_univariate(&k.x_sections[2].shifted(), false);
    let bm = embed_univariate(&k.y_sections[0].shifted(), true);
    let bp = embed_univariate(&k.y_sections[2].shifted(), true);
    let x = Frac::from_base(biv_x());
    let y = Frac::from_base(biv_y());
    let iota1 = PlaneMap {
        x_image: x,
        y_image: Frac::new(am, ap.mul(&biv_y())),
    };
    let iota2 = PlaneMap {
        x_image: Frac::new(bm, bp.mul(&biv_x())),
        y_image: y,
    };
    (iota1, iota2)
}

/// `iota1 o iota2`.
pub fn theta(k: &KernelData) -> PlaneMap {
    let (i1, i2) = involutions(k);
    i1.compose(&i2)
}

/// Whether `K` divides the numerator of `K o sigma` but not its
/// denominator. No gcd over `Q(t)` is needed.
pub fn preserves_kernel(k: &KernelData, sigma: &PlaneMap) -> bool {
    let kb = k.kernel.to_bpoly().expect("kernel is a polynomial");
    let s = sigma.map_coeffs(|c| RatFuncT::from_rational(c.clone()));
    let (num, den) = substitute_unreduced(&Frac::from_base(kb.clone()), &s.x_image, &s.y_image);
    num.exact_div(&kb).is_some() && den.exact_div(&kb).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    /// `theta^k = id` with `k` minimal, by an exact identity.
    Finite(usize),
    /// `theta^k != id` for every `k <= N`, each with an exact certificate.
    NoOrderUpTo(usize),
    /// `theta^k != id` for `k <= checked`; for `checked + 1` no witness was
    /// found and the exact iterate was beyond the degree cap.
    DegreeOverflow { checked: usize, degree: usize },
}

impl OrderResult {
    pub fn finite(&self) -> Option<usize> {
        match self {
            OrderResult::Finite(k) => Some(*k),
            _ => None,
        }
    }

    /// Largest `n` such that the order is known not to be below `n + 1`.
    pub fn covered(&self) -> usize {
        match self {
            OrderResult::Finite(k) => *k,
            OrderResult::NoOrderUpTo(n) => *n,
            OrderResult::DegreeOverflow { checked, .. } => *checked,
        }
    }
}

impl Serialize for OrderResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        match self {
            OrderResult::Finite(k) => m.serialize_entry("finite", k)?,
            OrderResult::NoOrderUpTo(n) => m.serialize_entry("noOrderUpTo", n)?,
            OrderResult::DegreeOverflow { checked, degree } => {
                m.serialize_entry("degreeOverflow", &serde_json::json!({ "checked": checked, "degree": degree }))?
            }
        }
        m.end()
    }
}

/// Deterministic nonzero residues for witness points.
fn witness_values(count: usize) -> Vec<Fp> {
    // splitmix64
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        let v = Fp::new(z);
        if !v.is_zero() {
            out.push(v);
        }
    }
    out
}

const WITNESS_POINTS: usize = 4;

/// The shifted sections `xA_{-1}, xA_1, yB_{-1}, yB_1` with coefficients
/// converted by `conv`.
fn shifted_sections<C: GcdDomain>(k: &KernelData, conv: impl Fn(&Rational) -> Option<C>) -> Option<[UniPoly<C>; 4]> {
    let f = |p: QPoly| -> Option<UniPoly<C>> {
        Some(UniPoly::new(p.coeffs().iter().map(&conv).collect::<Option<Vec<_>>>()?))
    };
    Some([
        f(k.x_sections[0].shifted())?,
        f(k.x_sections[2].shifted())?,
        f(k.y_sections[0].shifted())?,
        f(k.y_sections[2].shifted())?,
    ])
}

/// For each `n <= bound`, a point `P` of the plane over `F_p` with
/// `theta^n(P) != P`, every step of the orbit being defined. Evaluating step
/// by step at points where no denominator vanishes commutes with reduction,
/// so such a point proves `theta^n != id`.
fn plane_witnesses(k: &KernelData, bound: usize) -> Vec<Option<(Fp, Fp)>> {
    let mut found = vec![None; bound];
    let Some([am, ap, bm, bp]) = shifted_sections(k, Fp::from_rational) else {
        return found;
    };
    let step = |(x, y): (Fp, Fp)| -> Option<(Fp, Fp)> {
        // iota2 first, then iota1
        let d = bp.eval(&y).mul(&x);
        let x2 = bm.eval(&y).exact_div(&d)?;
        let d = ap.eval(&x2).mul(&y);
        let y2 = am.eval(&x2).exact_div(&d)?;
        Some((x2, y2))
    };
    let vals = witness_values(2 * WITNESS_POINTS);
    for start in vals.chunks(2).map(|c| (c[0], c[1])) {
        let mut pt = start;
        for slot in found.iter_mut() {
            let Some(next) = step(pt) else { break };
            pt = next;
            if pt != start && slot.is_none() {
                *slot = Some(start);
            }
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSearch {
    pub order: OrderResult,
    /// Degree of `theta^n` for the iterates composed exactly.
    pub degree_profile: Vec<usize>,
    pub certificate: String,
}

/// Searches the order of `theta` as a plane map. Iterates are composed
/// exactly while their degree stays within `max_degree`; beyond that,
/// `theta^n != id` is certified by point witnesses. An order is only
/// reported from an exact identity `theta^n = id`.
pub fn order_search_plane(k: &KernelData, bound: usize, max_degree: usize) -> PlaneSearch {
    let th = theta(k);
    let witnesses = plane_witnesses(k, bound);
    let mut cur = Some(th.clone());
    let mut profile = Vec::new();
    let mut exact_upto = 0;
    for n in 1..=bound {
        if n > 1 {
            cur = cur.filter(|c| c.degree() <= max_degree).map(|c| th.compose(&c));
        }
        if let Some(c) = &cur {
            profile.push(c.degree());
            exact_upto = n;
            if c.is_identity() {
                return PlaneSearch {
                    order: OrderResult::Finite(n),
                    degree_profile: profile,
                    certificate: format!("theta^{n} = id as a rational map over Q"),
                };
            }
        } else if witnesses[n - 1].is_none() {
            let degree = profile.last().copied().unwrap_or(0);
            return PlaneSearch {
                order: OrderResult::DegreeOverflow { checked: n - 1, degree },
                degree_profile: profile,
                certificate: format!("theta^k != id for k <= {}", n - 1),
            };
        }
    }
    let mut certificate = format!("theta^k != id for k <= {bound}: exact iterates up to k = {exact_upto}");
    if exact_upto < bound {
        let pts: Vec<String> = witnesses[exact_upto..]
            .iter()
            .flatten()
            .map(|(x, y)| format!("({}, {})", x.value(), y.value()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        certificate += &format!(", then moved points mod 2^61-1: {}", pts.join(", "));
    }
    PlaneSearch { order: OrderResult::NoOrderUpTo(bound), degree_profile: profile, certificate }
}

/// Polynomials in `x` over `Q[t]`.
pub type XtPoly = UniPoly<QPoly>;

/// `a + b w` in the ring `C[x][w]/(w^2 + beta w + alpha gamma)`, where
/// `w = alpha y` is integral.
type Integral<C> = (UniPoly<C>, UniPoly<C>);

/// An element `(a + b w)/d` of the function field of the kernel curve, with
/// `w = alpha(x) y`. Kept in lowest terms: `gcd(a, b, d) = 1` and `d`
/// normalized, so equal elements have equal fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveElement<C: GcdDomain = QPoly> {
    pub a: UniPoly<C>,
    pub b: UniPoly<C>,
    pub d: UniPoly<C>,
}

/// The function field of `alpha y^2 + beta y + gamma = 0` over the
/// fraction field of `C[x]`: `Q(t)(x)[y]/(K)` for `C = Q[t]`, and its
/// reduction at a value of `t` modulo a prime for `C = F_p`.
pub struct CurveField<C: GcdDomain = QPoly> {
    alpha: UniPoly<C>,
    beta: UniPoly<C>,
    alpha_gamma: UniPoly<C>,
}

/// Multiplies polynomials over Q(t) by one common polynomial in `t` that
/// clears all their denominators.
fn clear_t<const N: usize>(ps: [&UPoly; N]) -> [XtPoly; N] {
    let l = ps.iter().flat_map(|p| p.coeffs()).fold(QPoly::one(), |l, c| {
        let g = l.gcd(c.den());
        l.mul(&c.den().exact_div(&g).expect("gcd divides"))
    });
    ps.map(|p| p.map(|c| c.num().mul(&l.exact_div(c.den()).expect("lcm is a multiple"))))
}

/// Degree of a coefficient in the parameter it carries.
pub trait ParamDegree {
    fn param_degree(&self) -> usize;
}

impl ParamDegree for QPoly {
    fn param_degree(&self) -> usize {
        self.degree().unwrap_or(0)
    }
}

impl ParamDegree for Fp {
    fn param_degree(&self) -> usize {
        0
    }
}

impl CurveField<QPoly> {
    pub fn new(k: &KernelData) -> Self {
        let [c, b, a] = k.y_quadratic();
        let [gamma, beta, alpha] = clear_t([&c, &b, &a]);
        CurveField { alpha_gamma: alpha.mul(&gamma), alpha, beta }
    }

    /// The reduction at `t = t0` modulo `2^61 - 1`; `None` when a
    /// coefficient has no reduction or `alpha` vanishes.
    pub fn specialize(&self, t0: &Rational) -> Option<CurveField<Fp>> {
        let red = |p: &XtPoly| -> Option<UniPoly<Fp>> {
            Some(UniPoly::new(
                p.coeffs().iter().map(|c| Fp::from_rational(&c.eval(t0))).collect::<Option<Vec<_>>>()?,
            ))
        };
        let f = CurveField { alpha: red(&self.alpha)?, beta: red(&self.beta)?, alpha_gamma: red(&self.alpha_gamma)? };
        (!f.alpha.is_zero()).then_some(f)
    }

    pub fn theta_pullback(&self, k: &KernelData) -> (CurveElement, CurveElement) {
        let secs = shifted_sections(k, |c| Some(QPoly::constant(c.clone()))).expect("rational sections");
        self.theta_pullback_with(&secs).expect("theta is defined on the curve")
    }
}

impl<C: GcdDomain + ParamDegree> CurveField<C> {
    fn mul(&self, u: &Integral<C>, v: &Integral<C>) -> Integral<C> {
        // w^2 = -beta w - alpha gamma
        let bb = u.1.mul(&v.1);
        (
            u.0.mul(&v.0).sub(&self.alpha_gamma.mul(&bb)),
            u.0.mul(&v.1).add(&u.1.mul(&v.0)).sub(&self.beta.mul(&bb)),
        )
    }

    fn scale(u: &Integral<C>, c: &UniPoly<C>) -> Integral<C> {
        (u.0.mul(c), u.1.mul(c))
    }

    fn conj(&self, u: &Integral<C>) -> Integral<C> {
        (u.0.sub(&self.beta.mul(&u.1)), u.1.neg())
    }

    fn norm(&self, u: &Integral<C>) -> UniPoly<C> {
        u.0.mul(&u.0)
            .sub(&self.beta.mul(&u.0).mul(&u.1))
            .add(&self.alpha_gamma.mul(&u.1).mul(&u.1))
    }

    /// `n / m` in lowest terms; `None` when the norm of `m` vanishes.
    fn quotient(&self, n: &Integral<C>, m: &Integral<C>) -> Option<CurveElement<C>> {
        let nm = self.norm(m);
        if nm.is_zero() {
            return None;
        }
        let (a, b) = self.mul(n, &self.conj(m));
        Some(Self::reduce(a, b, nm))
    }

    fn reduce(a: UniPoly<C>, b: UniPoly<C>, d: UniPoly<C>) -> CurveElement<C> {
        let g = a.gcd(&b).gcd(&d);
        let (a, b, d) = if g.is_one() {
            (a, b, d)
        } else {
            let q = |p: &UniPoly<C>| p.exact_div(&g).expect("gcd divides");
            (q(&a), q(&b), q(&d))
        };
        let u = d.unit_part();
        let q = |p: &UniPoly<C>| p.exact_div(&u).expect("unit divides");
        CurveElement { a: q(&a), b: q(&b), d: q(&d) }
    }

    pub fn x(&self) -> CurveElement<C> {
        CurveElement { a: UniPoly::var(), b: UniPoly::zero(), d: UniPoly::one() }
    }

    pub fn y(&self) -> CurveElement<C> {
        Self::reduce(UniPoly::zero(), UniPoly::one(), self.alpha.clone())
    }

    /// `d^m h(e)` for `e = n/d`, as an integral element; `m >= deg h`.
    fn homogeneous_eval(&self, h: &UniPoly<C>, e: &CurveElement<C>, m: usize) -> Integral<C> {
        let n: Integral<C> = (e.a.clone(), e.b.clone());
        let mut npow: Integral<C> = (UniPoly::one(), UniPoly::zero());
        let mut dpow = vec![UniPoly::one()];
        for i in 1..=m {
            dpow.push(dpow[i - 1].mul(&e.d));
        }
        let mut acc: Integral<C> = (UniPoly::zero(), UniPoly::zero());
        for (i, c) in h.coeffs().iter().enumerate() {
            if i > 0 {
                npow = self.mul(&npow, &n);
            }
            if c.is_zero() {
                continue;
            }
            let k = dpow[m - i].scale(c);
            let term = Self::scale(&npow, &k);
            acc = (acc.0.add(&term.0), acc.1.add(&term.1));
        }
        acc
    }

    /// `f(u, v)` for `f = (a(x) + b(x) w)/d(x)`; `None` on a zero denominator.
    pub fn substitute(&self, f: &CurveElement<C>, u: &CurveElement<C>, v: &CurveElement<C>) -> Option<CurveElement<C>> {
        // in terms of y: f = (a + (b alpha) y)/d
        let by = f.b.mul(&self.alpha);
        let m = [&f.a, &by, &f.d].iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let ha = self.homogeneous_eval(&f.a, u, m);
        let hb = self.homogeneous_eval(&by, u, m);
        let hd = self.homogeneous_eval(&f.d, u, m);
        // the common factor u.d^m cancels; v = (v.a + v.b w) / v.d
        let hbv = self.mul(&hb, &(v.a.clone(), v.b.clone()));
        let num = Self::scale(&ha, &v.d);
        let num = (num.0.add(&hbv.0), num.1.add(&hbv.1));
        let den = Self::scale(&hd, &v.d);
        self.quotient(&num, &den)
    }

    /// `theta^* x` and `theta^* y` from the shifted sections
    /// `[xA_{-1}, xA_1, yB_{-1}, yB_1]`.
    fn theta_pullback_with(&self, secs: &[UniPoly<C>; 4]) -> Option<(CurveElement<C>, CurveElement<C>)> {
        let [am, ap, bm, bp] = secs;
        let y = self.y();
        let x = self.x();
        // x' = yB_{-1}(y) / (yB_1(y) x)
        let m = bm.deg().max(bp.deg()).max(0) as usize;
        let num = self.homogeneous_eval(bm, &y, m);
        let den = self.mul(&self.homogeneous_eval(bp, &y, m), &(x.a, x.b));
        let xp = self.quotient(&num, &den)?;
        // y' = x'A_{-1}(x') / (x'A_1(x') y), with y = w/alpha
        let m = am.deg().max(ap.deg()).max(0) as usize;
        let num = Self::scale(&self.homogeneous_eval(am, &xp, m), &self.alpha);
        let w: Integral<C> = (UniPoly::zero(), UniPoly::one());
        let den = self.mul(&self.homogeneous_eval(ap, &xp, m), &w);
        let yp = self.quotient(&num, &den)?;
        Some((xp, yp))
    }
}

/// Degree measure of a function-field element: the largest degree in `x`
/// or in the parameter among its three parts.
pub fn element_degree<C: GcdDomain + ParamDegree>(e: &CurveElement<C>) -> usize {
    [&e.a, &e.b, &e.d]
        .iter()
        .map(|p| {
            let pd = p.coeffs().iter().map(|c| c.param_degree()).max().unwrap_or(0);
            p.degree().unwrap_or(0).max(pd)
        })
        .max()
        .unwrap_or(0)
}

/// Values of `t` tried for the reduction of the curve.
const SPECIALIZATION_POINTS: [i64; 4] = [1_000_003, 7_919, 104_729, 15_485_863];

/// Iterates `theta` on the reduction of the function field at `t = t0`
/// modulo `2^61 - 1`. Every norm used as a divisor is nonzero, so the
/// reduction is a ring homomorphism on all elements met and a reduced
/// iterate different from `(x, y)` proves `theta^n != id` on the curve.
/// Returns `t0`, and for each `n`, whether `theta^n` moved `(x, y)` and the
/// degree in `x` of the reduced iterate.
fn curve_witnesses(k: &KernelData, field: &CurveField, bound: usize) -> Option<(i64, Vec<(bool, usize)>)> {
    'points: for t0 in SPECIALIZATION_POINTS {
        let Some(sp) = field.specialize(&Rational::from_integer(t0.into())) else {
            continue;
        };
        let secs = shifted_sections(k, Fp::from_rational)?;
        let Some((u, v)) = sp.theta_pullback_with(&secs) else {
            continue;
        };
        let (x, y) = (sp.x(), sp.y());
        let (mut xn, mut yn) = (u.clone(), v.clone());
        let mut out = Vec::with_capacity(bound);
        for n in 1..=bound {
            if n > 1 {
                let (Some(nx), Some(ny)) = (sp.substitute(&u, &xn, &yn), sp.substitute(&v, &xn, &yn)) else {
                    continue 'points;
                };
                (xn, yn) = (nx, ny);
            }
            out.push((xn != x || yn != y, element_degree(&xn).max(element_degree(&yn))));
        }
        return Some((t0, out));
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSearch {
    pub order: OrderResult,
    /// Degree in `x` of `(theta^n)^* x, (theta^n)^* y` on the reduced
    /// curve. An automorphism preserves degrees, so on a genus-one curve
    /// this stays constant.
    pub degree_profile: Vec<usize>,
    pub certificate: String,
}

/// Searches the order of `theta` as an automorphism of the kernel curve.
/// `theta^n != id` is certified on a reduction of the function field; an
/// order is only reported once `(theta^n)^* x = x` and `(theta^n)^* y = y`
/// hold exactly in `Q(t)(x)[y]/(K)`. Exact iterates are computed on demand
/// and abandoned once their degree exceeds `max_degree`.
pub fn order_search_curve(k: &KernelData, bound: usize, max_degree: usize) -> CurveSearch {
    let field = CurveField::new(k);
    let reduced = curve_witnesses(k, &field, bound);
    let profile: Vec<usize> = reduced.as_ref().map(|(_, r)| r.iter().map(|e| e.1).collect()).unwrap_or_default();
    let moved = |n: usize| reduced.as_ref().is_some_and(|(_, r)| r[n - 1].0);
    let (u, v) = field.theta_pullback(k);
    let (x, y) = (field.x(), field.y());
    // exact iterate (theta^m)^* x, (theta^m)^* y, kept while small
    let mut exact: Option<(usize, CurveElement, CurveElement)> = None;
    let mut exact_upto = 0;
    for n in 1..=bound {
        if moved(n) {
            continue;
        }
        // no witness: decide exactly
        let (mut m, mut xn, mut yn) = exact.take().unwrap_or((1, u.clone(), v.clone()));
        while m < n {
            let d = element_degree(&xn).max(element_degree(&yn));
            if d > max_degree {
                return CurveSearch {
                    order: OrderResult::DegreeOverflow { checked: n - 1, degree: d },
                    degree_profile: profile,
                    certificate: format!("theta^k != id for k <= {}", n - 1),
                };
            }
            // (theta^{m+1})^* x = u(x_m, y_m)
            let nx = field.substitute(&u, &xn, &yn).expect("theta is defined on the curve");
            let ny = field.substitute(&v, &xn, &yn).expect("theta is defined on the curve");
            (m, xn, yn) = (m + 1, nx, ny);
        }
        if xn == x && yn == y {
            return CurveSearch {
                order: OrderResult::Finite(n),
                degree_profile: profile,
                certificate: format!("(theta^{n})^* fixes x and y in Q(t)(x)[y]/(K)"),
            };
        }
        exact_upto = n;
        exact = Some((m, xn, yn));
    }
    let certificate = match &reduced {
        Some((t0, _)) => format!(
            "theta^k != id for k <= {bound}: reduction at t = {t0} mod 2^61-1{}",
            if exact_upto > 0 { format!(", exact iterates where it was inconclusive (up to k = {exact_upto})") } else { String::new() }
        ),
        None => format!("theta^k != id for k <= {bound}: exact iterates"),
    };
    CurveSearch { order: OrderResult::NoOrderUpTo(bound), degree_profile: profile, certificate }
}

/// Plane and curve results are compatible: a finite curve order divides a
/// finite plane order, and neither search finds an order the other
/// excluded.
pub fn searches_agree(plane: &OrderResult, curve: &OrderResult) -> bool {
    use OrderResult::*;
    match (plane, curve) {
        (Finite(p), Finite(c)) => p % c == 0,
        (Finite(p), other) => other.covered() < *p,
        (other, Finite(c)) => other.covered() < *c,
        _ => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupReport {
    pub iota1: String,
    pub iota2: String,
    pub theta: String,
    pub order_plane: OrderResult,
    pub order_curve: OrderResult,
    /// Degrees of the exactly composed plane iterates.
    pub degree_profile: Vec<usize>,
    /// Order of the dihedral group generated by the involutions, when finite.
    pub group_order: Option<usize>,
    pub verdict_infinite_conjectural: bool,
    pub plane_certificate: String,
    pub certificate: String,
    /// Plane and curve searches disagree (a finite order on one level only).
    pub discrepancy: bool,
}

/// Default bound on the order.
pub const DEFAULT_ORDER_BOUND: usize = 12;
/// Default cap on the degree of exactly composed plane iterates.
pub const DEFAULT_MAX_DEGREE: usize = 20;
/// Cap on the degree of exact curve-level iterates.
pub const CURVE_MAX_DEGREE: usize = 120;

pub fn group_report(k: &KernelData, bound: usize, max_degree: usize) -> GroupReport {
    let (i1, i2) = involutions(k);
    let th = i1.compose(&i2);
    let plane = order_search_plane(k, bound, max_degree);
    let curve = order_search_curve(k, bound, CURVE_MAX_DEGREE.max(max_degree));
    GroupReport {
        iota1: i1.pretty(&[]),
        iota2: i2.pretty(&[]),
        theta: th.pretty(&[]),
        discrepancy: !searches_agree(&plane.order, &curve.order)
            || matches!(
                (plane.order, curve.order),
                (OrderResult::Finite(_), OrderResult::NoOrderUpTo(_)) | (OrderResult::NoOrderUpTo(_), OrderResult::Finite(_))
            ),
        order_plane: plane.order,
        order_curve: curve.order,
        degree_profile: plane.degree_profile,
        group_order: curve.order.finite().map(|n| 2 * n),
        verdict_infinite_conjectural: curve.order.finite().is_none(),
        plane_certificate: plane.certificate,
        certificate: curve.certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_kernel, WeightedModel};

    #[test]
    fn simple_walk_maps() {
        let k = build_kernel(&WeightedModel::simple());
        let (i1, i2) = involutions(&k);
        assert_eq!(i1.pretty(&[]), "(x, 1/y)");
        assert_eq!(i2.pretty(&[]), "(1/x, y)");
        assert_eq!(theta(&k).pretty(&[]), "(1/x, 1/y)");
        assert!(i1.compose(&i1).is_identity());
        assert!(preserves_kernel(&k, &theta(&k)));
    }

    #[test]
    fn orders_of_named_models() {
        for (m, n) in [(WeightedModel::simple(), 2), (WeightedModel::kreweras(), 3), (WeightedModel::king(), 2), (WeightedModel::gessel(), 4)] {
            let k = build_kernel(&m);
            assert_eq!(order_search_plane(&k, 12, DEFAULT_MAX_DEGREE).order, OrderResult::Finite(n), "{m}");
            assert_eq!(order_search_curve(&k, 12, CURVE_MAX_DEGREE).order, OrderResult::Finite(n), "{m}");
        }
    }

    #[test]
    fn reduction_commutes_with_iteration() {
        // reduce the exact iterate at t = t0 and compare with the iterate
        // computed on the reduced curve
        let m = WeightedModel::unweighted(&[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]).unwrap();
        let k = build_kernel(&m);
        let field = CurveField::new(&k);
        let t0 = Rational::from_integer(7919.into());
        let sp = field.specialize(&t0).unwrap();
        let secs = shifted_sections(&k, Fp::from_rational).unwrap();
        let (ur, vr) = sp.theta_pullback_with(&secs).unwrap();
        let (u, v) = field.theta_pullback(&k);
        let (x2, y2) = (field.substitute(&u, &u, &v).unwrap(), field.substitute(&v, &u, &v).unwrap());
        let (x2r, y2r) = (sp.substitute(&ur, &ur, &vr).unwrap(), sp.substitute(&vr, &ur, &vr).unwrap());
        let red = |e: &CurveElement| {
            let r = |p: &XtPoly| UniPoly::new(p.coeffs().iter().map(|c| Fp::from_rational(&c.eval(&t0)).unwrap()).collect());
            CurveField::<Fp>::reduce(r(&e.a), r(&e.b), r(&e.d))
        };
        assert_eq!(red(&x2), x2r);
        assert_eq!(red(&y2), y2r);
        assert_ne!(x2r, sp.x());
    }

    #[test]
    fn infinite_group_certificates() {
        let m = WeightedModel::unweighted(&[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]).unwrap();
        let k = build_kernel(&m);
        let plane = order_search_plane(&k, 12, DEFAULT_MAX_DEGREE);
        let curve = order_search_curve(&k, 12, CURVE_MAX_DEGREE);
        assert_eq!(plane.order, OrderResult::NoOrderUpTo(12));
        assert_eq!(curve.order, OrderResult::NoOrderUpTo(12));
        // degrees of the exact plane iterates grow
        assert!(plane.degree_profile.windows(2).all(|w| w[0] < w[1]));
        // an automorphism of the curve preserves the degree of x
        assert!(curve.degree_profile.iter().all(|&d| d == curve.degree_profile[0]));
    }

    #[test]
    fn kreweras_involution_preserves_kernel() {
        let k = build_kernel(&WeightedModel::kreweras());
        let (i1, i2) = involutions(&k);
        // the product of the two y-roots is A_{-1}(x)/A_1(x) = 1/x
        assert_eq!(i1.pretty(&[]), "(x, 1/(x*y))");
        assert!(preserves_kernel(&k, &i1));
        assert!(preserves_kernel(&k, &i2));
        let th = i1.compose(&i2);
        assert!(th.compose(&i2.compose(&i1)).is_identity());
    }
}
