//! Walk counts by dynamic programming, the sections of the counting series,
//! a truncated check of the kernel equation, and Hermite-Pade guessing.
//!
//! Weights are cleared to integers first: with `d_ij = c_ij / D` the
//! recurrence runs on `p_n = D^n q_n`, which is exact and avoids a gcd per
//! cell.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linsolve::{rank_mod, solve_rational, LinearSolution};
use crate::algebra::{format_rational, Field, Fp, Pretty, QPoly, Rational, Ring};
use crate::model::{build_kernel, KernelData, WeightedModel};

/// Extra equations a guessed relation must satisfy beyond those it was fitted on.
pub const OVERDETERMINATION: usize = 20;

/// Integer weights `c_ij` and the common denominator `D`.
fn integer_weights(m: &WeightedModel) -> (Vec<(i64, i64, BigInt)>, BigInt) {
    let d = m
        .steps()
        .fold(BigInt::one(), |l, (_, w)| num_integer::Integer::lcm(&l, w.denom()));
    let c = m
        .steps()
        .map(|(s, w)| (s.dx as i64, s.dy as i64, w.numer() * (&d / w.denom())))
        .collect();
    (c, d)
}

/// Runs the recurrence on `p_n = D^n q_n` and hands each layer
/// `p[i][j]`, `0 <= i, j <= n`, to `visit`.
fn run_layers(m: &WeightedModel, order: usize, mut visit: impl FnMut(usize, &[Vec<BigInt>], &BigInt)) {
    let (c, d) = integer_weights(m);
    let mut layer = vec![vec![BigInt::one()]];
    visit(0, &layer, &d);
    for n in 1..=order {
        let prev = &layer;
        let next: Vec<Vec<BigInt>> = (0..=n)
            .into_par_iter()
            .map(|a| {
                (0..=n)
                    .map(|b| {
                        let mut acc = BigInt::zero();
                        for (k, l, w) in &c {
                            let (i, j) = (a as i64 - k, b as i64 - l);
                            if i < 0 || j < 0 || i as usize >= n || j as usize >= n {
                                continue;
                            }
                            let v = &prev[i as usize][j as usize];
                            if v.is_zero() {
                                continue;
                            }
                            if w.is_one() {
                                acc += v;
                            } else {
                                acc += v * w;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        layer = next;
        visit(n, &layer, &d);
    }
}

/// `q[i][j][n]` for `0 <= i, j <= n <= order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTable {
    layers: Vec<Vec<Vec<Rational>>>,
}

impl WalkTable {
    pub fn order(&self) -> usize {
        self.layers.len() - 1
    }

    /// Weighted number of `n`-step quadrant walks from the origin to `(i, j)`.
    pub fn q(&self, i: usize, j: usize, n: usize) -> Rational {
        assert!(n <= self.order(), "table only reaches n = {}", self.order());
        self.layers[n]
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Q(i, j; t)` modulo `t^(order + 1)`.
    pub fn series_at(&self, i: usize, j: usize) -> TruncSeries {
        TruncSeries::new((0..=self.order()).map(|n| self.q(i, j, n)).collect())
    }
}

fn scaled(p: &BigInt, dn: &BigInt) -> Rational {
    if dn.is_one() {
        Rational::from_integer(p.clone())
    } else {
        Rational::new(p.clone(), dn.clone())
    }
}

pub fn enumerate(m: &WeightedModel, order: usize) -> WalkTable {
    let mut layers = Vec::with_capacity(order + 1);
    let mut dn = BigInt::one();
    run_layers(m, order, |n, layer, d| {
        if n > 0 {
            dn *= d;
        }
        layers.push(layer.iter().map(|row| row.iter().map(|p| scaled(p, &dn)).collect()).collect());
    });
    WalkTable { layers }
}

/// `Q(0,0;t)` and `Q(1,1;t)` modulo `t^(order + 1)`, keeping one layer at a time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingSeries {
    pub q00: TruncSeries,
    pub q11: TruncSeries,
}

pub fn counting_series(m: &WeightedModel, order: usize) -> CountingSeries {
    let mut q00 = Vec::with_capacity(order + 1);
    let mut q11 = Vec::with_capacity(order + 1);
    let mut dn = BigInt::one();
    run_layers(m, order, |n, layer, d| {
        if n > 0 {
            dn *= d;
        }
        let total: BigInt = layer.iter().flatten().sum();
        q00.push(scaled(&layer[0][0], &dn));
        q11.push(scaled(&total, &dn));
    });
    CountingSeries {
        q00: TruncSeries::new(q00),
        q11: TruncSeries::new(q11),
    }
}

/// A power series in `t` known modulo `t^order`, `order = coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl Serialize for TruncSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl TruncSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries::new(vec![Rational::zero(); order])
    }

    /// A polynomial read modulo `t^order`.
    pub fn from_poly(p: &QPoly, order: usize) -> Self {
        TruncSeries::new((0..order).map(|n| p.coeff(n)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        assert!(n < self.order(), "coefficient {n} beyond the truncation order {}", self.order());
        &self.coeffs[n]
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries::new(self.coeffs[..order.min(self.order())].to_vec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries::new((0..n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries::new((0..n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        if n == 0 {
            return TruncSeries::zero(0);
        }
        let p = QPoly::new(self.coeffs[..n].to_vec()).mul(&QPoly::new(o.coeffs[..n].to_vec()));
        TruncSeries::from_poly(&p, n)
    }

    /// Product with a polynomial; the order is unchanged.
    pub fn mul_poly(&self, p: &QPoly) -> Self {
        if p.is_zero() || self.order() == 0 {
            return TruncSeries::zero(self.order());
        }
        TruncSeries::from_poly(&QPoly::new(self.coeffs.clone()).mul(p), self.order())
    }

    /// `t d/dt`.
    pub fn theta(&self) -> Self {
        TruncSeries::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(n.into()))
                .collect(),
        )
    }
}

/// A polynomial in one catalytic variable with series coefficients.
pub type SeriesPoly = Vec<TruncSeries>;

fn series_poly_mul(k: &[QPoly], q: &SeriesPoly, order: usize) -> SeriesPoly {
    let len = if q.is_empty() { 0 } else { k.len() + q.len() - 1 };
    let mut out = vec![TruncSeries::zero(order); len];
    for (i, ki) in k.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            out[i + j] = out[i + j].add(&qj.mul_poly(ki));
        }
    }
    out
}

/// Coefficients in `t` of a kernel coefficient, which is a polynomial.
fn t_poly(c: &crate::algebra::RatFuncT) -> QPoly {
    c.as_base().expect("kernel coefficients are polynomials in t").clone()
}

/// `Q(x,0;t)`, `Q(0,y;t)`, `Q(0,0;t)`, `F1(x;t)` and `F2(y;t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Sections {
    pub q_x0: SeriesPoly,
    pub q_0y: SeriesPoly,
    pub q_00: TruncSeries,
    /// `K(x,0) Q(x,0) + t eps Q(0,0)`.
    pub f1: SeriesPoly,
    /// `K(0,y) Q(0,y)`.
    pub f2: SeriesPoly,
}

/// The sections modulo `t^order`; needs `order <= table.order() + 1`.
pub fn sections(table: &WalkTable, k: &KernelData, order: usize) -> Sections {
    sections_with_epsilon(table, k, order, &k.epsilon_weight)
}

fn sections_with_epsilon(table: &WalkTable, k: &KernelData, order: usize, eps: &Rational) -> Sections {
    assert!(order <= table.order() + 1, "table too short for order {order}");
    let width = order.saturating_sub(1) + 1;
    let q_x0: SeriesPoly = (0..width).map(|i| table.series_at(i, 0).truncate(order)).collect();
    let q_0y: SeriesPoly = (0..width).map(|j| table.series_at(0, j).truncate(order)).collect();
    let q_00 = table.series_at(0, 0).truncate(order);
    let kx: Vec<QPoly> = k.kernel_at_y0().coeffs().iter().map(t_poly).collect();
    let ky: Vec<QPoly> = k.kernel_at_x0().coeffs().iter().map(t_poly).collect();
    let mut f1 = series_poly_mul(&kx, &q_x0, order);
    let t_eps = QPoly::monomial(eps.clone(), 1);
    if f1.is_empty() {
        f1.push(TruncSeries::zero(order));
    }
    f1[0] = f1[0].add(&q_00.mul_poly(&t_eps));
    let f2 = series_poly_mul(&ky, &q_0y, order);
    Sections {
        q_x0,
        q_0y,
        q_00,
        f1,
        f2,
    }
}

/// A nonzero coefficient of `K Q - xy - F1 - F2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResidualTerm {
    pub x_exp: usize,
    pub y_exp: usize,
    pub t_exp: usize,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FeqResidual {
    pub order: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    /// First nonzero coefficient by `(t, x, y)` exponents; `None` when the
    /// identity holds modulo `t^order`.
    pub first_nonzero: Option<ResidualTerm>,
}

impl FeqResidual {
    pub fn holds(&self) -> bool {
        self.first_nonzero.is_none()
    }
}

/// `K Q - xy - F1 - F2` modulo `t^order`.
pub fn verify_feq(m: &WeightedModel, order: usize) -> FeqResidual {
    let k = build_kernel(m);
    let eps = k.epsilon_weight.clone();
    verify_feq_with_epsilon(m, order, &eps)
}

/// Same, with the constant of the `t eps Q(0,0)` term chosen by the caller.
pub fn verify_feq_with_epsilon(m: &WeightedModel, order: usize, eps: &Rational) -> FeqResidual {
    assert!(order >= 1, "order must be positive");
    let k = build_kernel(m);
    let table = enumerate(m, order - 1);
    let s = sections_with_epsilon(&table, &k, order, eps);
    let q = |i: i64, j: i64| -> Option<TruncSeries> {
        (i >= 0 && j >= 0 && (i as usize) < order && (j as usize) < order)
            .then(|| table.series_at(i as usize, j as usize).truncate(order))
    };
    let kernel: Vec<((i32, i32), QPoly)> = k.kernel.terms().map(|(&e, c)| (e, t_poly(c))).collect();
    let side = order + 2;
    let mut first: Option<ResidualTerm> = None;
    for a in 0..side {
        for b in 0..side {
            let mut r = TruncSeries::zero(order);
            for ((i, j), c) in &kernel {
                if let Some(qs) = q(a as i64 - *i as i64, b as i64 - *j as i64) {
                    r = r.add(&qs.mul_poly(c));
                }
            }
            if a == 1 && b == 1 {
                r = r.sub(&TruncSeries::from_poly(&QPoly::one(), order));
            }
            if b == 0 {
                if let Some(f) = s.f1.get(a) {
                    r = r.sub(f);
                }
            }
            if a == 0 {
                if let Some(f) = s.f2.get(b) {
                    r = r.sub(f);
                }
            }
            if let Some(n) = r.coeffs().iter().position(|c| !c.is_zero()) {
                let better = first
                    .as_ref()
                    .is_none_or(|f| (n, a, b) < (f.t_exp, f.x_exp, f.y_exp));
                if better {
                    first = Some(ResidualTerm {
                        x_exp: a,
                        y_exp: b,
                        t_exp: n,
                        value: r.coeffs()[n].clone(),
                    });
                }
            }
        }
    }
    FeqResidual {
        order,
        epsilon: eps.clone(),
        first_nonzero: first,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GuessKind {
    LinearOde,
    AlgebraicEquation,
    NoneFound,
}

/// `relation[k]` is the polynomial in `t` multiplying `theta^k` (for an ODE
/// in `theta = t d/dt`) or `Y^k` (for an algebraic equation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessReport {
    pub kind: GuessKind,
    pub relation: Vec<QPoly>,
    /// The relation holds modulo `t^verified_to_order`. For `NoneFound` this
    /// is the number of terms that rule out every relation in the window,
    /// or zero when no such certificate was obtained.
    pub verified_to_order: usize,
    pub fitted_terms: usize,
}

impl Serialize for GuessReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rel: Vec<Vec<String>> = self
            .relation
            .iter()
            .map(|p| p.coeffs().iter().map(format_rational).collect())
            .collect();
        let mut st = s.serialize_struct("GuessReport", 5)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("relation", &rel)?;
        st.serialize_field("pretty", &self.pretty())?;
        st.serialize_field("verifiedToOrder", &self.verified_to_order)?;
        st.serialize_field("fittedTerms", &self.fitted_terms)?;
        st.end()
    }
}

impl GuessReport {
    pub fn pretty(&self) -> String {
        let var = match self.kind {
            GuessKind::LinearOde => "theta",
            GuessKind::AlgebraicEquation => "Y",
            GuessKind::NoneFound => return "none".into(),
        };
        let parts: Vec<String> = self
            .relation
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| match k {
                0 => format!("({})", p.pretty(&["t"])),
                1 => format!("({})*{var}", p.pretty(&["t"])),
                _ => format!("({})*{var}^{k}", p.pretty(&["t"])),
            })
            .collect();
        parts.join(" + ")
    }

    fn none(certified: usize, fitted: usize) -> Self {
        GuessReport {
            kind: GuessKind::NoneFound,
            relation: vec![],
            verified_to_order: certified,
            fitted_terms: fitted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GuessError {
    #[error("the window needs at least {need} terms, the series has {have}")]
    TooFewTerms { need: usize, have: usize },
}

/// One unknown polynomial coefficient `t^i` attached to a base series.
/// The column at row `n` is `base[n - i]`.
fn column<T: Clone>(base: &[T], i: usize, rows: usize, zero: &T) -> Vec<T> {
    (0..rows).map(|n| if n >= i { base[n - i].clone() } else { zero.clone() }).collect()
}

fn reduce_all(s: &[Rational]) -> Option<Vec<Fp>> {
    s.iter().map(Fp::from_rational).collect()
}

/// Rank modulo a prime of the matrix whose columns are `t^i b` for each
/// base series `b` and `i <= degree`, on the first `rows` coefficients.
fn window_rank(bases: &[Vec<Fp>], degree: usize, rows: usize) -> usize {
    let cols: Vec<Vec<Fp>> = bases
        .iter()
        .flat_map(|b| (0..=degree).map(move |i| column(b, i, rows, &Fp::zero())))
        .collect();
    let m: Vec<Vec<u64>> = (0..rows).map(|r| cols.iter().map(|c| c[r].value()).collect()).collect();
    rank_mod(m)
}

/// Kernel vectors of the exact system on the first `rows` coefficients.
fn window_kernel(bases: &[&[Rational]], degree: usize, rows: usize) -> Vec<Vec<Rational>> {
    let zero = &Rational::zero();
    let cols: Vec<Vec<Rational>> = bases
        .iter()
        .flat_map(|b| (0..=degree).map(move |i| column(b, i, rows, zero)))
        .collect();
    let m: Vec<Vec<Rational>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    match solve_rational(&m, &vec![Rational::zero(); rows]) {
        LinearSolution::Solved { kernel, .. } => kernel,
        LinearSolution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    }
}

/// Splits a kernel vector into one polynomial per base series, dropping
/// trailing zero polynomials.
fn split(v: &[Rational], degree: usize) -> Vec<QPoly> {
    let mut polys: Vec<QPoly> = v.chunks(degree + 1).map(|c| QPoly::new(c.to_vec())).collect();
    while polys.last().is_some_and(|p| p.is_zero()) {
        polys.pop();
    }
    polys
}

/// Integer coefficients with content one and a positive leading coefficient
/// in the last polynomial.
fn content_normalize(polys: &mut [QPoly]) {
    let all = || polys.iter().flat_map(|p| p.coeffs());
    let l = all().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let g = all().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, &(c.numer() * (&l / c.denom()))));
    let sign = polys
        .last()
        .and_then(|p| p.leading())
        .is_some_and(|c| c.is_negative());
    let mut f = Rational::new(l, g);
    if sign {
        f = -f;
    }
    for p in polys.iter_mut() {
        *p = p.scale(&f);
    }
}

/// `sum_k p_k theta^k s`.
fn apply_operator(ops: &[QPoly], s: &TruncSeries) -> TruncSeries {
    let mut acc = TruncSeries::zero(s.order());
    let mut d = s.clone();
    for p in ops {
        acc = acc.add(&d.mul_poly(p));
        d = d.theta();
    }
    acc
}

/// `sum_k p_k s^k`.
fn apply_polynomial(polys: &[QPoly], powers: &[TruncSeries]) -> TruncSeries {
    let order = powers[0].order();
    polys
        .iter()
        .zip(powers)
        .fold(TruncSeries::zero(order), |acc, (p, sk)| acc.add(&sk.mul_poly(p)))
}

/// Searches for `sum_{k <= r} p_k(t) theta^k s = 0` with `deg p_k <= d`,
/// smallest order first, then smallest degree. Each window is fitted on all
/// but the last [`OVERDETERMINATION`] coefficients and checked on all of them.
pub fn guess_ode(s: &TruncSeries, max_order: usize, max_degree: usize) -> Result<GuessReport, GuessError> {
    let n = s.order();
    let need = (max_order + 1) * (max_degree + 1) + OVERDETERMINATION;
    if n < need {
        return Err(GuessError::TooFewTerms { need, have: n });
    }
    let fit = n - OVERDETERMINATION;
    // exact derivatives theta^k s
    let mut thetas = vec![s.clone()];
    for k in 1..=max_order {
        let next = thetas[k - 1].theta();
        thetas.push(next);
    }
    let images: Option<Vec<Vec<Fp>>> = thetas.iter().map(|d| reduce_all(d.coeffs())).collect();
    if let Some(im) = &images {
        let u = (max_order + 1) * (max_degree + 1);
        if window_rank(im, max_degree, n) == u {
            return Ok(GuessReport::none(n, fit));
        }
    }
    for r in 1..=max_order {
        for d in 0..=max_degree {
            let u = (r + 1) * (d + 1);
            if let Some(im) = &images {
                if window_rank(&im[..=r], d, fit) == u {
                    continue;
                }
            }
            let bases: Vec<&[Rational]> = thetas[..=r].iter().map(|t| t.coeffs()).collect();
            for v in window_kernel(&bases, d, fit) {
                let mut ops = split(&v, d);
                if ops.len() < 2 {
                    continue;
                }
                if apply_operator(&ops, s).is_zero() {
                    let lead = ops.last().and_then(|p| p.leading()).expect("nonzero").inv();
                    for p in ops.iter_mut() {
                        *p = p.scale(&lead);
                    }
                    return Ok(GuessReport {
                        kind: GuessKind::LinearOde,
                        relation: ops,
                        verified_to_order: n,
                        fitted_terms: fit,
                    });
                }
            }
        }
    }
    Ok(GuessReport::none(0, fit))
}

/// Searches for `P(t, Y) = sum_{k <= dy} p_k(t) Y^k` with `deg p_k <= dt`
/// and `P(t, s) = 0`, smallest `Y`-degree first. Fitting and checking as
/// in [`guess_ode`].
pub fn guess_algebraic(s: &TruncSeries, max_y_degree: usize, max_t_degree: usize) -> Result<GuessReport, GuessError> {
    let n = s.order();
    let need = (max_y_degree + 1) * (max_t_degree + 1) + OVERDETERMINATION;
    if n < need {
        return Err(GuessError::TooFewTerms { need, have: n });
    }
    let fit = n - OVERDETERMINATION;
    let one = TruncSeries::from_poly(&QPoly::one(), n);
    let images: Option<Vec<Vec<Fp>>> = reduce_all(s.coeffs()).map(|sp| {
        let mut pw = vec![reduce_all(one.coeffs()).expect("integers")];
        for k in 1..=max_y_degree {
            let prev = &pw[k - 1];
            let next: Vec<Fp> = (0..n)
                .map(|i| (0..=i).fold(Fp::zero(), |acc, j| acc.add(&prev[j].mul(&sp[i - j]))))
                .collect();
            pw.push(next);
        }
        pw
    });
    if let Some(im) = &images {
        let u = (max_y_degree + 1) * (max_t_degree + 1);
        if window_rank(im, max_t_degree, n) == u {
            return Ok(GuessReport::none(n, fit));
        }
    }
    let mut powers = vec![one];
    for dy in 1..=max_y_degree {
        for dt in 0..=max_t_degree {
            let u = (dy + 1) * (dt + 1);
            if let Some(im) = &images {
                if window_rank(&im[..=dy], dt, fit) == u {
                    continue;
                }
            }
            while powers.len() <= dy {
                let next = powers[powers.len() - 1].mul(s);
                powers.push(next);
            }
            let bases: Vec<&[Rational]> = powers[..=dy].iter().map(|p| p.coeffs()).collect();
            for v in window_kernel(&bases, dt, fit) {
                let mut polys = split(&v, dt);
                if polys.len() < 2 {
                    continue;
                }
                if apply_polynomial(&polys, &powers).is_zero() {
                    content_normalize(&mut polys);
                    return Ok(GuessReport {
                        kind: GuessKind::AlgebraicEquation,
                        relation: polys,
                        verified_to_order: n,
                        fitted_terms: fit,
                    });
                }
            }
        }
    }
    Ok(GuessReport::none(0, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    /// Every sequence of `n` steps, kept when it stays in the quadrant.
    fn brute_force(m: &WeightedModel, n: usize) -> std::collections::BTreeMap<(i64, i64), Rational> {
        let steps: Vec<(i64, i64, Rational)> = m.steps().map(|(s, w)| (s.dx as i64, s.dy as i64, w.clone())).collect();
        let mut out = std::collections::BTreeMap::new();
        let mut stack = vec![(0usize, 0i64, 0i64, Rational::one())];
        while let Some((len, x, y, w)) = stack.pop() {
            if len == n {
                *out.entry((x, y)).or_insert_with(Rational::zero) += w;
                continue;
            }
            for (dx, dy, c) in &steps {
                let (a, b) = (x + dx, y + dy);
                if a >= 0 && b >= 0 {
                    stack.push((len + 1, a, b, &w * c));
                }
            }
        }
        out
    }

    #[test]
    fn small_counts() {
        let t = enumerate(&WeightedModel::simple(), 3);
        assert_eq!(t.q(0, 0, 0), int(1));
        assert_eq!(t.q(0, 0, 2), int(2));
        assert_eq!(t.q(3, 3, 3), int(0));
        assert_eq!(enumerate(&WeightedModel::kreweras(), 3).q(0, 0, 3), int(2));
    }

    #[test]
    fn table_matches_path_enumeration() {
        let weighted = WeightedModel::new([((-1, -1), rat(3, 1)), ((1, 0), rat(1, 2)), ((0, 1), rat(-2, 3)), ((1, 1), rat(5, 7))]).unwrap();
        for m in [WeightedModel::kreweras(), WeightedModel::king(), WeightedModel::gessel(), weighted] {
            let t = enumerate(&m, 7);
            for n in 0..=7 {
                let paths = brute_force(&m, n);
                for i in 0..=n {
                    for j in 0..=n {
                        let want = paths.get(&(i as i64, j as i64)).cloned().unwrap_or_else(Rational::zero);
                        assert_eq!(t.q(i, j, n), want, "{m} at ({i},{j}) n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn streaming_series_match_the_table() {
        let m = WeightedModel::new([((-1, 0), rat(1, 3)), ((1, 1), rat(2, 1)), ((0, -1), rat(1, 1))]).unwrap();
        let t = enumerate(&m, 10);
        let s = counting_series(&m, 10);
        for n in 0..=10 {
            assert_eq!(s.q00.coeff(n), &t.q(0, 0, n));
            let total = (0..=n).flat_map(|i| (0..=n).map(move |j| (i, j))).fold(Rational::zero(), |a, (i, j)| a + t.q(i, j, n));
            assert_eq!(s.q11.coeff(n), &total);
        }
    }

    #[test]
    fn kernel_equation_holds() {
        for m in [WeightedModel::simple(), WeightedModel::kreweras(), WeightedModel::king()] {
            assert!(verify_feq(&m, 20).holds(), "{m}");
        }
    }

    #[test]
    fn epsilon_is_the_southwest_weight() {
        let m = WeightedModel::new([((-1, -1), rat(3, 1)), ((1, 0), rat(1, 1)), ((0, 1), rat(1, 1)), ((1, 1), rat(1, 2))]).unwrap();
        assert!(verify_feq(&m, 10).holds());
        let wrong = verify_feq_with_epsilon(&m, 10, &int(1));
        let term = wrong.first_nonzero.expect("eps = 1 breaks the identity");
        assert_eq!((term.x_exp, term.y_exp), (0, 0));
    }

    #[test]
    fn sections_without_southwest_step() {
        let m = WeightedModel::simple();
        let k = build_kernel(&m);
        let t = enumerate(&m, 6);
        let s = sections(&t, &k, 7);
        assert_eq!(s.q_00.coeff(0), &int(1));
        // F1 = K(x,0) Q(x,0) = -t x Q(x,0), and q(0,0,2) = 2
        assert!(s.f1[0].is_zero());
        assert_eq!(s.f1[1].coeff(1), &int(-1));
        assert_eq!(s.f1[1].coeff(3), &int(-2));
    }

    #[test]
    fn geometric_series_ode() {
        let s = TruncSeries::new(vec![int(1); 60]);
        let g = guess_ode(&s, 2, 3).unwrap();
        assert_eq!(g.kind, GuessKind::LinearOde);
        assert_eq!(g.relation.len(), 2);
        assert!(apply_operator(&g.relation, &s).is_zero());
        // (1 - t) theta - t, scaled to a monic leading coefficient
        assert_eq!(g.relation, vec![QPoly::from_i64s(&[0, 1]), QPoly::from_i64s(&[-1, 1])]);
    }

    #[test]
    fn catalan_equation() {
        let mut c = vec![int(1)];
        for n in 1..60 {
            let next = &c[n - 1] * int(2 * (2 * n as i64 - 1)) / int(n as i64 + 1);
            c.push(next);
        }
        let g = guess_algebraic(&TruncSeries::new(c), 3, 3).unwrap();
        assert_eq!(g.kind, GuessKind::AlgebraicEquation);
        assert_eq!(g.relation, vec![QPoly::from_i64s(&[1]), QPoly::from_i64s(&[-1]), QPoly::from_i64s(&[0, 1])]);
    }

    #[test]
    fn too_few_terms() {
        let s = TruncSeries::new(vec![int(1); 10]);
        assert_eq!(guess_ode(&s, 2, 2), Err(GuessError::TooFewTerms { need: 29, have: 10 }));
    }
}
