//! Weighted step sets, their inventory and kernel polynomial, and the
//! detection of degenerate models.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    format_rational, int, BiPoly, GcdDomain, Pretty, QPoly, RatFuncT, Rational, Ring, UPoly,
};

/// A unit step `(dx, dy)` with coordinates in `{-1, 0, 1}`, not both zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Step {
    pub dx: i8,
    pub dy: i8,
}

impl Step {
    pub const fn new(dx: i8, dy: i8) -> Self {
        Step { dx, dy }
    }

    pub fn transpose(self) -> Self {
        Step::new(self.dy, self.dx)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// The eight possible steps, in the bit order used by [`WeightedModel::from_mask`].
pub const ALL_STEPS: [Step; 8] = [
    Step::new(-1, -1),
    Step::new(-1, 0),
    Step::new(-1, 1),
    Step::new(0, -1),
    Step::new(0, 1),
    Step::new(1, -1),
    Step::new(1, 0),
    Step::new(1, 1),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has no steps")]
    Empty,
    #[error("step ({0},{1}) is not a small step")]
    OutOfRange(i64, i64),
    #[error("step (0,0) is not allowed")]
    Origin,
    #[error("step {0} listed twice")]
    Duplicate(Step),
    #[error("step {0} has weight zero")]
    ZeroWeight(Step),
}

/// A nonempty set of small steps with nonzero rational weights.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightedModel {
    steps: BTreeMap<Step, Rational>,
}

impl WeightedModel {
    pub fn new(steps: impl IntoIterator<Item = ((i64, i64), Rational)>) -> Result<Self, ModelError> {
        let mut map = BTreeMap::new();
        for ((dx, dy), w) in steps {
            if !(-1..=1).contains(&dx) || !(-1..=1).contains(&dy) {
                return Err(ModelError::OutOfRange(dx, dy));
            }
            if dx == 0 && dy == 0 {
                return Err(ModelError::Origin);
            }
            let s = Step::new(dx as i8, dy as i8);
            if w.is_zero() {
                return Err(ModelError::ZeroWeight(s));
            }
            if map.insert(s, w).is_some() {
                return Err(ModelError::Duplicate(s));
            }
        }
        if map.is_empty() {
            return Err(ModelError::Empty);
        }
        Ok(WeightedModel { steps: map })
    }

    /// All weights equal to one.
    pub fn unweighted(steps: &[(i64, i64)]) -> Result<Self, ModelError> {
        Self::new(steps.iter().map(|&s| (s, int(1))))
    }

    /// The unweighted model whose steps are the set bits of `mask`
    /// (bit `k` selects `ALL_STEPS[k]`). `None` for the empty mask.
    pub fn from_mask(mask: u8) -> Option<Self> {
        let steps: Vec<(i64, i64)> = ALL_STEPS
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, s)| (s.dx as i64, s.dy as i64))
            .collect();
        Self::unweighted(&steps).ok()
    }

    /// The bit mask of the support, inverse of [`WeightedModel::from_mask`].
    pub fn mask(&self) -> u8 {
        ALL_STEPS
            .iter()
            .enumerate()
            .filter(|(_, s)| self.steps.contains_key(s))
            .fold(0, |m, (k, _)| m | 1 << k)
    }

    pub fn simple() -> Self {
        Self::unweighted(&[(1, 0), (-1, 0), (0, 1), (0, -1)]).expect("valid")
    }

    pub fn kreweras() -> Self {
        Self::unweighted(&[(-1, 0), (0, -1), (1, 1)]).expect("valid")
    }

    pub fn king() -> Self {
        Self::from_mask(0xff).expect("valid")
    }

    pub fn gessel() -> Self {
        Self::unweighted(&[(1, 0), (-1, 0), (1, 1), (-1, -1)]).expect("valid")
    }

    pub fn steps(&self) -> impl Iterator<Item = (Step, &Rational)> {
        self.steps.iter().map(|(s, w)| (*s, w))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn weight(&self, dx: i8, dy: i8) -> Option<&Rational> {
        self.steps.get(&Step::new(dx, dy))
    }

    /// Weight, or zero when the step is absent.
    pub fn d(&self, dx: i8, dy: i8) -> Rational {
        self.weight(dx, dy).cloned().unwrap_or_else(|| int(0))
    }

    pub fn contains(&self, dx: i8, dy: i8) -> bool {
        self.steps.contains_key(&Step::new(dx, dy))
    }

    pub fn is_unweighted(&self) -> bool {
        self.steps.values().all(|w| w.is_one())
    }

    pub fn all_weights_positive(&self) -> bool {
        self.steps.values().all(|w| *w > int(0))
    }

    /// The model with `x` and `y` exchanged.
    pub fn transpose(&self) -> Self {
        WeightedModel {
            steps: self.steps.iter().map(|(s, w)| (s.transpose(), w.clone())).collect(),
        }
    }

    /// Every weight multiplied by `c` (nonzero).
    pub fn scale(&self, c: &Rational) -> Self {
        assert!(!c.is_zero(), "scaling by zero");
        WeightedModel {
            steps: self.steps.iter().map(|(s, w)| (*s, w * c)).collect(),
        }
    }

    /// Weight of `(i, j)` multiplied by `a^i b^j`: the model seen through
    /// `x -> a x, y -> b y`.
    pub fn rescale(&self, a: &Rational, b: &Rational) -> Self {
        assert!(!a.is_zero() && !b.is_zero(), "rescaling by zero");
        let p = |c: &Rational, e: i8| match e {
            1 => c.clone(),
            -1 => c.recip(),
            _ => Rational::one(),
        };
        WeightedModel {
            steps: self
                .steps
                .iter()
                .map(|(s, w)| (*s, w * p(a, s.dx) * p(b, s.dy)))
                .collect(),
        }
    }
}

impl fmt::Display for WeightedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (s, w)) in self.steps.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
            if !w.is_one() {
                write!(f, ":{}", format_rational(w))?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for WeightedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Laurent polynomial `c[0]/v + c[1] + c[2]*v` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub coeffs: [Rational; 3],
}

impl Section {
    /// Coefficient of `v^e` for `e` in `-1..=1`.
    pub fn coeff(&self, e: i32) -> &Rational {
        &self.coeffs[(e + 1) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `v * section(v)`, an honest polynomial of degree at most 2.
    pub fn shifted(&self) -> QPoly {
        QPoly::new(self.coeffs.to_vec())
    }

    /// The same polynomial with coefficients in Q(t).
    pub fn shifted_over_t(&self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| RatFuncT::from_rational(c.clone())).collect())
    }

    pub fn pretty(&self, var: &str) -> String {
        BiPoly::from_terms(
            (-1..=1).map(|e| ((e, 0), RatFuncT::from_rational(self.coeff(e).clone()))),
        )
        .pretty(&[var, "_", "t"])
    }
}

/// Inventory, kernel and section data of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub model: WeightedModel,
    pub inventory: BiPoly,
    pub kernel: BiPoly,
    /// `A_{-1}, A_0, A_1` with `S = A_{-1}(x)/y + A_0(x) + A_1(x) y`.
    pub x_sections: [Section; 3],
    /// `B_{-1}, B_0, B_1` with `S = B_{-1}(y)/x + B_0(y) + B_1(y) x`.
    pub y_sections: [Section; 3],
    /// Weight of the step `(-1,-1)`, zero when absent.
    pub epsilon_weight: Rational,
}

pub fn build_kernel(m: &WeightedModel) -> KernelData {
    let t = RatFuncT::t();
    let inventory = BiPoly::from_terms(
        m.steps().map(|(s, w)| ((s.dx as i32, s.dy as i32), RatFuncT::from_rational(w.clone()))),
    );
    // xy (1 - t S)
    let kernel = BiPoly::term(RatFuncT::one(), 1, 1).sub(&inventory.shift(1, 1).scale(&t));
    let section = |f: &dyn Fn(i8) -> Rational| Section {
        coeffs: [f(-1), f(0), f(1)],
    };
    let x_sections = [-1i8, 0, 1].map(|k| section(&|i| m.d(i, k)));
    let y_sections = [-1i8, 0, 1].map(|k| section(&|j| m.d(k, j)));
    KernelData {
        model: m.clone(),
        inventory,
        kernel,
        x_sections,
        y_sections,
        epsilon_weight: m.d(-1, -1),
    }
}

impl KernelData {
    /// `[gamma, beta, alpha]` with `K = alpha(x) y^2 + beta(x) y + gamma(x)`.
    pub fn y_quadratic(&self) -> [UPoly; 3] {
        [0, 1, 2].map(|j| self.kernel.y_coefficient(j))
    }

    /// `[gamma~, beta~, alpha~]` with `K = alpha~(y) x^2 + beta~(y) x + gamma~(y)`.
    pub fn x_quadratic(&self) -> [UPoly; 3] {
        [0, 1, 2].map(|i| self.kernel.x_coefficient(i))
    }

    /// `K(x, 0, t)` as a polynomial in `x`.
    pub fn kernel_at_y0(&self) -> UPoly {
        self.kernel.y_coefficient(0)
    }

    /// `K(0, y, t)` as a polynomial in `y`.
    pub fn kernel_at_x0(&self) -> UPoly {
        self.kernel.x_coefficient(0)
    }

    /// `x_1^2 y_1^2 K(x_0/x_1, y_0/y_1, t)`.
    pub fn homogenize(&self) -> BiForm {
        let mut terms = BTreeMap::new();
        for (&(a, b), c) in self.kernel.terms() {
            assert!((0..=2).contains(&a) && (0..=2).contains(&b), "kernel exceeds bidegree (2,2)");
            let (a, b) = (a as u8, b as u8);
            terms.insert([a, 2 - a, b, 2 - b], c.clone());
        }
        BiForm { terms }
    }
}

/// Bihomogeneous form of bidegree (2,2) in `(x0:x1)`, `(y0:y1)`; keys are the
/// exponents of `x0, x1, y0, y1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiForm {
    pub terms: BTreeMap<[u8; 4], RatFuncT>,
}

impl BiForm {
    /// Sets `x1 = y1 = 1`.
    pub fn dehomogenize(&self) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| ((e[0] as i32, e[2] as i32), c.clone())))
    }

    pub fn is_bihomogeneous(&self, dx: u8, dy: u8) -> bool {
        self.terms.keys().all(|e| e[0] + e[1] == dx && e[2] + e[3] == dy)
    }

    /// Coefficient of `t^1` after multiplying out, as a form over Q. Its zeros
    /// on `x0 x1 y0 y1 = 0` are the base points.
    pub fn t_part(&self) -> BTreeMap<[u8; 4], Rational> {
        self.terms
            .iter()
            .filter_map(|(e, c)| {
                let v = c.as_base()?.coeff(1);
                (!v.is_zero()).then_some((*e, v))
            })
            .collect()
    }

    pub fn pretty(&self) -> String {
        let names = ["x0", "x1", "y0", "y1"];
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(p, _)| **p > 0)
                .map(|(p, n)| if *p == 1 { n.to_string() } else { format!("{n}^{p}") })
                .collect();
            let cs = c.pretty(&["t"]);
            let cs = if c.is_compound(&["t"]) { format!("({cs})") } else { cs };
            if k > 0 {
                out.push_str(" + ");
            }
            out.push_str(&format!("{cs}*{}", mono.join("*")));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegeneracyStatus {
    NonDegenerate,
    /// All steps on one line through the origin.
    OneDimensional,
    /// No step with `dx = 1` or none with `dx = -1`.
    LowDegreeX,
    LowDegreeY,
    /// Steps confined to one side of a diagonal, so one quadrant constraint is
    /// redundant or no step can be taken at all.
    HalfPlane,
    /// The kernel factors over the algebraic closure of Q(t).
    Reducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    pub status: DegeneracyStatus,
    pub witness: String,
}

impl DegeneracyReport {
    pub fn is_degenerate(&self) -> bool {
        self.status != DegeneracyStatus::NonDegenerate
    }
}

pub fn degeneracy(m: &WeightedModel) -> DegeneracyReport {
    use DegeneracyStatus::*;
    let report = |status, witness: String| DegeneracyReport { status, witness };
    let steps: Vec<Step> = m.steps().map(|(s, _)| s).collect();
    let first = steps[0];
    if steps.iter().all(|s| first.dx * s.dy == first.dy * s.dx) {
        return report(OneDimensional, format!("all steps are multiples of {first}"));
    }
    let has = |p: &dyn Fn(&Step) -> bool| steps.iter().any(p);
    if !has(&|s| s.dx == 1) {
        return report(LowDegreeX, "no step with dx = 1".into());
    }
    if !has(&|s| s.dx == -1) {
        return report(LowDegreeX, "no step with dx = -1".into());
    }
    if !has(&|s| s.dy == 1) {
        return report(LowDegreeY, "no step with dy = 1".into());
    }
    if !has(&|s| s.dy == -1) {
        return report(LowDegreeY, "no step with dy = -1".into());
    }
    if steps.iter().all(|s| s.dx >= s.dy) {
        return report(HalfPlane, "every step has dx >= dy, so x >= y >= 0 along any walk".into());
    }
    if steps.iter().all(|s| s.dx <= s.dy) {
        return report(HalfPlane, "every step has dy >= dx, so y >= x >= 0 along any walk".into());
    }
    if steps.iter().all(|s| s.dx + s.dy <= 0) {
        return report(HalfPlane, "every step has dx + dy <= 0, so only the empty walk stays in the quadrant".into());
    }
    match reducibility_witness(&build_kernel(m)) {
        Some(w) => report(Reducible, w),
        None => report(NonDegenerate, "kernel irreducible of bidegree (2,2)".into()),
    }
}

/// A description of a factorization of the kernel over the algebraic closure
/// of Q(t), or `None` if the kernel is irreducible.
///
/// With `K` quadratic in `y`, a factorization either has a factor free of `y`
/// (a nonconstant common divisor of the `y`-coefficients), a factor free of `x`,
/// or two factors linear in `y`; the last happens exactly when the
/// discriminant is a square.
pub fn reducibility_witness(k: &KernelData) -> Option<String> {
    let [c, b, a] = k.y_quadratic();
    let g = a.gcd(&b).gcd(&c);
    if !g.is_constant() {
        return Some(format!("common factor {} in x", g.pretty(&["x", "t"])));
    }
    let [c2, b2, a2] = k.x_quadratic();
    let g = a2.gcd(&b2).gcd(&c2);
    if !g.is_constant() {
        return Some(format!("common factor {} in y", g.pretty(&["y", "t"])));
    }
    let disc = b.mul(&b).sub(&a.mul(&c).scale(&RatFuncT::from_i64(4)));
    if disc.is_zero() {
        return Some("kernel is a square in y".into());
    }
    is_square_over_closure(&disc).then(|| {
        format!("discriminant {} is a square, roots in y are rational", disc.pretty(&["x", "t"]))
    })
}

/// Whether a polynomial over Q(t) is a square of a polynomial over the
/// algebraic closure of Q(t). Constants of Q are squares there, so only the
/// t-structure of the leading coefficient and the x-multiplicities matter.
pub fn is_square_over_closure(p: &UPoly) -> bool {
    let Some(lc) = p.leading() else {
        return true;
    };
    let even = |q: &QPoly| q.squarefree_factors().iter().all(|(_, e)| e % 2 == 0);
    if !even(lc.num()) || !even(lc.den()) {
        return false;
    }
    p.squarefree_factors().iter().all(|(_, e)| e % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pretty(p: &BiPoly) -> String {
        p.pretty(&["x", "y", "t"])
    }

    #[test]
    fn kernels_of_named_models() {
        let k = build_kernel(&WeightedModel::simple());
        assert_eq!(pretty(&k.inventory), "x + y + y^-1 + x^-1");
        assert_eq!(pretty(&k.kernel), "-t*x^2*y - t*x*y^2 + x*y - t*x - t*y");
        let k = build_kernel(&WeightedModel::kreweras());
        assert_eq!(pretty(&k.kernel), "-t*x^2*y^2 + x*y - t*x - t*y");
        let single = WeightedModel::new([((1, 1), int(2))]).unwrap();
        let k = build_kernel(&single);
        assert_eq!(pretty(&k.kernel), "-2*t*x^2*y^2 + x*y");
        assert_eq!(k.epsilon_weight, int(0));
    }

    #[test]
    fn homogenization_of_simple_walk() {
        let k = build_kernel(&WeightedModel::simple());
        let h = k.homogenize();
        assert!(h.is_bihomogeneous(2, 2));
        assert_eq!(h.dehomogenize(), k.kernel);
        let expect: BTreeMap<[u8; 4], Rational> =
            [[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 2, 0], [1, 1, 0, 2]].into_iter().map(|e| (e, int(-1))).collect();
        assert_eq!(h.t_part(), expect);
        assert_eq!(h.terms[&[1, 1, 1, 1]], RatFuncT::one());
    }

    #[test]
    fn degeneracy_examples() {
        use DegeneracyStatus::*;
        assert_eq!(degeneracy(&WeightedModel::simple()).status, NonDegenerate);
        assert_eq!(degeneracy(&WeightedModel::kreweras()).status, NonDegenerate);
        assert_eq!(degeneracy(&WeightedModel::king()).status, NonDegenerate);
        let diag = WeightedModel::unweighted(&[(1, 1), (-1, -1)]).unwrap();
        assert_eq!(degeneracy(&diag).status, OneDimensional);
        let right = WeightedModel::unweighted(&[(1, 0), (1, 1), (1, -1)]).unwrap();
        assert_eq!(degeneracy(&right).status, LowDegreeX);
        // x - 1/x + y - 1/y type cross, (1,1),(−1,−1),(1,−1),(−1,1): K = xy - t(x^2y^2 + 1 + x^2 + y^2)
        let x_model = WeightedModel::unweighted(&[(1, 1), (-1, -1), (1, -1), (-1, 1)]).unwrap();
        assert_eq!(degeneracy(&x_model).status, NonDegenerate);
    }

    #[test]
    fn reducibility_witnesses() {
        // with no step of dx = -1 the kernel is divisible by x
        let k = build_kernel(&WeightedModel::unweighted(&[(1, 0), (0, 1), (0, -1)]).unwrap());
        assert!(reducibility_witness(&k).unwrap().contains("common factor x"));
        assert!(reducibility_witness(&build_kernel(&WeightedModel::simple())).is_none());
        let sq = UPoly::new(vec![RatFuncT::one(), RatFuncT::from_i64(2), RatFuncT::one()]);
        assert!(is_square_over_closure(&sq));
        let t = RatFuncT::t();
        assert!(is_square_over_closure(&UPoly::constant(t.mul(&t).mul(&RatFuncT::from_i64(3)))));
        assert!(!is_square_over_closure(&UPoly::constant(t.clone())));
        assert!(!is_square_over_closure(&UPoly::new(vec![t.neg(), RatFuncT::zero(), RatFuncT::one()])));
    }

    #[test]
    fn transpose_swaps_kernel_variables() {
        let m = WeightedModel::new([((1, 0), int(2)), ((0, -1), int(1)), ((-1, 1), int(3)), ((-1, -1), int(5))]).unwrap();
        let k = build_kernel(&m);
        let kt = build_kernel(&m.transpose());
        assert_eq!(kt.kernel, k.kernel.transpose());
        assert_eq!(kt.x_sections, k.y_sections);
        assert_eq!(k.epsilon_weight, int(5));
    }

    #[test]
    fn masks_round_trip() {
        for mask in 1..=255u8 {
            assert_eq!(WeightedModel::from_mask(mask).unwrap().mask(), mask);
        }
        assert!(WeightedModel::from_mask(0).is_none());
        assert_eq!(WeightedModel::unweighted(&[(0, 0)]), Err(ModelError::Origin));
        assert_eq!(WeightedModel::unweighted(&[(2, 0)]), Err(ModelError::OutOfRange(2, 0)));
        assert_eq!(WeightedModel::unweighted(&[(1, 0), (1, 0)]), Err(ModelError::Duplicate(Step::new(1, 0))));
    }
}
