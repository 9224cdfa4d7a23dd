//! The kernel curve: genus, base points, and the poles of `x`, `y`, `xy`.
//!
//! On each of the lines `x = 0`, `x = inf`, `y = 0`, `y = inf` the `t`-part of
//! the homogenized kernel restricts to a binary quadratic form in the other
//! coordinate. Its roots are the base points, and since the projection to
//! `x` (resp. `y`) has degree two, the same roots form the divisors of zeros
//! and poles of `x` (resp. `y`):
//!
//! ```text
//! div(x) = R0 + R1 - P0 - P1        div(y) = S0 + S1 - Q0 - Q1
//! ```
//!
//! with `R` on `x = 0`, `P` on `x = inf`, `S` on `y = 0`, `Q` on `y = inf`.
//! Pole orders of `xy` are read off `div(x) + div(y)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{
    format_rational, int, Pretty, QPoly, QuadElem, QuadModulus, RatFuncT, Rational,
    Ring, UPoly,
};
use crate::model::{degeneracy, DegeneracyReport, KernelData, Section};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("degenerate model ({:?}): {}", .0.status, .0.witness)]
    Degenerate(DegeneracyReport),
    #[error("kernel curve has genus zero")]
    GenusZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Genus {
    Zero,
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusReport {
    pub genus: Genus,
    /// Discriminant of `K` in `y`, a polynomial in `x`.
    pub disc_x: UPoly,
    /// Discriminant of `K` in `x`, a polynomial in `y`.
    pub disc_y: UPoly,
    pub witness: String,
}

impl Serialize for GenusReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GenusReport", 4)?;
        st.serialize_field("genus", &self.genus)?;
        st.serialize_field("discX", &self.disc_x.pretty(&["x", "t"]))?;
        st.serialize_field("discY", &self.disc_y.pretty(&["y", "t"]))?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

/// `b^2 - 4ac` for the quadratic `[c, b, a]`.
fn discriminant(q: &[UPoly; 3]) -> UPoly {
    let [c, b, a] = q;
    b.mul(b).sub(&a.mul(c).scale(&RatFuncT::from_i64(4)))
}

/// Genus decided from one discriminant: one iff square-free of degree 3 or 4.
fn genus_of_disc(d: &UPoly, var: &str) -> (Genus, String) {
    let Some(deg) = d.degree() else {
        return (Genus::Zero, "discriminant vanishes identically".into());
    };
    let (sqfree, g) = d.squarefree_witness();
    if !sqfree {
        let g = g.monic();
        return (
            Genus::Zero,
            format!("repeated factor {} of the discriminant", g.pretty(&[var, "t"])),
        );
    }
    if deg < 3 {
        return (
            Genus::Zero,
            format!("discriminant of degree {deg} has a repeated root at infinity"),
        );
    }
    (
        Genus::One,
        format!("discriminant of degree {deg} is square-free"),
    )
}

pub fn genus(k: &KernelData) -> Result<GenusReport, CurveError> {
    let deg = degeneracy(&k.model);
    if deg.is_degenerate() {
        return Err(CurveError::Degenerate(deg));
    }
    let disc_x = discriminant(&k.y_quadratic());
    let disc_y = discriminant(&k.x_quadratic());
    let (genus, witness) = genus_of_disc(&disc_x, "x");
    Ok(GenusReport {
        genus,
        disc_x,
        disc_y,
        witness,
    })
}

/// Genus computed from the discriminant in `y` instead; used to cross-check.
pub fn genus_from_disc_y(report: &GenusReport) -> Genus {
    genus_of_disc(&report.disc_y, "y").0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RootTag {
    Minus,
    Plus,
}

/// A point of the projective line over Q or a quadratic extension of Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuadraticCoordinate {
    Finite(Rational),
    /// Root `(-p + s*sqrt(p^2 - 4q)) / 2` of an irreducible `v^2 + p v + q`,
    /// with `s = +1` for `Plus`.
    RootOf { poly: QPoly, tag: RootTag },
    Infinity,
}

impl QuadraticCoordinate {
    pub fn is_zero(&self) -> bool {
        matches!(self, QuadraticCoordinate::Finite(r) if r.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, QuadraticCoordinate::Infinity)
    }

    fn sort_key(&self) -> (u8, Option<Rational>, Option<Vec<Rational>>, Option<RootTag>) {
        match self {
            QuadraticCoordinate::Finite(r) => (0, Some(r.clone()), None, None),
            QuadraticCoordinate::RootOf { poly, tag } => (1, None, Some(poly.coeffs().to_vec()), Some(*tag)),
            QuadraticCoordinate::Infinity => (2, None, None, None),
        }
    }

    /// Homogeneous coordinates `(v0, v1)` inside `Q[u]/(m)`, where `m` is the
    /// modulus of the `RootOf` case (and unused otherwise).
    fn homogeneous(&self, m: &QuadModulus<Rational>) -> (QuadElem<Rational>, QuadElem<Rational>) {
        match self {
            QuadraticCoordinate::Finite(r) => (m.embed(r.clone()), m.one()),
            QuadraticCoordinate::Infinity => (m.one(), m.zero()),
            QuadraticCoordinate::RootOf { tag, .. } => {
                let u = m.generator();
                let v = if *tag == RootTag::Plus { u } else { m.conj(&u) };
                (v, m.one())
            }
        }
    }

    fn modulus(&self) -> Option<QuadModulus<Rational>> {
        match self {
            QuadraticCoordinate::RootOf { poly, .. } => Some(QuadModulus::new(poly.coeff(1), poly.coeff(0))),
            _ => None,
        }
    }
}

impl fmt::Display for QuadraticCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticCoordinate::Finite(r) => write!(f, "{}", format_rational(r)),
            QuadraticCoordinate::Infinity => write!(f, "inf"),
            QuadraticCoordinate::RootOf { poly, tag } => {
                let (a, b, d) = sqrt_normal_form(&poly.coeff(1), &poly.coeff(0));
                let sign = if *tag == RootTag::Plus { "+" } else { "-" };
                let b = if b.is_one() { String::new() } else { format!("{}*", format_rational(&b)) };
                if a.is_zero() {
                    let sign = if sign == "+" { "" } else { "-" };
                    write!(f, "{sign}{b}sqrt({d})")
                } else {
                    write!(f, "{} {sign} {b}sqrt({d})", format_rational(&a))
                }
            }
        }
    }
}

impl Serialize for QuadraticCoordinate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Writes the roots of `v^2 + p v + q` as `a +- b*sqrt(d)` with `b > 0` and
/// `d` an integer free of small square factors.
fn sqrt_normal_form(p: &Rational, q: &Rational) -> (Rational, Rational, BigInt) {
    let a = -p / int(2);
    let disc = p * p - q * int(4);
    // sqrt(n/m) = sqrt(n*m)/m, and the root is a +- sqrt(disc)/2
    let mut d = disc.numer() * disc.denom();
    let mut b = Rational::new(BigInt::from(1), disc.denom() * BigInt::from(2));
    let mut f = BigInt::from(2);
    while &f * &f <= d.abs() && f < BigInt::from(1_000_000) {
        let f2 = &f * &f;
        while (&d % &f2).is_zero() {
            d /= &f2;
            b *= Rational::from_integer(f.clone());
        }
        f += 1;
    }
    (a, b, d)
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Roots with multiplicity of `c0*v1^2 + c1*v0*v1 + c2*v0^2` on P^1, `v = v0/v1`.
/// Panics on the zero form.
pub fn form_roots(c: &[Rational; 3]) -> Vec<(QuadraticCoordinate, u32)> {
    use QuadraticCoordinate::*;
    let [c0, c1, c2] = c;
    let mut out = Vec::new();
    if c2.is_zero() {
        if c1.is_zero() {
            assert!(!c0.is_zero(), "zero binary form");
            out.push((Infinity, 2));
        } else {
            out.push((Finite(-c0 / c1), 1));
            out.push((Infinity, 1));
        }
        return out;
    }
    let p = c1 / c2;
    let q = c0 / c2;
    let disc = &p * &p - &q * int(4);
    if disc.is_zero() {
        out.push((Finite(-&p / int(2)), 2));
    } else if let Some(s) = rational_sqrt(&disc) {
        out.push((Finite((-&p - &s) / int(2)), 1));
        out.push((Finite((-&p + s) / int(2)), 1));
    } else {
        let poly = QPoly::new(vec![q, p, int(1)]);
        out.push((RootOf { poly: poly.clone(), tag: RootTag::Minus }, 1));
        out.push((RootOf { poly, tag: RootTag::Plus }, 1));
    }
    out.sort_by_key(|a| a.0.sort_key());
    out
}

/// How often a base point occurs on each of the four coordinate lines.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LineMultiplicities {
    pub x_zero: u32,
    pub x_inf: u32,
    pub y_zero: u32,
    pub y_inf: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub x: QuadraticCoordinate,
    pub y: QuadraticCoordinate,
    pub multiplicity: u32,
    #[serde(rename = "lines")]
    pub on_lines: LineMultiplicities,
    /// Names `R0 R1` (x = 0), `P0 P1` (x = inf), `S0 S1` (y = 0), `Q0 Q1` (y = inf).
    pub labels: Vec<String>,
}

impl CurvePoint {
    /// Order of vanishing of `x` here (negative for a pole).
    pub fn order_x(&self) -> i32 {
        self.on_lines.x_zero as i32 - self.on_lines.x_inf as i32
    }

    pub fn order_y(&self) -> i32 {
        self.on_lines.y_zero as i32 - self.on_lines.y_inf as i32
    }

    pub fn order_xy(&self) -> i32 {
        self.order_x() + self.order_y()
    }
}

/// The binary forms cut out on the lines `x = 0`, `x = inf`, `y = 0`, `y = inf`.
/// On `x = 0` the form is `y B_{-1}(y)`, on `x = inf` it is `y B_1(y)`, and
/// symmetrically with the `A` sections.
fn line_forms(k: &KernelData) -> [(&'static str, &Section); 4] {
    [
        ("x0", &k.y_sections[0]),
        ("xinf", &k.y_sections[2]),
        ("y0", &k.x_sections[0]),
        ("yinf", &k.x_sections[2]),
    ]
}

pub fn base_points(k: &KernelData) -> Result<Vec<CurvePoint>, CurveError> {
    if genus(k)?.genus == Genus::Zero {
        return Err(CurveError::GenusZero);
    }
    Ok(base_points_unchecked(k))
}

/// Base points without the genus precondition. Requires a nondegenerate model.
pub fn base_points_unchecked(k: &KernelData) -> Vec<CurvePoint> {
    use QuadraticCoordinate::*;
    let mut pts: Vec<CurvePoint> = Vec::new();
    for (line, sec) in line_forms(k) {
        let prefix = match line {
            "x0" => "R",
            "xinf" => "P",
            "y0" => "S",
            _ => "Q",
        };
        let mut idx = 0;
        for (root, mult) in form_roots(&sec.coeffs) {
            let (x, y) = match line {
                "x0" => (Finite(int(0)), root),
                "xinf" => (Infinity, root),
                "y0" => (root, Finite(int(0))),
                _ => (root, Infinity),
            };
            let mut labels = Vec::new();
            for _ in 0..mult {
                labels.push(format!("{prefix}{idx}"));
                idx += 1;
            }
            let pos = match pts.iter().position(|p| p.x == x && p.y == y) {
                Some(i) => i,
                None => {
                    pts.push(CurvePoint {
                        x,
                        y,
                        multiplicity: 0,
                        on_lines: LineMultiplicities::default(),
                        labels: Vec::new(),
                    });
                    pts.len() - 1
                }
            };
            let p = &mut pts[pos];
            p.multiplicity += mult;
            p.labels.extend(labels);
            match line {
                "x0" => p.on_lines.x_zero += mult,
                "xinf" => p.on_lines.x_inf += mult,
                "y0" => p.on_lines.y_zero += mult,
                _ => p.on_lines.y_inf += mult,
            }
        }
    }
    pts
}

/// Checks that `p` lies on the curve and on `x0 x1 y0 y1 = 0`, by exact
/// substitution in the homogenized kernel (both its `t^0` and `t^1` parts).
pub fn verify_base_point(k: &KernelData, p: &CurvePoint) -> bool {
    let m = p
        .x
        .modulus()
        .or_else(|| p.y.modulus())
        .unwrap_or_else(|| QuadModulus::new(int(0), int(0)));
    let (x0, x1) = p.x.homogeneous(&m);
    let (y0, y1) = p.y.homogeneous(&m);
    let pw = |v: &QuadElem<Rational>, e: u8| m.pow(v, e as i64).expect("nonnegative power");
    let h = k.homogenize();
    let mut parts = [m.zero(), m.zero()];
    for (e, c) in &h.terms {
        let mono = m.mul(&m.mul(&pw(&x0, e[0]), &pw(&x1, e[1])), &m.mul(&pw(&y0, e[2]), &pw(&y1, e[3])));
        let c = c.as_base().expect("kernel coefficients are polynomial in t");
        for (d, part) in parts.iter_mut().enumerate() {
            *part = part.add(&mono.scale(&c.coeff(d)));
        }
    }
    let on_lines = m.mul(&m.mul(&x0, &x1), &m.mul(&y0, &y1)).is_zero();
    on_lines && parts.iter().all(|v| v.is_zero())
}

/// The base points at `x = inf` or `y = inf`, with pole orders of `x`, `y`, `xy`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PoleEntry {
    pub point: CurvePoint,
    pub pole_x: u32,
    pub pole_y: u32,
    pub pole_xy: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PoleReport {
    pub entries: Vec<PoleEntry>,
    /// Degree of `xy` as a map to P^1 (sum of its pole orders).
    pub xy_degree: u32,
    /// `Q0 = Q1`: `1/y` is not a local parameter there.
    pub q_coincident: bool,
    pub p_coincident: bool,
}

pub fn poles_of_xy(k: &KernelData) -> Result<PoleReport, CurveError> {
    let pts = base_points(k)?;
    let entries: Vec<PoleEntry> = pts
        .into_iter()
        .filter(|p| p.on_lines.x_inf > 0 || p.on_lines.y_inf > 0)
        .map(|p| PoleEntry {
            pole_x: (-p.order_x()).max(0) as u32,
            pole_y: (-p.order_y()).max(0) as u32,
            pole_xy: (-p.order_xy()).max(0) as u32,
            point: p,
        })
        .collect();
    Ok(PoleReport {
        xy_degree: entries.iter().map(|e| e.pole_xy).sum(),
        q_coincident: !is_local_parameter_inv_y(k),
        p_coincident: form_discriminant(&k.y_sections[2]).is_zero(),
        entries,
    })
}

fn form_discriminant(s: &Section) -> Rational {
    let [c0, c1, c2] = &s.coeffs;
    c1 * c1 - c0 * c2 * int(4)
}

/// Whether `1/y` is a local parameter at the points with `y = inf`, which
/// holds iff those two points are distinct.
pub fn is_local_parameter_inv_y(k: &KernelData) -> bool {
    !form_discriminant(&k.x_sections[2]).is_zero()
}
