//! Modular gcd for polynomials with rational coefficients in one or two
//! variables.
//!
//! Images modulo word-sized primes are combined by Chinese remaindering; the
//! bivariate case additionally evaluates the inner variable and interpolates
//! (Brown's dense algorithm). Every candidate is confirmed by exact trial
//! division, so the result never depends on a lucky choice of primes.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::poly::UniPoly;
use super::rational::Rational;
use super::ring::{GcdDomain, Ring};

type IPoly = UniPoly<BigInt>;
type IBiv = UniPoly<IPoly>;

pub(super) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(super) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, in decreasing order.
pub(super) fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while v.len() < 512 {
            if is_prime(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

pub(super) fn reduce(a: &BigInt, p: u64) -> u64 {
    let r = (a % BigInt::from(p)).to_i128().expect("residue fits");
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

pub(super) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd in `F_p[u]`.
fn gcd_fp(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = inv_mod(b[db], p);
        while a.len() > db {
            let top = a.len() - 1;
            let c = mul_mod(a[top], inv, p);
            if c != 0 {
                let off = top - db;
                for (j, &bj) in b.iter().enumerate() {
                    let s = mul_mod(c, bj, p);
                    a[off + j] = (a[off + j] + p - s) % p;
                }
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

/// One step of the splitmix64 generator.
pub(super) fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(super) fn eval_fp(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Interpolation at fixed nodes in `F_p`: the inverse differences and the
/// Newton basis in monomial form are computed once and reused for every
/// value vector.
pub(super) struct Interpolator {
    p: u64,
    /// inv[j][i] = 1/(xs[i] - xs[i - j]) for i >= j >= 1
    inv: Vec<Vec<u64>>,
    /// basis[i] = prod_{k < i} (x - xs[k]) in monomial form
    basis: Vec<Vec<u64>>,
}

impl Interpolator {
    pub(super) fn new(xs: &[u64], p: u64) -> Self {
        let n = xs.len();
        let mut inv = vec![Vec::new(); n];
        for (j, row) in inv.iter_mut().enumerate().skip(1) {
            *row = (0..n)
                .map(|i| if i >= j { inv_mod((xs[i] + p - xs[i - j]) % p, p) } else { 0 })
                .collect();
        }
        let mut basis = vec![vec![1u64]];
        for i in 1..n {
            let prev = &basis[i - 1];
            let mut next = vec![0u64; prev.len() + 1];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + p - mul_mod(c, xs[i - 1], p)) % p;
            }
            basis.push(next);
        }
        Interpolator { p, inv, basis }
    }

    /// Coefficients of the polynomial through `(xs[i], ys[i])`.
    pub(super) fn run(&self, ys: &[u64]) -> Vec<u64> {
        let p = self.p;
        let n = ys.len();
        // Newton divided differences
        let mut c = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                c[i] = mul_mod((c[i] + p - c[i - 1]) % p, self.inv[j][i], p);
            }
        }
        let mut poly = vec![0u64; n];
        for (ci, b) in c.iter().zip(&self.basis) {
            if *ci == 0 {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                poly[k] = (poly[k] + mul_mod(*ci, bk, p)) % p;
            }
        }
        poly
    }
}

/// Lifts residues modulo `m` by one more prime.
pub(super) fn crt(h: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let hm = reduce(h, p);
    let minv = inv_mod(reduce(m, p), p);
    let k = mul_mod((r + p - hm) % p, minv, p);
    h + m * BigInt::from(k)
}

pub(super) fn symmetric(h: &BigInt, m: &BigInt) -> BigInt {
    let half: BigInt = m >> 1;
    if h > &half {
        h - m
    } else {
        h.clone()
    }
}

fn int_content(a: &IPoly) -> BigInt {
    a.coeffs().iter().fold(<BigInt as Ring>::zero(), |g, c| Integer::gcd(&g, c))
}

fn int_primitive(a: &IPoly) -> IPoly {
    let g = int_content(a);
    if g.is_zero() || g.is_one() {
        return a.clone();
    }
    let mut p = a.map(|c| c / &g);
    if p.leading().is_some_and(|l| l.is_negative()) {
        p = p.neg();
    }
    p
}

/// Clears denominators; the result is a positive rational multiple of `a`.
fn to_int(a: &UniPoly<Rational>) -> IPoly {
    let l = a.coeffs().iter().fold(<BigInt as Ring>::one(), |l, c| l.lcm(c.denom()));
    int_primitive(&a.map(|c| c.numer() * (&l / c.denom())))
}

fn from_int(a: &IPoly) -> UniPoly<Rational> {
    a.map(|c| Rational::from_integer(c.clone()))
}

/// Primitive gcd of two primitive integer polynomials, positive leading
/// coefficient.
fn gcd_int_primitive(a: &IPoly, b: &IPoly) -> IPoly {
    let (da, db) = (a.deg(), b.deg());
    if da <= 0 || db <= 0 {
        return IPoly::one();
    }
    let gamma = Integer::gcd(a.leading().unwrap(), b.leading().unwrap());
    let mut state: Option<(Vec<BigInt>, BigInt, usize)> = None;
    for &p in primes() {
        let lap = reduce(a.leading().unwrap(), p);
        let lbp = reduce(b.leading().unwrap(), p);
        if lap == 0 || lbp == 0 {
            continue;
        }
        let ap: Vec<u64> = a.coeffs().iter().map(|c| reduce(c, p)).collect();
        let bp: Vec<u64> = b.coeffs().iter().map(|c| reduce(c, p)).collect();
        let g = gcd_fp(ap, bp, p);
        let d = g.len() - 1;
        if d == 0 {
            return IPoly::one();
        }
        let gp = reduce(&gamma, p);
        let g: Vec<u64> = g.iter().map(|&c| mul_mod(c, gp, p)).collect();
        let (prev, m) = match state.take() {
            Some((h, m, dd)) if dd == d => (Some(h), m),
            Some((h, m, dd)) if dd < d => {
                state = Some((h, m, dd));
                continue;
            }
            _ => (None, <BigInt as Ring>::one()),
        };
        let (h, newm) = match prev {
            None => (g.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), BigInt::from(p)),
            Some(h) => (
                h.iter().zip(&g).map(|(hc, &r)| crt(hc, &m, r, p)).collect(),
                &m * BigInt::from(p),
            ),
        };
        let before: Vec<BigInt> = h.iter().map(|c| symmetric(&c.mod_floor(&m), &m)).collect();
        let after: Vec<BigInt> = h.iter().map(|c| symmetric(c, &newm)).collect();
        if m > <BigInt as Ring>::one() && before == after {
            let cand = int_primitive(&IPoly::new(after));
            if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
                return cand;
            }
        }
        state = Some((h, newm, d));
    }
    panic!("modular gcd did not converge");
}

/// Monic gcd over Q.
pub fn gcd_qpoly(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> UniPoly<Rational> {
    if a.is_zero() {
        return b.normalize();
    }
    if b.is_zero() {
        return a.normalize();
    }
    from_int(&gcd_int_primitive(&to_int(a), &to_int(b))).normalize()
}

/// gcd of integer polynomials up to a unit, as a primitive polynomial.
fn gcd_int(a: &IPoly, b: &IPoly) -> IPoly {
    if a.is_zero() {
        return int_primitive(b);
    }
    if b.is_zero() {
        return int_primitive(a);
    }
    gcd_int_primitive(&int_primitive(a), &int_primitive(b))
}

/// Primitive part over Z[v] of a bivariate integer polynomial and its content.
fn biv_content(a: &IBiv) -> IPoly {
    let mut g = IPoly::zero();
    for c in a.coeffs() {
        g = gcd_int(&g, c);
        if g.deg() == 0 {
            return IPoly::one();
        }
    }
    g
}

fn biv_divide_content(a: &IBiv, c: &IPoly) -> IBiv {
    if c.is_one() {
        return a.clone();
    }
    IBiv::new(
        a.coeffs()
            .iter()
            .map(|x| x.exact_div(c).expect("content divides"))
            .collect(),
    )
}

fn to_int_biv(a: &UniPoly<UniPoly<Rational>>) -> IBiv {
    let l = a
        .coeffs()
        .iter()
        .flat_map(|c| c.coeffs())
        .fold(<BigInt as Ring>::one(), |l, c| l.lcm(c.denom()));
    let v = a.map(|c| c.map(|r| r.numer() * (&l / r.denom())));
    let g = v.coeffs().iter().flat_map(|c| c.coeffs()).fold(<BigInt as Ring>::zero(), |g, c| Integer::gcd(&g, c));
    v.map(|c| c.map(|x| x / &g))
}

fn from_int_biv(a: &IBiv) -> UniPoly<UniPoly<Rational>> {
    a.map(from_int)
}

fn biv_degree_inner(a: &IBiv) -> usize {
    a.coeffs().iter().filter_map(|c| c.degree()).max().unwrap_or(0)
}

/// gcd over Q[v][u] (`u` outer), normalized.
pub fn gcd_qbiv(a: &UniPoly<UniPoly<Rational>>, b: &UniPoly<UniPoly<Rational>>) -> UniPoly<UniPoly<Rational>> {
    if a.is_zero() {
        return b.normalize();
    }
    if b.is_zero() {
        return a.normalize();
    }
    let (ai, bi) = (to_int_biv(a), to_int_biv(b));
    let (ca, cb) = (biv_content(&ai), biv_content(&bi));
    let cg = gcd_int(&ca, &cb);
    let (ap, bp) = (biv_divide_content(&ai, &ca), biv_divide_content(&bi, &cb));
    let g = gcd_biv_primitive(&ap, &bp);
    let g = g.mul(&IBiv::constant(cg));
    from_int_biv(&g).normalize()
}

/// gcd of two bivariate integer polynomials that are primitive over Z[v].
fn gcd_biv_primitive(a: &IBiv, b: &IBiv) -> IBiv {
    if a.deg() <= 0 || b.deg() <= 0 {
        return IBiv::one();
    }
    let la = a.leading().unwrap();
    let lb = b.leading().unwrap();
    // The integer content must stay in gamma, or the scaled images are
    // not integral.
    let gamma = gcd_int(la, lb).scale(&Integer::gcd(&int_content(la), &int_content(lb)));
    let du = a.deg().min(b.deg()) as usize;
    let bound = gamma.deg().max(0) as usize + biv_degree_inner(a).min(biv_degree_inner(b));
    let npts = bound + 1;
    let mut state: Option<(Vec<Vec<BigInt>>, BigInt, usize)> = None;
    for &p in primes() {
        let red = |x: &IBiv| -> Vec<Vec<u64>> {
            x.coeffs().iter().map(|c| c.coeffs().iter().map(|z| reduce(z, p)).collect()).collect()
        };
        let (ar, br) = (red(a), red(b));
        let gam: Vec<u64> = gamma.coeffs().iter().map(|z| reduce(z, p)).collect();
        if ar.last().unwrap().iter().all(|&c| c == 0) || br.last().unwrap().iter().all(|&c| c == 0) {
            continue;
        }
        let mut xs: Vec<u64> = Vec::new();
        let mut gs: Vec<Vec<u64>> = Vec::new();
        let mut best = usize::MAX;
        // Pseudo-random nodes per prime, so an unlucky node is not
        // repeated for every prime.
        let mut seed = p;
        let mut tries = 0usize;
        let mut trivial = false;
        while xs.len() < npts && tries < 4 * npts + 64 {
            tries += 1;
            let point = splitmix(&mut seed) % p;
            if xs.contains(&point) {
                continue;
            }
            let gv = eval_fp(&gam, point, p);
            if gv == 0
                || eval_fp(ar.last().unwrap(), point, p) == 0
                || eval_fp(br.last().unwrap(), point, p) == 0
            {
                continue;
            }
            let av: Vec<u64> = ar.iter().map(|c| eval_fp(c, point, p)).collect();
            let bv: Vec<u64> = br.iter().map(|c| eval_fp(c, point, p)).collect();
            let g = gcd_fp(av, bv, p);
            let d = g.len() - 1;
            if d == 0 {
                trivial = true;
                break;
            }
            if d > best {
                continue;
            }
            if d < best {
                best = d;
                xs.clear();
                gs.clear();
            }
            xs.push(point);
            gs.push(g.iter().map(|&c| mul_mod(c, gv, p)).collect());
        }
        if trivial {
            return IBiv::one();
        }
        if xs.len() < npts || best > du {
            continue;
        }
        // interpolate each u-coefficient in v
        let interp = Interpolator::new(&xs, p);
        let hp: Vec<Vec<u64>> = (0..=best)
            .map(|k| {
                let ys: Vec<u64> = gs.iter().map(|g| g[k]).collect();
                interp.run(&ys)
            })
            .collect();
        let (prev, m) = match state.take() {
            Some((h, m, dd)) if dd == best => (Some(h), m),
            Some((h, m, dd)) if dd < best => {
                state = Some((h, m, dd));
                continue;
            }
            _ => (None, <BigInt as Ring>::one()),
        };
        let (h, newm): (Vec<Vec<BigInt>>, BigInt) = match prev {
            None => (
                hp.iter().map(|row| row.iter().map(|&c| BigInt::from(c)).collect()).collect(),
                BigInt::from(p),
            ),
            Some(h) => (
                h.iter()
                    .zip(&hp)
                    .map(|(hr, pr)| hr.iter().zip(pr).map(|(hc, &r)| crt(hc, &m, r, p)).collect())
                    .collect(),
                &m * BigInt::from(p),
            ),
        };
        let sym = |mm: &BigInt, reduce_first: bool| -> IBiv {
            IBiv::new(
                h.iter()
                    .map(|row| {
                        IPoly::new(
                            row.iter()
                                .map(|c| {
                                    let c = if reduce_first { c.mod_floor(mm) } else { c.clone() };
                                    symmetric(&c, mm)
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        let after = sym(&newm, false);
        if m > <BigInt as Ring>::one() && sym(&m, true) == after {
            let c = biv_content(&after);
            let mut cand = biv_divide_content(&after, &c);
            let g = cand.coeffs().iter().flat_map(|c| c.coeffs()).fold(<BigInt as Ring>::zero(), |g, c| Integer::gcd(&g, c));
            if !g.is_zero() && !g.is_one() {
                cand = cand.map(|c| c.map(|x| x / &g));
            }
            if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
                return cand;
            }
        }
        state = Some((h, newm, best));
    }
    panic!("modular bivariate gcd did not converge");
}
