//! Linear systems over Q(t) solved through images.
//!
//! The system is evaluated at points `t = t_i` modulo word primes; each
//! coordinate of the solution is recovered as a rational function of `t`
//! mod `p`, the coefficients are combined across primes and lifted to Q by
//! rational number reconstruction. A lifted vector is only accepted after an
//! exact check over Q(t), and inconsistency is only reported when the
//! generic rank is pinned down exactly (a specialization bounds the rank from
//! below, verified kernel vectors bound it from above). When the images do
//! not settle, the exact Bareiss solver decides.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::frac::{QPoly, RatFuncT};
use super::linsolve::{integral_row, solve_ratfunc, to_qpoly, LinearSolution, ZPoly};
use super::modgcd::{crt, inv_mod, mul_mod, primes, reduce, splitmix, trim, Interpolator};
use super::rational::Rational;
use super::ring::{GcdDomain, Ring};

/// Numerator and denominator coefficients combined over several primes.
type CrtPair = (Vec<BigInt>, Vec<BigInt>);

/// Attempts with a fresh specialization before falling back to Bareiss.
const ATTEMPTS: usize = 3;
/// Primes tried while lifting one vector.
const MAX_PRIMES: usize = 64;
/// Largest number of evaluation points per prime.
const MAX_POINTS: usize = 2048;

/// A particular solution of `m z = rhs` with free unknowns set to zero, or
/// `None` when the system is inconsistent. Pivot unknowns are chosen
/// greedily from the left, as in [`solve_ratfunc`].
pub fn solve_ratfunc_particular(m: &[Vec<RatFuncT>], rhs: &[RatFuncT]) -> Option<Vec<RatFuncT>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let (a, b): (Vec<Vec<ZPoly>>, Vec<ZPoly>) = m.iter().zip(rhs).map(|(r, b)| integral_row(r, b)).unzip();
    let mut seed = 0x5eed_u64;
    for attempt in 0..ATTEMPTS {
        let p = primes()[attempt];
        let t0 = splitmix(&mut seed) % p;
        let ev = |z: &ZPoly| eval_z(z, t0, p);
        let img: Vec<Vec<u64>> = a
            .iter()
            .zip(&b)
            .map(|(row, bb)| row.iter().chain(std::iter::once(bb)).map(ev).collect())
            .collect();
        let (cols, rows, rhs_free) = echelon_fp(img, ncols, p);
        let sq: Vec<Vec<ZPoly>> = rows.iter().map(|&i| cols.iter().map(|&c| a[i][c].clone()).collect()).collect();
        let check = |target: &dyn Fn(usize) -> ZPoly, z: &[RatFuncT]| {
            (0..a.len()).all(|i| {
                let lhs: Vec<(&ZPoly, &RatFuncT)> = cols.iter().map(|&c| &a[i][c]).zip(z).collect();
                combination_equals(&lhs, &target(i))
            })
        };
        if rhs_free {
            // b is independent at t0; the generic rank of the coefficient
            // matrix must equal |cols| for this to prove inconsistency.
            let mut proven = true;
            for j in (0..ncols).filter(|c| !cols.contains(c)) {
                let target = |i: usize| a[i][j].neg();
                let v: Vec<ZPoly> = rows.iter().map(|&i| target(i)).collect();
                if lift(&sq, &v, &mut seed, |z| check(&target, z)).is_none() {
                    proven = false;
                    break;
                }
            }
            if proven {
                return None;
            }
            continue;
        }
        let target = |i: usize| b[i].clone();
        let v: Vec<ZPoly> = rows.iter().map(|&i| b[i].clone()).collect();
        if let Some(z) = lift(&sq, &v, &mut seed, |z| check(&target, z)) {
            let mut out = vec![RatFuncT::zero(); ncols];
            for (&c, zc) in cols.iter().zip(z) {
                out[c] = zc;
            }
            return Some(out);
        }
    }
    match solve_ratfunc(m, rhs) {
        LinearSolution::Inconsistent => None,
        LinearSolution::Solved { particular, .. } => Some(particular),
    }
}

fn eval_z(z: &ZPoly, t: u64, p: u64) -> u64 {
    z.coeffs().iter().rev().fold(0, |acc, c| (mul_mod(acc, t, p) + reduce(c, p)) % p)
}

/// Gaussian elimination on the first `ncols` columns with greedy pivots.
/// Returns the pivot columns, the original indices of the pivot rows, and
/// whether the last column is independent of the pivot columns.
fn echelon_fp(mut a: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<usize>, Vec<usize>, bool) {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    let (mut cols, mut r) = (Vec::new(), 0);
    for c in 0..=ncols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        if c == ncols {
            return (cols, idx[..r].to_vec(), true);
        }
        a.swap(r, piv);
        idx.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..=ncols {
                row[j] = (row[j] + p - mul_mod(f, prow[j], p)) % p;
            }
        }
        cols.push(c);
        r += 1;
    }
    (cols, idx[..r].to_vec(), false)
}

/// Exact test of `sum a_k z_k = target` over Q(t).
fn combination_equals(terms: &[(&ZPoly, &RatFuncT)], target: &ZPoly) -> bool {
    let mut l = QPoly::one();
    for (_, z) in terms {
        if !z.den().is_one() {
            let g = l.gcd(z.den());
            l = l.mul(&z.den().exact_div(&g).expect("gcd divides"));
        }
    }
    let mut acc = QPoly::zero();
    for (a, z) in terms {
        if z.is_zero() || a.is_zero() {
            continue;
        }
        let scaled = z.num().mul(&l.exact_div(z.den()).expect("lcm is a multiple"));
        acc = acc.add(&to_qpoly(a).mul(&scaled));
    }
    acc == to_qpoly(target).mul(&l)
}

/// Solution of the square system `s z = v` (nonsingular at a generic point),
/// lifted from images and accepted by `accept`.
fn lift(
    s: &[Vec<ZPoly>],
    v: &[ZPoly],
    seed: &mut u64,
    accept: impl Fn(&[RatFuncT]) -> bool,
) -> Option<Vec<RatFuncT>> {
    let n = v.len();
    if n == 0 {
        return accept(&[]).then(Vec::new);
    }
    // per coordinate: (numerator, denominator) coefficients, and the modulus
    let mut acc: Option<(Vec<CrtPair>, BigInt)> = None;
    let mut shape: Option<Vec<(usize, usize)>> = None;
    let mut last: Option<Vec<RatFuncT>> = None;
    for &p in primes().iter().skip(ATTEMPTS).take(MAX_PRIMES) {
        let Some(img) = images_mod_p(s, v, p, seed) else {
            continue;
        };
        let sh: Vec<(usize, usize)> = img.iter().map(|(a, b)| (a.len(), b.len())).collect();
        match &shape {
            Some(old) if *old == sh => {}
            Some(old) if total(old) < total(&sh) => continue,
            _ => {
                shape = Some(sh);
                acc = None;
                last = None;
            }
        }
        let (coeffs, m) = match acc.take() {
            None => (
                img.iter()
                    .map(|(a, b)| (a.iter().map(|&c| BigInt::from(c)).collect(), b.iter().map(|&c| BigInt::from(c)).collect()))
                    .collect::<Vec<(Vec<BigInt>, Vec<BigInt>)>>(),
                BigInt::from(p),
            ),
            Some((prev, m)) => (
                prev.iter()
                    .zip(&img)
                    .map(|((pa, pb), (ia, ib))| {
                        let lift = |h: &[BigInt], r: &[u64]| h.iter().zip(r).map(|(h, &r)| crt(h, &m, r, p)).collect();
                        (lift(pa, ia), lift(pb, ib))
                    })
                    .collect(),
                &m * BigInt::from(p),
            ),
        };
        let cand: Option<Vec<RatFuncT>> = coeffs
            .iter()
            .map(|(a, b)| {
                let num: Option<Vec<Rational>> = a.iter().map(|c| rational_reconstruction(c, &m)).collect();
                let den: Option<Vec<Rational>> = b.iter().map(|c| rational_reconstruction(c, &m)).collect();
                let den = QPoly::new(den?);
                (!den.is_zero()).then(|| RatFuncT::new(QPoly::new(num.unwrap_or_default()), den))
            })
            .collect();
        if let Some(c) = cand {
            if last.as_ref() == Some(&c) && accept(&c) {
                return Some(c);
            }
            last = Some(c);
        }
        acc = Some((coeffs, m));
    }
    None
}

fn total(shape: &[(usize, usize)]) -> usize {
    shape.iter().map(|(a, b)| a + b).sum()
}

/// The solution mod `p` as (numerator, monic denominator) coefficient
/// vectors, recovered from enough evaluation points to be stable.
#[allow(clippy::type_complexity)]
fn images_mod_p(s: &[Vec<ZPoly>], v: &[ZPoly], p: u64, seed: &mut u64) -> Option<Vec<(Vec<u64>, Vec<u64>)>> {
    let n = v.len();
    let red = |z: &ZPoly| -> Vec<u64> { z.coeffs().iter().map(|c| reduce(c, p)).collect() };
    let sr: Vec<Vec<Vec<u64>>> = s.iter().map(|row| row.iter().map(red).collect()).collect();
    let vr: Vec<Vec<u64>> = v.iter().map(red).collect();
    let ev = |c: &[u64], x: u64| c.iter().rev().fold(0, |acc, &k| (mul_mod(acc, x, p) + k) % p);
    let mut xs: Vec<u64> = Vec::new();
    let mut ys: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut want = 8usize;
    const CHECKS: usize = 3;
    let mut failures = 0;
    while want <= MAX_POINTS {
        while xs.len() < want + CHECKS {
            let x = splitmix(seed) % p;
            if xs.contains(&x) {
                continue;
            }
            let mat: Vec<Vec<u64>> = (0..n)
                .map(|i| {
                    let mut row: Vec<u64> = sr[i].iter().map(|c| ev(c, x)).collect();
                    row.push(ev(&vr[i], x));
                    row
                })
                .collect();
            match solve_square_fp(mat, p) {
                Some(z) => {
                    xs.push(x);
                    for (k, zk) in z.into_iter().enumerate() {
                        ys[k].push(zk);
                    }
                }
                None => {
                    failures += 1;
                    if failures > 16 + xs.len() {
                        return None;
                    }
                }
            }
        }
        let fit = &xs[..want];
        let interp = Interpolator::new(fit, p);
        let mut out = Vec::with_capacity(n);
        let mut ok = true;
        for y in &ys {
            let Some((num, den)) = rational_interpolation(&interp, fit, &y[..want], p) else {
                ok = false;
                break;
            };
            let fits = xs[want..want + CHECKS].iter().zip(&y[want..want + CHECKS]).all(|(&x, &yy)| {
                let d = ev(&den, x);
                d != 0 && mul_mod(ev(&num, x), inv_mod(d, p), p) == yy
            });
            if !fits {
                ok = false;
                break;
            }
            out.push((num, den));
        }
        if ok {
            return Some(out);
        }
        want *= 2;
    }
    None
}

/// Solves an `n x (n + 1)` augmented system mod `p`; `None` if singular.
fn solve_square_fp(mut a: Vec<Vec<u64>>, p: u64) -> Option<Vec<u64>> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n).find(|&i| a[i][c] != 0)?;
        a.swap(c, piv);
        let inv = inv_mod(a[c][c], p);
        for x in &mut a[c][c..] {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, q) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - mul_mod(f, *q, p)) % p;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n]).collect())
}

/// Balanced rational function through the points: numerator of degree
/// `< n/2`, monic denominator of degree `<= n/2`.
fn rational_interpolation(interp: &Interpolator, xs: &[u64], ys: &[u64], p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = xs.len();
    let mut r1 = interp.run(ys);
    trim(&mut r1);
    if r1.is_empty() {
        return Some((Vec::new(), vec![1]));
    }
    // M = prod (t - x_i)
    let mut r0 = vec![1u64];
    for &x in xs {
        let mut next = vec![0u64; r0.len() + 1];
        for (k, &c) in r0.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - mul_mod(c, x, p)) % p;
        }
        r0 = next;
    }
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    while 2 * (r1.len() - 1) >= n {
        let (q, r) = divrem_fp(&r0, &r1, p);
        let s = sub_fp(&s0, &mul_fp(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        if r1.is_empty() {
            return None;
        }
    }
    if 2 * (s1.len() - 1) > n {
        return None;
    }
    let inv = inv_mod(*s1.last()?, p);
    let scale = |v: &[u64]| v.iter().map(|&c| mul_mod(c, inv, p)).collect::<Vec<u64>>();
    Some((scale(&r1), scale(&s1)))
}

fn mul_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut v);
    v
}

fn sub_fp(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut v = vec![0u64; a.len().max(b.len())];
    for (i, x) in v.iter_mut().enumerate() {
        let (u, w) = (a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
        *x = (u + p - w) % p;
    }
    trim(&mut v);
    v
}

fn divrem_fp(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv, p);
        let off = top - db;
        q[off] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[off + j] = (r[off + j] + p - mul_mod(c, bj, p)) % p;
        }
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

/// `a/b` with `|a|, b <= sqrt(m/2)` and `a = b u mod m`, if it exists.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::from(0), BigInt::from(1));
    while r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        let s = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if s1.abs() > bound || Integer::gcd(&r1, &s1) != BigInt::from(1) {
        return None;
    }
    Some(Rational::new(r1, s1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::ring::Field;

    fn tpoly(cs: &[i64]) -> RatFuncT {
        RatFuncT::from_base(QPoly::from_i64s(cs))
    }

    #[test]
    fn reconstructs_rationals() {
        let m = BigInt::from(primes()[0]) * BigInt::from(primes()[1]);
        let inv13 = BigInt::from(13).extended_gcd(&m).x.mod_floor(&m);
        let u = (BigInt::from(-7) * inv13).mod_floor(&m);
        assert_eq!(rational_reconstruction(&u, &m), Some(rat(-7, 13)));
    }

    #[test]
    fn agrees_with_bareiss() {
        let t = RatFuncT::t();
        // (t a + b = 1, a - b = 1/t) and a dependent third row
        let m = vec![
            vec![t.clone(), RatFuncT::one(), tpoly(&[0, 0, 1])],
            vec![RatFuncT::one(), RatFuncT::one().neg(), tpoly(&[1, 1])],
            vec![t.add(&RatFuncT::one()), RatFuncT::zero(), tpoly(&[1, 1, 1])],
        ];
        let b = vec![RatFuncT::one(), t.inv(), RatFuncT::one().add(&t.inv())];
        let fast = solve_ratfunc_particular(&m, &b).expect("consistent");
        let LinearSolution::Solved { particular, .. } = solve_ratfunc(&m, &b) else {
            panic!("consistent");
        };
        assert_eq!(fast, particular);
        let bad = vec![RatFuncT::one(), t.inv(), RatFuncT::zero()];
        assert!(solve_ratfunc_particular(&m, &bad).is_none());
        assert_eq!(solve_ratfunc(&m, &bad), LinearSolution::Inconsistent);
    }
}
