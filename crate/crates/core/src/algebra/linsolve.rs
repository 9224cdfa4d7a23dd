//! Exact linear algebra: fraction-free (Bareiss) elimination over a gcd
//! domain, and a word-sized modular rank used as a fast infeasibility test.

use num_bigint::BigInt;

use super::fp::{Fp, P};
use super::frac::{Frac, QPoly, RatFuncT};
use super::poly::UniPoly;
use super::rational::Rational;
use super::ring::{Field, GcdDomain, Ring};

#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<F> {
    Inconsistent,
    Solved {
        particular: Vec<F>,
        /// Basis of the null space of the coefficient matrix.
        kernel: Vec<Vec<F>>,
    },
}

impl<F> LinearSolution<F> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, LinearSolution::Solved { .. })
    }
}

/// Row echelon form produced by Bareiss elimination on the first `ncols`
/// columns; any further columns are carried along.
struct Echelon<D> {
    rows: Vec<Vec<D>>,
    pivots: Vec<usize>,
}

fn bareiss<D: GcdDomain>(a: Vec<Vec<D>>, ncols: usize) -> Echelon<D> {
    bareiss_by(a, ncols, |_| 0)
}

/// Bareiss elimination choosing, in each column, the pivot of least `size`.
fn bareiss_by<D: GcdDomain>(
    mut a: Vec<Vec<D>>,
    ncols: usize,
    size: impl Fn(&D) -> usize,
) -> Echelon<D> {
    let nrows = a.len();
    let width = a.first().map_or(0, |r| r.len());
    let mut prev = D::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| size(&a[i][c]))
        else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..width {
                let v = if lead.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    piv.mul(&row[j])
                } else {
                    piv.mul(&row[j]).sub(&lead.mul(&pivot_row[j]))
                };
                row[j] = if prev.is_one() {
                    v
                } else {
                    v.exact_div(&prev).expect("Bareiss division is exact")
                };
            }
            row[c] = D::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots }
}

/// Rank of a matrix over a gcd domain.
pub fn rank<D: GcdDomain>(m: Vec<Vec<D>>) -> usize {
    let n = m.first().map_or(0, |r| r.len());
    bareiss(m, n).pivots.len()
}

/// Solves `m * x = rhs` over the fraction field of `D`.
pub fn solve_fraction_free<D: GcdDomain>(m: &[Vec<D>], rhs: &[D]) -> LinearSolution<Frac<D>> {
    solve_fraction_free_by(m, rhs, |_| 0)
}

fn solve_fraction_free_by<D: GcdDomain>(
    m: &[Vec<D>],
    rhs: &[D],
    size: impl Fn(&D) -> usize,
) -> LinearSolution<Frac<D>> {
    assert_eq!(m.len(), rhs.len(), "row count mismatch");
    let ncols = m.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<D>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), ncols, "ragged matrix");
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let ech = bareiss_by(aug, ncols, size);
    let rank = ech.pivots.len();
    if ech.rows[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let back = |rhs_col: Option<usize>, free: Option<usize>| -> Vec<Frac<D>> {
        let mut x = vec![Frac::<D>::zero(); ncols];
        if let Some(f) = free {
            x[f] = Frac::one();
        }
        for k in (0..rank).rev() {
            let row = &ech.rows[k];
            let pc = ech.pivots[k];
            let mut acc = match rhs_col {
                Some(c) => Frac::from_base(row[c].clone()),
                None => Frac::zero(),
            };
            for j in pc + 1..ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = acc.sub(&Frac::from_base(row[j].clone()).mul(&x[j]));
                }
            }
            x[pc] = acc.div(&Frac::from_base(row[pc].clone()));
        }
        x
    };
    let particular = back(Some(ncols), None);
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let kernel = free_cols.into_iter().map(|f| back(None, Some(f))).collect();
    LinearSolution::Solved { particular, kernel }
}

/// Solves a linear system with coefficients in Q(t).
///
/// Rows are cleared of all denominators and eliminated fraction-free over
/// Z[t], so intermediate expressions stay integral.
pub fn solve_ratfunc(m: &[Vec<RatFuncT>], rhs: &[RatFuncT]) -> LinearSolution<RatFuncT> {
    let mut pm = Vec::with_capacity(m.len());
    let mut pr = Vec::with_capacity(m.len());
    for (row, b) in m.iter().zip(rhs) {
        let (r, b) = integral_row(row, b);
        pm.push(r);
        pr.push(b);
    }
    let to_q = |f: Frac<ZPoly>| {
        let (n, d) = f.into_parts();
        RatFuncT::new(to_qpoly(&n), to_qpoly(&d))
    };
    match solve_fraction_free_by::<ZPoly>(&pm, &pr, |p| p.coeffs().len()) {
        LinearSolution::Inconsistent => LinearSolution::Inconsistent,
        LinearSolution::Solved { particular, kernel } => LinearSolution::Solved {
            particular: particular.into_iter().map(to_q).collect(),
            kernel: kernel
                .into_iter()
                .map(|v| v.into_iter().map(to_q).collect())
                .collect(),
        },
    }
}

pub(super) type ZPoly = UniPoly<BigInt>;

pub(super) fn to_qpoly(p: &ZPoly) -> QPoly {
    p.map(|c| Rational::from_integer(c.clone()))
}

/// A row of Q(t) entries scaled to a row over Z[t].
pub(super) fn integral_row(row: &[RatFuncT], b: &RatFuncT) -> (Vec<ZPoly>, ZPoly) {
    let mut l = QPoly::one();
    for e in row.iter().chain(std::iter::once(b)) {
        let d = e.den();
        if !d.is_one() {
            let g = l.gcd(d);
            l = l.mul(&d.exact_div(&g).expect("gcd divides"));
        }
    }
    let polys: Vec<QPoly> = row
        .iter()
        .chain(std::iter::once(b))
        .map(|e| e.num().mul(&l.exact_div(e.den()).expect("lcm is a multiple")))
        .collect();
    let z = polys
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let mut out: Vec<ZPoly> = polys
        .iter()
        .map(|p| ZPoly::new(p.coeffs().iter().map(|c| c.numer() * (&z / c.denom())).collect()))
        .collect();
    let b = out.pop().expect("right-hand side");
    (out, b)
}

/// Solves a linear system with rational coefficients through integer Bareiss.
pub fn solve_rational(m: &[Vec<Rational>], rhs: &[Rational]) -> LinearSolution<Rational> {
    let mut im = Vec::with_capacity(m.len());
    let mut ir = Vec::with_capacity(m.len());
    for (row, b) in m.iter().zip(rhs) {
        let l = row
            .iter()
            .chain(std::iter::once(b))
            .fold(BigInt::from(1), |acc, e| num_integer::Integer::lcm(&acc, e.denom()));
        let scale = |e: &Rational| e.numer() * (&l / e.denom());
        im.push(row.iter().map(scale).collect());
        ir.push(scale(b));
    }
    let to_q = |f: Frac<BigInt>| {
        let (n, d) = f.into_parts();
        Rational::new(n, d)
    };
    match solve_fraction_free::<BigInt>(&im, &ir) {
        LinearSolution::Inconsistent => LinearSolution::Inconsistent,
        LinearSolution::Solved { particular, kernel } => LinearSolution::Solved {
            particular: particular.into_iter().map(to_q).collect(),
            kernel: kernel
                .into_iter()
                .map(|v| v.into_iter().map(to_q).collect())
                .collect(),
        },
    }
}

/// A Mersenne prime modulus for the modular rank computation.
pub const RANK_PRIME: u64 = P;

fn mulmod(a: u64, b: u64) -> u64 {
    Fp::new(a).mul(&Fp::new(b)).value()
}

/// Reduces a rational modulo `RANK_PRIME`; `None` when the denominator
/// vanishes modulo the prime.
pub fn reduce_mod(r: &Rational) -> Option<u64> {
    Fp::from_rational(r).map(Fp::value)
}

/// Rank of a matrix of residues modulo `RANK_PRIME`.
///
/// The rank of the reduction never exceeds the rank over Q, so a full
/// column rank here certifies a trivial rational null space.
pub fn rank_mod(mut a: Vec<Vec<u64>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let inv = Fp::new(a[r][c]).inv().value();
        let (top, bottom) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mulmod(row[c], inv);
            for j in c..ncols {
                let s = mulmod(f, prow[j]);
                row[j] = (row[j] + RANK_PRIME - s) % RANK_PRIME;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn rational_system_with_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let b = vec![int(6), int(12), int(2)];
        let LinearSolution::Solved { particular, kernel } = solve_rational(&m, &b) else {
            panic!("system is consistent");
        };
        assert_eq!(kernel.len(), 1);
        for (row, rhs) in m.iter().zip(&b) {
            let dot: Rational = row.iter().zip(&particular).map(|(a, x)| a * x).sum();
            assert_eq!(&dot, rhs);
            let k: Rational = row.iter().zip(&kernel[0]).map(|(a, x)| a * x).sum();
            assert_eq!(k, int(0));
        }
    }

    #[test]
    fn inconsistent_detected() {
        let m = q(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve_rational(&m, &[int(1), int(3)]), LinearSolution::Inconsistent);
    }

    #[test]
    fn ratfunc_system() {
        // t*a + b = 1, a - b = 1/t  =>  a = (1 + 1/t)/(t + 1) = 1/t, b = 0
        let t = RatFuncT::t();
        let one = RatFuncT::one();
        let m = vec![vec![t.clone(), one.clone()], vec![one.clone(), one.neg()]];
        let b = vec![one.clone(), t.inv()];
        let LinearSolution::Solved { particular, kernel } = solve_ratfunc(&m, &b) else {
            panic!("system is consistent");
        };
        assert!(kernel.is_empty());
        assert_eq!(particular[0], t.inv());
        assert!(particular[1].is_zero());
    }

    #[test]
    fn modular_rank_matches_exact() {
        let m = q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let red: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|v| reduce_mod(v).unwrap()).collect()).collect();
        assert_eq!(rank_mod(red), 2);
        assert_eq!(reduce_mod(&rat(1, 2)).map(|h| mulmod(h, 2)), Some(1));
        let ints: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|v| v.numer().clone()).collect()).collect();
        assert_eq!(rank(ints), 2);
    }
}
