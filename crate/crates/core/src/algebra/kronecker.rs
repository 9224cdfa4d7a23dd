//! Polynomial products over Z by packing coefficients into one integer.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::poly::UniPoly;
use super::rational::Rational;

fn bits(v: &[BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

/// Coefficients of `a * b`. Both inputs nonempty.
pub fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len() + b.len() - 1;
    let (ba, bb) = (bits(a), bits(b));
    if ba == 0 || bb == 0 {
        return vec![BigInt::zero(); n];
    }
    let terms = a.len().min(b.len()) as u64;
    // one extra bit for the sign
    let need = ba + bb + (64 - terms.leading_zeros() as u64) + 1;
    let words = need.div_ceil(64) as usize;
    let pack = |v: &[BigInt]| {
        let mut acc = BigInt::zero();
        for c in v.iter().rev() {
            acc <<= 64 * words;
            acc += c;
        }
        acc
    };
    let prod = pack(a) * pack(b);
    unpack(&prod, n, words)
}

/// Splits a two's complement integer into `n` signed chunks of `words` words.
fn unpack(p: &BigInt, n: usize, words: usize) -> Vec<BigInt> {
    let mut bytes = p.to_signed_bytes_le();
    let fill = if p.sign() == Sign::Minus { 0xff } else { 0 };
    bytes.resize(n * words * 8, fill);
    let mut out = Vec::with_capacity(n);
    let mut carry = false;
    let half = BigInt::one() << (64 * words - 1);
    let full = BigInt::one() << (64 * words);
    for chunk in bytes.chunks(words * 8).take(n) {
        let mut v = BigInt::from_bytes_le(Sign::Plus, chunk);
        if carry {
            v += 1;
        }
        carry = v >= half;
        if carry {
            v -= &full;
        }
        out.push(v);
    }
    out
}

/// Common denominator and integer numerators.
fn clear(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let n = v.iter().map(|c| c.numer() * (&d / c.denom())).collect();
    (n, d)
}

pub fn mul_q(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (an, ad) = clear(a);
    let (bn, bd) = clear(b);
    let d = ad * bd;
    mul_z(&an, &bn).into_iter().map(|n| Rational::new(n, d.clone())).collect()
}

/// Product of polynomials over `Q[t]`, packed as `x^i t^j -> z^(i L + j)`.
pub fn mul_qbiv(a: &[UniPoly<Rational>], b: &[UniPoly<Rational>]) -> Vec<UniPoly<Rational>> {
    let la = a.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let lb = b.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let n = a.len() + b.len() - 1;
    if la == 0 || lb == 0 {
        return vec![UniPoly::new(vec![]); n];
    }
    let stride = la + lb - 1;
    let flat = |v: &[UniPoly<Rational>]| {
        let mut out = vec![Rational::zero(); v.len() * stride];
        for (i, p) in v.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                out[i * stride + j] = c.clone();
            }
        }
        // trailing zeros of the last row do not matter for the product
        out.truncate((v.len() - 1) * stride + v.last().map_or(0, |p| p.coeffs().len()).max(1));
        out
    };
    let prod = mul_q(&flat(a), &flat(b));
    let mut rows: Vec<Vec<Rational>> = vec![Vec::with_capacity(stride); n];
    for (k, c) in prod.into_iter().enumerate() {
        rows[k / stride].push(c);
    }
    rows.into_iter().map(UniPoly::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn school(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        v
    }

    #[test]
    fn signed_products() {
        let big = BigInt::from(3).pow(90u32);
        let a: Vec<BigInt> = vec![(-7).into(), big.clone(), BigInt::zero(), (-&big) * 5, 1.into()];
        let b: Vec<BigInt> = vec![(&big * &big), (-1).into(), (-3).into()];
        assert_eq!(mul_z(&a, &b), school(&a, &b));
        assert_eq!(mul_z(&b, &b), school(&b, &b));
        let neg: Vec<BigInt> = a.iter().map(|c| -c).collect();
        assert_eq!(mul_z(&neg, &a), school(&neg, &a));
    }

    #[test]
    fn bivariate_products() {
        let p = |v: Vec<(i64, i64)>| UniPoly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect());
        let a = vec![p(vec![(1, 2), (-3, 1)]), p(vec![]), p(vec![(0, 1), (0, 1), (5, 7)])];
        let b = vec![p(vec![(-2, 3)]), p(vec![(1, 1), (1, 1), (1, 1), (-1, 5)])];
        let mut want = vec![UniPoly::new(vec![]); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                want[i + j] = crate::algebra::Ring::add(&want[i + j], &crate::algebra::Ring::mul(x, y));
            }
        }
        assert_eq!(mul_qbiv(&a, &b), want);
    }
}
