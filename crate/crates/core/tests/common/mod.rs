#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Faddeev-LeVerrier over the rationals; constant term first.
pub fn charpoly_oracle(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| q(&a[i][l]) * &m[l][j]).sum();
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let tr: BigRational = (0..n).flat_map(|i| (0..n).map(move |l| (i, l))).map(|(i, l)| q(&a[i][l]) * &m[l][i]).sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

pub fn positive_pattern(a: &[Vec<BigInt>]) -> Vec<Vec<bool>> {
    a.iter().map(|r| r.iter().map(|x| x.is_positive()).collect()).collect()
}

pub fn irreducible_oracle(a: &[Vec<BigInt>]) -> bool {
    let n = a.len();
    let mut r = positive_pattern(a);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r.iter().all(|row| row.iter().all(|&b| b))
}

/// gcd of the lengths of closed walks of length <= 2n through vertex 0.
pub fn period_oracle(a: &[Vec<BigInt>]) -> u64 {
    let n = a.len();
    let base = positive_pattern(a);
    let mut p = base.clone();
    let mut g = 0u64;
    for len in 1..=2 * n as u64 {
        if (0..n).any(|i| p[i][i]) {
            g = num_integer::gcd(g, len);
        }
        p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|l| p[i][l] && base[l][j])).collect()).collect();
    }
    g
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
