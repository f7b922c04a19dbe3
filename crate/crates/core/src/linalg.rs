//! Exact linear algebra over the integers and rationals.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type IntVector = Vec<BigInt>;

pub fn int_vec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| int_vec(r)).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> IntVector {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[BigInt], k: &BigInt) -> IntVector {
    a.iter().map(|x| x * k).collect()
}

pub fn is_zero_vec(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Fraction-free Bareiss elimination; exact determinant of a square integer matrix.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn bareiss_det_rat(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let v = &a[c][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det
}

pub fn rank_int(m: &[Vec<BigInt>]) -> usize {
    let q: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    rank_rat(&q)
}

pub fn rank_rat(m: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][c].clone();
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &pivot;
                for j in c..cols {
                    let v = &a[rank][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn inverse_rat(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let pivot = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let v = &a[c][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rat_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &row[t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect()
}

/// Coefficients of `det(xI - m)`, lowest degree first, by Berkowitz's
/// division-free algorithm. Works over any commutative ring.
pub fn berkowitz<T>(m: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let mut highest_first = berkowitz_vector(m);
    highest_first.reverse();
    highest_first
}

fn berkowitz_vector<T>(m: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = m.len();
    if n == 0 {
        return vec![T::one()];
    }
    if n == 1 {
        return vec![T::one(), -m[0][0].clone()];
    }
    let a = &m[0][0];
    let row: Vec<T> = m[0][1..].to_vec();
    let col: Vec<T> = m[1..].iter().map(|r| r[0].clone()).collect();
    let sub: Vec<Vec<T>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();

    // diags = [1, -a, -R C, -R A C, -R A^2 C, ...]
    let mut diags = vec![T::one(), -a.clone()];
    let mut v = col;
    for i in 0..n - 1 {
        let rv = row.iter().zip(&v).fold(T::zero(), |acc, (x, y)| &acc + &(x * y));
        diags.push(-rv);
        if i + 1 < n - 1 {
            v = sub
                .iter()
                .map(|r| r.iter().zip(&v).fold(T::zero(), |acc, (x, y)| &acc + &(x * y)))
                .collect();
        }
    }
    let inner = berkowitz_vector(&sub);
    // Toeplitz (n+1) x n lower-triangular with entries diags[i - j]
    (0..=n)
        .map(|i| {
            (0..n.min(i + 1)).fold(T::zero(), |acc, j| &acc + &(&diags[i - j] * &inner[j]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = int_matrix(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = 2*(-26) + (-2) = -54
        assert_eq!(bareiss_det(&m), BigInt::from(-54));
        let singular = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(bareiss_det(&singular), BigInt::zero());
        let needs_swap = int_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(bareiss_det(&needs_swap), BigInt::from(-1));
    }

    #[test]
    fn berkowitz_small_cases() {
        let fib = int_matrix(&[&[1, 1], &[1, 0]]);
        assert_eq!(berkowitz(&fib), int_vec(&[-1, -1, 1]));
        assert_eq!(berkowitz(&int_matrix(&[&[2]])), int_vec(&[-2, 1]));
        let empty: Vec<Vec<BigInt>> = vec![];
        assert_eq!(berkowitz(&empty), int_vec(&[1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m: Vec<Vec<BigRational>> = [[2, 1], [7, 4]]
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let inv = inverse_rat(&m).unwrap();
        let prod = rat_mat_mul(&m, &inv);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        assert_eq!(rank_int(&int_matrix(&[&[1, 2, 3], &[2, 4, 6]])), 1);
    }
}
