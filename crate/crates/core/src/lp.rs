//! Exact feasibility LP over the rationals: phase-one simplex with Bland's
//! rule, so pivots and witnesses are reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Some `x >= 0` with `a x = b`, or `None` when infeasible. The returned
/// point is re-checked exactly before it is handed back.
pub fn nonneg_solution(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // columns: n originals, m artificials, then the right-hand side
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    // objective row: minimize the sum of artificials, stored as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let z = &t[m];
        // Bland: smallest index with a negative reduced cost
        let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            // unbounded in phase one cannot happen (objective bounded below by 0)
            break;
        };
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    let ok = a.iter().zip(b).all(|(row, bi)| {
        row.iter().zip(&x).fold(BigRational::zero(), |acc, (c, v)| acc + c * v) == *bi
    }) && x.iter().all(|v| !v.is_negative());
    ok.then_some(x)
}

fn pivot(t: &mut [Vec<BigRational>], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Some `0 <= x <= upper` with `a x = b`.
pub fn bounded_solution(a: &[Vec<BigRational>], b: &[BigRational], upper: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = upper.len();
    // x + s = upper with slacks s >= 0
    let mut big: Vec<Vec<BigRational>> = Vec::with_capacity(m + n);
    for row in a {
        let mut r = row.clone();
        r.extend((0..n).map(|_| BigRational::zero()));
        big.push(r);
    }
    for i in 0..n {
        let mut r = vec![BigRational::zero(); 2 * n];
        r[i] = BigRational::one();
        r[n + i] = BigRational::one();
        big.push(r);
    }
    let mut rhs = b.to_vec();
    rhs.extend(upper.iter().cloned());
    nonneg_solution(&big, &rhs).map(|mut x| {
        x.truncate(n);
        x
    })
}

/// Coefficients `beta >= 0` with `sum beta_i gens_i = target`.
pub fn cone_combination(gens: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let (a, b) = column_system(gens, target);
    nonneg_solution(&a, &b)
}

/// Coefficients `0 <= t_i <= 1` with `sum t_i gens_i = target`.
pub fn zonotope_combination(gens: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let (a, b) = column_system(gens, target);
    let ones = vec![BigRational::one(); gens.len()];
    bounded_solution(&a, &b, &ones)
}

fn column_system(gens: &[Vec<BigInt>], target: &[BigInt]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let d = target.len();
    let a = (0..d)
        .map(|row| gens.iter().map(|g| BigRational::from_integer(g[row].clone())).collect())
        .collect();
    let b = target.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    (a, b)
}

/// Exact check of `sum coeffs_i gens_i = target`.
pub fn resubstitutes(gens: &[Vec<BigInt>], coeffs: &[BigRational], target: &[BigInt]) -> bool {
    (0..target.len()).all(|row| {
        let s = gens
            .iter()
            .zip(coeffs)
            .fold(BigRational::zero(), |acc, (g, c)| acc + c * BigRational::from_integer(g[row].clone()));
        s == BigRational::from_integer(target[row].clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_matrix, int_vec};

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn standard_basis_cone() {
        let gens = int_matrix(&[&[1, 0], &[0, 1]]);
        let beta = cone_combination(&gens, &int_vec(&[3, 2])).unwrap();
        assert_eq!(beta, vec![r(3), r(2)]);
        assert!(cone_combination(&gens, &int_vec(&[-1, 2])).is_none());
    }

    #[test]
    fn eigen_ray() {
        let gens = int_matrix(&[&[1, 1]]);
        assert_eq!(cone_combination(&gens, &int_vec(&[2, 2])).unwrap(), vec![r(2)]);
        assert!(cone_combination(&gens, &int_vec(&[2, 3])).is_none());
    }

    #[test]
    fn redundant_generators_and_fractions() {
        let gens = int_matrix(&[&[2, 0], &[0, 2], &[1, 1]]);
        let target = int_vec(&[1, 3]);
        let beta = cone_combination(&gens, &target).unwrap();
        assert!(resubstitutes(&gens, &beta, &target));
        assert!(beta.iter().all(|b| !b.is_negative()));
    }

    #[test]
    fn zonotope_membership() {
        let gens = int_matrix(&[&[1, 0], &[0, 1]]);
        assert!(zonotope_combination(&gens, &int_vec(&[1, 1])).is_some());
        assert!(zonotope_combination(&gens, &int_vec(&[2, 1])).is_none());
        let t = zonotope_combination(&int_matrix(&[&[2, 0], &[0, 2]]), &int_vec(&[1, 2])).unwrap();
        assert_eq!(t, vec![BigRational::new(1.into(), 2.into()), r(1)]);
    }

    #[test]
    fn degenerate_cycling_case_terminates() {
        // a classic degenerate system; Bland's rule must not cycle
        let a: Vec<Vec<BigRational>> = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]
            .iter()
            .map(|row| row.iter().map(|&x| r(x)).collect())
            .collect();
        let b = vec![r(0), r(0), r(0)];
        let x = nonneg_solution(&a, &b).unwrap();
        assert!(x.iter().all(|v| !v.is_negative()));
    }
}
