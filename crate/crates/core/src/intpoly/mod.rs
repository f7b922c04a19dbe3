//! Monic integer polynomials: parsing, exact evaluation, discriminants and
//! the squarefree / rational-root sanity gate. Certified root isolation
//! lives in [`roots`].

pub mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, IntMatrix};

pub use roots::{certified_roots, CertifiedRoot};

/// Monic polynomial with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::InvalidInput(format!(
                "polynomial must be monic, leading coefficient is {}",
                coeffs.last().unwrap()
            )));
        }
        Ok(IntPolynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses `"-1,-1,0,1"` (constant term first) as `x^3 - x - 1`.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {:?} in {:?}", t.trim(), s)))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            return Err(Error::Parse("polynomial must have degree at least 1".into()));
        }
        Self::new(coeffs).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            other => other,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn to_csv(&self) -> String {
        self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Exact Horner evaluation at a Gaussian rational.
    pub fn eval(&self, x: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x);
            acc.re += BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &BigInt) -> IntPolynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        IntPolynomial { coeffs: c }
    }

    /// Companion matrix `B` with `B e_m = e_{m+1}` and last column `-c`,
    /// i.e. multiplication by `x` on the power basis.
    pub fn companion(&self) -> IntMatrix {
        let d = self.degree();
        let mut b = vec![vec![BigInt::zero(); d]; d];
        for m in 0..d - 1 {
            b[m + 1][m] = BigInt::one();
        }
        for (k, row) in b.iter_mut().enumerate() {
            row[d - 1] = -&self.coeffs[k];
        }
        b
    }

    /// Exact quotient by a monic divisor, `None` if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = divrem_monic(&self.coeffs, &divisor.coeffs);
        if r.iter().all(Zero::is_zero) {
            IntPolynomial::new(q).ok()
        } else {
            None
        }
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        IntPolynomial {
            coeffs: poly_mul(&self.coeffs, &other.coeffs),
        }
    }

    /// `p(x^n)`.
    pub fn compose_power(&self, n: usize) -> IntPolynomial {
        let mut c = vec![BigInt::zero(); self.degree() * n + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[k * n] = a.clone();
        }
        IntPolynomial { coeffs: c }
    }

    /// Power sums `p_k = sum of k-th powers of the roots`, `k = 1..=count`.
    pub fn power_sums(&self, count: usize) -> Vec<BigInt> {
        let d = self.degree();
        // elementary symmetric e_i = (-1)^i c_{d-i}
        let e: Vec<BigInt> = (0..=d)
            .map(|i| {
                let c = self.coeffs[d - i].clone();
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let mut p: Vec<BigInt> = vec![BigInt::zero(); count + 1];
        for k in 1..=count {
            let mut s = BigInt::zero();
            for i in 1..k.min(d + 1) {
                let term = &e[i] * &p[k - i];
                if (i - 1) % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            if k <= d {
                let term = &e[k] * BigInt::from(k);
                if (k - 1) % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            p[k] = s;
        }
        p.remove(0);
        p
    }

    /// Squarefree part as a monic integer polynomial.
    pub fn squarefree_part(&self) -> IntPolynomial {
        let p = to_rat_poly(&self.coeffs);
        let dp = to_rat_poly(&self.derivative());
        let g = rat_poly_gcd(&p, &dp);
        if g.len() <= 1 {
            return self.clone();
        }
        let (q, _) = rat_poly_divrem(&p, &g);
        let lead = q.last().unwrap().clone();
        let coeffs: Vec<BigInt> = q
            .iter()
            .map(|c| {
                let v = c / &lead;
                debug_assert!(v.is_integer(), "monic factor of a monic integer polynomial");
                v.to_integer()
            })
            .collect();
        IntPolynomial { coeffs }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntPolynomial::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Gaussian rational `re + i im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ComplexRational { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ComplexRational {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn mul(&self, o: &ComplexRational) -> ComplexRational {
        ComplexRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GateFailure {
    NotSquarefree,
    RationalRoot(String),
}

/// Outcome of [`squarefree_and_no_rational_root`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub passed: bool,
    pub failures: Vec<GateFailure>,
}

/// `gcd(p, p')` constant and no integer root (monic: rational roots are
/// integers dividing the constant term).
pub fn squarefree_and_no_rational_root(p: &IntPolynomial) -> GateReport {
    let mut failures = Vec::new();
    let g = rat_poly_gcd(&to_rat_poly(&p.coeffs), &to_rat_poly(&p.derivative()));
    if g.len() > 1 {
        failures.push(GateFailure::NotSquarefree);
    }
    let c0 = &p.coeffs[0];
    if c0.is_zero() {
        failures.push(GateFailure::RationalRoot("0".into()));
    } else {
        for r in divisors(&c0.abs()) {
            for cand in [r.clone(), -r] {
                if p.eval_int(&cand).is_zero() {
                    failures.push(GateFailure::RationalRoot(cand.to_string()));
                }
            }
        }
    }
    GateReport {
        passed: failures.is_empty(),
        failures,
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= *n {
        if (n % &k).is_zero() {
            out.push(k.clone());
            let other = n / &k;
            if other != k {
                out.push(other);
            }
        }
        k += 1;
    }
    out.sort();
    out
}

/// Discriminant `(-1)^{d(d-1)/2} Res(p, p')` of the order `Z[x]/(p)`.
pub fn discriminant(p: &IntPolynomial) -> BigInt {
    let d = p.degree();
    if d == 1 {
        return BigInt::one();
    }
    let res = resultant(&p.coeffs, &p.derivative());
    if (d * (d - 1) / 2).is_multiple_of(2) {
        res
    } else {
        -res
    }
}

/// Resultant via the Sylvester determinant.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(&s)
}

pub(crate) fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn divrem_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dn = den.len() - 1;
    if num.len() < den.len() {
        return (vec![BigInt::zero()], num.to_vec());
    }
    let mut r = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn].clone();
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
        }
        q[k] = c;
    }
    r.truncate(dn.max(1));
    (q, r)
}

pub(crate) fn to_rat_poly(c: &[BigInt]) -> Vec<BigRational> {
    let mut v: Vec<BigRational> = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim_rat(&mut v);
    v
}

fn trim_rat(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

pub(crate) fn rat_poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                let t = &c * bc;
                r[k + j] -= t;
            }
        }
        q[k] = c;
    }
    trim_rat(&mut r);
    (q, r)
}

/// Monic gcd over the rationals; the empty vector is the zero polynomial.
pub(crate) fn rat_poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim_rat(&mut x);
    trim_rat(&mut y);
    while !y.is_empty() {
        let (_, r) = rat_poly_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c /= &lead;
        }
    }
    x
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn eval_examples() {
        let plastic = p(&[-1, -1, 0, 1]);
        assert_eq!(plastic.eval(&ComplexRational::from_ints(0, 0)), ComplexRational::from_ints(-1, 0));
        assert_eq!(plastic.eval(&ComplexRational::from_ints(1, 0)), ComplexRational::from_ints(-1, 0));
        let golden = p(&[-1, -1, 1]);
        assert_eq!(golden.eval(&ComplexRational::from_ints(2, 0)), ComplexRational::from_ints(1, 0));
        // i^2 - i - 1 = -2 - i
        assert_eq!(golden.eval(&ComplexRational::from_ints(0, 1)), ComplexRational::from_ints(-2, -1));
    }

    #[test]
    fn parse_and_display() {
        let q = IntPolynomial::parse("-1, -1, 0, 1").unwrap();
        assert_eq!(q, p(&[-1, -1, 0, 1]));
        assert_eq!(q.to_string(), "x^3 - x - 1");
        assert_eq!(q.to_csv(), "-1,-1,0,1");
        assert!(matches!(IntPolynomial::parse("1,2"), Err(Error::Parse(_))));
        assert!(matches!(IntPolynomial::parse("1,a,1"), Err(Error::Parse(_))));
        assert!(matches!(IntPolynomial::parse("5"), Err(Error::Parse(_))));
        // trailing zeros are normalized away before the monic check
        assert_eq!(IntPolynomial::parse("-2,1,0").unwrap(), p(&[-2, 1]));
    }

    #[test]
    fn gate_examples() {
        assert!(squarefree_and_no_rational_root(&p(&[-1, -1, 0, 1])).passed);
        let sq = squarefree_and_no_rational_root(&p(&[1, -2, 1]));
        assert!(!sq.passed && sq.failures.contains(&GateFailure::NotSquarefree));
        let rr = squarefree_and_no_rational_root(&p(&[-1, 0, 1]));
        assert!(!rr.passed);
        assert_eq!(
            rr.failures,
            vec![GateFailure::RationalRoot("1".into()), GateFailure::RationalRoot("-1".into())]
        );
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[-1, -1, 1])), BigInt::from(5));
        assert_eq!(discriminant(&p(&[-1, -1, 0, 1])), BigInt::from(-23));
        assert_eq!(discriminant(&p(&[-2, 1])), BigInt::from(1));
        // x^3 - 3x - 1: -4a^3 - 27b^2 = 108 - 27 = 81
        assert_eq!(discriminant(&p(&[-1, -3, 0, 1])), BigInt::from(81));
    }

    #[test]
    fn discriminant_matches_root_difference_oracle() {
        // disc = prod_{i<j} (r_i - r_j)^2 for x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3): 1*4*1 = 4
        assert_eq!(discriminant(&p(&[-6, 11, -6, 1])), BigInt::from(4));
        // (x-1)(x+2)(x-4)(x+5): pairwise differences 3,3,6,6,9,3 -> product squared
        let q = p(&[-1, 1]).mul(&p(&[2, 1])).mul(&p(&[-4, 1])).mul(&p(&[5, 1]));
        let diffs: i64 = 3 * 3 * 6 * 6 * 9 * 3;
        assert_eq!(discriminant(&q), BigInt::from(diffs) * BigInt::from(diffs));
    }

    #[test]
    fn companion_and_shift() {
        let plastic = p(&[-1, -1, 0, 1]);
        let b = plastic.companion();
        assert_eq!(b, crate::linalg::int_matrix(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]));
        // (x+1)^3 - 9(x+1)^2 + 1 = x^3 - 6x^2 - 15x - 7
        assert_eq!(p(&[1, 0, -9, 1]).taylor_shift(&BigInt::one()), p(&[-7, -15, -6, 1]));
    }

    #[test]
    fn division_and_squarefree_part() {
        let a = p(&[-1, -1, 1]);
        let b = p(&[3, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&p(&[1, 1])), None);
        let rep = a.mul(&a).mul(&b);
        assert_eq!(rep.squarefree_part(), a.mul(&b));
        let xsq = p(&[0, 0, 1]);
        assert_eq!(xsq.squarefree_part(), p(&[0, 1]));
    }

    #[test]
    fn power_sums_newton() {
        // x^3 - x - 1: p1 = 0, p2 = 2, p3 = 3, p4 = 2, p5 = 5
        let ps = p(&[-1, -1, 0, 1]).power_sums(5);
        assert_eq!(ps, crate::linalg::int_vec(&[0, 2, 3, 2, 5]));
        // x^2 - x - 1: Lucas numbers 1, 3, 4, 7
        assert_eq!(p(&[-1, -1, 1]).power_sums(4), crate::linalg::int_vec(&[1, 3, 4, 7]));
    }
}
