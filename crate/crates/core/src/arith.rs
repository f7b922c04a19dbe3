//! Small exact-arithmetic helpers shared by the certification code:
//! directed rounding of rationals to `f64`, rigorous square-root brackets,
//! and closed intervals with outward-rounded `f64` endpoints.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Exact rational value of a finite float.
pub fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Largest float not above `q`.
pub fn rat_to_f64_down(q: &BigRational) -> f64 {
    let mut f = q.to_f64().unwrap_or(if q.is_negative() { f64::MIN } else { f64::MAX });
    if !f.is_finite() {
        f = if f > 0.0 { f64::MAX } else { f64::MIN };
    }
    while f64_to_rat(f) > *q {
        f = f.next_down();
    }
    f
}

/// Smallest float not below `q`.
pub fn rat_to_f64_up(q: &BigRational) -> f64 {
    let mut f = q.to_f64().unwrap_or(if q.is_negative() { f64::MIN } else { f64::MAX });
    if !f.is_finite() {
        f = if f > 0.0 { f64::MAX } else { f64::MIN };
    }
    while f64_to_rat(f) < *q {
        f = f.next_up();
    }
    f
}

/// Rigorous bracket `lo <= sqrt(q) <= hi` with denominators of `bits` extra bits.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    if q.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let num = q.numer();
    let den = q.denom();
    // sqrt(n/m) = sqrt(n*m)/m
    let scaled: BigInt = (num * den) << (2 * bits as usize);
    let s = scaled.sqrt();
    let denom = den << (bits as usize);
    let lo = BigRational::new(s.clone(), denom.clone());
    let hi = if &s * &s == scaled {
        lo.clone()
    } else {
        BigRational::new(s + 1, denom)
    };
    (lo, hi)
}

pub fn sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    sqrt_bounds(q, bits).1
}

pub fn sqrt_lower(q: &BigRational, bits: u32) -> BigRational {
    sqrt_bounds(q, bits).0
}

/// `round(q * 2^bits)` as an integer, ties away from zero.
pub fn round_scaled(q: &BigRational, bits: u32) -> BigInt {
    let n: BigInt = q.numer() << (bits as usize);
    let d = q.denom();
    let twice: BigInt = (&n << 1usize) + if n.sign() == Sign::Minus { -d } else { d.clone() };
    twice / (d << 1usize)
}

/// Closed interval with `f64` endpoints; constructed with outward rounding
/// wherever it comes from exact data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn from_rationals(lo: &BigRational, hi: &BigRational) -> Self {
        Interval {
            lo: rat_to_f64_down(lo),
            hi: rat_to_f64_up(hi),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_within(&self, outer: &Interval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }
}

/// Closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn add_scalar(&self, c: &BigRational) -> RatInterval {
        RatInterval {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        RatInterval { lo, hi }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn to_f64(&self) -> Interval {
        Interval::from_rationals(&self.lo, &self.hi)
    }

    /// Horner evaluation of `sum coeffs[m] x^m` over the interval.
    pub fn eval_poly(coeffs: &[BigRational], x: &RatInterval) -> RatInterval {
        let mut acc = RatInterval::point(coeffs.last().cloned().unwrap_or_else(BigRational::zero));
        for c in coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add_scalar(c);
        }
        acc
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn rat_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Exact `x` as the nearest-below float of an integer, for ordering keys.
pub fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() { f64::MIN } else { f64::MAX })
}

pub fn abs_rat(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_rounding_brackets_one_third() {
        let q = BigRational::new(1.into(), 3.into());
        let lo = rat_to_f64_down(&q);
        let hi = rat_to_f64_up(&q);
        assert!(f64_to_rat(lo) < q && q < f64_to_rat(hi));
        assert_eq!(hi, lo.next_up());
    }

    #[test]
    fn sqrt_bounds_are_rigorous() {
        for n in [2i64, 3, 5, 23, 1_000_003] {
            let q = rat(n);
            let (lo, hi) = sqrt_bounds(&q, 40);
            assert!(&lo * &lo <= q && q <= &hi * &hi);
            assert!(&hi - &lo <= BigRational::new(1.into(), BigInt::one() << 39usize));
        }
        let (lo, hi) = sqrt_bounds(&rat(49), 8);
        assert_eq!(lo, rat(7));
        assert_eq!(hi, rat(7));
    }

    #[test]
    fn round_scaled_rounds_to_nearest() {
        let q = BigRational::new(5.into(), 8.into());
        assert_eq!(round_scaled(&q, 2), BigInt::from(3)); // 2.5 -> 3
        assert_eq!(round_scaled(&-q, 2), BigInt::from(-3));
        assert_eq!(round_scaled(&rat(1), 4), BigInt::from(16));
    }

    #[test]
    fn interval_horner_encloses_values() {
        // x^2 - x - 1 over [1.5, 1.75]
        let coeffs = vec![rat(-1), rat(-1), rat(1)];
        let x = RatInterval::new(BigRational::new(3.into(), 2.into()), BigRational::new(7.into(), 4.into()));
        let v = RatInterval::eval_poly(&coeffs, &x);
        assert!(v.lo <= rat(-1) / rat(4) && v.hi >= BigRational::new(5.into(), 16.into()));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("3/6"), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_rat("-4"), Some(rat(-4)));
        assert_eq!(parse_rat("1/0"), None);
    }
}
