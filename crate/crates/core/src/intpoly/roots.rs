//! Certified isolation of all complex roots of a squarefree monic integer
//! polynomial.
//!
//! Approximations come from an `f64` Aberth iteration, are polished by
//! Durand–Kerner steps in fixed-point big-integer arithmetic, and are then
//! certified exactly: with `W_i = p(z_i) / prod_{j != i} (z_i - z_j)` the
//! discs `|z - z_i| <= d |W_i|` cover all roots and every connected
//! component of their union holds as many roots as discs, so pairwise
//! disjoint discs isolate one root each.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::IntPolynomial;
use crate::arith::{rat_to_f64_down, rat_to_f64_up, sqrt_bounds, sqrt_upper, Interval, RatInterval};
use crate::error::{Error, Result};

/// A disc `|z - center| <= radius` holding exactly one root.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedRoot {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
    pub is_real: bool,
}

impl CertifiedRoot {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Radius rounded up to a float.
    pub fn radius_f64(&self) -> f64 {
        rat_to_f64_up(&self.radius)
    }

    /// `[re - radius, re + radius]`; encloses the root when it is real.
    pub fn real_interval(&self) -> RatInterval {
        RatInterval::new(&self.re - &self.radius, &self.re + &self.radius)
    }

    /// Rigorous bracket for the modulus of the root.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let bits = 64 + self.re.denom().bits().max(self.radius.denom().bits()) as u32;
        let (lo, hi) = sqrt_bounds(&n2, bits);
        let lo = &lo - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        (lo, hi + &self.radius)
    }

    pub fn modulus_interval(&self) -> Interval {
        let (lo, hi) = self.modulus_bounds();
        Interval::new(rat_to_f64_down(&lo), rat_to_f64_up(&hi))
    }

    /// Argument of the center in `[0, 2pi)`, used only for ordering.
    pub fn angle(&self) -> f64 {
        let c = self.center();
        let a = c.im.atan2(c.re);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

/// Isolates all roots of `p` at a single working precision.
pub fn certified_roots(p: &IntPolynomial, precision: u32) -> Result<Vec<CertifiedRoot>> {
    let d = p.degree();
    if d == 1 {
        return Ok(vec![CertifiedRoot {
            re: BigRational::from_integer(-&p.coeffs()[0]),
            im: BigRational::zero(),
            radius: BigRational::zero(),
            is_real: true,
        }]);
    }
    let prec = precision.max(64);
    let approx = aberth(p);
    let fixed = polish(p, &approx, prec).ok_or(Error::PrecisionExhausted { bits: prec })?;
    let centers = symmetrize(fixed, prec).ok_or(Error::PrecisionExhausted { bits: prec })?;
    certify(p, &centers, prec).ok_or(Error::PrecisionExhausted { bits: prec })
}

/// Doubles the precision from `start` until isolation succeeds or `ceiling`
/// is passed. Returns the roots with the precision that worked.
pub fn certified_roots_adaptive(p: &IntPolynomial, start: u32, ceiling: u32) -> Result<(Vec<CertifiedRoot>, u32)> {
    let mut bits = start.max(64);
    loop {
        match certified_roots(p, bits) {
            Ok(r) => return Ok((r, bits)),
            Err(Error::PrecisionExhausted { .. }) if bits < ceiling => bits = (bits * 2).min(ceiling),
            Err(e) => return Err(e),
        }
    }
}

fn aberth(p: &IntPolynomial) -> Vec<Complex64> {
    let d = p.degree();
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let dc: Vec<f64> = (1..=d).map(|k| c[k] * k as f64).collect();
    let horner = |coef: &[f64], z: Complex64| coef.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);

    let bound = (0..d)
        .map(|k| c[k].abs().powf(1.0 / (d - k) as f64))
        .fold(0.0f64, f64::max);
    let radius = bound.max(0.5);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();

    for _ in 0..1000 {
        let mut worst = 0.0f64;
        for i in 0..d {
            let pv = horner(&c, z[i]);
            let dv = horner(&dc, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

/// Gaussian integer standing for `(re + i im) / 2^prec`.
#[derive(Debug, Clone, PartialEq)]
struct Fixed {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn from_f64(z: Complex64, prec: u32) -> Option<Fixed> {
        let scale = |x: f64| BigRational::from_float(x).map(|q| crate::arith::round_scaled(&q, prec));
        Some(Fixed {
            re: scale(z.re)?,
            im: scale(z.im)?,
        })
    }

    fn sub(&self, o: &Fixed) -> Fixed {
        Fixed {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Fixed, prec: u32) -> Fixed {
        Fixed {
            re: (&self.re * &o.re - &self.im * &o.im) >> prec as usize,
            im: (&self.re * &o.im + &self.im * &o.re) >> prec as usize,
        }
    }

    fn div(&self, o: &Fixed, prec: u32) -> Option<Fixed> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re: BigInt = (&self.re * &o.re + &self.im * &o.im) << prec as usize;
        let im: BigInt = (&self.im * &o.re - &self.re * &o.im) << prec as usize;
        Some(Fixed {
            re: re / &den,
            im: im / den,
        })
    }

    fn magnitude_bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }
}

fn eval_fixed(p: &IntPolynomial, z: &Fixed, prec: u32) -> Fixed {
    let mut acc = Fixed {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z, prec);
        acc.re += c << prec as usize;
    }
    acc
}

fn polish(p: &IntPolynomial, approx: &[Complex64], prec: u32) -> Option<Vec<Fixed>> {
    let d = approx.len();
    let mut z: Vec<Fixed> = approx.iter().map(|&w| Fixed::from_f64(w, prec)).collect::<Option<_>>()?;
    let max_iter = 40 + 4 * (prec as usize).ilog2() as usize;
    for _ in 0..max_iter {
        let mut worst = 0u64;
        for i in 0..d {
            let num = eval_fixed(p, &z[i], prec);
            let mut den = Fixed {
                re: BigInt::from(1) << prec as usize,
                im: BigInt::zero(),
            };
            for j in (0..d).filter(|&j| j != i) {
                den = den.mul(&z[i].sub(&z[j]), prec);
            }
            let w = num.div(&den, prec)?;
            worst = worst.max(w.magnitude_bits());
            z[i] = z[i].sub(&w);
        }
        if worst <= 4 {
            break;
        }
    }
    Some(z)
}

/// Snaps nearly real centers onto the real axis and makes the nonreal ones
/// an exactly conjugate-closed set, so the realness argument applies.
fn symmetrize(mut z: Vec<Fixed>, prec: u32) -> Option<Vec<Fixed>> {
    let tiny_bits = (prec / 2) as u64;
    for w in z.iter_mut() {
        if w.im.bits() <= tiny_bits {
            w.im = BigInt::zero();
        }
    }
    let upper: Vec<usize> = (0..z.len()).filter(|&i| z[i].im.is_positive()).collect();
    let mut lower: Vec<usize> = (0..z.len()).filter(|&i| z[i].im.is_negative()).collect();
    if upper.len() != lower.len() {
        return None;
    }
    for &u in &upper {
        let conj = Fixed {
            re: z[u].re.clone(),
            im: -z[u].im.clone(),
        };
        let (pos, _) = lower.iter().enumerate().min_by_key(|(_, &l)| {
            let diff = z[l].sub(&conj);
            &diff.re * &diff.re + &diff.im * &diff.im
        })?;
        let l = lower.swap_remove(pos);
        z[l] = conj;
    }
    Some(z)
}

fn certify(p: &IntPolynomial, z: &[Fixed], prec: u32) -> Option<Vec<CertifiedRoot>> {
    let d = z.len();
    let shift = prec as usize;
    let scale2 = BigRational::from_integer(BigInt::from(1) << (2 * shift));
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        let (pr, pi) = scaled_eval(p, &z[i], shift);
        let mut qr = BigInt::from(1);
        let mut qi = BigInt::zero();
        for j in (0..d).filter(|&j| j != i) {
            let dr = &z[i].re - &z[j].re;
            let di = &z[i].im - &z[j].im;
            let nr = &qr * &dr - &qi * &di;
            let ni = &qr * &di + &qi * &dr;
            qr = nr;
            qi = ni;
        }
        let q2 = &qr * &qr + &qi * &qi;
        if q2.is_zero() {
            return None;
        }
        let p2 = &pr * &pr + &pi * &pi;
        let d2 = BigInt::from(d * d);
        let r2 = BigRational::new(d2 * p2, q2) / &scale2;
        radii.push(sqrt_upper(&r2, prec + 16));
    }
    for i in 0..d {
        for j in i + 1..d {
            let dr = BigRational::from_integer(&z[i].re - &z[j].re);
            let di = BigRational::from_integer(&z[i].im - &z[j].im);
            let dist2 = (&dr * &dr + &di * &di) / &scale2;
            let rsum = &radii[i] + &radii[j];
            if dist2 <= &rsum * &rsum {
                return None;
            }
        }
    }
    let denom = BigInt::from(1) << shift;
    let mut out: Vec<CertifiedRoot> = z
        .iter()
        .zip(radii)
        .map(|(w, radius)| CertifiedRoot {
            re: BigRational::new(w.re.clone(), denom.clone()),
            im: BigRational::new(w.im.clone(), denom.clone()),
            radius,
            is_real: w.im.is_zero(),
        })
        .collect();
    out.sort_by(|a, b| b.re.cmp(&a.re).then_with(|| b.im.cmp(&a.im)));
    Some(out)
}

/// `2^{prec d} p(Z / 2^prec) = sum c_m Z^m 2^{prec (d - m)}` as an exact
/// Gaussian integer.
fn scaled_eval(p: &IntPolynomial, z: &Fixed, shift: usize) -> (BigInt, BigInt) {
    let mut pr = BigInt::zero();
    let mut pi = BigInt::zero();
    for (depth, c) in p.coeffs().iter().rev().enumerate() {
        let nr = &pr * &z.re - &pi * &z.im;
        let ni = &pr * &z.im + &pi * &z.re;
        pr = nr + (c << (shift * depth));
        pi = ni;
    }
    (pr, pi)
}
