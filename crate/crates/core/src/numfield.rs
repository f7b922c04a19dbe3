//! Places of `Q(lambda)`, the Perron certificate and the real coordinate
//! space `R^r x C^s` in which the lattice and the cone live.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{Interval, RatInterval};
use crate::error::{Error, Result};
use crate::intpoly::roots::certified_roots_adaptive;
use crate::intpoly::{discriminant, squarefree_and_no_rational_root, CertifiedRoot, ComplexRational, GateFailure, IntPolynomial};
use crate::lattice::AlphaWeights;
use crate::linalg::{mat_vec, IntMatrix, IntVector};

pub const DEFAULT_PRECISION: u32 = 128;
pub const DEFAULT_PRECISION_CEILING: u32 = 4096;

#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub precision: u32,
    pub ceiling: u32,
    /// Skip the squarefree / rational-root gate.
    pub assume_irreducible: bool,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            precision: DEFAULT_PRECISION,
            ceiling: DEFAULT_PRECISION_CEILING,
            assume_irreducible: false,
        }
    }
}

/// The certified places of a Perron number.
#[derive(Debug, Clone)]
pub struct FieldContext {
    pub poly: IntPolynomial,
    /// `lambda` first, then the other real places, then one root with
    /// positive imaginary part per complex pair.
    pub roots: Vec<CertifiedRoot>,
    pub r: usize,
    pub s: usize,
    pub rho: Interval,
    pub rho_bounds: RatInterval,
    pub lambda: RatInterval,
    pub companion: IntMatrix,
    pub disc: BigInt,
    pub precision: u32,
    pub ceiling: u32,
    // powers center^m of every place, m = 0..d-1, exact
    powers: Vec<Vec<ComplexRational>>,
}

/// Coordinates in `R^d`, blocks `(sigma_1 | other real places | complex
/// places as re, im)`, without any alpha scaling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaceVector {
    pub coords: Vec<f64>,
}

impl PlaceVector {
    pub fn zeros(d: usize) -> Self {
        PlaceVector { coords: vec![0.0; d] }
    }
}

pub fn build_field_context(p: &IntPolynomial, opts: &FieldOptions) -> Result<FieldContext> {
    let d = p.degree();
    if d == 0 {
        return Err(Error::InvalidInput("polynomial must have degree at least 1".into()));
    }
    if d > 1 && !opts.assume_irreducible {
        let gate = squarefree_and_no_rational_root(p);
        if !gate.passed {
            let why = match &gate.failures[0] {
                GateFailure::NotSquarefree => "not squarefree".to_string(),
                GateFailure::RationalRoot(r) => format!("has the rational root {r}"),
            };
            return Err(Error::NotIrreducible(format!("{p} {why}")));
        }
    }
    let mut bits = opts.precision.max(64);
    loop {
        let (roots, used) = certified_roots_adaptive(p, bits, opts.ceiling).map_err(|e| match e {
            Error::PrecisionExhausted { bits } => Error::Indeterminate { bits },
            other => other,
        })?;
        match classify(p, roots, used, opts)? {
            Some(ctx) => return Ok(ctx),
            None if used < opts.ceiling => bits = (used * 2).min(opts.ceiling),
            None => return Err(Error::Indeterminate { bits: used }),
        }
    }
}

/// `Ok(None)` means the discs are still too wide to decide.
fn classify(p: &IntPolynomial, roots: Vec<CertifiedRoot>, bits: u32, opts: &FieldOptions) -> Result<Option<FieldContext>> {
    let Some(top) = roots.iter().position(|r| r.is_real) else {
        return Err(Error::NotPerron(format!("{p} has no real root")));
    };
    // roots arrive sorted by decreasing real part, so `top` is the largest real root
    let lambda = roots[top].real_interval();
    if lambda.hi < BigRational::from_integer(1.into()) {
        return Err(Error::NotPerron(format!("largest real root of {p} is below 1")));
    }
    let mut undecided = false;
    let mut max_lo = BigRational::zero();
    let mut max_hi = BigRational::zero();
    for (i, root) in roots.iter().enumerate() {
        if i == top {
            continue;
        }
        let (lo, hi) = root.modulus_bounds();
        if lo > lambda.hi {
            return Err(Error::NotPerron(format!(
                "{p} has a conjugate of modulus {:.6} above {:.6}",
                lo.to_f64().unwrap_or(f64::NAN),
                lambda.hi.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if hi >= lambda.lo {
            undecided = true;
        }
        if lo > max_lo {
            max_lo = lo;
        }
        if hi > max_hi {
            max_hi = hi;
        }
    }
    if undecided {
        // -lambda is a conjugate exactly when p(-x) = +-p(x)
        let mirrored: Vec<BigInt> = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
            .collect();
        let negated: Vec<BigInt> = mirrored.iter().map(|c| -c).collect();
        if mirrored == p.coeffs() || negated == p.coeffs() {
            return Err(Error::NotPerron(format!("-lambda is also a root of {p}")));
        }
        return Ok(None);
    }

    let mut others: Vec<CertifiedRoot> = roots
        .iter()
        .enumerate()
        .filter(|&(i, r)| i != top && r.is_real)
        .map(|(_, r)| r.clone())
        .collect();
    sort_places(&mut others);
    let mut complex: Vec<CertifiedRoot> = roots.iter().filter(|r| r.im.is_positive()).cloned().collect();
    sort_places(&mut complex);
    let r = 1 + others.len();
    let s = complex.len();
    let mut ordered = vec![roots[top].clone()];
    ordered.extend(others);
    ordered.extend(complex);

    let rho_bounds = if p.degree() == 1 {
        RatInterval::point(BigRational::zero())
    } else {
        RatInterval::new(&max_lo / &lambda.hi, &max_hi / &lambda.lo)
    };
    let powers = ordered
        .iter()
        .map(|root| {
            let c = ComplexRational::new(root.re.clone(), root.im.clone());
            let mut acc = ComplexRational::from_ints(1, 0);
            (0..p.degree())
                .map(|_| {
                    let cur = acc.clone();
                    acc = acc.mul(&c);
                    cur
                })
                .collect()
        })
        .collect();
    Ok(Some(FieldContext {
        poly: p.clone(),
        rho: rho_bounds.to_f64(),
        rho_bounds,
        lambda,
        roots: ordered,
        r,
        s,
        companion: p.companion(),
        disc: discriminant(p),
        precision: bits,
        ceiling: opts.ceiling,
        powers,
    }))
}

fn sort_places(v: &mut [CertifiedRoot]) {
    v.sort_by(|a, b| {
        let ma = a.center().norm();
        let mb = b.center().norm();
        mb.total_cmp(&ma).then_with(|| a.angle().total_cmp(&b.angle()))
    });
}

impl FieldContext {
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Number of places `r + s`.
    pub fn places(&self) -> usize {
        self.r + self.s
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().mid()
    }

    pub fn lambda_interval(&self) -> Interval {
        self.lambda.to_f64()
    }

    /// Certified: every other conjugate lies strictly inside the unit disc.
    pub fn is_pisot(&self) -> bool {
        let one = BigRational::from_integer(1.into());
        self.lambda.lo > one && self.roots[1..].iter().all(|r| r.modulus_bounds().1 < one)
    }

    /// Coordinate index of place `j` (0-based) in a [`PlaceVector`].
    pub fn place_offset(&self, j: usize) -> usize {
        if j < self.r {
            j
        } else {
            self.r + 2 * (j - self.r)
        }
    }

    pub fn is_real_place(&self, j: usize) -> bool {
        j < self.r
    }

    /// `lambda` enclosed at a (possibly) higher precision.
    pub fn lambda_at_precision(&self, bits: u32) -> Result<RatInterval> {
        if bits <= self.precision {
            return Ok(self.lambda.clone());
        }
        let (roots, _) = certified_roots_adaptive(&self.poly, bits, bits.max(self.ceiling))?;
        roots
            .iter()
            .find(|r| r.is_real)
            .map(CertifiedRoot::real_interval)
            .ok_or_else(|| Error::NotPerron("no real root".into()))
    }

    pub fn embed(&self, v: &[BigInt]) -> PlaceVector {
        let q: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.embed_rat(&q)
    }

    /// Evaluates `sum v_m sigma_j(lambda)^m` exactly at the root centers and
    /// rounds the result once, so cancellation costs nothing.
    pub fn embed_rat(&self, v: &[BigRational]) -> PlaceVector {
        let mut coords = vec![0.0; self.degree()];
        for j in 0..self.places() {
            let mut re = BigRational::zero();
            let mut im = BigRational::zero();
            for (m, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                re += x * &self.powers[j][m].re;
                im += x * &self.powers[j][m].im;
            }
            let o = self.place_offset(j);
            coords[o] = re.to_f64().unwrap_or(f64::NAN);
            if !self.is_real_place(j) {
                coords[o + 1] = im.to_f64().unwrap_or(f64::NAN);
            }
        }
        PlaceVector { coords }
    }

    /// Embedding together with a per-coordinate bound on its error, covering
    /// the root-disc radii and the final rounding.
    pub fn embed_with_error(&self, v: &[BigInt]) -> (PlaceVector, Vec<f64>) {
        let pv = self.embed(v);
        let mut err = vec![0.0; self.degree()];
        for j in 0..self.places() {
            let root = &self.roots[j];
            let radius = root.radius_f64();
            let modulus = root.center().norm() + radius;
            let mut bound = 0.0;
            for (m, x) in v.iter().enumerate().skip(1) {
                let a = x.abs().to_f64().unwrap_or(f64::INFINITY);
                bound += a * m as f64 * modulus.powi(m as i32 - 1) * radius;
            }
            let o = self.place_offset(j);
            err[o] = bound * (1.0 + 1e-12) + pv.coords[o].abs() * f64::EPSILON;
            if !self.is_real_place(j) {
                err[o + 1] = bound * (1.0 + 1e-12) + pv.coords[o + 1].abs() * f64::EPSILON;
            }
        }
        (pv, err)
    }

    /// Rigorous enclosure of `sigma_1(v)` for an element in power-basis
    /// coordinates.
    pub fn first_place_interval(&self, v: &[BigRational]) -> RatInterval {
        RatInterval::eval_poly(v, &self.lambda)
    }

    /// Multiplication by `lambda` in power-basis coordinates.
    pub fn apply_mult(&self, v: &[BigInt]) -> IntVector {
        mat_vec(&self.companion, v)
    }

    /// Scales place coordinates so the standard dot product realizes `q_alpha`.
    pub fn scale(&self, alpha: &AlphaWeights, v: &PlaceVector) -> Vec<f64> {
        let mut out = v.coords.clone();
        for j in 0..self.places() {
            let o = self.place_offset(j);
            if self.is_real_place(j) {
                out[o] *= alpha.weights[j].sqrt();
            } else {
                let f = (2.0 * alpha.weights[j]).sqrt();
                out[o] *= f;
                out[o + 1] *= f;
            }
        }
        out
    }

    pub fn unscale(&self, alpha: &AlphaWeights, scaled: &[f64]) -> PlaceVector {
        let mut out = scaled.to_vec();
        for j in 0..self.places() {
            let o = self.place_offset(j);
            if self.is_real_place(j) {
                out[o] /= alpha.weights[j].sqrt();
            } else {
                let f = (2.0 * alpha.weights[j]).sqrt();
                out[o] /= f;
                out[o + 1] /= f;
            }
        }
        PlaceVector { coords: out }
    }
}

/// `|pi_j(v)|_alpha` for every place `j`.
pub fn projection_norms(ctx: &FieldContext, alpha: &AlphaWeights, v: &PlaceVector) -> Vec<f64> {
    (0..ctx.places())
        .map(|j| {
            let o = ctx.place_offset(j);
            if ctx.is_real_place(j) {
                (alpha.weights[j] * v.coords[o] * v.coords[o]).sqrt()
            } else {
                (2.0 * alpha.weights[j] * (v.coords[o] * v.coords[o] + v.coords[o + 1] * v.coords[o + 1])).sqrt()
            }
        })
        .collect()
}

/// Shorthand used by tests and callers that do not care about options.
pub fn field_of(coeffs: &[i64]) -> Result<FieldContext> {
    build_field_context(&IntPolynomial::from_i64(coeffs)?, &FieldOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn plastic_places() {
        let ctx = field_of(&[-1, -1, 0, 1]).unwrap();
        assert_eq!((ctx.r, ctx.s), (1, 1));
        let lam = 1.324_717_957_244_746f64;
        assert!(ctx.rho.contains(lam.powf(-1.5)));
        assert!(ctx.rho.width() < 1e-12);
        assert!(ctx.lambda_interval().contains(lam));
        assert!(ctx.is_pisot());
    }

    #[test]
    fn quadratic_places() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        assert_eq!((golden.r, golden.s), (2, 0));
        let s5 = 5f64.sqrt();
        assert!((golden.rho.mid() - ((s5 - 1.0) / 2.0) / ((1.0 + s5) / 2.0)).abs() < 1e-12);
        let q = field_of(&[1, -3, 1]).unwrap();
        assert!((q.rho.mid() - (3.0 - s5) / (3.0 + s5)).abs() < 1e-12);
        assert!((q.rho.mid() - 0.145_898_0).abs() < 1e-7);
    }

    #[test]
    fn rejects_non_perron() {
        assert!(matches!(field_of(&[-2, 0, 1]), Err(Error::NotIrreducible(_)) | Err(Error::NotPerron(_))));
        let even = build_field_context(
            &IntPolynomial::from_i64(&[-2, 0, 1]).unwrap(),
            &FieldOptions::default(),
        );
        assert!(matches!(even, Err(Error::NotPerron(_))), "{even:?}");
        // x^2 + 1: no real root
        assert!(matches!(field_of(&[1, 0, 1]), Err(Error::NotPerron(_))));
        // x^3 - 2x^2 ... with a dominant complex pair: x^3 + x^2 + 3x - 1 (real root ~0.3)
        assert!(matches!(field_of(&[-1, 3, 1, 1]), Err(Error::NotPerron(_))));
        assert!(matches!(field_of(&[1, -2, 1]), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn linear_field() {
        let ctx = field_of(&[-2, 1]).unwrap();
        assert_eq!((ctx.r, ctx.s), (1, 0));
        assert_eq!(ctx.rho, Interval::point(0.0));
        assert!(matches!(field_of(&[2, 1]), Err(Error::NotPerron(_))));
    }

    #[test]
    fn embedding_examples() {
        let ctx = field_of(&[-1, -1, 0, 1]).unwrap();
        let one = ctx.embed(&int_vec(&[1, 0, 0]));
        assert_eq!(one.coords, vec![1.0, 1.0, 0.0]);
        let lam = ctx.embed(&int_vec(&[0, 1, 0]));
        assert!((lam.coords[0] - 1.324_717_957_2).abs() < 1e-9);
        assert!((lam.coords[1] + 0.662_358_978_6).abs() < 1e-9);
        assert!((lam.coords[2] - 0.562_279_512_1).abs() < 1e-9);
        assert_eq!(ctx.embed(&int_vec(&[0, 0, 0])), PlaceVector::zeros(3));
    }

    #[test]
    fn mult_examples() {
        let ctx = field_of(&[-1, -1, 0, 1]).unwrap();
        assert_eq!(ctx.apply_mult(&int_vec(&[1, 0, 0])), int_vec(&[0, 1, 0]));
        assert_eq!(ctx.apply_mult(&int_vec(&[0, 0, 1])), int_vec(&[1, 1, 0]));
        assert_eq!(ctx.apply_mult(&int_vec(&[0, 0, 0])), int_vec(&[0, 0, 0]));
    }

    #[test]
    fn projection_norm_examples() {
        let ctx = field_of(&[-1, -1, 0, 1]).unwrap();
        let one = ctx.embed(&int_vec(&[1, 0, 0]));
        let n = projection_norms(&ctx, &AlphaWeights::ones(2), &one);
        assert!((n[0] * n[0] - 1.0).abs() < 1e-12 && (n[1] * n[1] - 2.0).abs() < 1e-12);
        let golden = field_of(&[-1, -1, 1]).unwrap();
        let one = golden.embed(&int_vec(&[1, 0]));
        let n = projection_norms(&golden, &AlphaWeights::new(vec![4.0, 1.0]).unwrap(), &one);
        assert!((n[0] - 2.0).abs() < 1e-12 && (n[1] - 1.0).abs() < 1e-12);
        assert!((n[0] * n[0] + n[1] * n[1] - 5.0).abs() < 1e-12);
        let zero = projection_norms(&golden, &AlphaWeights::ones(2), &PlaceVector::zeros(2));
        assert_eq!(zero, vec![0.0, 0.0]);
    }

    #[test]
    fn rho_nested_under_refinement() {
        let p = IntPolynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        let coarse = build_field_context(&p, &FieldOptions { precision: 64, ..Default::default() }).unwrap();
        let fine = build_field_context(&p, &FieldOptions { precision: 512, ..Default::default() }).unwrap();
        assert!(fine.rho_bounds.lo >= coarse.rho_bounds.lo && fine.rho_bounds.hi <= coarse.rho_bounds.hi);
    }
}
