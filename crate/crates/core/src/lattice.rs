//! Full-rank lattices in `R^d`: LLL reduction with an exact unimodular
//! transform, the covering-radius bound from the Gram–Schmidt norms,
//! closest vectors, and the embedded order with its inner product `q_alpha`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorial, int_rat};
use crate::error::{Error, Result};
use crate::linalg::{berkowitz, identity, inverse_rat, rank_rat, rat_mat_mul, transpose, IntMatrix, IntVector};
use crate::numfield::{FieldContext, PlaceVector};
use crate::polytope::{affine_rank, hull_facets, hull_volume, FastHalfspaces};

const LLL_DELTA: f64 = 0.99;
const ENUM_NODE_CAP: usize = 200_000;
pub const DEFAULT_COUNT_LIMIT: u64 = 100_000_000;

/// Positive weights, one per place.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaWeights {
    pub weights: Vec<f64>,
}

impl AlphaWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidInput(format!("alpha weights must be positive, got {weights:?}")));
        }
        Ok(AlphaWeights { weights })
    }

    pub fn ones(places: usize) -> Self {
        AlphaWeights {
            weights: vec![1.0; places],
        }
    }
}

/// A lattice given by `d` basis vectors of `R^d`, LLL-reduced.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub basis: Vec<Vec<f64>>,
    pub reduced: Vec<Vec<f64>>,
    /// `reduced[i] = sum_k transform[i][k] basis[k]`.
    pub transform: IntMatrix,
    pub gso_sq: Vec<f64>,
    gso: Vec<Vec<f64>>,
    mu: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosestVector {
    /// Coordinates with respect to the original basis.
    pub coeffs: IntVector,
    pub point: Vec<f64>,
    pub distance: f64,
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut gso: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut sq = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dotf(&b[i], &gso[j]) / sq[j];
            for (x, g) in v.iter_mut().zip(&gso[j]) {
                *x -= mu[i][j] * g;
            }
        }
        sq[i] = dotf(&v, &v);
        mu[i][i] = 1.0;
        gso.push(v);
    }
    (gso, mu, sq)
}

impl Lattice {
    pub fn new(basis: Vec<Vec<f64>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|v| v.len() != n || v.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidInput("lattice basis must be d finite vectors of length d".into()));
        }
        let (reduced, transform) = lll(&basis);
        Self::with_reduction(basis, reduced, transform)
    }

    /// Uses a reduction computed elsewhere (for instance re-embedded at
    /// higher accuracy).
    pub fn with_reduction(basis: Vec<Vec<f64>>, reduced: Vec<Vec<f64>>, transform: IntMatrix) -> Result<Self> {
        let (gso, mu, gso_sq) = gram_schmidt(&reduced);
        if gso_sq.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::PrecisionExhausted { bits: 53 });
        }
        Ok(Lattice {
            basis,
            reduced,
            transform,
            gso_sq,
            gso,
            mu,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Squared covolume.
    pub fn determinant(&self) -> f64 {
        self.gso_sq.iter().product()
    }

    /// `1/2 sqrt(sum |b*_i|^2)` with a small relative safety margin for
    /// the floating-point Gram–Schmidt data.
    pub fn covering_radius_upper(&self) -> f64 {
        0.5 * self.gso_sq.iter().sum::<f64>().sqrt() * (1.0 + 1e-9)
    }

    fn to_original(&self, y: &[i64]) -> IntVector {
        let n = self.dim();
        (0..n)
            .map(|k| (0..n).map(|i| BigInt::from(y[i]) * &self.transform[i][k]).sum())
            .collect()
    }

    fn point_of(&self, y: &[i64]) -> Vec<f64> {
        let n = self.dim();
        let mut p = vec![0.0; n];
        for (i, &c) in y.iter().enumerate() {
            for (x, b) in p.iter_mut().zip(&self.reduced[i]) {
                *x += c as f64 * b;
            }
        }
        p
    }

    /// Nearest-plane start refined by Schnorr–Euchner enumeration inside
    /// the nearest-plane radius.
    pub fn closest_vector(&self, target: &[f64]) -> ClosestVector {
        let n = self.dim();
        let coords: Vec<f64> = (0..n).map(|i| dotf(target, &self.gso[i]) / self.gso_sq[i]).collect();

        // nearest plane
        let mut babai = vec![0i64; n];
        for i in (0..n).rev() {
            let c = coords[i] - (i + 1..n).map(|j| babai[j] as f64 * self.mu[j][i]).sum::<f64>();
            babai[i] = c.round() as i64;
        }
        let dist2 = |y: &[i64]| {
            let p = self.point_of(y);
            p.iter().zip(target).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        };
        let mut best = babai.clone();
        let mut best_d2 = dist2(&babai);

        let mut y = vec![0i64; n];
        let mut nodes = 0usize;
        self.enumerate(n, 0.0, &coords, &mut y, &mut best, &mut best_d2, &mut nodes);

        ClosestVector {
            coeffs: self.to_original(&best),
            point: self.point_of(&best),
            distance: best_d2.sqrt(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        level: usize,
        partial: f64,
        coords: &[f64],
        y: &mut Vec<i64>,
        best: &mut Vec<i64>,
        best_d2: &mut f64,
        nodes: &mut usize,
    ) {
        if level == 0 {
            if partial < *best_d2 * (1.0 - 1e-12) {
                *best_d2 = partial;
                best.clone_from(y);
            }
            return;
        }
        let i = level - 1;
        let n = self.dim();
        let center = coords[i] - (i + 1..n).map(|j| y[j] as f64 * self.mu[j][i]).sum::<f64>();
        let c0 = center.round() as i64;
        // zig-zag around the center
        for step in 0.. {
            *nodes += 1;
            if *nodes > ENUM_NODE_CAP {
                return;
            }
            let offset = if step % 2 == 0 { step / 2 } else { -((step + 1) / 2) };
            let cand = c0 + offset;
            let diff = cand as f64 - center;
            let add = diff * diff * self.gso_sq[i];
            let far = (offset.abs() as f64 - 0.5).max(0.0);
            if partial + far * far * self.gso_sq[i] >= *best_d2 {
                break;
            }
            if partial + add < *best_d2 {
                y[i] = cand;
                self.enumerate(level - 1, partial + add, coords, y, best, best_d2, nodes);
            }
        }
        y[i] = 0;
    }
}

/// Textbook LLL on floating vectors, tracking the integer transform.
fn lll(basis: &[Vec<f64>]) -> (Vec<Vec<f64>>, IntMatrix) {
    let n = basis.len();
    let mut b = basis.to_vec();
    let mut t = identity(n);
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu, _) = gram_schmidt(&b);
            let q = mu[k][j].round();
            if q != 0.0 && q.is_finite() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                let qi = BigInt::from(q as i64);
                let tj = t[j].clone();
                for (x, y) in t[k].iter_mut().zip(&tj) {
                    *x -= &qi * y;
                }
            }
        }
        let (_, mu, sq) = gram_schmidt(&b);
        if sq[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * sq[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            t.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (b, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeLabel {
    #[serde(rename = "Z[lambda]")]
    PowerBasis,
    #[serde(rename = "user_basis")]
    UserBasis,
}

impl std::fmt::Display for LatticeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LatticeLabel::PowerBasis => "Z[lambda]",
            LatticeLabel::UserBasis => "user_basis",
        })
    }
}

/// The embedded order (or user lattice) with inner product `q_alpha`.
#[derive(Debug, Clone)]
pub struct LatticeContext {
    pub field: FieldContext,
    pub alpha: AlphaWeights,
    pub label: LatticeLabel,
    /// Basis elements as rows in power-basis coordinates.
    pub basis_rows: Vec<Vec<BigRational>>,
    /// Multiplication by `lambda` in lattice coordinates.
    pub mult_matrix: IntMatrix,
    pub lattice: Lattice,
    pub det_qalpha: f64,
    /// `|disc| * prod alpha_real * prod alpha_complex^2`.
    pub det_expected: f64,
    pub disc: BigInt,
    pub ell_hat: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessReport {
    pub tau: f64,
    pub alpha_used: AlphaWeights,
    pub banaszczyk_bound: f64,
    pub within_banaszczyk: bool,
}

pub fn build_lattice(ctx: &FieldContext, alpha: &AlphaWeights) -> Result<LatticeContext> {
    build_lattice_with_basis(ctx, alpha, None)
}

pub fn build_lattice_with_basis(
    ctx: &FieldContext,
    alpha: &AlphaWeights,
    basis: Option<Vec<Vec<BigRational>>>,
) -> Result<LatticeContext> {
    let d = ctx.degree();
    if alpha.weights.len() != ctx.places() {
        return Err(Error::InvalidInput(format!(
            "alpha has {} weights but the field has {} places",
            alpha.weights.len(),
            ctx.places()
        )));
    }
    let (label, rows) = match basis {
        None => (
            LatticeLabel::PowerBasis,
            identity(d).into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect(),
        ),
        Some(rows) => (LatticeLabel::UserBasis, rows),
    };
    let mult_matrix = check_basis(ctx, &rows)?;
    let det_w = crate::linalg::bareiss_det_rat(&rows);
    let disc_rat = int_rat(&ctx.disc) * &det_w * &det_w;
    if !disc_rat.is_integer() {
        return Err(Error::InvalidBasis("discriminant of the lattice is not an integer".into()));
    }
    let disc = disc_rat.to_integer();

    let embed_row = |row: &[BigRational]| ctx.scale(alpha, &ctx.embed_rat(row));
    let basis_f: Vec<Vec<f64>> = rows.iter().map(|r| embed_row(r)).collect();
    let (_, transform) = lll(&basis_f);
    // re-embed the reduced elements exactly instead of trusting cancellation
    let reduced_rows: Vec<Vec<BigRational>> = transform
        .iter()
        .map(|t| {
            (0..d)
                .map(|m| t.iter().zip(&rows).fold(BigRational::zero(), |acc, (c, r)| acc + int_rat(c) * &r[m]))
                .collect()
        })
        .collect();
    let reduced: Vec<Vec<f64>> = reduced_rows.iter().map(|r| embed_row(r)).collect();
    let lattice = Lattice::with_reduction(basis_f, reduced, transform)?;

    let det_qalpha = lattice.determinant();
    let mut det_expected = disc.abs().to_f64().unwrap_or(f64::INFINITY);
    for j in 0..ctx.places() {
        let w = alpha.weights[j];
        det_expected *= if ctx.is_real_place(j) { w } else { w * w };
    }
    if !((det_qalpha - det_expected).abs() <= 1e-6 * det_expected) {
        return Err(Error::PrecisionExhausted { bits: 53 });
    }
    let ell_hat = lattice.covering_radius_upper();
    Ok(LatticeContext {
        field: ctx.clone(),
        alpha: alpha.clone(),
        label,
        basis_rows: rows,
        mult_matrix,
        lattice,
        det_qalpha,
        det_expected,
        disc,
        ell_hat,
    })
}

/// Checks a user basis: full rank, stable under `lambda`, made of algebraic
/// integers. Returns the `lambda` action in lattice coordinates.
pub fn check_basis(ctx: &FieldContext, rows: &[Vec<BigRational>]) -> Result<IntMatrix> {
    let d = ctx.degree();
    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidBasis(format!("expected {d} rows of {d} rationals")));
    }
    if rank_rat(rows) < d {
        return Err(Error::InvalidBasis("basis is not of full rank".into()));
    }
    let wt = transpose(rows);
    let wt_inv = inverse_rat(&wt).ok_or_else(|| Error::InvalidBasis("singular basis".into()))?;
    let b: Vec<Vec<BigRational>> = ctx
        .companion
        .iter()
        .map(|r| r.iter().map(int_rat).collect())
        .collect();
    let m = rat_mat_mul(&rat_mat_mul(&wt_inv, &b), &wt);
    if m.iter().flatten().any(|x| !x.is_integer()) {
        return Err(Error::InvalidBasis("lattice is not stable under multiplication by lambda".into()));
    }
    let mult: IntMatrix = m.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
    // each basis element acts on Q^d by sum_m w_m M^m; integral charpoly <=> algebraic integer
    let mq: Vec<Vec<BigRational>> = m;
    for (i, row) in rows.iter().enumerate() {
        let mut acc = vec![vec![BigRational::zero(); d]; d];
        let mut power: Vec<Vec<BigRational>> = identity(d)
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        for w in row {
            for (a, p) in acc.iter_mut().zip(&power) {
                for (x, y) in a.iter_mut().zip(p) {
                    *x += w * y;
                }
            }
            power = rat_mat_mul(&power, &mq);
        }
        if berkowitz(&acc).iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidBasis(format!("basis element {i} is not an algebraic integer")));
        }
    }
    Ok(mult)
}

impl LatticeContext {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn covering_radius_upper(&self) -> f64 {
        self.ell_hat
    }

    /// Power-basis coordinates of a vector given in lattice coordinates.
    pub fn to_power_basis(&self, v: &[BigInt]) -> Vec<BigRational> {
        let d = self.degree();
        (0..d)
            .map(|m| {
                v.iter()
                    .zip(&self.basis_rows)
                    .fold(BigRational::zero(), |acc, (c, r)| acc + int_rat(c) * &r[m])
            })
            .collect()
    }

    /// Unscaled place coordinates of a lattice vector.
    pub fn embed(&self, v: &[BigInt]) -> PlaceVector {
        self.field.embed_rat(&self.to_power_basis(v))
    }

    /// `alpha`-scaled coordinates, where `q_alpha` is the dot product.
    pub fn embed_scaled(&self, v: &[BigInt]) -> Vec<f64> {
        self.field.scale(&self.alpha, &self.embed(v))
    }

    pub fn alpha_norm(&self, v: &PlaceVector) -> f64 {
        let s = self.field.scale(&self.alpha, v);
        dotf(&s, &s).sqrt()
    }

    pub fn closest_vector(&self, target: &PlaceVector) -> ClosestVector {
        let t = self.field.scale(&self.alpha, target);
        self.lattice.closest_vector(&t)
    }

    pub fn thickness(&self) -> ThicknessReport {
        let d = self.degree() as f64;
        let tau = self.ell_hat * self.ell_hat / self.det_qalpha.powf(1.0 / d);
        let disc = self.disc.abs().to_f64().unwrap_or(f64::INFINITY);
        let banaszczyk_bound = d / 4.0 * disc.powf(1.0 / d);
        ThicknessReport {
            tau,
            alpha_used: self.alpha.clone(),
            banaszczyk_bound,
            within_banaszczyk: tau <= banaszczyk_bound,
        }
    }

    /// Exact `sigma_1` enclosure of a lattice vector.
    pub fn first_place_positive(&self, v: &[BigInt]) -> bool {
        self.field.first_place_interval(&self.to_power_basis(v)).is_positive()
    }
}

pub fn covering_radius_upper(lat: &LatticeContext) -> f64 {
    lat.ell_hat
}

pub fn closest_vector(lat: &LatticeContext, target: &PlaceVector) -> ClosestVector {
    lat.closest_vector(target)
}

pub fn thickness(lat: &LatticeContext) -> ThicknessReport {
    lat.thickness()
}

/// Coordinate descent on the log-weights, never returning anything worse
/// than `start`. Weights that make the lattice numerically unusable are
/// simply skipped.
pub fn optimize_alpha(ctx: &FieldContext, start: &AlphaWeights, iters: usize) -> Result<AlphaWeights> {
    let tau_of = |a: &AlphaWeights| build_lattice(ctx, a).ok().map(|l| l.thickness().tau);
    let mut best = start.clone();
    let Some(mut best_tau) = tau_of(start) else {
        return Ok(start.clone());
    };
    let mut step = 0.5f64;
    for _ in 0..iters {
        let mut improved = false;
        for j in 0..best.weights.len() {
            for dir in [1.0, -1.0] {
                let mut cand = best.clone();
                cand.weights[j] *= (dir * step).exp();
                if let Some(t) = tau_of(&cand) {
                    if t < best_tau {
                        best_tau = t;
                        best = cand;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step /= 2.0;
            if step < 1e-6 {
                break;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticePointCount {
    pub count: u64,
    /// `Vol(P) / Covol(Lambda)` as an exact fraction string.
    pub normalized_volume: String,
    pub bound: String,
    pub within_bound: bool,
    pub equality: bool,
}

/// Lattice points in the hull of `vertices` (lattice coordinates), with the
/// check `count <= (Vol/Covol) (d+1)!`.
pub fn count_lattice_points(vertices: &[IntVector], limit: u64) -> Result<LatticePointCount> {
    let d = vertices.first().map_or(0, Vec::len);
    if d == 0 || affine_rank(vertices) < d {
        return Err(Error::InvalidInput("polytope must be full-dimensional".into()));
    }
    let lo: Vec<i64> = (0..d)
        .map(|k| vertices.iter().map(|v| v[k].to_i64().unwrap_or(i64::MIN)).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|k| vertices.iter().map(|v| v[k].to_i64().unwrap_or(i64::MAX)).max().unwrap())
        .collect();
    let mut candidates: u128 = 1;
    for k in 0..d {
        candidates = candidates.saturating_mul((hi[k] as i128 - lo[k] as i128 + 1) as u128);
    }
    if candidates > limit as u128 {
        return Err(Error::DimensionTooLarge { candidates, limit });
    }
    let facets = hull_facets(vertices);
    let fast = FastHalfspaces::new(&facets).ok_or(Error::DimensionTooLarge { candidates, limit })?;
    let width0 = (hi[0] - lo[0] + 1) as usize;
    let count: u64 = (0..width0)
        .into_par_iter()
        .map(|off| {
            let mut x: Vec<i64> = lo.clone();
            x[0] = lo[0] + off as i64;
            let mut c = 0u64;
            loop {
                if fast.contains(&x) {
                    c += 1;
                }
                // odometer over coordinates 1..d
                let mut k = 1;
                while k < d {
                    if x[k] < hi[k] {
                        x[k] += 1;
                        break;
                    }
                    x[k] = lo[k];
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
            c
        })
        .sum();
    let vol = hull_volume(vertices);
    let bound = &vol * BigRational::from_integer(factorial(d as u32 + 1));
    let count_q = BigRational::from_integer(BigInt::from(count));
    Ok(LatticePointCount {
        count,
        normalized_volume: crate::arith::rat_to_string(&vol),
        bound: crate::arith::rat_to_string(&bound),
        within_bound: count_q <= bound,
        equality: count_q == bound,
    })
}

/// Parses an integral-basis file: `d` lines of `d` rationals.
pub fn parse_basis(text: &str) -> Result<Vec<Vec<BigRational>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| crate::arith::parse_rat(t).ok_or_else(|| Error::Parse(format!("bad rational {t:?} in basis file"))))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_matrix, int_vec};
    use crate::numfield::field_of;

    fn std_lattice(d: usize) -> Lattice {
        Lattice::new((0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()).unwrap()
    }

    #[test]
    fn integer_lattice_covering() {
        for d in 1..5 {
            let l = std_lattice(d);
            assert!((l.covering_radius_upper() - (d as f64).sqrt() / 2.0).abs() < 1e-8);
            assert!((l.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cvp_examples() {
        let l = std_lattice(2);
        let cv = l.closest_vector(&[0.4, 0.6]);
        assert_eq!(cv.coeffs, int_vec(&[0, 1]));
        assert!((cv.distance - 0.32f64.sqrt()).abs() < 1e-12);
        let mid = l.closest_vector(&[0.5, 0.5]);
        assert!((mid.distance - 0.5f64.sqrt()).abs() < 1e-12);
        let exact = l.closest_vector(&[3.0, -2.0]);
        assert_eq!(exact.coeffs, int_vec(&[3, -2]));
        assert_eq!(exact.distance, 0.0);
    }

    #[test]
    fn skewed_basis_is_reduced_and_cvp_exact() {
        // basis (1, 0), (100, 1) spans Z^2; after reduction cvp is trivial
        let l = Lattice::new(vec![vec![1.0, 0.0], vec![100.0, 1.0]]).unwrap();
        assert!((l.determinant() - 1.0).abs() < 1e-9);
        let cv = l.closest_vector(&[7.2, 3.9]);
        // point (7, 4) = -393 (1,0) + 4 (100,1)
        assert_eq!(cv.coeffs, int_vec(&[-393, 4]));
    }

    #[test]
    fn field_lattice_determinants() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        let lat = build_lattice(&golden, &AlphaWeights::ones(2)).unwrap();
        assert!((lat.det_qalpha - 5.0).abs() < 5e-6);
        let plastic = field_of(&[-1, -1, 0, 1]).unwrap();
        let lat = build_lattice(&plastic, &AlphaWeights::ones(2)).unwrap();
        assert!((lat.det_qalpha - 23.0).abs() < 23e-6);
        let two = field_of(&[-2, 1]).unwrap();
        let lat = build_lattice(&two, &AlphaWeights::ones(1)).unwrap();
        assert!((lat.det_qalpha - 1.0).abs() < 1e-9);
        assert!(lat.ell_hat >= 0.5);
    }

    #[test]
    fn thickness_examples() {
        let plastic = field_of(&[-1, -1, 0, 1]).unwrap();
        let t = build_lattice(&plastic, &AlphaWeights::ones(2)).unwrap().thickness();
        assert!((t.banaszczyk_bound - 0.75 * 23f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((t.banaszczyk_bound - 2.132).abs() < 1e-3);
        let golden = field_of(&[-1, -1, 1]).unwrap();
        let t = build_lattice(&golden, &AlphaWeights::ones(2)).unwrap().thickness();
        assert!((t.banaszczyk_bound - 1.118).abs() < 1e-3);
    }

    #[test]
    fn optimize_alpha_descends() {
        let ctx = field_of(&[-1, -3, 0, 1]).unwrap();
        let start = AlphaWeights::ones(3);
        assert_eq!(optimize_alpha(&ctx, &start, 0).unwrap(), start);
        let before = build_lattice(&ctx, &start).unwrap().thickness().tau;
        let opt = optimize_alpha(&ctx, &start, 50).unwrap();
        let after = build_lattice(&ctx, &opt).unwrap().thickness().tau;
        assert!(after <= before + 1e-9);
    }

    #[test]
    fn counting_examples() {
        let simplex = int_matrix(&[&[0, 0], &[1, 0], &[0, 1]]);
        let c = count_lattice_points(&simplex, DEFAULT_COUNT_LIMIT).unwrap();
        assert_eq!(c.count, 3);
        assert!(c.equality);
        let square = int_matrix(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let c = count_lattice_points(&square, DEFAULT_COUNT_LIMIT).unwrap();
        assert_eq!((c.count, c.bound.as_str()), (4, "6"));
        let seg = int_matrix(&[&[0], &[3]]);
        let c = count_lattice_points(&seg, DEFAULT_COUNT_LIMIT).unwrap();
        assert_eq!((c.count, c.bound.as_str()), (4, "6"));
        assert!(matches!(count_lattice_points(&seg, 2), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn user_basis_checks() {
        let golden = field_of(&[-1, -1, 1]).unwrap();
        // O_K = Z[lambda] for the golden ratio; the basis {1, lambda - 1} is equivalent
        let ok = parse_basis("1 0\n-1 1\n").unwrap();
        let lat = build_lattice_with_basis(&golden, &AlphaWeights::ones(2), Some(ok)).unwrap();
        assert_eq!(lat.label, LatticeLabel::UserBasis);
        assert!((lat.det_qalpha - 5.0).abs() < 1e-5);
        // (1/2) Z[lambda] is lambda-stable but not integral
        let half = parse_basis("1/2 0\n0 1/2\n").unwrap();
        assert!(matches!(
            build_lattice_with_basis(&golden, &AlphaWeights::ones(2), Some(half)),
            Err(Error::InvalidBasis(_))
        ));
        // Z + 2 Z lambda is not lambda-stable
        let unstable = parse_basis("1 0\n0 2\n").unwrap();
        assert!(matches!(
            build_lattice_with_basis(&golden, &AlphaWeights::ones(2), Some(unstable)),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn maximal_order_basis_halves_discriminant() {
        // lambda = 2 + sqrt5 is a root of x^2 - 4x - 1 (disc 20); the
        // maximal order has basis {1, (lambda - 1)/2}
        let ctx = field_of(&[-1, -4, 1]).unwrap();
        let basis = parse_basis("1 0\n-1/2 1/2\n").unwrap();
        let lat = build_lattice_with_basis(&ctx, &AlphaWeights::ones(2), Some(basis)).unwrap();
        assert_eq!(lat.disc, BigInt::from(5));
        assert!((lat.det_qalpha - 5.0).abs() < 1e-5);
    }
}
