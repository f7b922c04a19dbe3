//! The invariant cone: polygon radii, the polytope around `L v`, rounding
//! of its vertices to lattice points, and an exact check that the cone over
//! those points is mapped into itself by multiplication by `lambda`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeContext;
use crate::linalg::{mat_vec, rank_int, IntMatrix, IntVector};
use crate::lp::{cone_combination, resubstitutes};
use crate::numfield::PlaceVector;

pub const DEFAULT_SHRINK_FLOOR: f64 = 0.01;
pub const DEFAULT_SHRINK_STEPS: usize = 12;
const VERTEX_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeMode {
    PaperExact,
    Adaptive,
}

impl std::str::FromStr for ConeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-exact" | "paper_exact" => Ok(ConeMode::PaperExact),
            "adaptive" => Ok(ConeMode::Adaptive),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

/// Radii and polygon orders of the polytope `P = prod_{j>1} P_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeSpec {
    pub mode: ConeMode,
    pub shrink: f64,
    pub ell_hat: f64,
    /// `shrink * ell_hat`, the radius fed into the formulas.
    pub ell: f64,
    pub rho_upper: f64,
    /// `R_j` for the places after the first.
    pub radii: Vec<f64>,
    /// Vertex count of each `P_j`: 2 for a real place, `N_j` for a complex one.
    pub orders: Vec<usize>,
    pub big_l: f64,
    pub k: u128,
}

pub fn build_cone_spec(lat: &LatticeContext, mode: ConeMode, shrink: Option<f64>) -> Result<ConeSpec> {
    let ctx = &lat.field;
    let d = ctx.degree();
    if d < 2 {
        return Err(Error::InvalidInput("the cone construction needs degree at least 2".into()));
    }
    let rho = ctx.rho.hi;
    if !(rho < 1.0) {
        return Err(Error::InvalidInput(format!("spectral ratio bound {rho} is not below 1")));
    }
    let t = match mode {
        ConeMode::PaperExact => 1.0,
        ConeMode::Adaptive => shrink.unwrap_or(1.0),
    };
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidInput(format!("shrink factor must lie in (0, 1], got {t}")));
    }
    let ell = t * lat.ell_hat;
    let sd = (d as f64).sqrt();
    let real_radius = (2.0 * sd + 4.0) * ell / (1.0 - rho);
    let n_needed = (2.0 * sd + 9.0) / (1.0 - rho);
    let mut n_complex = 3usize;
    while ((n_complex * n_complex) as f64) < n_needed {
        n_complex += 1;
    }
    let mut radii = Vec::new();
    let mut orders = Vec::new();
    for j in 1..ctx.places() {
        if ctx.is_real_place(j) {
            radii.push(real_radius);
            orders.push(2);
        } else {
            radii.push((n_complex * n_complex) as f64 * ell);
            orders.push(n_complex);
        }
    }
    let big_l = radii.iter().cloned().fold(0.0, f64::max);
    let k = orders.iter().map(|&o| o as u128).product();
    Ok(ConeSpec {
        mode,
        shrink: t,
        ell_hat: lat.ell_hat,
        ell,
        rho_upper: rho,
        radii,
        orders,
        big_l,
        k,
    })
}

/// Vertices `L v + prod_j (vertices of P_j)`, first place varying slowest.
pub fn polytope_vertices(lat: &LatticeContext, spec: &ConeSpec) -> Result<Vec<PlaceVector>> {
    if spec.k > VERTEX_LIMIT {
        return Err(Error::DimensionTooLarge {
            candidates: spec.k,
            limit: VERTEX_LIMIT as u64,
        });
    }
    let ctx = &lat.field;
    let d = ctx.degree();
    let mut out = Vec::with_capacity(spec.k as usize);
    let mut choice = vec![0usize; spec.orders.len()];
    loop {
        let mut scaled = vec![0.0; d];
        scaled[0] = spec.big_l;
        for (idx, &c) in choice.iter().enumerate() {
            let j = idx + 1;
            let o = ctx.place_offset(j);
            let r = spec.radii[idx];
            if ctx.is_real_place(j) {
                scaled[o] = if c == 0 { r } else { -r };
            } else {
                let theta = std::f64::consts::TAU * c as f64 / spec.orders[idx] as f64;
                scaled[o] = r * theta.cos();
                scaled[o + 1] = r * theta.sin();
            }
        }
        out.push(ctx.unscale(&lat.alpha, &scaled));
        let mut pos = choice.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < spec.orders[pos] {
                break;
            }
            choice[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rounded {
    pub generators: Vec<IntVector>,
    /// Index of the vertex each generator came from.
    pub source: Vec<usize>,
    pub distances: Vec<f64>,
}

/// Closest lattice vectors of the vertices, deduplicated (first kept), each
/// certified to have positive first coordinate.
pub fn round_to_lattice(lat: &LatticeContext, vertices: &[PlaceVector]) -> Result<Rounded> {
    let closest: Vec<_> = vertices.par_iter().map(|v| lat.closest_vector(v)).collect();
    let mut seen = HashSet::new();
    let mut out = Rounded {
        generators: Vec::new(),
        source: Vec::new(),
        distances: Vec::new(),
    };
    for (i, cv) in closest.into_iter().enumerate() {
        if !seen.insert(cv.coeffs.clone()) {
            continue;
        }
        if !lat.first_place_positive(&cv.coeffs) {
            return Err(Error::PositivityFailed { index: i });
        }
        out.generators.push(cv.coeffs);
        out.source.push(i);
        out.distances.push(cv.distance);
    }
    Ok(out)
}

/// For each generator, exact `beta >= 0` with `sum beta_m z_m = M z_i`;
/// `Err(i)` names the first generator whose image leaves the cone.
pub fn verify_invariance(mult: &IntMatrix, generators: &[IntVector]) -> std::result::Result<Vec<Vec<BigRational>>, usize> {
    let witnesses: Vec<Option<Vec<BigRational>>> = generators
        .par_iter()
        .map(|z| {
            let image = mat_vec(mult, z);
            cone_combination(generators, &image).filter(|beta| resubstitutes(generators, beta, &image))
        })
        .collect();
    witnesses
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or(i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkAttempt {
    pub shrink: f64,
    pub passed: bool,
    pub outcome: String,
}

#[derive(Debug, Clone)]
pub struct ConeData {
    pub spec: ConeSpec,
    pub vertices: Vec<PlaceVector>,
    pub generators: Vec<IntVector>,
    pub source: Vec<usize>,
    pub distances: Vec<f64>,
    /// `witnesses[i][m]`: coefficient of generator `m` in the image of generator `i`.
    pub witnesses: Vec<Vec<BigRational>>,
    pub attempts: Vec<ShrinkAttempt>,
}

/// One construction attempt for a fixed spec.
pub fn build_cone(lat: &LatticeContext, spec: &ConeSpec) -> Result<ConeData> {
    let vertices = polytope_vertices(lat, spec)?;
    let rounded = round_to_lattice(lat, &vertices)?;
    let d = lat.degree();
    if rank_int(&rounded.generators) < d {
        return Err(Error::CertificationFailed(format!(
            "{} rounded generators do not span the lattice",
            rounded.generators.len()
        )));
    }
    let witnesses = verify_invariance(&lat.mult_matrix, &rounded.generators).map_err(|index| Error::NotInvariant { index })?;
    Ok(ConeData {
        spec: spec.clone(),
        vertices,
        generators: rounded.generators,
        source: rounded.source,
        distances: rounded.distances,
        witnesses,
        attempts: Vec::new(),
    })
}

/// Searches for a small valid shrink factor: tries `t_min`, then bisects
/// (geometrically) between the largest failure and the smallest success,
/// starting from `t = 1`.
pub fn adaptive_search(lat: &LatticeContext, t_min: f64, steps: usize) -> Result<ConeData> {
    if !(t_min > 0.0 && t_min <= 1.0) {
        return Err(Error::InvalidInput(format!("shrink floor must lie in (0, 1], got {t_min}")));
    }
    let mut attempts = Vec::new();
    let attempt = |t: f64, attempts: &mut Vec<ShrinkAttempt>| {
        let res = build_cone_spec(lat, ConeMode::Adaptive, Some(t)).and_then(|s| build_cone(lat, &s));
        attempts.push(ShrinkAttempt {
            shrink: t,
            passed: res.is_ok(),
            outcome: match &res {
                Ok(c) => format!("certified with {} generators", c.generators.len()),
                Err(e) => e.to_string(),
            },
        });
        res
    };
    match attempt(t_min, &mut attempts) {
        Ok(mut cone) => {
            cone.attempts = attempts;
            return Ok(cone);
        }
        Err(e) if t_min >= 1.0 => return Err(e),
        Err(_) => {}
    }
    let mut best = attempt(1.0, &mut attempts)?;
    let mut lo = t_min;
    let mut hi = 1.0f64;
    for _ in 0..steps {
        let mid = (lo * hi).sqrt();
        match attempt(mid, &mut attempts) {
            Ok(c) => {
                hi = mid;
                best = c;
            }
            Err(_) => lo = mid,
        }
    }
    best.attempts = attempts;
    Ok(best)
}

/// Exact re-check of stored witnesses.
pub fn witnesses_resubstitute(mult: &IntMatrix, generators: &[IntVector], witnesses: &[Vec<BigRational>]) -> bool {
    generators.len() == witnesses.len()
        && generators.iter().zip(witnesses).all(|(z, beta)| {
            beta.iter().all(|b| *b >= BigRational::from_integer(BigInt::from(0)))
                && resubstitutes(generators, beta, &mat_vec(mult, z))
        })
}
