//! The full construction: lattice, invariant cone, semigroup generators,
//! matrix of the action, and its certified irreducible component.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{theorem_bounds, BoundReport};
use crate::conebuild::{adaptive_search, build_cone, build_cone_spec, ConeData, ConeMode, DEFAULT_SHRINK_FLOOR, DEFAULT_SHRINK_STEPS};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice_with_basis, optimize_alpha, AlphaWeights, LatticeContext};
use crate::matana::{add_identity, certify_spectral_radius, extract_lambda_component, period_and_primitivity, upgrade_threshold, Period, SpectralCertificate};
use crate::numfield::{build_field_context, FieldContext, FieldOptions};
use crate::semigrp::{assemble_matrix, enumerate_generators, prune_generators, GeneratorSet, NonNegIntMatrix, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    Ones,
    /// Coordinate descent on the thickness for this many rounds.
    Optimize(usize),
}

impl std::str::FromStr for AlphaPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "ones" {
            return Ok(AlphaPolicy::Ones);
        }
        s.strip_prefix("optimize:")
            .and_then(|n| n.parse().ok())
            .map(AlphaPolicy::Optimize)
            .ok_or_else(|| Error::InvalidInput(format!("alpha policy must be `ones` or `optimize:N`, got {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    pub mode: ConeMode,
    pub alpha: AlphaPolicy,
    pub shrink_floor: f64,
    pub shrink_steps: usize,
    /// Cap on the number of lattice points enumerated in `C`.
    pub budget: u64,
    /// Rows of an integral basis in power-basis coordinates.
    pub basis: Option<Vec<Vec<BigRational>>>,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            mode: ConeMode::Adaptive,
            alpha: AlphaPolicy::Ones,
            shrink_floor: DEFAULT_SHRINK_FLOOR,
            shrink_steps: DEFAULT_SHRINK_STEPS,
            budget: DEFAULT_BUDGET,
            basis: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub lattice: LatticeContext,
    pub cone: ConeData,
    pub generators: GeneratorSet,
    /// Matrix of the action on all pruned generators.
    pub full_matrix: NonNegIntMatrix,
    /// Generator indices of the extracted component.
    pub component: Vec<usize>,
    pub matrix: NonNegIntMatrix,
    pub certificate: SpectralCertificate,
    pub period: Period,
    pub bounds: BoundReport,
    /// `matrix.dim() <= bound_disc`.
    pub within_bound: bool,
}

pub fn construct(ctx: &FieldContext, opts: &ConstructOptions) -> Result<Construction> {
    if ctx.degree() < 2 {
        return Err(Error::InvalidInput("construction needs degree at least 2".into()));
    }
    let ones = AlphaWeights::ones(ctx.places());
    let alpha = match opts.alpha {
        AlphaPolicy::Ones => ones,
        AlphaPolicy::Optimize(iters) => optimize_alpha(ctx, &ones, iters)?,
    };
    let lattice = build_lattice_with_basis(ctx, &alpha, opts.basis.clone())?;
    let cone = match opts.mode {
        ConeMode::PaperExact => build_cone(&lattice, &build_cone_spec(&lattice, ConeMode::PaperExact, None)?)?,
        ConeMode::Adaptive => adaptive_search(&lattice, opts.shrink_floor, opts.shrink_steps)?,
    };
    let raw = enumerate_generators(&cone.generators, opts.budget)?;
    let generators = prune_generators(&raw)?;
    let full_matrix = assemble_matrix(&lattice.mult_matrix, &generators)?;
    let (matrix, component, certificate) = extract_lambda_component(ctx, &full_matrix)?;
    let period = period_and_primitivity(&matrix);
    let bounds = theorem_bounds(&lattice);
    let dim = crate::bounds::ExtFloat::from_f64(matrix.dim() as f64);
    Ok(Construction {
        within_bound: dim.le(bounds.bound_disc),
        lattice,
        cone,
        generators,
        full_matrix,
        component,
        matrix,
        certificate,
        period,
        bounds,
    })
}

#[derive(Debug, Clone)]
pub struct Upgrade {
    pub threshold: BigRational,
    /// Minimal polynomial of `lambda - 1`.
    pub shifted: FieldContext,
    /// Irreducible construction for `lambda - 1`.
    pub inner: Construction,
    /// `I + inner.matrix`.
    pub matrix: NonNegIntMatrix,
    pub certificate: SpectralCertificate,
    pub period: Period,
}

/// A primitive matrix for `lambda`: `I + A` with `A` irreducible of
/// spectral radius `lambda - 1`. Needs `lambda >= 1 + 4/(1 - rho)`.
pub fn primitive_upgrade(ctx: &FieldContext, field_opts: &FieldOptions, opts: &ConstructOptions) -> Result<Upgrade> {
    let threshold = upgrade_threshold(ctx)?;
    let shifted_poly = ctx.poly.taylor_shift(&BigInt::from(1));
    let shifted = build_field_context(&shifted_poly, field_opts)?;
    let mut inner_opts = opts.clone();
    inner_opts.basis = opts.basis.as_ref().map(|rows| shift_basis(rows));
    let inner = construct(&shifted, &inner_opts)?;
    let matrix = add_identity(&inner.matrix);
    let certificate = certify_spectral_radius(ctx, &matrix)?;
    let period = period_and_primitivity(&matrix);
    if !period.primitive {
        return Err(Error::CertificationFailed("I + A is not primitive".into()));
    }
    Ok(Upgrade {
        threshold,
        shifted,
        inner,
        matrix,
        certificate,
        period,
    })
}

/// Rewrites basis rows from powers of `lambda` to powers of `lambda - 1`.
pub fn shift_basis(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = rows.first().map_or(0, Vec::len);
    let mut binom = vec![vec![BigInt::zero(); d]; d];
    for k in 0..d {
        binom[k][0] = BigInt::from(1);
        for j in 1..=k {
            binom[k][j] = &binom[k - 1][j - 1] + &binom[k - 1][j];
        }
    }
    rows.iter()
        .map(|w| {
            (0..d)
                .map(|j| (0..d).fold(BigRational::zero(), |acc, k| acc + &w[k] * BigRational::from_integer(binom[k][j].clone())))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matana::{charpoly_exact, is_irreducible};
    use crate::numfield::field_of;

    #[test]
    fn golden_and_plastic_adaptive() {
        for c in [&[-1i64, -1, 1][..], &[-1, -1, 0, 1]] {
            let ctx = field_of(c).unwrap();
            let run = construct(&ctx, &ConstructOptions::default()).unwrap();
            assert!(is_irreducible(&run.matrix));
            assert!(charpoly_exact(&run.matrix).div_exact(&ctx.poly).is_some());
            assert!(run.certificate.matches_lambda);
            assert!(run.within_bound);
        }
    }

    #[test]
    fn upgrade_for_a_large_root() {
        let ctx = field_of(&[1, 0, -9, 1]).unwrap();
        let up = primitive_upgrade(&ctx, &FieldOptions::default(), &ConstructOptions::default()).unwrap();
        assert!(up.period.primitive);
        assert_eq!(up.shifted.poly, crate::IntPolynomial::from_i64(&[-7, -15, -6, 1]).unwrap());
        assert!(up.certificate.matches_lambda);
        let plastic = field_of(&[-1, -1, 0, 1]).unwrap();
        assert!(matches!(
            primitive_upgrade(&plastic, &FieldOptions::default(), &ConstructOptions::default()),
            Err(Error::ThresholdNotMet { .. })
        ));
    }

    #[test]
    fn basis_shift() {
        let one = |n: i64| BigRational::from_integer(n.into());
        // lambda^2 = (mu + 1)^2 = mu^2 + 2 mu + 1
        let rows = vec![vec![one(0), one(0), one(1)]];
        assert_eq!(shift_basis(&rows), vec![vec![one(1), one(2), one(1)]]);
    }

    #[test]
    fn alpha_policy_parsing() {
        assert_eq!("ones".parse::<AlphaPolicy>().unwrap(), AlphaPolicy::Ones);
        assert_eq!("optimize:5".parse::<AlphaPolicy>().unwrap(), AlphaPolicy::Optimize(5));
        assert!("optimize:x".parse::<AlphaPolicy>().is_err());
    }
}
