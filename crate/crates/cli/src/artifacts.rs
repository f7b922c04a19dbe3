//! JSON documents written by the CLI. Integers and rationals are decimal
//! strings; nothing time- or machine-dependent is recorded.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use perron_core::arith::{parse_rat, rat_to_string, RatInterval};
use perron_core::{FieldContext, IntPolynomial, NonNegIntMatrix, SpectralCertificate};
use serde::{Deserialize, Serialize};

use crate::exit::CliError;

pub const CERTIFICATE_FORMAT: &str = "perron-forge-certificate/1";

pub fn int_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn int_rows(m: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    m.iter().map(|r| int_strings(r)).collect()
}

pub fn rat_rows(m: &[Vec<BigRational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(rat_to_string).collect()).collect()
}

pub fn interval_strings(r: &RatInterval) -> [String; 2] {
    [rat_to_string(&r.lo), rat_to_string(&r.hi)]
}

pub fn parse_int_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<BigInt>>, String> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.parse::<BigInt>().map_err(|_| format!("bad integer {x:?}"))).collect())
        .collect()
}

pub fn parse_rat_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<BigRational>>, String> {
    rows.iter()
        .map(|r| r.iter().map(|x| parse_rat(x).ok_or_else(|| format!("bad rational {x:?}"))).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub poly: IntPolynomial,
    pub display: String,
    pub degree: usize,
    pub real_places: usize,
    pub complex_pairs: usize,
    pub lambda: [String; 2],
    pub lambda_approx: f64,
    pub rho: [f64; 2],
    pub rho_bounds: [String; 2],
    pub disc: String,
    pub pisot: bool,
    pub precision: u32,
}

impl FieldSummary {
    pub fn of(ctx: &FieldContext) -> Self {
        FieldSummary {
            poly: ctx.poly.clone(),
            display: ctx.poly.to_string(),
            degree: ctx.degree(),
            real_places: ctx.r,
            complex_pairs: ctx.s,
            lambda: interval_strings(&ctx.lambda),
            lambda_approx: ctx.lambda_f64(),
            rho: [ctx.rho.lo, ctx.rho.hi],
            rho_bounds: interval_strings(&ctx.rho_bounds),
            disc: ctx.disc.to_string(),
            pisot: ctx.is_pisot(),
            precision: ctx.precision,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDoc {
    pub charpoly: IntPolynomial,
    pub quotient: IntPolynomial,
    pub multiplicity: usize,
    pub cofactor: IntPolynomial,
    pub radius_interval: [String; 2],
    pub method: String,
    pub precision: u32,
    pub matches_lambda: bool,
}

impl SpectralDoc {
    pub fn of(c: &SpectralCertificate) -> Self {
        SpectralDoc {
            charpoly: c.charpoly.clone(),
            quotient: c.quotient.clone(),
            multiplicity: c.multiplicity,
            cofactor: c.cofactor.clone(),
            radius_interval: interval_strings(&c.radius_interval),
            method: c.method.clone(),
            precision: c.precision,
            matches_lambda: c.matches_lambda,
        }
    }
}

/// Everything needed to re-check that the matrix records the action of
/// multiplication by the (possibly shifted) Perron number on a cone semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDoc {
    /// Minimal polynomial of the number acting on the lattice.
    pub poly: IntPolynomial,
    pub lattice_label: String,
    /// Lattice basis rows in power-basis coordinates.
    pub basis_rows: Vec<Vec<String>>,
    pub mult_matrix: Vec<Vec<String>>,
    pub cone_generators: Vec<Vec<String>>,
    /// Row `i`: non-negative coefficients writing `mult * z_i` over the cone generators.
    pub invariance_witnesses: Vec<Vec<String>>,
    pub semigroup_generators: Vec<Vec<String>>,
    pub full_matrix: NonNegIntMatrix,
    pub component: Vec<usize>,
    /// The output matrix is the identity plus the component.
    pub identity_added: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub format: String,
    pub seed: u64,
    pub poly: IntPolynomial,
    pub assume_irreducible: bool,
    pub precision_ceiling: u32,
    pub lambda: [String; 2],
    pub matrix: NonNegIntMatrix,
    pub period: u64,
    pub primitive: bool,
    pub spectral: SpectralDoc,
    pub action: ActionDoc,
}

/// Writes through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.join(name).display()));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, dir.join(name)).map_err(io)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    write_atomic(dir, name, s.as_bytes())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(dir: &Path, name: &str) -> Result<T, CliError> {
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
