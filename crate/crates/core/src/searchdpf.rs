//! Exhaustive search for the smallest irreducible or primitive non-negative
//! integer matrix with spectral radius `lambda`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;
use crate::matana::{certify_spectral_radius, charpoly_exact, is_irreducible, period_and_primitivity, SpectralCertificate};
use crate::numfield::{build_field_context, FieldContext, FieldOptions};
use crate::semigrp::NonNegIntMatrix;

pub const DEFAULT_N_MAX: usize = 4;
pub const MAX_SEARCH_DIM: usize = 6;
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Primitive,
    Irreducible,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(SearchMode::Primitive),
            "irreducible" => Ok(SearchMode::Irreducible),
            other => Err(Error::InvalidInput(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    pub n_max: usize,
    /// Maximum number of search-tree nodes over all dimensions.
    pub budget: u64,
    /// Trace, diagonal and row-support pruning; off only for cross-checks.
    pub prune: bool,
    /// Overrides the entry bound `ceil(n lambda^n)`.
    pub entry_cap: Option<u64>,
}

impl SearchOptions {
    pub fn new(mode: SearchMode) -> Self {
        SearchOptions {
            mode,
            n_max: DEFAULT_N_MAX,
            budget: DEFAULT_SEARCH_BUDGET,
            prune: true,
            entry_cap: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub pruned: u64,
    /// Leaves whose characteristic polynomial was divisible by the minimal polynomial.
    pub divisible: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub n_found: Option<usize>,
    pub witness: Option<NonNegIntMatrix>,
    pub certificate: Option<SpectralCertificate>,
    /// Dimensions searched completely without a witness.
    pub exhausted: Vec<usize>,
    pub stats: SearchStats,
}

/// Searches `n = d, d+1, ..., n_max` in order and stops at the first
/// dimension with a certified witness.
pub fn brute_force_dpf(ctx: &FieldContext, opts: &SearchOptions) -> Result<SearchResult> {
    if opts.n_max > MAX_SEARCH_DIM {
        return Err(Error::InvalidInput(format!(
            "search dimension {} exceeds the ceiling {MAX_SEARCH_DIM}",
            opts.n_max
        )));
    }
    let mut stats = SearchStats::default();
    let mut exhausted = Vec::new();
    for n in ctx.degree()..=opts.n_max {
        let mut level = Level::new(ctx, opts, n)?;
        let found = level.run(&mut stats)?;
        if let Some((witness, certificate)) = found {
            return Ok(SearchResult {
                mode: opts.mode,
                n_found: Some(n),
                witness: Some(witness),
                certificate: Some(certificate),
                exhausted,
                stats,
            });
        }
        exhausted.push(n);
    }
    Ok(SearchResult {
        mode: opts.mode,
        n_found: None,
        witness: None,
        certificate: None,
        exhausted,
        stats,
    })
}

/// Depth-first search over one dimension, row-major, entries ascending.
struct Level<'a> {
    ctx: &'a FieldContext,
    opts: &'a SearchOptions,
    n: usize,
    cap: i64,
    diag_cap: i64,
    /// Integer upper bounds on `trace(A^k)`, `k = 1..=n`.
    trace_caps: Vec<i128>,
    lambda_lo: BigRational,
    lambda_hi: BigRational,
    a: Vec<i64>,
}

impl<'a> Level<'a> {
    fn new(ctx: &'a FieldContext, opts: &'a SearchOptions, n: usize) -> Result<Self> {
        let lambda_hi = ctx.lambda.hi.clone();
        let lambda_lo = ctx.lambda.lo.clone();
        let too_big = || Error::InvalidInput("entry bound does not fit in 64 bits".into());
        let cap = match opts.entry_cap {
            Some(c) => c as i64,
            None => {
                let b = BigRational::from_integer(BigInt::from(n)) * num_traits::pow(lambda_hi.clone(), n);
                b.ceil().to_integer().to_i64().ok_or_else(too_big)?
            }
        };
        let diag_cap = lambda_hi.floor().to_integer().to_i64().ok_or_else(too_big)?.min(cap);
        let sums = ctx.poly.power_sums(n);
        let slack = BigRational::from_integer(BigInt::from(n - ctx.degree()));
        let trace_caps = (1..=n)
            .map(|k| {
                let b = BigRational::from_integer(sums[k - 1].clone()) + &slack * num_traits::pow(lambda_hi.clone(), k);
                b.floor().to_integer().to_i128().unwrap_or(i128::MAX)
            })
            .collect();
        Ok(Level {
            ctx,
            opts,
            n,
            cap,
            diag_cap,
            trace_caps,
            lambda_lo,
            lambda_hi,
            a: vec![0; n * n],
        })
    }

    fn run(&mut self, stats: &mut SearchStats) -> Result<Option<(NonNegIntMatrix, SpectralCertificate)>> {
        self.descend(0, stats)
    }

    fn descend(&mut self, pos: usize, stats: &mut SearchStats) -> Result<Option<(NonNegIntMatrix, SpectralCertificate)>> {
        stats.nodes += 1;
        if stats.nodes > self.opts.budget {
            return Err(Error::BudgetExceeded {
                budget: self.opts.budget,
                found: stats.nodes - 1,
            });
        }
        let n = self.n;
        if self.opts.prune && !self.feasible(pos) {
            stats.pruned += 1;
            return Ok(None);
        }
        if pos == n * n {
            stats.leaves += 1;
            return Ok(self.leaf(stats));
        }
        let (i, j) = (pos / n, pos % n);
        let hi = if i == j && self.opts.prune { self.diag_cap } else { self.cap };
        for v in 0..=hi {
            self.a[pos] = v;
            if let Some(found) = self.descend(pos + 1, stats)? {
                return Ok(Some(found));
            }
        }
        self.a[pos] = 0;
        Ok(None)
    }

    /// Checks on the first `filled` entries, the rest taken as zero.
    fn feasible(&self, filled: usize) -> bool {
        let n = self.n;
        if n >= 2 && filled > 0 && filled.is_multiple_of(n) {
            let i = filled / n - 1;
            if (0..n).all(|j| j == i || self.a[i * n + j] == 0) {
                return false;
            }
        }
        // every entry only raises trace(A^k), so partial traces must fit
        let mut power = self.a.clone();
        for k in 0..n {
            let tr: i128 = (0..n).map(|i| power[i * n + i] as i128).sum();
            if tr > self.trace_caps[k] {
                return false;
            }
            if k + 1 < n {
                power = mul_small(&power, &self.a, n);
            }
        }
        true
    }

    fn leaf(&self, stats: &mut SearchStats) -> Option<(NonNegIntMatrix, SpectralCertificate)> {
        let n = self.n;
        let rows: Vec<i64> = (0..n).map(|i| self.a[i * n..(i + 1) * n].iter().sum()).collect();
        let lo = BigRational::from_integer(BigInt::from(*rows.iter().min()?));
        let hi = BigRational::from_integer(BigInt::from(*rows.iter().max()?));
        // min row sum <= spectral radius <= max row sum
        if lo > self.lambda_hi || hi < self.lambda_lo {
            return None;
        }
        let m = NonNegIntMatrix::new(
            (0..n).map(|i| (0..n).map(|j| BigInt::from(self.a[i * n + j])).collect()).collect(),
        )
        .ok()?;
        if !is_irreducible(&m) {
            return None;
        }
        let chi = charpoly_exact(&m);
        chi.div_exact(&self.ctx.poly)?;
        stats.divisible += 1;
        let cert = certify_spectral_radius(self.ctx, &m).ok()?;
        if self.opts.mode == SearchMode::Primitive && !period_and_primitivity(&m).primitive {
            return None;
        }
        Some((m, cert))
    }
}

fn mul_small(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = out[i * n + j].saturating_add(x.saturating_mul(b[k * n + j]));
            }
        }
    }
    out
}

/// First monic cubic `x^3 + a x^2 + b x + c` with `1 <= a <= bound`,
/// `|b|, |c| <= bound`, whose largest root is a Perron number. Its trace
/// `-a` is negative.
pub fn find_negative_trace_cubic(bound: i64) -> Result<IntPolynomial> {
    for a in 1..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                if c == 0 {
                    continue;
                }
                let p = IntPolynomial::from_i64(&[c, b, a, 1])?;
                if build_field_context(&p, &FieldOptions::default()).is_ok_and(|ctx| ctx.lambda.lo > BigRational::zero()) {
                    return Ok(p);
                }
            }
        }
    }
    Err(Error::NotFound(format!("no negative-trace Perron cubic with coefficients bounded by {bound}")))
}
