use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "perron-forge", version, about = "Integral non-negative matrices with a prescribed Perron spectral radius")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Certified places, spectral ratio and discriminant of lambda.
    Analyze(AnalyzeArgs),
    /// Build and certify an irreducible (or primitive) matrix for lambda.
    Construct(ConstructArgs),
    /// Evaluate the dimension bounds for the lattice in use.
    Bound(BoundArgs),
    /// Exhaustive search for the smallest matrix dimension.
    Search(SearchArgs),
    /// Re-check a certificate from its JSON files alone.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Minimal polynomial, constant term first: `-1,-1,0,1` is x^3 - x - 1.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Precision ceiling in bits for root isolation.
    #[arg(long, default_value_t = perron_core::numfield::DEFAULT_PRECISION_CEILING)]
    pub precision: u32,
    /// Skip the irreducibility gate (required for degree 4 and above).
    #[arg(long)]
    pub assume_irreducible: bool,
    /// Recorded in every artifact; the pipeline itself draws no random numbers.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Also write `analysis.json` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PaperExact,
    Adaptive,
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    /// `ones` or `optimize:N`.
    #[arg(long, default_value = "ones")]
    pub alpha: String,
    /// Integral basis, one element per line in power-basis coordinates.
    #[arg(long)]
    pub basis_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Adaptive)]
    pub mode: ModeArg,
    /// Smallest shrink factor tried by the adaptive cone search.
    #[arg(long, default_value_t = perron_core::conebuild::DEFAULT_SHRINK_FLOOR)]
    pub shrink_floor: f64,
    /// Bisection steps of the adaptive cone search.
    #[arg(long, default_value_t = perron_core::conebuild::DEFAULT_SHRINK_STEPS)]
    pub shrink_steps: usize,
    /// Maximum number of lattice points enumerated in the compact region.
    #[arg(long, default_value_t = perron_core::semigrp::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Return a primitive matrix I + A built for lambda - 1.
    #[arg(long)]
    pub primitive: bool,
    /// Draw one arrow per unit of multiplicity in graph.dot.
    #[arg(long)]
    pub expand_edges: bool,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Also write `bound.json` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchModeArg {
    Primitive,
    Irreducible,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, value_enum, default_value_t = SearchModeArg::Primitive)]
    pub mode: SearchModeArg,
    #[arg(long, default_value_t = perron_core::searchdpf::DEFAULT_N_MAX)]
    pub n_max: usize,
    /// Maximum number of search-tree nodes.
    #[arg(long, default_value_t = perron_core::searchdpf::DEFAULT_SEARCH_BUDGET)]
    pub budget: u64,
    /// Also write `search.json` here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Directory holding `certificate.json` and `matrix.json`.
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub json: bool,
}
