//! Construction of integral non-negative matrices with a prescribed Perron
//! spectral radius, with exact certificates for every output.

pub mod arith;
pub mod bounds;
pub mod conebuild;
pub mod error;
pub mod intpoly;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod matana;
pub mod numfield;
pub mod pipeline;
pub mod polytope;
pub mod searchdpf;
pub mod semigrp;

pub use error::{Error, Result};
pub use bounds::{theorem_bounds, BoundReport, ExtFloat};
pub use conebuild::{ConeData, ConeMode, ConeSpec};
pub use intpoly::{certified_roots, discriminant, squarefree_and_no_rational_root, CertifiedRoot, IntPolynomial};
pub use lattice::{AlphaWeights, LatticeContext};
pub use matana::{EdgeShiftGraph, Period, SpectralCertificate};
pub use numfield::{build_field_context, FieldContext, FieldOptions, PlaceVector};
pub use pipeline::{construct, primitive_upgrade, AlphaPolicy, ConstructOptions, Construction, Upgrade};
pub use searchdpf::{brute_force_dpf, SearchMode, SearchOptions, SearchResult};
pub use semigrp::{GeneratorSet, NonNegIntMatrix};
