//! Sparse neural network classifiers with exact-sparsity spike-and-slab priors,
//! Gibbs-posterior sampling under the hinge loss, and computable PAC-Bayes
//! generalization certificates.
//!
//! The crate is organised around a single parameter representation
//! ([`network::SparseParams`]): a feed-forward network of depth `L` and width `D`
//! whose flattened coefficient vector has exactly `S` nonzero-eligible entries,
//! each bounded by `C_B`. On top of that sit
//!
//! * [`risk`] — empirical hinge / 0-1 risks and held-out error estimates,
//! * [`prior`] — the uniform spike-and-slab prior and box posteriors with
//!   closed-form KL divergence,
//! * [`sampler`] — Metropolis–Hastings chains targeting the Gibbs posterior
//!   `ρ(θ) ∝ exp(-λ r_n(θ)) π(θ)`, plus thermodynamic integration for `log Z`,
//! * [`bounds`] — oracle-style rate bounds and empirical risk certificates,
//! * [`selection`] — free-energy architecture selection over candidate grids,
//! * [`synthetic`] — teacher-network and smooth-function data generators,
//! * [`enumerate`] — exact enumeration of quantized-slab models, used as a
//!   ground-truth oracle for the samplers,
//! * [`verify`] — numerical verification battery for the supporting
//!   inequalities (variational identity, MGF bounds, KL and perturbation
//!   estimates),
//! * [`experiments`] — multi-run drivers for rate and certificate-coverage
//!   studies.
//!
//! All randomness flows through explicitly seeded ChaCha streams; every public
//! entry point is deterministic given its seed, including across process
//! restarts and chain checkpoint/resume.

pub mod bounds;
pub mod cli;
pub mod enumerate;
mod error;
pub mod experiments;
pub mod network;
pub mod prior;
pub mod risk;
pub mod sampler;
pub mod selection;
pub mod synthetic;
pub mod verify;

pub use error::{Error, Result};

/// Version stamp embedded in every JSON artifact written by the crate.
pub const SCHEMA_VERSION: u32 = 1;
