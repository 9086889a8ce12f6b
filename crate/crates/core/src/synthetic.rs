//! Teacher-network data generation for experiments.
//!
//! Covariates are i.i.d. uniform on `[-1, 1]^d`; labels come from a frozen
//! teacher network `θ*` as `y = sign(f_{θ*}(x))`, optionally flipped with a
//! constant probability. The flip model keeps the Bayes error exactly
//! `p_flip` (and 0 in the noiseless case), which is what grounds the
//! rate-decay and certificate-coverage experiments.
//!
//! An optional margin filter rejection-samples `x` until `|f_{θ*}(x)| ≥ τ`,
//! which bounds the teacher's hinge-to-0-1 risk ratio by construction
//! (`τ ≥ 1` makes the teacher's hinge risk vanish outright).
//!
//! Generation is counter-based: point `i` draws from ChaCha stream `i` of
//! the dataset seed, so datasets are reproducible and points can be
//! generated in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::network::{Activation, Architecture, DenseNet, SparseParams};
use crate::risk::Dataset;
use crate::{Error, Result};

const MARGIN_ATTEMPTS: usize = 10_000;

/// Label-noise model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Noise {
    /// `y = sign(f_{θ*}(x))` almost surely; the Bayes error is 0.
    Noiseless,
    /// Each label flipped independently with probability `p ∈ [0, 0.5)`;
    /// the Bayes error is exactly `p`.
    Flip { p: f64 },
}

/// A frozen teacher: network, noise model, and optional margin filter.
#[derive(Clone, Debug)]
pub struct TeacherSpec {
    params: SparseParams,
    noise: Noise,
    margin_tau: f64,
}

impl TeacherSpec {
    pub fn new(params: SparseParams, noise: Noise, margin_tau: f64) -> Result<Self> {
        if let Noise::Flip { p } = noise {
            if !(0.0..0.5).contains(&p) {
                return Err(Error::Config(format!(
                    "flip probability must lie in [0, 0.5), got {}",
                    p
                )));
            }
        }
        if !margin_tau.is_finite() || margin_tau < 0.0 {
            return Err(Error::Config(format!(
                "margin τ must be finite and ≥ 0, got {}",
                margin_tau
            )));
        }
        Ok(TeacherSpec {
            params,
            noise,
            margin_tau,
        })
    }

    /// Teacher drawn from the spike-and-slab prior.
    pub fn from_prior<R: Rng + ?Sized>(
        arch: &Architecture,
        noise: Noise,
        margin_tau: f64,
        rng: &mut R,
    ) -> Result<Self> {
        arch.validate()?;
        TeacherSpec::new(crate::prior::sample_prior(arch, rng), noise, margin_tau)
    }

    pub fn params(&self) -> &SparseParams {
        &self.params
    }

    pub fn noise(&self) -> Noise {
        self.noise
    }

    pub fn margin_tau(&self) -> f64 {
        self.margin_tau
    }

    /// Exact Bayes misclassification risk of the generating process.
    pub fn bayes_error(&self) -> f64 {
        match self.noise {
            Noise::Noiseless => 0.0,
            Noise::Flip { p } => p,
        }
    }
}

/// Draws one `(x, y)` pair on the teacher's stream for point `i`.
fn gen_point(
    net: &DenseNet,
    spec: &TeacherSpec,
    seed: u64,
    i: u64,
) -> Result<(Vec<f64>, i8)> {
    let d = spec.params.arch().input_dim;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let mut cur = Vec::with_capacity(net.scratch_len());
    let mut next = Vec::with_capacity(net.scratch_len());
    let mut attempts = 0;
    let (x, f) = loop {
        attempts += 1;
        if attempts > MARGIN_ATTEMPTS {
            return Err(Error::Generation(format!(
                "margin filter τ = {} starved after {} attempts (teacher output \
                 rarely clears the margin)",
                spec.margin_tau, MARGIN_ATTEMPTS
            )));
        }
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let f = net.eval_with(&x, Activation::Relu, &mut cur, &mut next);
        if spec.margin_tau == 0.0 || f.abs() >= spec.margin_tau {
            break (x, f);
        }
    };
    let mut y: i8 = if f > 0.0 { 1 } else { -1 };
    if let Noise::Flip { p } = spec.noise {
        if rng.gen::<f64>() < p {
            y = -y;
        }
    }
    Ok((x, y))
}

/// Generates `n` i.i.d. pairs from the teacher; deterministic given `seed`,
/// parallel over points.
pub fn gen_dataset(spec: &TeacherSpec, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Config("dataset size must be ≥ 1".into()));
    }
    let net = DenseNet::from_params(&spec.params);
    let rows: Vec<(Vec<f64>, i8)> = (0..n as u64)
        .into_par_iter()
        .map(|i| gen_point(&net, spec, seed, i))
        .collect::<Result<_>>()?;
    Dataset::from_rows(&rows)
}

/// Fixed smooth functions on `[-1, 1]^d` used as analytic regression
/// targets in rate experiments; all are `C^∞` on the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothFunction {
    /// `sin(π x₁)`
    Sine,
    /// `1/2 - ‖x‖² / (2d)`
    Radial,
    /// `x₁ x₂` (needs `d ≥ 2`)
    Prod,
}

impl SmoothFunction {
    pub fn min_dim(&self) -> usize {
        match self {
            SmoothFunction::Prod => 2,
            _ => 1,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            SmoothFunction::Sine => (std::f64::consts::PI * x[0]).sin(),
            SmoothFunction::Radial => {
                let sq: f64 = x.iter().map(|v| v * v).sum();
                0.5 - sq / (2.0 * x.len() as f64)
            }
            SmoothFunction::Prod => x[0] * x[1],
        }
    }
}

/// Looks up a named smooth test function, checking it supports dimension
/// `d`.
pub fn smooth_test_function(name: &str, d: usize) -> Result<SmoothFunction> {
    let f = match name {
        "sine" => SmoothFunction::Sine,
        "radial" => SmoothFunction::Radial,
        "prod" => SmoothFunction::Prod,
        other => {
            return Err(Error::Config(format!(
                "unknown smooth function '{}' (expected sine, radial, or prod)",
                other
            )))
        }
    };
    if d < f.min_dim() {
        return Err(Error::Config(format!(
            "'{}' needs input dimension ≥ {}, got {}",
            name,
            f.min_dim(),
            d
        )));
    }
    Ok(f)
}
