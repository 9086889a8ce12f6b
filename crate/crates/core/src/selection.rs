//! Architecture selection over `(S, L, D)` by the free-energy criterion
//!
//! ```text
//! (Ŝ, L̂, D̂) = argmin  ∫r_n^h dρ̂_λ + (KL(ρ̂_λ, π) + log(1/p_{S,L,D}))/λ
//! ```
//!
//! evaluated through the identity `∫r_n^h dρ̂ + KL/λ = -(1/λ) log Z(λ)`, so a
//! thermodynamic `log Ẑ` estimate per candidate is all that is needed. The
//! hierarchical belief `p_{S,L,D}` puts `2^{-L}` on depth, a uniform mass on
//! widths `{d, ..., max(⌊e^L⌋, d)}`, and `1/T` on sparsity.
//!
//! Also provides the two closed-form architecture presets calibrated for the
//! low-dimensional and high-dimensional regimes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::network::Architecture;
use crate::risk::Dataset;
use crate::sampler::{thermo_log_z, ChainConfig, TiEstimate};
use crate::{Error, Result};

/// `log p_{S,L,D}`, or `-∞` when the width lies outside its prior support
/// (such candidates are rejected, not errored).
pub fn log_prior_belief(arch: &Architecture) -> f64 {
    let d = arch.input_dim as f64;
    let upper = (arch.depth as f64).exp().floor().max(d);
    let width = arch.width as f64;
    if width < d || width > upper {
        return f64::NEG_INFINITY;
    }
    let count = upper - d + 1.0;
    -(arch.depth as f64) * 2.0_f64.ln() - count.ln() - (arch.param_count() as f64).ln()
}

/// A selection problem: candidates scored at a shared temperature with a
/// shared integration budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateGrid {
    pub candidates: Vec<Architecture>,
    pub lambda: f64,
    /// Thermodynamic-integration grid size `m` (m+1 nodes per candidate).
    pub ti_grid: usize,
    /// Base chain settings; `lambda` and `stream_offset` are overridden per
    /// candidate and node.
    pub chain: ChainConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateScore {
    pub arch: Architecture,
    /// `-(1/λ) log Ẑ + log(1/p)/λ`; `+∞` for rejected candidates.
    pub objective: f64,
    pub std_error: f64,
    pub log_prior_belief: f64,
    pub log_z: f64,
    /// True when the width prior assigns the candidate zero mass.
    pub rejected: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelectionResult {
    pub scores: Vec<CandidateScore>,
    /// Index of the argmin in `scores` (first in grid order on ties).
    pub best: usize,
}

impl SelectionResult {
    pub fn best_score(&self) -> &CandidateScore {
        &self.scores[self.best]
    }
}

pub(crate) fn objective_from_parts(log_z: f64, log_p: f64, lambda: f64) -> f64 {
    -log_z / lambda + (-log_p) / lambda
}

fn candidate_score(ti: &TiEstimate, arch: &Architecture, lambda: f64) -> CandidateScore {
    let log_p = log_prior_belief(arch);
    CandidateScore {
        arch: *arch,
        objective: objective_from_parts(ti.log_z, log_p, lambda),
        std_error: ti.std_error / lambda,
        log_prior_belief: log_p,
        log_z: ti.log_z,
        rejected: false,
    }
}

/// Free-energy objective of a single candidate, with its MC standard error.
pub fn selection_objective(
    arch: &Architecture,
    data: &Dataset,
    lambda: f64,
    ti_grid: usize,
    base: &ChainConfig,
) -> Result<(f64, f64)> {
    let log_p = log_prior_belief(arch);
    if log_p == f64::NEG_INFINITY {
        return Err(Error::Selection(format!(
            "width {} is outside the prior support for depth {} and input {}",
            arch.width, arch.depth, arch.input_dim
        )));
    }
    let ti = thermo_log_z(data, arch, lambda, ti_grid, base)?;
    Ok((
        objective_from_parts(ti.log_z, log_p, lambda),
        ti.std_error / lambda,
    ))
}

/// Scores every candidate and returns the argmin.
///
/// Candidate `i` shifts the chain stream offsets by `(i+1) << 40`, so scores
/// are independent across candidates and unchanged when the grid is extended.
pub fn select_architecture(grid: &CandidateGrid, data: &Dataset) -> Result<SelectionResult> {
    if grid.candidates.is_empty() {
        return Err(Error::Selection("empty candidate grid".into()));
    }
    if !grid.lambda.is_finite() || grid.lambda <= 0.0 {
        return Err(Error::Config(format!(
            "selection needs λ > 0, got {}",
            grid.lambda
        )));
    }
    for arch in &grid.candidates {
        arch.validate()?;
        if arch.input_dim != data.dim() {
            return Err(Error::DimensionMismatch(format!(
                "candidate expects d = {}, dataset has d = {}",
                arch.input_dim,
                data.dim()
            )));
        }
    }
    let scores: Vec<CandidateScore> = grid
        .candidates
        .par_iter()
        .enumerate()
        .map(|(i, arch)| {
            let log_p = log_prior_belief(arch);
            if log_p == f64::NEG_INFINITY {
                return Ok(CandidateScore {
                    arch: *arch,
                    objective: f64::INFINITY,
                    std_error: 0.0,
                    log_prior_belief: log_p,
                    log_z: f64::NAN,
                    rejected: true,
                });
            }
            let mut base = grid.chain.clone();
            base.stream_offset = grid.chain.stream_offset
                + ((i as u64 + 1) << crate::sampler::STREAM_RUN_SHIFT);
            let ti = thermo_log_z(data, arch, grid.lambda, grid.ti_grid, &base)?;
            Ok(candidate_score(&ti, arch, grid.lambda))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        if s.rejected {
            continue;
        }
        if best.map_or(true, |b| s.objective < scores[b].objective) {
            best = Some(i);
        }
    }
    let best = best.ok_or_else(|| {
        Error::Selection("every candidate was rejected by the width prior".into())
    })?;
    Ok(SelectionResult { scores, best })
}

fn check_beta(d: usize, beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < d as f64) {
        return Err(Error::Config(format!(
            "smoothness β must lie in (0, d) = (0, {}), got {}",
            d, beta
        )));
    }
    Ok(())
}

fn ceil_log2(d: usize) -> u32 {
    if d <= 1 {
        0
    } else if d.is_power_of_two() {
        d.ilog2()
    } else {
        d.ilog2() + 1
    }
}

/// Sparsity from the raw formula value, capped at `T` with a warning.
fn cap_sparsity(raw: f64, t: usize) -> usize {
    let want = raw.ceil();
    if want > t as f64 {
        log::warn!(
            "preset sparsity formula gives {} > T = {}; capping at T",
            want,
            t
        );
        t
    } else {
        (want as usize).max(1)
    }
}

/// Low-dimensional preset (`C_B = 2`):
///
/// * `L = 8 + (⌊log₂ n⌋ + 5)(1 + ⌈log₂ d⌉)`
/// * `D = max(1, ⌊C_D · n^{d/(2β+d)} / ln n⌋)`
/// * `S = min(T, ⌈94 d² (β+1)^{2d} D (L + ⌈log₂ d⌉)⌉)`
///
/// Deep and narrow; at desk-scale `n` the sparsity formula almost always
/// saturates at `T`.
pub fn preset_lowdim(n: usize, d: usize, beta: f64, c_d: f64) -> Result<Architecture> {
    if d == 0 {
        return Err(Error::Config("input dimension must be ≥ 1".into()));
    }
    if n < 2 {
        return Err(Error::Config("preset needs n ≥ 2".into()));
    }
    check_beta(d, beta)?;
    if !c_d.is_finite() || c_d <= 0.0 {
        return Err(Error::Config(format!("C_D must be positive, got {}", c_d)));
    }
    let cl2 = ceil_log2(d) as usize;
    let depth = 8 + (n.ilog2() as usize + 5) * (1 + cl2);
    let nf = n as f64;
    let exponent = d as f64 / (2.0 * beta + d as f64);
    let width = ((c_d * nf.powf(exponent) / nf.ln()).floor() as usize).max(1);
    let bare = Architecture::new(d, depth, width, 1, 2.0)?;
    let t = bare.param_count();
    let raw_s = 94.0
        * (d as f64).powi(2)
        * (beta + 1.0).powf(2.0 * d as f64)
        * width as f64
        * (depth + cl2) as f64;
    Architecture::new(d, depth, width, cap_sparsity(raw_s, t), 2.0)
}

/// Proportionality constants for the high-dimensional preset.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HighdimConstants {
    pub c_l: f64,
    pub c_d: f64,
    pub c_s: f64,
}

impl Default for HighdimConstants {
    fn default() -> Self {
        HighdimConstants {
            c_l: 1.0,
            c_d: 1.0,
            c_s: 1.0,
        }
    }
}

/// High-dimensional preset (`C_B = 2`): logarithmic depth, width of the
/// order of `d`:
///
/// * `L = max(3, ⌈c_L ln n⌉)`
/// * `D = max(d, ⌈c_D d⌉)`
/// * `S = min(T, ⌈c_S n^{d/(2β+d)} ln n⌉)`
pub fn preset_highdim(
    n: usize,
    d: usize,
    beta: f64,
    constants: &HighdimConstants,
) -> Result<Architecture> {
    if d == 0 {
        return Err(Error::Config("input dimension must be ≥ 1".into()));
    }
    if n < 2 {
        return Err(Error::Config("preset needs n ≥ 2".into()));
    }
    check_beta(d, beta)?;
    for (name, v) in [
        ("c_L", constants.c_l),
        ("c_D", constants.c_d),
        ("c_S", constants.c_s),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Config(format!("{} must be positive, got {}", name, v)));
        }
    }
    let nf = n as f64;
    let depth = ((constants.c_l * nf.ln()).ceil() as usize).max(3);
    let width = ((constants.c_d * d as f64).ceil() as usize).max(d);
    let bare = Architecture::new(d, depth, width, 1, 2.0)?;
    let t = bare.param_count();
    let exponent = d as f64 / (2.0 * beta + d as f64);
    let raw_s = constants.c_s * nf.powf(exponent) * nf.ln();
    Architecture::new(d, depth, width, cap_sparsity(raw_s, t), 2.0)
}
