//! Metropolis–Hastings sampling from the Gibbs posterior
//! `ρ̂_λ(θ) ∝ exp(-λ r_n^h(θ)) π(θ)` over the exact-`S` support, plus
//! thermodynamic integration for `log Z(λ)`.
//!
//! Two move types drive the chain:
//!
//! * **weight move** — one active coordinate gets uniform `(-δ, δ)` noise,
//!   reflected at `±C_B`; the mask is unchanged.
//! * **swap move** — one active index is retired and one inactive index
//!   activated with a fresh slab draw. Forward and reverse proposal densities
//!   are both `1/(S(T-S)) · 1/(2C_B)`, and the prior is constant on its
//!   support, so both moves accept with `min(1, exp(-λ Δr_n^h))`.
//!
//! The slab may be quantized to a fixed level grid (`Slab::Quantized`), which
//! makes the state space finite and lets the chain be validated against the
//! exact enumeration in [`crate::enumerate`].
//!
//! Determinism: chain `c` draws from a ChaCha stream with id
//! `stream_offset + c`, so runs are reproducible and resumable (the RNG word
//! position is stored in checkpoints). Stream-id blocks are carved up as
//! `chain | node << 24 | run << 40` by the thermodynamic-integration and
//! experiment drivers so no two chains anywhere share a stream.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::slab_levels;
use crate::network::{Architecture, SparseParams};
use crate::risk::{hinge_risk, Dataset};
use crate::{Error, Result, SCHEMA_VERSION};

/// Stream-id block reserved for thermodynamic-integration nodes.
pub(crate) const STREAM_NODE_SHIFT: u32 = 24;
/// Stream-id block reserved for experiment runs / grid candidates.
pub(crate) const STREAM_RUN_SHIFT: u32 = 40;

/// Slab support used by the sampler's value draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Slab {
    /// Uniform on `[-C_B, C_B]` (the model of the theory).
    Continuous,
    /// Uniform on `levels` evenly spaced points spanning `[-C_B, C_B]`;
    /// finite state space, used for oracle validation.
    Quantized { levels: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveKind {
    Weight,
    Swap,
}

/// MCMC settings; see [`ChainConfig::new`] for defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Inverse temperature `λ ≥ 0` of the Gibbs posterior.
    pub lambda: f64,
    /// Total MH steps per chain.
    pub steps: usize,
    /// Discarded prefix, `burn_in < steps`.
    pub burn_in: usize,
    /// Keep-every stride over post-burn-in steps.
    pub thin: usize,
    /// Weight-move half-width `δ ∈ (0, 2 C_B]`; `None` means `C_B / 10`.
    pub step_size: Option<f64>,
    /// Probability of attempting a swap move, in `[0, 1)`.
    pub swap_prob: f64,
    pub seed: u64,
    /// Independent chains, merged in index order.
    pub chains: u32,
    pub slab: Slab,
    /// Ramp the inverse temperature linearly from 0 to λ across the burn-in
    /// (helps mixing at large λ; the post-burn-in kernel is unchanged).
    pub anneal_burn_in: bool,
    /// Base stream id for this run's chains (chain `c` uses
    /// `stream_offset + c`). Leave 0 unless embedding chains in a larger
    /// seeded experiment.
    pub stream_offset: u64,
}

impl ChainConfig {
    pub fn new(lambda: f64, seed: u64) -> Self {
        ChainConfig {
            lambda,
            steps: 10_000,
            burn_in: 2_000,
            thin: 10,
            step_size: None,
            swap_prob: 0.3,
            seed,
            chains: 1,
            slab: Slab::Continuous,
            anneal_burn_in: false,
            stream_offset: 0,
        }
    }

    pub fn validate(&self, arch: &Architecture) -> Result<()> {
        arch.validate()?;
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::Config(format!(
                "lambda must be finite and ≥ 0, got {}",
                self.lambda
            )));
        }
        if self.burn_in >= self.steps {
            return Err(Error::Config(format!(
                "burn_in = {} must be < steps = {}",
                self.burn_in, self.steps
            )));
        }
        if self.thin == 0 || self.thin > self.steps - self.burn_in {
            return Err(Error::Config(format!(
                "thin = {} must be in 1..={} (steps - burn_in)",
                self.thin,
                self.steps - self.burn_in
            )));
        }
        if !(0.0..1.0).contains(&self.swap_prob) {
            return Err(Error::Config(format!(
                "swap_prob must be in [0, 1), got {}",
                self.swap_prob
            )));
        }
        if self.chains == 0 {
            return Err(Error::Config("need at least one chain".into()));
        }
        if let Some(delta) = self.step_size {
            if !delta.is_finite() || delta <= 0.0 || delta > 2.0 * arch.weight_bound {
                return Err(Error::Config(format!(
                    "step size δ must lie in (0, 2 C_B], got {}",
                    delta
                )));
            }
        }
        if let Slab::Quantized { levels } = self.slab {
            if levels < 2 {
                return Err(Error::Config("quantized slab needs ≥ 2 levels".into()));
            }
        }
        Ok(())
    }

    /// Weight-move half-width after applying the `C_B / 10` default.
    pub fn resolved_step_size(&self, arch: &Architecture) -> f64 {
        self.step_size.unwrap_or(arch.weight_bound / 10.0)
    }
}

/// Per-move-type proposal and acceptance counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptStats {
    pub weight_proposed: u64,
    pub weight_accepted: u64,
    pub swap_proposed: u64,
    pub swap_accepted: u64,
    /// Swap attempts skipped because `S = T` leaves nothing to swap.
    pub swap_skipped: u64,
}

impl AcceptStats {
    /// Acceptance fraction for weight moves (0 when none were proposed).
    pub fn weight_rate(&self) -> f64 {
        if self.weight_proposed == 0 {
            0.0
        } else {
            self.weight_accepted as f64 / self.weight_proposed as f64
        }
    }

    pub fn swap_rate(&self) -> f64 {
        if self.swap_proposed == 0 {
            0.0
        } else {
            self.swap_accepted as f64 / self.swap_proposed as f64
        }
    }

    fn add(&mut self, other: &AcceptStats) {
        self.weight_proposed += other.weight_proposed;
        self.weight_accepted += other.weight_accepted;
        self.swap_proposed += other.swap_proposed;
        self.swap_accepted += other.swap_accepted;
        self.swap_skipped += other.swap_skipped;
    }
}

/// End-of-run state of one chain, sufficient to resume it exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainTail {
    pub end_state: SparseParams,
    /// ChaCha word position, `[low, high]` halves of the u128.
    pub rng_word_pos: [u64; 2],
    pub kept: usize,
    pub steps_done: usize,
}

/// Merged output of one or more chains.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainResult {
    pub arch: Architecture,
    pub config: ChainConfig,
    /// Kept draws, chain-major (chain 0's draws first).
    pub draws: Vec<SparseParams>,
    /// `r_n^h` of each kept draw, parallel to `draws`.
    pub hinge_trace: Vec<f64>,
    pub accept: AcceptStats,
    /// Posterior-mean hinge risk over kept draws.
    pub mean_hinge: f64,
    /// Batch-means standard error of `mean_hinge`.
    pub se_hinge: f64,
    pub per_chain: Vec<ChainTail>,
}

fn reflect(v: f64, c_b: f64) -> f64 {
    if v > c_b {
        2.0 * c_b - v
    } else if v < -c_b {
        -2.0 * c_b - v
    } else {
        v
    }
}

fn accept_prob(beta: f64, delta_risk: f64) -> f64 {
    if delta_risk <= 0.0 {
        1.0
    } else {
        (-beta * delta_risk).exp()
    }
}

/// Single-site weight move: uniform noise on one active coordinate, reflected
/// at `±C_B`. Symmetric; the mask is unchanged.
pub fn propose_weight<R: Rng + ?Sized>(
    current: &SparseParams,
    rng: &mut R,
    delta: f64,
) -> SparseParams {
    let active = current.active();
    let t = active[rng.gen_range(0..active.len())];
    let c_b = current.arch().weight_bound;
    let noise = rng.gen_range(-delta..delta);
    let v = reflect(current.value(t) + noise, c_b);
    current
        .with_value(t, v)
        .expect("reflected value stays inside the slab")
}

/// Quantized-slab weight move: one active coordinate is redrawn uniformly
/// from the level grid (symmetric; may propose the current level).
pub fn propose_weight_quantized<R: Rng + ?Sized>(
    current: &SparseParams,
    rng: &mut R,
    levels: &[f64],
) -> SparseParams {
    let active = current.active();
    let t = active[rng.gen_range(0..active.len())];
    let v = levels[rng.gen_range(0..levels.len())];
    current
        .with_value(t, v)
        .expect("slab level is inside the slab")
}

/// `k`-th inactive flat index, scanning in index order (fixed RNG cost).
fn kth_inactive(current: &SparseParams, k: usize) -> usize {
    let mut seen = 0;
    for (t, &g) in current.gamma().iter().enumerate() {
        if !g {
            if seen == k {
                return t;
            }
            seen += 1;
        }
    }
    unreachable!("k < T - S by construction")
}

/// Mask swap move: retires a uniform active index, activates a uniform
/// inactive index with a fresh uniform slab value. Returns `None` when
/// `S = T` (no inactive coordinate exists).
pub fn propose_swap<R: Rng + ?Sized>(current: &SparseParams, rng: &mut R) -> Option<SparseParams> {
    let c_b = current.arch().weight_bound;
    propose_swap_value(current, rng, |rng| rng.gen_range(-c_b..=c_b))
}

/// Swap move with the value drawn from a quantized level grid.
pub fn propose_swap_quantized<R: Rng + ?Sized>(
    current: &SparseParams,
    rng: &mut R,
    levels: &[f64],
) -> Option<SparseParams> {
    propose_swap_value(current, rng, |rng| levels[rng.gen_range(0..levels.len())])
}

fn propose_swap_value<R: Rng + ?Sized>(
    current: &SparseParams,
    rng: &mut R,
    draw: impl Fn(&mut R) -> f64,
) -> Option<SparseParams> {
    let t_total = current.arch().param_count();
    let s = current.active().len();
    if s == t_total {
        return None;
    }
    let from = current.active()[rng.gen_range(0..s)];
    let to = kth_inactive(current, rng.gen_range(0..t_total - s));
    let v = draw(rng);
    Some(
        current
            .with_swap(from, to, v)
            .expect("swap between valid indices"),
    )
}

/// Resolved move parameters shared by every step of a chain.
struct MoveSpec {
    delta: f64,
    swap_prob: f64,
    levels: Option<Vec<f64>>,
}

impl MoveSpec {
    fn from_config(cfg: &ChainConfig, arch: &Architecture) -> Self {
        MoveSpec {
            delta: cfg.resolved_step_size(arch),
            swap_prob: cfg.swap_prob,
            levels: match cfg.slab {
                Slab::Continuous => None,
                Slab::Quantized { levels } => Some(slab_levels(arch.weight_bound, levels)),
            },
        }
    }
}

/// One MH transition; mutates `(params, risk)` in place on acceptance.
fn kernel_step<F, R>(
    risk_fn: &F,
    spec: &MoveSpec,
    beta: f64,
    params: &mut SparseParams,
    risk: &mut f64,
    stats: &mut AcceptStats,
    rng: &mut R,
) -> (bool, MoveKind)
where
    F: Fn(&SparseParams) -> f64,
    R: Rng + ?Sized,
{
    let want_swap = rng.gen::<f64>() < spec.swap_prob;
    let (proposal, kind) = if want_swap {
        let prop = match &spec.levels {
            None => propose_swap(params, rng),
            Some(levels) => propose_swap_quantized(params, rng, levels),
        };
        match prop {
            None => {
                stats.swap_skipped += 1;
                return (false, MoveKind::Swap);
            }
            Some(p) => (p, MoveKind::Swap),
        }
    } else {
        let prop = match &spec.levels {
            None => propose_weight(params, rng, spec.delta),
            Some(levels) => propose_weight_quantized(params, rng, levels),
        };
        (prop, MoveKind::Weight)
    };
    match kind {
        MoveKind::Weight => stats.weight_proposed += 1,
        MoveKind::Swap => stats.swap_proposed += 1,
    }
    let prop_risk = risk_fn(&proposal);
    let p_acc = accept_prob(beta, prop_risk - *risk);
    let accepted = rng.gen::<f64>() < p_acc;
    if accepted {
        *params = proposal;
        *risk = prop_risk;
        match kind {
            MoveKind::Weight => stats.weight_accepted += 1,
            MoveKind::Swap => stats.swap_accepted += 1,
        }
    }
    (accepted, kind)
}

/// One public MH step under the hinge risk.
pub fn mh_step(
    current: &SparseParams,
    data: &Dataset,
    cfg: &ChainConfig,
    rng: &mut ChaCha12Rng,
) -> Result<(SparseParams, bool, MoveKind)> {
    cfg.validate(current.arch())?;
    let risk_fn = hinge_closure(data, current.arch())?;
    let spec = MoveSpec::from_config(cfg, current.arch());
    let mut params = current.clone();
    let mut risk = risk_fn(&params);
    let mut stats = AcceptStats::default();
    let (accepted, kind) =
        kernel_step(&risk_fn, &spec, cfg.lambda, &mut params, &mut risk, &mut stats, rng);
    Ok((params, accepted, kind))
}

fn hinge_closure<'a>(
    data: &'a Dataset,
    arch: &Architecture,
) -> Result<impl Fn(&SparseParams) -> f64 + Sync + 'a> {
    if arch.input_dim != data.dim() {
        return Err(Error::DimensionMismatch(format!(
            "architecture expects d = {}, dataset has d = {}",
            arch.input_dim,
            data.dim()
        )));
    }
    Ok(move |p: &SparseParams| hinge_risk(p, data).expect("dimensions validated"))
}

/// Prior draw restricted to a quantized slab (uniform mask, uniform levels).
fn sample_prior_on_levels<R: Rng + ?Sized>(
    arch: &Architecture,
    levels: &[f64],
    rng: &mut R,
) -> SparseParams {
    let t_total = arch.param_count();
    let mut idx: Vec<usize> = (0..t_total).collect();
    for i in 0..arch.sparsity {
        let j = rng.gen_range(i..t_total);
        idx.swap(i, j);
    }
    let mut pairs: Vec<(usize, f64)> = idx[..arch.sparsity]
        .iter()
        .map(|&t| (t, levels[rng.gen_range(0..levels.len())]))
        .collect();
    pairs.sort_unstable_by_key(|&(t, _)| t);
    SparseParams::from_active(*arch, &pairs).expect("prior draw satisfies invariants")
}

fn chain_rng(cfg: &ChainConfig, chain_idx: u32) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream_offset + chain_idx as u64);
    rng
}

struct ChainOutput {
    draws: Vec<SparseParams>,
    trace: Vec<f64>,
    stats: AcceptStats,
    tail: ChainTail,
}

/// Runs steps `start_step+1 ..= cfg.steps` of one chain.
fn run_single<F>(
    risk_fn: &F,
    arch: &Architecture,
    cfg: &ChainConfig,
    chain_idx: u32,
    resume: Option<&ChainTail>,
) -> ChainOutput
where
    F: Fn(&SparseParams) -> f64 + Sync,
{
    let spec = MoveSpec::from_config(cfg, arch);
    let mut rng = chain_rng(cfg, chain_idx);
    let (mut params, start_step) = match resume {
        None => {
            let p = match &spec.levels {
                None => crate::prior::sample_prior(arch, &mut rng),
                Some(levels) => sample_prior_on_levels(arch, levels, &mut rng),
            };
            (p, 0usize)
        }
        Some(tail) => {
            let pos =
                (tail.rng_word_pos[0] as u128) | ((tail.rng_word_pos[1] as u128) << 64);
            rng.set_word_pos(pos);
            (tail.end_state.clone(), tail.steps_done)
        }
    };
    let mut risk = risk_fn(&params);
    let mut stats = AcceptStats::default();
    let mut draws = Vec::new();
    let mut trace = Vec::new();
    for step in start_step + 1..=cfg.steps {
        let beta = if cfg.anneal_burn_in && cfg.burn_in > 0 && step <= cfg.burn_in {
            cfg.lambda * step as f64 / cfg.burn_in as f64
        } else {
            cfg.lambda
        };
        kernel_step(risk_fn, &spec, beta, &mut params, &mut risk, &mut stats, &mut rng);
        if step > cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0 {
            draws.push(params.clone());
            trace.push(risk);
        }
    }
    let pos = rng.get_word_pos();
    let kept_prev = resume.map(|t| t.kept).unwrap_or(0);
    let tail = ChainTail {
        end_state: params,
        rng_word_pos: [pos as u64, (pos >> 64) as u64],
        kept: kept_prev + draws.len(),
        steps_done: cfg.steps,
    };
    ChainOutput {
        draws,
        trace,
        stats,
        tail,
    }
}

/// Mean and batch-means standard error of per-chain traces.
///
/// Each chain is split into up to 20 near-equal contiguous batches; the SE of
/// the grand mean is `sd(batch means) / sqrt(#batches)`, which absorbs
/// within-chain autocorrelation at desk scale.
pub(crate) fn batch_mean_se(chains: &[&[f64]]) -> (f64, f64) {
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total == 0 {
        return (f64::NAN, f64::NAN);
    }
    let grand: f64 = chains.iter().flat_map(|c| c.iter()).sum::<f64>() / total as f64;
    let mut batch_means = Vec::new();
    for chain in chains {
        if chain.is_empty() {
            continue;
        }
        let b = 20.min(chain.len());
        let base = chain.len() / b;
        let extra = chain.len() % b;
        let mut start = 0;
        for i in 0..b {
            let len = base + usize::from(i < extra);
            let batch = &chain[start..start + len];
            batch_means.push(batch.iter().sum::<f64>() / len as f64);
            start += len;
        }
    }
    if batch_means.len() < 2 {
        return (grand, 0.0);
    }
    let bm = batch_means.iter().sum::<f64>() / batch_means.len() as f64;
    let var: f64 = batch_means.iter().map(|&m| (m - bm).powi(2)).sum::<f64>()
        / (batch_means.len() - 1) as f64;
    (grand, (var / batch_means.len() as f64).sqrt())
}

fn assemble(
    arch: &Architecture,
    cfg: &ChainConfig,
    outputs: Vec<ChainOutput>,
) -> Result<ChainResult> {
    let mut draws = Vec::new();
    let mut trace = Vec::new();
    let mut accept = AcceptStats::default();
    let mut per_chain = Vec::with_capacity(outputs.len());
    for out in outputs {
        draws.extend(out.draws);
        trace.extend(out.trace);
        accept.add(&out.stats);
        per_chain.push(out.tail);
    }
    for &r in &trace {
        if !r.is_finite() {
            return Err(Error::Numerical("non-finite hinge risk in trace".into()));
        }
    }
    let kept_per_chain: Vec<usize> = per_chain.iter().map(|t| t.kept).collect();
    let slices: Vec<&[f64]> = {
        let mut v = Vec::new();
        let mut start = 0;
        for &k in &kept_per_chain {
            v.push(&trace[start..start + k]);
            start += k;
        }
        v
    };
    let (mean_hinge, se_hinge) = batch_mean_se(&slices);
    Ok(ChainResult {
        arch: *arch,
        config: cfg.clone(),
        draws,
        hinge_trace: trace,
        accept,
        mean_hinge,
        se_hinge,
        per_chain,
    })
}

pub(crate) fn run_chain_with<F>(
    risk_fn: &F,
    arch: &Architecture,
    cfg: &ChainConfig,
) -> Result<ChainResult>
where
    F: Fn(&SparseParams) -> f64 + Sync,
{
    cfg.validate(arch)?;
    let outputs: Vec<ChainOutput> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_single(risk_fn, arch, cfg, c, None))
        .collect();
    assemble(arch, cfg, outputs)
}

/// Samples the Gibbs posterior under the hinge risk.
///
/// Deterministic given `(cfg.seed, cfg.stream_offset)`; chains run in
/// parallel and are merged in chain-index order.
pub fn run_chain(data: &Dataset, arch: &Architecture, cfg: &ChainConfig) -> Result<ChainResult> {
    let risk_fn = hinge_closure(data, arch)?;
    run_chain_with(&risk_fn, arch, cfg)
}

/// Extends a finished run to `total_steps`, reproducing exactly what a single
/// longer run would have produced.
pub fn resume_chain(
    data: &Dataset,
    prev: &ChainResult,
    total_steps: usize,
) -> Result<ChainResult> {
    if total_steps <= prev.config.steps {
        return Err(Error::Config(format!(
            "resume target {} must exceed completed steps {}",
            total_steps, prev.config.steps
        )));
    }
    if prev.per_chain.len() != prev.config.chains as usize {
        return Err(Error::Config("checkpoint is missing chain tails".into()));
    }
    let mut cfg = prev.config.clone();
    cfg.steps = total_steps;
    let arch = prev.arch;
    cfg.validate(&arch)?;
    let risk_fn = hinge_closure(data, &arch)?;
    let outputs: Vec<ChainOutput> = (0..cfg.chains)
        .into_par_iter()
        .map(|c| run_single(&risk_fn, &arch, &cfg, c, Some(&prev.per_chain[c as usize])))
        .collect();
    // splice the new draws onto each chain's existing block
    let prev_kept: Vec<usize> = prev.per_chain.iter().map(|t| t.kept).collect();
    let mut merged = Vec::new();
    let mut start = 0;
    for (c, out) in outputs.into_iter().enumerate() {
        let block = ChainOutput {
            draws: {
                let mut d = prev.draws[start..start + prev_kept[c]].to_vec();
                d.extend(out.draws);
                d
            },
            trace: {
                let mut t = prev.hinge_trace[start..start + prev_kept[c]].to_vec();
                t.extend(out.trace);
                t
            },
            stats: if c == 0 {
                // merged counts live on the result, not per chain; fold the
                // previous totals in once
                let mut s = prev.accept;
                s.add(&out.stats);
                s
            } else {
                out.stats
            },
            tail: out.tail,
        };
        start += prev_kept[c];
        merged.push(block);
    }
    assemble(&arch, &cfg, merged)
}

/// Uniform draw from the kept posterior sample (the stochastic classifier
/// `θ̂ ~ ρ̂_λ`).
pub fn stochastic_classifier_draw<'a, R: Rng + ?Sized>(
    result: &'a ChainResult,
    rng: &mut R,
) -> Result<&'a SparseParams> {
    if result.draws.is_empty() {
        return Err(Error::Estimation("no kept draws to sample from".into()));
    }
    Ok(&result.draws[rng.gen_range(0..result.draws.len())])
}

/// Expected-hinge estimate at one inverse temperature.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TiNode {
    pub beta: f64,
    pub mean_hinge: f64,
    pub std_error: f64,
}

/// Thermodynamic-integration estimate of `log Z(λ)`.
#[derive(Clone, Debug)]
pub struct TiEstimate {
    pub lambda: f64,
    pub log_z: f64,
    pub std_error: f64,
    pub nodes: Vec<TiNode>,
    /// The chain run at `β = λ` (the target posterior).
    pub top: ChainResult,
}

/// Geometric inverse-temperature grid `0 = β_0 < β_1 < ... < β_m = λ` with
/// `β_1 = λ/100`, dense near 0 where the integrand moves fastest.
fn beta_grid(lambda: f64, m: usize) -> Vec<f64> {
    const MIN_FRAC: f64 = 0.01;
    let mut grid = Vec::with_capacity(m + 1);
    grid.push(0.0);
    for j in 1..=m {
        let expo = (m - j) as f64 / (m - 1) as f64;
        grid.push(lambda * MIN_FRAC.powf(expo));
    }
    grid
}

pub(crate) fn thermo_log_z_with<F>(
    risk_fn: &F,
    arch: &Architecture,
    lambda: f64,
    m: usize,
    base: &ChainConfig,
) -> Result<TiEstimate>
where
    F: Fn(&SparseParams) -> f64 + Sync,
{
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Config(format!(
            "lambda must be finite and ≥ 0, got {}",
            lambda
        )));
    }
    let node_cfg = |beta: f64, node: usize| {
        let mut c = base.clone();
        c.lambda = beta;
        c.stream_offset = base.stream_offset + ((node as u64 + 1) << STREAM_NODE_SHIFT);
        c
    };
    if lambda == 0.0 {
        let cfg = node_cfg(0.0, 0);
        let top = run_chain_with(risk_fn, arch, &cfg)?;
        let node = TiNode {
            beta: 0.0,
            mean_hinge: top.mean_hinge,
            std_error: top.se_hinge,
        };
        return Ok(TiEstimate {
            lambda,
            log_z: 0.0,
            std_error: 0.0,
            nodes: vec![node],
            top,
        });
    }
    if m < 2 {
        return Err(Error::Config(format!(
            "thermodynamic integration needs grid size m ≥ 2, got {}",
            m
        )));
    }
    let grid = beta_grid(lambda, m);
    let mut nodes = Vec::with_capacity(m + 1);
    let mut top = None;
    for (j, &beta) in grid.iter().enumerate() {
        let cfg = node_cfg(beta, j);
        let res = run_chain_with(risk_fn, arch, &cfg)?;
        if !res.mean_hinge.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite expected hinge at β = {}",
                beta
            )));
        }
        nodes.push(TiNode {
            beta,
            mean_hinge: res.mean_hinge,
            std_error: res.se_hinge,
        });
        if j == m {
            top = Some(res);
        }
    }
    // log Z(λ) = -∫_0^λ E_{ρ̂_β}[r_n^h] dβ, trapezoid rule on the grid
    let mut integral = 0.0;
    for w in nodes.windows(2) {
        integral += (w[1].beta - w[0].beta) * (w[0].mean_hinge + w[1].mean_hinge) / 2.0;
    }
    // error propagation with trapezoid node weights
    let mut var = 0.0;
    for (j, node) in nodes.iter().enumerate() {
        let left = if j == 0 { grid[0] } else { grid[j - 1] };
        let right = if j == m { grid[m] } else { grid[j + 1] };
        let weight = (right - left) / 2.0;
        var += (weight * node.std_error).powi(2);
    }
    Ok(TiEstimate {
        lambda,
        log_z: -integral,
        std_error: var.sqrt(),
        nodes,
        top: top.expect("top node present for m ≥ 2"),
    })
}

/// Estimates `log Z(λ)` by thermodynamic integration: one chain run per grid
/// node, trapezoid quadrature of the expected-hinge curve, propagated MC
/// standard error.
///
/// `base` supplies every chain setting except `lambda` (overridden per node)
/// and `stream_offset` (shifted per node so node chains are independent).
pub fn thermo_log_z(
    data: &Dataset,
    arch: &Architecture,
    lambda: f64,
    m: usize,
    base: &ChainConfig,
) -> Result<TiEstimate> {
    let risk_fn = hinge_closure(data, arch)?;
    thermo_log_z_with(&risk_fn, arch, lambda, m, base)
}

// --- checkpoint (de)serialization ---

#[derive(Serialize, Deserialize)]
struct TailDto {
    end_active: Vec<(usize, f64)>,
    rng_word_pos: [u64; 2],
    kept: usize,
    steps_done: usize,
}

#[derive(Serialize, Deserialize)]
struct CheckpointDto {
    schema_version: u32,
    arch: Architecture,
    config: ChainConfig,
    draws: Vec<Vec<(usize, f64)>>,
    hinge_trace: Vec<f64>,
    accept: AcceptStats,
    mean_hinge: f64,
    se_hinge: f64,
    per_chain: Vec<TailDto>,
}

impl ChainResult {
    pub fn to_json(&self) -> String {
        let dto = CheckpointDto {
            schema_version: SCHEMA_VERSION,
            arch: self.arch,
            config: self.config.clone(),
            draws: self.draws.iter().map(|p| p.active_pairs()).collect(),
            hinge_trace: self.hinge_trace.clone(),
            accept: self.accept,
            mean_hinge: self.mean_hinge,
            se_hinge: self.se_hinge,
            per_chain: self
                .per_chain
                .iter()
                .map(|t| TailDto {
                    end_active: t.end_state.active_pairs(),
                    rng_word_pos: t.rng_word_pos,
                    kept: t.kept,
                    steps_done: t.steps_done,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("checkpoint serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let dto: CheckpointDto = serde_json::from_str(s)?;
        if dto.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported checkpoint schema version {}",
                dto.schema_version
            )));
        }
        dto.config.validate(&dto.arch)?;
        if dto.hinge_trace.len() != dto.draws.len() {
            return Err(Error::Parse(
                "hinge trace and draw list lengths differ".into(),
            ));
        }
        let kept_sum: usize = dto.per_chain.iter().map(|t| t.kept).sum();
        if kept_sum != dto.draws.len() {
            return Err(Error::Parse(
                "per-chain kept counts do not cover the draw list".into(),
            ));
        }
        let draws: Vec<SparseParams> = dto
            .draws
            .iter()
            .map(|pairs| SparseParams::from_active(dto.arch, pairs))
            .collect::<Result<_>>()?;
        let per_chain: Vec<ChainTail> = dto
            .per_chain
            .iter()
            .map(|t| {
                Ok(ChainTail {
                    end_state: SparseParams::from_active(dto.arch, &t.end_active)?,
                    rng_word_pos: t.rng_word_pos,
                    kept: t.kept,
                    steps_done: t.steps_done,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ChainResult {
            arch: dto.arch,
            config: dto.config,
            draws,
            hinge_trace: dto.hinge_trace,
            accept: dto.accept,
            mean_hinge: dto.mean_hinge,
            se_hinge: dto.se_hinge,
            per_chain,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        ChainResult::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{exact_gibbs, QuantizedSpace};
    use crate::network::Architecture;
    use std::collections::HashMap;

    fn toy_arch() -> Architecture {
        Architecture::new(1, 3, 1, 2, 2.0).unwrap()
    }

    fn toy_data() -> Dataset {
        let rows: Vec<(Vec<f64>, i8)> = [-1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&x: &f64| (vec![x], if x > 0.0 { 1i8 } else { -1i8 }))
            .collect();
        Dataset::from_rows(&rows).unwrap()
    }

    fn seeded_rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn weight_move_changes_one_coordinate() {
        let arch = toy_arch();
        let mut rng = seeded_rng(1);
        let p = crate::prior::sample_prior(&arch, &mut rng);
        for _ in 0..1000 {
            let q = propose_weight(&p, &mut rng, 0.5);
            assert_eq!(q.active(), p.active());
            let diffs = p
                .theta()
                .iter()
                .zip(q.theta())
                .filter(|(a, b)| a != b)
                .count();
            assert!(diffs <= 1);
            for &t in q.active() {
                assert!(q.value(t).abs() <= 2.0);
            }
        }
    }

    #[test]
    fn weight_move_reflects_at_bound() {
        // large δ forces frequent reflection; values must stay inside
        let arch = toy_arch();
        let mut rng = seeded_rng(2);
        let mut p = crate::prior::sample_prior(&arch, &mut rng);
        for _ in 0..100_000 {
            p = propose_weight(&p, &mut rng, 4.0);
            for &t in p.active() {
                assert!(p.value(t).abs() <= 2.0);
            }
        }
    }

    #[test]
    fn swap_move_preserves_popcount_and_reverses() {
        let arch = toy_arch();
        let mut rng = seeded_rng(3);
        let p = crate::prior::sample_prior(&arch, &mut rng);
        for _ in 0..1000 {
            let q = propose_swap(&p, &mut rng).unwrap();
            assert_eq!(q.active().len(), 2);
            // exactly one index left, one index entered
            let removed: Vec<_> = p.active().iter().filter(|t| !q.is_active(**t)).collect();
            let added: Vec<_> = q.active().iter().filter(|t| !p.is_active(**t)).collect();
            assert_eq!(removed.len(), 1);
            assert_eq!(added.len(), 1);
            // reverse swap restores the mask
            let back = q.with_swap(*added[0], *removed[0], p.value(*removed[0])).unwrap();
            assert_eq!(back.active(), p.active());
        }
    }

    #[test]
    fn swap_skipped_when_saturated() {
        let arch = Architecture::new(1, 3, 1, 6, 2.0).unwrap();
        let mut rng = seeded_rng(4);
        let p = crate::prior::sample_prior(&arch, &mut rng);
        assert!(propose_swap(&p, &mut rng).is_none());
        // the kernel counts it as skipped, not proposed
        let data = toy_data();
        let mut cfg = ChainConfig::new(1.0, 9);
        cfg.swap_prob = 0.9;
        cfg.steps = 200;
        cfg.burn_in = 10;
        cfg.thin = 1;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        assert!(res.accept.swap_skipped > 0);
        assert_eq!(res.accept.swap_proposed, 0);
    }

    #[test]
    fn lambda_zero_accepts_everything() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(0.0, 5);
        cfg.steps = 2000;
        cfg.burn_in = 100;
        cfg.thin = 1;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        assert_eq!(res.accept.weight_accepted, res.accept.weight_proposed);
        assert_eq!(res.accept.swap_accepted, res.accept.swap_proposed);
    }

    #[test]
    fn downhill_proposals_always_accepted() {
        assert_eq!(accept_prob(5.0, -0.3), 1.0);
        assert_eq!(accept_prob(5.0, 0.0), 1.0);
        assert!(accept_prob(5.0, 0.3) < 1.0);
    }

    #[test]
    fn acceptance_frequency_matches_exponential() {
        // fixed Δr on every proposal: risk 0 at the start state, c elsewhere
        let arch = toy_arch();
        let mut rng = seeded_rng(6);
        let start = crate::prior::sample_prior(&arch, &mut rng);
        let c = 0.4;
        let lambda = 2.0;
        let start_theta = start.theta().to_vec();
        let risk_fn = move |p: &SparseParams| {
            if p.theta() == start_theta.as_slice() {
                0.0
            } else {
                c
            }
        };
        let spec = MoveSpec {
            delta: 0.2,
            swap_prob: 0.3,
            levels: None,
        };
        let trials = 10_000;
        let mut accepted = 0;
        let mut stats = AcceptStats::default();
        for _ in 0..trials {
            let mut params = start.clone();
            let mut risk = 0.0;
            let (acc, _) =
                kernel_step(&risk_fn, &spec, lambda, &mut params, &mut risk, &mut stats, &mut rng);
            if acc {
                accepted += 1;
            }
        }
        let p = (-lambda * c as f64).exp();
        let freq = accepted as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (freq - p).abs() <= 3.0 * sigma,
            "acceptance {} vs exp(-λΔr) = {}",
            freq,
            p
        );
    }

    #[test]
    fn chain_is_deterministic() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(3.0, 42);
        cfg.steps = 3000;
        cfg.burn_in = 500;
        cfg.thin = 5;
        cfg.chains = 2;
        let a = run_chain(&data, &arch, &cfg).unwrap();
        let b = run_chain(&data, &arch, &cfg).unwrap();
        assert_eq!(a, b);
        let mut other = cfg.clone();
        other.seed = 43;
        let c = run_chain(&data, &arch, &other).unwrap();
        assert_ne!(a.hinge_trace, c.hinge_trace);
    }

    #[test]
    fn every_state_satisfies_invariants() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(5.0, 7);
        cfg.steps = 4000;
        cfg.burn_in = 200;
        cfg.thin = 4;
        cfg.swap_prob = 0.5;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        assert_eq!(res.draws.len(), res.hinge_trace.len());
        assert_eq!(res.draws.len(), (4000 - 200) / 4);
        for p in &res.draws {
            assert_eq!(p.active().len(), 2);
            for &t in p.active() {
                assert!(p.value(t).abs() <= 2.0);
            }
        }
        for (p, &r) in res.draws.iter().zip(&res.hinge_trace) {
            assert!((hinge_risk(p, &data).unwrap() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn prior_chain_mask_frequencies_uniform() {
        // λ = 0 chain must sample the prior: uniform over the 15 masks
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(0.0, 11);
        cfg.steps = 110_000;
        cfg.burn_in = 10_000;
        cfg.thin = 1;
        cfg.swap_prob = 0.5;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for p in &res.draws {
            *counts.entry(p.active().to_vec()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 15);
        let n = res.draws.len() as f64;
        let tv: f64 = counts
            .values()
            .map(|&c| (c as f64 / n - 1.0 / 15.0).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.05, "prior-chain mask TV = {}", tv);
    }

    #[test]
    fn quantized_chain_matches_enumeration() {
        // smaller-scale version of the acceptance oracle (3 levels, λ = 3)
        let arch = toy_arch();
        let data = toy_data();
        let space = QuantizedSpace::new(arch, crate::enumerate::slab_levels(2.0, 3)).unwrap();
        let exact = exact_gibbs(&space, &data, 3.0).unwrap();
        let mut cfg = ChainConfig::new(3.0, 13);
        cfg.steps = 60_000;
        cfg.burn_in = 5_000;
        cfg.thin = 1;
        cfg.swap_prob = 0.4;
        cfg.slab = Slab::Quantized { levels: 3 };
        let res = run_chain(&data, &arch, &cfg).unwrap();
        let mut counts = vec![0usize; space.num_states()];
        for p in &res.draws {
            counts[space.index_of(p).expect("state on grid")] += 1;
        }
        let n = res.draws.len() as f64;
        let tv: f64 = counts
            .iter()
            .zip(&exact.masses)
            .map(|(&c, &m)| (c as f64 / n - m).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.05, "TV to exact Gibbs = {}", tv);
    }

    #[test]
    fn kernel_satisfies_detailed_balance_on_toy() {
        // build the exact transition matrix of the quantized kernel and check
        // π_i P_ij = π_j P_ji pairwise
        let arch = toy_arch();
        let data = toy_data();
        let levels = crate::enumerate::slab_levels(2.0, 3);
        let space = QuantizedSpace::new(arch, levels.clone()).unwrap();
        let lambda = 3.0;
        let exact = exact_gibbs(&space, &data, lambda).unwrap();
        let states = space.states().unwrap();
        let k = levels.len();
        let t_total = arch.param_count();
        let s = arch.sparsity;
        let swap_prob = 0.4;
        let n_states = states.len();
        let mut p_mat = vec![0.0f64; n_states * n_states];
        for (i, st) in states.iter().enumerate() {
            // weight moves: coordinate a (1/S), level v (1/k)
            for &a in st.active() {
                for &v in &levels {
                    let prop = st.with_value(a, v).unwrap();
                    let j = space.index_of(&prop).unwrap();
                    if j == i {
                        continue;
                    }
                    let acc = accept_prob(lambda, exact.risks[j] - exact.risks[i]);
                    p_mat[i * n_states + j] +=
                        (1.0 - swap_prob) / (s * k) as f64 * acc;
                }
            }
            // swap moves: a (1/S), b (1/(T-S)), v (1/k)
            for &a in st.active() {
                for b in 0..t_total {
                    if st.is_active(b) {
                        continue;
                    }
                    for &v in &levels {
                        let prop = st.with_swap(a, b, v).unwrap();
                        let j = space.index_of(&prop).unwrap();
                        let acc = accept_prob(lambda, exact.risks[j] - exact.risks[i]);
                        p_mat[i * n_states + j] +=
                            swap_prob / (s * (t_total - s) * k) as f64 * acc;
                    }
                }
            }
        }
        for i in 0..n_states {
            for j in (i + 1)..n_states {
                let flow_ij = exact.masses[i] * p_mat[i * n_states + j];
                let flow_ji = exact.masses[j] * p_mat[j * n_states + i];
                assert!(
                    (flow_ij - flow_ji).abs() <= 1e-9,
                    "detailed balance violated at ({}, {}): {} vs {}",
                    i,
                    j,
                    flow_ij,
                    flow_ji
                );
            }
        }
    }

    #[test]
    fn resume_reproduces_longer_run() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(4.0, 21);
        cfg.steps = 6000;
        cfg.burn_in = 1000;
        cfg.thin = 7;
        cfg.chains = 2;
        cfg.swap_prob = 0.4;
        let full = run_chain(&data, &arch, &cfg).unwrap();
        let mut half_cfg = cfg.clone();
        half_cfg.steps = 3000;
        let half = run_chain(&data, &arch, &half_cfg).unwrap();
        let resumed = resume_chain(&data, &half, 6000).unwrap();
        assert_eq!(resumed, full);
        // resume through a JSON round trip as the CLI does
        let reloaded = ChainResult::from_json(&half.to_json()).unwrap();
        let resumed2 = resume_chain(&data, &reloaded, 6000).unwrap();
        assert_eq!(resumed2, full);
        assert!(resume_chain(&data, &full, 6000).is_err());
    }

    #[test]
    fn checkpoint_round_trip() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(2.0, 8);
        cfg.steps = 500;
        cfg.burn_in = 100;
        cfg.thin = 10;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        let back = ChainResult::from_json(&res.to_json()).unwrap();
        assert_eq!(res, back);
        assert!(ChainResult::from_json("{}").is_err());
    }

    #[test]
    fn classifier_draw_resamples_consistently() {
        let arch = toy_arch();
        let data = toy_data();
        let mut cfg = ChainConfig::new(5.0, 17);
        cfg.steps = 11_000;
        cfg.burn_in = 1000;
        cfg.thin = 10;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        let mut rng = seeded_rng(99);
        let mut mean = 0.0;
        let n_draws = 4000;
        for _ in 0..n_draws {
            let p = stochastic_classifier_draw(&res, &mut rng).unwrap();
            assert!(res.draws.contains(p));
            mean += hinge_risk(p, &data).unwrap();
        }
        mean /= n_draws as f64;
        // resampled mean should sit near the trace mean
        let spread = (res
            .hinge_trace
            .iter()
            .map(|&r| (r - res.mean_hinge).powi(2))
            .sum::<f64>()
            / res.hinge_trace.len() as f64)
            .sqrt();
        let tol = 3.0 * spread / (n_draws as f64).sqrt() + 1e-9;
        assert!((mean - res.mean_hinge).abs() <= tol);
    }

    #[test]
    fn config_validation() {
        let arch = toy_arch();
        let mut cfg = ChainConfig::new(1.0, 0);
        cfg.burn_in = cfg.steps;
        assert!(cfg.validate(&arch).is_err());
        let mut cfg = ChainConfig::new(1.0, 0);
        cfg.thin = 0;
        assert!(cfg.validate(&arch).is_err());
        let mut cfg = ChainConfig::new(1.0, 0);
        cfg.swap_prob = 1.0;
        assert!(cfg.validate(&arch).is_err());
        let mut cfg = ChainConfig::new(1.0, 0);
        cfg.step_size = Some(5.0);
        assert!(cfg.validate(&arch).is_err());
        let mut cfg = ChainConfig::new(-1.0, 0);
        assert!(cfg.validate(&arch).is_err());
        cfg = ChainConfig::new(1.0, 0);
        cfg.slab = Slab::Quantized { levels: 1 };
        assert!(cfg.validate(&arch).is_err());
    }

    #[test]
    fn ti_lambda_zero_is_exact() {
        let arch = toy_arch();
        let data = toy_data();
        let mut base = ChainConfig::new(0.0, 31);
        base.steps = 500;
        base.burn_in = 100;
        base.thin = 4;
        let est = thermo_log_z(&data, &arch, 0.0, 8, &base).unwrap();
        assert_eq!(est.log_z, 0.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn ti_constant_risk_closed_form() {
        // r ≡ c collapses log Z(λ) to -λc regardless of the chains
        let arch = toy_arch();
        let c = 0.75;
        let risk_fn = |_: &SparseParams| c;
        let mut base = ChainConfig::new(0.0, 5);
        base.steps = 400;
        base.burn_in = 100;
        base.thin = 3;
        for &lambda in &[0.5, 2.0, 10.0] {
            let est = thermo_log_z_with(&risk_fn, &arch, lambda, 6, &base).unwrap();
            assert!(
                (est.log_z - (-lambda * c)).abs() < 1e-9,
                "λ = {}: {}",
                lambda,
                est.log_z
            );
            assert!(est.std_error < 1e-12);
        }
    }

    #[test]
    fn ti_matches_enumeration_on_toy() {
        // scaled-down version of the acceptance TI oracle
        let arch = toy_arch();
        let data = toy_data();
        let space = QuantizedSpace::new(arch, crate::enumerate::slab_levels(2.0, 3)).unwrap();
        let lambda = 3.0;
        let exact = exact_gibbs(&space, &data, lambda).unwrap();
        let mut base = ChainConfig::new(0.0, 51);
        base.steps = 12_000;
        base.burn_in = 2_000;
        base.thin = 2;
        base.swap_prob = 0.4;
        base.slab = Slab::Quantized { levels: 3 };
        let est = thermo_log_z(&data, &arch, lambda, 10, &base).unwrap();
        assert!(
            (est.log_z - exact.log_z).abs() <= 0.05,
            "TI {} vs exact {}",
            est.log_z,
            exact.log_z
        );
        assert_eq!(est.nodes.len(), 11);
        assert_eq!(est.top.config.lambda, lambda);
    }

    #[test]
    fn ti_expected_hinge_curve_non_increasing() {
        let arch = toy_arch();
        let data = toy_data();
        let mut base = ChainConfig::new(0.0, 61);
        base.steps = 8_000;
        base.burn_in = 1_000;
        base.thin = 2;
        let est = thermo_log_z(&data, &arch, 6.0, 8, &base).unwrap();
        for w in est.nodes.windows(2) {
            let slack = 3.0 * (w[0].std_error + w[1].std_error) + 1e-9;
            assert!(
                w[1].mean_hinge <= w[0].mean_hinge + slack,
                "E[r] rose from {} to {} between β = {} and {}",
                w[0].mean_hinge,
                w[1].mean_hinge,
                w[0].beta,
                w[1].beta
            );
        }
    }

    #[test]
    fn ti_grid_size_validated() {
        let arch = toy_arch();
        let data = toy_data();
        let base = ChainConfig::new(0.0, 1);
        assert!(thermo_log_z(&data, &arch, 2.0, 1, &base).is_err());
    }

    #[test]
    fn annealed_burn_in_reaches_target_kernel() {
        // annealing changes only the burn-in; kept draws still target ρ̂_λ
        let arch = toy_arch();
        let data = toy_data();
        let space = QuantizedSpace::new(arch, crate::enumerate::slab_levels(2.0, 3)).unwrap();
        let exact = exact_gibbs(&space, &data, 3.0).unwrap();
        let mut cfg = ChainConfig::new(3.0, 71);
        cfg.steps = 60_000;
        cfg.burn_in = 5_000;
        cfg.thin = 1;
        cfg.swap_prob = 0.4;
        cfg.slab = Slab::Quantized { levels: 3 };
        cfg.anneal_burn_in = true;
        let res = run_chain(&data, &arch, &cfg).unwrap();
        let mut counts = vec![0usize; space.num_states()];
        for p in &res.draws {
            counts[space.index_of(p).unwrap()] += 1;
        }
        let n = res.draws.len() as f64;
        let tv: f64 = counts
            .iter()
            .zip(&exact.masses)
            .map(|(&c, &m)| (c as f64 / n - m).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.05, "annealed TV = {}", tv);
    }
}
