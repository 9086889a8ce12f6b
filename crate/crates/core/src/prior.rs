//! Spike-and-slab prior over exact-`S` sparse networks and the box posterior
//! family used for fully computable certificates.
//!
//! The prior draws a mask `γ` uniformly from the `C(T,S)` patterns with
//! exactly `S` ones, then each active coefficient i.i.d. uniform on
//! `[-C_B, C_B]`. Its log-density is taken w.r.t. the mixed
//! counting-on-masks × Lebesgue-on-active-coordinates reference measure, so it
//! is constant on the support:
//!
//! `log π(θ) = -log C(T,S) - S · log(2 C_B)`.
//!
//! That constancy is what reduces Metropolis–Hastings acceptance ratios over
//! exact-`S` moves to the risk factor alone.
//!
//! A [`BoxPosterior`] keeps the center's mask and puts independent uniforms of
//! half-width `s_n` around the active values; its KL to the prior has the
//! closed form `log C(T,S) + S·log(C_B / s_n)`.

use rand::Rng;

use crate::network::{Architecture, SparseParams};
use crate::{Error, Result};

/// `log C(n, k)` as a sum of logs; exact to f64 rounding at desk scale and
/// overflow-free for large `n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n, "binomial coefficient requires k ≤ n");
    let k = k.min(n - k);
    (1..=k)
        .map(|i| (((n - k + i) as f64) / (i as f64)).ln())
        .sum()
}

/// Draws `θ ~ π`: uniform exact-`S` mask, uniform slab values.
pub fn sample_prior<R: Rng + ?Sized>(arch: &Architecture, rng: &mut R) -> SparseParams {
    let t_total = arch.param_count();
    let mut idx: Vec<usize> = (0..t_total).collect();
    // partial Fisher-Yates: first S entries form a uniform S-subset
    for i in 0..arch.sparsity {
        let j = rng.gen_range(i..t_total);
        idx.swap(i, j);
    }
    let c = arch.weight_bound;
    let mut pairs: Vec<(usize, f64)> = idx[..arch.sparsity]
        .iter()
        .map(|&t| (t, rng.gen_range(-c..=c)))
        .collect();
    pairs.sort_unstable_by_key(|&(t, _)| t);
    SparseParams::from_active(*arch, &pairs).expect("prior draw satisfies invariants")
}

/// Log-density of the prior at any support point (constant there).
pub fn log_prior(params: &SparseParams) -> f64 {
    let arch = params.arch();
    let t_total = arch.param_count();
    -ln_binomial(t_total, arch.sparsity)
        - arch.sparsity as f64 * (2.0 * arch.weight_bound).ln()
}

/// Product of uniforms of half-width `s_n` around a center, sharing the
/// center's mask. The box must be nested in `[-C_B, C_B]` on every active
/// coordinate; violating centers are rejected at construction (clipping would
/// break the closed-form KL).
#[derive(Clone, Debug)]
pub struct BoxPosterior {
    center: SparseParams,
    radius: f64,
}

impl BoxPosterior {
    pub fn new(center: SparseParams, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::Construction(format!(
                "box radius must be positive and finite, got {}",
                radius
            )));
        }
        let c_b = center.arch().weight_bound;
        for &t in center.active() {
            let v = center.value(t);
            if v.abs() + radius > c_b {
                return Err(Error::Construction(format!(
                    "box [{} ± {}] at coordinate {} exits [-C_B, C_B] = [±{}]",
                    v, radius, t, c_b
                )));
            }
        }
        Ok(BoxPosterior { center, radius })
    }

    pub fn center(&self) -> &SparseParams {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Draws from the box: center's mask, active values uniform in
    /// `[center_t - s_n, center_t + s_n]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SparseParams {
        let pairs: Vec<(usize, f64)> = self
            .center
            .active()
            .iter()
            .map(|&t| {
                let c = self.center.value(t);
                (t, rng.gen_range(c - self.radius..=c + self.radius))
            })
            .collect();
        SparseParams::from_active(*self.center.arch(), &pairs)
            .expect("nested box draw satisfies invariants")
    }

    /// Exact `KL(q ‖ π) = log C(T,S) + S · log(C_B / s_n)`.
    ///
    /// Mask point-mass against the uniform mask prior plus per-coordinate
    /// uniform-vs-uniform divergences.
    pub fn kl_to_prior(&self) -> f64 {
        let arch = self.center.arch();
        let t_total = arch.param_count();
        ln_binomial(t_total, arch.sparsity)
            + arch.sparsity as f64 * (arch.weight_bound / self.radius).ln()
    }
}

/// The radius `s_n` used in the theoretical box construction:
///
/// `s_n = (S/n) · [ (C_B D)^L / (C_B D - 1) · ((d+1) L + 1) ]^{-1}`,
///
/// clamped below at 1e-300 (with a warning) once the denominator overwhelms
/// f64 resolution.
pub fn default_box_radius(arch: &Architecture, n: usize) -> Result<f64> {
    let cbd = arch.weight_bound * arch.width as f64;
    if cbd <= 1.0 {
        return Err(Error::Config(format!(
            "default box radius requires C_B · D > 1, got {}",
            cbd
        )));
    }
    if n == 0 {
        return Err(Error::Config("sample size must be ≥ 1".into()));
    }
    let factor = cbd.powi(arch.depth as i32) / (cbd - 1.0)
        * ((arch.input_dim as f64 + 1.0) * arch.depth as f64 + 1.0);
    let raw = arch.sparsity as f64 / n as f64 / factor;
    if raw < 1e-300 {
        log::warn!(
            "default box radius {:e} below 1e-300 for {}; clamping",
            raw,
            arch
        );
        return Ok(1e-300);
    }
    Ok(raw)
}
