//! Exact enumeration of quantized-slab model spaces.
//!
//! Restricting the slab to `k` fixed levels makes the parameter space finite:
//! `C(T,S) · k^S` states, each carrying prior mass `1/(C(T,S) k^S)`. On such a
//! space the Gibbs posterior, its partition function, and its KL divergence to
//! the prior are computable by brute force. The samplers are tested against
//! these exact values; nothing in this module touches MCMC.

use crate::network::{Architecture, SparseParams};
use crate::risk::{hinge_risk, Dataset};
use crate::{Error, Result};

/// Exact binomial coefficient (u128 intermediate; desk-scale `n` only).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut res: u128 = 1;
    for i in 1..=k {
        res = res * (n - k + i) as u128 / i as u128;
    }
    res
}

/// All size-`s` subsets of `{0, ..., t-1}` in lexicographic order.
pub fn enumerate_masks(t: usize, s: usize) -> Vec<Vec<usize>> {
    assert!(s <= t, "mask size must not exceed ground set");
    let mut out = Vec::with_capacity(binomial(t, s) as usize);
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + t - s {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..s {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a sorted mask in the lexicographic enumeration.
pub fn mask_rank(t: usize, s: usize, mask: &[usize]) -> usize {
    debug_assert_eq!(mask.len(), s);
    let mut rank: u128 = 0;
    let mut prev: isize = -1;
    for (i, &c) in mask.iter().enumerate() {
        for j in (prev + 1) as usize..c {
            rank += binomial(t - 1 - j, s - 1 - i);
        }
        prev = c as isize;
    }
    rank as usize
}

/// `k` evenly spaced slab levels spanning `[-C_B, C_B]` inclusive.
pub fn slab_levels(c_b: f64, k: usize) -> Vec<f64> {
    assert!(k >= 2, "need at least two slab levels");
    (0..k)
        .map(|i| -c_b + 2.0 * c_b * i as f64 / (k - 1) as f64)
        .collect()
}

/// A fully enumerable parameter space: exact-`S` masks × quantized slab.
#[derive(Clone, Debug)]
pub struct QuantizedSpace {
    arch: Architecture,
    levels: Vec<f64>,
    masks: Vec<Vec<usize>>,
}

impl QuantizedSpace {
    pub fn new(arch: Architecture, levels: Vec<f64>) -> Result<Self> {
        arch.validate()?;
        if levels.len() < 2 {
            return Err(Error::Config("need at least two slab levels".into()));
        }
        for w in levels.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Config(
                    "slab levels must be strictly increasing".into(),
                ));
            }
        }
        for &v in &levels {
            if !v.is_finite() || v.abs() > arch.weight_bound {
                return Err(Error::Config(format!(
                    "slab level {} outside [-C_B, C_B]",
                    v
                )));
            }
        }
        let masks = enumerate_masks(arch.param_count(), arch.sparsity);
        Ok(QuantizedSpace {
            arch,
            levels,
            masks,
        })
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn num_masks(&self) -> usize {
        self.masks.len()
    }

    /// Total state count `C(T,S) · k^S`.
    pub fn num_states(&self) -> usize {
        self.masks.len() * self.levels.len().pow(self.arch.sparsity as u32)
    }

    /// Decodes a state index into parameters (mask-major, then level digits
    /// in big-endian order over the sorted active coordinates).
    pub fn state(&self, idx: usize) -> Result<SparseParams> {
        let k = self.levels.len();
        let per_mask = k.pow(self.arch.sparsity as u32);
        if idx >= self.num_states() {
            return Err(Error::IndexOutOfRange {
                index: idx,
                total: self.num_states(),
            });
        }
        let mask = &self.masks[idx / per_mask];
        let mut digits = idx % per_mask;
        let s = self.arch.sparsity;
        let mut pairs = Vec::with_capacity(s);
        for (pos, &t) in mask.iter().enumerate() {
            let place = k.pow((s - 1 - pos) as u32);
            let digit = digits / place;
            digits %= place;
            pairs.push((t, self.levels[digit]));
        }
        SparseParams::from_active(self.arch, &pairs)
    }

    /// Encodes parameters into their state index; `None` if any value is not
    /// a slab level (tolerance 1e-9) or the architecture differs.
    pub fn index_of(&self, params: &SparseParams) -> Option<usize> {
        if params.arch() != &self.arch {
            return None;
        }
        let k = self.levels.len();
        let s = self.arch.sparsity;
        let rank = mask_rank(self.arch.param_count(), s, params.active());
        let mut digits = 0usize;
        for &t in params.active() {
            let v = params.value(t);
            let digit = self
                .levels
                .iter()
                .position(|&lv| (lv - v).abs() <= 1e-9)?;
            digits = digits * k + digit;
        }
        Some(rank * k.pow(s as u32) + digits)
    }

    /// All states in index order.
    pub fn states(&self) -> Result<Vec<SparseParams>> {
        (0..self.num_states()).map(|i| self.state(i)).collect()
    }
}

/// Exact Gibbs posterior on a quantized space.
#[derive(Clone, Debug)]
pub struct ExactGibbs {
    /// `log Z(λ) = log Σ_θ e^{-λ r_n^h(θ)} π(θ)`.
    pub log_z: f64,
    /// Posterior mass per state index.
    pub masses: Vec<f64>,
    /// Hinge risk per state index.
    pub risks: Vec<f64>,
    /// `∫ r_n^h dρ̂`.
    pub mean_hinge: f64,
    /// `KL(ρ̂_λ ‖ π)`.
    pub kl_to_prior: f64,
}

/// Enumerates the Gibbs posterior `ρ̂_λ ∝ e^{-λ r_n^h} π` exactly.
pub fn exact_gibbs(space: &QuantizedSpace, data: &Dataset, lambda: f64) -> Result<ExactGibbs> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Config(format!(
            "lambda must be finite and ≥ 0, got {}",
            lambda
        )));
    }
    let states = space.states()?;
    let risks: Vec<f64> = states
        .iter()
        .map(|p| hinge_risk(p, data))
        .collect::<Result<_>>()?;
    let k_total = states.len() as f64;
    // log Z = logsumexp(-λ r_i) - log K   (uniform prior mass 1/K per state)
    let m = risks
        .iter()
        .map(|&r| -lambda * r)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum_exp: f64 = risks.iter().map(|&r| (-lambda * r - m).exp()).sum();
    let log_z = m + sum_exp.ln() - k_total.ln();
    let masses: Vec<f64> = risks
        .iter()
        .map(|&r| (-lambda * r - m).exp() / sum_exp)
        .collect();
    let mean_hinge: f64 = masses.iter().zip(&risks).map(|(&w, &r)| w * r).sum();
    let kl_to_prior: f64 = masses
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * (w * k_total).ln())
        .sum();
    Ok(ExactGibbs {
        log_z,
        masses,
        risks,
        mean_hinge,
        kl_to_prior,
    })
}
