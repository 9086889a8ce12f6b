//! Sparse feed-forward network representation and forward evaluation.
//!
//! A network is described by an [`Architecture`] `(d, L, D, S, C_B)`: input
//! dimension `d`, depth `L` (layers excluding the input), hidden width `D`,
//! exact sparsity `S`, and coefficient magnitude bound `C_B`. Layer widths are
//! `D_0 = d`, `D_ℓ = D` for `0 < ℓ < L`, `D_L = 1`; the total coefficient
//! count is `T = Σ_ℓ D_ℓ (D_{ℓ-1} + 1)` (weights plus biases).
//!
//! Coefficients live in a flat vector of length `T` with a fixed canonical
//! layout: layer-major, each layer's weight matrix first (row-major), then its
//! bias. [`SparseParams`] pairs that vector with a binary mask holding exactly
//! `S` ones and enforces `|θ_t| ≤ C_B` everywhere and `θ_t = 0` off-support.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Activation applied between hidden layers (never on the output layer).
///
/// Both variants satisfy `|ρ(u)| ≤ |u|` and are 1-Lipschitz, the two
/// properties the risk bounds rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply(self, u: f64) -> f64 {
        match self {
            Activation::Relu => {
                if u > 0.0 {
                    u
                } else {
                    0.0
                }
            }
            Activation::Identity => u,
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activation::Relu => write!(f, "relu"),
            Activation::Identity => write!(f, "identity"),
        }
    }
}

/// Network shape `(d, L, D, S, C_B)`.
///
/// Serialized with the field names `d`, `L`, `D`, `S`, `C_B`. Fields are
/// public for ergonomic construction; every entry point that consumes an
/// architecture calls [`Architecture::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    /// Input dimension `d ≥ 1`.
    #[serde(rename = "d")]
    pub input_dim: usize,
    /// Number of layers excluding the input, `L ≥ 3`.
    #[serde(rename = "L")]
    pub depth: usize,
    /// Hidden width `D ≥ 1`.
    #[serde(rename = "D")]
    pub width: usize,
    /// Exact number of active coefficients, `1 ≤ S ≤ T`.
    #[serde(rename = "S")]
    pub sparsity: usize,
    /// Coefficient magnitude bound `C_B ≥ 2`.
    #[serde(rename = "C_B")]
    pub weight_bound: f64,
}

impl Architecture {
    /// Builds and validates an architecture.
    pub fn new(
        input_dim: usize,
        depth: usize,
        width: usize,
        sparsity: usize,
        weight_bound: f64,
    ) -> Result<Self> {
        let arch = Architecture {
            input_dim,
            depth,
            width,
            sparsity,
            weight_bound,
        };
        arch.validate()?;
        Ok(arch)
    }

    /// Checks all architecture invariants.
    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::Config("input dimension d must be ≥ 1".into()));
        }
        if self.depth < 3 {
            return Err(Error::Config(format!(
                "depth L must be ≥ 3, got {}",
                self.depth
            )));
        }
        if self.width == 0 {
            return Err(Error::Config("hidden width D must be ≥ 1".into()));
        }
        if !self.weight_bound.is_finite() || self.weight_bound < 2.0 {
            return Err(Error::Config(format!(
                "coefficient bound C_B must be finite and ≥ 2, got {}",
                self.weight_bound
            )));
        }
        let t = self.param_count();
        if self.sparsity == 0 || self.sparsity > t {
            return Err(Error::Config(format!(
                "sparsity S must satisfy 1 ≤ S ≤ T = {}, got {}",
                t, self.sparsity
            )));
        }
        Ok(())
    }

    /// Width of layer `l` for `l ∈ {0, ..., L}`: `d`, then `D`, then `1`.
    pub fn layer_width(&self, l: usize) -> usize {
        if l == 0 {
            self.input_dim
        } else if l == self.depth {
            1
        } else {
            self.width
        }
    }

    /// Coefficients owned by layer `l ∈ {1, ..., L}`: `D_l (D_{l-1} + 1)`.
    pub fn layer_coeff_count(&self, l: usize) -> usize {
        self.layer_width(l) * (self.layer_width(l - 1) + 1)
    }

    /// Flat-index offset of layer `l`'s block.
    pub fn layer_offset(&self, l: usize) -> usize {
        (1..l).map(|m| self.layer_coeff_count(m)).sum()
    }

    /// Total coefficient count `T = Σ_{ℓ=1..L} D_ℓ (D_{ℓ-1} + 1)`.
    pub fn param_count(&self) -> usize {
        (1..=self.depth).map(|l| self.layer_coeff_count(l)).sum()
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d={}, L={}, D={}, S={}, C_B={})",
            self.input_dim, self.depth, self.width, self.sparsity, self.weight_bound
        )
    }
}

/// Position of a flat coefficient index inside the layer structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoordAddress {
    /// Entry `(row, col)` of the weight matrix `A_layer` (`D_ℓ × D_{ℓ-1}`).
    Matrix { layer: usize, row: usize, col: usize },
    /// Entry `row` of the bias vector `b_layer`.
    Bias { layer: usize, row: usize },
}

/// Maps a flat index `t ∈ {0, ..., T-1}` to its coordinate address.
///
/// The layout is layer-major with each layer's matrix entries first
/// (row-major) and its bias entries last.
pub fn index_to_coord(arch: &Architecture, t: usize) -> Result<CoordAddress> {
    let total = arch.param_count();
    if t >= total {
        return Err(Error::IndexOutOfRange { index: t, total });
    }
    let mut rest = t;
    for layer in 1..=arch.depth {
        let rows = arch.layer_width(layer);
        let cols = arch.layer_width(layer - 1);
        let block = rows * (cols + 1);
        if rest < block {
            let matrix_len = rows * cols;
            if rest < matrix_len {
                return Ok(CoordAddress::Matrix {
                    layer,
                    row: rest / cols,
                    col: rest % cols,
                });
            }
            return Ok(CoordAddress::Bias {
                layer,
                row: rest - matrix_len,
            });
        }
        rest -= block;
    }
    unreachable!("t < T implies some layer block contains it")
}

/// Inverse of [`index_to_coord`].
pub fn coord_to_index(arch: &Architecture, coord: CoordAddress) -> Result<usize> {
    let bad = |msg: String| Err(Error::Config(msg));
    match coord {
        CoordAddress::Matrix { layer, row, col } => {
            if layer == 0 || layer > arch.depth {
                return bad(format!("layer {} outside 1..={}", layer, arch.depth));
            }
            let rows = arch.layer_width(layer);
            let cols = arch.layer_width(layer - 1);
            if row >= rows || col >= cols {
                return bad(format!(
                    "matrix entry ({}, {}) outside {}×{} at layer {}",
                    row, col, rows, cols, layer
                ));
            }
            Ok(arch.layer_offset(layer) + row * cols + col)
        }
        CoordAddress::Bias { layer, row } => {
            if layer == 0 || layer > arch.depth {
                return bad(format!("layer {} outside 1..={}", layer, arch.depth));
            }
            let rows = arch.layer_width(layer);
            if row >= rows {
                return bad(format!("bias entry {} outside {} at layer {}", row, rows, layer));
            }
            let cols = arch.layer_width(layer - 1);
            Ok(arch.layer_offset(layer) + rows * cols + row)
        }
    }
}

/// Sparse network coefficients: a mask `γ` with exactly `S` ones and the
/// matching values `θ` (dense storage, zeros off-support).
///
/// Instances are immutable; the sampler's moves go through the copy-and-modify
/// constructors [`SparseParams::with_value`] and [`SparseParams::with_swap`],
/// so every reachable value satisfies the invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseParams {
    arch: Architecture,
    theta: Vec<f64>,
    gamma: Vec<bool>,
    active: Vec<usize>,
}

impl SparseParams {
    /// Builds params from `(index, value)` pairs covering the support.
    ///
    /// Requires exactly `S` distinct in-range indices; values must be finite
    /// with `|value| ≤ C_B`. A zero value on an active coordinate is allowed
    /// (the support is part of the state, not derived from the values).
    pub fn from_active(arch: Architecture, pairs: &[(usize, f64)]) -> Result<Self> {
        arch.validate()?;
        let t_total = arch.param_count();
        if pairs.len() != arch.sparsity {
            return Err(Error::Construction(format!(
                "expected exactly S = {} active coordinates, got {}",
                arch.sparsity,
                pairs.len()
            )));
        }
        let mut theta = vec![0.0; t_total];
        let mut gamma = vec![false; t_total];
        for &(t, v) in pairs {
            if t >= t_total {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    total: t_total,
                });
            }
            if gamma[t] {
                return Err(Error::Construction(format!(
                    "duplicate active coordinate {}",
                    t
                )));
            }
            if !v.is_finite() || v.abs() > arch.weight_bound {
                return Err(Error::Construction(format!(
                    "coefficient {} = {} outside [-C_B, C_B] = [±{}]",
                    t, v, arch.weight_bound
                )));
            }
            gamma[t] = true;
            theta[t] = v;
        }
        let mut active: Vec<usize> = pairs.iter().map(|&(t, _)| t).collect();
        active.sort_unstable();
        Ok(SparseParams {
            arch,
            theta,
            gamma,
            active,
        })
    }

    /// The all-zero network: support on the first `S` flat indices, all
    /// values zero.
    pub fn zeros(arch: Architecture) -> Result<Self> {
        let pairs: Vec<(usize, f64)> = (0..arch.sparsity).map(|t| (t, 0.0)).collect();
        SparseParams::from_active(arch, &pairs)
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    /// Dense coefficient vector of length `T`.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Dense mask of length `T`.
    pub fn gamma(&self) -> &[bool] {
        &self.gamma
    }

    /// Sorted support indices (length `S`).
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn is_active(&self, t: usize) -> bool {
        self.gamma[t]
    }

    pub fn value(&self, t: usize) -> f64 {
        self.theta[t]
    }

    /// Support as `(index, value)` pairs in index order.
    pub fn active_pairs(&self) -> Vec<(usize, f64)> {
        self.active.iter().map(|&t| (t, self.theta[t])).collect()
    }

    /// Copy with the value at active coordinate `t` replaced.
    pub fn with_value(&self, t: usize, v: f64) -> Result<Self> {
        if t >= self.theta.len() {
            return Err(Error::IndexOutOfRange {
                index: t,
                total: self.theta.len(),
            });
        }
        if !self.gamma[t] {
            return Err(Error::Construction(format!(
                "coordinate {} is not active; use with_swap to change the mask",
                t
            )));
        }
        if !v.is_finite() || v.abs() > self.arch.weight_bound {
            return Err(Error::Construction(format!(
                "coefficient {} = {} outside [-C_B, C_B]",
                t, v
            )));
        }
        let mut out = self.clone();
        out.theta[t] = v;
        Ok(out)
    }

    /// Copy with active coordinate `from` deactivated and inactive coordinate
    /// `to` activated with value `v`. Preserves `popcount(γ) = S`.
    pub fn with_swap(&self, from: usize, to: usize, v: f64) -> Result<Self> {
        let total = self.theta.len();
        if from >= total {
            return Err(Error::IndexOutOfRange {
                index: from,
                total,
            });
        }
        if to >= total {
            return Err(Error::IndexOutOfRange { index: to, total });
        }
        if !self.gamma[from] {
            return Err(Error::Construction(format!(
                "swap source {} is not active",
                from
            )));
        }
        if self.gamma[to] {
            return Err(Error::Construction(format!(
                "swap target {} is already active",
                to
            )));
        }
        if !v.is_finite() || v.abs() > self.arch.weight_bound {
            return Err(Error::Construction(format!(
                "coefficient {} = {} outside [-C_B, C_B]",
                to, v
            )));
        }
        let mut out = self.clone();
        out.theta[from] = 0.0;
        out.gamma[from] = false;
        out.theta[to] = v;
        out.gamma[to] = true;
        let pos = out.active.binary_search(&from).expect("from is active");
        out.active.remove(pos);
        let ins = out.active.binary_search(&to).unwrap_err();
        out.active.insert(ins, to);
        Ok(out)
    }

    /// Serializes to the parameter-file JSON format (arch plus active pairs).
    pub fn to_json(&self) -> String {
        let file = ParamsFile {
            arch: self.arch,
            active: self.active_pairs(),
        };
        serde_json::to_string_pretty(&file).expect("params serialize")
    }

    /// Parses the parameter-file JSON format, validating all invariants.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ParamsFile = serde_json::from_str(s)?;
        SparseParams::from_active(file.arch, &file.active)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        SparseParams::from_json(&s)
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    arch: Architecture,
    active: Vec<(usize, f64)>,
}

/// Densified copy of a sparse network, laid out for repeated evaluation.
///
/// Building one costs `O(T)`; evaluating costs one pass over the layers. Risk
/// computations densify once per parameter value and reuse it across the
/// whole dataset.
pub struct DenseNet {
    widths: Vec<usize>,
    /// Per layer: row-major `D_ℓ × D_{ℓ-1}` weights, then the bias.
    layers: Vec<(Vec<f64>, Vec<f64>)>,
}

impl DenseNet {
    pub fn from_params(params: &SparseParams) -> Self {
        let arch = params.arch();
        let widths: Vec<usize> = (0..=arch.depth).map(|l| arch.layer_width(l)).collect();
        let mut layers = Vec::with_capacity(arch.depth);
        for l in 1..=arch.depth {
            let rows = widths[l];
            let cols = widths[l - 1];
            let off = arch.layer_offset(l);
            let w = params.theta[off..off + rows * cols].to_vec();
            let b = params.theta[off + rows * cols..off + rows * (cols + 1)].to_vec();
            layers.push((w, b));
        }
        DenseNet { widths, layers }
    }

    /// Maximum layer width, the scratch size needed by [`DenseNet::eval_with`].
    pub fn scratch_len(&self) -> usize {
        *self.widths.iter().max().expect("non-empty widths")
    }

    /// Evaluates `f_θ(x)` using caller-provided scratch buffers.
    ///
    /// `x` must have length `d`; the box constraint is the caller's
    /// responsibility here (checked in [`forward`]).
    pub fn eval_with(
        &self,
        x: &[f64],
        activation: Activation,
        cur: &mut Vec<f64>,
        next: &mut Vec<f64>,
    ) -> f64 {
        debug_assert_eq!(x.len(), self.widths[0]);
        cur.clear();
        cur.extend_from_slice(x);
        let depth = self.layers.len();
        for (l, (w, b)) in self.layers.iter().enumerate() {
            let rows = self.widths[l + 1];
            let cols = self.widths[l];
            next.clear();
            for i in 0..rows {
                let mut acc = b[i];
                let row = &w[i * cols..(i + 1) * cols];
                for (wj, xj) in row.iter().zip(cur.iter()) {
                    acc += wj * xj;
                }
                // no activation on the output layer
                if l + 1 < depth {
                    acc = activation.apply(acc);
                }
                next.push(acc);
            }
            std::mem::swap(cur, next);
        }
        cur[0]
    }

    pub fn eval(&self, x: &[f64], activation: Activation) -> f64 {
        let mut cur = Vec::with_capacity(self.scratch_len());
        let mut next = Vec::with_capacity(self.scratch_len());
        self.eval_with(x, activation, &mut cur, &mut next)
    }
}

fn check_input(arch: &Architecture, x: &[f64]) -> Result<()> {
    if x.len() != arch.input_dim {
        return Err(Error::DimensionMismatch(format!(
            "input has {} entries, architecture expects d = {}",
            x.len(),
            arch.input_dim
        )));
    }
    for (j, &v) in x.iter().enumerate() {
        if !v.is_finite() || v.abs() > 1.0 {
            return Err(Error::Input(format!(
                "x[{}] = {} outside [-1, 1]",
                j, v
            )));
        }
    }
    Ok(())
}

/// Evaluates `f_θ(x)` by the layer recursion; the output layer is affine.
///
/// Inputs outside `[-1, 1]^d` are rejected, not clipped.
pub fn forward(params: &SparseParams, x: &[f64], activation: Activation) -> Result<f64> {
    check_input(params.arch(), x)?;
    Ok(DenseNet::from_params(params).eval(x, activation))
}

/// `sign(f_θ(x))` with the tie `f = 0` classified as `-1`, matching the
/// `1{y f ≤ 0}` error convention used by the risks.
pub fn classify(params: &SparseParams, x: &[f64], activation: Activation) -> Result<i8> {
    let f = forward(params, x, activation)?;
    Ok(if f > 0.0 { 1 } else { -1 })
}

/// Uniform bound on `|f_θ(x)|` over `θ ∈ Θ_{S,L,D}` and `x ∈ [-1,1]^d`:
///
/// `(C_B D)^{L-1} · (C_B D (d+1) - d)/(C_B D - 1) · L · C_B + Σ_{u=1..L} (C_B D)^{L-u} · C_B`.
pub fn output_magnitude_bound(arch: &Architecture) -> Result<f64> {
    let cbd = arch.weight_bound * arch.width as f64;
    if cbd <= 1.0 {
        return Err(Error::Config(format!(
            "output magnitude bound requires C_B · D > 1, got {}",
            cbd
        )));
    }
    let d = arch.input_dim as f64;
    let l = arch.depth as f64;
    let c_b = arch.weight_bound;
    let lead = cbd.powi(arch.depth as i32 - 1) * ((cbd * (d + 1.0) - d) / (cbd - 1.0)) * l * c_b;
    let bias: f64 = (1..=arch.depth)
        .map(|u| cbd.powi((arch.depth - u) as i32) * c_b)
        .sum();
    Ok(lead + bias)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn arch(d: usize, l: usize, w: usize, s: usize) -> Architecture {
        Architecture::new(d, l, w, s, 2.0).unwrap()
    }

    #[test]
    fn param_count_matches_hand_arithmetic() {
        assert_eq!(arch(2, 3, 3, 1).param_count(), 25);
        assert_eq!(arch(1, 3, 1, 1).param_count(), 6);
        assert_eq!(arch(4, 4, 4, 1).param_count(), 65);
    }

    #[test]
    fn invalid_architectures_rejected() {
        assert!(Architecture::new(0, 3, 1, 1, 2.0).is_err());
        assert!(Architecture::new(1, 2, 1, 1, 2.0).is_err());
        assert!(Architecture::new(1, 3, 0, 1, 2.0).is_err());
        assert!(Architecture::new(1, 3, 1, 0, 2.0).is_err());
        assert!(Architecture::new(1, 3, 1, 7, 2.0).is_err()); // S > T = 6
        assert!(Architecture::new(1, 3, 1, 1, 1.5).is_err());
        assert!(Architecture::new(1, 3, 1, 1, f64::NAN).is_err());
    }

    #[test]
    fn layout_small_chain() {
        let a = arch(1, 3, 1, 2);
        assert_eq!(
            index_to_coord(&a, 0).unwrap(),
            CoordAddress::Matrix {
                layer: 1,
                row: 0,
                col: 0
            }
        );
        assert_eq!(
            index_to_coord(&a, 1).unwrap(),
            CoordAddress::Bias { layer: 1, row: 0 }
        );
        assert_eq!(
            index_to_coord(&a, 5).unwrap(),
            CoordAddress::Bias { layer: 3, row: 0 }
        );
        assert!(index_to_coord(&a, 6).is_err());
    }

    #[test]
    fn layout_is_a_bijection() {
        for a in [arch(2, 3, 3, 1), arch(1, 3, 1, 1), arch(4, 4, 4, 1), arch(3, 5, 2, 1)] {
            for t in 0..a.param_count() {
                let coord = index_to_coord(&a, t).unwrap();
                assert_eq!(coord_to_index(&a, coord).unwrap(), t);
            }
        }
    }

    #[test]
    fn coord_bounds_checked() {
        let a = arch(2, 3, 3, 1);
        assert!(coord_to_index(
            &a,
            CoordAddress::Matrix {
                layer: 1,
                row: 0,
                col: 2
            }
        )
        .is_err());
        assert!(coord_to_index(&a, CoordAddress::Bias { layer: 4, row: 0 }).is_err());
        assert!(coord_to_index(&a, CoordAddress::Bias { layer: 0, row: 0 }).is_err());
    }

    #[test]
    fn forward_zero_network() {
        let a = arch(3, 3, 2, 4);
        let p = SparseParams::zeros(a).unwrap();
        assert_eq!(forward(&p, &[0.3, -0.7, 1.0], Activation::Relu).unwrap(), 0.0);
    }

    /// 1×1 chain d=1, D=1, L=3 with A_1=2, A_2=1, A_3=1, zero biases.
    fn chain_net() -> SparseParams {
        let a = arch(1, 3, 1, 3);
        // flat layout: [A_1, b_1, A_2, b_2, A_3, b_3]
        SparseParams::from_active(a, &[(0, 2.0), (2, 1.0), (4, 1.0)]).unwrap()
    }

    #[test]
    fn forward_hand_evaluated_chain() {
        let p = chain_net();
        assert_eq!(forward(&p, &[0.5], Activation::Relu).unwrap(), 1.0);
        assert_eq!(forward(&p, &[-0.5], Activation::Relu).unwrap(), 0.0);
    }

    #[test]
    fn forward_rejects_bad_inputs() {
        let p = chain_net();
        assert!(matches!(
            forward(&p, &[0.5, 0.5], Activation::Relu),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            forward(&p, &[1.5], Activation::Relu),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            forward(&p, &[f64::NAN], Activation::Relu),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn identity_chain_matches_closed_form() {
        let a = arch(1, 3, 1, 6);
        let (a1, b1, a2, b2, a3, b3) = (1.5, 0.25, -2.0, 0.5, 1.25, -0.75);
        let p = SparseParams::from_active(
            a,
            &[(0, a1), (1, b1), (2, a2), (3, b2), (4, a3), (5, b3)],
        )
        .unwrap();
        for &x in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            let expect = a3 * (a2 * (a1 * x + b1) + b2) + b3;
            let got = forward(&p, &[x], Activation::Identity).unwrap();
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn classify_tie_breaks_negative() {
        let a = arch(1, 3, 1, 2);
        // output bias only: f ≡ value of coordinate 5
        let pos = SparseParams::from_active(a, &[(0, 0.0), (5, 0.3)]).unwrap();
        let zero = SparseParams::from_active(a, &[(0, 0.0), (5, 0.0)]).unwrap();
        let neg = SparseParams::from_active(a, &[(0, 0.0), (5, -2.0)]).unwrap();
        assert_eq!(classify(&pos, &[0.0], Activation::Relu).unwrap(), 1);
        assert_eq!(classify(&zero, &[0.0], Activation::Relu).unwrap(), -1);
        assert_eq!(classify(&neg, &[0.0], Activation::Relu).unwrap(), -1);
    }

    #[test]
    fn activations_dominated_by_identity() {
        for &u in &[-3.0, -0.5, 0.0, 0.5, 3.0] {
            assert!(Activation::Relu.apply(u).abs() <= u.abs());
            assert!(Activation::Identity.apply(u).abs() <= u.abs());
        }
    }

    #[test]
    fn magnitude_bound_hand_value() {
        let a = arch(1, 3, 1, 2);
        // (2·1)² · (2·2-1)/(2-1) · 3 · 2 + (4+2+1)·2 = 72 + 14 = 86
        assert!((output_magnitude_bound(&a).unwrap() - 86.0).abs() < 1e-12);
    }

    #[test]
    fn magnitude_bound_dominates_random_nets() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for a in [arch(1, 3, 1, 4), arch(2, 3, 3, 10), arch(3, 4, 2, 8)] {
            let bound = output_magnitude_bound(&a).unwrap();
            let t_total = a.param_count();
            for _ in 0..1000 {
                let mut idx: Vec<usize> = (0..t_total).collect();
                idx.shuffle(&mut rng);
                let pairs: Vec<(usize, f64)> = idx[..a.sparsity]
                    .iter()
                    .map(|&t| (t, rng.gen_range(-a.weight_bound..=a.weight_bound)))
                    .collect();
                let p = SparseParams::from_active(a, &pairs).unwrap();
                let x: Vec<f64> = (0..a.input_dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                for act in [Activation::Relu, Activation::Identity] {
                    let f = forward(&p, &x, act).unwrap();
                    assert!(
                        f.abs() <= bound,
                        "|f| = {} exceeds bound {} at {}",
                        f.abs(),
                        bound,
                        a
                    );
                }
            }
        }
    }

    #[test]
    fn sparse_params_invariants_enforced() {
        let a = arch(1, 3, 1, 2);
        assert!(SparseParams::from_active(a, &[(0, 1.0)]).is_err()); // too few
        assert!(SparseParams::from_active(a, &[(0, 1.0), (0, 1.0)]).is_err()); // dup
        assert!(SparseParams::from_active(a, &[(0, 1.0), (6, 1.0)]).is_err()); // range
        assert!(SparseParams::from_active(a, &[(0, 1.0), (1, 2.5)]).is_err()); // bound
        assert!(SparseParams::from_active(a, &[(0, 1.0), (1, f64::INFINITY)]).is_err());
        let p = SparseParams::from_active(a, &[(3, 1.0), (1, -2.0)]).unwrap();
        assert_eq!(p.active(), &[1, 3]);
        assert_eq!(p.gamma().iter().filter(|&&g| g).count(), 2);
        assert_eq!(p.value(3), 1.0);
        assert!(!p.is_active(0));
    }

    #[test]
    fn copy_and_modify_preserves_popcount() {
        let a = arch(1, 3, 1, 2);
        let p = SparseParams::from_active(a, &[(0, 1.0), (1, -1.0)]).unwrap();
        let q = p.with_value(0, 0.5).unwrap();
        assert_eq!(q.value(0), 0.5);
        assert_eq!(q.active(), &[0, 1]);
        assert!(p.with_value(2, 0.5).is_err());
        let r = p.with_swap(0, 4, 1.5).unwrap();
        assert_eq!(r.active(), &[1, 4]);
        assert_eq!(r.value(0), 0.0);
        assert_eq!(r.value(4), 1.5);
        assert!(p.with_swap(2, 4, 1.0).is_err()); // from inactive
        assert!(p.with_swap(0, 1, 1.0).is_err()); // to active
        assert_eq!(p.active(), &[0, 1]); // original untouched
    }

    #[test]
    fn params_json_round_trip() {
        let p = chain_net();
        let s = p.to_json();
        let q = SparseParams::from_json(&s).unwrap();
        assert_eq!(p, q);
        assert!(s.contains("\"C_B\""));
    }

    #[test]
    fn params_json_validates() {
        // S = 2 but three active pairs
        let bad = r#"{"arch":{"d":1,"L":3,"D":1,"S":2,"C_B":2.0},
                      "active":[[0,1.0],[1,1.0],[2,1.0]]}"#;
        assert!(SparseParams::from_json(bad).is_err());
        // value outside the slab
        let bad = r#"{"arch":{"d":1,"L":3,"D":1,"S":1,"C_B":2.0},"active":[[0,3.0]]}"#;
        assert!(SparseParams::from_json(bad).is_err());
    }
}
