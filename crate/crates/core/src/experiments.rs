//! The two headline experiments: rate decay of the test error in `n`, and
//! coverage of the empirical certificate.
//!
//! Both are scaled-down statistical stand-ins for asymptotic statements, so
//! they are organized around determinism: every run derives its randomness
//! from `(base_seed, run index)` and runs can execute in parallel without
//! changing any number.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{complexity_term, empirical_certificate, stride_indices, CertPosterior};
use crate::network::Architecture;
use crate::risk::test_misclassification;
use crate::sampler::{run_chain, thermo_log_z, ChainConfig, STREAM_RUN_SHIFT};
use crate::synthetic::{gen_dataset, Noise, TeacherSpec};
use crate::{Error, Result};

// Seed roles: distinct u64 seeds per (run, purpose); `seed_from_u64`
// decorrelates nearby values, so simple arithmetic separation suffices.
const ROLE_TRAIN: u64 = 0;
const ROLE_TEST: u64 = 1;
const ROLE_TEACHER: u64 = 2;
const ROLE_CERT_MC: u64 = 3;

fn run_seed(base: u64, run: usize, role: u64) -> u64 {
    base.wrapping_add((run as u64) << 8).wrapping_add(role)
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn median(sorted_src: &[f64]) -> f64 {
    let mut v = sorted_src.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

// --- rate-decay experiment ---

/// Configuration for the rate experiment. The inverse temperature is not a
/// free parameter: each run uses the fast-rate prescription `λ = 2n/5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateExpConfig {
    pub arch: Architecture,
    pub n_grid: Vec<usize>,
    /// Independent repetitions per grid point.
    pub seeds: usize,
    pub base_seed: u64,
    pub test_points: usize,
    pub steps: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Posterior draws averaged into each run's test error.
    pub eval_draws: usize,
}

impl RateExpConfig {
    pub fn new(arch: Architecture) -> Self {
        RateExpConfig {
            arch,
            n_grid: vec![100, 200, 400, 800, 1600],
            seeds: 10,
            base_seed: 0,
            test_points: 2_000,
            steps: 4_000,
            burn_in: 1_000,
            thin: 5,
            eval_draws: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.arch.validate()?;
        if self.n_grid.len() < 3 {
            return Err(Error::Config(format!(
                "rate experiment needs ≥ 3 grid points, got {}",
                self.n_grid.len()
            )));
        }
        if self.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "n grid must be strictly increasing".into(),
            ));
        }
        if self.n_grid[0] == 0 {
            return Err(Error::Config("n grid must be positive".into()));
        }
        if self.seeds == 0 || self.test_points == 0 || self.eval_draws == 0 {
            return Err(Error::Config(
                "seeds, test_points, and eval_draws must be ≥ 1".into(),
            ));
        }
        // chain shape checks (steps/burn_in/thin) happen when the per-run
        // ChainConfig is built
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    pub lambda: f64,
    /// Median over seeds, floored at `1/(2·test_points)` so the log-log fit
    /// is defined when every draw classifies the test set perfectly.
    pub median_error: f64,
    /// `complexity_term(arch, n) / n`, the fast-rate theory curve.
    pub theory_curve: f64,
    /// Per-seed posterior-average test errors.
    pub errors: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateReport {
    pub config: RateExpConfig,
    /// Active `(coordinate, value)` pairs of the teacher network.
    pub teacher: Vec<(usize, f64)>,
    pub rows: Vec<RateRow>,
    /// Least-squares slope of `log(median error)` vs `log n`.
    pub slope: f64,
    pub intercept: f64,
    /// Slope negative and median error at the largest `n` below the
    /// smallest-`n` median.
    pub passed: bool,
}

impl RateReport {
    /// Tidy CSV: one row per grid point with the overlay columns.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "lambda", "median_test_error", "theory_curve"])
            .expect("csv write");
        for row in &self.rows {
            w.write_record([
                row.n.to_string(),
                format!("{}", row.lambda),
                format!("{}", row.median_error),
                format!("{}", row.theory_curve),
            ])
            .expect("csv write");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds a deterministic "planted" teacher for an architecture: one full
/// input→output path through unit 0 of every layer (weights 1.5), the output
/// bias at -0.35 when the mask has room for it, and zero-valued coordinates
/// padding the mask to exactly `S`.
///
/// Prior draws are unusable here: an exact-`S` mask contains a complete path
/// with probability a few percent at small `S`, and most draws give constant
/// sign — a test error pinned at 0 or 0.5 for every `n` says nothing about
/// decay. The planted teacher is balanced by construction (the decision
/// threshold sits near the middle of the input box) and lies inside the
/// student class, so zero empirical risk is attainable.
///
/// A positive `margin_tau` requires the output bias (`S ≥ L + 1`): without
/// it the network is exactly zero on half the input box and the margin
/// filter can never be satisfied there.
pub fn planted_teacher(arch: &Architecture, margin_tau: f64) -> Result<TeacherSpec> {
    arch.validate()?;
    if arch.sparsity < arch.depth {
        return Err(Error::Config(format!(
            "planting a path teacher needs S ≥ L, got S = {} < L = {}",
            arch.sparsity, arch.depth
        )));
    }
    let mut pairs: Vec<(usize, f64)> = Vec::new();
    for l in 1..=arch.depth {
        // entry (0, 0) of the layer-l weight matrix
        pairs.push((arch.layer_offset(l), 1.5));
    }
    let t_total = arch.param_count();
    if arch.sparsity >= arch.depth + 1 {
        pairs.push((t_total - 1, -0.35)); // output bias
    } else if margin_tau > 0.0 {
        return Err(Error::Config(
            "margin filter needs the output bias: S ≥ L + 1".into(),
        ));
    }
    let used: std::collections::BTreeSet<usize> = pairs.iter().map(|&(t, _)| t).collect();
    let mut fill = (0..t_total).filter(|t| !used.contains(t));
    while pairs.len() < arch.sparsity {
        pairs.push((fill.next().expect("S ≤ T"), 0.0));
    }
    TeacherSpec::new(
        crate::network::SparseParams::from_active(*arch, &pairs)?,
        Noise::Noiseless,
        margin_tau,
    )
}

/// Runs the full grid: for each `(n, seed)` samples the Gibbs posterior at
/// `λ = 2n/5` on fresh data from the (noiseless) teacher and scores
/// posterior draws on a held-out test set; fits the log-log decay of the
/// per-`n` medians.
pub fn rate_experiment(cfg: &RateExpConfig, teacher: &TeacherSpec) -> Result<RateReport> {
    cfg.validate()?;
    if !matches!(teacher.noise(), Noise::Noiseless) {
        return Err(Error::Config(
            "the rate experiment is a noiseless-teacher design".into(),
        ));
    }
    if teacher.params().arch().input_dim != cfg.arch.input_dim {
        return Err(Error::DimensionMismatch(format!(
            "teacher input dim {} vs sampling arch input dim {}",
            teacher.params().arch().input_dim,
            cfg.arch.input_dim
        )));
    }
    let mut jobs = Vec::new();
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        for j in 0..cfg.seeds {
            jobs.push((i, j, n));
        }
    }
    let errors: Vec<(usize, f64)> = jobs
        .par_iter()
        .map(|&(i, j, n)| -> Result<(usize, f64)> {
            let run_idx = i * cfg.seeds + j;
            let lambda = 2.0 * n as f64 / 5.0;
            let train = gen_dataset(teacher, n, run_seed(cfg.base_seed, run_idx, ROLE_TRAIN))?;
            let test = gen_dataset(
                teacher,
                cfg.test_points,
                run_seed(cfg.base_seed, run_idx, ROLE_TEST),
            )?;
            let mut chain = ChainConfig::new(lambda, cfg.base_seed);
            chain.steps = cfg.steps;
            chain.burn_in = cfg.burn_in;
            chain.thin = cfg.thin;
            chain.anneal_burn_in = true;
            chain.stream_offset = ((run_idx + 1) as u64) << STREAM_RUN_SHIFT;
            let result = run_chain(&train, &cfg.arch, &chain)?;
            let idx = stride_indices(result.draws.len(), cfg.eval_draws);
            let mut err_sum = 0.0;
            for &k in &idx {
                err_sum += test_misclassification(&result.draws[k], &test)?.rate;
            }
            Ok((i, err_sum / idx.len() as f64))
        })
        .collect::<Result<_>>()?;
    let floor = 1.0 / (2.0 * cfg.test_points as f64);
    let mut per_n: Vec<Vec<f64>> = vec![Vec::new(); cfg.n_grid.len()];
    for (i, e) in errors {
        per_n[i].push(e);
    }
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    for (i, &n) in cfg.n_grid.iter().enumerate() {
        rows.push(RateRow {
            n,
            lambda: 2.0 * n as f64 / 5.0,
            median_error: median(&per_n[i]).max(floor),
            theory_curve: complexity_term(&cfg.arch, n)? / n as f64,
            errors: per_n[i].clone(),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_error.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let passed = slope < 0.0 && rows.last().unwrap().median_error < rows[0].median_error;
    Ok(RateReport {
        config: cfg.clone(),
        teacher: teacher.params().active_pairs(),
        rows,
        slope,
        intercept,
        passed,
    })
}

// --- certificate coverage experiment ---

/// Configuration for the coverage experiment; the certificate is evaluated
/// at the slow-rate prescription `λ = √n` of the underlying theorem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub arch: Architecture,
    pub n: usize,
    pub runs: usize,
    pub epsilon: f64,
    pub test_points: usize,
    pub base_seed: u64,
    pub steps: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Interior nodes of the thermodynamic-integration grid.
    pub ti_nodes: usize,
    /// Posterior draws scored per run (certificate MC and test risk).
    pub n_mc: usize,
    /// Minimum fraction of runs the certificate must cover.
    pub required_fraction: f64,
}

impl CoverageConfig {
    pub fn new(arch: Architecture) -> Self {
        CoverageConfig {
            arch,
            n: 200,
            runs: 100,
            epsilon: 0.05,
            test_points: 10_000,
            base_seed: 0,
            steps: 3_000,
            burn_in: 1_000,
            thin: 4,
            ti_nodes: 8,
            n_mc: 200,
            required_fraction: 0.9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.arch.validate()?;
        if self.runs == 0 || self.n == 0 || self.test_points == 0 || self.n_mc == 0 {
            return Err(Error::Config(
                "runs, n, test_points, and n_mc must be ≥ 1".into(),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(0.0..=1.0).contains(&self.required_fraction) {
            return Err(Error::Config(format!(
                "required fraction must lie in [0, 1], got {}",
                self.required_fraction
            )));
        }
        if self.ti_nodes < 2 {
            return Err(Error::Config(
                "thermodynamic integration needs ≥ 2 interior nodes".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverageRun {
    pub run: usize,
    pub certificate: Option<f64>,
    /// Posterior-averaged test misclassification (MC estimate of the
    /// stochastic classifier's true risk).
    pub test_risk: Option<f64>,
    pub covered: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverageReport {
    pub config: CoverageConfig,
    pub runs: Vec<CoverageRun>,
    pub covered: usize,
    pub required: usize,
    pub passed: bool,
}

impl CoverageReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn coverage_run(cfg: &CoverageConfig, k: usize) -> Result<(f64, f64)> {
    let lambda = (cfg.n as f64).sqrt();
    let mut teacher_rng =
        ChaCha12Rng::seed_from_u64(run_seed(cfg.base_seed, k, ROLE_TEACHER));
    let teacher =
        TeacherSpec::from_prior(&cfg.arch, Noise::Noiseless, 0.0, &mut teacher_rng)?;
    let train = gen_dataset(&teacher, cfg.n, run_seed(cfg.base_seed, k, ROLE_TRAIN))?;
    let test = gen_dataset(
        &teacher,
        cfg.test_points,
        run_seed(cfg.base_seed, k, ROLE_TEST),
    )?;
    let mut chain = ChainConfig::new(lambda, cfg.base_seed);
    chain.steps = cfg.steps;
    chain.burn_in = cfg.burn_in;
    chain.thin = cfg.thin;
    chain.anneal_burn_in = true;
    chain.stream_offset = ((k + 1) as u64) << STREAM_RUN_SHIFT;
    let ti = thermo_log_z(&train, &cfg.arch, lambda, cfg.ti_nodes, &chain)?;
    let report = empirical_certificate(
        &train,
        &CertPosterior::Chain {
            result: &ti.top,
            ti: &ti,
        },
        lambda,
        cfg.epsilon,
        cfg.n_mc,
        run_seed(cfg.base_seed, k, ROLE_CERT_MC),
    )?;
    let idx = stride_indices(ti.top.draws.len(), cfg.n_mc);
    let mut risk_sum = 0.0;
    for &i in &idx {
        risk_sum += test_misclassification(&ti.top.draws[i], &test)?.rate;
    }
    Ok((report.total, risk_sum / idx.len() as f64))
}

/// Repeats teacher/data/chain/certificate end to end `runs` times and counts
/// how often the certificate dominates the estimated true risk. A run that
/// errors internally (e.g. a flagged thermodynamic-integration failure)
/// counts as not covered rather than aborting the study.
pub fn coverage_experiment(cfg: &CoverageConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let runs: Vec<CoverageRun> = (0..cfg.runs)
        .into_par_iter()
        .map(|k| match coverage_run(cfg, k) {
            Ok((certificate, test_risk)) => CoverageRun {
                run: k,
                certificate: Some(certificate),
                test_risk: Some(test_risk),
                covered: certificate >= test_risk,
                note: String::new(),
            },
            Err(e) => CoverageRun {
                run: k,
                certificate: None,
                test_risk: None,
                covered: false,
                note: format!("run failed: {}", e),
            },
        })
        .collect();
    let covered = runs.iter().filter(|r| r.covered).count();
    let required = (cfg.required_fraction * cfg.runs as f64).ceil() as usize;
    Ok(CoverageReport {
        config: cfg.clone(),
        runs,
        covered,
        required,
        passed: covered >= required,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_arch() -> Architecture {
        Architecture::new(1, 3, 1, 3, 2.0).unwrap()
    }

    fn tiny_rate_cfg() -> RateExpConfig {
        let mut cfg = RateExpConfig::new(Architecture::new(1, 3, 2, 3, 2.0).unwrap());
        cfg.n_grid = vec![30, 60, 120];
        cfg.seeds = 2;
        cfg.test_points = 400;
        cfg.steps = 800;
        cfg.burn_in = 200;
        cfg.thin = 4;
        cfg.eval_draws = 16;
        cfg
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.7 * x).collect();
        let (slope, intercept) = least_squares(&xs, &ys);
        assert!((slope + 0.7).abs() < 1e-12);
        assert!((intercept - 2.5).abs() < 1e-12);
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn rate_config_validation() {
        let mut cfg = tiny_rate_cfg();
        cfg.n_grid = vec![30, 60];
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_rate_cfg();
        cfg.n_grid = vec![60, 30, 120];
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_rate_cfg();
        cfg.seeds = 0;
        assert!(cfg.validate().is_err());
        assert!(tiny_rate_cfg().validate().is_ok());
    }

    #[test]
    fn planted_teacher_path_only_is_balanced() {
        let arch = Architecture::new(1, 3, 2, 3, 2.0).unwrap();
        let teacher = planted_teacher(&arch, 0.0).unwrap();
        assert_eq!(teacher.params().active_pairs().len(), 3);
        // f = 1.5³·x for x > 0, 0 for x ≤ 0
        let f = crate::network::forward(
            teacher.params(),
            &[0.5],
            crate::network::Activation::Relu,
        )
        .unwrap();
        assert!((f - 1.5f64.powi(3) * 0.5).abs() < 1e-12);
        let probe = gen_dataset(&teacher, 1000, 3).unwrap();
        let pos =
            (0..probe.len()).filter(|&i| probe.y(i) == 1).count() as f64 / 1000.0;
        assert!((0.3..=0.7).contains(&pos), "balance {}", pos);
    }

    #[test]
    fn planted_teacher_with_bias_and_fills() {
        let arch = Architecture::new(2, 3, 3, 6, 2.0).unwrap();
        let teacher = planted_teacher(&arch, 0.05).unwrap();
        let pairs = teacher.params().active_pairs();
        assert_eq!(pairs.len(), 6);
        // plateau side carries the bias, not an exact zero
        let f_neg = crate::network::forward(
            teacher.params(),
            &[-0.5, 0.2],
            crate::network::Activation::Relu,
        )
        .unwrap();
        assert!((f_neg + 0.35).abs() < 1e-12);
        let f_pos = crate::network::forward(
            teacher.params(),
            &[1.0, -0.3],
            crate::network::Activation::Relu,
        )
        .unwrap();
        assert!((f_pos - (1.5f64.powi(3) - 0.35)).abs() < 1e-12);
    }

    #[test]
    fn planted_teacher_rejects_bad_shapes() {
        // S < L: no room for a path
        let arch = Architecture::new(1, 4, 1, 3, 2.0).unwrap();
        assert!(planted_teacher(&arch, 0.0).is_err());
        // S = L plus a margin: no room for the output bias
        let arch = Architecture::new(1, 3, 2, 3, 2.0).unwrap();
        assert!(planted_teacher(&arch, 0.1).is_err());
    }

    #[test]
    fn rate_experiment_small_run() {
        let cfg = tiny_rate_cfg();
        let teacher = planted_teacher(&cfg.arch, 0.0).unwrap();
        let report = rate_experiment(&cfg, &teacher).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert_eq!(row.errors.len(), cfg.seeds);
            assert!((row.lambda - 2.0 * row.n as f64 / 5.0).abs() < 1e-12);
            let theory = complexity_term(&cfg.arch, row.n).unwrap() / row.n as f64;
            assert!((row.theory_curve - theory).abs() < 1e-12);
            assert!(row.median_error >= 1.0 / (2.0 * cfg.test_points as f64));
            assert!(row.median_error <= 1.0);
        }
        assert!(report.slope.is_finite());
        assert_eq!(report.teacher.len(), cfg.arch.sparsity);
    }

    #[test]
    fn rate_experiment_rejects_noisy_teacher() {
        let cfg = tiny_rate_cfg();
        let teacher = planted_teacher(&cfg.arch, 0.0).unwrap();
        let noisy = TeacherSpec::new(
            teacher.params().clone(),
            crate::synthetic::Noise::Flip { p: 0.1 },
            0.0,
        )
        .unwrap();
        assert!(rate_experiment(&cfg, &noisy).is_err());
    }

    #[test]
    fn rate_experiment_is_deterministic() {
        let cfg = tiny_rate_cfg();
        let teacher = planted_teacher(&cfg.arch, 0.0).unwrap();
        let a = rate_experiment(&cfg, &teacher).unwrap();
        let b = rate_experiment(&cfg, &teacher).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_csv_string(), b.to_csv_string());
    }

    #[test]
    fn rate_csv_shape() {
        let cfg = tiny_rate_cfg();
        let teacher = planted_teacher(&cfg.arch, 0.0).unwrap();
        let report = rate_experiment(&cfg, &teacher).unwrap();
        let csv = report.to_csv_string();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "n,lambda,median_test_error,theory_curve");
        assert!(lines[1].starts_with("30,12,"));
    }

    fn tiny_cov_cfg() -> CoverageConfig {
        let mut cfg = CoverageConfig::new(tiny_arch());
        cfg.n = 60;
        cfg.runs = 4;
        cfg.test_points = 500;
        cfg.steps = 600;
        cfg.burn_in = 200;
        cfg.thin = 4;
        cfg.ti_nodes = 4;
        cfg.n_mc = 50;
        cfg
    }

    #[test]
    fn coverage_config_validation() {
        let mut cfg = tiny_cov_cfg();
        cfg.epsilon = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_cov_cfg();
        cfg.ti_nodes = 1;
        assert!(cfg.validate().is_err());
        let mut cfg = tiny_cov_cfg();
        cfg.required_fraction = 1.5;
        assert!(cfg.validate().is_err());
        assert!(tiny_cov_cfg().validate().is_ok());
    }

    #[test]
    fn coverage_small_run_covers() {
        let report = coverage_experiment(&tiny_cov_cfg()).unwrap();
        assert_eq!(report.runs.len(), 4);
        for run in &report.runs {
            assert!(run.note.is_empty(), "run {} failed: {}", run.run, run.note);
            let cert = run.certificate.unwrap();
            assert!(cert.is_finite() && cert > 0.0);
            assert!(run.test_risk.unwrap() >= 0.0);
        }
        // slow-rate certificates at tiny n are loose; they should cover
        assert_eq!(report.covered, 4);
        assert!(report.passed);
    }

    #[test]
    fn coverage_is_deterministic() {
        let mut cfg = tiny_cov_cfg();
        cfg.runs = 2;
        let a = coverage_experiment(&cfg).unwrap();
        let b = coverage_experiment(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
