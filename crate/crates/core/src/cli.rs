//! Command-line surface.
//!
//! Every subcommand follows the same contract: a JSON config file (via
//! `--config`) may supply any flag, explicit flags override the file, and all
//! structured outputs carry the schema version plus the fully resolved
//! configuration so a run can be reproduced from its own artifacts. Exit
//! codes: 0 success, 1 validation/configuration error, 2 failed statistical
//! assertion.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::{empirical_certificate, BoundReport, CertPosterior};
use crate::experiments::{planted_teacher, rate_experiment, RateExpConfig, RateReport};
use crate::network::Architecture;
use crate::risk::Dataset;
use crate::sampler::{run_chain, thermo_log_z, ChainConfig, ChainResult};
use crate::selection::{select_architecture, CandidateGrid, SelectionResult};
use crate::synthetic::{gen_dataset, Noise, TeacherSpec};
use crate::verify::{run_battery, Battery};
use crate::{Error, Result, SCHEMA_VERSION};

// --- logging ---

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("{}: {}", record.level().to_string().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn init_logging() {
    // repeat initialization (e.g. in tests) is harmless
    let _ = log::set_logger(&LOGGER).map(|_| log::set_max_level(log::LevelFilter::Warn));
}

// --- spec string parsing ---

/// Parses `d,L,D,S` or `d,L,D,S,C_B` (slab bound defaults to 2).
pub fn parse_arch(s: &str) -> Result<Architecture> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(Error::Parse(format!(
            "architecture spec must be d,L,D,S[,C_B], got {:?}",
            s
        )));
    }
    let nums: Vec<usize> = parts[..4]
        .iter()
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad architecture field {:?} in {:?}", p, s)))
        })
        .collect::<Result<_>>()?;
    let c_b = if parts.len() == 5 {
        parts[4]
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad slab bound {:?} in {:?}", parts[4], s)))?
    } else {
        2.0
    };
    Architecture::new(nums[0], nums[1], nums[2], nums[3], c_b)
}

/// Parses a teacher shape `L,D,S[,C_B]`; the input dimension comes from `--d`.
pub fn parse_teacher_arch(d: usize, s: &str) -> Result<Architecture> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(Error::Parse(format!(
            "teacher arch spec must be L,D,S[,C_B], got {:?}",
            s
        )));
    }
    parse_arch(&format!("{},{}", d, s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaSpec {
    AutoSlow,
    AutoFast,
    Value(f64),
}

impl LambdaSpec {
    /// `auto-slow` is the slow-rate prescription `√n`; `auto-fast` is the
    /// fast-rate prescription `2n/5` (margin constant 1).
    pub fn resolve(&self, n: usize) -> f64 {
        match self {
            LambdaSpec::AutoSlow => (n as f64).sqrt(),
            LambdaSpec::AutoFast => 2.0 * n as f64 / 5.0,
            LambdaSpec::Value(v) => *v,
        }
    }

    pub fn as_str(&self) -> String {
        match self {
            LambdaSpec::AutoSlow => "auto-slow".into(),
            LambdaSpec::AutoFast => "auto-fast".into(),
            LambdaSpec::Value(v) => format!("{}", v),
        }
    }
}

pub fn parse_lambda(s: &str) -> Result<LambdaSpec> {
    match s.trim() {
        "auto-slow" => Ok(LambdaSpec::AutoSlow),
        "auto-fast" => Ok(LambdaSpec::AutoFast),
        other => other
            .parse::<f64>()
            .map(LambdaSpec::Value)
            .map_err(|_| Error::Parse(format!("lambda must be auto-slow, auto-fast, or a number, got {:?}", other))),
    }
}

/// Parses `none` or `flip:p`.
pub fn parse_noise(s: &str) -> Result<Noise> {
    let t = s.trim();
    if t == "none" {
        return Ok(Noise::Noiseless);
    }
    if let Some(p) = t.strip_prefix("flip:") {
        let p = p
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad flip probability in {:?}", s)))?;
        return Ok(Noise::Flip { p });
    }
    Err(Error::Parse(format!(
        "noise must be none or flip:p, got {:?}",
        s
    )))
}

fn parse_n_grid(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad n-grid entry {:?}", p)))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<Architecture>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_arch)
        .collect()
}

fn arch_spec(a: &Architecture) -> String {
    format!(
        "{},{},{},{},{}",
        a.input_dim, a.depth, a.width, a.sparsity, a.weight_bound
    )
}

// --- config file merge ---

fn load_file_cfg<T: DeserializeOwned + Default>(path: &Option<PathBuf>) -> Result<T> {
    match path {
        Some(p) => {
            let s = std::fs::read_to_string(p)?;
            serde_json::from_str(&s)
                .map_err(|e| Error::Config(format!("config file {}: {}", p.display(), e)))
        }
        None => Ok(T::default()),
    }
}

fn merge<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

fn merge_or<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    merge(flag, file).unwrap_or(default)
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required flag {}", flag)))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

// --- top-level command ---

#[derive(Parser, Debug)]
#[command(
    name = "slabnet",
    version,
    about = "Sparse spike-and-slab networks with PAC-Bayes certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic teacher dataset (CSV plus JSON sidecar)
    GenData(GenDataArgs),
    /// Sample the Gibbs posterior and write a chain checkpoint
    Sample(SampleArgs),
    /// Compute an empirical PAC-Bayes certificate for the Gibbs posterior
    Certify(CertifyArgs),
    /// Score candidate architectures by free energy and select the best
    Select(SelectArgs),
    /// Rate-decay experiment over a grid of sample sizes
    RateExp(RateExpArgs),
    /// Run the numerical lemma-verification battery
    Verify(VerifyArgs),
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parses and dispatches; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help/version are successful exits; usage errors are validation
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::Estimation(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::GenData(a) => cmd_gen_data(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Select(a) => cmd_select(a),
        Command::RateExp(a) => cmd_rate_exp(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

// --- gen-data ---

#[derive(Args, Debug, Default)]
pub struct GenDataArgs {
    /// JSON file supplying any of the other flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input dimension
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of points
    #[arg(long)]
    pub n: Option<usize>,
    /// Teacher shape L,D,S[,C_B]; the teacher is drawn from the prior
    #[arg(long)]
    pub teacher_arch: Option<String>,
    /// Label noise: none or flip:p
    #[arg(long)]
    pub noise: Option<String>,
    /// Margin half-width: points with |f| below this are rejected
    #[arg(long)]
    pub margin_tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path (sidecar JSON lands next to it)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct GenDataFile {
    d: Option<usize>,
    n: Option<usize>,
    teacher_arch: Option<String>,
    noise: Option<String>,
    margin_tau: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct GenDataResolved {
    d: usize,
    n: usize,
    teacher_arch: String,
    noise: String,
    margin_tau: f64,
    seed: u64,
    out: String,
}

#[derive(Serialize)]
struct GenDataSidecar {
    schema_version: u32,
    command: String,
    config: GenDataResolved,
    teacher: Architecture,
    teacher_active: Vec<(usize, f64)>,
    bayes_error: f64,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".json");
    out.with_file_name(name)
}

fn cmd_gen_data(args: &GenDataArgs) -> Result<i32> {
    let file: GenDataFile = load_file_cfg(&args.config)?;
    let d = require(merge(&args.d, &file.d), "--d")?;
    let n = require(merge(&args.n, &file.n), "--n")?;
    let teacher_spec = require(merge(&args.teacher_arch, &file.teacher_arch), "--teacher-arch")?;
    let noise_str = merge_or(&args.noise, &file.noise, "none".into());
    let margin_tau = merge_or(&args.margin_tau, &file.margin_tau, 0.0);
    let seed = merge_or(&args.seed, &file.seed, 0);
    let out = require(merge(&args.out, &file.out), "--out")?;

    let arch = parse_teacher_arch(d, &teacher_spec)?;
    let noise = parse_noise(&noise_str)?;
    // teacher stream is decoupled from the data stream so regenerating with
    // more points extends the same dataset
    let mut teacher_rng = ChaCha12Rng::seed_from_u64(seed.wrapping_add(1));
    let teacher = TeacherSpec::from_prior(&arch, noise, margin_tau, &mut teacher_rng)?;
    let data = gen_dataset(&teacher, n, seed)?;
    data.save_csv(&out)?;
    let sidecar = GenDataSidecar {
        schema_version: SCHEMA_VERSION,
        command: "gen-data".into(),
        config: GenDataResolved {
            d,
            n,
            teacher_arch: teacher_spec.clone(),
            noise: noise_str.clone(),
            margin_tau,
            seed,
            out: out.display().to_string(),
        },
        teacher: *teacher.params().arch(),
        teacher_active: teacher.params().active_pairs(),
        bayes_error: teacher.bayes_error(),
    };
    write_text(
        &sidecar_path(&out),
        &serde_json::to_string_pretty(&sidecar)?,
    )?;
    println!("wrote {} points (d = {}) to {}", n, d, out.display());
    println!("bayes error R* = {}", sidecar.bayes_error);
    Ok(0)
}

// --- sample ---

#[derive(Args, Debug, Default)]
pub struct SampleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Training data CSV
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Architecture d,L,D,S[,C_B]
    #[arg(long)]
    pub arch: Option<String>,
    /// auto-slow (√n), auto-fast (2n/5), or a number
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub chains: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Weight-move half-width (defaults to C_B/10)
    #[arg(long)]
    pub step_size: Option<f64>,
    #[arg(long)]
    pub swap_prob: Option<f64>,
    /// Ramp the inverse temperature from 0 to λ across burn-in
    #[arg(long)]
    pub anneal: Option<bool>,
    /// Checkpoint JSON path
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct SampleFile {
    data: Option<PathBuf>,
    arch: Option<String>,
    lambda: Option<String>,
    steps: Option<usize>,
    burnin: Option<usize>,
    thin: Option<usize>,
    chains: Option<u32>,
    seed: Option<u64>,
    step_size: Option<f64>,
    swap_prob: Option<f64>,
    anneal: Option<bool>,
    out: Option<PathBuf>,
}

struct ChainSettings {
    lambda_spec: LambdaSpec,
    cfg: ChainConfig,
}

/// Merged chain options shared by sample/certify/select; `None` fields fall
/// back to the per-command defaults.
#[derive(Default)]
struct ChainOpts {
    lambda: Option<String>,
    steps: Option<usize>,
    burnin: Option<usize>,
    thin: Option<usize>,
    chains: Option<u32>,
    seed: Option<u64>,
    step_size: Option<f64>,
    swap_prob: Option<f64>,
    anneal: Option<bool>,
}

struct ChainDefaults {
    steps: usize,
    burnin: usize,
    thin: usize,
    anneal: bool,
}

fn chain_settings(opts: ChainOpts, defaults: ChainDefaults, n: usize) -> Result<ChainSettings> {
    let lambda_spec = match &opts.lambda {
        Some(s) => parse_lambda(s)?,
        None => LambdaSpec::AutoSlow,
    };
    let mut cfg = ChainConfig::new(lambda_spec.resolve(n), opts.seed.unwrap_or(0));
    cfg.steps = opts.steps.unwrap_or(defaults.steps);
    cfg.burn_in = opts.burnin.unwrap_or(defaults.burnin);
    cfg.thin = opts.thin.unwrap_or(defaults.thin);
    cfg.chains = opts.chains.unwrap_or(1);
    cfg.step_size = opts.step_size;
    if let Some(p) = opts.swap_prob {
        cfg.swap_prob = p;
    }
    cfg.anneal_burn_in = opts.anneal.unwrap_or(defaults.anneal);
    Ok(ChainSettings { lambda_spec, cfg })
}

fn print_chain_summary(spec: &LambdaSpec, result: &ChainResult) {
    println!(
        "lambda = {} ({}), kept {} draws from {} chain(s)",
        result.config.lambda,
        spec.as_str(),
        result.draws.len(),
        result.config.chains
    );
    println!(
        "mean hinge risk = {:.6} (se {:.2e})",
        result.mean_hinge, result.se_hinge
    );
    println!(
        "acceptance: weight {:.3}, swap {:.3}",
        result.accept.weight_rate(),
        result.accept.swap_rate()
    );
}

fn cmd_sample(args: &SampleArgs) -> Result<i32> {
    let file: SampleFile = load_file_cfg(&args.config)?;
    let data_path = require(merge(&args.data, &file.data), "--data")?;
    let arch = parse_arch(&require(merge(&args.arch, &file.arch), "--arch")?)?;
    let out = require(merge(&args.out, &file.out), "--out")?;
    let data = Dataset::load_csv(&data_path)?;
    let settings = chain_settings(
        ChainOpts {
            lambda: merge(&args.lambda, &file.lambda),
            steps: merge(&args.steps, &file.steps),
            burnin: merge(&args.burnin, &file.burnin),
            thin: merge(&args.thin, &file.thin),
            chains: merge(&args.chains, &file.chains),
            seed: merge(&args.seed, &file.seed),
            step_size: merge(&args.step_size, &file.step_size),
            swap_prob: merge(&args.swap_prob, &file.swap_prob),
            anneal: merge(&args.anneal, &file.anneal),
        },
        ChainDefaults {
            steps: 10_000,
            burnin: 2_000,
            thin: 10,
            anneal: false,
        },
        data.len(),
    )?;
    let result = run_chain(&data, &arch, &settings.cfg)?;
    result.save(&out)?;
    print_chain_summary(&settings.lambda_spec, &result);
    println!("checkpoint written to {}", out.display());
    Ok(0)
}

// --- certify ---

#[derive(Args, Debug, Default)]
pub struct CertifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Architecture d,L,D,S[,C_B]
    #[arg(long)]
    pub arch: Option<String>,
    /// auto-slow (√n), auto-fast (2n/5), or a number
    #[arg(long)]
    pub lambda: Option<String>,
    /// Certificate confidence parameter
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Interior thermodynamic-integration nodes
    #[arg(long)]
    pub ti_nodes: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub chains: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Posterior draws scored by Monte Carlo
    #[arg(long)]
    pub n_mc: Option<usize>,
    #[arg(long)]
    pub anneal: Option<bool>,
    /// Report JSON path (optional; the table always prints)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct CertifyFile {
    data: Option<PathBuf>,
    arch: Option<String>,
    lambda: Option<String>,
    epsilon: Option<f64>,
    ti_nodes: Option<usize>,
    steps: Option<usize>,
    burnin: Option<usize>,
    thin: Option<usize>,
    chains: Option<u32>,
    seed: Option<u64>,
    n_mc: Option<usize>,
    anneal: Option<bool>,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CertifyResolved {
    data: String,
    arch: String,
    lambda: String,
    lambda_value: f64,
    epsilon: f64,
    ti_nodes: usize,
    steps: usize,
    burnin: usize,
    thin: usize,
    chains: u32,
    seed: u64,
    n_mc: usize,
    anneal: bool,
}

#[derive(Serialize)]
struct CertifyOutput {
    schema_version: u32,
    command: String,
    config: CertifyResolved,
    log_z: f64,
    log_z_std_error: f64,
    report: BoundReport,
}

fn print_bound_table(report: &BoundReport) {
    println!("{:<36} {:>14} {:>12}", "term", "value", "std error");
    for t in &report.terms {
        let se = t
            .std_error
            .map(|s| format!("{:.3e}", s))
            .unwrap_or_else(|| "-".into());
        println!("{:<36} {:>14.6} {:>12}", t.name, t.value, se);
    }
    println!("{:<36} {:>14.6}", "certificate total", report.total);
    for note in &report.notes {
        println!("note: {}", note);
    }
}

fn cmd_certify(args: &CertifyArgs) -> Result<i32> {
    let file: CertifyFile = load_file_cfg(&args.config)?;
    let data_path = require(merge(&args.data, &file.data), "--data")?;
    let arch_str = require(merge(&args.arch, &file.arch), "--arch")?;
    let arch = parse_arch(&arch_str)?;
    let epsilon = merge_or(&args.epsilon, &file.epsilon, 0.05);
    let ti_nodes = merge_or(&args.ti_nodes, &file.ti_nodes, 8);
    let n_mc = merge_or(&args.n_mc, &file.n_mc, 256);
    let data = Dataset::load_csv(&data_path)?;
    let settings = chain_settings(
        ChainOpts {
            lambda: merge(&args.lambda, &file.lambda),
            steps: merge(&args.steps, &file.steps),
            burnin: merge(&args.burnin, &file.burnin),
            thin: merge(&args.thin, &file.thin),
            chains: merge(&args.chains, &file.chains),
            seed: merge(&args.seed, &file.seed),
            anneal: merge(&args.anneal, &file.anneal),
            ..ChainOpts::default()
        },
        ChainDefaults {
            steps: 3_000,
            burnin: 1_000,
            thin: 4,
            anneal: true,
        },
        data.len(),
    )?;
    let lambda = settings.cfg.lambda;
    let ti = thermo_log_z(&data, &arch, lambda, ti_nodes, &settings.cfg)?;
    let report = empirical_certificate(
        &data,
        &CertPosterior::Chain {
            result: &ti.top,
            ti: &ti,
        },
        lambda,
        epsilon,
        n_mc,
        settings.cfg.seed.wrapping_add(0x5eed),
    )?;
    print_chain_summary(&settings.lambda_spec, &ti.top);
    println!("log Z({}) = {:.6} (se {:.2e})", lambda, ti.log_z, ti.std_error);
    print_bound_table(&report);
    if let Some(out) = merge(&args.out, &file.out) {
        let output = CertifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "certify".into(),
            config: CertifyResolved {
                data: data_path.display().to_string(),
                arch: arch_str,
                lambda: settings.lambda_spec.as_str(),
                lambda_value: lambda,
                epsilon,
                ti_nodes,
                steps: settings.cfg.steps,
                burnin: settings.cfg.burn_in,
                thin: settings.cfg.thin,
                chains: settings.cfg.chains,
                seed: settings.cfg.seed,
                n_mc,
                anneal: settings.cfg.anneal_burn_in,
            },
            log_z: ti.log_z,
            log_z_std_error: ti.std_error,
            report,
        };
        write_text(&out, &serde_json::to_string_pretty(&output)?)?;
        println!("report written to {}", out.display());
    }
    Ok(0)
}

// --- select ---

#[derive(Args, Debug, Default)]
pub struct SelectArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Semicolon-separated candidate specs, e.g. "2,3,2,4;2,3,3,6"
    #[arg(long)]
    pub grid: Option<String>,
    /// auto-slow (√n), auto-fast (2n/5), or a number
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub ti_nodes: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub anneal: Option<bool>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct SelectFile {
    data: Option<PathBuf>,
    grid: Option<String>,
    lambda: Option<String>,
    ti_nodes: Option<usize>,
    steps: Option<usize>,
    burnin: Option<usize>,
    thin: Option<usize>,
    seed: Option<u64>,
    anneal: Option<bool>,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SelectResolved {
    data: String,
    grid: String,
    lambda: String,
    lambda_value: f64,
    ti_nodes: usize,
    steps: usize,
    burnin: usize,
    thin: usize,
    seed: u64,
    anneal: bool,
}

#[derive(Serialize)]
struct SelectOutput {
    schema_version: u32,
    command: String,
    config: SelectResolved,
    result: SelectionResult,
}

fn cmd_select(args: &SelectArgs) -> Result<i32> {
    let file: SelectFile = load_file_cfg(&args.config)?;
    let data_path = require(merge(&args.data, &file.data), "--data")?;
    let grid_str = require(merge(&args.grid, &file.grid), "--grid")?;
    let candidates = parse_grid(&grid_str)?;
    if candidates.is_empty() {
        return Err(Error::Config("candidate grid is empty".into()));
    }
    let ti_nodes = merge_or(&args.ti_nodes, &file.ti_nodes, 6);
    let data = Dataset::load_csv(&data_path)?;
    for c in &candidates {
        if c.input_dim != data.dim() {
            return Err(Error::DimensionMismatch(format!(
                "candidate {} has input dim {}, data has {}",
                arch_spec(c),
                c.input_dim,
                data.dim()
            )));
        }
    }
    let settings = chain_settings(
        ChainOpts {
            lambda: merge(&args.lambda, &file.lambda),
            steps: merge(&args.steps, &file.steps),
            burnin: merge(&args.burnin, &file.burnin),
            thin: merge(&args.thin, &file.thin),
            seed: merge(&args.seed, &file.seed),
            anneal: merge(&args.anneal, &file.anneal),
            ..ChainOpts::default()
        },
        ChainDefaults {
            steps: 2_000,
            burnin: 800,
            thin: 4,
            anneal: true,
        },
        data.len(),
    )?;
    let grid = CandidateGrid {
        candidates,
        lambda: settings.cfg.lambda,
        ti_grid: ti_nodes,
        chain: settings.cfg.clone(),
    };
    let result = select_architecture(&grid, &data)?;
    println!(
        "{:<20} {:>14} {:>12} {:>9}",
        "candidate", "objective", "std error", "status"
    );
    for (i, score) in result.scores.iter().enumerate() {
        let status = if score.rejected {
            "rejected"
        } else if i == result.best {
            "best"
        } else {
            ""
        };
        let objective = if score.rejected {
            "-".to_string()
        } else {
            format!("{:.6}", score.objective)
        };
        println!(
            "{:<20} {:>14} {:>12.3e} {:>9}",
            arch_spec(&score.arch),
            objective,
            score.std_error,
            status
        );
    }
    let best = result.best_score();
    println!("selected: {}", arch_spec(&best.arch));
    if let Some(out) = merge(&args.out, &file.out) {
        let output = SelectOutput {
            schema_version: SCHEMA_VERSION,
            command: "select".into(),
            config: SelectResolved {
                data: data_path.display().to_string(),
                grid: grid_str,
                lambda: settings.lambda_spec.as_str(),
                lambda_value: settings.cfg.lambda,
                ti_nodes,
                steps: settings.cfg.steps,
                burnin: settings.cfg.burn_in,
                thin: settings.cfg.thin,
                seed: settings.cfg.seed,
                anneal: settings.cfg.anneal_burn_in,
            },
            result,
        };
        write_text(&out, &serde_json::to_string_pretty(&output)?)?;
        println!("report written to {}", out.display());
    }
    Ok(0)
}

// --- rate-exp ---

#[derive(Args, Debug, Default)]
pub struct RateExpArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Architecture d,L,D,S[,C_B] (also the planted teacher's shape)
    #[arg(long)]
    pub arch: Option<String>,
    /// Comma-separated sample sizes, e.g. "100,200,400,800,1600"
    #[arg(long)]
    pub n_grid: Option<String>,
    /// Repetitions per grid point
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub test_points: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
    #[arg(long)]
    pub thin: Option<usize>,
    #[arg(long)]
    pub eval_draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct RateExpFile {
    arch: Option<String>,
    n_grid: Option<String>,
    seeds: Option<usize>,
    test_points: Option<usize>,
    steps: Option<usize>,
    burnin: Option<usize>,
    thin: Option<usize>,
    eval_draws: Option<usize>,
    seed: Option<u64>,
    out_csv: Option<PathBuf>,
    out_json: Option<PathBuf>,
}

#[derive(Serialize)]
struct RateExpOutput {
    schema_version: u32,
    command: String,
    report: RateReport,
}

fn cmd_rate_exp(args: &RateExpArgs) -> Result<i32> {
    let file: RateExpFile = load_file_cfg(&args.config)?;
    let arch = parse_arch(&require(merge(&args.arch, &file.arch), "--arch")?)?;
    let mut cfg = RateExpConfig::new(arch);
    if let Some(grid) = merge(&args.n_grid, &file.n_grid) {
        cfg.n_grid = parse_n_grid(&grid)?;
    }
    if let Some(v) = merge(&args.seeds, &file.seeds) {
        cfg.seeds = v;
    }
    if let Some(v) = merge(&args.test_points, &file.test_points) {
        cfg.test_points = v;
    }
    if let Some(v) = merge(&args.steps, &file.steps) {
        cfg.steps = v;
    }
    if let Some(v) = merge(&args.burnin, &file.burnin) {
        cfg.burn_in = v;
    }
    if let Some(v) = merge(&args.thin, &file.thin) {
        cfg.thin = v;
    }
    if let Some(v) = merge(&args.eval_draws, &file.eval_draws) {
        cfg.eval_draws = v;
    }
    cfg.base_seed = merge_or(&args.seed, &file.seed, 0);
    let teacher = planted_teacher(&cfg.arch, 0.0)?;
    let report = rate_experiment(&cfg, &teacher)?;
    println!(
        "{:>6} {:>10} {:>16} {:>14}",
        "n", "lambda", "median error", "theory"
    );
    for row in &report.rows {
        println!(
            "{:>6} {:>10} {:>16.6} {:>14.6}",
            row.n, row.lambda, row.median_error, row.theory_curve
        );
    }
    println!("log-log slope = {:.4}", report.slope);
    if let Some(out) = merge(&args.out_csv, &file.out_csv) {
        write_text(&out, &report.to_csv_string())?;
        println!("csv written to {}", out.display());
    }
    if let Some(out) = merge(&args.out_json, &file.out_json) {
        let output = RateExpOutput {
            schema_version: SCHEMA_VERSION,
            command: "rate-exp".into(),
            report: report.clone(),
        };
        write_text(&out, &serde_json::to_string_pretty(&output)?)?;
        println!("report written to {}", out.display());
    }
    if report.passed {
        Ok(0)
    } else {
        eprintln!("rate-decay assertion failed: slope = {:.4}", report.slope);
        Ok(2)
    }
}

// --- verify ---

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scorecard JSON path (optional)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct VerifyFile {
    seed: Option<u64>,
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    command: String,
    battery: Battery,
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let file: VerifyFile = load_file_cfg(&args.config)?;
    let seed = merge_or(&args.seed, &file.seed, 0);
    let battery = run_battery(seed)?;
    println!(
        "{:<28} {:>14} {:>14} {:>6}",
        "check", "statistic", "bound", "result"
    );
    for check in &battery.checks {
        println!(
            "{:<28} {:>14.6e} {:>14.6e} {:>6}",
            check.name,
            check.statistic,
            check.bound,
            if check.passed { "pass" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} checks passed",
        battery.checks.iter().filter(|c| c.passed).count(),
        battery.checks.len()
    );
    if let Some(out) = merge(&args.out, &file.out) {
        let output = VerifyOutput {
            schema_version: SCHEMA_VERSION,
            command: "verify".into(),
            battery: battery.clone(),
        };
        write_text(&out, &serde_json::to_string_pretty(&output)?)?;
        println!("scorecard written to {}", out.display());
    }
    if battery.all_passed {
        Ok(0)
    } else {
        eprintln!("lemma verification failed");
        Ok(2)
    }
}
