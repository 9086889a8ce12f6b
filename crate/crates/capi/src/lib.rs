//! C ABI for the slabnet library.
//!
//! Conventions:
//! - Every fallible call returns a [`SlabnetStatus`]; `SLABNET_STATUS_OK` is 0.
//! - On failure, a thread-local message is set; read it with
//!   [`slabnet_last_error`]. The pointer stays valid until the next failing
//!   call on the same thread.
//! - Handles (`SlabnetDataset`, `SlabnetChain`, `SlabnetCertificate`) are
//!   opaque; create them through the constructors here and release them with
//!   the matching `_free` function. Passing a handle to any function after
//!   freeing it is undefined behaviour, as in any C API.
//! - Strings returned through `char **out` are NUL-terminated, UTF-8, and
//!   owned by the caller; release them with [`slabnet_string_free`].
//! - All functions are safe to call from multiple threads as long as each
//!   handle is used by one thread at a time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use slabnet::bounds::{empirical_certificate, BoundReport, CertPosterior};
use slabnet::network::Architecture;
use slabnet::risk::Dataset;
use slabnet::sampler::{run_chain, thermo_log_z, ChainConfig, ChainResult, Slab, TiEstimate};
use slabnet::verify::run_battery;
use slabnet::Error;

/// Result code for every fallible call in this API.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabnetStatus {
    /// Success.
    SlabnetStatusOk = 0,
    /// A required pointer argument was NULL.
    SlabnetStatusNullPointer = 1,
    /// Invalid configuration or input (bad architecture, malformed data, ...).
    SlabnetStatusInvalidArgument = 2,
    /// File or serialization failure.
    SlabnetStatusIo = 3,
    /// A statistical procedure failed to produce a usable estimate.
    SlabnetStatusEstimation = 4,
    /// A string argument was not valid UTF-8.
    SlabnetStatusUtf8 = 5,
    /// Internal panic; the message holds the payload when available.
    SlabnetStatusPanic = 6,
}

use SlabnetStatus::*;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SlabnetStatus {
    match err {
        Error::Config(_)
        | Error::Input(_)
        | Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch(_)
        | Error::Construction(_)
        | Error::Parse(_) => SlabnetStatusInvalidArgument,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => SlabnetStatusIo,
        Error::Generation(_) | Error::Estimation(_) | Error::Selection(_) | Error::Numerical(_) => {
            SlabnetStatusEstimation
        }
    }
}

fn fail(err: Error) -> SlabnetStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Runs `f` with panics converted to `SlabnetStatusPanic`.
fn guarded<F: FnOnce() -> SlabnetStatus>(f: F) -> SlabnetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in slabnet".into());
            set_error(&msg);
            SlabnetStatusPanic
        }
    }
}

macro_rules! require {
    ($ptr:expr, $name:literal) => {
        if $ptr.is_null() {
            set_error(concat!($name, " must not be NULL"));
            return SlabnetStatusNullPointer;
        }
    };
}

fn c_str<'a>(ptr: *const c_char) -> Result<&'a str, SlabnetStatus> {
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        SlabnetStatusUtf8
    })
}

fn out_string(out: *mut *mut c_char, s: String) -> SlabnetStatus {
    match CString::new(s.replace('\0', " ")) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SlabnetStatusOk
        }
        Err(_) => {
            set_error("output string could not be NUL-terminated");
            SlabnetStatusPanic
        }
    }
}

/// Network shape: input dimension, depth, hidden width, sparsity (number of
/// active coefficients), and the coefficient magnitude bound.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlabnetArch {
    pub input_dim: u32,
    /// Number of layers excluding the input; at least 3.
    pub depth: u32,
    pub width: u32,
    pub sparsity: u32,
    /// Magnitude bound `C_B >= 2`.
    pub weight_bound: f64,
}

impl SlabnetArch {
    fn build(&self) -> Result<Architecture, Error> {
        Architecture::new(
            self.input_dim as usize,
            self.depth as usize,
            self.width as usize,
            self.sparsity as usize,
            self.weight_bound,
        )
    }
}

/// Metropolis–Hastings sampler settings for the Gibbs posterior at inverse
/// temperature `lambda`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SlabnetChainOpts {
    /// Inverse temperature; must be >= 0.
    pub lambda: f64,
    /// Total steps per chain.
    pub steps: u64,
    /// Discarded prefix; must be < steps.
    pub burn_in: u64,
    /// Keep-every stride over post-burn-in steps; 0 is treated as 1.
    pub thin: u64,
    /// Weight-move half-width; <= 0 selects the default `C_B / 10`.
    pub step_size: f64,
    /// Probability of a support-swap move, in [0, 1).
    pub swap_prob: f64,
    pub seed: u64,
    /// Independent chains merged in index order; 0 is treated as 1.
    pub chains: u32,
    /// Nonzero ramps the inverse temperature from 0 to lambda over burn-in.
    pub anneal_burn_in: u8,
    /// 0 samples the continuous slab; k >= 2 restricts coefficients to a
    /// k-point grid (mainly for validation against exact enumeration).
    pub quantized_levels: u32,
}

impl SlabnetChainOpts {
    fn build(&self) -> Result<ChainConfig, Error> {
        let mut cfg = ChainConfig::new(self.lambda, self.seed);
        cfg.steps = self.steps as usize;
        cfg.burn_in = self.burn_in as usize;
        cfg.thin = (self.thin.max(1)) as usize;
        if self.step_size > 0.0 {
            cfg.step_size = Some(self.step_size);
        }
        cfg.swap_prob = self.swap_prob;
        cfg.chains = self.chains.max(1);
        cfg.anneal_burn_in = self.anneal_burn_in != 0;
        if self.quantized_levels > 0 {
            if self.quantized_levels < 2 {
                return Err(Error::Config(
                    "quantized_levels must be 0 (continuous) or at least 2".into(),
                ));
            }
            cfg.slab = Slab::Quantized {
                levels: self.quantized_levels as usize,
            };
        }
        Ok(cfg)
    }
}

/// Opaque training/test set handle.
pub struct SlabnetDataset {
    inner: Dataset,
}

/// Opaque sampler-output handle: kept posterior draws plus summaries.
pub struct SlabnetChain {
    inner: ChainResult,
}

/// Opaque certificate handle: the itemized PAC-Bayes risk bound.
pub struct SlabnetCertificate {
    report: BoundReport,
    ti: TiEstimate,
}

/// Returns the library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn slabnet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns the message of the last error on this thread, or an empty string.
/// The pointer is invalidated by the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn slabnet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned through a `char **out` parameter. NULL is ignored.
#[no_mangle]
pub extern "C" fn slabnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds a dataset from `n` rows of `dim` features (row-major, entries in
/// [-1, 1]) and `n` labels in {-1, +1}.
#[no_mangle]
pub extern "C" fn slabnet_dataset_new(
    dim: u32,
    n: u64,
    xs: *const f64,
    ys: *const i8,
    out: *mut *mut SlabnetDataset,
) -> SlabnetStatus {
    require!(out, "out");
    require!(xs, "xs");
    require!(ys, "ys");
    guarded(|| {
        let d = dim as usize;
        let n = n as usize;
        let xs = unsafe { std::slice::from_raw_parts(xs, n * d) }.to_vec();
        let ys = unsafe { std::slice::from_raw_parts(ys, n) }.to_vec();
        match Dataset::new(d, xs, ys) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SlabnetDataset { inner })) };
                SlabnetStatusOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Loads a dataset from a CSV file with header `x1,...,xd,y`.
#[no_mangle]
pub extern "C" fn slabnet_dataset_load_csv(
    path: *const c_char,
    out: *mut *mut SlabnetDataset,
) -> SlabnetStatus {
    require!(out, "out");
    require!(path, "path");
    guarded(|| {
        let path = match c_str(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match Dataset::load_csv(Path::new(path)) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SlabnetDataset { inner })) };
                SlabnetStatusOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of points in the dataset; 0 if the handle is NULL.
#[no_mangle]
pub extern "C" fn slabnet_dataset_len(ds: *const SlabnetDataset) -> u64 {
    if ds.is_null() {
        return 0;
    }
    unsafe { &*ds }.inner.len() as u64
}

/// Feature dimension of the dataset; 0 if the handle is NULL.
#[no_mangle]
pub extern "C" fn slabnet_dataset_dim(ds: *const SlabnetDataset) -> u32 {
    if ds.is_null() {
        return 0;
    }
    unsafe { &*ds }.inner.dim() as u32
}

/// Frees a dataset handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn slabnet_dataset_free(ds: *mut SlabnetDataset) {
    if !ds.is_null() {
        drop(unsafe { Box::from_raw(ds) });
    }
}

/// Samples the Gibbs posterior over sparse networks of shape `arch` on `ds`.
#[no_mangle]
pub extern "C" fn slabnet_sample(
    ds: *const SlabnetDataset,
    arch: SlabnetArch,
    opts: SlabnetChainOpts,
    out: *mut *mut SlabnetChain,
) -> SlabnetStatus {
    require!(out, "out");
    require!(ds, "ds");
    guarded(|| {
        let data = &unsafe { &*ds }.inner;
        let run = arch
            .build()
            .and_then(|a| opts.build().and_then(|cfg| run_chain(data, &a, &cfg)));
        match run {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(SlabnetChain { inner })) };
                SlabnetStatusOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of kept posterior draws; 0 if the handle is NULL.
#[no_mangle]
pub extern "C" fn slabnet_chain_num_draws(chain: *const SlabnetChain) -> u64 {
    if chain.is_null() {
        return 0;
    }
    unsafe { &*chain }.inner.draws.len() as u64
}

/// Posterior-mean empirical hinge risk; NaN if the handle is NULL.
#[no_mangle]
pub extern "C" fn slabnet_chain_mean_hinge(chain: *const SlabnetChain) -> f64 {
    if chain.is_null() {
        return f64::NAN;
    }
    unsafe { &*chain }.inner.mean_hinge
}

/// Fraction of accepted weight moves; NaN if the handle is NULL or no weight
/// move was proposed.
#[no_mangle]
pub extern "C" fn slabnet_chain_accept_rate(chain: *const SlabnetChain) -> f64 {
    if chain.is_null() {
        return f64::NAN;
    }
    let acc = &unsafe { &*chain }.inner.accept;
    if acc.weight_proposed == 0 {
        return f64::NAN;
    }
    acc.weight_accepted as f64 / acc.weight_proposed as f64
}

/// Copies the dense coefficient vector (length `T`, inactive entries zero) of
/// draw `idx` into `values`, which must hold `len >= T` doubles.
#[no_mangle]
pub extern "C" fn slabnet_chain_draw(
    chain: *const SlabnetChain,
    idx: u64,
    values: *mut f64,
    len: u64,
) -> SlabnetStatus {
    require!(chain, "chain");
    require!(values, "values");
    guarded(|| {
        let inner = &unsafe { &*chain }.inner;
        let Some(draw) = inner.draws.get(idx as usize) else {
            set_error(&format!(
                "draw index {} out of range ({} draws)",
                idx,
                inner.draws.len()
            ));
            return SlabnetStatusInvalidArgument;
        };
        let theta = draw.theta();
        if (len as usize) < theta.len() {
            set_error(&format!(
                "values buffer holds {} entries but T = {}",
                len,
                theta.len()
            ));
            return SlabnetStatusInvalidArgument;
        }
        unsafe { std::slice::from_raw_parts_mut(values, theta.len()) }.copy_from_slice(theta);
        SlabnetStatusOk
    })
}

/// Serializes the full chain result (config, draws, traces) to JSON.
#[no_mangle]
pub extern "C" fn slabnet_chain_to_json(
    chain: *const SlabnetChain,
    out: *mut *mut c_char,
) -> SlabnetStatus {
    require!(chain, "chain");
    require!(out, "out");
    guarded(|| out_string(out, unsafe { &*chain }.inner.to_json()))
}

/// Frees a chain handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn slabnet_chain_free(chain: *mut SlabnetChain) {
    if !chain.is_null() {
        drop(unsafe { Box::from_raw(chain) });
    }
}

/// Computes a fully numeric high-probability risk certificate for the Gibbs
/// posterior at `opts.lambda`: runs thermodynamic integration over
/// `ti_grid + 1` temperature nodes to estimate the partition function, then
/// assembles the itemized bound holding with probability `1 - epsilon`.
/// `n_mc` caps the posterior draws used for the risk term; `cert_seed` drives
/// only the certificate's own subsampling.
#[no_mangle]
pub extern "C" fn slabnet_certify(
    ds: *const SlabnetDataset,
    arch: SlabnetArch,
    opts: SlabnetChainOpts,
    ti_grid: u32,
    epsilon: f64,
    n_mc: u64,
    cert_seed: u64,
    out: *mut *mut SlabnetCertificate,
) -> SlabnetStatus {
    require!(out, "out");
    require!(ds, "ds");
    guarded(|| {
        let data = &unsafe { &*ds }.inner;
        let built = arch.build().and_then(|a| Ok((opts.build()?, a)));
        let (cfg, a) = match built {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let ti = match thermo_log_z(data, &a, opts.lambda, ti_grid as usize, &cfg) {
            Ok(ti) => ti,
            Err(e) => return fail(e),
        };
        let posterior = CertPosterior::Chain {
            result: &ti.top,
            ti: &ti,
        };
        match empirical_certificate(
            data,
            &posterior,
            opts.lambda,
            epsilon,
            n_mc as usize,
            cert_seed,
        ) {
            Ok(report) => {
                unsafe { *out = Box::into_raw(Box::new(SlabnetCertificate { report, ti })) };
                SlabnetStatusOk
            }
            Err(e) => fail(e),
        }
    })
}

/// The certificate's total bound on posterior-averaged misclassification
/// risk; NaN if the handle is NULL.
#[no_mangle]
pub extern "C" fn slabnet_certificate_total(cert: *const SlabnetCertificate) -> f64 {
    if cert.is_null() {
        return f64::NAN;
    }
    unsafe { &*cert }.report.total
}

/// The KL (complexity) estimate inside the certificate; NaN if NULL.
#[no_mangle]
pub extern "C" fn slabnet_certificate_kl(cert: *const SlabnetCertificate) -> f64 {
    if cert.is_null() {
        return f64::NAN;
    }
    unsafe { &*cert }.report.complexity_term
}

/// The thermodynamic estimate of `log Z(lambda)`; NaN if NULL.
#[no_mangle]
pub extern "C" fn slabnet_certificate_log_z(cert: *const SlabnetCertificate) -> f64 {
    if cert.is_null() {
        return f64::NAN;
    }
    unsafe { &*cert }.ti.log_z
}

/// Serializes the itemized certificate (terms, notes, totals) to JSON.
#[no_mangle]
pub extern "C" fn slabnet_certificate_to_json(
    cert: *const SlabnetCertificate,
    out: *mut *mut c_char,
) -> SlabnetStatus {
    require!(cert, "cert");
    require!(out, "out");
    guarded(|| match serde_json::to_string(&unsafe { &*cert }.report) {
        Ok(s) => out_string(out, s),
        Err(e) => fail(e.into()),
    })
}

/// Frees a certificate handle. NULL is ignored.
#[no_mangle]
pub extern "C" fn slabnet_certificate_free(cert: *mut SlabnetCertificate) {
    if !cert.is_null() {
        drop(unsafe { Box::from_raw(cert) });
    }
}

/// Runs the numerical verification battery (identity, concentration,
/// perturbation, and KL-bound checks). Writes 1 to `all_passed` when every
/// check holds, 0 otherwise; optionally returns the full JSON scorecard
/// through `json_out` (pass NULL to skip it).
#[no_mangle]
pub extern "C" fn slabnet_verify(
    seed: u64,
    all_passed: *mut u8,
    json_out: *mut *mut c_char,
) -> SlabnetStatus {
    require!(all_passed, "all_passed");
    guarded(|| match run_battery(seed) {
        Ok(battery) => {
            unsafe { *all_passed = battery.all_passed as u8 };
            if json_out.is_null() {
                return SlabnetStatusOk;
            }
            match serde_json::to_string(&battery) {
                Ok(s) => out_string(json_out, s),
                Err(e) => fail(e.into()),
            }
        }
        Err(e) => fail(e),
    })
}
