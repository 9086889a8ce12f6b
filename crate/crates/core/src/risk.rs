//! Empirical risks for the hinge surrogate and the 0-1 loss.
//!
//! The misclassification indicator is `1{y f(x) ≤ 0}` everywhere — ties count
//! as errors — which makes the domination `r_n^h ≥ r_n` exact at `f = 0`.

use std::path::Path;

use crate::network::{Activation, DenseNet, SparseParams};
use crate::{Error, Result};

/// Labeled sample: rows in `[-1,1]^d`, labels in `{-1,+1}`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    dim: usize,
    xs: Vec<f64>,
    ys: Vec<i8>,
}

impl Dataset {
    /// Builds a dataset from flat row-major features and labels.
    pub fn new(dim: usize, xs: Vec<f64>, ys: Vec<i8>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dataset dimension must be ≥ 1".into()));
        }
        if ys.is_empty() {
            return Err(Error::Config("dataset must contain at least one row".into()));
        }
        if xs.len() != dim * ys.len() {
            return Err(Error::DimensionMismatch(format!(
                "feature buffer has {} entries, expected n·d = {}·{}",
                xs.len(),
                ys.len(),
                dim
            )));
        }
        for (i, &v) in xs.iter().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::Input(format!(
                    "feature entry {} = {} outside [-1, 1]",
                    i, v
                )));
            }
        }
        for (i, &y) in ys.iter().enumerate() {
            if y != 1 && y != -1 {
                return Err(Error::Input(format!("label {} = {} not in {{-1,+1}}", i, y)));
            }
        }
        Ok(Dataset { dim, xs, ys })
    }

    pub fn from_rows(rows: &[(Vec<f64>, i8)]) -> Result<Self> {
        let dim = rows.first().map(|(x, _)| x.len()).unwrap_or(0);
        let mut xs = Vec::with_capacity(dim * rows.len());
        let mut ys = Vec::with_capacity(rows.len());
        for (x, y) in rows {
            if x.len() != dim {
                return Err(Error::DimensionMismatch(
                    "ragged feature rows".into(),
                ));
            }
            xs.extend_from_slice(x);
            ys.push(*y);
        }
        Dataset::new(dim, xs, ys)
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn y(&self, i: usize) -> i8 {
        self.ys[i]
    }

    /// Dataset restricted to the given row order/subset (used by tests).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut xs = Vec::with_capacity(order.len() * self.dim);
        let mut ys = Vec::with_capacity(order.len());
        for &i in order {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    total: self.len(),
                });
            }
            xs.extend_from_slice(self.x(i));
            ys.push(self.y(i));
        }
        Dataset::new(self.dim, xs, ys)
    }

    /// Serializes as CSV with header `x1,...,xd,y`.
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (1..=self.dim)
            .map(|j| format!("x{}", j))
            .chain(std::iter::once("y".to_string()))
            .collect();
        w.write_record(&header).expect("csv header");
        for i in 0..self.len() {
            let mut rec: Vec<String> = self.x(i).iter().map(|v| v.to_string()).collect();
            rec.push(self.y(i).to_string());
            w.write_record(&rec).expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
    }

    /// Parses the CSV format, validating the box and label constraints.
    pub fn from_csv_str(s: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let header = r.headers()?.clone();
        if header.len() < 2 || header.iter().last() != Some("y") {
            return Err(Error::Parse(
                "expected CSV header x1,...,xd,y".into(),
            ));
        }
        let dim = header.len() - 1;
        for (j, name) in header.iter().take(dim).enumerate() {
            if name != format!("x{}", j + 1) {
                return Err(Error::Parse(format!(
                    "unexpected CSV column {:?}, expected x{}",
                    name,
                    j + 1
                )));
            }
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "row has {} fields, expected {}",
                    rec.len(),
                    dim + 1
                )));
            }
            for field in rec.iter().take(dim) {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad feature value {:?}", field)))?;
                xs.push(v);
            }
            let yv: f64 = rec[dim]
                .parse()
                .map_err(|_| Error::Parse(format!("bad label {:?}", &rec[dim])))?;
            let y = if yv == 1.0 {
                1
            } else if yv == -1.0 {
                -1
            } else {
                return Err(Error::Input(format!("label {} not in {{-1,+1}}", yv)));
            };
            ys.push(y);
        }
        Dataset::new(dim, xs, ys)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path)?;
        Dataset::from_csv_str(&s)
    }
}

fn check_compat(params: &SparseParams, data: &Dataset) -> Result<()> {
    if params.arch().input_dim != data.dim() {
        return Err(Error::DimensionMismatch(format!(
            "architecture expects d = {}, dataset has d = {}",
            params.arch().input_dim,
            data.dim()
        )));
    }
    Ok(())
}

/// Folds `f_θ` over the dataset rows in index order.
fn fold_outputs<F: FnMut(f64, i8)>(
    params: &SparseParams,
    data: &Dataset,
    activation: Activation,
    mut visit: F,
) {
    let net = DenseNet::from_params(params);
    let mut cur = Vec::with_capacity(net.scratch_len());
    let mut next = Vec::with_capacity(net.scratch_len());
    for i in 0..data.len() {
        let f = net.eval_with(data.x(i), activation, &mut cur, &mut next);
        visit(f, data.y(i));
    }
}

/// Empirical hinge risk `r_n^h(θ) = (1/n) Σ_i (1 - y_i f_θ(x_i))_+`.
pub fn hinge_risk(params: &SparseParams, data: &Dataset) -> Result<f64> {
    hinge_risk_with(params, data, Activation::Relu)
}

pub fn hinge_risk_with(
    params: &SparseParams,
    data: &Dataset,
    activation: Activation,
) -> Result<f64> {
    check_compat(params, data)?;
    let mut sum = 0.0;
    fold_outputs(params, data, activation, |f, y| {
        let margin = 1.0 - f64::from(y) * f;
        if margin > 0.0 {
            sum += margin;
        }
    });
    Ok(sum / data.len() as f64)
}

/// Empirical 0-1 risk `r_n(θ) = (1/n) Σ_i 1{y_i f_θ(x_i) ≤ 0}`.
pub fn zero_one_risk(params: &SparseParams, data: &Dataset) -> Result<f64> {
    zero_one_risk_with(params, data, Activation::Relu)
}

pub fn zero_one_risk_with(
    params: &SparseParams,
    data: &Dataset,
    activation: Activation,
) -> Result<f64> {
    check_compat(params, data)?;
    let mut errors = 0usize;
    fold_outputs(params, data, activation, |f, y| {
        if f64::from(y) * f <= 0.0 {
            errors += 1;
        }
    });
    Ok(errors as f64 / data.len() as f64)
}

/// Held-out misclassification estimate with its binomial standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MisclassEstimate {
    pub rate: f64,
    pub std_error: f64,
    pub n: usize,
}

/// Estimates `R(η̂) = P(Y ≠ η̂(x))` on a held-out test set, where `η̂` is the
/// plug-in classifier with the `sign(0) → -1` tie-break.
///
/// This differs from [`zero_one_risk`] only at ties: a point with `f = 0` and
/// `y = -1` is a correct prediction here but an error under `1{y f ≤ 0}`.
/// The test set being disjoint from training data is the caller's
/// responsibility.
pub fn test_misclassification(params: &SparseParams, test: &Dataset) -> Result<MisclassEstimate> {
    check_compat(params, test)?;
    let mut errors = 0usize;
    fold_outputs(params, test, Activation::Relu, |f, y| {
        let pred: i8 = if f > 0.0 { 1 } else { -1 };
        if pred != y {
            errors += 1;
        }
    });
    let n = test.len();
    let rate = errors as f64 / n as f64;
    let std_error = (rate * (1.0 - rate) / n as f64).sqrt();
    Ok(MisclassEstimate {
        rate,
        std_error,
        n,
    })
}
