use std::path::Path;

use rbvar_core::stats::{
    fit_decay, hoeffding_epsilon, non_markov_flag, timedep_ratio, DecayPoint, RatioInput,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{json_document, Artifacts};

/// Text reported when a window's estimated product exceeds 1 beyond its uncertainty.
pub const NON_MARKOV_INDICATOR: &str = "non-Markovian indicator";

/// Smallest variance handed to the Hoeffding inversion, so that a sample
/// variance of zero still yields a finite precision.
const VARIANCE_FLOOR: f64 = 1e-300;

/// One row of the input data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataRow {
    pub m: usize,
    pub mean: f64,
    pub variance: Option<f64>,
    pub k: Option<usize>,
    pub weight: Option<f64>,
}

/// Reads `m` and a mean column (`mc_mean`, `mean` or `value`), plus optional
/// `mc_variance`/`variance`, `k` and `weight`. Lines starting with `#` are skipped.
pub fn read_data(path: &Path) -> CliResult<Vec<DataRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(std::fs::File::open(path)?);
    let headers = rdr.headers()?.clone();
    let find = |names: &[&str]| names.iter().find_map(|n| headers.iter().position(|h| h == *n));
    let m_col = find(&["m"]).ok_or_else(|| CliError::Config("data has no m column".into()))?;
    let mean_col = find(&["mc_mean", "mean", "value"])
        .ok_or_else(|| CliError::Config("data has no mean column".into()))?;
    let var_col = find(&["mc_variance", "variance"]);
    let k_col = find(&["k"]);
    let w_col = find(&["weight"]);
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let bad = |what: &str, v: &str| CliError::Config(format!("data row {}: bad {what} {v:?}", line + 1));
        let opt_f = |c: Option<usize>, what: &str| -> CliResult<Option<f64>> {
            match c.map(field) {
                None | Some("") => Ok(None),
                Some(v) => v.parse().map(Some).map_err(|_| bad(what, v)),
            }
        };
        rows.push(DataRow {
            m: field(m_col).parse().map_err(|_| bad("m", field(m_col)))?,
            mean: field(mean_col).parse().map_err(|_| bad("mean", field(mean_col)))?,
            variance: opt_f(var_col, "variance")?,
            k: match k_col.map(field) {
                None | Some("") => None,
                Some(v) => Some(v.parse().map_err(|_| bad("k", v))?),
            },
            weight: opt_f(w_col, "weight")?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Config(format!("{} holds no data rows", path.display())));
    }
    Ok(rows)
}

/// Explicit weights if given; otherwise `k / variance` when every row has a
/// positive variance and a count; otherwise uniform.
fn weights(rows: &[DataRow]) -> Vec<f64> {
    if rows.iter().all(|r| r.weight.is_some()) {
        return rows.iter().map(|r| r.weight.unwrap_or(1.0)).collect();
    }
    let inverse: Option<Vec<f64>> = rows
        .iter()
        .map(|r| match (r.variance, r.k) {
            (Some(v), Some(k)) if v > 0.0 && k > 0 => Some(k as f64 / v),
            _ => None,
        })
        .collect();
    inverse.unwrap_or_else(|| vec![1.0; rows.len()])
}

fn row_at(rows: &[DataRow], m: usize) -> CliResult<&DataRow> {
    rows.iter()
        .find(|r| r.m == m)
        .ok_or_else(|| CliError::Config(format!("window length {m} is not in the data")))
}

/// Hoeffding precision of a row's mean at confidence `1 - delta`.
fn precision(row: &DataRow, delta: f64) -> CliResult<f64> {
    match (row.variance, row.k) {
        (Some(v), Some(k)) => Ok(hoeffding_epsilon(k as u64, v.max(VARIANCE_FLOOR), delta)?),
        _ => Err(CliError::Config(format!(
            "windowed fit needs variance and k at m = {}",
            row.m
        ))),
    }
}

/// Fits `A + B f^m` and, for each window `[m1, m2]`, estimates the product of
/// the step fidelities between the two lengths.
pub fn cmd_fit(cfg: &RunConfig) -> CliResult<Artifacts> {
    let path = cfg
        .data
        .as_deref()
        .ok_or_else(|| CliError::Config("fit needs a data file (--data)".into()))?;
    let rows = read_data(path)?;
    let points: Vec<DecayPoint> = rows
        .iter()
        .zip(weights(&rows))
        .map(|(r, w)| DecayPoint {
            m: r.m,
            value: r.mean,
            weight: w,
        })
        .collect();
    let fit = fit_decay(&points)?;
    let d = cfg.dim;
    let mut result = json!({
        "fit": fit,
        "r": fit.infidelity(d),
        "sigma_r": fit.sigma_infidelity(d),
    });

    if !cfg.windows.is_empty() {
        let a_hat = cfg.a_hat.unwrap_or(fit.a);
        let delta_a = cfg
            .delta_a
            .unwrap_or(if fit.sigma_a.is_finite() { fit.sigma_a } else { 0.0 });
        let mut estimates = Vec::new();
        let mut windows = Vec::new();
        for &[m1, m2] in &cfg.windows {
            let (r1, r2) = (row_at(&rows, m1)?, row_at(&rows, m2)?);
            let input = RatioInput {
                m1,
                m2,
                f1: r1.mean,
                f2: r2.mean,
                a_hat,
                delta1: precision(r1, cfg.delta)?,
                delta2: precision(r2, cfg.delta)?,
                delta_a,
            };
            let est = timedep_ratio(&input)?;
            let mean_f = est.mean_f();
            windows.push(json!({
                "m1": m1,
                "m2": m2,
                "ratio": est.ratio,
                "uncertainty": est.uncertainty,
                "mean_f": mean_f,
                "mean_r": mean_f.map(|f| (d as f64 - 1.0) * (1.0 - f) / d as f64),
                "delta1": input.delta1,
                "delta2": input.delta2,
            }));
            estimates.push(est);
        }
        let report = non_markov_flag(&estimates);
        result["a_hat"] = json!(a_hat);
        result["delta_a"] = json!(delta_a);
        result["windows"] = Value::Array(windows);
        result["non_markov"] = json!(report);
        if report.any {
            result["indicator"] = json!(NON_MARKOV_INDICATOR);
        }
    }
    Ok(Artifacts {
        primary: json_document("fit", cfg, result)?,
        summary: None,
        warnings: Vec::new(),
    })
}
