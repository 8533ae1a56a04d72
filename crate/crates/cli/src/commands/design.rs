use rbvar_core::stats::{
    hoeffding_epsilon, qubit_variance_bound, required_sequences, ConfidenceSpec,
};
use serde_json::json;

use crate::config::{KSpec, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{json_document, Artifacts};

/// Sequences needed at one length. The variance is `cfg.variance` when given,
/// otherwise the qubit bound at `(m, r, delta_spam)`. With a fixed `--k`, the
/// precision reached with that many sequences is reported as well.
pub fn cmd_design_k(cfg: &RunConfig) -> CliResult<Artifacts> {
    let m = match cfg.lengths()? {
        [m] => *m,
        more => {
            return Err(CliError::Config(format!(
                "design-k takes a single length, got {}",
                more.len()
            )))
        }
    };
    let variance = match (cfg.variance, cfg.r) {
        (Some(v), _) => v,
        (None, Some(r)) => qubit_variance_bound(m, r, cfg.delta_spam),
        (None, None) => {
            return Err(CliError::Config("design-k needs r or variance".into()));
        }
    };
    let spec = ConfidenceSpec::new(cfg.epsilon, cfg.delta, variance)?;
    let size = required_sequences(&spec)?;
    let mut result = json!({
        "m": m,
        "variance": variance,
        "epsilon": cfg.epsilon,
        "delta": cfg.delta,
        "k": size.k,
        "k_real": size.k_real,
        "k_ceil": size.k_ceil,
    });
    if let Some(KSpec::Fixed(k)) = cfg.k {
        result["epsilon_at_k"] = json!({
            "k": k,
            "epsilon": hoeffding_epsilon(k as u64, variance, cfg.delta)?,
        });
    }
    Ok(Artifacts {
        primary: json_document("design-k", cfg, result)?,
        summary: None,
        warnings: Vec::new(),
    })
}
