use rbvar_core::liouville::LinearMap;
use rbvar_core::rng::auxiliary_rng;
use rbvar_core::stats::{
    choi_diamond_sandwich, diamond_bounds_from_r, nonunital_check, qubit_variance_bound,
    qudit_variance_bound,
};
use serde_json::{json, Value};

use super::NOISE_STREAM;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::noise::NoiseSpec;
use crate::output::{json_document, Artifacts};

/// Fidelities, diamond-distance brackets and, for the lengths in `--m`,
/// variance bounds of the channel named by `--noise`.
pub fn cmd_bounds(cfg: &RunConfig) -> CliResult<Artifacts> {
    let c = NoiseSpec::parse(cfg.noise_spec()?)?.build(&mut auxiliary_rng(cfg.seed, NOISE_STREAM))?;
    let report = c.validate();
    if !report.is_valid() {
        return Err(CliError::Physicality(format!("{report:?}")));
    }
    let d = c.dim();
    // Rounding can leave r a few ulps below zero for the identity.
    let r = c.infidelity().max(0.0);
    let (from_r_lower, from_r_upper) = diamond_bounds_from_r(r, d)?;
    let delta = c.as_map().sub(&LinearMap::identity(d))?;
    let (choi_lower, choi_upper) = choi_diamond_sandwich(&delta)?;
    let mut result = json!({
        "dim": d,
        "f": c.average_fidelity_f(),
        "average_gate_fidelity": c.average_gate_fidelity(),
        "r": r,
        "unital": c.is_unital(1e-12),
        "entanglement_infidelity": 1.0 - c.choi_fidelity(),
        "diamond_distance_from_r": {"lower": from_r_lower, "upper": from_r_upper},
        "diamond_distance_from_choi": {"lower": 0.5 * choi_lower, "upper": 0.5 * choi_upper},
        "choi_trace_norm": {"lower": choi_lower, "upper": choi_upper},
    });
    result["nonunital_check"] = if d == 2 && r < 1.0 / 3.0 {
        json!(nonunital_check(&c)?)
    } else {
        Value::Null
    };
    if let Some(lengths) = &cfg.m {
        let rows: Vec<Value> = lengths
            .0
            .iter()
            .map(|&m| {
                json!({
                    "m": m,
                    "qubit": (d == 2).then(|| qubit_variance_bound(m, r, cfg.delta_spam)),
                    "qudit": qudit_variance_bound(m, r, d),
                })
            })
            .collect();
        result["variance_bounds"] = Value::Array(rows);
    }
    Ok(Artifacts {
        primary: json_document("bounds", cfg, result)?,
        summary: None,
        warnings: Vec::new(),
    })
}
