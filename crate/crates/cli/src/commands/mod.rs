mod bounds;
mod design;
mod fit;
mod scan;
mod simulate;

pub use bounds::cmd_bounds;
pub use design::cmd_design_k;
pub use fit::cmd_fit;
pub use scan::cmd_variance_scan;
pub use simulate::cmd_simulate;

use rayon::prelude::*;
use rbvar_core::clifford::GateSet;
use rbvar_core::liouville::{EffectVector, StateVector};
use rbvar_core::rbsim::{sample_survival, summarize, McRecord, NoiseSchedule, RbExperiment};

use crate::config::{KSpec, RunConfig};
use crate::error::{CliError, CliResult};

/// Auxiliary stream for the noise channel named by `--noise`.
const NOISE_STREAM: u32 = 0;
/// Auxiliary stream for the second channel of a two-phase schedule.
const NOISE_AFTER_STREAM: u32 = 1;
/// Auxiliary stream for gate-dependent perturbations.
const PERTURBATION_STREAM: u32 = 2;

fn require_qubit(d: usize) -> CliResult<()> {
    if d != 2 {
        return Err(CliError::Config(format!(
            "RB runs use the single-qubit Clifford group; channel dimension is {d}"
        )));
    }
    Ok(())
}

/// Experiment with preparation at `cfg.prep_bloch` and measurement of `|0><0|`.
fn experiment(cfg: &RunConfig, lengths: &[usize], counts: Vec<usize>) -> CliResult<RbExperiment> {
    let [x, y, z] = cfg.prep_bloch;
    let prep = StateVector::qubit_bloch(x, y, z).map_err(|e| CliError::Physicality(e.to_string()))?;
    let effect = EffectVector::basis_projector(2, 0)?;
    Ok(RbExperiment::new(
        prep,
        effect,
        lengths.to_vec(),
        counts,
        cfg.shots.as_option(),
        cfg.seed,
    )?)
}

fn counts(k: Option<KSpec>, lengths: &[usize]) -> CliResult<Vec<usize>> {
    match k.ok_or_else(|| CliError::Config("sequence count (--k) is required".into()))? {
        KSpec::Fixed(k) => Ok(vec![k; lengths.len()]),
        KSpec::Quadratic(c) => Ok(rbvar_core::rbsim::quadratic_counts(lengths, c)?),
    }
}

/// Monte Carlo over all lengths with the sequences of each length drawn in
/// parallel. Every sequence has its own keyed stream, so the result does not
/// depend on the number of workers.
pub fn parallel_monte_carlo(
    exp: &RbExperiment,
    group: &GateSet,
    schedule: &NoiseSchedule,
) -> CliResult<Vec<McRecord>> {
    exp.lengths()
        .iter()
        .zip(exp.counts())
        .map(|(&m, &k)| {
            schedule.check_length(m)?;
            let values = (0..k)
                .into_par_iter()
                .map(|i| sample_survival(exp, group, schedule, m, i))
                .collect::<rbvar_core::Result<Vec<f64>>>()?;
            Ok(summarize(m, &values))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbvar_core::clifford::build_clifford_1q;
    use rbvar_core::noisegen::amplitude_damping;
    use rbvar_core::rbsim::monte_carlo;

    #[test]
    fn parallel_matches_serial() {
        let group = build_clifford_1q().unwrap();
        let schedule = NoiseSchedule::constant(amplitude_damping(0.95).unwrap());
        let cfg = RunConfig {
            shots: crate::config::Shots::Count(200),
            seed: 11,
            ..Default::default()
        };
        let exp = experiment(&cfg, &[1, 5, 20], vec![7, 30, 3]).unwrap();
        let par = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| parallel_monte_carlo(&exp, &group, &schedule).unwrap());
        assert_eq!(par, monte_carlo(&exp, &group, &schedule).unwrap());
    }
}
