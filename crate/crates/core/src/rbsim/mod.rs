//! RB sequences, survival probabilities and moments of the RB distribution.
//!
//! A sequence of length `m` applies the inversion gate `g_0` first and then
//! `g_1, ..., g_m`, each preceded by its noise:
//!
//! `S = g_m Lambda_m ... g_1 Lambda_1 g_0 Lambda_0`.
//!
//! `Lambda_0` is absorbed into the preparation, so [`RbExperiment::prep`] is the
//! already-noisy state and schedules only describe `t >= 1`.

mod curve;
mod exact;
mod montecarlo;
mod schedule;
mod sequence;

use alloc::format;
use alloc::vec::Vec;

pub use curve::{variance_curve, CurveOptions, CurveRecord, VarianceCurve};
pub use exact::{
    asymptotic_variance, enumerate_oracle, exact_mean, exact_mean_formula, exact_moments,
    exact_variance, ExactMoments, MomentPropagator, ORACLE_MAX_SEQUENCES,
};
pub use montecarlo::{monte_carlo, sample_survival, summarize, McRecord};
pub use schedule::{NoiseMode, NoiseSchedule};
pub use sequence::{sample_sequence, Sequence};

use crate::clifford::GateSet;
use crate::liouville::{clamp_probability, EffectVector, QuantumChannel, StateVector};
use crate::{Error, RVector, Result};

/// `Lambda_0 rho`, the preparation with the first noise term absorbed.
pub fn fold_initial_noise(prep: &StateVector, lambda0: &QuantumChannel) -> Result<StateVector> {
    lambda0.apply(prep)
}

/// `K_m = max(1, ceil(c m^2))` for each length.
pub fn quadratic_counts(lengths: &[usize], c: f64) -> Result<Vec<usize>> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("quadratic coefficient {c}")));
    }
    Ok(lengths
        .iter()
        .map(|&m| {
            let k = crate::math::ceil(c * (m * m) as f64);
            (k as usize).max(1)
        })
        .collect())
}

/// Preparation, measurement and sampling plan of an RB experiment.
#[derive(Debug, Clone)]
pub struct RbExperiment {
    prep: StateVector,
    effect: EffectVector,
    lengths: Vec<usize>,
    counts: Vec<usize>,
    shots: Option<u64>,
    seed: u64,
}

impl RbExperiment {
    /// `counts[i]` sequences are drawn at `lengths[i]`; `shots = None` uses the
    /// exact survival probability of every sequence.
    pub fn new(
        prep: StateVector,
        effect: EffectVector,
        lengths: Vec<usize>,
        counts: Vec<usize>,
        shots: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        if prep.dim() != effect.dim() {
            return Err(Error::DimensionMismatch {
                expected: prep.dim(),
                found: effect.dim(),
            });
        }
        if lengths.iter().any(|&m| m == 0 || m > u32::MAX as usize) {
            return Err(Error::InvalidParameter("sequence lengths must be >= 1".into()));
        }
        if counts.len() != lengths.len() {
            return Err(Error::DimensionMismatch {
                expected: lengths.len(),
                found: counts.len(),
            });
        }
        if counts.iter().any(|&k| k == 0 || k > u32::MAX as usize) {
            return Err(Error::InvalidParameter("sequence counts must be >= 1".into()));
        }
        if shots == Some(0) {
            return Err(Error::InvalidParameter("shots must be >= 1".into()));
        }
        Ok(Self {
            prep,
            effect,
            lengths,
            counts,
            shots,
            seed,
        })
    }

    /// Same `k` at every length.
    pub fn with_uniform_count(
        prep: StateVector,
        effect: EffectVector,
        lengths: Vec<usize>,
        k: usize,
        shots: Option<u64>,
        seed: u64,
    ) -> Result<Self> {
        let counts = alloc::vec![k; lengths.len()];
        Self::new(prep, effect, lengths, counts, shots, seed)
    }

    pub fn prep(&self) -> &StateVector {
        &self.prep
    }

    pub fn effect(&self) -> &EffectVector {
        &self.effect
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn shots(&self) -> Option<u64> {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.prep.dim()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub(crate) fn check_setup(group: &GateSet, schedule: &NoiseSchedule, exp: &RbExperiment) -> Result<()> {
    for d in [schedule.dim(), exp.dim()] {
        if d != group.dim() {
            return Err(Error::DimensionMismatch {
                expected: group.dim(),
                found: d,
            });
        }
    }
    if let Some(n) = schedule.perturbed_gate_count() {
        if n != group.len() {
            return Err(Error::DimensionMismatch {
                expected: group.len(),
                found: n,
            });
        }
    }
    Ok(())
}

/// `F = (E|S|rho)` for one sequence. Gate-dependent schedules use
/// `Lambda_{t, g_t}` at every step `t >= 1`.
pub fn survival_probability(
    seq: &Sequence,
    group: &GateSet,
    schedule: &NoiseSchedule,
    exp: &RbExperiment,
) -> Result<f64> {
    check_setup(group, schedule, exp)?;
    schedule.check_length(seq.len())?;
    let mut v = exp.prep.entries().clone();
    let mut w = RVector::zeros(v.len());
    w.gemv(1.0, group.gate(seq.inversion()).matrix(), &v, 0.0);
    core::mem::swap(&mut v, &mut w);
    for (step, &g) in seq.gates().iter().enumerate() {
        let lambda = schedule.lambda_for_gate(step + 1, g)?;
        w.gemv(1.0, lambda.matrix(), &v, 0.0);
        v.gemv(1.0, group.gate(g).matrix(), &w, 0.0);
    }
    clamp_probability(exp.effect.entries().dot(&v))
}
