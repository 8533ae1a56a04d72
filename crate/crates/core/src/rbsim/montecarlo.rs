use alloc::format;
use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};

use super::{check_setup, sample_sequence, survival_probability, NoiseSchedule, RbExperiment};
use crate::clifford::GateSet;
use crate::math::anchored_mean;
use crate::rng::sequence_rng;
use crate::{Error, Result};

/// Sample statistics of the survival probabilities drawn at one length.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct McRecord {
    pub m: usize,
    pub k: usize,
    pub mean: f64,
    /// Unbiased sample variance; `None` when fewer than two sequences were drawn.
    pub variance: Option<f64>,
}

/// Survival estimate for sequence `i` at length `m`, drawn from the stream
/// keyed by `(seed, m, i)`. With shots set, the exact probability is replaced by
/// `Binomial(shots, F) / shots` using the same stream.
pub fn sample_survival(
    exp: &RbExperiment,
    group: &GateSet,
    schedule: &NoiseSchedule,
    m: usize,
    i: usize,
) -> Result<f64> {
    let mut rng = sequence_rng(exp.seed(), m, i);
    let seq = sample_sequence(m, group, &mut rng)?;
    let f = survival_probability(&seq, group, schedule, exp)?;
    match exp.shots() {
        None => Ok(f),
        Some(n) => {
            let dist = Binomial::new(n, f)
                .map_err(|e| Error::Numerical(format!("binomial({n}, {f}): {e}")))?;
            Ok(dist.sample(&mut rng) as f64 / n as f64)
        }
    }
}

/// Mean and unbiased variance of `values`, both anchored at the first value so
/// that identical samples give a variance of exactly zero.
pub fn summarize(m: usize, values: &[f64]) -> McRecord {
    let k = values.len();
    if k == 0 {
        return McRecord {
            m,
            k,
            mean: f64::NAN,
            variance: None,
        };
    }
    let mean = anchored_mean(values.iter().copied(), values[0], k);
    let variance = (k > 1).then(|| {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64
    });
    McRecord {
        m,
        k,
        mean,
        variance,
    }
}

/// Draws `counts[j]` sequences at each `lengths[j]` and summarizes them.
pub fn monte_carlo(exp: &RbExperiment, group: &GateSet, schedule: &NoiseSchedule) -> Result<Vec<McRecord>> {
    check_setup(group, schedule, exp)?;
    exp.lengths()
        .iter()
        .zip(exp.counts())
        .map(|(&m, &k)| {
            schedule.check_length(m)?;
            let values = (0..k)
                .map(|i| sample_survival(exp, group, schedule, m, i))
                .collect::<Result<Vec<_>>>()?;
            Ok(summarize(m, &values))
        })
        .collect()
}
