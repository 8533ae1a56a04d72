use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{check_setup, survival_probability, NoiseMode, NoiseSchedule, RbExperiment, Sequence};
use crate::clifford::{contractivity_count, tensor_twirl, twirl, GateSet};
use crate::liouville::QuantumChannel;
use crate::{Error, RMatrix, RVector, Result};

/// Largest number of sequences [`enumerate_oracle`] will visit.
pub const ORACLE_MAX_SEQUENCES: usize = 20_000;

const NEGATIVE_VARIANCE_TOLERANCE: f64 = 1e-12;

/// Exact mean and variance of the RB distribution at one length.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExactMoments {
    pub m: usize,
    pub mean: f64,
    pub variance: f64,
}

struct StepOperators {
    /// `Lambda^G`.
    twirled: RMatrix,
    /// `(Lambda^{⊗2})^G`.
    tensor: RMatrix,
    /// `(Lambda^{⊗2})^G - (Lambda^G)^{⊗2}`.
    gap: RMatrix,
    /// `(Lambda^G)^{⊗2}`.
    square: RMatrix,
}

impl StepOperators {
    fn new(c: &QuantumChannel, group: &GateSet) -> Result<Self> {
        let twirled = twirl(c.matrix(), group)?;
        let tensor = tensor_twirl(c, group)?;
        let square = twirled.kronecker(&twirled);
        let gap = &tensor - &square;
        Ok(Self {
            twirled,
            tensor,
            gap,
            square,
        })
    }
}

/// Propagates the first two moments of the RB distribution one step at a time.
///
/// With `T_t` the twirled tensor square and `S_t` the tensor square of the
/// twirl, it tracks `b_t = S_t b_{t-1}` and the difference
/// `d_t = T_t d_{t-1} + (T_t - S_t) b_{t-1}`, so the variance
/// `(E^{⊗2}| d_m)` never suffers cancellation between two large terms.
pub struct MomentPropagator<'a> {
    group: &'a GateSet,
    effect: RVector,
    effect_sq: RVector,
    mean_state: RVector,
    b: RVector,
    d: RVector,
    m: usize,
    constant: Option<StepOperators>,
    scratch: RVector,
}

impl<'a> MomentPropagator<'a> {
    pub fn new(group: &'a GateSet, exp: &RbExperiment) -> Result<Self> {
        if exp.dim() != group.dim() {
            return Err(Error::DimensionMismatch {
                expected: group.dim(),
                found: exp.dim(),
            });
        }
        let b = exp.prep().tensor_square();
        let n2 = b.len();
        Ok(Self {
            group,
            effect: exp.effect().entries().clone(),
            effect_sq: exp.effect().tensor_square(),
            mean_state: exp.prep().entries().clone(),
            d: RVector::zeros(n2),
            b,
            m: 0,
            constant: None,
            scratch: RVector::zeros(n2),
        })
    }

    /// Same as [`Self::new`] but caches the twirls of a fixed channel for
    /// [`Self::step_constant`].
    pub fn with_constant(group: &'a GateSet, exp: &RbExperiment, c: &QuantumChannel) -> Result<Self> {
        let mut p = Self::new(group, exp)?;
        p.constant = Some(StepOperators::new(c, group)?);
        Ok(p)
    }

    fn apply(&mut self, ops: &StepOperators) {
        self.mean_state = &ops.twirled * &self.mean_state;
        self.scratch.gemv(1.0, &ops.tensor, &self.d, 0.0);
        self.scratch.gemv(1.0, &ops.gap, &self.b, 1.0);
        core::mem::swap(&mut self.d, &mut self.scratch);
        self.scratch.gemv(1.0, &ops.square, &self.b, 0.0);
        core::mem::swap(&mut self.b, &mut self.scratch);
        self.m += 1;
    }

    /// Advances one step with noise `c`.
    pub fn step(&mut self, c: &QuantumChannel) -> Result<()> {
        let ops = StepOperators::new(c, self.group)?;
        self.apply(&ops);
        Ok(())
    }

    /// Advances one step with the cached channel.
    pub fn step_constant(&mut self) -> Result<()> {
        let ops = self
            .constant
            .take()
            .ok_or_else(|| Error::Internal("no cached channel".into()))?;
        self.apply(&ops);
        self.constant = Some(ops);
        Ok(())
    }

    pub fn length(&self) -> usize {
        self.m
    }

    pub fn mean(&self) -> f64 {
        self.effect.dot(&self.mean_state)
    }

    pub fn variance(&self) -> f64 {
        self.effect_sq.dot(&self.d)
    }

    pub fn moments(&self) -> Result<ExactMoments> {
        let variance = self.variance();
        if variance < -NEGATIVE_VARIANCE_TOLERANCE {
            return Err(Error::Numerical(format!(
                "negative variance {variance:e} at m = {}",
                self.m
            )));
        }
        Ok(ExactMoments {
            m: self.m,
            mean: self.mean(),
            variance,
        })
    }
}

fn require_gate_independent(schedule: &NoiseSchedule) -> Result<()> {
    if schedule.mode() == NoiseMode::GateDependent {
        return Err(Error::UnsupportedMode(
            "exact moments need gate-independent noise; use Monte Carlo or the enumeration oracle",
        ));
    }
    Ok(())
}

/// Exact moments at every requested length from a single sweep.
/// Results follow the order of `lengths`.
pub fn exact_moments(
    lengths: &[usize],
    group: &GateSet,
    schedule: &NoiseSchedule,
    exp: &RbExperiment,
) -> Result<Vec<ExactMoments>> {
    check_setup(group, schedule, exp)?;
    require_gate_independent(schedule)?;
    let max_m = lengths.iter().copied().max().unwrap_or(0);
    if lengths.contains(&0) {
        return Err(Error::InvalidParameter("sequence lengths must be >= 1".into()));
    }
    schedule.check_length(max_m)?;
    let mut prop = match schedule.mode() {
        NoiseMode::TimeIndependent => {
            MomentPropagator::with_constant(group, exp, schedule.lambda(1)?)?
        }
        _ => MomentPropagator::new(group, exp)?,
    };
    let mut at = vec![None];
    for t in 1..=max_m {
        match schedule.mode() {
            NoiseMode::TimeIndependent => prop.step_constant()?,
            _ => prop.step(schedule.lambda(t)?)?,
        }
        at.push(Some(prop.moments()?));
    }
    lengths
        .iter()
        .map(|&m| at[m].ok_or_else(|| Error::Internal("missing length".into())))
        .collect()
}

/// Mean survival probability `(E| prod_t Lambda_t^G |rho)`.
pub fn exact_mean(m: usize, group: &GateSet, schedule: &NoiseSchedule, exp: &RbExperiment) -> Result<f64> {
    Ok(exact_moments(&[m], group, schedule, exp)?[0].mean)
}

/// Variance `(E^{⊗2}| prod_t (Lambda_t^{⊗2})^G - prod_t (Lambda_t^G)^{⊗2} |rho^{⊗2})`.
pub fn exact_variance(
    m: usize,
    group: &GateSet,
    schedule: &NoiseSchedule,
    exp: &RbExperiment,
) -> Result<f64> {
    Ok(exact_moments(&[m], group, schedule, exp)?[0].variance)
}

/// The decay-curve form `E_0 rho_0 + vec(E)·vec(rho) prod_t f_t`, which holds for
/// any 2-design.
pub fn exact_mean_formula(m: usize, schedule: &NoiseSchedule, exp: &RbExperiment) -> Result<f64> {
    require_gate_independent(schedule)?;
    schedule.check_length(m)?;
    if m == 0 {
        return Err(Error::InvalidParameter("sequence length must be >= 1".into()));
    }
    let a = exp.effect().trace_component() * exp.prep().trace_component();
    let b = exp.effect().traceless().dot(&exp.prep().traceless());
    let mut prod = 1.0;
    for t in 1..=m {
        prod *= schedule.lambda(t)?.average_fidelity_f();
    }
    Ok(a + b * prod)
}

/// Population mean and variance over all `|G|^m` sequences, each evaluated with
/// [`survival_probability`]. Works for every noise mode.
pub fn enumerate_oracle(
    m: usize,
    group: &GateSet,
    schedule: &NoiseSchedule,
    exp: &RbExperiment,
) -> Result<(f64, f64)> {
    let n = group.len();
    let total = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(n));
    let total = match total {
        Some(t) if m >= 1 && t <= ORACLE_MAX_SEQUENCES => t,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "enumeration of {n}^{m} sequences is out of range"
            )))
        }
    };
    let mut values = Vec::with_capacity(total);
    let mut digits = vec![0usize; m];
    for _ in 0..total {
        let seq = Sequence::new(digits.clone(), group)?;
        values.push(survival_probability(&seq, group, schedule, exp)?);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < n {
                break;
            }
            *d = 0;
        }
    }
    let mean = values.iter().sum::<f64>() / total as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / total as f64;
    Ok((mean, var))
}

/// Large-`m` limit of the variance for time-independent noise,
/// `rho_0^2 vec(E)^{⊗2} P_1 alpha^{⊗2} / (1 - lambda_1)`, where `P_1` is the group
/// average of `g ⊗ g` on the traceless sector and `lambda_1 = Tr(P_1 phi^{⊗2})`.
///
/// Fails with [`Error::NoLimit`] unless the channel is 2-contractive.
pub fn asymptotic_variance(c: &QuantumChannel, group: &GateSet, exp: &RbExperiment) -> Result<f64> {
    if c.dim() != group.dim() || exp.dim() != group.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            found: c.dim(),
        });
    }
    let count = contractivity_count(c, group)?;
    if count > 1 {
        return Err(Error::NoLimit { count });
    }
    let n = group.dim() * group.dim();
    let k = n - 1;
    let idx: Vec<usize> = (1..n).flat_map(|j| (1..n).map(move |l| j * n + l)).collect();
    let mut p1 = RMatrix::zeros(k * k, k * k);
    for i in 0..group.len() {
        let sq = group.tensor_square(i);
        for (r, &ir) in idx.iter().enumerate() {
            for (s, &is) in idx.iter().enumerate() {
                p1[(r, s)] += sq[(ir, is)];
            }
        }
    }
    p1 /= group.len() as f64;
    let phi = c.phi();
    let lambda1 = (&p1 * phi.kronecker(&phi)).trace();
    if lambda1 >= 1.0 {
        return Err(Error::NoLimit { count });
    }
    let alpha = c.alpha();
    let e = exp.effect().traceless();
    let rho0 = exp.prep().trace_component();
    let num = e.kronecker(&e).dot(&(&p1 * alpha.kronecker(&alpha)));
    Ok(rho0 * rho0 * num / (1.0 - lambda1))
}
