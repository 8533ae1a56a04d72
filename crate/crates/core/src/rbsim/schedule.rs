use alloc::format;
use alloc::vec::Vec;

use crate::liouville::{LinearMap, QuantumChannel};
use crate::{Error, Result};

/// Slack allowed on `||Delta||_inf <= 1` and on the zero-mean condition.
const DELTA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum NoiseMode {
    TimeIndependent,
    TimeDependent,
    GateDependent,
}

#[derive(Debug, Clone)]
enum Steps {
    Constant(QuantumChannel),
    Tabular(Vec<QuantumChannel>),
}

#[derive(Debug, Clone)]
struct GateDependence {
    epsilon: f64,
    deltas: Vec<Vec<LinearMap>>,
    channels: Vec<Vec<QuantumChannel>>,
}

/// Noise `Lambda_t` for time steps `t >= 1`, optionally perturbed per gate as
/// `Lambda_{t,g} = Lambda_t + eps * Delta_{t,g}`.
///
/// The step-0 noise is not part of a schedule: it is folded into the
/// preparation (see [`super::fold_initial_noise`]). Gate dependence therefore
/// only affects steps `t >= 1`.
#[derive(Debug, Clone)]
pub struct NoiseSchedule {
    steps: Steps,
    gates: Option<GateDependence>,
}

impl NoiseSchedule {
    pub fn constant(c: QuantumChannel) -> Self {
        Self {
            steps: Steps::Constant(c),
            gates: None,
        }
    }

    /// `channels[t - 1]` is applied at step `t`.
    pub fn tabular(channels: Vec<QuantumChannel>) -> Result<Self> {
        let first = channels
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty noise schedule".into()))?;
        let d = first.dim();
        if let Some(bad) = channels.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        Ok(Self {
            steps: Steps::Tabular(channels),
            gates: None,
        })
    }

    /// Attaches per-gate perturbations. `deltas[s][g]` perturbs base step `s`
    /// (a single step for a constant schedule) when gate `g` is applied.
    ///
    /// Each `Delta` must be trace-annihilating, have spectral norm at most 1
    /// and average to zero over the gates; every perturbed map must be CPTP.
    pub fn with_gate_dependence(self, epsilon: f64, deltas: Vec<Vec<LinearMap>>) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
        }
        let bases = self.base_channels();
        if deltas.len() != bases.len() {
            return Err(Error::DimensionMismatch {
                expected: bases.len(),
                found: deltas.len(),
            });
        }
        let n_gates = deltas[0].len();
        let mut channels = Vec::with_capacity(bases.len());
        for (s, (base, row)) in bases.iter().zip(&deltas).enumerate() {
            if row.len() != n_gates || n_gates == 0 {
                return Err(Error::InvalidParameter(format!(
                    "step {s} has {} perturbations, expected {n_gates}",
                    row.len()
                )));
            }
            let n = base.matrix().nrows();
            let mut sum = crate::RMatrix::zeros(n, n);
            let mut perturbed = Vec::with_capacity(n_gates);
            for (g, delta) in row.iter().enumerate() {
                if delta.dim() != base.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: base.dim(),
                        found: delta.dim(),
                    });
                }
                let norm = delta.matrix().singular_values().max();
                if norm > 1.0 + DELTA_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "||Delta_({s},{g})||_inf = {norm} exceeds 1"
                    )));
                }
                sum += delta.matrix();
                let m = base.matrix() + delta.matrix() * epsilon;
                perturbed.push(QuantumChannel::new(base.dim(), m).map_err(|e| {
                    Error::Physicality(format!("perturbed channel at step {s}, gate {g}: {e}"))
                })?);
            }
            let mean_dev = sum.amax() / n_gates as f64;
            if mean_dev > DELTA_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "perturbations at step {s} do not average to zero (deviation {mean_dev:e})"
                )));
            }
            channels.push(perturbed);
        }
        Ok(Self {
            steps: self.steps,
            gates: Some(GateDependence {
                epsilon,
                deltas,
                channels,
            }),
        })
    }

    pub fn mode(&self) -> NoiseMode {
        match (&self.gates, &self.steps) {
            (Some(_), _) => NoiseMode::GateDependent,
            (None, Steps::Constant(_)) => NoiseMode::TimeIndependent,
            (None, Steps::Tabular(_)) => NoiseMode::TimeDependent,
        }
    }

    pub fn dim(&self) -> usize {
        self.base_channels()[0].dim()
    }

    /// Largest supported sequence length; `None` for constant schedules.
    pub fn horizon(&self) -> Option<usize> {
        match &self.steps {
            Steps::Constant(_) => None,
            Steps::Tabular(v) => Some(v.len()),
        }
    }

    pub fn check_length(&self, m: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if m > h => Err(Error::InvalidParameter(format!(
                "sequence length {m} exceeds schedule horizon {h}"
            ))),
            _ => Ok(()),
        }
    }

    /// The distinct base channels: one for a constant schedule, the table otherwise.
    pub fn base_channels(&self) -> &[QuantumChannel] {
        match &self.steps {
            Steps::Constant(c) => core::slice::from_ref(c),
            Steps::Tabular(v) => v,
        }
    }

    fn step_index(&self, t: usize) -> Result<usize> {
        if t == 0 {
            return Err(Error::InvalidParameter(
                "step 0 noise is folded into the preparation".into(),
            ));
        }
        match &self.steps {
            Steps::Constant(_) => Ok(0),
            Steps::Tabular(v) if t <= v.len() => Ok(t - 1),
            Steps::Tabular(v) => Err(Error::InvalidParameter(format!(
                "time step {t} exceeds schedule horizon {}",
                v.len()
            ))),
        }
    }

    /// Gate-averaged noise `Lambda_t`.
    pub fn lambda(&self, t: usize) -> Result<&QuantumChannel> {
        Ok(&self.base_channels()[self.step_index(t)?])
    }

    /// Noise at step `t` when gate `g` is applied; equals [`Self::lambda`]
    /// unless the schedule is gate dependent.
    pub fn lambda_for_gate(&self, t: usize, g: usize) -> Result<&QuantumChannel> {
        let s = self.step_index(t)?;
        match &self.gates {
            None => Ok(&self.base_channels()[s]),
            Some(gd) => gd.channels[s].get(g).ok_or_else(|| {
                Error::InvalidParameter(format!("gate index {g} has no perturbation"))
            }),
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.gates.as_ref().map_or(0.0, |g| g.epsilon)
    }

    /// `Delta_{t,g}` for gate-dependent schedules.
    pub fn delta(&self, t: usize, g: usize) -> Option<&LinearMap> {
        let s = self.step_index(t).ok()?;
        self.gates.as_ref()?.deltas.get(s)?.get(g)
    }

    /// Number of gates the perturbations are indexed by, if any.
    pub fn perturbed_gate_count(&self) -> Option<usize> {
        self.gates.as_ref().map(|g| g.deltas[0].len())
    }

    /// The schedule with gate dependence removed.
    pub fn without_gate_dependence(&self) -> Self {
        Self {
            steps: self.steps.clone(),
            gates: None,
        }
    }
}
