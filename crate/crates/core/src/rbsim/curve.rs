use alloc::vec::Vec;

use super::{exact_moments, monte_carlo, McRecord, NoiseMode, NoiseSchedule, RbExperiment};
use crate::clifford::GateSet;
use crate::liouville::QuantumChannel;
use crate::stats::{diagonal_variance_bound, qubit_variance_bound, qudit_variance_bound, spam_delta};
use crate::Result;

/// Tolerance for treating a channel as Pauli diagonal.
const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// One row of a variance curve; unavailable values are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CurveRecord {
    pub m: usize,
    pub exact_mean: Option<f64>,
    pub exact_variance: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_variance: Option<f64>,
    pub bound_qubit: Option<f64>,
    pub bound_qudit: Option<f64>,
    pub bound_diag: Option<f64>,
}

impl CurveRecord {
    fn empty(m: usize) -> Self {
        Self {
            m,
            exact_mean: None,
            exact_variance: None,
            mc_mean: None,
            mc_variance: None,
            bound_qubit: None,
            bound_qudit: None,
            bound_diag: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VarianceCurve {
    pub records: Vec<CurveRecord>,
}

impl VarianceCurve {
    /// Fills the Monte Carlo columns from records matched by `m`.
    pub fn set_monte_carlo(&mut self, mc: &[McRecord]) {
        for rec in &mut self.records {
            if let Some(r) = mc.iter().find(|r| r.m == rec.m) {
                rec.mc_mean = Some(r.mean);
                rec.mc_variance = r.variance;
            }
        }
    }

    /// Largest `exact_variance / bound_qubit` over the curve.
    pub fn max_bound_ratio(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| match (r.exact_variance, r.bound_qubit) {
                (Some(v), Some(b)) if b > 0.0 => Some(v / b),
                _ => None,
            })
            .reduce(f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveOptions {
    pub exact: bool,
    pub monte_carlo: bool,
}

fn is_pauli_diagonal(c: &QuantumChannel) -> bool {
    let m = c.matrix();
    (0..m.nrows()).all(|r| (0..m.ncols()).all(|s| r == s || m[(r, s)].abs() <= DIAGONAL_TOLERANCE))
}

/// Builds the curve over `exp.lengths()`.
///
/// Exact columns are filled for gate-independent noise. Bound columns need a
/// time-independent schedule: the qubit bound uses the SPAM parameter of the
/// experiment, the diagonal bound is only reported for Pauli-diagonal noise.
pub fn variance_curve(
    exp: &RbExperiment,
    group: &GateSet,
    schedule: &NoiseSchedule,
    opts: CurveOptions,
) -> Result<VarianceCurve> {
    let mut records: Vec<CurveRecord> = exp.lengths().iter().map(|&m| CurveRecord::empty(m)).collect();
    if opts.exact && schedule.mode() != NoiseMode::GateDependent {
        let moments = exact_moments(exp.lengths(), group, schedule, exp)?;
        for (rec, mom) in records.iter_mut().zip(moments) {
            rec.exact_mean = Some(mom.mean);
            rec.exact_variance = Some(mom.variance);
        }
    }
    if schedule.mode() == NoiseMode::TimeIndependent {
        let c = schedule.lambda(1)?;
        let r = c.infidelity().max(0.0);
        let d = c.dim();
        let spam = if d == 2 {
            Some(spam_delta(exp.effect(), exp.prep())?.delta)
        } else {
            None
        };
        let diagonal = is_pauli_diagonal(c);
        for rec in &mut records {
            rec.bound_qudit = Some(qudit_variance_bound(rec.m, r, d));
            rec.bound_qubit = spam.map(|delta| qubit_variance_bound(rec.m, r, delta));
            if diagonal && d == 2 {
                rec.bound_diag = Some(diagonal_variance_bound(rec.m, r));
            }
        }
    }
    let mut curve = VarianceCurve { records };
    if opts.monte_carlo {
        curve.set_monte_carlo(&monte_carlo(exp, group, schedule)?);
    }
    Ok(curve)
}
