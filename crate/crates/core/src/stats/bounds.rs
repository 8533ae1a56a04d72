use alloc::format;

use crate::liouville::{LinearMap, QuantumChannel};
use crate::math::sqrt;
use crate::{Error, Result};

const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// `m^2 r^2 + (7/4) m r^2 + 6 delta m r` for a qubit with SPAM parameter `delta`.
pub fn qubit_variance_bound(m: usize, r: f64, delta_spam: f64) -> f64 {
    let m = m as f64;
    m * m * r * r + 1.75 * m * r * r + 6.0 * delta_spam * m * r
}

/// `4 d (d + 1) m r`, valid in any dimension.
pub fn qudit_variance_bound(m: usize, r: f64, d: usize) -> f64 {
    let d = d as f64;
    4.0 * d * (d + 1.0) * m as f64 * r
}

/// `11 m r^2 / 4` for Pauli-diagonal qubit noise.
pub fn diagonal_variance_bound(m: usize, r: f64) -> f64 {
    2.75 * m as f64 * r * r
}

/// Bounds `(r (d+1)/d, sqrt(d (d+1) r))` on `||Lambda - 1||_diamond / 2`.
pub fn diamond_bounds_from_r(r: f64, d: usize) -> Result<(f64, f64)> {
    if !(r >= 0.0) || d < 2 {
        return Err(Error::InvalidParameter(format!("r = {r}, d = {d}")));
    }
    let d = d as f64;
    Ok((r * (d + 1.0) / d, sqrt(d * (d + 1.0) * r)))
}

/// `(||J(Delta)||_1, d ||J(Delta)||_1)`, which bracket `||Delta||_diamond`.
pub fn choi_diamond_sandwich(delta: &LinearMap) -> Result<(f64, f64)> {
    let choi = delta.to_choi();
    let defect = choi.hermiticity_defect();
    if defect > HERMITICITY_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "map is not Hermiticity preserving (Choi defect {defect:e})"
        )));
    }
    let lower = choi.trace_norm();
    Ok((lower, delta.dim() as f64 * lower))
}

/// Comparison of the nonunital part with its bound `||alpha||_2 <= 3 r`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NonunitalReport {
    pub alpha_norm: f64,
    pub three_r: f64,
    pub passes: bool,
}

/// Qubit channels with `r < 1/3` only.
pub fn nonunital_check(c: &QuantumChannel) -> Result<NonunitalReport> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: c.dim(),
        });
    }
    let r = c.infidelity();
    if r >= 1.0 / 3.0 {
        return Err(Error::InvalidParameter(format!("r = {r} is not below 1/3")));
    }
    let alpha_norm = c.alpha().norm();
    let three_r = 3.0 * r;
    Ok(NonunitalReport {
        alpha_norm,
        three_r,
        passes: alpha_norm <= three_r + 1e-12,
    })
}

/// Largest gate-dependent perturbation strength `delta0 / (9 d m)` keeping the
/// variance correction below `delta0`.
pub fn gate_dep_tolerance(delta0: f64, d: usize, m: usize) -> Result<f64> {
    if !(delta0 > 0.0) || d < 2 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "delta0 = {delta0}, d = {d}, m = {m}"
        )));
    }
    Ok(delta0 / (9.0 * d as f64 * m as f64))
}
