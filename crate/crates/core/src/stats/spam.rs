use crate::liouville::{EffectVector, StateVector};
use crate::{Error, RVector, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Axis {
    X,
    Y,
    Z,
}

/// SPAM parameter `delta = |delta_E · delta_rho|` after splitting the traceless
/// parts as `vec(E) = a w + delta_E`, `vec(rho) = b w + delta_rho` with `w` a
/// coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpamDelta {
    /// Minimum over the three axes.
    pub delta: f64,
    pub axis: Axis,
    pub a: f64,
    pub b: f64,
    /// `delta` for `w = x, y, z`.
    pub per_axis: [f64; 3],
}

/// Qubit only.
pub fn spam_delta(effect: &EffectVector, prep: &StateVector) -> Result<SpamDelta> {
    for d in [effect.dim(), prep.dim()] {
        if d != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d });
        }
    }
    let e: RVector = effect.traceless();
    let rho: RVector = prep.traceless();
    let mut per_axis = [0.0; 3];
    for (w, slot) in per_axis.iter_mut().enumerate() {
        let dot: f64 = (0..3).filter(|&j| j != w).map(|j| e[j] * rho[j]).sum();
        *slot = dot.abs();
    }
    let best = (0..3)
        .min_by(|&i, &j| per_axis[i].total_cmp(&per_axis[j]))
        .unwrap_or(2);
    let axis = [Axis::X, Axis::Y, Axis::Z][best];
    Ok(SpamDelta {
        delta: per_axis[best],
        axis,
        a: e[best],
        b: rho[best],
        per_axis,
    })
}
