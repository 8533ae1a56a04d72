use alloc::vec::Vec;

use crate::math::powf;
use crate::{Error, Result};

/// Mean estimates at two lengths and an estimate of the SPAM constant `A`,
/// each with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RatioInput {
    pub m1: usize,
    pub m2: usize,
    pub f1: f64,
    pub f2: f64,
    pub a_hat: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta_a: f64,
}

/// Estimate of `prod_{t=m1+1}^{m2} f_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RatioEstimate {
    pub m1: usize,
    pub m2: usize,
    pub ratio: f64,
    pub uncertainty: f64,
}

impl RatioEstimate {
    /// Geometric-mean `f` over the window, `ratio^(1/(m2 - m1))`.
    pub fn mean_f(&self) -> Option<f64> {
        (self.m2 > self.m1 && self.ratio > 0.0)
            .then(|| powf(self.ratio, 1.0 / (self.m2 - self.m1) as f64))
    }
}

/// `(F_m2 - A) / (F_m1 - A)` with first-order uncertainty
/// `sqrt((delta1 + deltaA)^2 + (delta2 + deltaA)^2)`.
///
/// Fails when `|F_m1 - A|` does not exceed `delta1 + deltaA`.
pub fn timedep_ratio(input: &RatioInput) -> Result<RatioEstimate> {
    let denominator = input.f1 - input.a_hat;
    let limit = input.delta1 + input.delta_a;
    if denominator.abs() <= limit {
        return Err(Error::UnstableRatio {
            denominator,
            uncertainty: limit,
        });
    }
    if input.m2 < input.m1 {
        return Err(Error::InvalidParameter("m2 must not be below m1".into()));
    }
    let u1 = input.delta1 + input.delta_a;
    let u2 = input.delta2 + input.delta_a;
    Ok(RatioEstimate {
        m1: input.m1,
        m2: input.m2,
        ratio: (input.f2 - input.a_hat) / denominator,
        uncertainty: crate::math::sqrt(u1 * u1 + u2 * u2),
    })
}

/// Windows whose estimated product exceeds 1 by more than its uncertainty,
/// i.e. a negative mean infidelity over the window.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NonMarkovReport {
    pub flagged: Vec<usize>,
    pub any: bool,
}

pub fn non_markov_flag(estimates: &[RatioEstimate]) -> NonMarkovReport {
    let flagged: Vec<usize> = estimates
        .iter()
        .enumerate()
        .filter(|(_, e)| e.ratio - e.uncertainty > 1.0)
        .map(|(i, _)| i)
        .collect();
    NonMarkovReport {
        any: !flagged.is_empty(),
        flagged,
    }
}
