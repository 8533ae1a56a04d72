//! Closed-form bounds, sample-size planning, decay fitting and time-dependent
//! fidelity estimation.
//!
//! All variance bounds return their leading-order terms only; the higher-order
//! remainders are not estimated.

mod bounds;
mod confidence;
mod fit;
mod spam;
mod timedep;

pub use bounds::{
    choi_diamond_sandwich, diagonal_variance_bound, diamond_bounds_from_r, gate_dep_tolerance,
    nonunital_check, qubit_variance_bound, qudit_variance_bound, NonunitalReport,
};
pub use confidence::{
    failure_probability, hoeffding_epsilon, hoeffding_h, hoeffding_log_h, required_sequences,
    ConfidenceSpec, SampleSize,
};
pub use fit::{default_weights, fit_decay, fit_decay_with, DecayPoint, FitOptions, FitResult};
pub use spam::{spam_delta, Axis, SpamDelta};
pub use timedep::{non_markov_flag, timedep_ratio, NonMarkovReport, RatioEstimate, RatioInput};
