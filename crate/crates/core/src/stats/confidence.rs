use alloc::format;

use crate::math::{ceil, exp, ln, ln_1p, round};
use crate::{Error, Result};

/// Target precision `epsilon`, failure probability `delta` and the variance of
/// the RB distribution at the length of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfidenceSpec {
    pub epsilon: f64,
    pub delta: f64,
    pub variance: f64,
}

impl ConfidenceSpec {
    pub fn new(epsilon: f64, delta: f64, variance: f64) -> Result<Self> {
        let spec = Self {
            epsilon,
            delta,
            variance,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_eps_v(self.epsilon, self.variance)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {} outside (0, 1)",
                self.delta
            )));
        }
        Ok(())
    }
}

fn check_eps_v(epsilon: f64, v: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "variance = {v} must be positive"
        )));
    }
    Ok(())
}

/// `ln H(epsilon, v)` with
/// `H = (1/(1-eps))^((1-eps)/(v+1)) * (v/(v+eps))^((v+eps)/(v+1))`,
/// evaluated in the log domain.
pub fn hoeffding_log_h(epsilon: f64, v: f64) -> Result<f64> {
    check_eps_v(epsilon, v)?;
    let a = -(1.0 - epsilon) * ln_1p(-epsilon);
    let b = -(v + epsilon) * ln_1p(epsilon / v);
    Ok((a + b) / (v + 1.0))
}

/// The Hoeffding factor `H(epsilon, v)` in `(0, 1)`.
pub fn hoeffding_h(epsilon: f64, v: f64) -> Result<f64> {
    Ok(exp(hoeffding_log_h(epsilon, v)?))
}

/// `2 H(epsilon, v)^K`, the probability bound for an `epsilon` deviation of a
/// `K`-sample mean.
pub fn failure_probability(k: u64, epsilon: f64, v: f64) -> Result<f64> {
    Ok(2.0 * exp(k as f64 * hoeffding_log_h(epsilon, v)?))
}

/// Number of sequences for precision `epsilon` with confidence `1 - delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SampleSize {
    /// `K_real` rounded to the nearest integer (at least 1).
    pub k: u64,
    /// `-ln(2/delta) / ln H(epsilon, v)`.
    pub k_real: f64,
    /// Smallest integer at least `K_real`; strictly guarantees the bound.
    pub k_ceil: u64,
}

/// `K = -ln(2/delta) / ln H(epsilon, variance)`.
pub fn required_sequences(spec: &ConfidenceSpec) -> Result<SampleSize> {
    spec.validate()?;
    let log_h = hoeffding_log_h(spec.epsilon, spec.variance)?;
    if log_h >= 0.0 {
        return Err(Error::Numerical("Hoeffding factor is not below 1".into()));
    }
    let k_real = -ln(2.0 / spec.delta) / log_h;
    if !k_real.is_finite() {
        return Err(Error::Numerical(format!("sample size {k_real}")));
    }
    Ok(SampleSize {
        k: (round(k_real) as u64).max(1),
        k_real,
        k_ceil: (ceil(k_real) as u64).max(1),
    })
}

/// Smallest `epsilon` with `2 H(epsilon, v)^K <= delta`, by bisection.
pub fn hoeffding_epsilon(k: u64, v: f64, delta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    let target = ln(delta / 2.0) / k as f64;
    let g = |e: f64| hoeffding_log_h(e, v).map(|l| l - target);
    let (mut lo, mut hi) = (1e-15, 1.0 - 1e-15);
    if g(hi)? > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "no epsilon below 1 reaches delta = {delta} with K = {k}"
        )));
    }
    if g(lo)? <= 0.0 {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct power-form evaluation, independent of the log-domain path.
    fn h_direct(e: f64, v: f64) -> f64 {
        (1.0 / (1.0 - e)).powf((1.0 - e) / (v + 1.0)) * (v / (v + e)).powf((v + e) / (v + 1.0))
    }

    #[test]
    fn h_matches_direct_form_and_is_in_unit_interval() {
        for &(e, v) in &[(0.01, 1.0175e-4), (0.2, 0.05), (0.5, 1.0), (0.9, 3.0)] {
            let h = hoeffding_h(e, v).unwrap();
            assert!((h - h_direct(e, v)).abs() < 1e-14, "{e} {v}");
            assert!(h > 0.0 && h < 1.0);
        }
        assert!((hoeffding_h(1e-9, 0.1).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn h_decreases_in_epsilon() {
        let v = 1e-3;
        let mut prev = 1.0;
        for i in 1..100 {
            let h = hoeffding_h(i as f64 / 100.0, v).unwrap();
            assert!(h < prev);
            prev = h;
        }
    }

    #[test]
    fn k_145_example() {
        let (m, r) = (100.0, 1e-4);
        let v = m * m * r * r + 1.75 * m * r * r;
        let k = required_sequences(&ConfidenceSpec::new(0.01, 0.01, v).unwrap()).unwrap();
        assert_eq!(k.k, 145);
        assert_eq!(k.k_ceil, 146);
        assert!((k.k_real - 145.184_254_177_981_8).abs() < 1e-9);
    }

    #[test]
    fn doubling_epsilon_reduction() {
        let ratio = |v: f64| {
            let k1 = required_sequences(&ConfidenceSpec::new(0.01, 0.01, v).unwrap()).unwrap();
            let k2 = required_sequences(&ConfidenceSpec::new(0.02, 0.01, v).unwrap()).unwrap();
            k1.k_real / k2.k_real
        };
        // Gaussian regime (v >> eps): K scales as 1/eps^2.
        assert!((ratio(1.0) - 4.0).abs() < 1e-3, "{}", ratio(1.0));
        // Small-variance regime: the reduction is weaker but still above 2.
        let r = ratio(1.0175e-4);
        assert!(r > 2.0 && r < 4.0, "{r}");
    }

    #[test]
    fn invalid_specs() {
        assert!(ConfidenceSpec::new(0.01, 0.01, 0.0).is_err());
        assert!(ConfidenceSpec::new(0.0, 0.01, 0.1).is_err());
        assert!(ConfidenceSpec::new(0.01, 1.0, 0.1).is_err());
        assert!(hoeffding_h(1.0, 0.1).is_err());
    }

    #[test]
    fn epsilon_inverts_k() {
        let v = 1.0175e-4;
        let e = hoeffding_epsilon(145, v, 0.01).unwrap();
        assert!(e > 0.0099 && e < 0.0101, "{e}");
        let p = failure_probability(145, e, v).unwrap();
        assert!((p - 0.01).abs() < 1e-9);
        assert!(hoeffding_epsilon(1, 10.0, 1e-9).is_err());
    }

    #[test]
    fn large_epsilon_gives_small_k() {
        let k = required_sequences(&ConfidenceSpec::new(0.5, 0.01, 1.0175e-4).unwrap()).unwrap();
        assert!(k.k >= 1 && k.k < 5);
    }
}
