//! Named channels: `name` or `name:key=value,key=value`.
//!
//! | name | parameters |
//! |---|---|
//! | `identity` | `d` (2) |
//! | `depolarizing` | `p`, `d` (2) |
//! | `amplitude-damping` | `g` |
//! | `pauli` | `px`, `py`, `pz` |
//! | `overrotation` | `axis` (`x`, `y`, `z`), `angle` |
//! | `extremal` | `r_max` |
//! | `random` | `d` (2) |
//! | `random-unital` | `max_angle`, `terms` (3) |
//!
//! The random channels draw from the auxiliary stream given by the caller.

use std::collections::BTreeMap;

use rbvar_core::liouville::QuantumChannel;
use rbvar_core::noisegen;
use rbvar_core::rng::SimRng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub name: String,
    params: BTreeMap<String, String>,
}

impl NoiseSpec {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (spec.trim(), ""),
        };
        if name.is_empty() {
            return Err(CliError::Config("empty noise name".into()));
        }
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("noise parameter {kv:?} is not key=value")))?;
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("noise parameter {k:?} given twice")));
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn allow(&self, keys: &[&str]) -> CliResult<()> {
        match self.params.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!("unknown parameter {k:?} for noise {:?}", self.name))),
            None => Ok(()),
        }
    }

    fn float(&self, key: &str, default: Option<f64>) -> CliResult<f64> {
        match (self.params.get(key), default) {
            (Some(v), _) => v
                .parse()
                .map_err(|e| CliError::Config(format!("noise parameter {key}={v}: {e}"))),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(CliError::Config(format!(
                "noise {:?} needs parameter {key:?}",
                self.name
            ))),
        }
    }

    fn int(&self, key: &str, default: usize) -> CliResult<usize> {
        self.params.get(key).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|e| CliError::Config(format!("noise parameter {key}={v}: {e}")))
        })
    }

    /// Builds the channel; `rng` is only drawn from by the random families.
    pub fn build(&self, rng: &mut SimRng) -> CliResult<QuantumChannel> {
        let c = match self.name.as_str() {
            "identity" => {
                self.allow(&["d"])?;
                QuantumChannel::identity(self.int("d", 2)?)
            }
            "depolarizing" => {
                self.allow(&["p", "d"])?;
                let p = self.float("p", None)?;
                match self.int("d", 2)? {
                    2 => phys(noisegen::depolarizing(p))?,
                    d => phys(noisegen::depolarizing_qudit(d, p))?,
                }
            }
            "amplitude-damping" => {
                self.allow(&["g"])?;
                phys(noisegen::amplitude_damping(self.float("g", None)?))?
            }
            "pauli" => {
                self.allow(&["px", "py", "pz"])?;
                phys(noisegen::pauli_channel(
                    self.float("px", Some(0.0))?,
                    self.float("py", Some(0.0))?,
                    self.float("pz", Some(0.0))?,
                ))?
            }
            "overrotation" => {
                self.allow(&["axis", "angle"])?;
                let axis = match self.params.get("axis").map(String::as_str).unwrap_or("z") {
                    "x" => [1.0, 0.0, 0.0],
                    "y" => [0.0, 1.0, 0.0],
                    "z" => [0.0, 0.0, 1.0],
                    other => return Err(CliError::Config(format!("unknown axis {other:?}"))),
                };
                phys(noisegen::overrotation(axis, self.float("angle", None)?))?
            }
            "extremal" => {
                self.allow(&["r_max"])?;
                phys(noisegen::sample_extremal(self.float("r_max", None)?, rng))?
            }
            "random" => {
                self.allow(&["d"])?;
                phys(noisegen::random_channel(self.int("d", 2)?, rng))?
            }
            "random-unital" => {
                self.allow(&["max_angle", "terms"])?;
                phys(noisegen::random_unital_qubit(
                    self.float("max_angle", None)?,
                    self.int("terms", 3)?,
                    rng,
                ))?
            }
            other => return Err(CliError::Config(format!("unknown noise {other:?}"))),
        };
        Ok(c)
    }
}

/// Out-of-range channel parameters describe an unphysical channel.
fn phys(r: rbvar_core::Result<QuantumChannel>) -> CliResult<QuantumChannel> {
    r.map_err(|e| match e {
        rbvar_core::Error::InvalidParameter(msg) => CliError::Physicality(msg),
        other => other.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbvar_core::rng::auxiliary_rng;

    #[test]
    fn parses_and_builds() {
        let mut rng = auxiliary_rng(0, 0);
        let spec = NoiseSpec::parse("amplitude-damping:g=0.99").unwrap();
        let c = spec.build(&mut rng).unwrap();
        assert_eq!(c, noisegen::amplitude_damping(0.99).unwrap());
        let id = NoiseSpec::parse("identity").unwrap().build(&mut rng).unwrap();
        assert_eq!(id, QuantumChannel::identity(2));
        let q = NoiseSpec::parse("depolarizing:p=0.9,d=3").unwrap().build(&mut rng).unwrap();
        assert_eq!(q.dim(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut rng = auxiliary_rng(0, 0);
        assert!(NoiseSpec::parse("depolarizing:p").is_err());
        assert!(NoiseSpec::parse("pauli:px=0.1,px=0.2").is_err());
        assert!(NoiseSpec::parse("bogus").unwrap().build(&mut rng).is_err());
        assert!(NoiseSpec::parse("depolarizing:q=0.1").unwrap().build(&mut rng).is_err());
        assert!(NoiseSpec::parse("amplitude-damping").unwrap().build(&mut rng).is_err());
    }

    #[test]
    fn unphysical_parameters_are_physicality_errors() {
        let mut rng = auxiliary_rng(0, 0);
        let err = NoiseSpec::parse("amplitude-damping:g=1.5").unwrap().build(&mut rng).unwrap_err();
        assert!(matches!(err, CliError::Physicality(_)), "{err}");
    }
}
