//! Run configuration: a JSON object from `--config`, overridden key by key by
//! `--set key=value` and then by the dedicated flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Sequence lengths, written as `10,20,30`, `start:end` or `start:end:step`
/// (inclusive), or as a JSON array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lengths(pub Vec<usize>);

impl FromStr for Lengths {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let int = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad length {t:?}: {e}"))
        };
        let out: Vec<usize> = if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let (start, end, step) = match parts.as_slice() {
                [a, b] => (int(a)?, int(b)?, 1),
                [a, b, c] => (int(a)?, int(b)?, int(c)?),
                _ => return Err(format!("bad range {s:?}")),
            };
            if step == 0 || end < start {
                return Err(format!("empty range {s:?}"));
            }
            (start..=end).step_by(step).collect()
        } else {
            s.split(',').map(int).collect::<Result<_, _>>()?
        };
        if out.is_empty() || out.contains(&0) {
            return Err(format!("lengths must be positive and non-empty: {s:?}"));
        }
        Ok(Lengths(out))
    }
}

impl Serialize for Lengths {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lengths {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<usize>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::List(v) if !v.is_empty() && !v.contains(&0) => Ok(Lengths(v)),
            Raw::List(_) => Err(serde::de::Error::custom("lengths must be positive and non-empty")),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Sequences per length: a fixed count or `quadratic:c` for `ceil(c m^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSpec {
    Fixed(usize),
    Quadratic(f64),
}

impl FromStr for KSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(c) = s.strip_prefix("quadratic:") {
            let c: f64 = c.parse().map_err(|e| format!("bad quadratic coefficient {c:?}: {e}"))?;
            if !(c > 0.0 && c.is_finite()) {
                return Err(format!("quadratic coefficient must be positive, got {c}"));
            }
            return Ok(KSpec::Quadratic(c));
        }
        match s.parse::<usize>() {
            Ok(0) => Err("K must be >= 1".into()),
            Ok(k) => Ok(KSpec::Fixed(k)),
            Err(e) => Err(format!("bad K {s:?}: {e}")),
        }
    }
}

impl fmt::Display for KSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSpec::Fixed(k) => write!(f, "{k}"),
            KSpec::Quadratic(c) => write!(f, "quadratic:{c:e}"),
        }
    }
}

impl Serialize for KSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            KSpec::Fixed(k) => s.serialize_u64(*k as u64),
            KSpec::Quadratic(_) => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for KSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_u64()
                .ok_or_else(|| serde::de::Error::custom(format!("bad K {n}")))?
                .to_string()
                .parse()
                .map_err(serde::de::Error::custom),
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("bad K {other}"))),
        }
    }
}

/// Measurement shots per sequence; `off` uses exact survival probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shots {
    #[default]
    Off,
    Count(u64),
}

impl Shots {
    pub fn as_option(self) -> Option<u64> {
        match self {
            Shots::Off => None,
            Shots::Count(n) => Some(n),
        }
    }
}

impl FromStr for Shots {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "off" => Ok(Shots::Off),
            t => match t.parse::<u64>() {
                Ok(0) => Err("shots must be >= 1 or off".into()),
                Ok(n) => Ok(Shots::Count(n)),
                Err(e) => Err(format!("bad shots {t:?}: {e}")),
            },
        }
    }
}

impl Serialize for Shots {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Shots::Off => s.serialize_str("off"),
            Shots::Count(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_u64()
                .ok_or_else(|| serde::de::Error::custom(format!("bad shots {n}")))?
                .to_string()
                .parse()
                .map_err(serde::de::Error::custom),
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            Value::Null => Ok(Shots::Off),
            other => Err(serde::de::Error::custom(format!("bad shots {other}"))),
        }
    }
}

/// Fully resolved parameters of one run. Keys not used by a subcommand are
/// ignored by it but still echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Output path; not echoed since it does not affect the results.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    /// Channel spec `name:key=value,...`.
    pub noise: Option<String>,
    pub m: Option<Lengths>,
    pub k: Option<KSpec>,
    pub shots: Shots,

    // variance-scan
    pub channels: usize,
    pub r_max: f64,

    // design-k
    pub r: Option<f64>,
    pub epsilon: f64,
    pub delta: f64,
    pub delta_spam: f64,
    pub variance: Option<f64>,

    // simulate
    pub exact: bool,
    pub noise_after: Option<String>,
    pub switch: Option<usize>,
    pub gate_epsilon: Option<f64>,
    pub prep_bloch: [f64; 3],

    // fit
    pub data: Option<PathBuf>,
    pub windows: Vec<[usize; 2]>,
    pub a_hat: Option<f64>,
    pub delta_a: Option<f64>,
    pub dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: None,
            noise: None,
            m: None,
            k: None,
            shots: Shots::Off,
            channels: 100,
            r_max: 2.69e-4,
            r: None,
            epsilon: 0.01,
            delta: 0.01,
            delta_spam: 0.0,
            variance: None,
            exact: true,
            noise_after: None,
            switch: None,
            gate_epsilon: None,
            prep_bloch: [0.0, 0.0, 1.0],
            data: None,
            windows: Vec::new(),
            a_hat: None,
            delta_a: None,
            dim: 2,
        }
    }
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub noise: Option<String>,
    pub m: Option<String>,
    pub k: Option<String>,
    pub shots: Option<String>,
    pub data: Option<PathBuf>,
    /// `key=value` pairs; values parse as JSON, falling back to a string.
    pub set: Vec<String>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut map = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                match serde_json::from_str::<Value>(&text)? {
                    Value::Object(map) => map,
                    _ => return Err(CliError::Config("config file must hold a JSON object".into())),
                }
            }
            None => Map::new(),
        };
        for kv in &overrides.set {
            let (key, raw) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set expects key=value, got {kv:?}")))?;
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
            map.insert(key.trim().into(), value);
        }
        let text = |s: &str| Value::String(s.into());
        if let Some(seed) = overrides.seed {
            map.insert("seed".into(), Value::from(seed));
        }
        if let Some(out) = &overrides.out {
            map.insert("out".into(), text(&out.to_string_lossy()));
        }
        if let Some(noise) = &overrides.noise {
            map.insert("noise".into(), text(noise));
        }
        if let Some(m) = &overrides.m {
            map.insert("m".into(), text(m));
        }
        if let Some(k) = &overrides.k {
            map.insert("k".into(), text(k));
        }
        if let Some(shots) = &overrides.shots {
            map.insert("shots".into(), text(shots));
        }
        if let Some(data) = &overrides.data {
            map.insert("data".into(), text(&data.to_string_lossy()));
        }
        Ok(serde_json::from_value(Value::Object(map))?)
    }

    pub fn lengths(&self) -> CliResult<&[usize]> {
        self.m
            .as_ref()
            .map(|l| l.0.as_slice())
            .ok_or_else(|| CliError::Config("sequence lengths (--m) are required".into()))
    }

    pub fn noise_spec(&self) -> CliResult<&str> {
        self.noise
            .as_deref()
            .ok_or_else(|| CliError::Config("a noise channel (--noise) is required".into()))
    }
}
