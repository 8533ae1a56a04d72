//! Artifact formatting. Floats are written with 17 significant digits so that
//! they parse back to the same `f64`; every artifact starts with the resolved
//! configuration it was produced from.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// JSON number with 17 significant digits; `null` when not finite.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    fmt_f64(x).parse::<Number>().map(Value::Number).unwrap_or(Value::Null)
}

/// Rewrites every non-integer number in `v` with [`json_f64`].
pub fn normalize_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_u64() || n.is_i64()) => n.as_f64().map_or(Value::Null, json_f64),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize_floats(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<Value> {
    Ok(normalize_floats(serde_json::to_value(value)?))
}

/// One-line JSON of the resolved configuration.
pub fn config_line(cfg: &RunConfig) -> CliResult<String> {
    Ok(serde_json::to_string(&to_json(cfg)?)?)
}

/// `{"command", "version", "seed", "config", "result"}`.
pub fn json_document(command: &str, cfg: &RunConfig, result: Value) -> CliResult<String> {
    let mut doc = Map::new();
    doc.insert("command".into(), Value::from(command));
    doc.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    doc.insert("seed".into(), Value::from(cfg.seed));
    doc.insert("config".into(), to_json(cfg)?);
    doc.insert("result".into(), normalize_floats(result));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

/// CSV with `#` comment lines naming the command, seed and configuration.
pub fn csv_document(command: &str, cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut out = format!(
        "# rbvar {} {command}\n# seed: {}\n# config: {}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.seed,
        config_line(cfg)?
    );
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    out.push_str(&String::from_utf8_lossy(&bytes));
    Ok(out)
}

/// Extracts the configuration line from a CSV produced by [`csv_document`].
pub fn config_from_csv(text: &str) -> Option<&str> {
    text.lines().find_map(|l| l.strip_prefix("# config: "))
}

/// Output of a subcommand: the primary artifact and an optional JSON summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub primary: String,
    pub summary: Option<String>,
    pub warnings: Vec<String>,
}

/// Path of the summary next to a primary artifact `out`: `out.json` with the
/// extension replaced.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Writes the primary artifact to `out` (stdout when absent) and the summary
/// next to it (stderr when `out` is absent).
pub fn emit(artifacts: &Artifacts, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, &artifacts.primary)?;
            if let Some(summary) = &artifacts.summary {
                let sp = summary_path(path);
                if sp == path {
                    return Err(CliError::Config(format!(
                        "output {} would be overwritten by its summary; use another extension",
                        path.display()
                    )));
                }
                std::fs::write(sp, summary)?;
            }
        }
        None => {
            std::io::stdout().write_all(artifacts.primary.as_bytes())?;
            if let Some(summary) = &artifacts.summary {
                std::io::stderr().write_all(summary.as_bytes())?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, 1e-300, 2.69e-4, -7.25, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn json_numbers_keep_their_digits() {
        let v = normalize_floats(serde_json::json!({"a": 0.1, "b": [1, 2.5], "c": "x"}));
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("[1,2.5000000000000000e"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
        assert_eq!(back["b"][0].as_u64(), Some(1));
        assert_eq!(json_f64(f64::NAN), Value::Null);
    }
}
