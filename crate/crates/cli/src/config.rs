//! Run configuration: flags over an optional `key=value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use wforms_core::exact::parse_rational;
use wforms_core::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Latex,
    Text,
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "json" => Format::Json,
            "latex" => Format::Latex,
            "text" => Format::Text,
            _ => bail!("unknown format {s:?} (json, latex, text)"),
        })
    }
}

/// Sphere measure the flat tables are reported in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Total mass one.
    Normalized,
    /// Euclidean surface measure: entries carry `|S^{n−1}|`.
    Area,
}

impl FromStr for Measure {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "normalized" => Measure::Normalized,
            "area" => Measure::Area,
            _ => bail!("unknown measure {s:?} (normalized, area)"),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub format: Format,
    pub measure: Measure,
    pub e: Rational,
    pub g: Rational,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 6,
            format: Format::Json,
            measure: Measure::Normalized,
            e: Rational::from_integer(0.into()),
            g: Rational::from_integer(0.into()),
            output: None,
        }
    }
}

/// Values given on the command line; `None` falls back to the file, then
/// to the default.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub format: Option<String>,
    pub measure: Option<String>,
    pub e: Option<String>,
    pub g: Option<String>,
    pub output: Option<PathBuf>,
}

pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key=value", k + 1);
        };
        out.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
    }
    Ok(out)
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, flags: Overrides) -> Result<RunConfig> {
        let mut kv = match file {
            Some(p) => parse_config_file(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
            None => BTreeMap::new(),
        };
        let mut set = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                kv.insert(key.to_string(), v);
            }
        };
        set("n", flags.n.map(|n| n.to_string()));
        set("format", flags.format);
        set("measure", flags.measure);
        set("e", flags.e);
        set("g", flags.g);
        set("output", flags.output.map(|p| p.display().to_string()));

        let mut cfg = RunConfig::default();
        for (k, v) in &kv {
            match k.as_str() {
                "n" => cfg.n = v.parse().with_context(|| format!("n = {v:?}"))?,
                "format" => cfg.format = v.parse()?,
                "measure" => cfg.measure = v.parse()?,
                "e" => cfg.e = parse_rational(v).with_context(|| format!("E = {v:?}"))?,
                "g" => cfg.g = parse_rational(v).with_context(|| format!("G = {v:?}"))?,
                "output" => cfg.output = Some(PathBuf::from(v)),
                other => bail!("unknown configuration key {other:?}"),
            }
        }
        if cfg.n % 2 != 0 || !(2..=8).contains(&cfg.n) {
            bail!("n must be even with 2 <= n <= 8, got {}", cfg.n);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join(format!("wforms-config-{}", std::process::id()));
        std::fs::write(&dir, "# run\nn = 4\nformat=text\nE = 5/7\n").unwrap();
        let cfg = RunConfig::resolve(
            Some(&dir),
            Overrides {
                format: Some("latex".into()),
                ..Default::default()
            },
        )
        .unwrap();
        std::fs::remove_file(&dir).ok();
        assert_eq!(cfg.n, 4);
        assert_eq!(cfg.format, Format::Latex);
        assert_eq!(cfg.e, Rational::new(5.into(), 7.into()));
    }

    #[test]
    fn rejects_odd_dimension_and_unknown_keys() {
        let odd = Overrides {
            n: Some(3),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, odd).is_err());
        assert!(parse_config_file("n 4").is_err());
        let bad = Overrides {
            format: Some("yaml".into()),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, bad).is_err());
    }
}
