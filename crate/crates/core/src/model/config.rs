//! `key = value` parameter files and flag overrides.

use super::DimensionlessParams;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamKey {
    A,
    OmegaSigma,
    GapOmegaSigma,
    DSigma,
    T0Sigma,
    Lambda,
}

impl ParamKey {
    pub const ALL: [ParamKey; 6] = [
        ParamKey::A,
        ParamKey::OmegaSigma,
        ParamKey::GapOmegaSigma,
        ParamKey::DSigma,
        ParamKey::T0Sigma,
        ParamKey::Lambda,
    ];

    /// Name used in config files, CLI flags and CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            ParamKey::A => "A",
            ParamKey::OmegaSigma => "omega_sigma",
            ParamKey::GapOmegaSigma => "Omega_sigma",
            ParamKey::DSigma => "D_sigma",
            ParamKey::T0Sigma => "t0_sigma",
            ParamKey::Lambda => "lambda",
        }
    }

    pub fn from_name(name: &str) -> Option<ParamKey> {
        ParamKey::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for ParamKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config key `{key}` must be a number")]
    NotANumber { key: String },
}

/// Partial parameter assignment; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamOverrides {
    values: Vec<(ParamKey, f64)>,
}

impl ParamOverrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: ParamKey, value: f64) {
        self.values.retain(|(k, _)| *k != key);
        self.values.push((key, value));
    }

    pub fn get(&self, key: ParamKey) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn apply(&self, mut params: DimensionlessParams) -> DimensionlessParams {
        for &(k, v) in &self.values {
            params.set(k, v);
        }
        params
    }

    /// `self` with every value present in `top` replaced.
    pub fn layered(&self, top: &ParamOverrides) -> ParamOverrides {
        let mut out = self.clone();
        for &(k, v) in &top.values {
            out.set(k, v);
        }
        out
    }
}

pub fn parse_config(text: &str) -> Result<ParamOverrides, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut out = ParamOverrides::new();
    for (name, value) in table {
        let key = ParamKey::from_name(&name).ok_or_else(|| ConfigError::UnknownKey(name.clone()))?;
        let v = match value {
            toml::Value::Float(f) => f,
            toml::Value::Integer(i) => i as f64,
            _ => return Err(ConfigError::NotANumber { key: name }),
        };
        out.set(key, v);
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<ParamOverrides, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let o =
            parse_config("A = 0.05\nomega_sigma = 2\nOmega_sigma = -1.5\nD_sigma = 3.0\nt0_sigma = 1\nlambda = 0.01\n")
                .unwrap();
        let p = o.apply(DimensionlessParams::default());
        assert_eq!(p, DimensionlessParams::new(0.05, 2.0, -1.5, 3.0, 1.0).with(ParamKey::Lambda, 0.01));
    }

    #[test]
    fn rejects_unknown_and_non_numeric() {
        assert!(matches!(parse_config("sigma = 1"), Err(ConfigError::UnknownKey(k)) if k == "sigma"));
        assert!(matches!(parse_config("A = \"big\""), Err(ConfigError::NotANumber { .. })));
        assert!(matches!(parse_config("A = = 1"), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn flags_override_config() {
        let mut file = ParamOverrides::new();
        file.set(ParamKey::A, 0.05);
        file.set(ParamKey::DSigma, 3.0);
        let mut flags = ParamOverrides::new();
        flags.set(ParamKey::DSigma, 1.0);
        let merged = file.layered(&flags);
        assert_eq!(merged.get(ParamKey::A), Some(0.05));
        assert_eq!(merged.get(ParamKey::DSigma), Some(1.0));
        assert_eq!(merged.get(ParamKey::Lambda), None);
    }

    #[test]
    fn names_round_trip() {
        for k in ParamKey::ALL {
            assert_eq!(ParamKey::from_name(k.name()), Some(k));
        }
        assert_eq!(ParamKey::from_name("omega"), None);
    }
}
