//! Server configuration: port from the environment, limits from a TOML file.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const PORT_VAR: &str = "VNARROW_PORT";
pub const CONFIG_VAR: &str = "VNARROW_CONFIG";
pub const DEFAULT_PORT: u16 = 7878;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid {PORT_VAR} value `{0}`")]
    Port(String),
}

/// Limits applied to new sessions; sessions may override them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Limits {
    pub max_variants: usize,
    pub max_nodes: usize,
    pub request_timeout_secs: u64,
    pub fvp_timeout_secs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_variants: 100, max_nodes: 2000, request_timeout_secs: 30, fvp_timeout_secs: 30 }
    }
}

impl Limits {
    pub fn request_timeout(&self) -> Duration {
        Duration::from_secs(self.request_timeout_secs)
    }

    pub fn fvp_timeout(&self) -> Duration {
        Duration::from_secs(self.fvp_timeout_secs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Config {
    pub port: Option<u16>,
    pub limits: Limits,
    /// Where session snapshots are written.
    pub snapshot_dir: Option<PathBuf>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
    }

    /// The file named by `VNARROW_CONFIG` if set, defaults otherwise.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_VAR) {
            Some(p) => Config::from_file(Path::new(&p)),
            None => Ok(Config::default()),
        }
    }

    /// `VNARROW_PORT` wins over the file, which wins over the default.
    pub fn port(&self) -> Result<u16, ConfigError> {
        match std::env::var(PORT_VAR) {
            Ok(v) => v.parse().map_err(|_| ConfigError::Port(v)),
            Err(_) => Ok(self.port.unwrap_or(DEFAULT_PORT)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: Config = toml::from_str("port = 9000\n[limits]\nmaxVariants = 10\n").unwrap();
        assert_eq!(c.port, Some(9000));
        assert_eq!(c.limits.max_variants, 10);
        assert_eq!(c.limits.request_timeout_secs, 30);
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(toml::from_str::<Config>("").unwrap(), Config::default());
    }
}
