use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use hrm_core::Policy;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid value {value:?} for {key}")]
    Env { key: &'static str, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExternalMode {
    /// In-process ministry and bibliography stand-ins.
    #[default]
    Stub,
    /// Real HTTP endpoints.
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExternalConfig {
    pub mode: ExternalMode,
    pub ministry_url: Option<String>,
    pub bibliography_url: Option<String>,
    /// Fixture directory served by the stub bibliography.
    pub bibliography_fixtures: Option<PathBuf>,
    pub timeout_secs: u64,
}

impl Default for ExternalConfig {
    fn default() -> Self {
        Self {
            mode: ExternalMode::Stub,
            ministry_url: None,
            bibliography_url: None,
            bibliography_fixtures: None,
            timeout_secs: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    /// Snapshot file. Without one the store lives in memory only.
    pub store_path: Option<PathBuf>,
    pub policy: Policy,
    /// Bearer token to actor name.
    pub tokens: BTreeMap<String, String>,
    pub external: ExternalConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            store_path: None,
            policy: Policy::default(),
            tokens: BTreeMap::from([("dev-token".to_string(), "hr-officer".to_string())]),
            external: ExternalConfig::default(),
        }
    }
}

impl ServiceConfig {
    /// Reads the file if given, applies `HRM_*` environment overrides and
    /// validates the result.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        config.apply_env(|key| std::env::var(key).ok())?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.into(),
            source,
        })
    }

    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &'static str, value: String) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::Env { key, value })
        }
        if let Some(v) = var("HRM_LISTEN") {
            self.listen = parse("HRM_LISTEN", v)?;
        }
        if let Some(v) = var("HRM_STORE_PATH") {
            self.store_path = (!v.is_empty()).then(|| PathBuf::from(v));
        }
        if let Some(v) = var("HRM_WARNING_MONTHS") {
            self.policy.warning_months = parse("HRM_WARNING_MONTHS", v)?;
        }
        if let Some(v) = var("HRM_TERM_YEARS") {
            self.policy.term_years = parse("HRM_TERM_YEARS", v)?;
        }
        if let Some(v) = var("HRM_COMMITTEE_MIN") {
            self.policy.committee_min = parse("HRM_COMMITTEE_MIN", v)?;
        }
        if let Some(v) = var("HRM_EXTERNAL_MODE") {
            self.external.mode = match v.as_str() {
                "stub" => ExternalMode::Stub,
                "remote" => ExternalMode::Remote,
                _ => {
                    return Err(ConfigError::Env {
                        key: "HRM_EXTERNAL_MODE",
                        value: v,
                    })
                }
            };
        }
        if let Some(v) = var("HRM_MINISTRY_URL") {
            self.external.ministry_url = Some(v);
        }
        if let Some(v) = var("HRM_BIBLIOGRAPHY_URL") {
            self.external.bibliography_url = Some(v);
        }
        if let Some(v) = var("HRM_BIBLIOGRAPHY_FIXTURES") {
            self.external.bibliography_fixtures = Some(v.into());
        }
        if let Some(v) = var("HRM_TOKEN") {
            let (token, actor) = v.split_once('=').ok_or(ConfigError::Env {
                key: "HRM_TOKEN",
                value: v.clone(),
            })?;
            self.tokens.insert(token.to_string(), actor.to_string());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.policy
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.tokens.is_empty() {
            return Err(ConfigError::Invalid(
                "at least one token is required".into(),
            ));
        }
        if self
            .tokens
            .iter()
            .any(|(t, a)| t.is_empty() || a.is_empty())
        {
            return Err(ConfigError::Invalid(
                "tokens and actor names must be non-empty".into(),
            ));
        }
        if self.external.mode == ExternalMode::Remote
            && (self.external.ministry_url.is_none() || self.external.bibliography_url.is_none())
        {
            return Err(ConfigError::Invalid(
                "remote mode needs ministry_url and bibliography_url".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = ServiceConfig::default();
        c.validate().unwrap();
        assert_eq!(
            (
                c.policy.warning_months,
                c.policy.term_years,
                c.policy.committee_min
            ),
            (3, 5, 3)
        );
        assert_eq!(
            c.policy.non_expiring_grades,
            vec!["professor emeritus".to_string()]
        );
        assert_eq!(c.external.mode, ExternalMode::Stub);
    }

    #[test]
    fn toml_and_env_overrides() {
        let mut c: ServiceConfig = toml::from_str(
            r#"
            listen = "0.0.0.0:9000"
            [policy]
            warning_months = 6
            [external]
            mode = "remote"
            ministry_url = "http://m"
            bibliography_url = "http://b"
            "#,
        )
        .unwrap();
        assert_eq!(c.policy.term_years, 5);
        let env = BTreeMap::from([
            ("HRM_TERM_YEARS", "4"),
            ("HRM_STORE_PATH", "/tmp/s.json"),
            ("HRM_TOKEN", "t=ops"),
        ]);
        c.apply_env(|k| env.get(k).map(|v| v.to_string())).unwrap();
        c.validate().unwrap();
        assert_eq!(c.listen.port(), 9000);
        assert_eq!((c.policy.warning_months, c.policy.term_years), (6, 4));
        assert_eq!(c.store_path.as_deref(), Some(Path::new("/tmp/s.json")));
        assert_eq!(c.tokens["t"], "ops");
    }

    #[test]
    fn invalid_values_are_rejected() {
        let mut c = ServiceConfig::default();
        assert!(c
            .apply_env(|k| (k == "HRM_WARNING_MONTHS").then(|| "x".into()))
            .is_err());
        c.policy.warning_months = 0;
        assert!(c.validate().is_err());
        let mut c = ServiceConfig::default();
        c.policy.committee_min = 4;
        assert!(c.validate().is_err());
        let mut c = ServiceConfig::default();
        c.external.mode = ExternalMode::Remote;
        assert!(c.validate().is_err());
        assert!(toml::from_str::<ServiceConfig>("listen = 5").is_err());
    }
}
