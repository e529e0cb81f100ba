//! Run configuration: a single TOML-loadable document combining forge,
//! training, and backend settings, with environment-variable overrides.
//! Every evaluation report embeds the config it ran under.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ae::TrainParams;
use crate::forge::ForgeConfig;
use crate::llm::BackendConfig;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Parse(String),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "config I/O: {e}"),
            ConfigError::Parse(msg) => write!(f, "config parse: {msg}"),
            ConfigError::Invalid(msg) => write!(f, "config invalid: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError::Io(e)
    }
}

/// Everything a run needs, serialized into reports for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub forge: ForgeConfig,
    pub ae: TrainParams,
    pub backend: BackendConfig,
    /// Custom prompt template file; the builtin template when absent.
    pub template: Option<PathBuf>,
    /// Evaluate the LLM on the same seq >= 700 split as the autoencoder.
    pub align_splits: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            forge: ForgeConfig::default(),
            ae: TrainParams::default(),
            backend: BackendConfig::default(),
            template: None,
            align_splits: false,
        }
    }
}

impl RunConfig {
    /// Loads the file (when given), then applies `RANWATCH_*` environment
    /// overrides, then validates.
    pub fn load(path: Option<&Path>) -> Result<RunConfig, ConfigError> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?
            }
            None => RunConfig::default(),
        };
        config.apply_env()?;
        config.validate()?;
        Ok(config)
    }

    /// Environment overrides: `RANWATCH_SEED`, `RANWATCH_ENDPOINT`,
    /// `RANWATCH_MODEL`, `RANWATCH_MAX_TOKENS`, `RANWATCH_TIMEOUT_S`,
    /// `RANWATCH_RETRIES`, `RANWATCH_TEMPLATE`.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        fn parsed<T: std::str::FromStr>(name: &str) -> Result<Option<T>, ConfigError>
        where
            T::Err: fmt::Display,
        {
            match std::env::var(name) {
                Ok(raw) => raw
                    .parse()
                    .map(Some)
                    .map_err(|e| ConfigError::Invalid(format!("{name}={raw}: {e}"))),
                Err(_) => Ok(None),
            }
        }
        if let Some(seed) = parsed::<u64>("RANWATCH_SEED")? {
            self.forge.seed = seed;
        }
        if let Ok(endpoint) = std::env::var("RANWATCH_ENDPOINT") {
            self.backend.endpoint = endpoint;
        }
        if let Ok(model) = std::env::var("RANWATCH_MODEL") {
            self.backend.model = model;
        }
        if let Some(max_tokens) = parsed::<u32>("RANWATCH_MAX_TOKENS")? {
            self.backend.max_tokens = max_tokens;
        }
        if let Some(timeout) = parsed::<f64>("RANWATCH_TIMEOUT_S")? {
            self.backend.timeout_s = timeout;
        }
        if let Some(retries) = parsed::<u32>("RANWATCH_RETRIES")? {
            self.backend.retries = retries;
        }
        if let Ok(template) = std::env::var("RANWATCH_TEMPLATE") {
            self.template = Some(PathBuf::from(template));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.backend.validate().map_err(ConfigError::Invalid)?;
        if self.ae.learning_rate <= 0.0 || !self.ae.learning_rate.is_finite() {
            return Err(ConfigError::Invalid(format!(
                "learning_rate must be positive and finite, got {}",
                self.ae.learning_rate
            )));
        }
        if self.ae.epochs == 0 {
            return Err(ConfigError::Invalid("epochs must be positive".into()));
        }
        Ok(())
    }
}
