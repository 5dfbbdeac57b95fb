//! Run settings shared by the command-line tool and the bindings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub n_generators: usize,
    pub tolerance: f64,
    /// Overrides the lattice truncation radius of theta sums.
    pub theta_truncation: Option<usize>,
    pub window_m: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { n_generators: 4, tolerance: 1e-9, theta_truncation: None, window_m: 12, seed: 7 }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.window_m < 4 {
            return Err(Error::Invalid(format!("window_m must be at least 4, got {}", self.window_m)));
        }
        if self.n_generators > crate::grassmann::MAX_GENERATORS {
            return Err(Error::Invalid(format!("at most {} generators are supported", crate::grassmann::MAX_GENERATORS)));
        }
        if self.theta_truncation == Some(0) {
            return Err(Error::Invalid("theta_truncation must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_fields_take_defaults() {
        let c = Config::from_json(r#"{"seed": 3}"#).unwrap();
        assert_eq!(c, Config { seed: 3, ..Config::default() });
    }

    #[test]
    fn invalid_settings_are_rejected() {
        assert!(Config::from_json(r#"{"tolerance": 0}"#).is_err());
        assert!(Config::from_json(r#"{"window_m": 3}"#).is_err());
        assert!(Config::from_json(r#"{"colour": 1}"#).is_err());
    }
}
