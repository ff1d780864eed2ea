//! Plain key=value configuration files. Values from the file fill in only
//! the options the command line left unset.

use std::collections::HashMap;
use std::path::Path;

use exdir::{Error, Result};

#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: HashMap<String, String>,
}

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        let mut entries = HashMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidParameter {
                    reason: format!("config line {}: expected KEY=VALUE, got '{line}'", index + 1),
                });
            };
            entries.insert(normalize(key), value.trim().to_string());
        }
        Ok(ConfigMap { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    /// Parses the config value for `key` when `flag` is unset.
    pub fn fill<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| Error::InvalidParameter {
                reason: format!("config key '{key}': {e}"),
            }),
        }
    }
}

// keys are case-insensitive; '-' and '_' are interchangeable
fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes_keys() {
        let dir = std::env::temp_dir().join(format!("exdir-config-{}", std::process::id()));
        std::fs::write(&dir, "# comment\nk-fraction = 0.1\nCRITERION=qaic\n\n").unwrap();
        let cfg = ConfigMap::load(Some(&dir)).unwrap();
        assert_eq!(cfg.get("k_fraction"), Some("0.1"));
        assert_eq!(cfg.get("criterion"), Some("qaic"));
        assert_eq!(cfg.fill(Some(0.5f64), "k_fraction").unwrap(), Some(0.5));
        assert_eq!(cfg.fill(None::<f64>, "k_fraction").unwrap(), Some(0.1));
        assert_eq!(cfg.fill(None::<f64>, "missing").unwrap(), None);
        std::fs::remove_file(&dir).ok();
    }

    #[test]
    fn rejects_malformed_lines() {
        let dir = std::env::temp_dir().join(format!("exdir-config-bad-{}", std::process::id()));
        std::fs::write(&dir, "just a line\n").unwrap();
        assert!(ConfigMap::load(Some(&dir)).is_err());
        std::fs::remove_file(&dir).ok();
    }
}
