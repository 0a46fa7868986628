//! Run settings: built-in defaults, overridden by a `key=value` file named by
//! `FLAGRANK_CONFIG`, overridden in turn by command-line flags.

use std::path::{Path, PathBuf};

use flagrank_core::secant::{TerraciniConfig, DEFAULT_CAP_AMBIENT, DEFAULT_CAP_ROWS};
use flagrank_core::{CONFIRM_PRIME, DEFAULT_PRIME};

use crate::CliError;

/// Environment variable holding the path of the configuration file.
pub const CONFIG_ENV: &str = "FLAGRANK_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub prime: u64,
    /// Prime used for the confirming run.
    pub prime2: u64,
    pub seed: u64,
    pub trials: usize,
    pub cap_ambient: usize,
    pub cap_rows: usize,
    /// Newline-delimited JSON report cache; disabled when `None`.
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            prime: DEFAULT_PRIME,
            prime2: CONFIRM_PRIME,
            seed: 0,
            trials: 3,
            cap_ambient: DEFAULT_CAP_AMBIENT,
            cap_rows: DEFAULT_CAP_ROWS,
            cache: None,
            workers: 0,
        }
    }
}

impl Settings {
    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| CliError::Usage(format!("config line {}: {} for {}", lineno + 1, what, key));
            match key {
                "prime" => self.prime = value.parse().map_err(|_| bad("invalid integer"))?,
                "prime2" => self.prime2 = value.parse().map_err(|_| bad("invalid integer"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("invalid integer"))?,
                "trials" => self.trials = value.parse().map_err(|_| bad("invalid integer"))?,
                "cap_ambient" => self.cap_ambient = value.parse().map_err(|_| bad("invalid integer"))?,
                "cap_rows" => self.cap_rows = value.parse().map_err(|_| bad("invalid integer"))?,
                "workers" => self.workers = value.parse().map_err(|_| bad("invalid integer"))?,
                "cache" => self.cache = (!value.is_empty()).then(|| PathBuf::from(value)),
                _ => return Err(bad("unknown key")),
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {}", path.display(), e)))?;
        let mut settings = Settings::default();
        settings.apply_text(&text)?;
        Ok(settings)
    }

    /// Defaults, then the file named by [`CONFIG_ENV`] if set.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) if !path.is_empty() => Settings::from_file(Path::new(&path)),
            _ => Ok(Settings::default()),
        }
    }

    pub fn terracini(&self, force: bool) -> TerraciniConfig {
        TerraciniConfig {
            prime: self.prime,
            seed: self.seed,
            trials: self.trials,
            cap_ambient: self.cap_ambient,
            cap_rows: self.cap_rows,
            force,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let mut s = Settings::default();
        s.apply_text("# comment\nprime = 1000003\nseed=7 # trailing\n\ncache=/tmp/x.ndjson\nworkers=2\n").unwrap();
        assert_eq!((s.prime, s.seed, s.workers), (1_000_003, 7, 2));
        assert_eq!(s.cache.as_deref(), Some(Path::new("/tmp/x.ndjson")));
        assert!(s.apply_text("bogus=1").is_err());
        assert!(s.apply_text("seed").is_err());
        assert!(s.apply_text("trials=-1").is_err());
    }
}
