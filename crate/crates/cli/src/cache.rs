//! Persistent report cache: one JSON object per line, keyed by
//! `(shape, h, prime, seed, trials)`. Later lines win; unreadable lines are
//! ignored, so the file may be truncated or deleted at any time.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use flagrank_core::secant::{DefectReport, ReportCache, TerraciniConfig};
use flagrank_core::FlagShape;

use crate::CliError;

type Key = (String, usize, u64, u64, usize);

fn key_of(report: &DefectReport) -> Key {
    (report.shape.to_string(), report.h, report.prime, report.seed, report.trials)
}

#[derive(Debug)]
pub struct NdjsonCache {
    path: PathBuf,
    entries: HashMap<Key, DefectReport>,
}

impl NdjsonCache {
    /// Loads `path`; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self, CliError> {
        let mut entries = HashMap::new();
        match std::fs::read_to_string(path) {
            Ok(text) => {
                for line in text.lines() {
                    if let Ok(report) = serde_json::from_str::<DefectReport>(line) {
                        entries.insert(key_of(&report), report);
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(CliError::Io(format!("cannot read cache {}: {}", path.display(), e))),
        }
        Ok(NdjsonCache { path: path.to_path_buf(), entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn append(&self, report: &DefectReport) -> std::io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(report).expect("reports serialize"))
    }
}

impl ReportCache for NdjsonCache {
    fn get(&self, shape: &FlagShape, h: usize, config: &TerraciniConfig, confirm_prime: Option<u64>) -> Option<DefectReport> {
        let report = self.entries.get(&(shape.to_string(), h, config.prime, config.seed, config.trials))?;
        match confirm_prime {
            Some(p) if !(report.certified && report.confirm_prime == Some(p)) => None,
            _ => Some(report.clone()),
        }
    }

    fn put(&mut self, report: &DefectReport) {
        // the cache is an optimization, a failed write only costs a recomputation
        let _ = self.append(report);
        self.entries.insert(key_of(report), report.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flagrank_core::secant::terracini_dim;

    #[test]
    fn round_trips_and_ignores_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.ndjson");
        let config = TerraciniConfig::default();
        let shape: FlagShape = "0,1;2".parse().unwrap();
        let report = terracini_dim(&shape, 2, &config).unwrap();
        {
            let mut cache = NdjsonCache::open(&path).unwrap();
            assert!(cache.is_empty());
            cache.put(&report);
        }
        std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{not json\n").unwrap();
        let cache = NdjsonCache::open(&path).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.get(&shape, 2, &config, None), Some(report));
        assert_eq!(cache.get(&shape, 2, &config, Some(flagrank_core::CONFIRM_PRIME)), None);
        assert_eq!(cache.get(&shape, 3, &config, None), None);
    }
}
