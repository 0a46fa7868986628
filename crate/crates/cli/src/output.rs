//! Serialization of results: JSON with sorted keys, CSV for report tables.

use serde::Serialize;

use flagrank_core::secant::DefectReport;

use crate::CliError;

/// Pretty JSON with object keys in sorted order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    // serde_json::Map is ordered by key, so going through Value sorts every object
    let value = serde_json::to_value(value).expect("results serialize");
    serde_json::to_string_pretty(&value).expect("values serialize")
}

/// CSV with a header row, one line per report.
pub fn reports_csv<'a>(reports: impl IntoIterator<Item = &'a DefectReport>) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for report in reports {
        writer.serialize(report).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// One-line human summary of a report.
pub fn report_line(r: &DefectReport) -> String {
    let status = if r.certified { "certified" } else { "uncertified" };
    format!(
        "{} h={}: expected {}, computed {}, defect {} (span P^{}, prime {}, seed {}, trials {}, {})",
        r.shape, r.h, r.expected_dim, r.computed_dim, r.defect, r.ambient_dim, r.prime, r.seed, r.trials, status
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted() {
        let mut m = HashMap::new();
        for k in ["zeta", "alpha", "mid"] {
            m.insert(k, 1);
        }
        let s = to_json(&m);
        let (a, z, mid) = (s.find("alpha").unwrap(), s.find("zeta").unwrap(), s.find("mid").unwrap());
        assert!(a < mid && mid < z);
    }
}
