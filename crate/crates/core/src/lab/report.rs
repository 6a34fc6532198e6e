use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One checked quantity. `margin ≥ 0` exactly when the row passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub case_id: String,
    pub quantity: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub pass: bool,
}

impl Row {
    fn new(case_id: &str, quantity: &str, value: f64, reference: f64, tolerance: f64, margin: f64) -> Self {
        Self {
            case_id: case_id.into(),
            quantity: quantity.into(),
            value,
            reference,
            tolerance,
            margin,
            pass: margin >= 0.0,
        }
    }

    /// `|value − reference| ≤ tolerance`.
    pub fn close(case_id: &str, quantity: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        Self::new(case_id, quantity, value, reference, tolerance, tolerance - (value - reference).abs())
    }

    /// `value ≤ bound`.
    pub fn at_most(case_id: &str, quantity: &str, value: f64, bound: f64) -> Self {
        Self::new(case_id, quantity, value, bound, 0.0, bound - value)
    }

    /// `value ≥ bound`.
    pub fn at_least(case_id: &str, quantity: &str, value: f64, bound: f64) -> Self {
        Self::new(case_id, quantity, value, bound, 0.0, value - bound)
    }

    /// `value ≥ bound − tolerance`, for bounds that are attained exactly.
    pub fn at_least_within(case_id: &str, quantity: &str, value: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(case_id, quantity, value, bound, tolerance, value - bound + tolerance)
    }

    /// `value ≤ bound + tolerance`.
    pub fn at_most_within(case_id: &str, quantity: &str, value: f64, bound: f64, tolerance: f64) -> Self {
        Self::new(case_id, quantity, value, bound, tolerance, bound + tolerance - value)
    }

    /// A case that could not be computed; always fails.
    pub fn failed(case_id: &str, quantity: &str, err: &Error) -> Self {
        let mut row = Self::new(case_id, quantity, f64::NAN, f64::NAN, 0.0, f64::NEG_INFINITY);
        row.quantity = format!("{quantity}: {err}");
        row
    }

    /// Criterion number encoded in the case id (`c07_…` → 7).
    pub fn criterion(&self) -> Option<u32> {
        self.case_id.strip_prefix('c')?.split('_').next()?.parse().ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub suite: String,
    pub seed: u64,
    pub version: String,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

impl Report {
    /// Rows are sorted by case id; the order within a case is kept.
    pub fn new(suite: &str, seed: u64, wall_time_s: f64, mut rows: Vec<Row>) -> Self {
        rows.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        let metadata =
            Metadata { suite: suite.into(), seed, version: env!("CARGO_PKG_VERSION").into(), wall_time_s };
        Self { metadata, rows }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// Writes `<suite>.csv` and `<suite>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.metadata.suite));
        let json_path = dir.join(format!("{}.json", self.metadata.suite));
        std::fs::write(&csv_path, self.to_csv()?)?;
        let json = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&json_path, json)?;
        Ok((csv_path, json_path))
    }
}
