//! Result rows and deterministic CSV/JSON rendering.
//!
//! The CSV column order is part of the output contract and is versioned by
//! the `# xy-entropy v<semver>` comment line. Floats render with Rust's
//! shortest-roundtrip formatter, so reruns are byte-identical.

use serde::Serialize;
use std::fs;
use std::path::Path;

/// Column names, in serialization order, for entropy and sweep rows.
pub const RESULT_FIELDS: &str = "gamma,h,case_label,sigma,tau0,k,S_exact_L,S_series,S_integral,S_closed,max_pairwise_delta,status";

/// Versioned comment line that opens every CSV output.
pub fn csv_preamble() -> String {
    format!("# xy-entropy v{}\n", env!("CARGO_PKG_VERSION"))
}

/// One evaluated (gamma, h) point. Fields for methods that were not run (or
/// rows that were skipped) stay `None`: empty CSV field, JSON null.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub gamma: f64,
    pub h: f64,
    pub case_label: String,
    pub sigma: Option<u8>,
    pub tau0: Option<f64>,
    pub k: Option<f64>,
    #[serde(rename = "S_exact_L")]
    pub s_exact_l: Option<f64>,
    #[serde(rename = "S_series")]
    pub s_series: Option<f64>,
    #[serde(rename = "S_integral")]
    pub s_integral: Option<f64>,
    #[serde(rename = "S_closed")]
    pub s_closed: Option<f64>,
    pub max_pairwise_delta: Option<f64>,
    pub status: String,
}

/// NaN is never serialized; it degrades to an empty field / null.
fn field(v: Option<f64>) -> String {
    match v {
        Some(v) if !v.is_nan() => format!("{v}"),
        _ => String::new(),
    }
}

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            self.gamma,
            self.h,
            self.case_label,
            self.sigma.map(|s| s.to_string()).unwrap_or_default(),
            field(self.tau0),
            field(self.k),
            field(self.s_exact_l),
            field(self.s_series),
            field(self.s_integral),
            field(self.s_closed),
            field(self.max_pairwise_delta),
            self.status
        )
    }
}

/// Render rows as a complete CSV document.
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = csv_preamble();
    out.push_str(RESULT_FIELDS);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
    }
    out
}

/// Render rows as a JSON array (single row: still an array for sweep, the
/// entropy command serializes the row object directly).
pub fn rows_to_json(rows: &[ResultRow]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
    out.push('\n');
    out
}

/// Write to stdout (no path) or atomically to `path`: content goes to a temp
/// file in the same directory and is renamed into place, so a failed write
/// never leaves a partial output file behind.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), String> {
    let Some(path) = path else {
        print!("{content}");
        return Ok(());
    };
    let name = path
        .file_name()
        .ok_or_else(|| format!("output path {} has no file name", path.display()))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    if let Err(e) = fs::write(&tmp, content) {
        let _ = fs::remove_file(&tmp);
        return Err(format!("write {}: {e}", path.display()));
    }
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(format!("rename to {}: {e}", path.display()));
    }
    Ok(())
}
