//! CSV tables. Floats are written with 12 significant digits.

use std::path::Path;

use crate::error::{IerError, Result};

pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        String::new()
    }
}

/// Renders a header and numeric rows as RFC 4180 CSV (CRLF line endings).
pub fn render(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_float(*v)))?;
    }
    let bytes = w.into_inner().map_err(|e| IerError::Failed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ASCII output"))
}

pub fn write(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    super::write_text(path, &render(header, rows)?)
}
