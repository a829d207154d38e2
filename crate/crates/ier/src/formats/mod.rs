//! On-disk formats: Pauli sums, ansatz generator lists, noise models,
//! correction reports, density-matrix dumps and CSV tables.

pub mod ansatz;
pub mod csv_out;
pub mod json;
pub mod pauli;

use std::path::Path;

use crate::error::{IerError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| IerError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| IerError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| IerError::io(path, e))
}

/// Lines with comments stripped, paired with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}
