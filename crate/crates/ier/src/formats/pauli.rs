//! Pauli-sum text format.
//!
//! ```text
//! # comment
//! qubits 2
//! -0.5 I
//! 0.25 Z0 Z1
//! ```
//!
//! The first content line declares the qubit count; every following line is
//! a real coefficient and a string of `<P><index>` factors, or a bare `I`.

use std::fmt::Write as _;
use std::path::Path;

use ier_core::{Pauli, PauliString, PauliSum};

use super::{content_lines, read_text};
use crate::error::{IerError, Result};

pub fn parse_pauli_sum(text: &str) -> Result<PauliSum> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| IerError::parse(1, "empty Pauli-sum file"))?;
    let n_qubits = parse_header(header, "qubits", line_no)?;
    let mut sum = PauliSum::new(n_qubits).map_err(|e| IerError::parse(line_no, e.to_string()))?;
    for (line_no, line) in lines {
        let mut tokens = line.split_whitespace();
        let coeff = parse_float(tokens.next().expect("non-empty line"), line_no)?;
        let string = parse_pauli_string(tokens, line_no)?;
        sum.push(coeff, string).map_err(|e| IerError::parse(line_no, e.to_string()))?;
    }
    Ok(sum)
}

pub fn read_pauli_sum(path: &Path) -> Result<PauliSum> {
    parse_pauli_sum(&read_text(path)?).map_err(|e| e.in_file(path))
}

/// Writes coefficients with 17 significant digits, which round-trips every
/// `f64` exactly.
pub fn format_pauli_sum(sum: &PauliSum) -> String {
    let mut out = format!("qubits {}\n", sum.n_qubits());
    for (c, p) in sum.terms() {
        writeln!(out, "{c:.16e} {p}").expect("write to string");
    }
    out
}

pub(crate) fn parse_header(line: &str, key: &str, line_no: usize) -> Result<usize> {
    let mut t = line.split_whitespace();
    match (t.next(), t.next(), t.next()) {
        (Some(k), Some(v), None) if k == key => {
            v.parse().map_err(|_| IerError::parse(line_no, format!("bad {key} count {v:?}")))
        }
        _ => Err(IerError::parse(line_no, format!("expected \"{key} <count>\", found {line:?}"))),
    }
}

pub(crate) fn parse_float(token: &str, line_no: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| IerError::parse(line_no, format!("bad number {token:?}")))
}

/// Parses `X0 Y3 Z4` (or a lone `I`) from the remaining tokens.
pub(crate) fn parse_pauli_string<'a>(tokens: impl Iterator<Item = &'a str>, line_no: usize) -> Result<PauliString> {
    let tokens: Vec<&str> = tokens.collect();
    if tokens == ["I"] {
        return Ok(PauliString::identity());
    }
    if tokens.is_empty() {
        return Err(IerError::parse(line_no, "missing Pauli string"));
    }
    let mut factors = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let (head, idx) = tok.split_at(tok.char_indices().nth(1).map_or(tok.len(), |(i, _)| i));
        let op = match head {
            "X" => Pauli::X,
            "Y" => Pauli::Y,
            "Z" => Pauli::Z,
            _ => return Err(IerError::parse(line_no, format!("bad Pauli factor {tok:?}"))),
        };
        let q: usize = idx.parse().map_err(|_| IerError::parse(line_no, format!("bad qubit index in {tok:?}")))?;
        factors.push((q, op));
    }
    PauliString::new(factors).map_err(|e| IerError::parse(line_no, e.to_string()))
}
