//! Ansatz generator file.
//!
//! ```text
//! qubits 4
//! params 2
//! gate X 0                 # literal gate, applied first, in order
//! 0 1.0 X0 Z1 Y2           # exp(-i 1.0 theta[0] / 2 X0 Z1 Y2)
//! ```
//!
//! Literal gates use `gate <H|X|CNOT> <qubits..>` or
//! `gate <Rx|Ry|Rz> <qubit> <angle>`; they must precede the generators.

use std::path::Path;

use ier_core::circuit::{Angle, Generator};
use ier_core::{AnsatzSpec, Gate, GateKind};

use super::pauli::{parse_float, parse_header, parse_pauli_string};
use super::{content_lines, read_text};
use crate::error::{IerError, Result};

/// A parsed generator file: qubit count and the UCCSD-style spec.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzFile {
    pub n_qubits: usize,
    pub spec: AnsatzSpec,
}

pub fn parse_ansatz(text: &str) -> Result<AnsatzFile> {
    let mut lines = content_lines(text);
    let (l1, h1) = lines.next().ok_or_else(|| IerError::parse(1, "empty ansatz file"))?;
    let n_qubits = parse_header(h1, "qubits", l1)?;
    let (l2, h2) = lines.next().ok_or_else(|| IerError::parse(l1, "missing \"params <count>\" header"))?;
    let n_params = parse_header(h2, "params", l2)?;

    let mut reference = Vec::new();
    let mut generators = Vec::new();
    for (line_no, line) in lines {
        let mut tokens = line.split_whitespace();
        let first = tokens.next().expect("non-empty line");
        if first == "gate" {
            if !generators.is_empty() {
                return Err(IerError::parse(line_no, "literal gates must come before generators"));
            }
            let gate = parse_gate(tokens, line_no)?;
            check_qubits(gate.qubits(), n_qubits, line_no)?;
            reference.push(gate);
            continue;
        }
        let param: usize =
            first.parse().map_err(|_| IerError::parse(line_no, format!("bad parameter index {first:?}")))?;
        if param >= n_params {
            return Err(IerError::parse(line_no, format!("parameter index {param} >= params {n_params}")));
        }
        let prefactor =
            parse_float(tokens.next().ok_or_else(|| IerError::parse(line_no, "missing prefactor"))?, line_no)?;
        let string = parse_pauli_string(tokens, line_no)?;
        if string.is_identity() {
            return Err(IerError::parse(line_no, "generator string must not be the identity"));
        }
        if let Some(q) = string.max_qubit().filter(|&q| q >= n_qubits) {
            return Err(IerError::parse(line_no, format!("qubit {q} >= qubits {n_qubits}")));
        }
        generators.push(Generator { string, param, prefactor });
    }
    if generators.is_empty() {
        return Err(IerError::parse(l2, "no generators"));
    }
    Ok(AnsatzFile { n_qubits, spec: AnsatzSpec::UccsdLike { n_params, reference, generators } })
}

pub fn read_ansatz(path: &Path) -> Result<AnsatzFile> {
    parse_ansatz(&read_text(path)?).map_err(|e| e.in_file(path))
}

fn check_qubits(qubits: &[usize], n_qubits: usize, line_no: usize) -> Result<()> {
    match qubits.iter().find(|&&q| q >= n_qubits) {
        Some(q) => Err(IerError::parse(line_no, format!("qubit {q} >= qubits {n_qubits}"))),
        None => Ok(()),
    }
}

fn parse_gate<'a>(mut tokens: impl Iterator<Item = &'a str>, line_no: usize) -> Result<Gate> {
    let name = tokens.next().ok_or_else(|| IerError::parse(line_no, "missing gate name"))?;
    let kind = match name {
        "H" => GateKind::H,
        "X" => GateKind::X,
        "Rx" => GateKind::Rx,
        "Ry" => GateKind::Ry,
        "Rz" => GateKind::Rz,
        "CNOT" => GateKind::Cnot,
        _ => return Err(IerError::parse(line_no, format!("unknown gate {name:?}"))),
    };
    let rest: Vec<&str> = tokens.collect();
    let (qubit_tokens, angle) = if kind.is_rotation() {
        let (a, q) = rest.split_last().ok_or_else(|| IerError::parse(line_no, "missing angle"))?;
        (q, Some(Angle::Literal(parse_float(a, line_no)?)))
    } else {
        (&rest[..], None)
    };
    let qubits = qubit_tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| IerError::parse(line_no, format!("bad qubit {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Gate::new(kind, &qubits, angle).map_err(|e| IerError::parse(line_no, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_and_generators() {
        let f = parse_ansatz("qubits 2\nparams 1\ngate X 0\ngate Rz 1 0.5\n0 -0.5 X0 Y1\n").unwrap();
        assert_eq!(f.n_qubits, 2);
        let AnsatzSpec::UccsdLike { n_params, reference, generators } = f.spec else { panic!() };
        assert_eq!(n_params, 1);
        assert_eq!(reference, vec![Gate::x(0), Gate::rz(1, Angle::Literal(0.5))]);
        assert_eq!(generators[0].prefactor, -0.5);
    }

    #[test]
    fn rejects_bad_files() {
        for (bad, line) in [
            ("qubits 2\nparams 1\n1 1.0 X0\n", 3),
            ("qubits 2\nparams 1\n0 1.0 I\n", 3),
            ("qubits 2\nparams 1\n0 1.0 X0\ngate X 0\n", 4),
            ("qubits 2\nparams 1\ngate CNOT 0 0\n0 1.0 X0\n", 3),
            ("qubits 2\nparams 1\n0 1.0 X5\n", 3),
            ("qubits 2\nparams 1\n", 2),
        ] {
            match parse_ansatz(bad) {
                Err(IerError::Parse { line: l, .. }) => assert_eq!(l, line, "{bad:?}"),
                other => panic!("{bad:?}: {other:?}"),
            }
        }
    }
}
