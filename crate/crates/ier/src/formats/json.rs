//! JSON shapes for noise models, correction reports, VQE results and
//! density-matrix dumps.

use serde::{Deserialize, Serialize};

use ier_core::mitigation::{CorrectionReport, GroupValue};
use ier_core::vqe::VqeResult;
use ier_core::{DensityMatrix, LindbladTerm, NoiseKind, NoiseModel};

use crate::error::{IerError, Result};

/// One entry of a noise-model block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub kind: String,
    pub qubits: Vec<usize>,
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_th: Option<f64>,
}

impl TermSpec {
    pub fn to_term(&self) -> Result<LindbladTerm> {
        let kind = NoiseKind::from_name(&self.kind)
            .ok_or_else(|| IerError::Config(format!("unknown noise kind {:?}", self.kind)))?;
        Ok(LindbladTerm::new(kind, &self.qubits, self.rate, self.n_th)?)
    }

    pub fn from_term(t: &LindbladTerm) -> Self {
        Self { kind: t.kind().name().to_string(), qubits: t.qubits().to_vec(), rate: t.rate(), n_th: t.n_th() }
    }
}

pub fn noise_model_from_specs(specs: &[TermSpec]) -> Result<NoiseModel> {
    Ok(NoiseModel::new(specs.iter().map(TermSpec::to_term).collect::<Result<_>>()?))
}

pub fn parse_noise_model(text: &str) -> Result<NoiseModel> {
    let specs: Vec<TermSpec> = serde_json::from_str(text)?;
    noise_model_from_specs(&specs)
}

pub fn noise_model_to_json(model: &NoiseModel) -> String {
    let specs: Vec<TermSpec> = model.terms().iter().map(TermSpec::from_term).collect();
    serde_json::to_string_pretty(&specs).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub label: String,
    pub value: f64,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inflated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub a_noisy: f64,
    pub a_ideal: Option<f64>,
    pub a_corrected: f64,
    pub correction_magnitude: f64,
    pub residual: Option<f64>,
    pub groups: Vec<GroupRecord>,
    pub variant: String,
}

impl From<&CorrectionReport> for ReportRecord {
    fn from(r: &CorrectionReport) -> Self {
        Self {
            a_noisy: r.a_noisy,
            a_ideal: r.a_ideal,
            a_corrected: r.a_corrected,
            correction_magnitude: r.correction_magnitude,
            residual: r.residual,
            groups: r.groups.iter().map(group_record).collect(),
            variant: r.variant.to_string(),
        }
    }
}

fn group_record(g: &GroupValue) -> GroupRecord {
    GroupRecord { label: g.label.to_string(), value: g.value, weight: g.weight, inflated: g.inflated }
}

pub fn report_to_json(r: &CorrectionReport) -> String {
    serde_json::to_string_pretty(&ReportRecord::from(r)).expect("serializable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeRecord {
    pub theta: Vec<f64>,
    pub energy: f64,
    pub evals: usize,
    pub converged: bool,
    pub history: Vec<(usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_ground_energy: Option<f64>,
}

impl VqeRecord {
    pub fn new(r: &VqeResult, exact_ground_energy: Option<f64>) -> Self {
        Self {
            theta: r.theta_opt.clone(),
            energy: r.energy,
            evals: r.evals,
            converged: r.converged,
            history: r.history.clone(),
            exact_ground_energy,
        }
    }
}

/// Row-major `[re, im]` pairs.
pub fn dump_density_matrix(rho: &DensityMatrix) -> String {
    let pairs: Vec<[f64; 2]> = rho.as_slice().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string(&pairs).expect("serializable")
}

pub fn load_density_matrix(text: &str) -> Result<DensityMatrix> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    let dim = (pairs.len() as f64).sqrt() as usize;
    if dim * dim != pairs.len() || !dim.is_power_of_two() || dim < 2 {
        return Err(IerError::Config(format!("{} entries do not form a 2^n x 2^n matrix", pairs.len())));
    }
    let data = pairs.into_iter().map(|[re, im]| ier_core::C64::new(re, im)).collect();
    let m = ier_core::linalg::Matrix::from_row_major(dim, data).expect("square");
    Ok(DensityMatrix::from_matrix(dim.trailing_zeros() as usize, m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_block() {
        let text = r#"[
            {"kind": "amplitude_damping", "qubits": [0], "rate": 0.001},
            {"kind": "thermal", "qubits": [1], "rate": 0.002, "n_th": 0.5},
            {"kind": "correlated", "qubits": [0, 1], "rate": 0.003}
        ]"#;
        let m = parse_noise_model(text).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.terms()[1].n_th(), Some(0.5));
        assert_eq!(parse_noise_model(&noise_model_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn noise_block_errors() {
        assert!(parse_noise_model(r#"[{"kind": "bitflip", "qubits": [0], "rate": 0.1}]"#).is_err());
        assert!(parse_noise_model(r#"[{"kind": "thermal", "qubits": [0], "rate": 0.1}]"#).is_err());
        assert!(parse_noise_model(r#"[{"kind": "dephasing", "qubits": [0], "rate": -1}]"#).is_err());
        assert!(parse_noise_model(r#"[{"kind": "dephasing", "qubit": [0], "rate": 1}]"#).is_err());
    }

    #[test]
    fn density_dump() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        let text = dump_density_matrix(&rho);
        assert_eq!(text, "[[0.5,0.0],[0.0,0.0],[0.0,0.0],[0.5,0.0]]");
        assert_eq!(load_density_matrix(&text).unwrap(), rho);
        assert!(load_density_matrix("[[1.0,0.0],[0.0,0.0],[0.0,0.0]]").is_err());
    }
}
