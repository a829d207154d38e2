//! Individual error reduction.
//!
//! The observable is measured once with every error source active, once per
//! removal group with that group's sources switched off, and the results are
//! combined as
//!
//! ```text
//! A~ = <A> - sum_i w_i (<A> - <A_i>)
//! ```
//!
//! Groups follow the per-qubit sweep: group `q` switches off every term that
//! acts on qubit `q`. A term acting on `k` qubits is therefore switched off in
//! `k` groups and enters each with weight `1/k`, so that summed over groups
//! every term is removed exactly once. When a qubit carries terms of
//! different multiplicities its group is split into one sub-group per
//! multiplicity, keeping the weight uniform within a group.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::BoundCircuit;
use crate::hamiltonian::PauliSum;
use crate::noise::{run_noisy_circuit, NoiseModel, PropagatorConfig};
use crate::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupLabel {
    /// Every term touching the qubit.
    Qubit(usize),
    /// Terms touching the qubit that act on `multiplicity` qubits.
    QubitSplit { qubit: usize, multiplicity: usize },
    /// An explicit set of term indices.
    Terms(Vec<usize>),
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Qubit(q) => write!(f, "q{q}"),
            GroupLabel::QubitSplit { qubit, multiplicity } => write!(f, "q{qubit}/k{multiplicity}"),
            GroupLabel::Terms(t) => {
                let list: Vec<String> = t.iter().map(|i| format!("{i}")).collect();
                write!(f, "terms[{}]", list.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemovalGroup {
    pub label: GroupLabel,
    /// Indices into the noise model.
    pub removed_terms: Vec<usize>,
    pub weight: f64,
}

/// Per-qubit removal groups with multiplicity weights.
pub fn build_groups(model: &NoiseModel, n_qubits: usize) -> Result<Vec<RemovalGroup>> {
    model.validate(n_qubits)?;
    let mut groups = Vec::new();
    for q in 0..n_qubits {
        let touching: Vec<usize> = (0..model.len()).filter(|&i| model.terms()[i].touches(q)).collect();
        if touching.is_empty() {
            continue;
        }
        let mut multiplicities: Vec<usize> = touching.iter().map(|&i| model.terms()[i].qubits().len()).collect();
        multiplicities.sort_unstable();
        multiplicities.dedup();
        let split = multiplicities.len() > 1;
        for k in multiplicities {
            let removed_terms: Vec<usize> =
                touching.iter().copied().filter(|&i| model.terms()[i].qubits().len() == k).collect();
            let label = if split { GroupLabel::QubitSplit { qubit: q, multiplicity: k } } else { GroupLabel::Qubit(q) };
            groups.push(RemovalGroup { label, removed_terms, weight: 1.0 / k as f64 });
        }
    }
    Ok(groups)
}

/// `a_noisy - sum_i w_i (a_noisy - a_i)`.
pub fn corrected_value(a_noisy: f64, removed: &[(f64, f64)]) -> f64 {
    let correction: f64 = removed.iter().map(|&(a_i, w)| w * (a_noisy - a_i)).sum();
    a_noisy - correction
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// Each group's terms switched off.
    Removal,
    /// Each group's rates multiplied by `factor`; with `per_qubit == false`
    /// there is a single group holding every term.
    Inflation { factor: f64, per_qubit: bool },
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Removal => f.write_str("removal"),
            Variant::Inflation { factor, per_qubit: true } => write!(f, "inflation_per_qubit:{factor}"),
            Variant::Inflation { factor, per_qubit: false } => write!(f, "inflation_global:{factor}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupValue {
    pub label: GroupLabel,
    /// `<A_i>`: the observable with the group's noise removed. For the
    /// inflation variant this is the equivalent removed value
    /// `<A> - (<A_inflated> - <A>) / (factor - 1)`.
    pub value: f64,
    pub weight: f64,
    /// The measured inflated-noise value, inflation variant only.
    pub inflated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionReport {
    pub a_noisy: f64,
    pub groups: Vec<GroupValue>,
    pub a_corrected: f64,
    pub a_ideal: Option<f64>,
    pub correction_magnitude: f64,
    pub residual: Option<f64>,
    pub variant: Variant,
}

impl CorrectionReport {
    pub fn assemble(a_noisy: f64, groups: Vec<GroupValue>, a_ideal: Option<f64>, variant: Variant) -> Self {
        let pairs: Vec<(f64, f64)> = groups.iter().map(|g| (g.value, g.weight)).collect();
        let a_corrected = corrected_value(a_noisy, &pairs);
        Self {
            a_noisy,
            groups,
            a_corrected,
            a_ideal,
            correction_magnitude: (a_corrected - a_noisy).abs(),
            residual: a_ideal.map(|a| (a_corrected - a).abs()),
            variant,
        }
    }

    /// Recomputes the corrected value from the stored fields.
    pub fn is_consistent(&self) -> bool {
        let pairs: Vec<(f64, f64)> = self.groups.iter().map(|g| (g.value, g.weight)).collect();
        corrected_value(self.a_noisy, &pairs) == self.a_corrected
    }

    /// `|<A> - <A_a>|`, when the ideal value is known.
    pub fn uncorrected_error(&self) -> Option<f64> {
        self.a_ideal.map(|a| (self.a_noisy - a).abs())
    }
}

/// The independent noise models one correction needs, plus how to combine
/// their expectation values.
///
/// `models()[0]` is the full model, `models()[1]` the empty model, and
/// `models()[2 + i]` belongs to `groups()[i]`. The runs share nothing, so a
/// caller may evaluate them in any order or in parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct MitigationPlan {
    groups: Vec<RemovalGroup>,
    models: Vec<NoiseModel>,
    variant: Variant,
}

impl MitigationPlan {
    pub fn removal(model: &NoiseModel, n_qubits: usize) -> Result<Self> {
        let groups = build_groups(model, n_qubits)?;
        let mut models = alloc::vec![model.clone(), NoiseModel::empty()];
        models.extend(groups.iter().map(|g| model.remove_terms(&g.removed_terms)));
        Ok(Self { groups, models, variant: Variant::Removal })
    }

    pub fn inflation(model: &NoiseModel, n_qubits: usize, factor: f64, per_qubit: bool) -> Result<Self> {
        if !(factor.is_finite() && factor > 1.0) {
            return Err(Error::InvalidFactor(factor));
        }
        let groups = if per_qubit {
            build_groups(model, n_qubits)?
        } else {
            model.validate(n_qubits)?;
            if model.is_empty() {
                Vec::new()
            } else {
                let all: Vec<usize> = (0..model.len()).collect();
                alloc::vec![RemovalGroup { label: GroupLabel::Terms(all.clone()), removed_terms: all, weight: 1.0 }]
            }
        };
        let mut models = alloc::vec![model.clone(), NoiseModel::empty()];
        for g in &groups {
            models.push(model.scale_terms(&g.removed_terms, factor)?);
        }
        Ok(Self { groups, models, variant: Variant::Inflation { factor, per_qubit } })
    }

    pub fn groups(&self) -> &[RemovalGroup] {
        &self.groups
    }

    pub fn models(&self) -> &[NoiseModel] {
        &self.models
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Builds the report from one expectation value per model, in
    /// `models()` order.
    pub fn assemble(&self, values: &[f64]) -> Result<CorrectionReport> {
        if values.len() != self.models.len() {
            return Err(Error::InvalidConfig("one value per planned run is required"));
        }
        let a_noisy = values[0];
        let a_ideal = values[1];
        let groups = self
            .groups
            .iter()
            .zip(&values[2..])
            .map(|(g, &v)| match self.variant {
                Variant::Removal => GroupValue { label: g.label.clone(), value: v, weight: g.weight, inflated: None },
                Variant::Inflation { factor, .. } => GroupValue {
                    label: g.label.clone(),
                    value: a_noisy - (v - a_noisy) / (factor - 1.0),
                    weight: g.weight,
                    inflated: Some(v),
                },
            })
            .collect();
        Ok(CorrectionReport::assemble(a_noisy, groups, Some(a_ideal), self.variant))
    }
}

/// `Tr(rho(T) A)` for the circuit run from `|0...0>` under `model`.
pub fn measure(
    circuit: &BoundCircuit,
    model: &NoiseModel,
    observable: &PauliSum,
    cfg: &PropagatorConfig,
) -> Result<f64> {
    if observable.n_qubits() != circuit.n_qubits() {
        return Err(Error::QubitCountMismatch { expected: circuit.n_qubits(), found: observable.n_qubits() });
    }
    let rho0 = DensityMatrix::new_pure_ground(circuit.n_qubits())?;
    let rho = run_noisy_circuit(&rho0, circuit, model, cfg)?;
    observable.expectation(&rho)
}

fn run_plan(
    plan: &MitigationPlan,
    circuit: &BoundCircuit,
    observable: &PauliSum,
    cfg: &PropagatorConfig,
) -> Result<CorrectionReport> {
    let values = plan.models().iter().map(|m| measure(circuit, m, observable, cfg)).collect::<Result<Vec<f64>>>()?;
    plan.assemble(&values)
}

/// Full-noise run, one run per removal group and the noiseless reference,
/// executed one after another.
pub fn run_mitigation(
    circuit: &BoundCircuit,
    model: &NoiseModel,
    observable: &PauliSum,
    cfg: &PropagatorConfig,
) -> Result<CorrectionReport> {
    run_plan(&MitigationPlan::removal(model, circuit.n_qubits())?, circuit, observable, cfg)
}

/// Correction from runs with each group's noise inflated by `factor`
/// instead of removed. Agrees with [`run_mitigation`] to first order in the
/// noise.
pub fn scaled_noise_correction(
    circuit: &BoundCircuit,
    model: &NoiseModel,
    observable: &PauliSum,
    factor: f64,
    per_qubit: bool,
    cfg: &PropagatorConfig,
) -> Result<CorrectionReport> {
    let plan = MitigationPlan::inflation(model, circuit.n_qubits(), factor, per_qubit)?;
    run_plan(&plan, circuit, observable, cfg)
}
