//! Lindblad noise terms, master-equation propagation between gates and the
//! gate-interleaved noisy circuit run.
//!
//! Every collapse operator used here is a single local transition
//! `|to><from|` on one or two qubits (`sigma = |0><1|`, `sigma^dagger sigma =
//! |1><1|`, ...). For `C = |a><b|` the dissipator has the closed index form
//!
//! ```text
//! D[C](rho)[i,j] = [i~a][j~a] rho[i', j'] - 1/2 ([i~b] + [j~b]) rho[i,j]
//! ```
//!
//! where `i~a` means the local bits of `i` equal `a` and `i'` is `i` with its
//! local bits replaced by `b`. No operator matrices are ever formed.

use alloc::vec::Vec;

use crate::circuit::BoundCircuit;
use crate::linalg::Matrix;
use crate::state::{zeroed, DensityMatrix};
use crate::{Error, Result, C64};

/// Trace drift over one interval above which propagation is rejected.
pub const MAX_TRACE_DRIFT: f64 = 1e-6;

/// Thermal occupation used when none is given.
pub const DEFAULT_N_TH: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    /// `gamma D[sigma]`
    AmplitudeDamping,
    /// `gamma D[sigma^dagger sigma]`
    Dephasing,
    /// `gamma (n_th + 1) D[sigma] + gamma n_th D[sigma^dagger]`
    Thermal,
    /// `gamma D[sigma_1^dagger sigma_2] + gamma D[sigma_1 sigma_2^dagger]`
    Correlated,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::AmplitudeDamping => "amplitude_damping",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::Thermal => "thermal",
            NoiseKind::Correlated => "correlated",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "amplitude_damping" => NoiseKind::AmplitudeDamping,
            "dephasing" => NoiseKind::Dephasing,
            "thermal" => NoiseKind::Thermal,
            "correlated" => NoiseKind::Correlated,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        if self == NoiseKind::Correlated {
            2
        } else {
            1
        }
    }
}

/// One error source `L_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTerm {
    kind: NoiseKind,
    qubits: Vec<usize>,
    rate: f64,
    n_th: Option<f64>,
}

impl LindbladTerm {
    pub fn new(kind: NoiseKind, qubits: &[usize], rate: f64, n_th: Option<f64>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidTerm("wrong number of qubits for this kind"));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::DuplicateQubit { qubit: qubits[0] });
        }
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidTerm("rate must be finite and non-negative"));
        }
        match (kind, n_th) {
            (NoiseKind::Thermal, Some(n)) if n.is_finite() && n >= 0.0 => {}
            (NoiseKind::Thermal, _) => return Err(Error::InvalidTerm("thermal term needs a finite n_th >= 0")),
            (_, Some(_)) => return Err(Error::InvalidTerm("n_th is only valid for thermal terms")),
            (_, None) => {}
        }
        Ok(Self { kind, qubits: qubits.to_vec(), rate, n_th })
    }

    pub fn amplitude_damping(qubit: usize, rate: f64) -> Result<Self> {
        Self::new(NoiseKind::AmplitudeDamping, &[qubit], rate, None)
    }

    pub fn dephasing(qubit: usize, rate: f64) -> Result<Self> {
        Self::new(NoiseKind::Dephasing, &[qubit], rate, None)
    }

    pub fn thermal(qubit: usize, rate: f64, n_th: f64) -> Result<Self> {
        Self::new(NoiseKind::Thermal, &[qubit], rate, Some(n_th))
    }

    pub fn correlated(first: usize, second: usize, rate: f64) -> Result<Self> {
        Self::new(NoiseKind::Correlated, &[first, second], rate, None)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn n_th(&self) -> Option<f64> {
        self.n_th
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.qubits.contains(&qubit)
    }

    fn with_rate(&self, rate: f64) -> Self {
        Self { rate, ..self.clone() }
    }

    /// Weighted collapse operators making up this term.
    pub fn collapse_operators(&self) -> Vec<(f64, Collapse)> {
        let q = &self.qubits;
        match self.kind {
            NoiseKind::AmplitudeDamping => alloc::vec![(self.rate, Collapse::lowering(q[0]))],
            NoiseKind::Dephasing => alloc::vec![(self.rate, Collapse::number(q[0]))],
            NoiseKind::Thermal => {
                let n = self.n_th.unwrap_or(DEFAULT_N_TH);
                alloc::vec![(self.rate * (n + 1.0), Collapse::lowering(q[0])), (self.rate * n, Collapse::raising(q[0])),]
            }
            NoiseKind::Correlated => alloc::vec![
                // sigma_1^dagger sigma_2 = |1><0| (x) |0><1|; local bit 0 is q[0]
                (self.rate, Collapse::transition(&[q[0], q[1]], 0b01, 0b10)),
                (self.rate, Collapse::transition(&[q[0], q[1]], 0b10, 0b01)),
            ],
        }
    }
}

/// Local transition operator `|to><from|` on one or two qubits.
///
/// Bit `k` of `to`/`from` is the state of `qubits[k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collapse {
    mask: usize,
    to: usize,
    from: usize,
}

impl Collapse {
    pub fn transition(qubits: &[usize], to: usize, from: usize) -> Self {
        let spread = |bits: usize| qubits.iter().enumerate().fold(0, |acc, (k, &q)| acc | (((bits >> k) & 1) << q));
        let mask = qubits.iter().fold(0, |m, &q| m | 1 << q);
        Self { mask, to: spread(to), from: spread(from) }
    }

    /// `sigma = |0><1|`
    pub fn lowering(qubit: usize) -> Self {
        Self::transition(&[qubit], 0, 1)
    }

    /// `sigma^dagger = |1><0|`
    pub fn raising(qubit: usize) -> Self {
        Self::transition(&[qubit], 1, 0)
    }

    /// `sigma^dagger sigma = |1><1|`
    pub fn number(qubit: usize) -> Self {
        Self::transition(&[qubit], 1, 1)
    }

    /// Highest qubit the operator acts on.
    pub fn top_qubit(&self) -> usize {
        (usize::BITS - 1 - self.mask.leading_zeros()) as usize
    }
}

/// Accumulates `weight * D[C](rho)` into `out`.
fn add_dissipator(rho: &[C64], dim: usize, c: &Collapse, weight: f64, out: &mut [C64]) {
    let Collapse { mask, to, from } = *c;
    let shift = to ^ from;
    for i in 0..dim {
        let i_loc = i & mask;
        let row_out = &mut out[i * dim..(i + 1) * dim];
        let row_in = &rho[i * dim..(i + 1) * dim];
        let i_from = f64::from(u8::from(i_loc == from));
        if i_loc == to {
            let src_row = i ^ shift;
            let src = &rho[src_row * dim..(src_row + 1) * dim];
            for j in 0..dim {
                let j_loc = j & mask;
                let mut v = -0.5 * (i_from + f64::from(u8::from(j_loc == from))) * row_in[j];
                if j_loc == to {
                    v += src[j ^ shift];
                }
                row_out[j] += v * weight;
            }
        } else {
            for j in 0..dim {
                let k = i_from + f64::from(u8::from(j & mask == from));
                if k != 0.0 {
                    row_out[j] -= row_in[j] * (0.5 * k * weight);
                }
            }
        }
    }
}

/// `D[C](rho) = C rho C^dagger - 1/2 {C^dagger C, rho}`.
pub fn dissipator(rho: &DensityMatrix, collapse: &Collapse) -> Result<Matrix> {
    let dim = rho.dim();
    if collapse.top_qubit() >= rho.n_qubits() {
        return Err(Error::QubitOutOfRange { qubit: collapse.top_qubit(), n_qubits: rho.n_qubits() });
    }
    let mut out = zeroed(dim * dim);
    add_dissipator(rho.as_slice(), dim, collapse, 1.0, &mut out);
    Ok(Matrix::from_row_major(dim, out).expect("square"))
}

/// Ordered list of error sources.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseModel {
    terms: Vec<LindbladTerm>,
}

impl NoiseModel {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(terms: Vec<LindbladTerm>) -> Self {
        Self { terms }
    }

    /// The same kind of term with the same rate on every qubit. Correlated
    /// terms pair each qubit with its ring neighbour `(q, q+1 mod n)`, each
    /// unordered pair once.
    pub fn homogeneous(kind: NoiseKind, n_qubits: usize, rate: f64, n_th: Option<f64>) -> Result<Self> {
        let mut terms = Vec::new();
        match kind {
            NoiseKind::Correlated => {
                for (a, b) in ring_pairs(n_qubits) {
                    terms.push(LindbladTerm::correlated(a, b, rate)?);
                }
            }
            NoiseKind::Thermal => {
                let n = n_th.unwrap_or(DEFAULT_N_TH);
                for q in 0..n_qubits {
                    terms.push(LindbladTerm::thermal(q, rate, n)?);
                }
            }
            _ => {
                for q in 0..n_qubits {
                    terms.push(LindbladTerm::new(kind, &[q], rate, None)?);
                }
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[LindbladTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: LindbladTerm) {
        self.terms.push(term);
    }

    /// Concatenation of two models.
    pub fn merged(&self, other: &NoiseModel) -> NoiseModel {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        NoiseModel { terms }
    }

    /// Largest qubit index referenced plus one.
    pub fn min_qubits(&self) -> usize {
        self.terms.iter().flat_map(|t| t.qubits.iter()).map(|q| q + 1).max().unwrap_or(0)
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for t in &self.terms {
            for &q in &t.qubits {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
                }
            }
        }
        Ok(())
    }

    /// Copy without every term that acts on `qubit`.
    pub fn remove_group(&self, qubit: usize) -> NoiseModel {
        NoiseModel { terms: self.terms.iter().filter(|t| !t.touches(qubit)).cloned().collect() }
    }

    /// Copy without the terms at the given indices.
    pub fn remove_terms(&self, indices: &[usize]) -> NoiseModel {
        let terms =
            self.terms.iter().enumerate().filter(|(i, _)| !indices.contains(i)).map(|(_, t)| t.clone()).collect();
        NoiseModel { terms }
    }

    /// Copy with every rate multiplied by `factor`.
    pub fn scale_model(&self, factor: f64) -> Result<NoiseModel> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::InvalidFactor(factor));
        }
        Ok(NoiseModel { terms: self.terms.iter().map(|t| t.with_rate(t.rate * factor)).collect() })
    }

    /// Copy with the rates of the given terms multiplied by `factor`.
    pub fn scale_terms(&self, indices: &[usize], factor: f64) -> Result<NoiseModel> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::InvalidFactor(factor));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| if indices.contains(&i) { t.with_rate(t.rate * factor) } else { t.clone() })
            .collect();
        Ok(NoiseModel { terms })
    }

    /// Non-zero weighted collapse operators of the whole model.
    fn compile(&self) -> Vec<(f64, Collapse)> {
        self.terms.iter().flat_map(|t| t.collapse_operators()).filter(|(w, _)| *w != 0.0).collect()
    }
}

/// Unordered ring neighbours `(q, q+1 mod n)`.
pub fn ring_pairs(n_qubits: usize) -> Vec<(usize, usize)> {
    match n_qubits {
        0 | 1 => Vec::new(),
        2 => alloc::vec![(0, 1)],
        n => (0..n).map(|q| (q, (q + 1) % n)).collect(),
    }
}

/// Time step settings for the propagation between two gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    /// Interval between consecutive gates.
    pub tau: f64,
    /// Runge-Kutta steps per interval.
    pub substeps: usize,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self { tau: 1.0, substeps: 64 }
    }
}

impl PropagatorConfig {
    pub fn new(tau: f64, substeps: usize) -> Result<Self> {
        let cfg = Self { tau, substeps };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidConfig("tau must be positive"));
        }
        if self.substeps == 0 {
            return Err(Error::InvalidConfig("substeps must be at least 1"));
        }
        Ok(())
    }
}

/// `L(rho) = sum_i L_i(rho)`.
pub fn lindblad_rhs(rho: &DensityMatrix, model: &NoiseModel) -> Result<Matrix> {
    model.validate(rho.n_qubits())?;
    let dim = rho.dim();
    let mut out = zeroed(dim * dim);
    for (w, c) in model.compile() {
        add_dissipator(rho.as_slice(), dim, &c, w, &mut out);
    }
    Ok(Matrix::from_row_major(dim, out).expect("square"))
}

/// Classic fourth-order Runge-Kutta for `d rho/dt = L(rho)` with reusable
/// buffers.
struct Propagator {
    ops: Vec<(f64, Collapse)>,
    dim: usize,
    acc: Vec<C64>,
    stage: Vec<C64>,
    k: Vec<C64>,
}

impl Propagator {
    fn new(model: &NoiseModel, dim: usize) -> Self {
        let len = dim * dim;
        Self { ops: model.compile(), dim, acc: zeroed(len), stage: zeroed(len), k: zeroed(len) }
    }

    fn is_trivial(&self) -> bool {
        self.ops.is_empty()
    }

    fn rhs(ops: &[(f64, Collapse)], dim: usize, rho: &[C64], out: &mut [C64]) {
        out.fill(C64::new(0.0, 0.0));
        for (w, c) in ops {
            add_dissipator(rho, dim, c, *w, out);
        }
    }

    fn step(&mut self, y: &mut [C64], h: f64) {
        let Self { ops, dim, acc, stage, k } = self;
        let dim = *dim;
        acc.copy_from_slice(y);
        // k1
        Self::rhs(ops, dim, y, k);
        for i in 0..y.len() {
            acc[i] += k[i] * (h / 6.0);
            stage[i] = y[i] + k[i] * (h / 2.0);
        }
        // k2
        Self::rhs(ops, dim, stage, k);
        for i in 0..y.len() {
            acc[i] += k[i] * (h / 3.0);
            stage[i] = y[i] + k[i] * (h / 2.0);
        }
        // k3
        Self::rhs(ops, dim, stage, k);
        for i in 0..y.len() {
            acc[i] += k[i] * (h / 3.0);
            stage[i] = y[i] + k[i] * h;
        }
        // k4
        Self::rhs(ops, dim, stage, k);
        for i in 0..y.len() {
            y[i] = acc[i] + k[i] * (h / 6.0);
        }
    }

    fn evolve(&mut self, rho: &mut DensityMatrix, duration: f64, substeps: usize) -> Result<()> {
        if self.is_trivial() {
            return Ok(());
        }
        let before = rho.trace();
        let h = duration / substeps as f64;
        let y = rho.data_mut();
        for _ in 0..substeps {
            self.step(y, h);
        }
        let drift = (rho.trace() - before).norm();
        if drift.is_nan() || drift > MAX_TRACE_DRIFT {
            return Err(Error::IntegratorFailure { trace_drift: drift, substeps });
        }
        Ok(())
    }
}

/// `rho <- exp(tau L)(rho)` by `cfg.substeps` Runge-Kutta steps.
///
/// The trace is never renormalized; a drift above [`MAX_TRACE_DRIFT`] is an
/// error.
pub fn evolve(rho: &mut DensityMatrix, model: &NoiseModel, cfg: &PropagatorConfig) -> Result<()> {
    evolve_for(rho, model, cfg.tau, cfg.substeps)
}

/// Like [`evolve`] over an arbitrary `duration` split into `substeps` steps.
pub fn evolve_for(rho: &mut DensityMatrix, model: &NoiseModel, duration: f64, substeps: usize) -> Result<()> {
    PropagatorConfig::new(duration, substeps)?;
    model.validate(rho.n_qubits())?;
    Propagator::new(model, rho.dim()).evolve(rho, duration, substeps)
}

/// Applies `U_1, V_tau, U_2, V_tau, ..., U_G` with no evolution after the
/// last gate.
pub fn run_noisy_circuit(
    rho0: &DensityMatrix,
    circuit: &BoundCircuit,
    model: &NoiseModel,
    cfg: &PropagatorConfig,
) -> Result<DensityMatrix> {
    if circuit.n_qubits() != rho0.n_qubits() {
        return Err(Error::QubitCountMismatch { expected: rho0.n_qubits(), found: circuit.n_qubits() });
    }
    cfg.validate()?;
    model.validate(rho0.n_qubits())?;
    let mut rho = rho0.clone();
    let mut prop = Propagator::new(model, rho.dim());
    for (k, gate) in circuit.gates().iter().enumerate() {
        if k > 0 {
            prop.evolve(&mut rho, cfg.tau, cfg.substeps)?;
        }
        rho.apply_gate(gate)?;
    }
    Ok(rho)
}
