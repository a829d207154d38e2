//! Gate IR with symbolic rotation angles, Pauli-exponential compilation and
//! the two ansatz families.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::hamiltonian::{Pauli, PauliString};
use crate::linalg::Matrix;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Rx,
    Ry,
    Rz,
    Cnot,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Cnot {
            2
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::Cnot => "CNOT",
        }
    }
}

/// Rotation angle, either fixed or `prefactor * theta[index]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Literal(f64),
    Param { index: usize, prefactor: f64 },
}

impl Angle {
    pub fn param(index: usize) -> Self {
        Angle::Param { index, prefactor: 1.0 }
    }

    fn scaled(self, s: f64) -> Self {
        match self {
            Angle::Literal(a) => Angle::Literal(a * s),
            Angle::Param { index, prefactor } => Angle::Param { index, prefactor: prefactor * s },
        }
    }

    fn resolve(self, theta: &[f64]) -> f64 {
        match self {
            Angle::Literal(a) => a,
            Angle::Param { index, prefactor } => prefactor * theta[index],
        }
    }
}

/// Target list of a gate; CNOT stores `[control, target]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Targets {
    qubits: [usize; 2],
    len: u8,
}

impl Targets {
    fn one(q: usize) -> Self {
        Self { qubits: [q, 0], len: 1 }
    }

    fn two(a: usize, b: usize) -> Self {
        Self { qubits: [a, b], len: 2 }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.qubits[..self.len as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Targets,
    angle: Option<Angle>,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, targets: Targets::one(q), angle: None }
    }

    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, targets: Targets::one(q), angle: None }
    }

    pub fn rx(q: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Rx, targets: Targets::one(q), angle: Some(angle) }
    }

    pub fn ry(q: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Ry, targets: Targets::one(q), angle: Some(angle) }
    }

    pub fn rz(q: usize, angle: Angle) -> Self {
        Self { kind: GateKind::Rz, targets: Targets::one(q), angle: Some(angle) }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, targets: Targets::two(control, target), angle: None }
    }

    /// Generic constructor that checks the kind/arity/angle combination.
    pub fn new(kind: GateKind, qubits: &[usize], angle: Option<Angle>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::InvalidGate("wrong number of target qubits"));
        }
        if kind.is_rotation() != angle.is_some() {
            return Err(Error::InvalidGate("rotations need exactly one angle, other gates none"));
        }
        let targets = if kind.arity() == 2 {
            if qubits[0] == qubits[1] {
                return Err(Error::DuplicateQubit { qubit: qubits[0] });
            }
            Targets::two(qubits[0], qubits[1])
        } else {
            Targets::one(qubits[0])
        };
        Ok(Self { kind, targets, angle })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        self.targets.as_slice()
    }

    pub fn angle(&self) -> Option<Angle> {
        self.angle
    }

    fn validate(&self, n_qubits: usize, n_params: usize) -> Result<()> {
        check_targets(self.qubits(), n_qubits)?;
        if let Some(Angle::Param { index, prefactor }) = self.angle {
            if index >= n_params {
                return Err(Error::ParameterIndex { index, n_params });
            }
            if !prefactor.is_finite() {
                return Err(Error::NonFinite("angle prefactor"));
            }
        }
        if let Some(Angle::Literal(a)) = self.angle {
            if !a.is_finite() {
                return Err(Error::NonFinite("gate angle"));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_targets(qubits: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit { qubit: q });
        }
    }
    Ok(())
}

/// A gate whose angle is a plain number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundGate {
    kind: GateKind,
    targets: Targets,
    angle: f64,
}

impl BoundGate {
    pub fn new(kind: GateKind, qubits: &[usize], angle: f64) -> Result<Self> {
        if kind.is_rotation() && !angle.is_finite() {
            return Err(Error::NonFinite("rotation angle"));
        }
        let g = Gate::new(kind, qubits, kind.is_rotation().then_some(Angle::Literal(angle)))?;
        Ok(Self { kind, targets: g.targets, angle: if kind.is_rotation() { angle } else { 0.0 } })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        self.targets.as_slice()
    }

    /// Rotation angle; zero for non-rotation gates.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Self {
        Self { angle: -self.angle, ..*self }
    }

    /// 2x2 unitary of a single-qubit gate, `None` for CNOT.
    pub fn single_qubit_matrix(&self) -> Option<[[C64; 2]; 2]> {
        let z = C64::new(0.0, 0.0);
        let (c, s) = (libm::cos(self.angle / 2.0), libm::sin(self.angle / 2.0));
        let m = match self.kind {
            GateKind::H => {
                let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            GateKind::X => [[z, C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), z]],
            GateKind::Rx => [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]],
            GateKind::Ry => [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]],
            GateKind::Rz => [[C64::new(c, -s), z], [z, C64::new(c, s)]],
            GateKind::Cnot => return None,
        };
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_params: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_params: usize) -> Self {
        Self { n_qubits, n_params, gates: Vec::new() }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits, self.n_params)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Resolves every symbolic angle against `theta`.
    pub fn bind(&self, theta: &[f64]) -> Result<BoundCircuit> {
        if theta.len() != self.n_params {
            return Err(Error::ParameterCount { expected: self.n_params, found: theta.len() });
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("parameter vector"));
        }
        let gates = self
            .gates
            .iter()
            .map(|g| BoundGate { kind: g.kind, targets: g.targets, angle: g.angle.map_or(0.0, |a| a.resolve(theta)) })
            .collect();
        Ok(BoundCircuit { n_qubits: self.n_qubits, gates })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCircuit {
    n_qubits: usize,
    gates: Vec<BoundGate>,
}

impl BoundCircuit {
    pub fn new(n_qubits: usize, gates: Vec<BoundGate>) -> Result<Self> {
        for g in &gates {
            check_targets(g.qubits(), n_qubits)?;
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[BoundGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Dense unitary `U_G ... U_1`. Fails beyond [`crate::MAX_QUBITS`].
    pub fn unitary(&self) -> Result<Matrix> {
        if self.n_qubits > crate::MAX_QUBITS {
            return Err(Error::Capacity { requested: self.n_qubits, max: crate::MAX_QUBITS });
        }
        let dim = 1usize << self.n_qubits;
        let mut u = Matrix::identity(dim);
        let data = u.as_mut_slice();
        for g in &self.gates {
            match g.single_qubit_matrix() {
                Some(m) => {
                    let bit = 1usize << g.qubits()[0];
                    for i in (0..dim).filter(|i| i & bit == 0) {
                        for c in 0..dim {
                            let (a, b) = (data[i * dim + c], data[(i | bit) * dim + c]);
                            data[i * dim + c] = m[0][0] * a + m[0][1] * b;
                            data[(i | bit) * dim + c] = m[1][0] * a + m[1][1] * b;
                        }
                    }
                }
                None => {
                    let (cb, tb) = (1usize << g.qubits()[0], 1usize << g.qubits()[1]);
                    for i in (0..dim).filter(|i| i & cb != 0 && i & tb == 0) {
                        for c in 0..dim {
                            data.swap(i * dim + c, (i | tb) * dim + c);
                        }
                    }
                }
            }
        }
        Ok(u)
    }
}

/// Gate sequence for `exp(-i angle/2 P)`.
///
/// Each involved qubit is rotated into the Z basis (H for X, Rx(pi/2) for Y),
/// parities are collected with a CNOT ladder in ascending qubit order onto the
/// highest involved qubit, an Rz carries the angle, and everything before the
/// Rz is undone in reverse.
pub fn compile_pauli_exponential(p: &PauliString, angle: Angle, n_qubits: usize) -> Result<Vec<Gate>> {
    if p.is_identity() {
        return Err(Error::EmptyPauliString);
    }
    if let Some(q) = p.max_qubit() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
    }
    let factors = p.factors();
    let mut head = Vec::with_capacity(2 * factors.len());
    for &(q, op) in factors {
        match op {
            Pauli::X => head.push(Gate::h(q)),
            Pauli::Y => head.push(Gate::rx(q, Angle::Literal(FRAC_PI_2))),
            Pauli::Z => {}
        }
    }
    for w in factors.windows(2) {
        head.push(Gate::cnot(w[0].0, w[1].0));
    }
    let top = factors[factors.len() - 1].0;
    let mut gates = head.clone();
    gates.push(Gate::rz(top, angle));
    for g in head.into_iter().rev() {
        let undo = match (g.kind, g.angle) {
            (GateKind::Rx, Some(a)) => Gate::rx(g.targets.qubits[0], a.scaled(-1.0)),
            _ => g,
        };
        gates.push(undo);
    }
    Ok(gates)
}

/// One factor `exp(-i prefactor*theta[param]/2 P)` of a UCCSD-style product.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub string: PauliString,
    pub param: usize,
    pub prefactor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnsatzSpec {
    /// Fixed reference-state gates followed by the generator exponentials in
    /// listed order.
    UccsdLike { n_params: usize, reference: Vec<Gate>, generators: Vec<Generator> },
    /// Rx Rz on every qubit, then `layers` repetitions of a Hadamard/CNOT ring
    /// followed by Rz Rx Rz on every qubit.
    Entangling { layers: usize },
}

impl AnsatzSpec {
    pub fn n_params(&self, n_qubits: usize) -> usize {
        match self {
            AnsatzSpec::UccsdLike { n_params, .. } => *n_params,
            AnsatzSpec::Entangling { layers } => 2 * n_qubits + 3 * n_qubits * layers,
        }
    }
}

pub fn build_ansatz(spec: &AnsatzSpec, n_qubits: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n_qubits, spec.n_params(n_qubits));
    match spec {
        AnsatzSpec::UccsdLike { reference, generators, .. } => {
            if generators.is_empty() {
                return Err(Error::InvalidConfig("UCCSD-style ansatz without generators"));
            }
            circuit.extend(reference.iter().cloned())?;
            for g in generators {
                let angle = Angle::Param { index: g.param, prefactor: g.prefactor };
                circuit.extend(compile_pauli_exponential(&g.string, angle, n_qubits)?)?;
            }
        }
        AnsatzSpec::Entangling { layers } => {
            if *layers == 0 {
                return Err(Error::InvalidConfig("entangling ansatz needs at least one layer"));
            }
            if n_qubits < 2 {
                return Err(Error::InvalidConfig("entangling ansatz needs at least two qubits"));
            }
            for q in 0..n_qubits {
                circuit.push(Gate::rx(q, Angle::param(2 * q)))?;
                circuit.push(Gate::rz(q, Angle::param(2 * q + 1)))?;
            }
            for layer in 0..*layers {
                for q in 0..n_qubits {
                    circuit.push(Gate::h(q))?;
                    circuit.push(Gate::cnot(q, (q + 1) % n_qubits))?;
                }
                for q in 0..n_qubits {
                    let base = 2 * n_qubits + 3 * (layer * n_qubits + q);
                    circuit.push(Gate::rz(q, Angle::param(base)))?;
                    circuit.push(Gate::rx(q, Angle::param(base + 1)))?;
                    circuit.push(Gate::rz(q, Angle::param(base + 2)))?;
                }
            }
        }
    }
    Ok(circuit)
}
