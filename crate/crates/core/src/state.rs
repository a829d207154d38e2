//! Dense density matrices and unitary gate application.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{check_targets, BoundGate, GateKind};
use crate::linalg::{hermitian_min_eigenvalue, Matrix};
use crate::{Error, Result, C64, MAX_QUBITS};

/// Tolerance for the unit-trace and Hermiticity checks on construction.
pub const STATE_TOLERANCE: f64 = 1e-9;

/// Mixed state of `n` qubits as a dense `2^n x 2^n` matrix.
///
/// Basis index bit `q` is the state of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    m: Matrix,
}

impl DensityMatrix {
    /// `|0...0><0...0|`.
    pub fn new_pure_ground(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let mut m = Matrix::zeros(1 << n_qubits);
        m[(0, 0)] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, m })
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure_state(amplitudes: &[C64]) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let m = Matrix::from_fn(amplitudes.len(), |r, c| amplitudes[r] * amplitudes[c].conj());
        Self::from_matrix(n_qubits, m)
    }

    /// Wraps a matrix after checking dimension, unit trace and Hermiticity.
    pub fn from_matrix(n_qubits: usize, m: Matrix) -> Result<Self> {
        check_capacity(n_qubits)?;
        if m.dim() != 1 << n_qubits {
            return Err(Error::InvalidState("dimension is not 2^n"));
        }
        if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix"));
        }
        if (m.trace() - C64::new(1.0, 0.0)).norm() > STATE_TOLERANCE {
            return Err(Error::InvalidState("trace is not 1"));
        }
        if m.hermiticity_defect() > STATE_TOLERANCE {
            return Err(Error::InvalidState("not Hermitian"));
        }
        Ok(Self { n_qubits, m })
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, m })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        self.m.as_slice()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        self.m.as_mut_slice()
    }

    /// `rho <- U rho U^dagger` for the gate's unitary on its target qubits.
    pub fn apply_gate(&mut self, gate: &BoundGate) -> Result<()> {
        check_targets(gate.qubits(), self.n_qubits)?;
        match gate.kind() {
            GateKind::Cnot => {
                let q = gate.qubits();
                self.apply_cnot(q[0], q[1]);
            }
            _ => {
                let u = gate.single_qubit_matrix().expect("single-qubit gate");
                self.apply_single_qubit(gate.qubits()[0], &u);
            }
        }
        Ok(())
    }

    /// Applies an arbitrary 2x2 unitary on `qubit`: rows are mixed by `U`,
    /// then columns by `U^dagger`, touching each entry twice.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &[[C64; 2]; 2]) {
        let dim = self.dim();
        let bit = 1usize << qubit;
        let data = self.m.as_mut_slice();
        // rows: rho <- U rho
        for i0 in (0..dim).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            let (lo, hi) = data.split_at_mut(i1 * dim);
            let row0 = &mut lo[i0 * dim..(i0 + 1) * dim];
            let row1 = &mut hi[..dim];
            for (a, b) in row0.iter_mut().zip(row1.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = u[0][0] * x + u[0][1] * y;
                *b = u[1][0] * x + u[1][1] * y;
            }
        }
        // columns: rho <- rho U^dagger
        let ud = [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]];
        for row in data.chunks_exact_mut(dim) {
            for j0 in (0..dim).filter(|j| j & bit == 0) {
                let j1 = j0 | bit;
                let (x, y) = (row[j0], row[j1]);
                row[j0] = x * ud[0][0] + y * ud[1][0];
                row[j1] = x * ud[0][1] + y * ud[1][1];
            }
        }
    }

    /// CNOT is a basis permutation, so conjugation is a row swap and a
    /// column swap.
    fn apply_cnot(&mut self, control: usize, target: usize) {
        let dim = self.dim();
        let (cb, tb) = (1usize << control, 1usize << target);
        let data = self.m.as_mut_slice();
        for i in (0..dim).filter(|i| i & cb != 0 && i & tb == 0) {
            let k = i | tb;
            let (lo, hi) = data.split_at_mut(k * dim);
            lo[i * dim..(i + 1) * dim].swap_with_slice(&mut hi[..dim]);
        }
        for row in data.chunks_exact_mut(dim) {
            for j in (0..dim).filter(|j| j & cb != 0 && j & tb == 0) {
                row.swap(j, j | tb);
            }
        }
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// `Tr(rho^2)`, which for Hermitian `rho` is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.m.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.m.hermiticity_defect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_min_eigenvalue(&self.m)
    }

    /// Reduced single-qubit populations `(p0, p1)` of `qubit`.
    pub fn qubit_populations(&self, qubit: usize) -> (f64, f64) {
        let bit = 1usize << qubit;
        let mut p = [0.0; 2];
        for i in 0..self.dim() {
            p[usize::from(i & bit != 0)] += self.m[(i, i)].re;
        }
        (p[0], p[1])
    }

    /// Largest elementwise modulus of the difference of two states.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.m.max_abs_diff(&other.m)
    }
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidState("at least one qubit is required"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity { requested: n_qubits, max: MAX_QUBITS });
    }
    Ok(())
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState("dimension is not 2^n"));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Scratch buffers reused by the integrator.
pub(crate) fn zeroed(len: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); len]
}
