//! Pauli strings, real-weighted Pauli sums and their expectation values.

use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{hermitian_min_eigenvalue, Matrix};
use crate::state::DensityMatrix;
use crate::{Error, Result, C64, MAX_QUBITS};

/// Imaginary part tolerated in `Tr(rho P)` sums before they are rejected.
const IMAG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis; identity on unlisted qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    // sorted by qubit, unique
    factors: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        factors.sort_by_key(|&(q, _)| q);
        if let Some(w) = factors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateQubit { qubit: w[0].0 });
        }
        if let Some(&(q, _)) = factors.last() {
            if q >= MAX_QUBITS {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits: MAX_QUBITS });
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    /// Bits flipped by the string (X or Y positions).
    pub fn x_mask(&self) -> usize {
        self.factors.iter().filter(|(_, p)| *p != Pauli::Z).fold(0, |m, &(q, _)| m | 1 << q)
    }

    /// Bits that contribute a sign (Z or Y positions).
    pub fn z_mask(&self) -> usize {
        self.factors.iter().filter(|(_, p)| *p != Pauli::X).fold(0, |m, &(q, _)| m | 1 << q)
    }

    fn y_count(&self) -> usize {
        self.factors.iter().filter(|(_, p)| *p == Pauli::Y).count()
    }

    /// `P|j> = phase(j) |j ^ x_mask>`; returns the `i^{#Y}` part of the phase.
    fn y_phase(&self) -> C64 {
        match self.y_count() % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    /// `Tr(rho P) = sum_j rho[j, j^x] phase(j)`, walking the `2^n` non-zero
    /// entries of `P`.
    pub fn expectation(&self, rho: &DensityMatrix) -> C64 {
        let dim = rho.dim();
        let (xm, zm) = (self.x_mask(), self.z_mask());
        let data = rho.as_slice();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..dim {
            let v = data[j * dim + (j ^ xm)];
            if (j & zm).count_ones() & 1 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        acc * self.y_phase()
    }

    /// Dense `2^n x 2^n` matrix of the string.
    pub fn to_matrix(&self, n_qubits: usize) -> Matrix {
        let dim = 1usize << n_qubits;
        let (xm, zm) = (self.x_mask(), self.z_mask());
        let phase = self.y_phase();
        let mut m = Matrix::zeros(dim);
        for j in 0..dim {
            let sign = if (j & zm).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            m[(j ^ xm, j)] = phase * sign;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (i, (q, p)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

/// Hermitian operator `sum_k c_k P_k` with real coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Capacity { requested: n_qubits, max: MAX_QUBITS });
        }
        Ok(Self { n_qubits, terms: Vec::new() })
    }

    pub fn push(&mut self, coeff: f64, string: PauliString) -> Result<()> {
        if !coeff.is_finite() {
            return Err(Error::NonFinite("Pauli coefficient"));
        }
        if let Some(q) = string.max_qubit() {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits: self.n_qubits });
            }
        }
        self.terms.push((coeff, string));
        Ok(())
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut sum = Self::new(n_qubits)?;
        for (c, p) in terms {
            sum.push(c, p)?;
        }
        Ok(sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a*self + b*other`, terms concatenated without merging.
    pub fn linear_combination(&self, a: f64, other: &PauliSum, b: f64) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, p)| (a * c, p.clone()))
            .chain(other.terms.iter().map(|(c, p)| (b * c, p.clone())));
        PauliSum::from_terms(self.n_qubits, terms)
    }

    /// `Tr(rho A)` evaluated term by term.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch { expected: self.n_qubits, found: rho.n_qubits() });
        }
        let total: C64 = self.terms.iter().map(|(c, p)| p.expectation(rho) * *c).sum();
        if total.im.abs() > IMAG_TOLERANCE {
            return Err(Error::ComplexExpectation { imag: total.im });
        }
        Ok(total.re)
    }

    /// Dense matrix of the operator.
    pub fn to_matrix(&self) -> Matrix {
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        for (c, p) in &self.terms {
            let (xm, zm) = (p.x_mask(), p.z_mask());
            let phase = p.y_phase() * *c;
            for j in 0..dim {
                let sign = if (j & zm).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
                m[(j ^ xm, j)] += phase * sign;
            }
        }
        m
    }

    /// Lowest eigenvalue of the dense operator.
    pub fn exact_ground_energy(&self) -> Result<f64> {
        if self.n_qubits > MAX_QUBITS {
            return Err(Error::Capacity { requested: self.n_qubits, max: MAX_QUBITS });
        }
        Ok(hermitian_min_eigenvalue(&self.to_matrix()))
    }
}

/// Free-function form of [`PauliSum::expectation`].
pub fn expectation(rho: &DensityMatrix, observable: &PauliSum) -> Result<f64> {
    observable.expectation(rho)
}

/// Free-function form of [`PauliSum::exact_ground_energy`].
pub fn exact_ground_energy(h: &PauliSum) -> Result<f64> {
    h.exact_ground_energy()
}
