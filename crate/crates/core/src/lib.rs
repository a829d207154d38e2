//! Density-matrix simulation of noisy gate sequences and the individual error
//! reduction scheme for observables.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! numerics: file formats, parallel execution and the command-line driver
//! live in the `ier` companion crate.
//!
//! Conventions used throughout:
//!
//! * qubit 0 is the least-significant bit of a computational-basis index;
//! * density matrices are stored densely, row-major;
//! * noise rates are in units of the inverse interval between two gates.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod circuit;
mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod mitigation;
pub mod noise;
pub mod optim;
pub mod state;
pub mod vqe;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use circuit::{AnsatzSpec, BoundCircuit, BoundGate, Circuit, Gate, GateKind};
pub use hamiltonian::{Pauli, PauliString, PauliSum};
pub use mitigation::{CorrectionReport, RemovalGroup};
pub use noise::{LindbladTerm, NoiseKind, NoiseModel, PropagatorConfig};
pub use state::DensityMatrix;

/// Hard upper bound on the number of simulated qubits.
///
/// A 14-qubit density matrix already holds 4^14 complex entries (4 GiB).
pub const MAX_QUBITS: usize = 14;
