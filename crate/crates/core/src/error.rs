use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// More qubits requested than the simulator supports.
    Capacity {
        requested: usize,
        max: usize,
    },
    QubitOutOfRange {
        qubit: usize,
        n_qubits: usize,
    },
    DuplicateQubit {
        qubit: usize,
    },
    QubitCountMismatch {
        expected: usize,
        found: usize,
    },
    InvalidGate(&'static str),
    ParameterCount {
        expected: usize,
        found: usize,
    },
    ParameterIndex {
        index: usize,
        n_params: usize,
    },
    EmptyPauliString,
    NonFinite(&'static str),
    InvalidTerm(&'static str),
    InvalidConfig(&'static str),
    InvalidState(&'static str),
    /// The integrator lost more trace than tolerated over one interval.
    IntegratorFailure {
        trace_drift: f64,
        substeps: usize,
    },
    NonFiniteObjective,
    ComplexExpectation {
        imag: f64,
    },
    InvalidFactor(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity { requested, max } => {
                write!(f, "{requested} qubits requested, capacity is {max}")
            }
            Error::QubitOutOfRange { qubit, n_qubits } => {
                write!(f, "qubit index {qubit} out of range for {n_qubits} qubits")
            }
            Error::DuplicateQubit { qubit } => write!(f, "qubit {qubit} listed twice"),
            Error::QubitCountMismatch { expected, found } => {
                write!(f, "qubit count mismatch: expected {expected}, found {found}")
            }
            Error::InvalidGate(msg) => write!(f, "invalid gate: {msg}"),
            Error::ParameterCount { expected, found } => {
                write!(f, "expected {expected} parameters, got {found}")
            }
            Error::ParameterIndex { index, n_params } => {
                write!(f, "parameter index {index} out of range for {n_params} parameters")
            }
            Error::EmptyPauliString => write!(f, "Pauli string has no non-identity factor"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::InvalidTerm(msg) => write!(f, "invalid Lindblad term: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid density matrix: {msg}"),
            Error::IntegratorFailure { trace_drift, substeps } => write!(
                f,
                "trace drifted by {trace_drift:e} with {substeps} substeps per interval; \
                 increase the number of substeps"
            ),
            Error::NonFiniteObjective => write!(f, "objective returned a non-finite value"),
            Error::ComplexExpectation { imag } => {
                write!(f, "expectation value has imaginary part {imag:e}")
            }
            Error::InvalidFactor(x) => write!(f, "invalid scale factor {x}"),
        }
    }
}

impl core::error::Error for Error {}
