//! Variational minimization of `E(theta) = Tr(rho(theta) H)`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::hamiltonian::PauliSum;
use crate::noise::{run_noisy_circuit, NoiseModel, PropagatorConfig};
use crate::optim::{nelder_mead, NelderMeadSettings};
use crate::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VqeProblem {
    pub hamiltonian: PauliSum,
    pub ansatz: Circuit,
    pub noise: NoiseModel,
    pub propagator: PropagatorConfig,
}

impl VqeProblem {
    pub fn new(
        hamiltonian: PauliSum,
        ansatz: Circuit,
        noise: NoiseModel,
        propagator: PropagatorConfig,
    ) -> Result<Self> {
        if hamiltonian.n_qubits() != ansatz.n_qubits() {
            return Err(Error::QubitCountMismatch { expected: ansatz.n_qubits(), found: hamiltonian.n_qubits() });
        }
        noise.validate(ansatz.n_qubits())?;
        propagator.validate()?;
        Ok(Self { hamiltonian, ansatz, noise, propagator })
    }

    pub fn n_params(&self) -> usize {
        self.ansatz.n_params()
    }

    pub fn noiseless(&self) -> Self {
        Self { noise: NoiseModel::empty(), ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub max_evals: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    pub initial_step: f64,
    /// Seeds the jitter added to the all-zero starting point.
    pub seed: u64,
    /// Half-width of the uniform jitter.
    pub jitter: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { max_evals: 4000, f_tol: 1e-10, x_tol: 1e-6, initial_step: 0.1, seed: 0, jitter: 0.01 }
    }
}

impl OptimizerSettings {
    fn simplex(&self) -> NelderMeadSettings {
        NelderMeadSettings {
            max_evals: self.max_evals,
            f_tol: self.f_tol,
            x_tol: self.x_tol,
            initial_step: self.initial_step,
        }
    }
}

/// Whether the optimizer sees the problem's noise model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectiveNoise {
    /// Optimize the noise-free energy; the problem's model is ignored.
    #[default]
    Noiseless,
    Noisy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub theta_opt: Vec<f64>,
    pub energy: f64,
    pub evals: usize,
    pub converged: bool,
    pub history: Vec<(usize, f64)>,
}

/// Energy of the ansatz state prepared from `|0...0>` under the problem's
/// noise model.
pub fn energy_objective(problem: &VqeProblem, theta: &[f64]) -> Result<f64> {
    let bound = problem.ansatz.bind(theta)?;
    let rho0 = DensityMatrix::new_pure_ground(problem.ansatz.n_qubits())?;
    let rho = run_noisy_circuit(&rho0, &bound, &problem.noise, &problem.propagator)?;
    problem.hamiltonian.expectation(&rho)
}

/// All zeros plus uniform jitter in `[-jitter, jitter]`.
pub fn initial_theta(n_params: usize, seed: u64, jitter: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_params).map(|_| if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 }).collect()
}

pub fn solve_vqe(problem: &VqeProblem, settings: &OptimizerSettings, noise: ObjectiveNoise) -> Result<VqeResult> {
    let target = match noise {
        ObjectiveNoise::Noiseless => problem.noiseless(),
        ObjectiveNoise::Noisy => problem.clone(),
    };
    let theta0 = initial_theta(target.n_params(), settings.seed, settings.jitter);
    let out = nelder_mead(|theta| energy_objective(&target, theta), &theta0, &settings.simplex())?;
    Ok(VqeResult {
        theta_opt: out.x,
        energy: out.value,
        evals: out.evals,
        converged: out.converged,
        history: out.history,
    })
}
