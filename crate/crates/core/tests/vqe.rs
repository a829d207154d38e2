mod common;

use common::*;

use ier_core::circuit::{build_ansatz, Generator};
use ier_core::optim::{nelder_mead, NelderMeadSettings};
use ier_core::vqe::{energy_objective, solve_vqe, ObjectiveNoise, OptimizerSettings, VqeProblem};
use ier_core::{AnsatzSpec, NoiseKind, NoiseModel, Pauli, PauliString, PauliSum, PropagatorConfig};

#[test]
fn nelder_mead_finds_the_rosenbrock_minimum() {
    let rosen = |x: &[f64]| Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
    let out = nelder_mead(rosen, &[-1.2, 1.0], &NelderMeadSettings { max_evals: 5000, ..Default::default() }).unwrap();
    assert!(out.converged);
    assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
    assert!(out.history.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0));
    assert_eq!(out.history.last().unwrap().1, out.value);
}

#[test]
fn nelder_mead_respects_the_budget() {
    let out = nelder_mead(
        |x: &[f64]| Ok(x.iter().map(|v| v * v).sum()),
        &[3.0; 6],
        &NelderMeadSettings { max_evals: 50, ..Default::default() },
    )
    .unwrap();
    assert_eq!(out.evals, 50);
    assert!(!out.converged);
}

#[test]
fn nelder_mead_stops_on_non_finite_values() {
    let r = nelder_mead(
        |x: &[f64]| Ok(if x[0] > 0.05 { f64::NAN } else { x[0] * x[0] }),
        &[0.0],
        &NelderMeadSettings::default(),
    );
    assert!(r.is_err());
}

/// One-qubit `Z + 0.5 X`, reachable from |0> by a Y rotation.
fn one_qubit() -> VqeProblem {
    let h = PauliSum::from_terms(
        1,
        [(1.0, PauliString::new([(0, Pauli::Z)]).unwrap()), (0.5, PauliString::new([(0, Pauli::X)]).unwrap())],
    )
    .unwrap();
    let spec = AnsatzSpec::UccsdLike {
        n_params: 1,
        reference: vec![],
        generators: vec![Generator { string: PauliString::new([(0, Pauli::Y)]).unwrap(), param: 0, prefactor: 1.0 }],
    };
    let noise = NoiseModel::homogeneous(NoiseKind::AmplitudeDamping, 1, 0.0, None).unwrap();
    VqeProblem::new(h, build_ansatz(&spec, 1).unwrap(), noise, PropagatorConfig::default()).unwrap()
}

#[test]
fn vqe_reaches_the_exact_ground_energy() {
    let p = one_qubit();
    let r = solve_vqe(&p, &OptimizerSettings::default(), ObjectiveNoise::Noiseless).unwrap();
    assert!((r.energy - (-(1.25f64).sqrt())).abs() < 1e-9, "{}", r.energy);
    assert!(r.energy >= p.hamiltonian.exact_ground_energy().unwrap() - 1e-12);
    assert_eq!(r.energy, energy_objective(&p.noiseless(), &r.theta_opt).unwrap());
}

#[test]
fn vqe_is_deterministic_per_seed() {
    let n = 2;
    let h = random_sum(n, 6, &mut rng(4));
    let ansatz = build_ansatz(&AnsatzSpec::Entangling { layers: 1 }, n).unwrap();
    let noise = NoiseModel::homogeneous(NoiseKind::Dephasing, n, 1e-3, None).unwrap();
    let p = VqeProblem::new(h, ansatz, noise, PropagatorConfig::new(1.0, 8).unwrap()).unwrap();
    let s = OptimizerSettings { max_evals: 300, ..Default::default() };
    let a = solve_vqe(&p, &s, ObjectiveNoise::Noisy).unwrap();
    let b = solve_vqe(&p, &s, ObjectiveNoise::Noisy).unwrap();
    assert_eq!(a, b);
    let other = solve_vqe(&p, &OptimizerSettings { seed: s.seed + 1, ..s }, ObjectiveNoise::Noisy).unwrap();
    assert_ne!(a.theta_opt, other.theta_opt);
    let e0 = p.hamiltonian.exact_ground_energy().unwrap();
    let clean = solve_vqe(&p, &s, ObjectiveNoise::Noiseless).unwrap();
    assert!(clean.energy >= e0 - 1e-9);
}

#[test]
fn problem_shapes_are_checked() {
    let h = PauliSum::new(3).unwrap();
    let ansatz = build_ansatz(&AnsatzSpec::Entangling { layers: 1 }, 2).unwrap();
    assert!(VqeProblem::new(h, ansatz, NoiseModel::empty(), PropagatorConfig::default()).is_err());
}
