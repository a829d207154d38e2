mod common;

use common::*;
use proptest::prelude::*;

use ier_core::noise::{evolve, evolve_for, lindblad_rhs, run_noisy_circuit};
use ier_core::{BoundCircuit, DensityMatrix, LindbladTerm, NoiseModel, PropagatorConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rhs_matches_dense_dissipators(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(n, 2.0, &mut r);
        let rho = random_density(n, &mut r);
        let got = to_dense(&lindblad_rhs(&rho, &model).unwrap());
        let want = lindblad_dense(&rho_dense(&rho), &collapse_ops(&model, n));
        prop_assert!(max_diff(&got, &want) < 1e-12);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let model = random_model(n, 2.0, &mut r);
        let rhs = lindblad_rhs(&random_density(n, &mut r), &model).unwrap();
        prop_assert!(rhs.trace().norm() < 1e-12);
        prop_assert!(rhs.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn evolution_matches_the_matrix_exponential(n in 1usize..=2, seed in any::<u64>(), t in 0.05f64..1.0) {
        let mut r = rng(seed);
        let model = random_model(n, 1.0, &mut r);
        let rho0 = random_density(n, &mut r);
        let mut rho = rho0.clone();
        // Up to four stacked terms per qubit; 256 steps keep RK4 below 1e-10.
        evolve(&mut rho, &model, &PropagatorConfig::new(t, 256).unwrap()).unwrap();
        let exact = evolve_exact(&rho_dense(&rho0), &collapse_ops(&model, n), t);
        prop_assert!(max_diff(&rho_dense(&rho), &exact) < 1e-10);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_a_semigroup(n in 1usize..=2, seed in any::<u64>(), t1 in 0.05f64..0.5, t2 in 0.05f64..0.5) {
        let mut r = rng(seed);
        let model = random_model(n, 1.0, &mut r);
        let rho0 = random_density(n, &mut r);
        let mut split = rho0.clone();
        evolve_for(&mut split, &model, t1, 64).unwrap();
        evolve_for(&mut split, &model, t2, 64).unwrap();
        let mut joint = rho0;
        evolve_for(&mut joint, &model, t1 + t2, 128).unwrap();
        prop_assert!(split.max_abs_diff(&joint) < 1e-10);
    }
}

#[test]
fn rk4_error_falls_sixteenfold_per_doubling() {
    let n = 2;
    let model = NoiseModel::new(vec![
        LindbladTerm::amplitude_damping(0, 0.7).unwrap(),
        LindbladTerm::dephasing(0, 0.4).unwrap(),
        LindbladTerm::thermal(1, 0.5, 0.3).unwrap(),
        LindbladTerm::correlated(0, 1, 0.6).unwrap(),
    ]);
    let rho0 = random_density(n, &mut rng(5));
    let exact = evolve_exact(&rho_dense(&rho0), &collapse_ops(&model, n), 1.0);
    let err = |s: usize| {
        let mut rho = rho0.clone();
        evolve_for(&mut rho, &model, 1.0, s).unwrap();
        max_diff(&rho_dense(&rho), &exact)
    };
    let (e2, e4, e8) = (err(2), err(4), err(8));
    assert!(e2 / e4 > 8.0, "{e2:e} {e4:e}");
    assert!(e4 / e8 > 8.0, "{e4:e} {e8:e}");
}

#[test]
fn response_is_linear_in_small_rates() {
    // (rho(g) - rho(0)) / g converges at first order in g.
    let n = 2;
    let rho0 = random_density(n, &mut rng(9));
    let model = |g: f64| {
        NoiseModel::new(vec![
            LindbladTerm::amplitude_damping(0, g).unwrap(),
            LindbladTerm::dephasing(1, 2.0 * g).unwrap(),
        ])
    };
    let slope = |g: f64| {
        let mut rho = rho0.clone();
        evolve_for(&mut rho, &model(g), 1.0, 64).unwrap();
        (rho_dense(&rho) - rho_dense(&rho0)) / c(g, 0.0)
    };
    let (a, b, d) = (slope(1e-2), slope(5e-3), slope(2.5e-3));
    let ratio = max_diff(&a, &b) / max_diff(&b, &d);
    assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
}

#[test]
fn closed_forms_single_qubit() {
    let g = 0.3;
    let excited = DensityMatrix::from_pure_state(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let mut rho = excited.clone();
    evolve_for(&mut rho, &NoiseModel::new(vec![LindbladTerm::amplitude_damping(0, g).unwrap()]), 2.0, 128).unwrap();
    assert!((rho.get(1, 1).re - (-g * 2.0f64).exp()).abs() < 1e-10);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::from_pure_state(&[c(s, 0.0), c(s, 0.0)]).unwrap();
    let mut rho = plus;
    evolve_for(&mut rho, &NoiseModel::new(vec![LindbladTerm::dephasing(0, g).unwrap()]), 2.0, 128).unwrap();
    assert!((rho.get(0, 1).re - 0.5 * (-g).exp()).abs() < 1e-10);
    assert!((rho.get(1, 1).re - 0.5).abs() < 1e-14);

    let mut rho = excited;
    let thermal = NoiseModel::new(vec![LindbladTerm::thermal(0, 1.0, 0.5).unwrap()]);
    evolve_for(&mut rho, &thermal, 30.0, 3000).unwrap();
    assert!((rho.get(1, 1).re - 0.25).abs() < 1e-10);
}

#[test]
fn noisy_circuit_interleaves_gates_and_intervals() {
    let n = 2;
    let mut r = rng(3);
    let gates: Vec<_> = (0..6).map(|_| random_gate(n, &mut r)).collect();
    let circuit = BoundCircuit::new(n, gates.clone()).unwrap();
    let model = random_model(n, 0.3, &mut r);
    let ops = collapse_ops(&model, n);
    let rho0 = random_density(n, &mut r);
    let tau = 0.7;
    let mut want = rho_dense(&rho0);
    for (k, g) in gates.iter().enumerate() {
        if k > 0 {
            want = evolve_exact(&want, &ops, tau);
        }
        let u = gate_dense(g, n);
        want = &u * want * u.adjoint();
    }
    let got = run_noisy_circuit(&rho0, &circuit, &model, &PropagatorConfig::new(tau, 64).unwrap()).unwrap();
    assert!(max_diff(&rho_dense(&got), &want) < 1e-10);

    let clean = run_noisy_circuit(&rho0, &circuit, &NoiseModel::empty(), &PropagatorConfig::default()).unwrap();
    let mut unitary = rho0;
    for g in &gates {
        unitary.apply_gate(g).unwrap();
    }
    assert_eq!(clean, unitary);
}

#[test]
fn bad_models_are_rejected() {
    let mut rho = DensityMatrix::new_pure_ground(2).unwrap();
    let out_of_range = NoiseModel::new(vec![LindbladTerm::amplitude_damping(2, 0.1).unwrap()]);
    assert!(evolve(&mut rho, &out_of_range, &PropagatorConfig::default()).is_err());
    assert!(LindbladTerm::amplitude_damping(0, -0.1).is_err());
    assert!(LindbladTerm::correlated(1, 1, 0.1).is_err());
    assert!(LindbladTerm::thermal(0, 0.1, f64::NAN).is_err());
    assert!(PropagatorConfig::new(1.0, 0).is_err());
    assert!(PropagatorConfig::new(-1.0, 4).is_err());
}

#[test]
fn decay_happens_only_between_gates() {
    let g = 0.2;
    let tau = 1.5;
    let model = NoiseModel::new(vec![LindbladTerm::amplitude_damping(0, g).unwrap()]);
    let x = ier_core::BoundGate::new(ier_core::GateKind::X, &[0], 0.0).unwrap();
    let rho0 = DensityMatrix::new_pure_ground(1).unwrap();
    let prop = PropagatorConfig::new(tau, 64).unwrap();

    let rho = run_noisy_circuit(&rho0, &BoundCircuit::new(1, vec![x, x]).unwrap(), &model, &prop).unwrap();
    assert!((rho.get(1, 1).re - (1.0 - (-g * tau).exp())).abs() < 1e-10);
    assert!((rho.get(0, 0).re - (-g * tau).exp()).abs() < 1e-10);

    let rho = run_noisy_circuit(&rho0, &BoundCircuit::new(1, vec![x]).unwrap(), &model, &prop).unwrap();
    assert_eq!(rho.get(1, 1).re, 1.0);
}
