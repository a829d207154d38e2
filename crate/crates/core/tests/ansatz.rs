mod common;

use common::*;
use proptest::prelude::*;

use ier_core::circuit::{build_ansatz, compile_pauli_exponential, Angle, Generator};
use ier_core::{AnsatzSpec, Circuit, Gate, GateKind, Pauli, PauliString};

fn every_string(n: usize) -> Vec<PauliString> {
    let ops = [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)];
    (1..4usize.pow(n as u32))
        .map(|mut code| {
            let mut f = Vec::new();
            for q in 0..n {
                if let Some(p) = ops[code % 4] {
                    f.push((q, p));
                }
                code /= 4;
            }
            PauliString::new(f).unwrap()
        })
        .collect()
}

fn compiled_unitary(p: &PauliString, theta: f64, n: usize) -> Dense {
    let mut c = Circuit::new(n, 0);
    c.extend(compile_pauli_exponential(p, Angle::Literal(theta), n).unwrap()).unwrap();
    to_dense(&c.bind(&[]).unwrap().unitary().unwrap())
}

#[test]
fn every_string_up_to_three_qubits_compiles_exactly() {
    for n in 1..=3 {
        for p in every_string(n) {
            for theta in [0.0, 0.37, -1.9, 3.0] {
                let want = (pauli_dense(&p, n) * c(0.0, -theta / 2.0)).exp();
                let got = compiled_unitary(&p, theta, n);
                assert!(max_diff(&got, &want) < 1e-12, "{p} at {theta}");
            }
        }
    }
}

#[test]
fn compiled_length_formula() {
    for n in 1..=4 {
        for p in every_string(n) {
            let basis = p.factors().iter().filter(|(_, op)| *op != Pauli::Z).count();
            let ladder = p.weight() - 1;
            let gates = compile_pauli_exponential(&p, Angle::param(0), n).unwrap();
            assert_eq!(gates.len(), 2 * basis + 2 * ladder + 1, "{p}");
            assert_eq!(gates, compile_pauli_exponential(&p, Angle::param(0), n).unwrap());
        }
    }
    assert!(compile_pauli_exponential(&PauliString::identity(), Angle::param(0), 2).is_err());
}

fn uccsd_like(n: usize, seed: u64) -> AnsatzSpec {
    let mut r = rng(seed);
    let generators = (0..5)
        .map(|k| Generator { string: random_pauli(n, &mut r), param: k % 2, prefactor: [1.0, -0.5, 0.25][k % 3] })
        .collect();
    AnsatzSpec::UccsdLike { n_params: 2, reference: vec![Gate::x(0)], generators }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ansatz_unitaries_are_unitary(n in 2usize..=3, layers in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        for spec in [AnsatzSpec::Entangling { layers }, uccsd_like(n, seed)] {
            let circuit = build_ansatz(&spec, n).unwrap();
            let theta: Vec<f64> = (0..circuit.n_params()).map(|_| rand::Rng::gen_range(&mut r, -3.0..3.0)).collect();
            let u = to_dense(&circuit.bind(&theta).unwrap().unitary().unwrap());
            prop_assert!(max_diff(&(u.adjoint() * &u), &identity(1 << n)) < 1e-12);
        }
    }

    #[test]
    fn uccsd_generators_are_identity_at_zero(n in 1usize..=3, seed in any::<u64>()) {
        let AnsatzSpec::UccsdLike { generators, .. } = uccsd_like(n, seed) else { unreachable!() };
        let spec = AnsatzSpec::UccsdLike { n_params: 2, reference: vec![], generators };
        let u = to_dense(&build_ansatz(&spec, n).unwrap().bind(&[0.0, 0.0]).unwrap().unitary().unwrap());
        prop_assert!(max_diff(&u, &identity(1 << n)) < 1e-12);
    }

    #[test]
    fn uccsd_is_the_product_of_generator_exponentials(n in 1usize..=3, seed in any::<u64>(), t0 in -2.0f64..2.0, t1 in -2.0f64..2.0) {
        let spec = uccsd_like(n, seed);
        let AnsatzSpec::UccsdLike { generators, .. } = &spec else { unreachable!() };
        let theta = [t0, t1];
        let mut want = gate_dense(&ier_core::BoundGate::new(GateKind::X, &[0], 0.0).unwrap(), n);
        for g in generators {
            want = (pauli_dense(&g.string, n) * c(0.0, -g.prefactor * theta[g.param] / 2.0)).exp() * want;
        }
        let got = to_dense(&build_ansatz(&spec, n).unwrap().bind(&theta).unwrap().unitary().unwrap());
        prop_assert!(max_diff(&got, &want) < 1e-12);
    }
}

#[test]
fn entangling_layout() {
    for (n, d) in [(2, 1), (4, 4), (3, 2)] {
        let c = build_ansatz(&AnsatzSpec::Entangling { layers: d }, n).unwrap();
        assert_eq!(c.n_params(), 2 * n + 3 * n * d);
        assert_eq!(c.len(), 2 * n + d * 5 * n);
        let cnots = c.gates().iter().filter(|g| g.kind() == GateKind::Cnot).count();
        assert_eq!(cnots, n * d);
    }
    assert!(build_ansatz(&AnsatzSpec::Entangling { layers: 0 }, 4).is_err());
    assert!(build_ansatz(&AnsatzSpec::Entangling { layers: 1 }, 1).is_err());
}

#[test]
fn binding_checks_the_parameter_vector() {
    let c = build_ansatz(&AnsatzSpec::Entangling { layers: 1 }, 2).unwrap();
    assert!(c.bind(&[0.0; 9]).is_err());
    assert!(c.bind(&[f64::NAN; 10]).is_err());
    assert!(c.bind(&[0.0; 10]).is_ok());
}
