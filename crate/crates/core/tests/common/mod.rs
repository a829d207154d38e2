//! Dense reference implementations built on nalgebra. Nothing here calls the
//! kernels under test except to read inputs out of their types.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ier_core::linalg::Matrix;
use ier_core::{
    BoundGate, DensityMatrix, GateKind, LindbladTerm, NoiseKind, NoiseModel, Pauli, PauliString, PauliSum, C64,
};

pub type Dense = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_dense(m: &Matrix) -> Dense {
    Dense::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

pub fn rho_dense(rho: &DensityMatrix) -> Dense {
    to_dense(rho.matrix())
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity(dim: usize) -> Dense {
    Dense::identity(dim, dim)
}

/// `op` on qubit `q` of `n`, qubit 0 being the least significant bit.
pub fn embed(op: &Dense, q: usize, n: usize) -> Dense {
    let mut m = Dense::from_element(1, 1, c(1.0, 0.0));
    for k in (0..n).rev() {
        m = m.kronecker(&if k == q { op.clone() } else { identity(2) });
    }
    m
}

pub fn two(a: [C64; 4]) -> Dense {
    Dense::from_row_slice(2, 2, &a)
}

pub fn pauli_2x2(p: Pauli) -> Dense {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::X => two([o, l, l, o]),
        Pauli::Y => two([o, -i, i, o]),
        Pauli::Z => two([l, o, o, -l]),
    }
}

pub fn pauli_dense(p: &PauliString, n: usize) -> Dense {
    p.factors().iter().fold(identity(1 << n), |acc, &(q, op)| embed(&pauli_2x2(op), q, n) * acc)
}

pub fn hamiltonian_dense(h: &PauliSum) -> Dense {
    let n = h.n_qubits();
    h.terms().iter().fold(Dense::zeros(1 << n, 1 << n), |acc, (w, p)| acc + pauli_dense(p, n) * c(*w, 0.0))
}

pub fn gate_dense(g: &BoundGate, n: usize) -> Dense {
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    let (co, si) = ((g.angle() / 2.0).cos(), (g.angle() / 2.0).sin());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = g.qubits()[0];
    let single = match g.kind() {
        GateKind::H => two([c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]),
        GateKind::X => two([o, l, l, o]),
        GateKind::Rx => two([c(co, 0.0), c(0.0, -si), c(0.0, -si), c(co, 0.0)]),
        GateKind::Ry => two([c(co, 0.0), c(-si, 0.0), c(si, 0.0), c(co, 0.0)]),
        GateKind::Rz => two([c(co, -si), o, o, c(co, si)]),
        GateKind::Cnot => {
            let (cb, tb) = (1usize << q, 1usize << g.qubits()[1]);
            let dim = 1 << n;
            return Dense::from_fn(dim, dim, |i, j| {
                let image = if j & cb != 0 { j ^ tb } else { j };
                if i == image {
                    l
                } else {
                    o
                }
            });
        }
    };
    embed(&single, q, n)
}

/// `|0><1|` on qubit `q`.
pub fn lowering(q: usize, n: usize) -> Dense {
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    embed(&two([o, l, o, o]), q, n)
}

/// Rate-weighted collapse operators of a model, written out from the
/// textbook definitions.
pub fn collapse_ops(model: &NoiseModel, n: usize) -> Vec<(f64, Dense)> {
    let mut out = Vec::new();
    for t in model.terms() {
        let q = t.qubits();
        let g = t.rate();
        match t.kind() {
            NoiseKind::AmplitudeDamping => out.push((g, lowering(q[0], n))),
            NoiseKind::Dephasing => {
                let s = lowering(q[0], n);
                out.push((g, s.adjoint() * s));
            }
            NoiseKind::Thermal => {
                let nth = t.n_th().unwrap();
                let s = lowering(q[0], n);
                out.push((g * (nth + 1.0), s.clone()));
                out.push((g * nth, s.adjoint()));
            }
            NoiseKind::Correlated => {
                let (s1, s2) = (lowering(q[0], n), lowering(q[1], n));
                out.push((g, s1.adjoint() * &s2));
                out.push((g, &s1 * s2.adjoint()));
            }
        }
    }
    out
}

pub fn lindblad_dense(rho: &Dense, ops: &[(f64, Dense)]) -> Dense {
    let dim = rho.nrows();
    let mut out = Dense::zeros(dim, dim);
    for (g, l) in ops {
        let ld = l.adjoint();
        let ll = &ld * l;
        out += (l * rho * &ld - (&ll * rho + rho * &ll) * c(0.5, 0.0)) * c(*g, 0.0);
    }
    out
}

/// Generator on row-major vectorized matrices: `vec(A X B) = (A ⊗ B^T) vec(X)`.
pub fn superoperator(ops: &[(f64, Dense)], dim: usize) -> Dense {
    let id = identity(dim);
    let mut s = Dense::zeros(dim * dim, dim * dim);
    for (g, l) in ops {
        let ld = l.adjoint();
        let ll = &ld * l;
        let term = l.kronecker(&ld.transpose()) - (ll.kronecker(&id) + id.kronecker(&ll.transpose())) * c(0.5, 0.0);
        s += term * c(*g, 0.0);
    }
    s
}

/// `exp(t L)(rho)` through the dense matrix exponential.
pub fn evolve_exact(rho: &Dense, ops: &[(f64, Dense)], t: f64) -> Dense {
    let dim = rho.nrows();
    let prop = (superoperator(ops, dim) * c(t, 0.0)).exp();
    let v = Dense::from_row_slice(dim * dim, 1, rho.transpose().as_slice());
    let out = prop * v;
    Dense::from_row_slice(dim, dim, out.as_slice())
}

pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let dim = 1 << n;
    let g = Dense::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let data: Vec<C64> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
    DensityMatrix::from_matrix(n, Matrix::from_row_major(dim, data).unwrap()).unwrap()
}

pub fn random_pauli(n: usize, rng: &mut impl Rng) -> PauliString {
    loop {
        let f: Vec<(usize, Pauli)> = (0..n)
            .filter_map(|q| [None, Some(Pauli::X), Some(Pauli::Y), Some(Pauli::Z)][rng.gen_range(0..4)].map(|p| (q, p)))
            .collect();
        if !f.is_empty() {
            return PauliString::new(f).unwrap();
        }
    }
}

pub fn random_sum(n: usize, terms: usize, rng: &mut impl Rng) -> PauliSum {
    let mut h = PauliSum::new(n).unwrap();
    h.push(rng.gen_range(-1.0..1.0), PauliString::identity()).unwrap();
    for _ in 0..terms {
        h.push(rng.gen_range(-1.0..1.0), random_pauli(n, rng)).unwrap();
    }
    h
}

pub fn random_gate(n: usize, rng: &mut impl Rng) -> BoundGate {
    let kinds = [GateKind::H, GateKind::X, GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::Cnot];
    let kind = if n == 1 { kinds[rng.gen_range(0..5)] } else { kinds[rng.gen_range(0..6)] };
    let a = rng.gen_range(0..n);
    let angle = rng.gen_range(-4.0..4.0);
    if kind == GateKind::Cnot {
        let b = (a + rng.gen_range(1..n)) % n;
        BoundGate::new(kind, &[a, b], 0.0).unwrap()
    } else {
        BoundGate::new(kind, &[a], angle).unwrap()
    }
}

/// A model with one term of every kind the register allows.
pub fn random_model(n: usize, rate_max: f64, rng: &mut impl Rng) -> NoiseModel {
    let mut m = NoiseModel::empty();
    for _ in 0..rng.gen_range(1..=4) {
        let q = rng.gen_range(0..n);
        let rate = rng.gen_range(0.0..rate_max);
        let t = match rng.gen_range(0..if n > 1 { 4 } else { 3 }) {
            0 => LindbladTerm::amplitude_damping(q, rate),
            1 => LindbladTerm::dephasing(q, rate),
            2 => LindbladTerm::thermal(q, rate, rng.gen_range(0.0..1.0)),
            _ => LindbladTerm::correlated(q, (q + rng.gen_range(1..n)) % n, rate),
        };
        m.push(t.unwrap());
    }
    m
}
