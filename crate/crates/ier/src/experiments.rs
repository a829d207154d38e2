//! The five experiment modes, independent of argument parsing and output
//! files so the acceptance suite can drive them directly.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use ier_core::analysis::{loglog_slope, threshold_crossing, Crossing};
use ier_core::circuit::{build_ansatz, compile_pauli_exponential, Angle};
use ier_core::linalg::Matrix;
use ier_core::mitigation::{measure, MitigationPlan};
use ier_core::noise::{evolve_for, PropagatorConfig};
use ier_core::vqe::{solve_vqe, ObjectiveNoise, OptimizerSettings, VqeProblem, VqeResult};
use ier_core::{
    AnsatzSpec, BoundCircuit, BoundGate, Circuit, CorrectionReport, DensityMatrix, GateKind, LindbladTerm, NoiseModel,
    Pauli, PauliString, PauliSum, C64,
};

use crate::config::{AnsatzConfig, ExperimentConfig, Template, VariantConfig, DEFAULT_QUBIT_CAP};
use crate::error::{IerError, Result};
use crate::exec::Executor;
use crate::formats::ansatz::read_ansatz;
use crate::formats::json::VqeRecord;
use crate::formats::pauli::read_pauli_sum;
use crate::formats::read_text;

/// Columns of a sweep CSV, in order.
pub const SWEEP_HEADER: [&str; 6] = ["rate", "a_noisy", "a_ideal", "a_corrected", "correction_magnitude", "residual"];

/// Columns of a tau-scaling CSV, in order.
pub const TAU_HEADER: [&str; 7] =
    ["tau", "gamma_tau", "a_noisy", "a_ideal", "a_corrected", "uncorrected_error", "residual"];

/// Loaded Hamiltonian and unbound ansatz circuit.
#[derive(Debug, Clone)]
pub struct Setup {
    pub hamiltonian: PauliSum,
    pub ansatz: Circuit,
}

impl Setup {
    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.n_qubits()
    }

    pub fn bind(&self, theta: &[f64]) -> Result<BoundCircuit> {
        Ok(self.ansatz.bind(theta)?)
    }
}

pub fn load_setup(cfg: &ExperimentConfig, large: bool) -> Result<Setup> {
    let h_path = cfg.hamiltonian.as_ref().ok_or_else(|| IerError::Config("hamiltonian path is required".into()))?;
    let hamiltonian = read_pauli_sum(&cfg.resolve(h_path))?;
    let n = hamiltonian.n_qubits();
    if n > DEFAULT_QUBIT_CAP && !large {
        return Err(IerError::Config(format!(
            "{n} qubits exceeds the default cap of {DEFAULT_QUBIT_CAP}; pass --large to allow it"
        )));
    }
    let spec = match cfg.ansatz.as_ref().ok_or_else(|| IerError::Config("ansatz is required".into()))? {
        AnsatzConfig::File(p) => {
            let path = cfg.resolve(p);
            let file = read_ansatz(&path)?;
            if file.n_qubits != n {
                return Err(IerError::Config(format!(
                    "{} declares {} qubits but the Hamiltonian has {n}",
                    path.display(),
                    file.n_qubits
                )));
            }
            file.spec
        }
        AnsatzConfig::Entangling { layers } => AnsatzSpec::Entangling { layers: *layers },
    };
    let ansatz = build_ansatz(&spec, n)?;
    Ok(Setup { hamiltonian, ansatz })
}

/// Noiseless (or, with `optimize_under_noise`, noisy) VQE.
pub fn run_vqe(cfg: &ExperimentConfig, setup: &Setup) -> Result<VqeResult> {
    let model = cfg.noise.fixed_model(setup.n_qubits())?;
    let problem = VqeProblem::new(setup.hamiltonian.clone(), setup.ansatz.clone(), model, cfg.propagator()?)?;
    let mode = if cfg.optimize_under_noise { ObjectiveNoise::Noisy } else { ObjectiveNoise::Noiseless };
    let settings: OptimizerSettings = cfg.optimizer.settings();
    Ok(solve_vqe(&problem, &settings, mode)?)
}

/// Parameters from `theta`, then `theta_path`, else a fresh VQE run.
pub fn resolve_theta(cfg: &ExperimentConfig, setup: &Setup) -> Result<Vec<f64>> {
    let theta = if let Some(t) = &cfg.theta {
        t.clone()
    } else if let Some(p) = &cfg.theta_path {
        let path = cfg.resolve(p);
        let record: VqeRecord =
            serde_json::from_str(&read_text(&path)?).map_err(|e| IerError::from(e).in_file(&path))?;
        record.theta
    } else {
        run_vqe(cfg, setup)?.theta_opt
    };
    if theta.len() != setup.ansatz.n_params() {
        return Err(IerError::Config(format!(
            "ansatz takes {} parameters but {} were supplied",
            setup.ansatz.n_params(),
            theta.len()
        )));
    }
    Ok(theta)
}

fn plan_for(variant: Option<VariantConfig>, model: &NoiseModel, n: usize) -> Result<MitigationPlan> {
    Ok(match variant.unwrap_or(VariantConfig::Removal) {
        VariantConfig::Removal => MitigationPlan::removal(model, n)?,
        VariantConfig::Inflation { factor, per_qubit } => MitigationPlan::inflation(model, n, factor, per_qubit)?,
    })
}

/// Runs several plans on one circuit, spreading every individual run over
/// the executor. Reports come back in plan order.
pub fn run_plans(
    plans: &[MitigationPlan],
    circuit: &BoundCircuit,
    observable: &PauliSum,
    prop: &PropagatorConfig,
    exec: &Executor,
) -> Result<Vec<CorrectionReport>> {
    let jobs: Vec<&NoiseModel> = plans.iter().flat_map(|p| p.models()).collect();
    let values = exec.try_map(&jobs, |m| measure(circuit, m, observable, prop))?;
    let mut offset = 0;
    plans
        .iter()
        .map(|p| {
            let n = p.models().len();
            let r = p.assemble(&values[offset..offset + n]);
            offset += n;
            Ok(r?)
        })
        .collect()
}

pub fn mitigate(
    setup: &Setup,
    theta: &[f64],
    model: &NoiseModel,
    variant: Option<VariantConfig>,
    prop: &PropagatorConfig,
    exec: &Executor,
) -> Result<CorrectionReport> {
    let circuit = setup.bind(theta)?;
    let plan = plan_for(variant, model, setup.n_qubits())?;
    let mut reports = run_plans(&[plan], &circuit, &setup.hamiltonian, prop, exec)?;
    Ok(reports.remove(0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub rate: f64,
    pub report: CorrectionReport,
}

impl SweepPoint {
    pub fn uncorrected_error(&self) -> f64 {
        self.report.uncorrected_error().unwrap_or(f64::NAN)
    }

    pub fn residual(&self) -> f64 {
        self.report.residual.unwrap_or(f64::NAN)
    }

    /// One CSV row in [`SWEEP_HEADER`] order.
    pub fn row(&self) -> Vec<f64> {
        let r = &self.report;
        vec![
            self.rate,
            r.a_noisy,
            r.a_ideal.unwrap_or(f64::NAN),
            r.a_corrected,
            r.correction_magnitude,
            self.residual(),
        ]
    }
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    setup: &Setup,
    circuit: &BoundCircuit,
    template: Template,
    rates: &[f64],
    n_th: f64,
    qubits: Option<&[usize]>,
    variant: Option<VariantConfig>,
    prop: &PropagatorConfig,
    exec: &Executor,
) -> Result<Vec<SweepPoint>> {
    let n = setup.n_qubits();
    let plans = rates
        .iter()
        .map(|&r| plan_for(variant, &template.model(n, r, n_th, qubits)?, n))
        .collect::<Result<Vec<_>>>()?;
    let reports = run_plans(&plans, circuit, &setup.hamiltonian, prop, exec)?;
    Ok(rates.iter().zip(reports).map(|(&rate, report)| SweepPoint { rate, report }).collect())
}

/// Where the uncorrected and corrected error curves reach a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSummary {
    pub threshold: f64,
    /// `None` when the curve never reaches the threshold on the grid.
    pub uncorrected_rate: Option<f64>,
    pub corrected_rate: Option<f64>,
    /// Lower bound when the corrected curve never crosses.
    pub ratio: Option<f64>,
    /// Correction magnitude at the grid point where the corrected curve crosses.
    pub correction_at_corrected_rate: Option<f64>,
}

pub fn summarize(points: &[SweepPoint], threshold: f64) -> ThresholdSummary {
    let rates: Vec<f64> = points.iter().map(|p| p.rate).collect();
    let unc: Vec<f64> = points.iter().map(SweepPoint::uncorrected_error).collect();
    let cor: Vec<f64> = points.iter().map(SweepPoint::residual).collect();
    let cu = threshold_crossing(&rates, &unc, threshold);
    let cc = threshold_crossing(&rates, &cor, threshold);
    let some = |c: Crossing| match c {
        Crossing::Never => None,
        c => Some(c.rate_or(f64::NAN)),
    };
    let upper = rates.last().copied().unwrap_or(f64::NAN);
    let ratio = some(cu).map(|u| cc.rate_or(upper) / u);
    let correction_at_corrected_rate =
        cor.iter().position(|v| *v >= threshold).map(|k| points[k].report.correction_magnitude);
    ThresholdSummary {
        threshold,
        uncorrected_rate: some(cu),
        corrected_rate: some(cc),
        ratio,
        correction_at_corrected_rate,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauPoint {
    pub tau: f64,
    /// Largest rate in the model times `tau`.
    pub gamma_tau: f64,
    pub report: CorrectionReport,
}

impl TauPoint {
    pub fn row(&self) -> Vec<f64> {
        let r = &self.report;
        vec![
            self.tau,
            self.gamma_tau,
            r.a_noisy,
            r.a_ideal.unwrap_or(f64::NAN),
            r.a_corrected,
            r.uncorrected_error().unwrap_or(f64::NAN),
            r.residual.unwrap_or(f64::NAN),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauSlopes {
    /// `None` when some error is exactly zero.
    pub uncorrected: Option<f64>,
    pub corrected: Option<f64>,
}

/// Fixed rates, interval halved `levels - 1` times starting from `tau0`;
/// `substeps` per interval stays fixed.
#[allow(clippy::too_many_arguments)]
pub fn tau_scaling(
    setup: &Setup,
    circuit: &BoundCircuit,
    model: &NoiseModel,
    tau0: f64,
    levels: usize,
    substeps: usize,
    variant: Option<VariantConfig>,
    exec: &Executor,
) -> Result<(Vec<TauPoint>, TauSlopes)> {
    if levels < 2 {
        return Err(IerError::Config("tau scaling needs at least two levels".into()));
    }
    let taus: Vec<f64> = (0..levels).map(|k| tau0 / f64::from(1u32 << k)).collect();
    let props = taus.iter().map(|&t| PropagatorConfig::new(t, substeps)).collect::<Result<Vec<_>, _>>()?;
    let plan = plan_for(variant, model, setup.n_qubits())?;
    let jobs: Vec<(usize, &NoiseModel)> = (0..levels).flat_map(|k| plan.models().iter().map(move |m| (k, m))).collect();
    let values = exec.try_map(&jobs, |(k, m)| measure(circuit, m, &setup.hamiltonian, &props[*k]))?;
    let per = plan.models().len();
    let max_rate = model.terms().iter().map(LindbladTerm::rate).fold(0.0, f64::max);
    let points = taus
        .iter()
        .enumerate()
        .map(|(k, &tau)| {
            Ok(TauPoint { tau, gamma_tau: max_rate * tau, report: plan.assemble(&values[k * per..(k + 1) * per])? })
        })
        .collect::<Result<Vec<_>>>()?;
    let unc: Vec<f64> = points.iter().map(|p| p.report.uncorrected_error().unwrap_or(f64::NAN)).collect();
    let cor: Vec<f64> = points.iter().map(|p| p.report.residual.unwrap_or(f64::NAN)).collect();
    let slopes = TauSlopes { uncorrected: loglog_slope(&taus, &unc), corrected: loglog_slope(&taus, &cor) };
    Ok((points, slopes))
}

/// One item of the `validate` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Observed deviation or ratio.
    pub value: f64,
    /// Bound the value was compared against.
    pub bound: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: &'static str, value: f64, bound: f64, detail: String) -> Self {
        Self { name, passed: value <= bound, value, bound, detail }
    }

    fn above(name: &'static str, value: f64, bound: f64, detail: String) -> Self {
        Self { name, passed: value > bound, value, bound, detail }
    }
}

/// Largest deviation tolerated between a compiled exponential and its
/// closed form.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Minimum error reduction when the number of substeps doubles.
pub const RK4_MIN_RATIO: f64 = 8.0;

fn prepared(gates: &[(GateKind, usize)]) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::new_pure_ground(1)?;
    for &(kind, q) in gates {
        rho.apply_gate(&BoundGate::new(kind, &[q], 0.0)?)?;
    }
    Ok(rho)
}

fn excited_population(model: &NoiseModel, duration: f64, substeps: usize) -> Result<f64> {
    let mut rho = prepared(&[(GateKind::X, 0)])?;
    evolve_for(&mut rho, model, duration, substeps)?;
    Ok(rho.get(1, 1).re)
}

/// Closed-form channel checks, compiled-unitary equivalence and RK4
/// convergence, in a fixed order.
pub fn validate(cfg: &ExperimentConfig) -> Result<Vec<Check>> {
    let v = cfg.validate;
    let prop = cfg.propagator()?;
    let (gamma, tau, s) = (v.rate, prop.tau, prop.substeps);
    if !(gamma.is_finite() && gamma > 0.0) || v.intervals == 0 {
        return Err(IerError::Config("validate needs a positive rate and at least one interval".into()));
    }
    let t = tau * v.intervals as f64;
    let steps = s * v.intervals;
    let mut checks = Vec::new();

    let ad = NoiseModel::new(vec![LindbladTerm::amplitude_damping(0, gamma)?]);
    let p1 = excited_population(&ad, t, steps)?;
    let expected = (-gamma * t).exp();
    checks.push(Check::at_most(
        "amplitude_damping_decay",
        (p1 - expected).abs(),
        v.tolerance,
        format!("p1 = {p1:.12e}, exp(-gamma t) = {expected:.12e}"),
    ));

    let deph = NoiseModel::new(vec![LindbladTerm::dephasing(0, gamma)?]);
    let mut rho = prepared(&[(GateKind::H, 0)])?;
    evolve_for(&mut rho, &deph, t, steps)?;
    let coh = rho.get(0, 1).norm();
    let expected = 0.5 * (-gamma * t / 2.0).exp();
    checks.push(Check::at_most(
        "dephasing_coherence",
        (coh - expected).abs(),
        v.tolerance,
        format!("|rho01| = {coh:.12e}, exp(-gamma t / 2) / 2 = {expected:.12e}"),
    ));

    let n_th = cfg.noise.n_th;
    let thermal = NoiseModel::new(vec![LindbladTerm::thermal(0, gamma, n_th)?]);
    let relax = gamma * (2.0 * n_th + 1.0);
    let intervals = (30.0 / (relax * tau)).ceil().max(1.0);
    let mut rho = DensityMatrix::new_pure_ground(1)?;
    evolve_for(&mut rho, &thermal, intervals * tau, s * intervals as usize)?;
    let p1 = rho.get(1, 1).re;
    let expected = n_th / (2.0 * n_th + 1.0);
    checks.push(Check::at_most(
        "thermal_steady_state",
        (p1 - expected).abs(),
        v.tolerance,
        format!("p1 = {p1:.12e} after {intervals} intervals, n_th/(2 n_th + 1) = {expected:.12e}"),
    ));

    let worst = compiled_unitary_defect(v.unitary_samples, cfg.optimizer.seed)?;
    checks.push(Check::at_most(
        "compiled_unitary",
        worst,
        UNITARY_TOLERANCE,
        format!("{} random strings on <= 3 qubits", v.unitary_samples),
    ));

    // Fixed probe with gamma*tau = 1 so errors sit well above roundoff.
    let probe = NoiseModel::new(vec![LindbladTerm::amplitude_damping(0, 1.0)?]);
    let exact = (-1.0f64).exp();
    let e2 = (excited_population(&probe, 1.0, 2)? - exact).abs();
    let e4 = (excited_population(&probe, 1.0, 4)? - exact).abs();
    checks.push(Check::above(
        "rk4_order",
        e2 / e4,
        RK4_MIN_RATIO,
        format!("error {e2:.3e} at 2 substeps, {e4:.3e} at 4"),
    ));

    // Step-doubling estimate of the integration error at the configured
    // resolution over the full check window.
    let coarse = excited_population(&ad, t, steps)?;
    let fine = excited_population(&ad, t, 2 * steps)?;
    let estimate = (coarse - fine).abs() * 16.0 / 15.0;
    checks.push(Check::at_most(
        "rk4_resolution",
        estimate,
        v.tolerance,
        format!("{s} substeps per interval at gamma tau = {:.3e}", gamma * tau),
    ));
    Ok(checks)
}

/// `cos(theta/2) I - i sin(theta/2) P` for an involutory `P`.
fn pauli_rotation(p: &PauliString, theta: f64, n: usize) -> Matrix {
    let pm = p.to_matrix(n);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Matrix::from_fn(1 << n, |i, j| {
        let id = if i == j { C64::new(c, 0.0) } else { C64::new(0.0, 0.0) };
        id + C64::new(0.0, -s) * pm[(i, j)]
    })
}

/// Largest entrywise deviation between compiled Pauli exponentials and
/// their closed form over `samples` seeded random strings and angles.
pub fn compiled_unitary_defect(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = rng.gen_range(1..=3usize);
        let string = loop {
            let factors: Vec<(usize, Pauli)> = (0..n)
                .filter_map(|q| match rng.gen_range(0..4) {
                    0 => None,
                    1 => Some((q, Pauli::X)),
                    2 => Some((q, Pauli::Y)),
                    _ => Some((q, Pauli::Z)),
                })
                .collect();
            if !factors.is_empty() {
                break PauliString::new(factors)?;
            }
        };
        let theta = rng.gen_range(-2.0 * PI..2.0 * PI);
        let gates = compile_pauli_exponential(&string, Angle::Literal(theta), n)?;
        let mut c = Circuit::new(n, 0);
        c.extend(gates)?;
        let u = c.bind(&[])?.unitary()?;
        worst = worst.max(u.max_abs_diff(&pauli_rotation(&string, theta, n)));
    }
    Ok(worst)
}
