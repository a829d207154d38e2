//! Experiment configuration (a single JSON document).
//!
//! Relative paths are resolved against the directory holding the config
//! file. Energies are in Hartree and rates in inverse gate intervals.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ier_core::noise::ring_pairs;
use ier_core::vqe::OptimizerSettings;
use ier_core::{LindbladTerm, NoiseKind, NoiseModel, PropagatorConfig};

use crate::error::{IerError, Result};
use crate::formats::json::{noise_model_from_specs, TermSpec};
use crate::formats::read_text;

/// Qubit count above which `--large` is required.
pub const DEFAULT_QUBIT_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Vqe,
    Mitigate,
    Sweep,
    TauScaling,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AnsatzConfig {
    /// Generator file.
    File(PathBuf),
    Entangling {
        layers: usize,
    },
}

/// Homogeneous noise families swept against a single rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    /// Amplitude damping only.
    Gamma1,
    /// Dephasing only.
    Gamma2,
    /// Amplitude damping and dephasing at equal rates.
    Gamma1Gamma2,
    Thermal,
    /// Ring-paired correlated terms.
    Correlated,
}

impl Template {
    pub fn name(self) -> &'static str {
        match self {
            Template::Gamma1 => "gamma1",
            Template::Gamma2 => "gamma2",
            Template::Gamma1Gamma2 => "gamma1_gamma2",
            Template::Thermal => "thermal",
            Template::Correlated => "correlated",
        }
    }

    /// Homogeneous model on `qubits` (all qubits when `None`). Correlated
    /// terms pair the listed qubits in a ring.
    pub fn model(self, n_qubits: usize, rate: f64, n_th: f64, qubits: Option<&[usize]>) -> Result<NoiseModel> {
        let all: Vec<usize> = (0..n_qubits).collect();
        let qs = qubits.unwrap_or(&all);
        if let Some(&q) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(IerError::Config(format!("noise qubit {q} outside a {n_qubits}-qubit register")));
        }
        let single = |kind: NoiseKind| -> Result<Vec<LindbladTerm>> {
            Ok(qs
                .iter()
                .map(|&q| LindbladTerm::new(kind, &[q], rate, (kind == NoiseKind::Thermal).then_some(n_th)))
                .collect::<Result<_, _>>()?)
        };
        let terms = match self {
            Template::Gamma1 => single(NoiseKind::AmplitudeDamping)?,
            Template::Gamma2 => single(NoiseKind::Dephasing)?,
            Template::Gamma1Gamma2 => {
                let mut t = single(NoiseKind::AmplitudeDamping)?;
                t.extend(single(NoiseKind::Dephasing)?);
                t
            }
            Template::Thermal => single(NoiseKind::Thermal)?,
            Template::Correlated => {
                if qs.len() < 2 {
                    return Err(IerError::Config("correlated noise needs at least two qubits".into()));
                }
                ring_pairs(qs.len())
                    .into_iter()
                    .map(|(a, b)| LindbladTerm::correlated(qs[a], qs[b], rate))
                    .collect::<Result<_, _>>()?
            }
        };
        Ok(NoiseModel::new(terms))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    /// Sweep families; the first one also defines the model for `mitigate`
    /// and `tau-scaling` when `terms` is absent.
    #[serde(default)]
    pub templates: Vec<Template>,
    /// Rate used with `templates[0]` outside of sweeps.
    #[serde(default)]
    pub rate: Option<f64>,
    #[serde(default = "default_n_th")]
    pub n_th: f64,
    /// Qubits the templates act on; all qubits when absent.
    #[serde(default)]
    pub qubits: Option<Vec<usize>>,
    /// Explicit model; overrides the templates outside of sweeps.
    #[serde(default)]
    pub terms: Option<Vec<TermSpec>>,
}

fn default_n_th() -> f64 {
    ier_core::noise::DEFAULT_N_TH
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { templates: Vec::new(), rate: None, n_th: default_n_th(), qubits: None, terms: None }
    }
}

impl NoiseConfig {
    /// The fixed model used by `mitigate` and `tau-scaling`.
    pub fn fixed_model(&self, n_qubits: usize) -> Result<NoiseModel> {
        if let Some(terms) = &self.terms {
            return noise_model_from_specs(terms);
        }
        match (self.templates.first(), self.rate) {
            (Some(t), Some(rate)) => t.model(n_qubits, rate, self.n_th, self.qubits.as_deref()),
            (None, _) => Ok(NoiseModel::empty()),
            (Some(_), None) => Err(IerError::Config("noise.rate is required with a template".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub max_evals: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    pub initial_step: f64,
    pub seed: u64,
    pub jitter: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let d = OptimizerSettings::default();
        Self {
            max_evals: d.max_evals,
            f_tol: d.f_tol,
            x_tol: d.x_tol,
            initial_step: d.initial_step,
            seed: d.seed,
            jitter: d.jitter,
        }
    }
}

impl OptimizerConfig {
    pub fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            max_evals: self.max_evals,
            f_tol: self.f_tol,
            x_tol: self.x_tol,
            initial_step: self.initial_step,
            seed: self.seed,
            jitter: self.jitter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum VariantConfig {
    Removal,
    Inflation { factor: f64, per_qubit: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TauScalingConfig {
    /// Largest interval of the ladder.
    pub tau0: f64,
    /// Number of halvings, including `tau0` itself.
    pub levels: usize,
    pub max_uncorrected_slope_error: f64,
    pub min_corrected_slope: f64,
}

impl Default for TauScalingConfig {
    fn default() -> Self {
        Self { tau0: 1.0, levels: 4, max_uncorrected_slope_error: 0.15, min_corrected_slope: 1.8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    /// Rate used by the closed-form channel checks.
    pub rate: f64,
    /// Number of gate intervals the decay checks run for.
    pub intervals: usize,
    pub tolerance: f64,
    /// Random strings for the compiled-unitary check.
    pub unitary_samples: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { rate: 0.1, intervals: 10, tolerance: 1e-6, unitary_samples: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub hamiltonian: Option<PathBuf>,
    #[serde(default)]
    pub ansatz: Option<AnsatzConfig>,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub rates: Vec<f64>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    /// Optimize with the noise model switched on.
    #[serde(default)]
    pub optimize_under_noise: bool,
    /// Parameters for `mitigate`/`sweep`/`tau-scaling`; a noiseless VQE runs
    /// when neither this nor `theta_path` is set.
    #[serde(default)]
    pub theta: Option<Vec<f64>>,
    /// Output of a previous `vqe` run.
    #[serde(default)]
    pub theta_path: Option<PathBuf>,
    #[serde(default)]
    pub variant: Option<VariantConfig>,
    /// Error level (Hartree) whose crossing rates the sweep summary reports.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub tau_scaling: TauScalingConfig,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub parallel_workers: usize,

    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_tau() -> f64 {
    1.0
}

fn default_substeps() -> usize {
    64
}

fn default_threshold() -> f64 {
    1.6e-3
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base).map_err(|e| e.in_file(path))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn propagator(&self) -> Result<PropagatorConfig> {
        Ok(PropagatorConfig::new(self.tau, self.substeps)?)
    }

    pub fn validate_rates(&self) -> Result<()> {
        if self.rates.is_empty() {
            return Err(IerError::Config("rates must not be empty for a sweep".into()));
        }
        if self.rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(IerError::Config("rates must be finite and non-negative".into()));
        }
        if self.rates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(IerError::Config("rates must be strictly increasing".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let c = ExperimentConfig::parse("{}", "/tmp").unwrap();
        assert_eq!(c.tau, 1.0);
        assert_eq!(c.substeps, 64);
        assert_eq!(c.noise.n_th, 0.5);
        assert_eq!(c.parallel_workers, 1);
        assert_eq!(c.resolve(Path::new("a.txt")), PathBuf::from("/tmp/a.txt"));
    }

    #[test]
    fn full_config() {
        let text = r#"{
            "mode": "sweep",
            "hamiltonian": "../data/h2_sto3g_0.74.pauli",
            "ansatz": {"entangling": {"layers": 4}},
            "noise": {"templates": ["gamma1_gamma2", "correlated"], "rate": 0.001},
            "rates": [0.0, 1e-4, 1e-3],
            "optimizer": {"seed": 3},
            "variant": {"inflation": {"factor": 2.0, "per_qubit": true}},
            "output": "out.csv"
        }"#;
        let c = ExperimentConfig::parse(text, "").unwrap();
        assert_eq!(c.mode, Some(Mode::Sweep));
        assert_eq!(c.ansatz, Some(AnsatzConfig::Entangling { layers: 4 }));
        assert_eq!(c.noise.templates, vec![Template::Gamma1Gamma2, Template::Correlated]);
        assert_eq!(c.optimizer.seed, 3);
        assert_eq!(c.optimizer.max_evals, OptimizerSettings::default().max_evals);
        c.validate_rates().unwrap();
        assert_eq!(c.noise.fixed_model(4).unwrap().len(), 8);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_rates() {
        assert!(ExperimentConfig::parse(r#"{"tua": 1.0}"#, "").is_err());
        let c = ExperimentConfig::parse(r#"{"rates": [1e-3, 1e-4]}"#, "").unwrap();
        assert!(c.validate_rates().is_err());
        let c = ExperimentConfig::parse("{}", "").unwrap();
        assert!(c.validate_rates().is_err());
    }

    #[test]
    fn template_models() {
        assert_eq!(Template::Gamma1Gamma2.model(4, 0.1, 0.5, None).unwrap().len(), 8);
        assert_eq!(Template::Correlated.model(4, 0.1, 0.5, None).unwrap().len(), 4);
        assert_eq!(Template::Correlated.model(4, 0.1, 0.5, Some(&[1, 3])).unwrap().terms()[0].qubits(), &[1, 3]);
        assert!(Template::Correlated.model(4, 0.1, 0.5, Some(&[1])).is_err());
        assert!(Template::Gamma1.model(4, 0.1, 0.5, Some(&[4])).is_err());
        let th = Template::Thermal.model(2, 0.1, 0.25, None).unwrap();
        assert_eq!(th.terms()[0].n_th(), Some(0.25));
        assert_eq!(Template::Gamma1.model(2, 0.1, 0.25, None).unwrap().terms()[0].n_th(), None);
    }
}
