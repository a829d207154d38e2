//! Command dispatch shared by the binary and the tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, Mode, Template};
use crate::error::{IerError, Result};
use crate::exec::Executor;
use crate::experiments::{self, SWEEP_HEADER, TAU_HEADER};
use crate::formats::json::{report_to_json, VqeRecord};
use crate::formats::{csv_out, write_text};

/// Dense exact diagonalization is skipped above this many qubits.
const EXACT_ENERGY_MAX_QUBITS: usize = 8;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub large: bool,
}

/// Where results and progress go.
pub struct Sinks<'a> {
    /// Primary output when no output path is configured.
    pub out: &'a mut dyn Write,
    /// Summaries and diagnostics.
    pub log: &'a mut dyn Write,
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Vqe => "vqe",
        Mode::Mitigate => "mitigate",
        Mode::Sweep => "sweep",
        Mode::TauScaling => "tau_scaling",
        Mode::Validate => "validate",
    }
}

pub fn load(path: &Path, mode: Mode, ov: &Overrides) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(m) = cfg.mode {
        if m != mode {
            return Err(IerError::Config(format!(
                "config is for mode {:?} but {:?} was requested",
                mode_name(m),
                mode_name(mode)
            )));
        }
    }
    if let Some(o) = &ov.output {
        // Command-line paths stay relative to the working directory.
        cfg.output = Some(std::env::current_dir().map_err(|e| IerError::io(".", e))?.join(o));
    }
    if let Some(w) = ov.workers {
        cfg.parallel_workers = w;
    }
    if let Some(s) = ov.seed {
        cfg.optimizer.seed = s;
    }
    Ok(cfg)
}

fn emit(cfg: &ExperimentConfig, text: &str, sinks: &mut Sinks<'_>) -> Result<()> {
    match cfg.output.as_ref().map(|p| cfg.resolve(p)) {
        Some(p) => write_text(&p, text),
        None => sinks.out.write_all(text.as_bytes()).map_err(|e| IerError::io("<stdout>", e)),
    }
}

fn log_json(sinks: &mut Sinks<'_>, value: &impl Serialize) -> Result<()> {
    let line = serde_json::to_string(value)?;
    writeln!(sinks.log, "{line}").map_err(|e| IerError::io("<stderr>", e))
}

/// `out.csv` becomes `out_<suffix>.csv`.
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

pub fn run(mode: Mode, cfg: &ExperimentConfig, ov: &Overrides, sinks: &mut Sinks<'_>) -> Result<()> {
    if mode == Mode::Validate {
        return run_validate(cfg, sinks);
    }
    let setup = experiments::load_setup(cfg, ov.large)?;
    let exec = Executor::new(cfg.parallel_workers)?;
    let prop = cfg.propagator()?;
    match mode {
        Mode::Vqe => {
            let result = experiments::run_vqe(cfg, &setup)?;
            let exact = (setup.n_qubits() <= EXACT_ENERGY_MAX_QUBITS)
                .then(|| setup.hamiltonian.exact_ground_energy())
                .transpose()?;
            let mut text = serde_json::to_string_pretty(&VqeRecord::new(&result, exact))?;
            text.push('\n');
            emit(cfg, &text, sinks)
        }
        Mode::Mitigate => {
            let theta = experiments::resolve_theta(cfg, &setup)?;
            let model = cfg.noise.fixed_model(setup.n_qubits())?;
            let report = experiments::mitigate(&setup, &theta, &model, cfg.variant, &prop, &exec)?;
            let mut text = report_to_json(&report);
            text.push('\n');
            emit(cfg, &text, sinks)
        }
        Mode::Sweep => {
            cfg.validate_rates()?;
            if cfg.noise.templates.is_empty() {
                return Err(IerError::Config("sweep needs at least one noise template".into()));
            }
            let theta = experiments::resolve_theta(cfg, &setup)?;
            let circuit = setup.bind(&theta)?;
            let many = cfg.noise.templates.len() > 1;
            let mut stdout_text = String::new();
            for &template in &cfg.noise.templates {
                let points = experiments::sweep(
                    &setup,
                    &circuit,
                    template,
                    &cfg.rates,
                    cfg.noise.n_th,
                    cfg.noise.qubits.as_deref(),
                    cfg.variant,
                    &prop,
                    &exec,
                )?;
                let rows: Vec<Vec<f64>> = points.iter().map(experiments::SweepPoint::row).collect();
                let text = csv_out::render(&SWEEP_HEADER, &rows)?;
                match cfg.output.as_ref().map(|p| cfg.resolve(p)) {
                    Some(p) if many => write_text(&suffixed(&p, template.name()), &text)?,
                    Some(p) => write_text(&p, &text)?,
                    None => stdout_text.push_str(&text),
                }
                log_json(sinks, &SweepSummary { template, summary: experiments::summarize(&points, cfg.threshold) })?;
            }
            if !stdout_text.is_empty() {
                sinks.out.write_all(stdout_text.as_bytes()).map_err(|e| IerError::io("<stdout>", e))?;
            }
            Ok(())
        }
        Mode::TauScaling => {
            let theta = experiments::resolve_theta(cfg, &setup)?;
            let circuit = setup.bind(&theta)?;
            let model = cfg.noise.fixed_model(setup.n_qubits())?;
            let ts = cfg.tau_scaling;
            let (points, slopes) = experiments::tau_scaling(
                &setup,
                &circuit,
                &model,
                ts.tau0,
                ts.levels,
                cfg.substeps,
                cfg.variant,
                &exec,
            )?;
            let rows: Vec<Vec<f64>> = points.iter().map(experiments::TauPoint::row).collect();
            emit(cfg, &csv_out::render(&TAU_HEADER, &rows)?, sinks)?;
            log_json(sinks, &slopes)
        }
        Mode::Validate => unreachable!(),
    }
}

#[derive(Serialize)]
struct SweepSummary {
    template: Template,
    #[serde(flatten)]
    summary: experiments::ThresholdSummary,
}

fn run_validate(cfg: &ExperimentConfig, sinks: &mut Sinks<'_>) -> Result<()> {
    let checks = experiments::validate(cfg)?;
    let mut text = serde_json::to_string_pretty(&checks)?;
    text.push('\n');
    emit(cfg, &text, sinks)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    for c in checks.iter().filter(|c| !c.passed) {
        writeln!(sinks.log, "FAILED {}: {} (bound {:e}); {}", c.name, c.value, c.bound, c.detail)
            .map_err(|e| IerError::io("<stderr>", e))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(IerError::Failed(failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_insertion() {
        assert_eq!(suffixed(Path::new("out/s.csv"), "thermal"), PathBuf::from("out/s_thermal.csv"));
        assert_eq!(suffixed(Path::new("s"), "gamma1"), PathBuf::from("s_gamma1"));
    }
}
