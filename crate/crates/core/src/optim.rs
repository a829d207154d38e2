//! Derivative-free Nelder-Mead simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadSettings {
    /// Hard cap on objective evaluations, including the starting point.
    pub max_evals: usize,
    /// Converged once every vertex value is within `f_tol` of the best...
    pub f_tol: f64,
    /// ...and every vertex coordinate within `x_tol` of the best vertex.
    pub x_tol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadSettings {
    fn default() -> Self {
        Self { max_evals: 4000, f_tol: 1e-10, x_tol: 1e-6, initial_step: 0.1 }
    }
}

impl NelderMeadSettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidConfig("max_evals must be at least 1"));
        }
        if !(self.f_tol > 0.0 && self.x_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        if !(self.initial_step.is_finite() && self.initial_step != 0.0) {
            return Err(Error::InvalidConfig("initial_step must be finite and non-zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
    /// `(evaluation index, best value so far)` at every improvement.
    pub history: Vec<(usize, f64)>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Budgeted<F> {
    f: F,
    evals: usize,
    max_evals: usize,
    best: Option<(Vec<f64>, f64)>,
    history: Vec<(usize, f64)>,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Budgeted<F> {
    /// `Ok(None)` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.evals >= self.max_evals {
            return Ok(None);
        }
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        self.evals += 1;
        if self.best.as_ref().map_or(true, |(_, b)| v < *b) {
            self.best = Some((x.to_vec(), v));
            self.history.push((self.evals - 1, v));
        }
        Ok(Some(v))
    }

    fn finish(self, converged: bool) -> OptimOutcome {
        let (x, value) = self.best.expect("at least one evaluation");
        OptimOutcome { x, value, evals: self.evals, converged, history: self.history }
    }
}

macro_rules! eval_or_finish {
    ($b:expr, $x:expr) => {
        match $b.eval($x)? {
            Some(v) => v,
            None => return Ok($b.finish(false)),
        }
    };
}

/// Minimizes `f` starting from `x0` with reflection 1, expansion 2,
/// contraction 1/2 and shrink 1/2.
pub fn nelder_mead<F>(f: F, x0: &[f64], settings: &NelderMeadSettings) -> Result<OptimOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    settings.validate()?;
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("starting point"));
    }
    let n = x0.len();
    let mut b = Budgeted { f, evals: 0, max_evals: settings.max_evals, best: None, history: Vec::new() };

    let f0 = eval_or_finish!(b, x0);
    if n == 0 {
        return Ok(b.finish(true));
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += settings.initial_step;
        let v = eval_or_finish!(b, &x);
        simplex.push((x, v));
    }

    let mut centroid = vec![0.0; n];
    let point = |c: &[f64], toward: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(toward).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };
    loop {
        // stable sort keeps ties in insertion order
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite values"));
        let (best_x, best_f) = (&simplex[0].0, simplex[0].1);
        let f_spread = simplex.iter().map(|(_, v)| (v - best_f).abs()).fold(0.0, f64::max);
        let x_spread =
            simplex.iter().flat_map(|(x, _)| x.iter().zip(best_x).map(|(a, c)| (a - c).abs())).fold(0.0, f64::max);
        if f_spread <= settings.f_tol && x_spread <= settings.x_tol {
            return Ok(b.finish(true));
        }

        centroid.fill(0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst_f = simplex[n].1;
        let second_worst_f = simplex[n - 1].1;

        let xr = point(&centroid, &simplex[n].0, -REFLECT);
        let fr = eval_or_finish!(b, &xr);
        if fr < best_f {
            let xe = point(&centroid, &xr, EXPAND);
            let fe = eval_or_finish!(b, &xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second_worst_f {
            simplex[n] = (xr, fr);
            continue;
        }
        let accepted = if fr < worst_f {
            let xc = point(&centroid, &xr, CONTRACT);
            let fc = eval_or_finish!(b, &xc);
            (fc <= fr).then_some((xc, fc))
        } else {
            let xc = point(&centroid, &simplex[n].0, CONTRACT);
            let fc = eval_or_finish!(b, &xc);
            (fc < worst_f).then_some((xc, fc))
        };
        match accepted {
            Some(v) => simplex[n] = v,
            None => {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let xs = point(&anchor, &vertex.0, SHRINK);
                    let fs = eval_or_finish!(b, &xs);
                    *vertex = (xs, fs);
                }
            }
        }
    }
}
