//! Helpers for reading error-versus-rate curves.

/// Least-squares slope of `ln y` against `ln x`. `None` if fewer than two
/// points or any value is not strictly positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|v| *v <= 0.0 || !v.is_finite()) {
        return None;
    }
    let n = xs.len() as f64;
    let lx: alloc::vec::Vec<f64> = xs.iter().map(|x| libm::log(*x)).collect();
    let ly: alloc::vec::Vec<f64> = ys.iter().map(|y| libm::log(*y)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// Already at or above the threshold at the first grid point.
    BelowGrid(f64),
    /// Crosses between two grid points; log-log interpolated rate.
    At(f64),
    /// Stays below the threshold over the whole grid.
    Never,
}

impl Crossing {
    /// Crossing rate, using the grid edge for the open-ended cases.
    pub fn rate_or(&self, upper: f64) -> f64 {
        match *self {
            Crossing::BelowGrid(r) | Crossing::At(r) => r,
            Crossing::Never => upper,
        }
    }
}

/// First rate (ascending grid) at which `values` reaches `threshold`.
pub fn threshold_crossing(rates: &[f64], values: &[f64], threshold: f64) -> Crossing {
    let Some(k) = values.iter().position(|v| *v >= threshold) else {
        return Crossing::Never;
    };
    if k == 0 {
        return Crossing::BelowGrid(rates[0]);
    }
    let (r0, r1, v0, v1) = (rates[k - 1], rates[k], values[k - 1], values[k]);
    if v0 > 0.0 && r0 > 0.0 && v1 > v0 {
        let t = (libm::log(threshold) - libm::log(v0)) / (libm::log(v1) - libm::log(v0));
        Crossing::At(libm::exp(libm::log(r0) + t * (libm::log(r1) - libm::log(r0))))
    } else {
        Crossing::At(r1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 0.5, 0.25, 0.125];
        let ys: alloc::vec::Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&xs, &[1.0, 0.0, 1.0, 1.0]), None);
    }

    #[test]
    fn crossing_interpolates() {
        let rates = [1e-4, 1e-3, 1e-2];
        let vals = [1e-5, 1e-4, 1e-3];
        match threshold_crossing(&rates, &vals, 3.16227766e-4) {
            Crossing::At(r) => assert!((r / 3.16227766e-3 - 1.0).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        assert_eq!(threshold_crossing(&rates, &vals, 1.0), Crossing::Never);
        assert_eq!(threshold_crossing(&rates, &vals, 1e-6), Crossing::BelowGrid(1e-4));
    }
}
