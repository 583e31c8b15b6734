//! Least-squares fits of `N(T) ~ c T^alpha` and `N(R) ~ c e^(delta R)`.

use alloc::format;
use alloc::vec::Vec;

// Inherent float methods shadow these when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Counts `N` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CountSeries {
    t: Vec<f64>,
    n: Vec<u64>,
}

impl CountSeries {
    pub fn new(t: Vec<f64>, n: Vec<u64>) -> Result<Self> {
        if t.len() != n.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: n.len(),
            });
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("grid values must be finite"));
        }
        if t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("grid must be strictly increasing"));
        }
        Ok(CountSeries { t, n })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn grid(&self) -> &[f64] {
        &self.t
    }

    pub fn counts(&self) -> &[u64] {
        &self.n
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.t.iter().copied().zip(self.n.iter().copied())
    }

    pub fn is_monotone(&self) -> bool {
        self.n.windows(2).all(|w| w[0] <= w[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    pub alpha: f64,
    pub c: f64,
    pub alpha_stderr: f64,
    pub window: (f64, f64),
    pub n_points: usize,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::DegenerateFit("need at least two points"));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::DegenerateFit("zero variance in the abscissa"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let slope_stderr = if n > 2 {
        Float::sqrt(ssr / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    // A constant series is fitted exactly; rounding in the mean can leave a
    // tiny nonzero `syy` there.
    let flat = nf * (1e-12 * my.abs().max(1.0)).powi(2);
    let r_squared = if syy > flat {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
        r_squared,
    })
}

fn windowed(series: &CountSeries, window: (f64, f64)) -> impl Iterator<Item = (f64, u64)> + '_ {
    series
        .points()
        .filter(move |&(t, n)| t >= window.0 && t <= window.1 && n > 0)
}

/// The default window drops the first decade of the grid.
pub fn default_window(series: &CountSeries) -> Option<(f64, f64)> {
    let lo = *series.grid().first()?;
    let hi = *series.grid().last()?;
    Some((lo * 10.0, hi))
}

/// Fit `log N = alpha log T + log c` over the window.
pub fn fit_power_law(series: &CountSeries, window: Option<(f64, f64)>) -> Result<FitReport> {
    let window = match window {
        Some(w) => w,
        None => default_window(series).ok_or(Error::DegenerateFit("empty series"))?,
    };
    let (x, y): (Vec<f64>, Vec<f64>) = windowed(series, window)
        .map(|(t, n)| (Float::ln(t), Float::ln(n as f64)))
        .unzip();
    if x.len() < 4 {
        return Err(Error::DegenerateFit("fewer than 4 positive points in the window"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("grid values must be positive"));
    }
    let fit = linear_fit(&x, &y)?;
    Ok(FitReport {
        alpha: fit.slope,
        c: Float::exp(fit.intercept),
        alpha_stderr: fit.slope_stderr,
        window,
        n_points: x.len(),
        r_squared: fit.r_squared,
    })
}

/// Fit `log N = delta R + log c` over the window (the whole grid by default).
pub fn fit_exponential(series: &CountSeries, window: Option<(f64, f64)>) -> Result<FitReport> {
    let window = match window {
        Some(w) => w,
        None => {
            let lo = *series.grid().first().ok_or(Error::DegenerateFit("empty series"))?;
            (lo, *series.grid().last().expect("non-empty"))
        }
    };
    let (x, y): (Vec<f64>, Vec<f64>) = windowed(series, window).map(|(r, n)| (r, Float::ln(n as f64))).unzip();
    if x.len() < 4 {
        return Err(Error::DegenerateFit("fewer than 4 positive points in the window"));
    }
    let fit = linear_fit(&x, &y)?;
    Ok(FitReport {
        alpha: fit.slope,
        c: Float::exp(fit.intercept),
        alpha_stderr: fit.slope_stderr,
        window,
        n_points: x.len(),
        r_squared: fit.r_squared,
    })
}

/// `(T, N(T) / T^alpha)` for every grid point.
pub fn ratio_diagnostic(series: &CountSeries, alpha: f64) -> Vec<(f64, f64)> {
    series
        .points()
        .map(|(t, n)| (t, n as f64 / Float::powf(t, alpha)))
        .collect()
}

/// `(max - min) / mean` of the ratios over the last decade of the grid.
pub fn last_decade_spread(ratios: &[(f64, f64)]) -> Result<f64> {
    let hi = ratios.last().ok_or(Error::DegenerateFit("empty ratio sequence"))?.0;
    let tail: Vec<f64> = ratios
        .iter()
        .filter(|(t, _)| *t >= hi / 10.0)
        .map(|&(_, r)| r)
        .collect();
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    if mean <= 0.0 || !mean.is_finite() {
        return Err(Error::DegenerateFit("non-positive mean ratio"));
    }
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max - min) / mean)
}

fn round_sig6(x: f64) -> f64 {
    format!("{:.5e}", x).parse().unwrap_or(x)
}

/// `lo * 10^(k / per_decade)` up to `hi`, rounded to 6 significant digits.
pub fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("grid needs 0 < lo <= hi"));
    }
    if per_decade == 0 {
        return Err(Error::InvalidArgument("grid needs at least one point per decade"));
    }
    let decades = Float::log10(hi / lo);
    let steps = Float::floor(decades * per_decade as f64 + 1e-9) as usize;
    let mut out: Vec<f64> = (0..=steps)
        .map(|k| round_sig6(lo * Float::powf(10.0, k as f64 / per_decade as f64)))
        .collect();
    out.dedup();
    Ok(out)
}

/// `count` points spaced geometrically from `lo` to `hi` inclusive, rounded
/// to 6 significant digits.
pub fn geometric_points(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("grid needs 0 < lo < hi"));
    }
    if count < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points"));
    }
    let ratio = Float::ln(hi / lo) / (count - 1) as f64;
    let out: Vec<f64> = (0..count)
        .map(|k| match k {
            0 => round_sig6(lo),
            k if k == count - 1 => round_sig6(hi),
            k => round_sig6(lo * Float::exp(ratio * k as f64)),
        })
        .collect();
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid too dense for 6 significant digits"));
    }
    Ok(out)
}

/// `lo, lo + step, ...` up to `hi` (inclusive within rounding).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument("grid needs lo <= hi and step > 0"));
    }
    let steps = Float::floor((hi - lo) / step + 1e-9) as usize;
    Ok((0..=steps).map(|k| round_sig6(lo + k as f64 * step)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn exact(c: f64, alpha: f64, grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (grid.to_vec(), grid.iter().map(|t| c * t.powf(alpha)).collect())
    }

    fn fit_real(t: &[f64], n: &[f64]) -> LinearFit {
        let x: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let y: Vec<f64> = n.iter().map(|v| v.ln()).collect();
        linear_fit(&x, &y).unwrap()
    }

    #[test]
    fn exact_power_law_recovered() {
        let grid = geometric_grid(10.0, 1e4, 10).unwrap();
        let (t, n) = exact(3.0, 1.5, &grid);
        let fit = fit_real(&t, &n);
        assert!((fit.slope - 1.5).abs() < 1e-12);
        assert!((fit.intercept.exp() - 3.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integer_series_fit() {
        // T = 100^k keeps 3 * T^1.5 an exact integer.
        let t: Vec<f64> = (1..=5).map(|k| 100f64.powi(k)).collect();
        let n: Vec<u64> = (1..=5).map(|k| 3 * 1000u64.pow(k)).collect();
        let s = CountSeries::new(t, n).unwrap();
        let r = fit_power_law(&s, Some((1.0, 1e20))).unwrap();
        assert!((r.alpha - 1.5).abs() < 1e-12);
        assert!((r.c - 3.0).abs() < 1e-9);
        assert_eq!(r.n_points, 5);
    }

    #[test]
    fn constant_series_has_zero_slope() {
        let grid = geometric_grid(1.0, 1e4, 5).unwrap();
        let s = CountSeries::new(grid.clone(), vec![7; grid.len()]).unwrap();
        let r = fit_power_law(&s, None).unwrap();
        assert!(r.alpha.abs() < 1e-12);
        assert_eq!(r.r_squared, 1.0);
        assert!((r.c - 7.0).abs() < 1e-9);
    }

    #[test]
    fn default_window_drops_first_decade() {
        let grid = geometric_grid(1.0, 1e3, 4).unwrap();
        let s = CountSeries::new(grid.clone(), vec![1; grid.len()]).unwrap();
        let r = fit_power_law(&s, None).unwrap();
        assert_eq!(r.window, (10.0, 1000.0));
        assert_eq!(r.n_points, 9);
    }

    #[test]
    fn too_few_points_rejected() {
        let s = CountSeries::new(vec![1.0, 2.0, 3.0, 4.0], vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(
            fit_power_law(&s, Some((0.5, 5.0))),
            Err(Error::DegenerateFit(_))
        ));
        assert!(linear_fit(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(CountSeries::new(vec![1.0, 1.0], vec![1, 2]).is_err());
        assert!(CountSeries::new(vec![1.0], vec![1, 2]).is_err());
    }

    #[test]
    fn ratio_diagnostics() {
        let grid = geometric_grid(10.0, 1e5, 10).unwrap();
        let (_, n) = exact(2.0, 1.3, &grid);
        let s = CountSeries::new(grid.clone(), n.iter().map(|v| v.round() as u64).collect()).unwrap();
        let r = ratio_diagnostic(&s, 1.3);
        assert!(last_decade_spread(&r).unwrap() < 1e-4);
        // Exponent off by 0.1: the ratio drifts by 10^0.1 per decade.
        let exact_n: Vec<f64> = grid.iter().map(|t| 2.0 * t.powf(1.4)).collect();
        let drift: Vec<f64> = grid.iter().zip(&exact_n).map(|(t, n)| n / t.powf(1.3)).collect();
        for w in drift.windows(11).step_by(10) {
            assert!((w[10] / w[0] - 10f64.powf(0.1)).abs() < 1e-3);
        }
    }

    #[test]
    fn exponential_fit() {
        let grid = linear_grid(2.0, 12.0, 0.5).unwrap();
        let n: Vec<u64> = grid.iter().map(|r| (1.5 * r).exp().round() as u64).collect();
        let s = CountSeries::new(grid, n).unwrap();
        let r = fit_exponential(&s, None).unwrap();
        assert!((r.alpha - 1.5).abs() < 1e-3);
    }

    #[test]
    fn grid_rounding() {
        let g = geometric_grid(100.0, 1e5, 10).unwrap();
        assert_eq!(g.len(), 31);
        assert_eq!(g[0], 100.0);
        assert_eq!(g[10], 1000.0);
        assert_eq!(g[1], 125.893);
        assert_eq!(*g.last().unwrap(), 1e5);
    }

    #[test]
    fn fixed_count_grid() {
        let g = geometric_points(100.0, 1e6, 32).unwrap();
        assert_eq!(g.len(), 32);
        assert_eq!((g[0], g[31]), (100.0, 1e6));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let g = geometric_points(1.0, 1e3, 4).unwrap();
        assert_eq!(g, vec![1.0, 10.0, 100.0, 1000.0]);
        assert!(geometric_points(1.0, 1.00001, 50).is_err());
        assert!(geometric_points(5.0, 5.0, 8).is_err());
    }

    proptest! {
        #[test]
        fn scale_equivariance(k in 0.1f64..50.0, alpha in 0.5f64..2.0, c in 0.5f64..5.0) {
            let grid = geometric_grid(10.0, 1e5, 8).unwrap();
            let (t, n) = exact(c, alpha, &grid);
            let noisy: Vec<f64> = n.iter().enumerate().map(|(i, v)| v * (1.0 + 0.01 * ((i * 7 % 5) as f64 - 2.0))).collect();
            let base = fit_real(&t, &noisy);
            let scaled: Vec<f64> = t.iter().map(|v| v * k).collect();
            let moved = fit_real(&scaled, &noisy);
            prop_assert!((moved.slope - base.slope).abs() < 1e-10);
            let c0 = base.intercept.exp();
            let c1 = moved.intercept.exp();
            prop_assert!((c1 - c0 * k.powf(-base.slope)).abs() < 1e-10 * c0.max(1.0));
        }

        #[test]
        fn window_monotonicity(alpha in 0.5f64..2.0, lo_dec in 1u32..3) {
            let grid = geometric_grid(10.0, 1e6, 10).unwrap();
            let (t, n) = exact(1.7, alpha, &grid);
            let all = fit_real(&t, &n);
            let lo = 10f64.powi(lo_dec as i32 + 1);
            let (tw, nw): (Vec<f64>, Vec<f64>) = t.iter().zip(&n).filter(|(a, _)| **a >= lo).map(|(a, b)| (*a, *b)).unzip();
            let late = fit_real(&tw, &nw);
            prop_assert!((late.slope - all.slope).abs() < 1e-12);
        }
    }
}
