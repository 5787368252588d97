//! Numerical probe of the diffractive front: sample the windowed mode-sum
//! kernel on a tapered grid around `t = r1 + r2`, remove the geometric
//! contribution, invert the windowed oscillatory representation by a
//! short-time Fourier transform, and fit the `lambda^{-1}` symbol
//! coefficient against the closed-form diffraction coefficient. Also
//! checks the geometric front at `t = |q1 - q2|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::diffraction::diffraction_coefficient;
use crate::mode_sum::{Flux, FrequencyWindow, KernelEvaluator, KernelSample, ModeSpec, PolarPoint};
use crate::quad::composite_gl;
use crate::{AccuracyBudget, Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Uniform tapered sampling grid centred on a front.
#[derive(Debug, Clone, Serialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub half_width: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, half_width: f64, n: usize) -> Result<Self> {
        if !(t0 > 0.0 && half_width > 0.0 && half_width < t0) {
            return Err(Error::Config(format!(
                "time grid needs 0 < half_width < t0, got t0 = {t0}, half_width = {half_width}"
            )));
        }
        if n < 16 {
            return Err(Error::Config(format!("time grid needs at least 16 samples, got {n}")));
        }
        Ok(TimeGrid { t0, half_width, n })
    }

    /// Grid with spacing `(2 pi / lambda_hi) / 8` (8 samples per period of
    /// the fastest windowed oscillation).
    pub fn for_window(t0: f64, half_width: f64, g: &FrequencyWindow) -> Result<Self> {
        let dt = (2.0 * PI / g.support().1) / 8.0;
        let n = ((2.0 * half_width / dt).ceil() as usize + 1).max(16);
        TimeGrid::new(t0, half_width, n)
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.n)
            .map(|i| self.t0 - self.half_width + dt * i as f64)
            .collect()
    }

    /// C-infinity bump taper vanishing at the grid edges.
    pub fn taper(&self, t: f64) -> f64 {
        let u = (t - self.t0) / self.half_width;
        if u.abs() >= 0.999 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - u * u)).exp()
        }
    }
}

/// Fitted `lambda^{-1}` symbol coefficient over a frequency band, in the
/// one-sided representation `sum_k a_k int g(l) l^{-k} e^{i l (t - t0)} dl`.
#[derive(Debug, Clone, Serialize)]
pub struct ConormalAmplitude {
    pub a0: Complex64,
    /// Subleading `lambda^{-2}` coefficient absorbed by the two-term fit.
    pub a1: Complex64,
    pub fit_band: (f64, f64),
    /// Relative l2 residual of the fit over the band.
    pub residual: f64,
    pub method: String,
}

/// Outcome of a probe run compared against the closed-form coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub estimate: ConormalAmplitude,
    /// `2 pi i` times the fitted one-sided coefficient: the estimate mapped
    /// into the normalization of the closed-form coefficient.
    pub estimate_theory_scale: Complex64,
    pub theory: Complex64,
    pub rel_mag_err: f64,
    /// Reported but not gated: the symbol branch for negative frequencies
    /// fixes an overall phase convention.
    pub phase_err: f64,
    pub max_mode_tail: f64,
    pub max_quad_err: f64,
    pub near_excluded_warning: bool,
}

/// Sample the windowed kernel at every grid time, in parallel.
pub fn kernel_time_series(evaluator: &KernelEvaluator, dtheta: f64, grid: &TimeGrid) -> Vec<KernelSample> {
    grid.times()
        .par_iter()
        .map(|&t| evaluator.eval(t, dtheta))
        .collect()
}

/// `int w(l) l^{-k} e^{i l tau} dl` over `support` by direct quadrature;
/// the model basis the extraction fits against, pushed through the
/// identical grid and taper as the data.
fn basis_response(weight: &dyn Fn(f64) -> f64, support: (f64, f64), k: i32, tau: f64) -> Complex64 {
    let (lo, hi) = support;
    let cycles = (hi - lo) * (tau.abs() + 1.0) / (2.0 * PI);
    let panels = ((1.4 * cycles).ceil() as usize).max(8);
    let (nodes, weights) = composite_gl(lo, hi, panels, 12);
    let mut acc = Complex64::new(0.0, 0.0);
    for (l, w) in nodes.iter().zip(&weights) {
        acc += w * weight(*l) * l.powi(-k) * Complex64::from_polar(1.0, l * tau);
    }
    acc
}

/// Synthesize a time series `E(t) = sum_k c_k int g(l) l^{-k} e^{i l (t-t0)} dl`
/// by direct quadrature (manufactured-solution input for gating the probe).
pub fn manufactured_series(grid: &TimeGrid, g: &FrequencyWindow, coeffs: &[(i32, Complex64)]) -> Vec<Complex64> {
    grid.times()
        .iter()
        .map(|&t| {
            coeffs
                .iter()
                .map(|&(k, c)| c * basis_response(&|l| g.eval(l), g.support(), k, t - grid.t0))
                .sum()
        })
        .collect()
}

/// Tapered short-time DFT of a series at frequency `lambda`.
fn tapered_dft(series: &[Complex64], grid: &TimeGrid, lambda: f64) -> Complex64 {
    let dt = grid.dt();
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, v) in grid.times().iter().zip(series) {
        acc += grid.taper(*t) * v * Complex64::from_polar(1.0, -lambda * (t - grid.t0));
    }
    acc * dt
}

/// Fit symbol coefficients `sum_k c_k l^{-powers[k]}` against a series
/// sampled on `grid`, in the representation
/// `E(t) = sum_k c_k int w(l) l^{-powers[k]} e^{i l (t - t0)} dl`.
///
/// The taper's spectral leakage is handled exactly: the basis responses are
/// pushed through the same grid, taper, and DFT as the data, so the fit
/// compares like with like. Returns the coefficients and the relative l2
/// fit residual over the band.
pub fn fit_symbol_coefficients(
    series: &[Complex64],
    grid: &TimeGrid,
    weight: &dyn Fn(f64) -> f64,
    support: (f64, f64),
    powers: &[i32],
    band: (f64, f64),
) -> Result<(Vec<Complex64>, f64)> {
    let (lo, hi) = band;
    let (slo, shi) = support;
    if !(slo <= lo && lo < hi && hi <= shi) {
        return Err(Error::Domain(format!(
            "fit band [{lo}, {hi}] must sit inside the window support [{slo}, {shi}]"
        )));
    }
    if grid.dt() > (2.0 * PI / hi) / 8.0 + 1e-12 {
        return Err(Error::Config(
            "grid does not resolve the top of the band at 8 samples per period".into(),
        ));
    }
    if series.len() != grid.n {
        return Err(Error::Config(format!(
            "series length {} does not match grid ({})",
            series.len(),
            grid.n
        )));
    }
    let m = powers.len();
    if m == 0 || m > 4 {
        return Err(Error::Config("fit model needs 1..=4 symbol terms".into()));
    }
    // Basis responses through the identical pipeline.
    let n_freq = 33usize;
    let freqs: Vec<f64> = (0..n_freq)
        .map(|j| lo + (hi - lo) * j as f64 / (n_freq - 1) as f64)
        .collect();
    let times = grid.times();
    let responses: Vec<Vec<Complex64>> = powers
        .iter()
        .map(|&k| {
            let b: Vec<Complex64> = times
                .iter()
                .map(|&t| basis_response(weight, support, k, t - grid.t0))
                .collect();
            freqs.iter().map(|&l| tapered_dft(&b, grid, l)).collect()
        })
        .collect();
    let f: Vec<Complex64> = freqs.iter().map(|&l| tapered_dft(series, grid, l)).collect();
    // Complex normal equations, solved by Gaussian elimination with
    // partial pivoting (m <= 4).
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
    };
    let mut mat: Vec<Vec<Complex64>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&responses[i], &responses[j])).collect())
        .collect();
    let mut rhs: Vec<Complex64> = (0..m).map(|i| dot(&responses[i], &f)).collect();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&a, &b| mat[a][col].norm().partial_cmp(&mat[b][col].norm()).unwrap())
            .unwrap();
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        if mat[col][col].norm() < 1e-30 {
            return Err(Error::Accuracy {
                context: "symbol fit normal equations are singular".into(),
                achieved: mat[col][col].norm(),
                requested: 1e-30,
            });
        }
        for row in col + 1..m {
            let factor = mat[row][col] / mat[col][col];
            for j in col..m {
                let v = mat[col][j];
                mat[row][j] -= factor * v;
            }
            let v = rhs[col];
            rhs[row] -= factor * v;
        }
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
    for row in (0..m).rev() {
        let mut acc = rhs[row];
        for j in row + 1..m {
            acc -= mat[row][j] * coeffs[j];
        }
        coeffs[row] = acc / mat[row][row];
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..n_freq {
        let fitted: Complex64 = (0..m).map(|i| coeffs[i] * responses[i][j]).sum();
        num += (f[j] - fitted).norm_sqr();
        den += f[j].norm_sqr();
    }
    let residual = (num / den.max(1e-300)).sqrt();
    Ok((coeffs, residual))
}

/// Invert the windowed representation over `band` and fit the two-term
/// model `a(l) = a0 / l + a1 / l^2` by least squares.
pub fn extract_conormal_amplitude(
    series: &[Complex64],
    grid: &TimeGrid,
    g: &FrequencyWindow,
    band: (f64, f64),
) -> Result<ConormalAmplitude> {
    let (coeffs, residual) =
        fit_symbol_coefficients(series, grid, &|l| g.eval(l), g.support(), &[1, 2], band)?;
    if residual > 0.5 {
        return Err(Error::Accuracy {
            context: format!(
                "conormal fit residual {residual:.3e} over band [{}, {}]: data inconsistent with the two-term model",
                band.0, band.1
            ),
            achieved: residual,
            requested: 0.5,
        });
    }
    Ok(ConormalAmplitude {
        a0: coeffs[0],
        a1: coeffs[1],
        fit_band: band,
        residual,
        method: "tapered-dft least squares vs basis responses".into(),
    })
}

/// Compare a fitted amplitude against the closed-form coefficient.
///
/// The real sine-propagator kernel carries the one-sided representation
/// with weight `-i / (2 pi)`, so the fitted coefficient is mapped to the
/// closed-form normalization by multiplying with `2 pi i`.
pub fn compare_to_theory(
    estimate: &ConormalAmplitude,
    alpha: Flux,
    q1: &PolarPoint,
    q2: &PolarPoint,
) -> Result<ProbeReport> {
    let theory = diffraction_coefficient(alpha, q1, q2)?;
    let norm_cfg = crate::diffraction::normalize_configuration(q1, q2)?;
    let estimate_theory_scale = estimate.a0 * Complex64::new(0.0, 2.0 * PI);
    let rel_mag_err = (estimate_theory_scale.norm() - theory.norm()).abs() / theory.norm();
    let phase_err = crate::mode_sum::reduce_angle((estimate_theory_scale / theory).arg());
    Ok(ProbeReport {
        estimate: estimate.clone(),
        estimate_theory_scale,
        theory,
        rel_mag_err,
        phase_err,
        max_mode_tail: 0.0,
        max_quad_err: 0.0,
        near_excluded_warning: norm_cfg.near_excluded_warning,
    })
}

/// Half-width policy: cover the front but stay clear of the other front
/// and of `t = 0`.
pub fn probe_half_width(t0: f64, t_geo: f64) -> f64 {
    let d = (t0 - t_geo).abs();
    (0.9 * d).clamp(0.5, 1.6).min(0.9 * t0)
}

/// Full diffractive-front probe: guard checks, series, geometric-reference
/// subtraction, extraction, and comparison.
pub fn probe_diffraction(
    alpha: Flux,
    q1: &PolarPoint,
    q2: &PolarPoint,
    g: &FrequencyWindow,
    modes: &ModeSpec,
    band: (f64, f64),
    budget: &AccuracyBudget,
) -> Result<ProbeReport> {
    let t0 = q1.r + q2.r;
    let t_geo = q1.dist(q2);
    let guard = 1.0 / g.sigma_eff();
    let rho = t_geo;
    if (t0 - t_geo).abs() < guard {
        return Err(Error::Domain(format!(
            "fronts too close: |r1 + r2 - |q1 - q2|| = {:.3e} < guard {:.3e}; the taper cannot separate them",
            (t0 - t_geo).abs(),
            guard
        )));
    }
    let dtheta = crate::mode_sum::reduce_angle(q1.theta - q2.theta);
    let hw = probe_half_width(t0, t_geo);
    let grid = TimeGrid::for_window(t0, hw, g)?;
    let evaluator = KernelEvaluator::new(alpha, q1.r, q2.r, t0 + hw, g, modes, budget)?;
    let samples = kernel_time_series(&evaluator, dtheta, &grid);
    // Geometric reference: the twisted free front, subtracted before the fit.
    let phase = Complex64::from_polar(1.0, -alpha.value() * dtheta);
    let series: Vec<Complex64> = grid
        .times()
        .iter()
        .zip(&samples)
        .map(|(&t, s)| Ok(s.value - phase * crate::mode_sum::windowed_free_kernel(t, rho, g, budget)?))
        .collect::<Result<_>>()?;
    // Mode-tail gating against the expected coefficient scale.
    let theory = diffraction_coefficient(alpha, q1, q2)?;
    let scale = theory.norm() / (2.0 * PI) * g.mass() / g.support().1.max(1.0);
    let max_mode_tail = samples.iter().map(|s| s.est_mode_tail).fold(0.0, f64::max);
    let max_quad_err = samples.iter().map(|s| s.est_quad_err).fold(0.0, f64::max);
    for (what, v) in [("mode tail", max_mode_tail), ("quadrature error", max_quad_err)] {
        if v > 0.01 * scale {
            return Err(Error::Accuracy {
                context: format!("probe refuses to report: estimated {what} exceeds 1% of the coefficient scale"),
                achieved: v,
                requested: 0.01 * scale,
            });
        }
    }
    let estimate = extract_conormal_amplitude(&series, &grid, g, band)?;
    let mut report = compare_to_theory(&estimate, alpha, q1, q2)?;
    report.max_mode_tail = max_mode_tail;
    report.max_quad_err = max_quad_err;
    Ok(report)
}

/// Report of the geometric-front comparison.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricFrontReport {
    /// Relative magnitude error at the free-kernel peak sample.
    pub rel_mag_err: f64,
    /// `arg(E / free) + alpha dtheta`, reduced: residual phase after
    /// removing the predicted conjugation factor.
    pub phase_err: f64,
    pub peak_time: f64,
}

/// Check that the windowed kernel near `t = |q1 - q2|` equals
/// `e^{-i alpha dtheta}` times the windowed free kernel at leading order.
pub fn geometric_front_check(
    alpha: Flux,
    q1: &PolarPoint,
    q2: &PolarPoint,
    g: &FrequencyWindow,
    modes: &ModeSpec,
    budget: &AccuracyBudget,
) -> Result<GeometricFrontReport> {
    let t0 = q1.dist(q2);
    let t_diff = q1.r + q2.r;
    let guard = 1.0 / g.sigma_eff();
    if (t_diff - t0).abs() < guard {
        return Err(Error::Domain(format!(
            "fronts too close: separation {:.3e} < guard {:.3e}",
            (t_diff - t0).abs(),
            guard
        )));
    }
    let dtheta = crate::mode_sum::reduce_angle(q1.theta - q2.theta);
    let hw = probe_half_width(t0, t_diff);
    let grid = TimeGrid::for_window(t0, hw, g)?;
    let evaluator = KernelEvaluator::new(alpha, q1.r, q2.r, t0 + hw, g, modes, budget)?;
    let samples = kernel_time_series(&evaluator, dtheta, &grid);
    let phase = Complex64::from_polar(1.0, -alpha.value() * dtheta);
    let mut best = (0.0f64, 0.0f64, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (&t, s) in grid.times().iter().zip(&samples) {
        let free = crate::mode_sum::windowed_free_kernel(t, t0, g, budget)?;
        if free.abs() > best.1 {
            best = (t, free.abs(), Complex64::new(free, 0.0), s.value);
        }
    }
    let (peak_time, _, free_peak, kernel_peak) = best;
    let ratio = kernel_peak / free_peak;
    Ok(GeometricFrontReport {
        rel_mag_err: (ratio.norm() - 1.0).abs(),
        phase_err: crate::mode_sum::reduce_angle((ratio / phase).arg()),
        peak_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_sum::WindowShape;

    fn window() -> FrequencyWindow {
        FrequencyWindow::new(WindowShape::Gaussian, 30.0, 5.0).unwrap()
    }

    #[test]
    fn taper_is_smooth_and_compact() {
        let grid = TimeGrid::new(2.0, 1.0, 64).unwrap();
        assert_eq!(grid.taper(1.0), 0.0);
        assert_eq!(grid.taper(3.0), 0.0);
        assert!((grid.taper(2.0) - 1.0).abs() < 1e-15);
        assert!(grid.taper(2.5) > 0.0 && grid.taper(2.5) < 1.0);
    }

    #[test]
    fn manufactured_recovery_gates_the_probe() {
        let g = window();
        let grid = TimeGrid::for_window(2.0, 0.9, &g).unwrap();
        let planted = Complex64::new(0.3, -0.4);
        let series = manufactured_series(&grid, &g, &[(1, planted)]);
        let fit = extract_conormal_amplitude(&series, &grid, &g, (25.0, 35.0)).unwrap();
        let err = (fit.a0 - planted).norm() / planted.norm();
        assert!(err < 0.01, "manufactured recovery error {err}");
        assert!(fit.residual < 1e-6);
    }

    #[test]
    fn manufactured_two_term_model() {
        let g = window();
        let grid = TimeGrid::for_window(2.0, 0.9, &g).unwrap();
        let (c0, c1) = (Complex64::new(0.5, 0.1), Complex64::new(-2.0, 1.0));
        let series = manufactured_series(&grid, &g, &[(1, c0), (2, c1)]);
        let fit = extract_conormal_amplitude(&series, &grid, &g, (22.0, 38.0)).unwrap();
        assert!((fit.a0 - c0).norm() / c0.norm() < 0.01);
        assert!((fit.a1 - c1).norm() / c1.norm() < 0.05);
    }

    #[test]
    fn pure_constant_symbol_is_rejected_by_the_model() {
        // a lambda^0 input is orthogonal to the 1/l, 1/l^2 model: the fitted
        // lambda^{-1} coefficient picks up the projection but the residual
        // stays large relative to a genuine 1/l fit.
        let g = window();
        let grid = TimeGrid::for_window(2.0, 0.9, &g).unwrap();
        let series = manufactured_series(&grid, &g, &[(0, Complex64::new(1.0, 0.0))]);
        match extract_conormal_amplitude(&series, &grid, &g, (25.0, 35.0)) {
            Ok(fit) => assert!(fit.residual > 1e-4, "lambda^0 input fit residual {}", fit.residual),
            Err(Error::Accuracy { .. }) => {}
            Err(e) => panic!("unexpected error: {e}"),
        }
    }

    #[test]
    fn band_outside_window_is_rejected() {
        let g = window();
        let grid = TimeGrid::for_window(2.0, 0.9, &g).unwrap();
        let series = manufactured_series(&grid, &g, &[(1, Complex64::new(1.0, 0.0))]);
        assert!(extract_conormal_amplitude(&series, &grid, &g, (60.0, 80.0)).is_err());
    }

    #[test]
    fn flagship_extraction_half_flux() {
        let alpha = Flux::new(0.5).unwrap();
        let q1 = PolarPoint::new(1.0, PI / 6.0).unwrap();
        let q2 = PolarPoint::new(1.0, -PI / 6.0).unwrap();
        let g = window();
        let modes = crate::mode_sum::mode_truncation_bound(&g, 1.0, 1.0, 1e-8).unwrap();
        let b = AccuracyBudget::new(1e-11, 1e-9, 50_000_000).unwrap();
        let report = probe_diffraction(alpha, &q1, &q2, &g, &modes, (20.0, 40.0), &b).unwrap();
        // |a0| = (1/2) / cos(pi/6) = 0.5774
        assert!((report.theory.norm() - 0.5773502691896258).abs() < 1e-12);
        assert!(report.rel_mag_err < 0.10, "rel_mag_err = {}", report.rel_mag_err);
    }

    #[test]
    fn fronts_too_close_is_a_config_error() {
        // r1 = r2 = 1, dtheta small: |q1-q2| ~ 2 sin(dtheta/2) but the
        // diffractive front sits at 2; pick dtheta near pi so the chord
        // approaches 2 and the guard triggers.
        let alpha = Flux::new(0.3).unwrap();
        let g = window();
        let q1 = PolarPoint::new(1.0, 1.5).unwrap();
        let q2 = PolarPoint::new(1.0, -1.5).unwrap();
        let err = probe_diffraction(alpha, &q1, &q2, &g, &crate::mode_sum::mode_truncation_bound(&g, 1.0, 1.0, 1e-8).unwrap(), (20.0, 40.0), &AccuracyBudget::default());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn geometric_front_small_flux_reduces_to_free() {
        let alpha = Flux::new(1e-6).unwrap();
        let q1 = PolarPoint::new(1.0, 0.25).unwrap();
        let q2 = PolarPoint::new(1.0, -0.25).unwrap();
        let g = window();
        let b = AccuracyBudget::new(1e-11, 1e-9, 50_000_000).unwrap();
        let report = geometric_front_check(alpha, &q1, &q2, &g, &crate::mode_sum::mode_truncation_bound(&g, 1.0, 1.0, 1e-8).unwrap(), &b).unwrap();
        assert!(report.rel_mag_err < 1e-3, "rel_mag_err = {}", report.rel_mag_err);
        assert!(report.phase_err.abs() < 1e-3);
    }

    #[test]
    fn geometric_front_phase_for_finite_flux() {
        let alpha = Flux::new(0.3).unwrap();
        let q1 = PolarPoint::new(1.0, 0.25).unwrap();
        let q2 = PolarPoint::new(1.0, -0.25).unwrap();
        let g = window();
        let b = AccuracyBudget::new(1e-11, 1e-9, 50_000_000).unwrap();
        let report = geometric_front_check(alpha, &q1, &q2, &g, &crate::mode_sum::mode_truncation_bound(&g, 1.0, 1.0, 1e-8).unwrap(), &b).unwrap();
        assert!(report.rel_mag_err < 0.05, "rel_mag_err = {}", report.rel_mag_err);
        assert!(report.phase_err.abs() < 0.05, "phase_err = {}", report.phase_err);
    }
}
