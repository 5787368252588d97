//! Frequency-windowed sine-propagator kernel of the flux Hamiltonian,
//! evaluated as an angular mode sum of windowed Bessel integrals.
//!
//! With flux `alpha` in (0,1) and polar points `q1 = (r1, th1)`,
//! `q2 = (r2, th2)`, the kernel sample is
//!
//! ```text
//! E_g(t; q1, q2) = sum_k exp(i k dtheta) I_k(t),
//! I_k(t) = int_0^inf g(lambda) sin(t lambda)
//!          J_nu(lambda r1) J_nu(lambda r2) dlambda,   nu = |k + alpha|,
//! ```
//!
//! normalized so that in the zero-flux limit the sum collapses (by Graf's
//! addition theorem) to the windowed free kernel
//! `int_0^inf g(lambda) sin(t lambda) J_0(lambda |q1-q2|) dlambda`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quad::composite_gl;
use crate::special_fn::{bessel_j, ln_gamma, BesselOrder};
use crate::{AccuracyBudget, Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Reduce an angle to the interval `(-pi, pi]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Magnetic flux parameter, restricted to the open unit interval; integer
/// fluxes are gauge-equivalent to the free operator and carry no diffraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flux(f64);

impl Flux {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
            Ok(Flux(alpha))
        } else {
            Err(Error::Config(format!("flux must lie strictly in (0, 1), got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A point of the punctured plane in polar coordinates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 && theta.is_finite() {
            Ok(PolarPoint { r, theta })
        } else {
            Err(Error::Config(format!("polar point needs finite r > 0, got r = {r}")))
        }
    }

    /// Euclidean distance to another point.
    pub fn dist(&self, other: &PolarPoint) -> f64 {
        (self.r * self.r + other.r * other.r
            - 2.0 * self.r * other.r * (self.theta - other.theta).cos())
        .max(0.0)
        .sqrt()
    }
}

/// A kernel evaluation request: time and the two spatial arguments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpacetimeQuery {
    pub t: f64,
    pub q1: PolarPoint,
    pub q2: PolarPoint,
}

impl SpacetimeQuery {
    pub fn new(t: f64, q1: PolarPoint, q2: PolarPoint) -> Result<Self> {
        if t.is_finite() && t > 0.0 {
            Ok(SpacetimeQuery { t, q1, q2 })
        } else {
            Err(Error::Config(format!("query time must be finite and > 0, got {t}")))
        }
    }

    /// Angular difference `theta1 - theta2`, reduced to `(-pi, pi]`.
    pub fn dtheta(&self) -> f64 {
        reduce_angle(self.q1.theta - self.q2.theta)
    }
}

/// Spectral window profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowShape {
    Gaussian,
    SmoothBump,
}

/// Frequency window `g(lambda)` concentrating the kernel on a band around
/// `lambda_center`. The window vanishes identically for `lambda <= 0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrequencyWindow {
    pub shape: WindowShape,
    pub lambda_center: f64,
    pub lambda_halfwidth: f64,
}

impl FrequencyWindow {
    pub fn new(shape: WindowShape, lambda_center: f64, lambda_halfwidth: f64) -> Result<Self> {
        if !(lambda_center > 0.0) || !(lambda_halfwidth > 0.0) || !lambda_center.is_finite() {
            return Err(Error::Config(format!(
                "window needs positive center and halfwidth, got ({lambda_center}, {lambda_halfwidth})"
            )));
        }
        Ok(FrequencyWindow {
            shape,
            lambda_center,
            lambda_halfwidth,
        })
    }

    /// Window value at `lambda` (zero for `lambda <= 0`).
    pub fn eval(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        let u = (lambda - self.lambda_center) / self.lambda_halfwidth;
        match self.shape {
            WindowShape::Gaussian => (-0.5 * u * u).exp(),
            WindowShape::SmoothBump => {
                if u.abs() < 0.999 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// Numerical support `[lo, hi]`: where the window exceeds ~1e-16 of its
    /// peak, clipped to positive frequencies.
    pub fn support(&self) -> (f64, f64) {
        let spread = match self.shape {
            WindowShape::Gaussian => 8.5 * self.lambda_halfwidth,
            WindowShape::SmoothBump => self.lambda_halfwidth,
        };
        let lo = (self.lambda_center - spread).max(1e-12);
        (lo, self.lambda_center + spread)
    }

    /// Effective frequency spread, used for time-domain width heuristics
    /// (time profile decays on the scale `1 / sigma_eff`).
    pub fn sigma_eff(&self) -> f64 {
        match self.shape {
            WindowShape::Gaussian => self.lambda_halfwidth,
            WindowShape::SmoothBump => self.lambda_halfwidth / 3.0,
        }
    }

    /// Total window mass `int_0^inf g`.
    pub fn mass(&self) -> f64 {
        match self.shape {
            WindowShape::Gaussian => (2.0 * PI).sqrt() * self.lambda_halfwidth,
            // int exp(1 - 1/(1-u^2)) du over (-1,1) = 0.88798920...
            WindowShape::SmoothBump => 0.8879892044511652 * self.lambda_halfwidth,
        }
    }
}

/// Angular-mode truncation: the sum runs over `|k| <= k_max`, with the
/// omitted tail certified below `tail_tol`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModeSpec {
    pub k_max: usize,
    pub tail_tol: f64,
}

/// One kernel sample with its accuracy diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelSample {
    pub t: f64,
    pub value: Complex64,
    /// Certified bound on the dropped angular tail `|k| > k_max`.
    pub est_mode_tail: f64,
    /// Estimated quadrature error of the frequency integrals.
    pub est_quad_err: f64,
}

/// Order of the angular mode `k` at flux `alpha`: `nu = |k + alpha|`.
pub fn mode_order(k: i64, alpha: Flux) -> BesselOrder {
    BesselOrder::new((k as f64 + alpha.value()).abs()).expect("order is non-negative")
}

/// Envelope bound `log` of `|I_k|` for order `nu`:
/// `mass * (x1/2)^nu / nu! * (x2/2)^nu / nu!` with `x_i = lambda_hi r_i`.
fn ln_mode_envelope(nu: f64, lam_hi: f64, r1: f64, r2: f64, mass: f64) -> f64 {
    nu * ((0.5 * lam_hi * r1).ln() + (0.5 * lam_hi * r2).ln()) - 2.0 * ln_gamma(nu + 1.0) + mass.ln()
}

/// Smallest `k_max` whose certified angular tail bound is below `tail_tol`.
///
/// Uses `|J_nu(x)| <= (x/2)^nu / Gamma(nu+1)` on the window support; the
/// resulting tail is summed explicitly until it is negligible.
pub fn mode_truncation_bound(
    g: &FrequencyWindow,
    r1: f64,
    r2: f64,
    tail_tol: f64,
) -> Result<ModeSpec> {
    if !(r1 > 0.0 && r2 > 0.0 && tail_tol > 0.0) {
        return Err(Error::Config("mode_truncation_bound needs positive radii and tolerance".into()));
    }
    let (_, hi) = g.support();
    let mass = g.mass();
    // Find the first order beyond which the envelope is decreasing and the
    // remaining tail (both signs of k, worst-case order |k| - 1) is small.
    for k_max in 1..100_000usize {
        let tail = mode_tail_bound(k_max, hi, r1, r2, mass);
        if tail <= tail_tol {
            return Ok(ModeSpec { k_max, tail_tol });
        }
    }
    Err(Error::Accuracy {
        context: "mode_truncation_bound".into(),
        achieved: f64::INFINITY,
        requested: tail_tol,
    })
}

/// Certified bound on `sum_{|k| > k_max} |I_k|` via the product envelope.
fn mode_tail_bound(k_max: usize, lam_hi: f64, r1: f64, r2: f64, mass: f64) -> f64 {
    // Orders |k + alpha| for |k| > k_max are at least k_max (any alpha in
    // (0,1) and either sign of k), and increase by 1 per step outward.
    let mut tail = 0.0f64;
    let mut nu = k_max as f64;
    loop {
        let ln_b = ln_mode_envelope(nu, lam_hi, r1, r2, mass);
        let b = if ln_b < -745.0 { 0.0 } else { ln_b.exp() };
        let add = 2.0 * b; // both signs of k
        tail += add;
        // Envelope terms decay super-geometrically once nu > e * x / 2;
        // stop when additions no longer matter.
        if add < 1e-3 * tail.max(1e-300) || add == 0.0 {
            break;
        }
        nu += 1.0;
        if nu > k_max as f64 + 400.0 {
            tail = f64::INFINITY;
            break;
        }
    }
    tail
}

/// Shared frequency-quadrature nodes for the windowed Bessel integrals of a
/// given geometry. Node placement depends only on `(window, r1, r2, t_max,
/// budget)` — never on the mode order — so per-mode integrals built from one
/// table can be compared, shifted, and relabeled exactly.
#[derive(Debug, Clone)]
pub struct ModeIntegralTable {
    pub r1: f64,
    pub r2: f64,
    nodes: Vec<f64>,
    /// Window-times-weight at each node.
    gw: Vec<f64>,
    /// Start index of the embedded coarse sub-rule (the first `coarse_len`
    /// entries of `nodes_c`, built with half the panel count).
    nodes_c: Vec<f64>,
    gw_c: Vec<f64>,
}

impl ModeIntegralTable {
    /// Build nodes resolving oscillation rates up to `t_max + r1 + r2`
    /// across the window support.
    pub fn new(
        r1: f64,
        r2: f64,
        t_max: f64,
        g: &FrequencyWindow,
        budget: &AccuracyBudget,
    ) -> Result<Self> {
        if !(r1 > 0.0 && r2 > 0.0 && t_max > 0.0) {
            return Err(Error::Config("mode integral table needs positive radii and time".into()));
        }
        let (lo, hi) = g.support();
        let rate = t_max + r1 + r2 + 1.0;
        let cycles = (hi - lo) * rate / (2.0 * PI);
        let order = 12usize;
        let panels = ((1.4 * cycles).ceil() as usize).max(8);
        if panels * order > budget.max_evals {
            return Err(Error::Accuracy {
                context: "mode integral nodes".into(),
                achieved: (panels * order) as f64,
                requested: budget.max_evals as f64,
            });
        }
        let (nodes, weights) = composite_gl(lo, hi, panels, order);
        let gw: Vec<f64> = nodes.iter().zip(&weights).map(|(x, w)| g.eval(*x) * w).collect();
        let (nodes_c, weights_c) = composite_gl(lo, hi, (panels / 2).max(4), order);
        let gw_c: Vec<f64> = nodes_c.iter().zip(&weights_c).map(|(x, w)| g.eval(*x) * w).collect();
        Ok(ModeIntegralTable {
            r1,
            r2,
            nodes,
            gw,
            nodes_c,
            gw_c,
        })
    }

    /// Per-mode coefficient array `g(l_i) w_i J_nu(l_i r1) J_nu(l_i r2)`
    /// on the fine rule.
    pub fn mode_coefficients(&self, nu: BesselOrder, budget: &AccuracyBudget) -> Result<Vec<f64>> {
        self.nodes
            .iter()
            .zip(&self.gw)
            .map(|(l, gw)| {
                Ok(gw * bessel_j(nu, l * self.r1, budget)? * bessel_j(nu, l * self.r2, budget)?)
            })
            .collect()
    }

    fn mode_coefficients_coarse(&self, nu: BesselOrder, budget: &AccuracyBudget) -> Result<Vec<f64>> {
        self.nodes_c
            .iter()
            .zip(&self.gw_c)
            .map(|(l, gw)| {
                Ok(gw * bessel_j(nu, l * self.r1, budget)? * bessel_j(nu, l * self.r2, budget)?)
            })
            .collect()
    }

    /// The windowed integral `I(nu, t)` on the fine rule, together with a
    /// coarse-rule comparison as quadrature-error estimate.
    pub fn integral(&self, nu: BesselOrder, t: f64, budget: &AccuracyBudget) -> Result<(f64, f64)> {
        let fine = self.mode_coefficients(nu, budget)?;
        let coarse = self.mode_coefficients_coarse(nu, budget)?;
        let vf: f64 = self.nodes.iter().zip(&fine).map(|(l, c)| c * (t * l).sin()).sum();
        let vc: f64 = self.nodes_c.iter().zip(&coarse).map(|(l, c)| c * (t * l).sin()).sum();
        Ok((vf, (vf - vc).abs()))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Single windowed radial-mode integral
/// `I = int_0^inf g(l) sin(t l) J_nu(l r1) J_nu(l r2) dl`.
pub fn per_mode_windowed_integral(
    nu: BesselOrder,
    r1: f64,
    r2: f64,
    t: f64,
    g: &FrequencyWindow,
    budget: &AccuracyBudget,
) -> Result<f64> {
    let table = ModeIntegralTable::new(r1, r2, t, g, budget)?;
    let (v, e) = table.integral(nu, t, budget)?;
    budget.certify("per_mode_windowed_integral", v, e)?;
    Ok(v)
}

/// Precomputed evaluator for kernel samples of a fixed geometry
/// `(alpha, r1, r2, window)` at times up to `t_max`.
///
/// Construction performs all Bessel evaluations (parallelized over modes);
/// each sample afterwards costs one pass of sines and dot products, so long
/// time series are cheap.
pub struct KernelEvaluator {
    alpha: Flux,
    k_max: i64,
    tail_bound: f64,
    table: ModeIntegralTable,
    /// Coefficient arrays for k = -k_max ..= k_max (fine rule).
    coeffs: Vec<Vec<f64>>,
    coeffs_coarse: Vec<Vec<f64>>,
}

impl KernelEvaluator {
    pub fn new(
        alpha: Flux,
        r1: f64,
        r2: f64,
        t_max: f64,
        g: &FrequencyWindow,
        modes: &ModeSpec,
        budget: &AccuracyBudget,
    ) -> Result<Self> {
        let table = ModeIntegralTable::new(r1, r2, t_max, g, budget)?;
        let k_max = modes.k_max as i64;
        let (_, hi) = g.support();
        let tail_bound = mode_tail_bound(modes.k_max, hi, r1, r2, g.mass());
        if tail_bound > modes.tail_tol {
            return Err(Error::Accuracy {
                context: "angular mode tail".into(),
                achieved: tail_bound,
                requested: modes.tail_tol,
            });
        }
        let ks: Vec<i64> = (-k_max..=k_max).collect();
        let coeffs: Vec<Vec<f64>> = ks
            .par_iter()
            .map(|&k| table.mode_coefficients(mode_order(k, alpha), budget))
            .collect::<Result<_>>()?;
        let coeffs_coarse: Vec<Vec<f64>> = ks
            .par_iter()
            .map(|&k| table.mode_coefficients_coarse(mode_order(k, alpha), budget))
            .collect::<Result<_>>()?;
        Ok(KernelEvaluator {
            alpha,
            k_max,
            tail_bound,
            table,
            coeffs,
            coeffs_coarse,
        })
    }

    pub fn alpha(&self) -> Flux {
        self.alpha
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    /// Kernel sample at time `t` and angular difference `dtheta`.
    pub fn eval(&self, t: f64, dtheta: f64) -> KernelSample {
        let sins: Vec<f64> = self.table.nodes.iter().map(|l| (t * l).sin()).collect();
        let sins_c: Vec<f64> = self.table.nodes_c.iter().map(|l| (t * l).sin()).collect();
        let mut value = Complex64::new(0.0, 0.0);
        let mut value_c = Complex64::new(0.0, 0.0);
        for (i, k) in (-self.k_max..=self.k_max).enumerate() {
            let phase = Complex64::from_polar(1.0, k as f64 * dtheta);
            let int_f: f64 = self.coeffs[i].iter().zip(&sins).map(|(c, s)| c * s).sum();
            let int_c: f64 = self.coeffs_coarse[i].iter().zip(&sins_c).map(|(c, s)| c * s).sum();
            value += phase * int_f;
            value_c += phase * int_c;
        }
        KernelSample {
            t,
            value,
            est_mode_tail: self.tail_bound,
            est_quad_err: (value - value_c).norm(),
        }
    }

    /// Fine-rule per-mode integrals `I_k(t)` for `k = -k_max ..= k_max`.
    pub fn per_mode(&self, t: f64) -> Vec<f64> {
        let sins: Vec<f64> = self.table.nodes.iter().map(|l| (t * l).sin()).collect();
        self.coeffs
            .iter()
            .map(|c| c.iter().zip(&sins).map(|(c, s)| c * s).sum())
            .collect()
    }
}

/// One-shot kernel sample (see [`KernelEvaluator`] for series evaluation).
pub fn windowed_kernel(
    query: &SpacetimeQuery,
    alpha: Flux,
    g: &FrequencyWindow,
    modes: &ModeSpec,
    budget: &AccuracyBudget,
) -> Result<KernelSample> {
    let ev = KernelEvaluator::new(alpha, query.q1.r, query.q2.r, query.t, g, modes, budget)?;
    let s = ev.eval(query.t, query.dtheta());
    budget.certify("windowed_kernel quadrature", s.value.norm(), s.est_quad_err)?;
    Ok(s)
}

/// Closed-form free sine kernel `1 / (2 pi sqrt(t^2 - rho^2))` for `t > rho`
/// (zero before arrival, singular on the light cone).
pub fn free_kernel_closed(t: f64, rho: f64) -> Result<f64> {
    if !(t > 0.0 && rho > 0.0) {
        return Err(Error::Config(format!("free kernel needs t, rho > 0, got ({t}, {rho})")));
    }
    if t == rho {
        return Err(Error::Domain("free kernel is singular on the cone t = rho".into()));
    }
    if t < rho {
        return Ok(0.0);
    }
    Ok(1.0 / (2.0 * PI * (t * t - rho * rho).sqrt()))
}

/// Windowed free kernel
/// `int_0^inf g(l) sin(t l) J_0(l rho) dl`
/// — the zero-flux limit of the mode sum, by direct quadrature.
pub fn windowed_free_kernel(
    t: f64,
    rho: f64,
    g: &FrequencyWindow,
    budget: &AccuracyBudget,
) -> Result<f64> {
    let table = ModeIntegralTable::new(0.5 * rho, 0.5 * rho, t, g, budget)?;
    // J_0(l rho) realized as nu = 0 with r1 = r2 = rho/2 would be wrong
    // (product of two J_0's); integrate directly on the same node set.
    let nu0 = BesselOrder::new(0.0)?;
    let mut v = 0.0;
    let mut evals = 0usize;
    for (l, gw) in table.nodes.iter().zip(&table.gw) {
        v += gw * (t * l).sin() * bessel_j(nu0, l * rho, budget)?;
        evals += 1;
    }
    let mut vc = 0.0;
    for (l, gw) in table.nodes_c.iter().zip(&table.gw_c) {
        vc += gw * (t * l).sin() * bessel_j(nu0, l * rho, budget)?;
        evals += 1;
    }
    let _ = evals;
    budget.certify("windowed_free_kernel", v, (v - vc).abs())?;
    Ok(v)
}

/// Abel-regularized diffraction series
/// `-i sum_{|k| <= k_max} exp(-i pi |k + alpha|) exp(i k dtheta) eps^{|k|}`,
/// summed term by term with recurrence updates.
pub fn abel_diffraction_series(
    alpha: Flux,
    dtheta: f64,
    eps: f64,
    k_max: usize,
) -> Result<Complex64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Config(format!("Abel parameter must lie in (0,1), got {eps}")));
    }
    let a = alpha.value();
    // k >= 0: terms e^{-i pi (k + a)} e^{i k dt} eps^k = e^{-i pi a} w^k,
    // w = -eps e^{i dt}; k < 0 (k = -m): e^{-i pi (m - a)} e^{-i m dt} eps^m
    // = e^{i pi a} v^m, v = -eps e^{-i dt}.
    let w = -eps * Complex64::from_polar(1.0, dtheta);
    let v = -eps * Complex64::from_polar(1.0, -dtheta);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut wp = Complex64::new(1.0, 0.0);
    let mut vp = v;
    sum += wp; // k = 0 term (relative to the e^{-i pi a} factor)
    let mut sum_neg = Complex64::new(0.0, 0.0);
    for _ in 1..=k_max {
        wp *= w;
        sum += wp;
        sum_neg += vp;
        vp *= v;
    }
    let total = Complex64::from_polar(1.0, -PI * a) * sum + Complex64::from_polar(1.0, PI * a) * sum_neg;
    Ok(Complex64::new(0.0, -1.0) * total)
}

/// Closed form of the Abel limit of the diffraction series:
/// `-sin(pi alpha) e^{-i dtheta/2} / cos(dtheta/2)`, defined away from the
/// excluded directions `|dtheta| = pi`.
pub fn diffraction_series_closed(alpha: Flux, dtheta: f64) -> Result<Complex64> {
    let dt = reduce_angle(dtheta);
    let c = (0.5 * dt).cos();
    if c.abs() < 1e-12 {
        return Err(Error::Domain(
            "diffraction series diverges on the excluded directions |dtheta| = pi".into(),
        ));
    }
    Ok(-(PI * alpha.value()).sin() / c * Complex64::from_polar(1.0, -0.5 * dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn window() -> FrequencyWindow {
        FrequencyWindow::new(WindowShape::Gaussian, 20.0, 3.0).unwrap()
    }

    fn budget() -> AccuracyBudget {
        AccuracyBudget::new(1e-10, 1e-9, 2_000_000).unwrap()
    }

    #[test]
    fn flux_validation() {
        assert!(Flux::new(0.5).is_ok());
        assert!(Flux::new(0.0).is_err());
        assert!(Flux::new(1.0).is_err());
        assert!(Flux::new(-0.2).is_err());
    }

    #[test]
    fn angle_reduction() {
        assert_relative_eq!(reduce_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_relative_eq!(reduce_angle(-PI), PI, epsilon = 1e-12);
        assert_relative_eq!(reduce_angle(0.3 - 2.0 * PI), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn mode_order_examples() {
        let a = Flux::new(0.3).unwrap();
        assert_relative_eq!(mode_order(0, a).value(), 0.3);
        assert_relative_eq!(mode_order(-1, a).value(), 0.7);
        assert_relative_eq!(mode_order(2, a).value(), 2.3);
        assert_relative_eq!(mode_order(-3, a).value(), 2.7);
    }

    #[test]
    fn truncation_bound_examples() {
        // Narrow band near lambda ~ 1 on unit radii: a handful of modes.
        let g = FrequencyWindow::new(WindowShape::SmoothBump, 0.6, 0.4).unwrap();
        let spec = mode_truncation_bound(&g, 1.0, 1.0, 1e-12).unwrap();
        assert!(spec.k_max <= 12, "k_max = {}", spec.k_max);
        // lambda_hi * max radius ~ 10: a few tens of modes.
        let g = FrequencyWindow::new(WindowShape::SmoothBump, 6.0, 4.0).unwrap();
        let spec = mode_truncation_bound(&g, 1.0, 1.0, 1e-10).unwrap();
        assert!(
            (15..=45).contains(&spec.k_max),
            "k_max = {}",
            spec.k_max
        );
    }

    #[test]
    fn zero_flux_limit_reduces_to_free_kernel() {
        // At alpha -> 0 the mode sum must collapse to the windowed free
        // kernel via the addition theorem, for any angle.
        let alpha = Flux::new(1e-7).unwrap();
        let g = window();
        let b = budget();
        let q1 = PolarPoint::new(1.0, 0.4).unwrap();
        let q2 = PolarPoint::new(1.3, -0.3).unwrap();
        let rho = q1.dist(&q2);
        let spec = mode_truncation_bound(&g, 1.0, 1.3, 1e-12).unwrap();
        for t in [0.8, 1.4, 2.0] {
            let q = SpacetimeQuery::new(t, q1, q2).unwrap();
            let sample = windowed_kernel(&q, alpha, &g, &spec, &b).unwrap();
            let free = windowed_free_kernel(t, rho, &g, &b).unwrap();
            assert!(
                (sample.value.re - free).abs() < 1e-4 * free.abs().max(1e-6),
                "t = {t}: {} vs {free}",
                sample.value.re
            );
            assert!(sample.value.im.abs() < 1e-6);
        }
    }

    #[test]
    fn kernel_is_hermitian_under_argument_swap() {
        let alpha = Flux::new(0.37).unwrap();
        let g = window();
        let b = budget();
        let q1 = PolarPoint::new(0.9, 0.7).unwrap();
        let q2 = PolarPoint::new(1.2, -0.4).unwrap();
        let spec = mode_truncation_bound(&g, 0.9, 1.2, 1e-12).unwrap();
        let fwd = windowed_kernel(&SpacetimeQuery::new(1.7, q1, q2).unwrap(), alpha, &g, &spec, &b)
            .unwrap();
        let bwd = windowed_kernel(&SpacetimeQuery::new(1.7, q2, q1).unwrap(), alpha, &g, &spec, &b)
            .unwrap();
        assert!((fwd.value - bwd.value.conj()).norm() < 1e-12);
    }

    #[test]
    fn free_kernel_closed_values() {
        assert_relative_eq!(
            free_kernel_closed(2.0, 1.0).unwrap(),
            1.0 / (2.0 * PI * 3.0f64.sqrt()),
            max_relative = 1e-15
        );
        assert_eq!(free_kernel_closed(0.5, 1.0).unwrap(), 0.0);
        assert!(free_kernel_closed(1.0, 1.0).is_err());
    }

    #[test]
    fn abel_series_approaches_closed_form() {
        let alpha = Flux::new(0.3).unwrap();
        for dt in [0.0, 0.7, -1.9, 2.0 * PI / 3.0] {
            // The single-epsilon Abel sum carries an O(1-eps) error of size
            // cos(pi alpha)(1-eps) / (2 cos^2(dt/2)); a two-point Richardson
            // step in eps removes the linear term.
            let s1 = abel_diffraction_series(alpha, dt, 1.0 - 1e-4, 1_000_000).unwrap();
            let s2 = abel_diffraction_series(alpha, dt, 1.0 - 5e-5, 1_000_000).unwrap();
            let extrap = 2.0 * s2 - s1;
            let closed = diffraction_series_closed(alpha, dt).unwrap();
            assert!(
                (extrap - closed).norm() < 1e-5,
                "dtheta = {dt}: {extrap} vs {closed}"
            );
            // The raw single-epsilon sum itself lands within its analytic
            // error envelope.
            let envelope = (PI * 0.3f64).cos().abs() * 1e-4 / (2.0 * (0.5 * dt).cos().powi(2)) + 1e-5;
            assert!((s1 - closed).norm() < 2.0 * envelope);
        }
    }

    #[test]
    fn closed_form_rejects_excluded_direction() {
        let alpha = Flux::new(0.3).unwrap();
        assert!(diffraction_series_closed(alpha, PI).is_err());
    }

    #[test]
    fn windowed_kernel_reports_diagnostics() {
        let alpha = Flux::new(0.5).unwrap();
        let g = window();
        let b = budget();
        let q = SpacetimeQuery::new(
            1.5,
            PolarPoint::new(1.0, 0.5).unwrap(),
            PolarPoint::new(1.0, -0.5).unwrap(),
        )
        .unwrap();
        let spec = mode_truncation_bound(&g, 1.0, 1.0, 1e-11).unwrap();
        let s = windowed_kernel(&q, alpha, &g, &spec, &b).unwrap();
        assert!(s.est_mode_tail <= 1e-11);
        assert!(s.est_quad_err < 1e-9);
        assert!(s.value.norm() > 1e-6); // mid-cone, should be visibly nonzero
    }
}
