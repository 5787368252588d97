//! Constructive diffraction objects: the normalized moving-solenoid
//! geometry with its U(1) phase, the one-dimensional `l_{-1}` / `l_0`
//! kernels in both exact-Bessel and conormal-symbol representations, the
//! differentiated propagator `Upsilon_0` (closed principal amplitude and
//! numeric Duhamel composition), and the closed-form diffraction
//! coefficient at the front `t = r1 + r2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::mode_sum::{reduce_angle, Flux, FrequencyWindow, PolarPoint};
use crate::quad::gauss_legendre;
use crate::special_fn::{bessel_j, gamma_real, BesselOrder, SymbolSeries};
use crate::{AccuracyBudget, Error, Result};

const PI: f64 = std::f64::consts::PI;

/// Width of the warning band around the excluded directions `|dtheta| = pi`.
pub const EXCLUDED_GUARD_BAND: f64 = 0.2;

/// A rotated configuration with both angles in `(-pi/2, pi/2)`, so the
/// solenoid translation ray `(-inf, 0]` never meets the segment `q1 q2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormalizedConfiguration {
    /// Rotation applied to both input angles.
    pub rotation: f64,
    pub q1: PolarPoint,
    pub q2: PolarPoint,
    /// Set when `|dtheta|` falls inside the guard band around `pi`; results
    /// near the excluded directions are delivered but flagged.
    pub near_excluded_warning: bool,
}

/// Rotate the configuration so the angle pair becomes `(+dtheta/2, -dtheta/2)`,
/// placing both angles strictly inside `(-pi/2, pi/2)`.
///
/// `|dtheta| = pi` (the excluded direction set) is a hard error; within
/// [`EXCLUDED_GUARD_BAND`] of it a warning flag is set instead.
pub fn normalize_configuration(q1: &PolarPoint, q2: &PolarPoint) -> Result<NormalizedConfiguration> {
    let dtheta = reduce_angle(q1.theta - q2.theta);
    if (dtheta.abs() - PI).abs() < 1e-8 {
        return Err(Error::Domain(
            "|dtheta| = pi lies on the excluded direction set; the diffraction coefficient is undefined there"
                .into(),
        ));
    }
    let t1 = 0.5 * dtheta;
    Ok(NormalizedConfiguration {
        rotation: reduce_angle(t1 - q1.theta),
        q1: PolarPoint { r: q1.r, theta: t1 },
        q2: PolarPoint { r: q2.r, theta: -t1 },
        near_excluded_warning: dtheta.abs() > PI - EXCLUDED_GUARD_BAND,
    })
}

/// Geometry of a configuration translated by `s` along the positive x-axis
/// (equivalently, the solenoid moved to `-s`).
#[derive(Debug, Clone, Copy)]
pub struct TranslationState {
    pub s: f64,
    pub q1s: PolarPoint,
    pub q2s: PolarPoint,
    /// Accumulated angular difference `(th1(s) - th1(0)) - (th2(s) - th2(0))`.
    pub dtheta_total: f64,
}

impl TranslationState {
    /// The U(1) phase `e^{i alpha dtheta_total}` picked up by the twisted
    /// translation at flux `alpha`.
    pub fn phase(&self, alpha: Flux) -> Complex64 {
        Complex64::from_polar(1.0, alpha.value() * self.dtheta_total)
    }
}

/// Translate a normalized configuration by `s >= 0`.
pub fn translate(q1: &PolarPoint, q2: &PolarPoint, s: f64) -> Result<TranslationState> {
    if !(s >= 0.0) {
        return Err(Error::Config(format!("translation parameter must be >= 0, got {s}")));
    }
    let moved = |q: &PolarPoint| -> (PolarPoint, f64) {
        let (x, y) = (q.r * q.theta.cos(), q.r * q.theta.sin());
        let r = ((x + s) * (x + s) + y * y).sqrt();
        let th = y.atan2(x + s);
        (PolarPoint { r, theta: th }, th - q.theta)
    };
    let (q1s, d1) = moved(q1);
    let (q2s, d2) = moved(q2);
    Ok(TranslationState {
        s,
        q1s,
        q2s,
        dtheta_total: d1 - d2,
    })
}

/// Representation choice for the one-dimensional kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LKernelRepresentation {
    /// Oscillatory integral with the truncated `P_N/Q_N` symbol factors.
    ConormalSymbol,
    /// Windowed form of the exact Bessel integral (the pre-asymptotic
    /// expression); used as the oracle and inside the Duhamel composition.
    ExactBesselLimit,
}

/// Parameters for one `l_j` kernel evaluation.
#[derive(Debug, Clone, Copy)]
pub struct LKernelSpec {
    /// Mode index: 0 or -1.
    pub j: i64,
    /// Symbol truncation depth for the conormal representation.
    pub n: usize,
    pub representation: LKernelRepresentation,
}

/// Value of an `l_j` kernel, with the angular factor kept as metadata:
/// the full kernel is `value * e^{i * angular_exponent * theta}`.
#[derive(Debug, Clone, Copy)]
pub struct LKernelValue {
    pub value: Complex64,
    pub angular_exponent: i64,
}

/// Normalization constant and Bessel order of the radial factor of `l_j`.
fn l_kernel_params(j: i64, alpha: Flux) -> Result<(f64, f64, f64)> {
    let a = alpha.value();
    match j {
        // (c_j, nu_j, lambda exponent in the exact form)
        -1 => Ok((1.0 / (2f64.powf(1.0 - a) * gamma_real(2.0 - a)?), 1.0 - a, 1.0 - a)),
        0 => Ok((1.0 / (2f64.powf(a) * gamma_real(1.0 + a)?), a, a)),
        _ => Err(Error::Config(format!("l kernels exist for j in {{0, -1}}, got {j}"))),
    }
}

/// Shared frequency nodes for the one-dimensional kernels.
fn lambda_nodes(g: &FrequencyWindow, rate: f64, budget: &AccuracyBudget) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = g.support();
    let cycles = (hi - lo) * (rate + 1.0) / (2.0 * PI);
    let panels = ((1.4 * cycles).ceil() as usize).max(8);
    let order = 12usize;
    if panels * order > budget.max_evals {
        return Err(Error::Accuracy {
            context: "l_kernel nodes".into(),
            achieved: (panels * order) as f64,
            requested: budget.max_evals as f64,
        });
    }
    Ok(crate::quad::composite_gl(lo, hi, panels, order))
}

/// One-dimensional kernel `l_j(t, r)`.
///
/// Exact representation:
/// `c_j int_0^inf g(l) sin(l t) l^{nu_j} J_{nu_j}(l r) dl` (real valued).
/// Conormal representation: the same quantity with the Bessel factor
/// replaced by its truncated large-argument form, folded to a real value:
/// `2 Re[ C_j e^{i phi_j} int g(l) l^{nu_j - 1/2} (P_N - i Q_N)(l r)
/// e^{i l (t - r)} dl ]` with
/// `C_j = c_j / (i sqrt(8 pi r))`, `phi_j = nu_j pi/2 + pi/4`.
pub fn l_kernel(
    spec: &LKernelSpec,
    t: f64,
    r: f64,
    alpha: Flux,
    g: &FrequencyWindow,
    budget: &AccuracyBudget,
) -> Result<LKernelValue> {
    if !(t > 0.0 && r > 0.0) {
        return Err(Error::Config(format!("l_kernel needs t, r > 0, got ({t}, {r})")));
    }
    let (c_j, nu, lam_pow) = l_kernel_params(spec.j, alpha)?;
    let angular_exponent = if spec.j == -1 { 1 } else { 0 };
    let (nodes, weights) = lambda_nodes(g, t + r, budget)?;
    let value = match spec.representation {
        LKernelRepresentation::ExactBesselLimit => {
            let order = BesselOrder::new(nu)?;
            let mut v = 0.0;
            for (l, w) in nodes.iter().zip(&weights) {
                v += w * g.eval(*l) * (t * l).sin() * l.powf(lam_pow) * bessel_j(order, l * r, budget)?;
            }
            Complex64::new(c_j * v, 0.0)
        }
        LKernelRepresentation::ConormalSymbol => {
            let series = SymbolSeries::new(BesselOrder::new(nu)?, spec.n);
            let phi = Complex64::from_polar(1.0, nu * 0.5 * PI + 0.25 * PI);
            let big_c = c_j / (Complex64::i() * (8.0 * PI * r).sqrt());
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, w) in nodes.iter().zip(&weights) {
                let x = l * r;
                let symbol = Complex64::new(series.p(x), -series.q(x));
                acc += w * g.eval(*l) * l.powf(lam_pow - 0.5) * symbol
                    * Complex64::from_polar(1.0, l * (t - r));
            }
            let folded = big_c * phi * acc;
            Complex64::new(2.0 * folded.re, 0.0)
        }
    };
    Ok(LKernelValue {
        value,
        angular_exponent,
    })
}

/// Principal stationary-phase amplitude of `Upsilon_0`:
/// `(sin(pi alpha) / (4 pi sqrt(r1 r2))) (e^{-i th1} + e^{i th2})`
/// multiplying the `lambda^0` symbol at the front `t = r1 + r2`.
pub fn upsilon0_principal(q1: &PolarPoint, q2: &PolarPoint, alpha: Flux) -> Complex64 {
    let s = (PI * alpha.value()).sin();
    let num = Complex64::from_polar(1.0, -q1.theta) + Complex64::from_polar(1.0, q2.theta);
    s / (4.0 * PI * (q1.r * q2.r).sqrt()) * num
}

/// Precomputed Duhamel evaluator for `Upsilon_0(t)` at fixed geometry.
///
/// `Upsilon_0(t) = 4 pi a (1-a) int_0^t [ l_-1(t-s, r1) e^{-i th1} l_0(s, r2)
/// + l_0(t-s, r1) l_-1(s, r2) e^{i th2} ] ds`
/// with each factor the exact-Bessel windowed kernel (so the result carries
/// one window factor per propagator, i.e. an overall `g^2`).
pub struct Upsilon0Evaluator {
    alpha: Flux,
    th1: f64,
    th2: f64,
    r2: f64,
    nodes: Vec<f64>,
    /// Coefficient tables for f_{-1}(., r1), f_0(., r1), f_{-1}(., r2), f_0(., r2).
    cm1_r1: Vec<f64>,
    c0_r1: Vec<f64>,
    cm1_r2: Vec<f64>,
    c0_r2: Vec<f64>,
    lambda_hi: f64,
    sigma: f64,
}

impl Upsilon0Evaluator {
    pub fn new(
        q1: &PolarPoint,
        q2: &PolarPoint,
        alpha: Flux,
        g: &FrequencyWindow,
        t_max: f64,
        budget: &AccuracyBudget,
    ) -> Result<Self> {
        let (nodes, weights) = lambda_nodes(g, t_max + q1.r + q2.r, budget)?;
        let table = |j: i64, r: f64| -> Result<Vec<f64>> {
            let (c_j, nu, lam_pow) = l_kernel_params(j, alpha)?;
            let order = BesselOrder::new(nu)?;
            nodes
                .iter()
                .zip(&weights)
                .map(|(l, w)| Ok(c_j * w * g.eval(*l) * l.powf(lam_pow) * bessel_j(order, l * r, budget)?))
                .collect()
        };
        Ok(Upsilon0Evaluator {
            alpha,
            th1: q1.theta,
            th2: q2.theta,
            r2: q2.r,
            cm1_r1: table(-1, q1.r)?,
            c0_r1: table(0, q1.r)?,
            cm1_r2: table(-1, q2.r)?,
            c0_r2: table(0, q2.r)?,
            nodes,
            lambda_hi: g.support().1,
            sigma: g.sigma_eff(),
        })
    }

    fn f(&self, coeffs: &[f64], tau: f64) -> f64 {
        self.nodes
            .iter()
            .zip(coeffs)
            .map(|(l, c)| c * (tau * l).sin())
            .sum()
    }

    /// `Upsilon_0(t)` by `s`-quadrature: uniform oscillation-resolving
    /// panels plus refinement of width `6 / sigma` around the stationary
    /// region `s = r2`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let a = self.alpha.value();
        // Panel edges: uniform + refined window near s = r2.
        let cycles = t * 2.0 * self.lambda_hi / (2.0 * PI);
        let n_uniform = ((1.5 * cycles).ceil() as usize).max(24);
        let mut edges: Vec<f64> = (0..=n_uniform).map(|i| t * i as f64 / n_uniform as f64).collect();
        let (w_lo, w_hi) = (self.r2 - 3.0 / self.sigma, self.r2 + 3.0 / self.sigma);
        if w_hi > 0.0 && w_lo < t {
            let lo = w_lo.max(0.0);
            let hi = w_hi.min(t);
            for i in 0..=24 {
                edges.push(lo + (hi - lo) * i as f64 / 24.0);
            }
        }
        edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
        edges.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        let (xs, ws) = gauss_legendre(8);
        let e1 = Complex64::from_polar(1.0, -self.th1);
        let e2 = Complex64::from_polar(1.0, self.th2);
        let mut acc = Complex64::new(0.0, 0.0);
        for pair in edges.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (x, w) in xs.iter().zip(&ws) {
                let s = mid + half * x;
                let v = self.f(&self.cm1_r1, t - s) * self.f(&self.c0_r2, s) * e1
                    + self.f(&self.c0_r1, t - s) * self.f(&self.cm1_r2, s) * e2;
                acc += v * (half * w);
            }
        }
        4.0 * PI * a * (1.0 - a) * acc
    }
}

/// One-shot Duhamel evaluation of the windowed `Upsilon_0(t)`.
pub fn upsilon0_duhamel(
    t: f64,
    q1: &PolarPoint,
    q2: &PolarPoint,
    alpha: Flux,
    g: &FrequencyWindow,
    budget: &AccuracyBudget,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Config(format!("upsilon0_duhamel needs t > 0, got {t}")));
    }
    Ok(Upsilon0Evaluator::new(q1, q2, alpha, g, t, budget)?.eval(t))
}

/// Theorem-level diffraction coefficient: the `lambda^{-1}` coefficient of
/// the conormal amplitude at the diffractive front,
/// `a0 = -(sin(pi alpha) / (2 sqrt(r1 r2))) e^{-i dtheta/2} / cos(dtheta/2)`.
///
/// Evaluated through the reduced angular difference so the dependence on
/// `(th1, th2)` is exactly through `th1 - th2`.
pub fn diffraction_coefficient(alpha: Flux, q1: &PolarPoint, q2: &PolarPoint) -> Result<Complex64> {
    let norm = normalize_configuration(q1, q2)?;
    let dt2 = norm.q1.theta; // = dtheta / 2
    let c = dt2.cos();
    Ok(-(PI * alpha.value()).sin() / (2.0 * (q1.r * q2.r).sqrt() * c)
        * Complex64::from_polar(1.0, -dt2))
}

/// Assemble the same coefficient from the stationary-phase factors:
/// `-(sin(pi alpha)/(4 pi sqrt(r1 r2))) (e^{-i th1} + e^{i th2})
///  * 2 pi / (cos th1 + cos th2)`
/// on the normalized configuration, and check it coincides with
/// [`diffraction_coefficient`] to 1e-14.
pub fn assemble_from_stationary_phase(alpha: Flux, q1: &PolarPoint, q2: &PolarPoint) -> Result<Complex64> {
    let norm = normalize_configuration(q1, q2)?;
    let principal = upsilon0_principal(&norm.q1, &norm.q2, alpha);
    let mu = norm.q1.theta.cos() + norm.q2.theta.cos(); // r1'(0) + r2'(0)
    let assembled = -principal * 2.0 * PI / mu;
    let direct = diffraction_coefficient(alpha, q1, q2)?;
    let scale = direct.norm().max(1e-30);
    if (assembled - direct).norm() > 1e-14 * scale.max(1.0) {
        return Err(Error::Accuracy {
            context: "stationary-phase assembly vs closed coefficient".into(),
            achieved: (assembled - direct).norm(),
            requested: 1e-14 * scale.max(1.0),
        });
    }
    Ok(assembled)
}
