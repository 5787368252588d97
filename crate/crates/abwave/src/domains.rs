//! Self-adjoint extension machinery for the radial model operators:
//! angular mode projection, the boundary functionals reading off the two
//! admissible small-`r` asymptotics, deficiency solutions built from
//! Macdonald functions, and the commutator pairing constant
//! `-4 pi alpha (1 - alpha)` evaluated two independent ways.

use num_complex::Complex64;

use crate::mode_sum::Flux;
use crate::quad::gauss_legendre;
use crate::special_fn::{bessel_k, BesselOrder};
use crate::{AccuracyBudget, Error, Result};

const PI: f64 = std::f64::consts::PI;

/// A radial function obtained by projecting onto one angular mode.
pub struct RadialModeFunction {
    /// Angular mode index `j` (projection weight `e^{-i j theta}`).
    pub k: i64,
    f: Box<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl RadialModeFunction {
    pub fn new(k: i64, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        RadialModeFunction { k, f: Box::new(f) }
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        (self.f)(r)
    }
}

/// Smooth radial cutoff: identically one up to `r_on`, identically zero from
/// `r_off`, quintic-smoothstep transition in between (C^2 throughout).
#[derive(Debug, Clone, Copy)]
pub struct CutoffProfile {
    pub r_on: f64,
    pub r_off: f64,
}

impl CutoffProfile {
    pub fn new(r_on: f64, r_off: f64) -> Result<Self> {
        if r_on > 0.0 && r_off > r_on {
            Ok(CutoffProfile { r_on, r_off })
        } else {
            Err(Error::Config(format!(
                "cutoff needs 0 < r_on < r_off, got ({r_on}, {r_off})"
            )))
        }
    }

    fn u(&self, r: f64) -> f64 {
        (r - self.r_on) / (self.r_off - self.r_on)
    }

    /// Profile value `rho(r)`.
    pub fn eval(&self, r: f64) -> f64 {
        let u = self.u(r);
        if u <= 0.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            1.0 - (6.0 * u.powi(5) - 15.0 * u.powi(4) + 10.0 * u.powi(3))
        }
    }

    /// First derivative `rho'(r)`.
    pub fn d1(&self, r: f64) -> f64 {
        let u = self.u(r);
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            -(30.0 * u.powi(4) - 60.0 * u.powi(3) + 30.0 * u.powi(2)) / (self.r_off - self.r_on)
        }
    }

    /// Second derivative `rho''(r)`.
    pub fn d2(&self, r: f64) -> f64 {
        let u = self.u(r);
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            -(120.0 * u.powi(3) - 180.0 * u.powi(2) + 60.0 * u) / (self.r_off - self.r_on).powi(2)
        }
    }
}

impl Default for CutoffProfile {
    fn default() -> Self {
        CutoffProfile { r_on: 0.5, r_off: 1.0 }
    }
}

/// Sign selecting one of the two deficiency frequencies `beta = e^{∓i pi/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeficiencySign {
    Plus,
    Minus,
}

/// Deficiency frequency: `beta_+ = e^{-i pi/4}`, `beta_- = e^{+i pi/4}`,
/// so that `beta^4 = -1` and `Re beta > 0`.
#[derive(Debug, Clone, Copy)]
pub struct DeficiencyFrequency {
    pub sign: DeficiencySign,
}

impl DeficiencyFrequency {
    pub fn beta(&self) -> Complex64 {
        match self.sign {
            DeficiencySign::Plus => Complex64::from_polar(1.0, -0.25 * PI),
            DeficiencySign::Minus => Complex64::from_polar(1.0, 0.25 * PI),
        }
    }
}

/// Coefficients of the two admissible boundary asymptotics
/// `c0 r^alpha` and `c_minus1 r^{1-alpha} e^{-i theta}`.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryCoefficients {
    pub c0: Complex64,
    pub c_minus1: Complex64,
}

/// Projection onto the `j`-th angular mode:
/// `[P_j u](r) = (1/sqrt(2 pi)) int_0^{2pi} u(r, theta) e^{-i j theta} dtheta`
/// by the periodic trapezoid rule (spectrally accurate for smooth `u`).
pub fn mode_project<F>(u: F, j: i64, n_theta: usize) -> Result<RadialModeFunction>
where
    F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
{
    if n_theta < 8 * (j.unsigned_abs() as usize + 1) {
        return Err(Error::Config(format!(
            "mode_project needs at least {} theta samples for mode {j}, got {n_theta}",
            8 * (j.unsigned_abs() + 1)
        )));
    }
    let norm = (2.0 * PI / n_theta as f64) / (2.0 * PI).sqrt();
    Ok(RadialModeFunction::new(j, move |r| {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..n_theta {
            let th = 2.0 * PI * m as f64 / n_theta as f64;
            acc += u(r, th) * Complex64::from_polar(1.0, -(j as f64) * th);
        }
        acc * norm
    }))
}

/// Result of a boundary-functional evaluation: the extrapolated limit and
/// the residual of the final extrapolation step.
#[derive(Debug, Clone, Copy)]
pub struct LimitValue {
    pub value: Complex64,
    pub residual: f64,
}

/// Boundary functional `L_j` for `j` in `{0, -1}`:
/// `<L_0, u> = (1/sqrt(2pi)) lim_{r->0} r^{-alpha} [P_0 u](r)` and the
/// `r^{-(1-alpha)}` analogue on mode -1.
///
/// The limit is taken by Richardson extrapolation along `r_n = r0 2^{-n}`,
/// `n = 0..6`, eliminating the known correction exponents contributed by the
/// `r^2 x smooth` part of Friedrichs-domain functions. Growing scaled values
/// are flagged as non-Friedrichs input.
pub fn boundary_l(j: i64, u_mode: &RadialModeFunction, alpha: Flux) -> Result<LimitValue> {
    let a = alpha.value();
    let (pow, ladder) = match j {
        0 => (a, [2.0 - a, 4.0 - a, 6.0 - a]),
        -1 => (1.0 - a, [2.0 + a, 4.0 + a, 6.0 + a]),
        _ => {
            return Err(Error::Config(format!(
                "boundary functional defined only for modes 0 and -1, got {j}"
            )))
        }
    };
    const N: usize = 6;
    let r0 = 0.1;
    let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
    let mut s: Vec<Complex64> = (0..=N)
        .map(|n| {
            let r = r0 * 0.5f64.powi(n as i32);
            u_mode.eval(r) / r.powf(pow) * inv_sqrt_2pi
        })
        .collect();
    // Divergence detection on the raw scaled sequence: either a sharp jump
    // between consecutive levels or steady cumulative growth flags input
    // outside the Friedrichs asymptotics.
    for n in 0..N {
        if s[n + 1].norm() > 10.0 * s[n].norm() + 1e-9 {
            return Err(Error::Domain(
                "boundary_l: scaled values grow toward r = 0; input is not of Friedrichs type".into(),
            ));
        }
    }
    if s[N].norm() > 10.0 * (s[0].norm() + 1e-9) {
        return Err(Error::Domain(
            "boundary_l: scaled values grow steadily toward r = 0; input is not of Friedrichs type".into(),
        ));
    }
    // Successive elimination of the known exponent ladder.
    for p in ladder {
        let f = 0.5f64.powf(p);
        let next: Vec<Complex64> = (0..s.len() - 1).map(|n| (s[n + 1] - f * s[n]) / (1.0 - f)).collect();
        s = next;
    }
    let m = s.len();
    let residual = if m >= 2 { (s[m - 1] - s[m - 2]).norm() } else { f64::NAN };
    Ok(LimitValue {
        value: s[m - 1],
        residual,
    })
}

/// Deficiency solution on mode `k` in `{0, -1}`:
/// `u(r, theta) = K_nu(beta r) e^{i k theta}` with `nu = alpha` for `k = 0`
/// and `nu = 1 - alpha` for `k = -1`.
pub fn deficiency_solution(
    alpha: Flux,
    freq: DeficiencyFrequency,
    k: i64,
) -> Result<impl Fn(f64, f64) -> Complex64 + Send + Sync> {
    let nu = match k {
        0 => alpha.value(),
        -1 => 1.0 - alpha.value(),
        _ => {
            return Err(Error::Config(format!(
                "deficiency solutions live on modes 0 and -1, got {k}"
            )))
        }
    };
    let beta = freq.beta();
    let budget = AccuracyBudget::new(1e-13, 1e-12, 500_000)?;
    let order = BesselOrder::new(nu)?;
    Ok(move |r: f64, theta: f64| {
        let radial = bessel_k(order, beta * r, &budget).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        radial * Complex64::from_polar(1.0, k as f64 * theta)
    })
}

/// Residual of the mode-`k` radial equation
/// `-u'' - u'/r + ((k + alpha)^2 / r^2) u + beta^2 u`
/// with centered second-order finite differences of step `h`.
pub fn ode_residual<F>(alpha: Flux, k: i64, beta: Complex64, u_mode: F, r: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(r > 0.0) || !(h > 0.0) || h >= r {
        return Err(Error::Config(format!("ode_residual needs 0 < h < r, got r = {r}, h = {h}")));
    }
    let up = u_mode(r + h);
    let u0 = u_mode(r);
    let um = u_mode(r - h);
    let d1 = (up - um) / (2.0 * h);
    let d2 = (up - 2.0 * u0 + um) / (h * h);
    let nu = k as f64 + alpha.value();
    Ok(-d2 - d1 / r + (nu * nu) / (r * r) * u0 + beta * beta * u0)
}

/// Contour form of the commutator pairing:
/// `(2/i) ∮_{|z|=eps} d/dzbar(zbar^alpha) · d/dzbar(zbar^{1-alpha}) dzbar`
/// by the `n_quad`-point periodic trapezoid, with `d/dzbar = (1/2)(d_x + i d_y)`
/// realized by centered finite differences of step `eps * 1e-4`.
///
/// Converges to `-4 pi alpha (1 - alpha)`.
pub fn commutator_pairing_contour(alpha: Flux, epsilon: f64, n_quad: usize) -> Result<Complex64> {
    if !(epsilon > 0.0) || n_quad < 8 {
        return Err(Error::Config("pairing contour needs epsilon > 0 and n_quad >= 8".into()));
    }
    let a = alpha.value();
    let b = 1.0 - a;
    let h = epsilon * 1e-4;
    // zbar^p as a function of (x, y).
    let zbar_pow = |p: f64, x: f64, y: f64| -> Complex64 { Complex64::new(x, -y).powf(p) };
    let dzbar = |p: f64, x: f64, y: f64| -> Complex64 {
        let dx = (zbar_pow(p, x + h, y) - zbar_pow(p, x - h, y)) / (2.0 * h);
        let dy = (zbar_pow(p, x, y + h) - zbar_pow(p, x, y - h)) / (2.0 * h);
        0.5 * (dx + Complex64::i() * dy)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let dphi = 2.0 * PI / n_quad as f64;
    for m in 0..n_quad {
        // Half-step offset keeps every finite-difference stencil clear of the
        // principal-branch cut on the negative real axis; the product of the
        // two derivatives is branch-independent (the exponents sum to one).
        let phi = dphi * (m as f64 + 0.5);
        let (x, y) = (epsilon * phi.cos(), epsilon * phi.sin());
        // dzbar = conj(dz) = -i eps e^{-i phi} dphi on the ccw circle.
        let tangent = -Complex64::i() * epsilon * Complex64::from_polar(1.0, -phi);
        acc += dzbar(a, x, y) * dzbar(b, x, y) * tangent * dphi;
    }
    Ok(2.0 / Complex64::i() * acc)
}

/// Area form of the same pairing over the cutoff annulus:
/// `∫ (Lap(v0bar) · d/dzbar(v_-1) + d/dzbar(v0bar) · Lap(v_-1)) dx dy`
/// with `v0bar = zbar^alpha rho(r)`, `v_-1 = zbar^{1-alpha} rho(r)`.
///
/// The integrand is supported on `r_on <= r <= r_off` (both terms carry a
/// derivative of `rho`, and `zbar^p` is harmonic), so the inner disk
/// contributes exactly zero. Radial Gauss–Legendre times a periodic
/// trapezoid in theta; derivatives of the profile are analytic.
pub fn commutator_pairing_area(
    alpha: Flux,
    cutoff: &CutoffProfile,
    n_r: usize,
    n_theta: usize,
) -> Result<Complex64> {
    if n_r < 4 || n_theta < 8 {
        return Err(Error::Config("pairing area grid too coarse".into()));
    }
    let a = alpha.value();
    let b = 1.0 - a;
    // For v = zbar^p rho(r):
    //   Lap v   = e^{-i p th} [ (2p+1) r^{p-1} rho' + r^p rho'' ]
    //   d/dzbar v = (1/2) e^{-i(p-1) th} [ 2p r^{p-1} rho + r^p rho' ]
    let lap = |p: f64, r: f64| -> f64 {
        (2.0 * p + 1.0) * r.powf(p - 1.0) * cutoff.d1(r) + r.powf(p) * cutoff.d2(r)
    };
    let dz = |p: f64, r: f64| -> f64 { 0.5 * (2.0 * p * r.powf(p - 1.0) * cutoff.eval(r) + r.powf(p) * cutoff.d1(r)) };
    let (xs, ws) = gauss_legendre(n_r);
    let mid = 0.5 * (cutoff.r_on + cutoff.r_off);
    let half = 0.5 * (cutoff.r_off - cutoff.r_on);
    let dth = 2.0 * PI / n_theta as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(&ws) {
        let r = mid + half * x;
        let radial = lap(a, r) * dz(b, r) + dz(a, r) * lap(b, r);
        for m in 0..n_theta {
            let th = dth * m as f64;
            // angular phases: e^{-i a th} e^{-i (b-1) th} = 1 and the mirror
            // term likewise; carried explicitly as a consistency check of the
            // two-dimensional formulation.
            let phase = Complex64::from_polar(1.0, -(a + b - 1.0) * th);
            acc += phase * radial * r * (half * w) * dth;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_profile_shape() {
        let c = CutoffProfile::default();
        assert_eq!(c.eval(0.2), 1.0);
        assert_eq!(c.eval(1.3), 0.0);
        assert_relative_eq!(c.eval(0.75), 0.5, epsilon = 1e-14);
        // C^2 matching at the seams
        for r in [0.5, 1.0] {
            assert_relative_eq!(c.d1(r), 0.0, epsilon = 1e-12);
            assert_relative_eq!(c.d2(r), 0.0, epsilon = 1e-12);
        }
        // derivative consistency by finite differences
        let h = 1e-6;
        for r in [0.6, 0.8, 0.93] {
            let fd1 = (c.eval(r + h) - c.eval(r - h)) / (2.0 * h);
            assert_relative_eq!(c.d1(r), fd1, max_relative = 1e-7);
            let fd2 = (c.eval(r + h) - 2.0 * c.eval(r) + c.eval(r - h)) / (h * h);
            assert_relative_eq!(c.d2(r), fd2, max_relative = 1e-3, epsilon = 1e-4);
        }
    }

    #[test]
    fn mode_projection_orthogonality() {
        // u = e^{i j th} f(r) projects to sqrt(2 pi) f(r) on mode j and to
        // zero on other modes.
        let f = |r: f64| Complex64::new(r * r + 0.3, -r);
        let u = move |r: f64, th: f64| f(r) * Complex64::from_polar(1.0, 2.0 * th);
        let p2 = mode_project(u, 2, 64).unwrap();
        let want = f(0.7) * (2.0 * PI).sqrt();
        assert!((p2.eval(0.7) - want).norm() < 1e-13);
        let p3 = mode_project(u, 3, 64).unwrap();
        assert!(p3.eval(0.7).norm() < 1e-13);
        // real radial input has no mode -1 content
        let p = mode_project(|r, _| Complex64::new(r.exp(), 0.0), -1, 64).unwrap();
        assert!(p.eval(0.4).norm() < 1e-14);
    }

    #[test]
    fn boundary_functionals_recover_planted_coefficients() {
        let alpha = Flux::new(0.3).unwrap();
        let a = alpha.value();
        let rho = CutoffProfile::default();
        let c0 = Complex64::new(0.8, -1.1);
        let cm1 = Complex64::new(-0.25, 0.45);
        let u = move |r: f64, th: f64| {
            let (x, y) = (r * th.cos(), r * th.sin());
            c0 * r.powf(a) * rho.eval(r)
                + cm1 * r.powf(1.0 - a) * rho.eval(r) * Complex64::from_polar(1.0, -th)
                + Complex64::new(r * r * (1.0 + x + x * y), 0.3 * r * r * (y - 0.5 * x))
        };
        let m0 = mode_project(u, 0, 32).unwrap();
        let l0 = boundary_l(0, &m0, alpha).unwrap();
        assert!((l0.value - c0).norm() < 1e-9, "L0 = {:?}", l0.value);
        let mm1 = mode_project(u, -1, 32).unwrap();
        let lm1 = boundary_l(-1, &mm1, alpha).unwrap();
        assert!((lm1.value - cm1).norm() < 1e-9, "L-1 = {:?}", lm1.value);
        // pure r^2-smooth input has vanishing functionals
        let sm = mode_project(|r: f64, th: f64| Complex64::new(r * r * th.sin().mul_add(r, 1.0), 0.0), 0, 32)
            .unwrap();
        let l = boundary_l(0, &sm, alpha).unwrap();
        assert!(l.value.norm() < 1e-10);
    }

    #[test]
    fn boundary_functional_rejects_divergent_input() {
        let alpha = Flux::new(0.4).unwrap();
        // r^{-alpha} mode-0 content diverges under the r^{-alpha} scaling
        let bad = RadialModeFunction::new(0, |r: f64| Complex64::new(r.powf(-0.4), 0.0));
        assert!(boundary_l(0, &bad, alpha).is_err());
    }

    #[test]
    fn deficiency_solution_satisfies_ode() {
        let alpha = Flux::new(0.3).unwrap();
        let freq = DeficiencyFrequency { sign: DeficiencySign::Plus };
        let beta = freq.beta();
        for k in [0i64, -1] {
            let u = deficiency_solution(alpha, freq, k).unwrap();
            let radial = move |r: f64| u(r, 0.0);
            // residual at r = 1 with h = 1e-3 is small and shrinks ~4x when
            // h halves (second-order stencil)
            let r1 = ode_residual(alpha, k, beta, &radial, 1.0, 1e-3).unwrap();
            assert!(r1.norm() < 1e-5, "k = {k}: residual {}", r1.norm());
            let r2 = ode_residual(alpha, k, beta, &radial, 1.0, 5e-4).unwrap();
            let ratio = r1.norm() / r2.norm();
            assert!((2.5..6.0).contains(&ratio), "k = {k}: order ratio {ratio}");
        }
    }

    #[test]
    fn exact_power_solution_has_zero_residual() {
        let alpha = Flux::new(0.3).unwrap();
        let nu = 2.3; // |k + alpha| with k = 2
        let u = move |r: f64| Complex64::new(r.powf(nu), 0.0);
        let res = ode_residual(alpha, 2, Complex64::new(0.0, 0.0), u, 0.8, 1e-4).unwrap();
        assert!(res.norm() < 1e-7);
    }

    #[test]
    fn pairing_contour_constant() {
        for a in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let alpha = Flux::new(a).unwrap();
            let v = commutator_pairing_contour(alpha, 1e-3, 256).unwrap();
            let want = -4.0 * PI * a * (1.0 - a);
            assert!(
                (v - Complex64::new(want, 0.0)).norm() < 1e-6,
                "alpha = {a}: {v} vs {want}"
            );
        }
    }

    #[test]
    fn pairing_contour_epsilon_independent() {
        let alpha = Flux::new(0.35).unwrap();
        let v1 = commutator_pairing_contour(alpha, 1e-2, 256).unwrap();
        let v2 = commutator_pairing_contour(alpha, 1e-3, 256).unwrap();
        let v3 = commutator_pairing_contour(alpha, 1e-4, 256).unwrap();
        assert!((v1 - v2).norm() < 1e-8);
        assert!((v2 - v3).norm() < 1e-8);
    }

    #[test]
    fn pairing_area_matches_contour() {
        for a in [0.1, 0.5, 0.8] {
            let alpha = Flux::new(a).unwrap();
            let contour = commutator_pairing_contour(alpha, 1e-3, 256).unwrap();
            let area = commutator_pairing_area(alpha, &CutoffProfile::default(), 60, 64).unwrap();
            assert!((area - contour).norm() < 1e-4, "alpha = {a}: {area} vs {contour}");
        }
        // cutoff independence
        let alpha = Flux::new(0.3).unwrap();
        let a1 = commutator_pairing_area(alpha, &CutoffProfile::new(0.5, 1.0).unwrap(), 60, 64).unwrap();
        let a2 = commutator_pairing_area(alpha, &CutoffProfile::new(0.25, 1.4).unwrap(), 60, 64).unwrap();
        assert!((a1 - a2).norm() < 1e-8);
    }

    #[test]
    fn deficiency_l2_classification() {
        // int |K_nu(beta r)|^2 r dr converges near zero for nu in (0,1)
        // (modes 0 and -1) and diverges like r^{-2 alpha} for nu = 1 + alpha.
        let freq = DeficiencyFrequency { sign: DeficiencySign::Minus };
        let beta = freq.beta();
        let b = AccuracyBudget::default();
        let alpha = 0.4;
        let partial = |nu: f64, r_min: f64| -> f64 {
            let (xs, ws) = crate::quad::composite_gl(r_min, 1.0, 400, 8);
            xs.iter()
                .zip(&ws)
                .map(|(r, w)| {
                    let k = bessel_k(BesselOrder::new(nu).unwrap(), beta * r, &b).unwrap();
                    w * k.norm_sqr() * r
                })
                .sum()
        };
        for nu in [alpha, 1.0 - alpha] {
            let p1 = partial(nu, 1e-4);
            let p2 = partial(nu, 1e-6);
            assert!((p2 - p1) / p1 < 0.02, "nu = {nu} should be integrable");
        }
        // divergent mode: ratio of partials tracks (r_min)^{-2 alpha}
        let nu = 1.0 + alpha;
        let p1 = partial(nu, 1e-3);
        let p2 = partial(nu, 1e-4);
        let growth = p2 / p1;
        let expected = 10f64.powf(2.0 * alpha);
        assert!(
            (growth / expected - 1.0).abs() < 0.25,
            "growth {growth} vs r^(-2a) prediction {expected}"
        );
    }
}
