//! Quadrature primitives: Gauss–Legendre rules, composite panels, and a
//! simple globally adaptive integrator for real- and complex-valued
//! integrands.

use num_complex::Complex64;

use crate::{AccuracyBudget, Error, Result};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots of the Legendre polynomial are found by Newton iteration from the
/// Chebyshev initial guess; weights follow from `2 / ((1 - x^2) P_n'(x)^2)`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-based initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = if n == 1 {
                1.0
            } else {
                n as f64 * (x * p1 - p0) / (x * x - 1.0)
            };
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Nodes and weights of a composite Gauss–Legendre rule: `panels` equal
/// subintervals of `[a, b]`, each carrying the `order`-point rule.
pub fn composite_gl(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(panels >= 1 && b > a);
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(mid + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}

fn gl15_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, xs: &[f64], ws: &[f64]) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(ws) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

/// Globally adaptive Gauss–Legendre integration of a complex integrand over
/// `[a, b]`.
///
/// Each interval is scored by comparing its 15-point estimate against the sum
/// of the two half-interval estimates; the worst interval is bisected until
/// the accumulated error estimate meets the budget. Returns the value and the
/// final error estimate.
pub fn adaptive_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    budget: &AccuracyBudget,
) -> Result<(Complex64, f64)> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Config(format!(
            "adaptive quadrature needs a finite interval with b > a, got [{a}, {b}]"
        )));
    }
    let (xs, ws) = gauss_legendre(15);
    // (neg_error, a, b, value) intervals, worst first.
    struct Seg {
        a: f64,
        b: f64,
        val: Complex64,
        err: f64,
    }
    let whole = gl15_panel(&f, a, b, &xs, &ws);
    let mut evals = 15usize;
    let mut segs = vec![Seg {
        a,
        b,
        val: whole,
        err: f64::INFINITY,
    }];
    loop {
        let total: Complex64 = segs.iter().map(|s| s.val).sum();
        let err: f64 = segs.iter().map(|s| s.err.min(1e300)).sum();
        if err <= budget.tolerance_for(total.norm()) {
            return Ok((total, err));
        }
        if evals + 30 > budget.max_evals {
            return Err(Error::Accuracy {
                context: "adaptive quadrature".into(),
                achieved: err,
                requested: budget.tolerance_for(total.norm()),
            });
        }
        // Bisect the interval with the largest error estimate.
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let Seg { a: sa, b: sb, val, .. } = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        let left = gl15_panel(&f, sa, mid, &xs, &ws);
        let right = gl15_panel(&f, mid, sb, &xs, &ws);
        evals += 30;
        let delta = (left + right - val).norm();
        // Split the interval's defect between the halves so later bisections
        // keep attacking the true trouble spots.
        segs.push(Seg {
            a: sa,
            b: mid,
            val: left,
            err: 0.5 * delta,
        });
        segs.push(Seg {
            a: mid,
            b: sb,
            val: right,
            err: 0.5 * delta,
        });
    }
}

/// Real-valued front end to [`adaptive_complex`].
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, budget: &AccuracyBudget) -> Result<(f64, f64)> {
    let (v, e) = adaptive_complex(|x| Complex64::new(f(x), 0.0), a, b, budget)?;
    Ok((v.re, e))
}
