//! Numerical toolkit for the wave propagator of a planar Schrödinger operator
//! with a single Aharonov–Bohm flux line.
//!
//! The crate evaluates the frequency-windowed sine propagator by an angular
//! mode sum over Bessel integrals, probes the conormal singularity that the
//! kernel carries along the diffractive front `t = r1 + r2`, and checks the
//! extracted leading amplitude against the closed-form diffraction
//! coefficient. A companion set of routines handles the self-adjoint
//! extension theory of the radial model operators (deficiency solutions,
//! boundary functionals, commutator pairings) and the Duhamel-type
//! representation of the diffracted wave.
//!
//! Modules:
//! - [`special_fn`]: Bessel `J_nu`, complex `K_nu`, gamma, Hankel symbol series.
//! - [`quad`]: Gauss–Legendre panels and adaptive quadrature.
//! - [`mode_sum`]: windowed kernel evaluation by angular mode sum.
//! - [`domains`]: extension theory, boundary functionals, pairings.
//! - [`diffraction`]: diffraction coefficient, translated configurations,
//!   one-dimensional kernels, Duhamel assembly.
//! - [`probe`]: time-series probes and amplitude extraction at the front.
//! - [`verify`]: the acceptance-criteria battery used by tests and the CLI.

pub mod diffraction;
pub mod domains;
pub mod mode_sum;
pub mod probe;
pub mod quad;
pub mod special_fn;
pub mod verify;

use serde::{Deserialize, Serialize};

/// Crate-wide error type.
///
/// Variants map onto the CLI exit codes: configuration errors exit with 1,
/// domain exclusions with 2, accuracy-budget failures with 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameter or configuration input.
    #[error("configuration error: {0}")]
    Config(String),
    /// Query lies outside the mathematical domain (excluded direction,
    /// non-positive time, singular support, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A quadrature or series could not certify the requested tolerance
    /// within its evaluation budget.
    #[error("accuracy budget exhausted in {context}: estimated error {achieved:e} > requested {requested:e}")]
    Accuracy {
        context: String,
        achieved: f64,
        requested: f64,
    },
}

impl Error {
    /// CLI process exit code associated with this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Domain(_) => 2,
            Error::Accuracy { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Error tolerances and evaluation limits threaded through quadratures and
/// series evaluations.
///
/// A computation succeeds if its error estimate is below
/// `abs_tol + rel_tol * |value|`; otherwise it reports [`Error::Accuracy`]
/// rather than returning a silently degraded number.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AccuracyBudget {
    /// Absolute error tolerance.
    pub abs_tol: f64,
    /// Relative error tolerance.
    pub rel_tol: f64,
    /// Maximum number of integrand/term evaluations.
    pub max_evals: usize,
}

impl AccuracyBudget {
    pub fn new(abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<Self> {
        if !(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0) {
            return Err(Error::Config(
                "accuracy budget requires non-negative tolerances, not both zero".into(),
            ));
        }
        if max_evals == 0 {
            return Err(Error::Config("accuracy budget requires max_evals > 0".into()));
        }
        Ok(AccuracyBudget {
            abs_tol,
            rel_tol,
            max_evals,
        })
    }

    /// Permitted error for a result of magnitude `|value|`.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol + self.rel_tol * value.abs()
    }

    /// Check an error estimate against the budget, naming the computation in
    /// the failure report.
    pub fn certify(&self, context: &str, value: f64, err_est: f64) -> Result<()> {
        if err_est <= self.tolerance_for(value) {
            Ok(())
        } else {
            Err(Error::Accuracy {
                context: context.to_string(),
                achieved: err_est,
                requested: self.tolerance_for(value),
            })
        }
    }
}

impl Default for AccuracyBudget {
    /// A general-purpose budget: `1e-12` absolute, `1e-10` relative,
    /// two million evaluations.
    fn default() -> Self {
        AccuracyBudget {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_evals: 2_000_000,
        }
    }
}
