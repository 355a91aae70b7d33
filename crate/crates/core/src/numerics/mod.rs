//! Self-contained numerical kernels: adaptive quadrature, explicit
//! Runge-Kutta integration with dense output, bracketing root finding,
//! Brent minimization and a Sturm-bisection tridiagonal eigensolver.
//!
//! Every routine is a pure function of its inputs.

mod lstsq;
mod minimize;
mod ode;
mod quadrature;
mod roots;
mod tridiag;

pub use lstsq::least_squares;
pub use minimize::minimize_scalar;
pub use ode::{solve_ivp, solve_ivp_until, Trajectory};
pub use quadrature::integrate;
pub use roots::find_root;
pub use tridiag::{sturm_count, tridiag_eigenvalues, tridiag_eigs, TridiagEigen};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("non-finite function value at x = {x}")]
    DomainError { x: f64 },
    #[error("bracket [{lo}, {hi}] does not straddle a sign change (f = {flo}, {fhi})")]
    BadBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Closed interval `[lo, hi]` with `lo < hi`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(NumericsError::InvalidInterval { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Absolute and relative tolerance plus an iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl ToleranceSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(NumericsError::InvalidTolerance("abs_tol must be positive"));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(NumericsError::InvalidTolerance("rel_tol must be positive"));
        }
        if max_iter == 0 {
            return Err(NumericsError::InvalidTolerance("max_iter must be at least 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// Same tolerances with abs/rel scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_iter: self.max_iter,
        }
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}
