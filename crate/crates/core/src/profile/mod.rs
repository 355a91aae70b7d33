//! Hedgehog profile `q0(rho) = cos(alpha(rho))` of the topological-fermion
//! soliton for potential power `m`.
//!
//! The static field equation in the dimensionless radius `rho = r / r0` is
//!
//! ```text
//! q0'' + (1 - q0^2) q0 / rho^2 - m rho^2 q0^(2m-1) = 0,   q0(0) = 1, q0(inf) = 0
//! ```
//!
//! Profiles come from exact solutions (`m = 2, 3`), from the variational
//! trial families, or from shooting on the initial curvature `kappa` of
//! `q0 ~ 1 - kappa rho^2`.

mod energy;
mod shooting;

pub use energy::{
    default_energy_cutoff, default_trial_bracket, energy, energy_auto, energy_report, optimize_trial, EnergyReport,
};
pub use shooting::{default_shooting_tolerance, shoot_profile, RHO_START};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::numerics::NumericsError;

/// Reference value of the `m = 1` trial parameter `kappa0`.
pub const KAPPA0_REFERENCE: f64 = 0.206796;
/// Reference value of the `m = 4` trial parameter `kappa1`.
pub const KAPPA1_M4_REFERENCE: f64 = 2.98428;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("{what} is not available for m = {m}")]
    Unsupported { m: u32, what: &'static str },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("no overshoot/undershoot bracket found for m = {m} in kappa scan [{lo}, {hi}]")]
    NoBracket { m: u32, lo: f64, hi: f64 },
    #[error("shooting diverged for m = {m} at kappa = {kappa}: {source}")]
    ShootingDiverged {
        m: u32,
        kappa: f64,
        source: NumericsError,
    },
    #[error("profile evaluated outside its domain at rho = {rho}")]
    DomainError { rho: f64 },
    #[error("energy tail bound {bound:e} exceeds abs_tol {abs_tol:e} at rho_max = {rho_max}")]
    TruncationTooShort {
        rho_max: f64,
        bound: f64,
        abs_tol: f64,
    },
    #[error("profile invariant violated: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, ProfileError>;

/// Model parameters: potential power `m`, length scale `r0` and the
/// fine-structure prefactor `alpha_f`.
///
/// `alpha_f` multiplies the whole Lagrangian and drops out of every
/// spectrum; it is carried for reporting only. Internally all lengths are in
/// units of `r0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    pub m: u32,
    pub r0: f64,
    pub alpha_f: f64,
}

impl ModelParams {
    pub const ALPHA_F: f64 = 1.0 / 137.036;

    pub fn new(m: u32, r0: f64, alpha_f: f64) -> Result<Self> {
        if m == 0 {
            return Err(ProfileError::BadParameter("m must be at least 1".into()));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(ProfileError::BadParameter(format!("r0 must be positive, got {r0}")));
        }
        if !(alpha_f > 0.0 && alpha_f.is_finite()) {
            return Err(ProfileError::BadParameter(format!(
                "alpha_f must be positive, got {alpha_f}"
            )));
        }
        Ok(Self { m, r0, alpha_f })
    }

    pub fn with_m(m: u32) -> Result<Self> {
        Self::new(m, 1.0, Self::ALPHA_F)
    }
}

/// Large-`rho` power law `q0 ~ amplitude * rho^(-exponent)` for `m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTail {
    pub amplitude: f64,
    pub exponent: f64,
}

/// Tail of the `m >= 2` profile: `xi = 2/(m-1)`,
/// `A = [(m^2+3)/(m(m-1)^2)]^(1/(2(m-1)))`.
///
/// `m = 1` has a Gaussian tail `rho^(-1/2) exp(-rho^2/2)` instead and is
/// rejected.
pub fn tail_params(m: u32) -> Result<AsymptoticTail> {
    if m < 2 {
        return Err(ProfileError::Unsupported {
            m,
            what: "power-law tail",
        });
    }
    let mf = f64::from(m);
    let base = (mf * mf + 3.0) / (mf * (mf - 1.0).powi(2));
    Ok(AsymptoticTail {
        amplitude: base.powf(1.0 / (2.0 * (mf - 1.0))),
        exponent: 2.0 / (mf - 1.0),
    })
}

/// `kappa2 = m (m-1)^2 / (m^2 + 3)` of the general trial function, fixed so
/// that its tail matches [`tail_params`].
pub fn trial_kappa2(m: u32) -> f64 {
    let mf = f64::from(m);
    mf * (mf - 1.0).powi(2) / (mf * mf + 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    AnalyticM2,
    AnalyticM3,
    TrialM1,
    TrialGeneral,
    Numeric,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AnalyticM2 => "analytic-m2",
            Self::AnalyticM3 => "analytic-m3",
            Self::TrialM1 => "trial-m1",
            Self::TrialGeneral => "trial-general",
            Self::Numeric => "numeric",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum FarTail {
    /// `c rho^(-1/2) exp(-rho^2/2)`
    Gaussian { coef: f64 },
    /// `c rho^(-xi)`
    Power { coef: f64, xi: f64 },
}

impl FarTail {
    fn eval(&self, rho: f64) -> [f64; 3] {
        match *self {
            FarTail::Gaussian { coef } => {
                let q = coef * rho.powf(-0.5) * (-0.5 * rho * rho).exp();
                let l1 = -0.5 / rho - rho;
                let l2 = 0.5 / (rho * rho) - 1.0;
                [q, q * l1, q * (l1 * l1 + l2)]
            }
            FarTail::Power { coef, xi } => {
                let q = coef * rho.powf(-xi);
                [q, -xi * q / rho, xi * (xi + 1.0) * q / (rho * rho)]
            }
        }
    }
}

/// Shooting solution sampled at the integrator's step nodes.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct NumericProfile {
    pub kappa: f64,
    /// `rho^4` coefficient of the small-`rho` series.
    pub c4: f64,
    pub rho: Vec<f64>,
    pub q: Vec<f64>,
    pub dq: Vec<f64>,
    pub d2q: Vec<f64>,
    pub rho_match: f64,
    pub tail: FarTail,
    pub rho_max: f64,
}

fn hermite(x0: f64, x1: f64, p0: f64, p1: f64, m0: f64, m1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * h * m1;
    let slope = ((6.0 * t2 - 6.0 * t) * p0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
        + (-6.0 * t2 + 6.0 * t) * p1
        + (3.0 * t2 - 2.0 * t) * h * m1)
        / h;
    (value, slope)
}

impl NumericProfile {
    fn eval(&self, rho: f64) -> [f64; 3] {
        let first = self.rho[0];
        if rho <= first {
            let r2 = rho * rho;
            return [
                1.0 - self.kappa * r2 + self.c4 * r2 * r2,
                -2.0 * self.kappa * rho + 4.0 * self.c4 * r2 * rho,
                -2.0 * self.kappa + 12.0 * self.c4 * r2,
            ];
        }
        if rho >= self.rho_match {
            return self.tail.eval(rho);
        }
        let i = self.rho.partition_point(|&r| r <= rho).saturating_sub(1);
        let i = i.min(self.rho.len() - 2);
        let (x0, x1) = (self.rho[i], self.rho[i + 1]);
        let (q, _) = hermite(x0, x1, self.q[i], self.q[i + 1], self.dq[i], self.dq[i + 1], rho);
        let (dq, d2q) = hermite(
            x0,
            x1,
            self.dq[i],
            self.dq[i + 1],
            self.d2q[i],
            self.d2q[i + 1],
            rho,
        );
        [q, dq, d2q]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    AnalyticM2,
    AnalyticM3,
    TrialM1 { kappa0: f64 },
    TrialGeneral { kappa1: f64, kappa2: f64, xi: f64 },
    Numeric(Box<NumericProfile>),
}

/// Immutable profile `q0(rho)` with first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFunction {
    m: u32,
    repr: Repr,
}

/// `sqrt(2/7)`, the `rho^2` scale of the exact `m = 2` solution
/// (`rho_tilde^2 = sqrt(2/7) rho^2`).
pub(crate) fn m2_scale() -> f64 {
    (2.0f64 / 7.0).sqrt()
}

impl ProfileFunction {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> ProfileKind {
        match self.repr {
            Repr::AnalyticM2 => ProfileKind::AnalyticM2,
            Repr::AnalyticM3 => ProfileKind::AnalyticM3,
            Repr::TrialM1 { .. } => ProfileKind::TrialM1,
            Repr::TrialGeneral { .. } => ProfileKind::TrialGeneral,
            Repr::Numeric(_) => ProfileKind::Numeric,
        }
    }

    /// Named parameters: `kappa0`; `kappa1`, `kappa2`; or the shooting
    /// `kappa` with the matching radius of the analytic tail.
    pub fn params(&self) -> BTreeMap<&'static str, f64> {
        let mut map = BTreeMap::new();
        match &self.repr {
            Repr::AnalyticM2 | Repr::AnalyticM3 => {}
            Repr::TrialM1 { kappa0 } => {
                map.insert("kappa0", *kappa0);
            }
            Repr::TrialGeneral { kappa1, kappa2, .. } => {
                map.insert("kappa1", *kappa1);
                map.insert("kappa2", *kappa2);
            }
            Repr::Numeric(num) => {
                map.insert("kappa", num.kappa);
                map.insert("rho_match", num.rho_match);
            }
        }
        map
    }

    /// Curvature `kappa` of `q0 ~ 1 - kappa rho^2` at the origin.
    pub fn origin_curvature(&self) -> f64 {
        -0.5 * self.eval(0.0)[2]
    }

    /// Largest radius the profile was constructed for; `None` for closed forms.
    pub fn support_end(&self) -> Option<f64> {
        match &self.repr {
            Repr::Numeric(num) => Some(num.rho_max),
            _ => None,
        }
    }

    /// `[q0, q0', q0'']` at `rho >= 0`.
    pub fn eval(&self, rho: f64) -> [f64; 3] {
        let rho = rho.abs();
        match &self.repr {
            Repr::AnalyticM3 => {
                let u = 1.0 + rho * rho;
                let q = u.powf(-0.5);
                [q, -rho * q / u, (2.0 * rho * rho - 1.0) * q / (u * u)]
            }
            Repr::AnalyticM2 => {
                let c = m2_scale();
                let u = 1.0 + c * rho * rho;
                [
                    1.0 / u,
                    -2.0 * c * rho / (u * u),
                    (6.0 * c * c * rho * rho - 2.0 * c) / (u * u * u),
                ]
            }
            Repr::TrialM1 { kappa0 } => {
                let k = *kappa0;
                let w = 1.0 + k * rho * rho;
                let q = (-0.5 * rho * rho).exp() * w.powf(-0.25);
                let l1 = -rho - 0.5 * k * rho / w;
                let l2 = -1.0 - 0.5 * k * (1.0 - k * rho * rho) / (w * w);
                [q, q * l1, q * (l1 * l1 + l2)]
            }
            Repr::TrialGeneral { kappa1, kappa2, xi } => {
                let r2 = rho * rho;
                let w = 1.0 + kappa1 * r2 + kappa2 * r2 * r2;
                let dw = 2.0 * kappa1 * rho + 4.0 * kappa2 * r2 * rho;
                let d2w = 2.0 * kappa1 + 12.0 * kappa2 * r2;
                let q = w.powf(-xi / 4.0);
                let l1 = -0.25 * xi * dw / w;
                let l2 = -0.25 * xi * (d2w * w - dw * dw) / (w * w);
                [q, q * l1, q * (l1 * l1 + l2)]
            }
            Repr::Numeric(num) => num.eval(rho),
        }
    }

    pub fn q0(&self, rho: f64) -> f64 {
        self.eval(rho)[0]
    }

    pub fn dq0(&self, rho: f64) -> f64 {
        self.eval(rho)[1]
    }

    pub fn d2q0(&self, rho: f64) -> f64 {
        self.eval(rho)[2]
    }

    /// Profile angle `alpha = arccos(q0)`, running from 0 to pi/2.
    pub fn alpha(&self, rho: f64) -> f64 {
        self.q0(rho).clamp(-1.0, 1.0).acos()
    }

    /// Radii used for invariant checks: the integrator nodes for numeric
    /// profiles, a logarithmic grid otherwise.
    pub fn sample_grid(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Numeric(num) => {
                let mut grid = vec![0.0];
                grid.extend(num.rho.iter().copied());
                let mut r = num.rho_match;
                while r < num.rho_max {
                    r = (r * 1.05).min(num.rho_max);
                    grid.push(r);
                }
                grid
            }
            _ => {
                let mut grid = vec![0.0];
                grid.extend((0..=600).map(|i| 1e-4 * 10f64.powf(i as f64 / 100.0)));
                grid
            }
        }
    }

    /// Checks `q0(0) = 1`, `0 <= q0 <= 1`, monotone decay on
    /// [`sample_grid`](Self::sample_grid), and that the far end of the grid
    /// is either below `1e-3` or already on the power-law tail (`m >= 2`,
    /// within 1%).
    pub fn check_invariants(&self) -> Result<()> {
        let q_origin = self.q0(0.0);
        if (q_origin - 1.0).abs() > 1e-9 {
            return Err(ProfileError::InvariantViolated(format!(
                "q0(0) = {q_origin}, expected 1"
            )));
        }
        let grid = self.sample_grid();
        let mut prev = f64::INFINITY;
        for &rho in &grid {
            let q = self.q0(rho);
            if !(-1e-15..=1.0 + 1e-15).contains(&q) {
                return Err(ProfileError::InvariantViolated(format!(
                    "q0({rho}) = {q} outside [0, 1]"
                )));
            }
            if q > prev + 1e-14 {
                return Err(ProfileError::InvariantViolated(format!(
                    "q0 increases at rho = {rho}"
                )));
            }
            prev = q;
        }
        let far = *grid.last().expect("non-empty grid");
        let q_far = self.q0(far);
        if q_far > 1e-3 {
            let on_tail = tail_params(self.m)
                .map(|t| (far.powf(t.exponent) * q_far / t.amplitude - 1.0).abs() < 0.01)
                .unwrap_or(false);
            if !on_tail {
                return Err(ProfileError::InvariantViolated(format!(
                    "q0({far}) = {q_far} has neither decayed nor reached its asymptotic tail"
                )));
            }
        }
        Ok(())
    }
}

/// Exact profiles: `m = 3`: `q0 = 1/sqrt(1 + rho^2)`; `m = 2`:
/// `q0 = 1/(1 + rho_tilde^2)` with `rho_tilde = (2/7)^(1/4) rho`.
pub fn analytic_profile(m: u32) -> Result<ProfileFunction> {
    let repr = match m {
        2 => Repr::AnalyticM2,
        3 => Repr::AnalyticM3,
        _ => {
            return Err(ProfileError::Unsupported {
                m,
                what: "an analytic solution",
            })
        }
    };
    Ok(ProfileFunction { m, repr })
}

/// Variational trial profiles.
///
/// * `m = 1`: `q0 = exp(-rho^2/2) (1 + kappa0 rho^2)^(-1/4)`, `kappa0 > 0`.
/// * `m >= 2`: `q0 = (1 + kappa1 rho^2 + kappa2 rho^4)^(-xi/4)`,
///   `xi = 2/(m-1)`, `kappa1 >= 0` and `kappa2` from [`trial_kappa2`].
pub fn trial_profile(m: u32, kappa: f64) -> Result<ProfileFunction> {
    if m == 0 {
        return Err(ProfileError::BadParameter("m must be at least 1".into()));
    }
    if !kappa.is_finite() || kappa < 0.0 || (m == 1 && kappa == 0.0) {
        return Err(ProfileError::BadParameter(format!(
            "trial parameter must be {} for m = {m}, got {kappa}",
            if m == 1 { "positive" } else { "non-negative" }
        )));
    }
    let repr = if m == 1 {
        Repr::TrialM1 { kappa0: kappa }
    } else {
        Repr::TrialGeneral {
            kappa1: kappa,
            kappa2: trial_kappa2(m),
            xi: 2.0 / (f64::from(m) - 1.0),
        }
    };
    Ok(ProfileFunction { m, repr })
}

/// Residual `q0'' + (1 - q0^2) q0 / rho^2 - m rho^2 q0^(2m-1)` of the field
/// equation at `rho > 0`.
pub fn ode_residual(p: &ProfileFunction, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(ProfileError::DomainError { rho });
    }
    let [q, _, d2q] = p.eval(rho);
    let m = p.m();
    Ok(d2q + (1.0 - q * q) * q / (rho * rho) - f64::from(m) * rho * rho * q.powi(2 * m as i32 - 1))
}
