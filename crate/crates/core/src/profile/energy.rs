use super::{tail_params, trial_profile, ProfileError, ProfileFunction, Result};
use crate::numerics::{integrate, minimize_scalar, Interval, ToleranceSpec};

/// Energy split into the quadrature part, the analytic tail beyond the
/// cutoff, and a bound on the error of that tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub value: f64,
    pub truncated: f64,
    pub tail: f64,
    pub tail_bound: f64,
    pub rho_max: f64,
}

fn integrand(p: &ProfileFunction, rho: f64) -> f64 {
    let [q, dq, _] = p.eval(rho);
    let sin2 = (1.0 - q) * (1.0 + q);
    let m = p.m() as i32;
    sin2 * sin2 / (2.0 * rho * rho) + dq * dq + rho * rho * q.powi(2 * m)
}

/// Cutoff radius for which the next-to-leading tail term stays below `abs_tol`.
pub fn default_energy_cutoff(m: u32, abs_tol: f64) -> f64 {
    match tail_params(m) {
        Err(_) => 12.0,
        Ok(t) => (1e5 / abs_tol)
            .powf(1.0 / (2.0 * t.exponent + 3.0))
            .clamp(50.0, 1e7),
    }
}

/// Energy functional with its tail and error budget.
///
/// The integral over `[0, rho_max]` is done by adaptive quadrature. Beyond
/// `rho_max` the `(1 - q0^2)^2 / (2 rho^2)` term contributes exactly
/// `1/(2 rho_max)` up to terms of the size of the rest of the integrand,
/// whose leading power law follows from the asymptotic tail (`m >= 2`) or is
/// Gaussian (`m = 1`). `tail_bound` estimates the neglected next order.
pub fn energy_report(p: &ProfileFunction, tol: ToleranceSpec, rho_max: f64) -> Result<EnergyReport> {
    if !(rho_max > 1.0 && rho_max.is_finite()) {
        return Err(ProfileError::BadParameter(format!(
            "energy cutoff must exceed 1, got {rho_max}"
        )));
    }
    let mut breaks = vec![0.0, 0.5, 1.0, 2.0, 4.0];
    while *breaks.last().unwrap() * 2.0 < rho_max {
        let next = breaks.last().unwrap() * 2.0;
        breaks.push(next);
    }
    breaks.push(rho_max);

    let piece_tol = ToleranceSpec {
        abs_tol: tol.abs_tol / breaks.len() as f64,
        ..tol
    };
    let mut truncated = 0.0;
    for w in breaks.windows(2) {
        let iv = Interval::new(w[0], w[1])?;
        truncated += integrate(|r| integrand(p, r), iv, piece_tol).map_err(|e| match e {
            crate::numerics::NumericsError::DomainError { x } => ProfileError::DomainError { rho: x },
            other => other.into(),
        })?;
    }

    let r = rho_max;
    // integrand minus its exact 1/(2 rho^2) large-rho limit
    let remainder = integrand(p, r) - 0.5 / (r * r);
    let (tail, tail_bound) = match tail_params(p.m()) {
        Ok(t) => {
            let (a, xi) = (t.amplitude, t.exponent);
            let coef = a * a * (xi * xi - 1.0) + a.powi(2 * p.m() as i32);
            let power = 2.0 * xi + 2.0;
            let leading = coef * r.powf(-power);
            let tail = 0.5 / r + coef * r.powf(1.0 - power) / (power - 1.0);
            let bound = 2.0 * (remainder - leading).abs() * r / (power + 1.0);
            (tail, bound)
        }
        Err(_) => {
            // Gaussian remainder: integral from r is ~ remainder / (2 r)
            let est = remainder / (2.0 * r);
            (0.5 / r + est, est.abs())
        }
    };
    if tail_bound > tol.abs_tol {
        return Err(ProfileError::TruncationTooShort {
            rho_max,
            bound: tail_bound,
            abs_tol: tol.abs_tol,
        });
    }
    Ok(EnergyReport {
        value: truncated + tail,
        truncated,
        tail,
        tail_bound,
        rho_max,
    })
}

/// Energy `H[q0] = int_0^inf [(1-q0^2)^2/(2 rho^2) + q0'^2 + rho^2 q0^(2m)] drho`.
pub fn energy(p: &ProfileFunction, tol: ToleranceSpec, rho_max: f64) -> Result<f64> {
    energy_report(p, tol, rho_max).map(|r| r.value)
}

const MAX_CUTOFF: f64 = 1e9;

/// [`energy_report`] with the cutoff doubled from [`default_energy_cutoff`]
/// until the tail bound meets `tol.abs_tol`.
pub fn energy_auto(p: &ProfileFunction, tol: ToleranceSpec) -> Result<EnergyReport> {
    let mut rho_max = default_energy_cutoff(p.m(), tol.abs_tol);
    loop {
        match energy_report(p, tol, rho_max) {
            Err(ProfileError::TruncationTooShort { .. }) if rho_max < MAX_CUTOFF => {
                rho_max = (2.0 * rho_max).min(MAX_CUTOFF);
            }
            other => return other,
        }
    }
}

/// Minimizes the energy of the trial family over its free parameter
/// (`kappa0` for `m = 1`, `kappa1` for `m >= 2`) on `bracket`. `tol` controls
/// the location of the minimum; energies are integrated to `1e-13`.
pub fn optimize_trial(m: u32, bracket: Interval, tol: ToleranceSpec) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(ProfileError::BadParameter("m must be at least 1".into()));
    }
    let quad_tol = ToleranceSpec::new(1e-13, 1e-13, 20_000)?;
    let lo = if m == 1 { bracket.lo().max(f64::MIN_POSITIVE) } else { bracket.lo().max(0.0) };
    let bracket = Interval::new(lo, bracket.hi())?;

    // fixed cutoff for every kappa
    let probe = trial_profile(m, 0.5 * (bracket.lo() + bracket.hi()))?;
    let rho_max = energy_auto(&probe, quad_tol)?.rho_max;
    let rho_max = (2.0 * rho_max).min(MAX_CUTOFF);
    let mut failure = None;
    let objective = |kappa: f64| match trial_profile(m, kappa)
        .and_then(|p| energy(&p, quad_tol, rho_max))
    {
        Ok(e) => e,
        Err(err) => {
            failure.get_or_insert(err);
            f64::NAN
        }
    };
    let result = minimize_scalar(objective, bracket, tol);
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(result?)
}

/// Default search brackets: `[0.01, 1]` for `kappa0`, `[0, 20]` for `kappa1`.
pub fn default_trial_bracket(m: u32) -> Interval {
    if m == 1 {
        Interval::new(0.01, 1.0).expect("static bracket")
    } else {
        Interval::new(0.0, 20.0).expect("static bracket")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{analytic_profile, KAPPA0_REFERENCE};

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-12, 1e-12, 20_000).unwrap()
    }

    #[test]
    fn exact_m3_energy_is_quarter_pi() {
        let p = analytic_profile(3).unwrap();
        let e = energy(&p, tol(), default_energy_cutoff(3, 1e-12)).unwrap();
        assert!((e - std::f64::consts::FRAC_PI_4).abs() < 1e-11, "{e}");
    }

    #[test]
    fn trial_m1_energy_matches_oracle() {
        // mpmath quadrature to infinity, 40 digits
        let p = trial_profile(1, KAPPA0_REFERENCE).unwrap();
        let e = energy(&p, tol(), 12.0).unwrap();
        assert!((e - 1.393_979_349_562_91).abs() < 1e-11, "{e}");
    }

    #[test]
    fn short_cutoff_is_reported() {
        let p = analytic_profile(3).unwrap();
        let err = energy(&p, tol(), 5.0);
        assert!(matches!(err, Err(ProfileError::TruncationTooShort { .. })));
    }

    #[test]
    fn integrand_vanishes_at_origin() {
        for p in [analytic_profile(2).unwrap(), trial_profile(1, 0.3).unwrap()] {
            assert!(integrand(&p, 1e-6) < 1e-10);
        }
    }
}
