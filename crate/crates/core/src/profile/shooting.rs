use super::{tail_params, FarTail, NumericProfile, ProfileError, ProfileFunction, Repr, Result};
use crate::numerics::{find_root, solve_ivp, solve_ivp_until, Interval, NumericsError, ToleranceSpec, Trajectory};

/// Series start of the integration; the field equation is singular at 0.
pub const RHO_START: f64 = 1e-3;
/// Sign-event threshold separating overshoot (`q0 < -EPS`) from undershoot
/// (`q0' > EPS`).
const EVENT_EPS: f64 = 1e-12;
/// Far radius used only to classify trajectories for `m >= 2`; deviations
/// from the separatrix grow like a power of `rho` there.
const CLASSIFY_RHO_POWER_LAW: f64 = 1e4;
const KAPPA_SCAN: (f64, f64, usize) = (0.02, 50.0, 48);

/// `q0 = 1 - kappa rho^2 + c4 rho^4` solves the field equation through
/// order `rho^2` when `c4 = (3 kappa^2 + m) / 10`.
fn series_c4(m: u32, kappa: f64) -> f64 {
    (3.0 * kappa * kappa + f64::from(m)) / 10.0
}

fn rhs(m: u32) -> impl Fn(f64, &[f64], &mut [f64]) {
    let mf = f64::from(m);
    let power = 2 * m as i32 - 1;
    move |rho, y, dy| {
        let q = y[0];
        dy[0] = y[1];
        dy[1] = -(1.0 - q) * (1.0 + q) * q / (rho * rho) + mf * rho * rho * q.powi(power);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    Overshoot(f64),
    Undershoot(f64),
    Undecided,
}

struct Shooter {
    m: u32,
    tol: ToleranceSpec,
    classify_end: f64,
}

impl Shooter {
    fn initial_state(&self, kappa: f64) -> [f64; 2] {
        let c4 = series_c4(self.m, kappa);
        let r = RHO_START;
        [
            1.0 - kappa * r * r + c4 * r.powi(4),
            -2.0 * kappa * r + 4.0 * c4 * r.powi(3),
        ]
    }

    fn integrate(&self, kappa: f64, end: f64) -> Result<Trajectory> {
        let y0 = self.initial_state(kappa);
        solve_ivp_until(
            rhs(self.m),
            &y0,
            Interval::new(RHO_START, end)?,
            self.tol,
            |_, y| y[0] < -EVENT_EPS || y[1] > EVENT_EPS,
        )
        .map_err(|source| ProfileError::ShootingDiverged {
            m: self.m,
            kappa,
            source,
        })
    }

    fn classify(&self, kappa: f64) -> Result<Outcome> {
        let traj = self.integrate(kappa, self.classify_end)?;
        if !traj.stopped() {
            return Ok(Outcome::Undecided);
        }
        let rho = traj.t_end();
        Ok(if traj.y_end()[0] < -EVENT_EPS {
            Outcome::Overshoot(rho)
        } else {
            Outcome::Undershoot(rho)
        })
    }

    /// Signed mismatch that vanishes on the separatrix: `+1/rho_event` for
    /// overshoot, `-1/rho_event` for undershoot, 0 when undecided.
    fn mismatch(&self, kappa: f64) -> Result<f64> {
        Ok(match self.classify(kappa)? {
            Outcome::Overshoot(rho) => 1.0 / rho,
            Outcome::Undershoot(rho) => -1.0 / rho,
            Outcome::Undecided => 0.0,
        })
    }
}

/// Solves the field equation by shooting on the origin curvature `kappa`.
///
/// Trajectories start from the series `1 - kappa rho^2 + c4 rho^4` at
/// `rho = 1e-3`. Too large a `kappa` drives `q0` through zero (overshoot),
/// too small a `kappa` turns `q0` back up (undershoot); the soliton is the
/// separatrix between the two, located by bracketed root finding on a
/// signed event radius. Since the separatrix is unstable, the bracketed
/// `kappa` is then refined by matching at `rho = 1` against an inward
/// integration started on the decaying tail family (Gaussian for `m = 1`,
/// power law for `m >= 2`). Beyond the inward start the leading tail is used.
pub fn shoot_profile(m: u32, tol: ToleranceSpec, rho_max: f64) -> Result<ProfileFunction> {
    if m == 0 {
        return Err(ProfileError::BadParameter("m must be at least 1".into()));
    }
    if !(rho_max >= 10.0 && rho_max.is_finite()) {
        return Err(ProfileError::BadParameter(format!(
            "shooting needs rho_max >= 10, got {rho_max}"
        )));
    }
    let shooter = Shooter {
        m,
        tol,
        classify_end: if m == 1 {
            rho_max.min(30.0)
        } else {
            rho_max.max(CLASSIFY_RHO_POWER_LAW)
        },
    };

    // coarse geometric scan for the first undershoot -> overshoot change
    let (lo, hi, n) = KAPPA_SCAN;
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut bracket = None;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..n {
        let kappa = lo * ratio.powi(i as i32);
        let mm = shooter.mismatch(kappa)?;
        if mm == 0.0 {
            bracket = Some((kappa, kappa));
            break;
        }
        if let Some((pk, pm)) = prev {
            if pm < 0.0 && mm > 0.0 {
                bracket = Some((pk, kappa));
                break;
            }
        }
        prev = Some((kappa, mm));
    }
    let (blo, bhi) = bracket.ok_or(ProfileError::NoBracket { m, lo, hi })?;

    let kappa = if blo == bhi {
        blo
    } else {
        let mut failure = None;
        let root_tol = ToleranceSpec::new(1e-300, f64::EPSILON, 400)?;
        let root = find_root(
            |k| match shooter.mismatch(k) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            Interval::new(blo, bhi)?,
            root_tol,
        );
        if let Some(err) = failure {
            return Err(err);
        }
        root?
    };

    build_profile(&shooter, kappa, rho_max)
}

/// Matching radius between the outward and inward integrations.
const RHO_MID: f64 = 1.0;
/// Inner edge of the inward integration for `m = 1`.
const RHO_FAR_GAUSSIAN: f64 = 10.0;
/// Inner edge of the inward integration for `m >= 2` (raised to `rho_max`).
const RHO_FAR_POWER: f64 = 1e3;
/// First inward start for `m >= 2`; later stages grow by `RHO_FAR_GROWTH`.
const RHO_FAR_START: f64 = 8.0;
const RHO_FAR_GROWTH: f64 = 4.0;
const NEWTON_MAX_ITER: usize = 40;

/// One-parameter family of decaying solutions near `rho_far`.
///
/// For `m >= 2` it is the power tail `A rho^(-xi) (1 + a rho^(-2 xi))` plus
/// the decaying linearized mode `b rho^s`; for `m = 1` it is
/// `b rho^(-1/2) exp(-rho^2/2)`.
#[derive(Debug, Clone, Copy)]
enum TailFamily {
    Power { amplitude: f64, xi: f64, a: f64, s: f64 },
    Gaussian,
}

impl TailFamily {
    fn new(m: u32) -> Self {
        match tail_params(m) {
            Ok(t) => {
                let (amp, xi) = (t.amplitude, t.exponent);
                // linearization about A rho^(-xi): rho^p -> (p(p-1) + 1 - c) rho^(p-2)
                let c = f64::from(2 * m - 1) * (xi * xi + xi + 1.0);
                let s = 0.5 * (1.0 - (4.0 * c - 3.0).sqrt());
                let p = -3.0 * xi;
                let denom = p * (p - 1.0) + 1.0 - c;
                let a = if denom.abs() > 1e-12 { amp * amp / denom } else { 0.0 };
                TailFamily::Power {
                    amplitude: amp,
                    xi,
                    a,
                    s,
                }
            }
            Err(_) => TailFamily::Gaussian,
        }
    }

    fn state(&self, b: f64, rho: f64) -> [f64; 2] {
        match *self {
            TailFamily::Power { amplitude, xi, a, s } => {
                let lead = amplitude * rho.powf(-xi);
                let corr = a * lead * rho.powf(-2.0 * xi);
                let mode = b * rho.powf(s);
                [lead + corr + mode, (-xi * lead - 3.0 * xi * corr + s * mode) / rho]
            }
            TailFamily::Gaussian => {
                let q = b * rho.powf(-0.5) * (-0.5 * rho * rho).exp();
                [q, q * (-0.5 / rho - rho)]
            }
        }
    }

    /// Mode amplitude `b` for which the family passes through `q` at `rho`.
    fn amplitude_through(&self, q: f64, rho: f64) -> f64 {
        match *self {
            TailFamily::Power { s, .. } => (q - self.state(0.0, rho)[0]) / rho.powf(s),
            TailFamily::Gaussian => q / self.scale(rho),
        }
    }

    /// Typical size of `q0` at `rho`, used to scale absolute tolerances.
    fn scale(&self, rho: f64) -> f64 {
        match *self {
            TailFamily::Power { amplitude, xi, .. } => amplitude * rho.powf(-xi),
            TailFamily::Gaussian => rho.powf(-0.5) * (-0.5 * rho * rho).exp(),
        }
    }
}

struct Matcher<'a> {
    shooter: &'a Shooter,
    family: TailFamily,
    rho_far: f64,
}

impl Matcher<'_> {
    fn outward(&self, kappa: f64) -> Result<Trajectory> {
        let y0 = self.shooter.initial_state(kappa);
        solve_ivp(rhs(self.shooter.m), &y0, Interval::new(RHO_START, RHO_MID)?, self.shooter.tol)
            .map_err(|source| self.diverged(kappa, source))
    }

    /// Integrates from `rho_far` down to the matching radius in `t = -rho`.
    fn inward(&self, b: f64) -> Result<Trajectory> {
        let f = rhs(self.shooter.m);
        let y0 = self.family.state(b, self.rho_far);
        solve_ivp(
            move |t, y, dy| {
                f(-t, y, dy);
                dy[0] = -dy[0];
                dy[1] = -dy[1];
            },
            &y0,
            Interval::new(-self.rho_far, -RHO_MID)?,
            ToleranceSpec {
                abs_tol: self.shooter.tol.abs_tol * self.family.scale(self.rho_far).min(1.0),
                ..self.shooter.tol
            },
        )
        .map_err(|source| self.diverged(b, source))
    }

    fn diverged(&self, kappa: f64, source: NumericsError) -> ProfileError {
        ProfileError::ShootingDiverged {
            m: self.shooter.m,
            kappa,
            source,
        }
    }

    fn residual(&self, kappa: f64, b: f64) -> Result<[f64; 2]> {
        let out = self.outward(kappa)?;
        let inw = self.inward(b)?;
        let (yo, yi) = (out.y_end(), inw.y_end());
        Ok([yo[0] - yi[0], yo[1] - yi[1]])
    }

    /// Damped Newton iteration on the matching conditions in `(kappa, b)`.
    fn solve(&self, mut kappa: f64, mut b: f64) -> Result<(f64, f64)> {
        let norm = |r: [f64; 2]| r[0].hypot(r[1]);
        let mut r = self.residual(kappa, b)?;
        for _ in 0..NEWTON_MAX_ITER {
            let hk = 1e-7 * kappa.abs().max(1e-3);
            let hb = 1e-7 * b.abs().max(1.0);
            let rk = self.residual(kappa + hk, b)?;
            let rb = self.residual(kappa, b + hb)?;
            let j = [
                [(rk[0] - r[0]) / hk, (rb[0] - r[0]) / hb],
                [(rk[1] - r[1]) / hk, (rb[1] - r[1]) / hb],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let dk = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
            let db = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;

            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..12 {
                let (k1, b1) = (kappa + step * dk, b + step * db);
                if let Ok(r1) = self.residual(k1, b1) {
                    if norm(r1) < norm(r) || norm(r1) == 0.0 {
                        accepted = Some((k1, b1, r1));
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((k1, b1, r1)) = accepted else { break };
            let small = (k1 - kappa).abs() <= 4.0 * f64::EPSILON * kappa.abs()
                && (b1 - b).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0);
            (kappa, b, r) = (k1, b1, r1);
            if small {
                break;
            }
        }
        if norm(r).is_nan() || norm(r) >= 1e-8 {
            return Err(self.diverged(
                kappa,
                NumericsError::NonConvergence {
                    what: "two-sided matching",
                    iterations: NEWTON_MAX_ITER,
                },
            ));
        }
        Ok((kappa, b))
    }
}

fn build_profile(shooter: &Shooter, kappa_guess: f64, rho_max: f64) -> Result<ProfileFunction> {
    let m = shooter.m;
    let family = TailFamily::new(m);
    let (start, rho_far) = match family {
        TailFamily::Gaussian => (RHO_FAR_GAUSSIAN, RHO_FAR_GAUSSIAN),
        TailFamily::Power { .. } => (RHO_FAR_START, rho_max.max(RHO_FAR_POWER)),
    };

    // seed the mode amplitude from the bracketed trajectory, then push the
    // inward start outwards in stages, carrying (kappa, b) along
    let seed_rho = match family {
        TailFamily::Gaussian => 3.0,
        TailFamily::Power { .. } => start,
    };
    let seed = shooter.integrate(kappa_guess, seed_rho)?;
    let seed_rho = if seed.stopped() { 0.5 * seed.t_end() } else { seed_rho };
    let mut b = family.amplitude_through(seed.eval(seed_rho)[0], seed_rho);
    let mut kappa = kappa_guess;
    let mut matcher = Matcher {
        shooter,
        family,
        rho_far: start,
    };
    loop {
        (kappa, b) = matcher.solve(kappa, b)?;
        if matcher.rho_far >= rho_far {
            break;
        }
        matcher.rho_far = (matcher.rho_far * RHO_FAR_GROWTH).min(rho_far);
    }

    let out = matcher.outward(kappa)?;
    let inw = matcher.inward(b)?;
    let mut rho = out.times();
    let mut q: Vec<f64> = out.states().iter().map(|y| y[0]).collect();
    let mut dq: Vec<f64> = out.states().iter().map(|y| y[1]).collect();
    let mut d2q: Vec<f64> = out.derivatives().iter().map(|d| d[1]).collect();
    let (ti, yi, di) = (inw.times(), inw.states(), inw.derivatives());
    for k in (0..ti.len().saturating_sub(1)).rev() {
        rho.push(-ti[k]);
        q.push(yi[k][0]);
        dq.push(yi[k][1]);
        d2q.push(-di[k][1]);
    }

    let q_far = *q.last().expect("inward nodes");
    let tail = match family {
        TailFamily::Power { xi, .. } => FarTail::Power {
            coef: q_far * rho_far.powf(xi),
            xi,
        },
        TailFamily::Gaussian => FarTail::Gaussian { coef: b },
    };

    Ok(ProfileFunction {
        m,
        repr: Repr::Numeric(Box::new(NumericProfile {
            kappa,
            c4: series_c4(m, kappa),
            rho,
            q,
            dq,
            d2q,
            rho_match: rho_far,
            tail,
            rho_max,
        })),
    })
}

/// Default integration tolerances for shooting.
pub fn default_shooting_tolerance() -> ToleranceSpec {
    ToleranceSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_iter: 1_000_000,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{analytic_profile, ode_residual, ProfileKind};

    #[test]
    fn series_satisfies_equation_to_second_order() {
        for m in 1..5 {
            for kappa in [0.3, 0.5, 1.2] {
                let c4 = series_c4(m, kappa);
                let r: f64 = 1e-2;
                let q = 1.0 - kappa * r * r + c4 * r.powi(4);
                let d2q = -2.0 * kappa + 12.0 * c4 * r * r;
                let res = d2q + (1.0 - q * q) * q / (r * r) - f64::from(m) * r * r * q.powi(2 * m as i32 - 1);
                assert!(res.abs() < 1e-6, "m={m} kappa={kappa}: {res}");
            }
        }
    }

    #[test]
    fn m3_separatrix_curvature_is_one_half() {
        let p = shoot_profile(3, default_shooting_tolerance(), 50.0).unwrap();
        assert_eq!(p.kind(), ProfileKind::Numeric);
        assert!((p.params()["kappa"] - 0.5).abs() < 1e-9, "{:?}", p.params());
        assert!((p.origin_curvature() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn m3_shooting_matches_exact_solution() {
        let p = shoot_profile(3, default_shooting_tolerance(), 50.0).unwrap();
        let exact = analytic_profile(3).unwrap();
        let worst = (0..=2000)
            .map(|i| 0.01 * i as f64)
            .map(|r| (p.q0(r) - exact.q0(r)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "max deviation {worst}");
        assert!(ode_residual(&p, 1.3).unwrap().abs() < 1e-6);
        p.check_invariants().unwrap();
    }

    #[test]
    fn m2_shooting_matches_exact_solution() {
        let p = shoot_profile(2, default_shooting_tolerance(), 50.0).unwrap();
        let exact = analytic_profile(2).unwrap();
        for i in 0..=500 {
            let r = 0.1 * i as f64;
            assert!((p.q0(r) - exact.q0(r)).abs() < 1e-8, "rho = {r}");
        }
        assert!((p.origin_curvature() - exact.origin_curvature()).abs() < 1e-9);
    }

    #[test]
    fn m1_separatrix_matches_oracle() {
        // DOP853 (rtol 1e-13) bisection on the overshoot/undershoot boundary
        let p = shoot_profile(1, default_shooting_tolerance(), 20.0).unwrap();
        assert!((p.origin_curvature() - 0.619_503_687_328).abs() < 1e-9);
        assert!((p.q0(1.0) - 0.548_555_561_141_6).abs() < 1e-9);
        assert!((p.q0(2.0) - 0.102_306_608_778_5).abs() < 1e-9);
        p.check_invariants().unwrap();
    }

    #[test]
    fn rejects_short_domain() {
        assert!(matches!(
            shoot_profile(2, default_shooting_tolerance(), 5.0),
            Err(ProfileError::BadParameter(_))
        ));
    }
}
