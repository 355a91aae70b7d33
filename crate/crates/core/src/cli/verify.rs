use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::fluctuation::{closed_form_ratio, potential_bracket, FluctuationPotential};
use crate::numerics::ToleranceSpec;
use crate::profile::{
    analytic_profile, default_shooting_tolerance, default_trial_bracket, ode_residual, optimize_trial,
    shoot_profile, trial_kappa2, trial_profile, KAPPA0_REFERENCE, KAPPA1_M4_REFERENCE,
};
use crate::spectrum::{
    bound_states, continuum_probe, fit_origin_exponent, gaussian_tail_check, origin_exponent,
    oscillator_reference, spectrum_table, RadialGrid, SpectrumTable, DEFAULT_BOX_SPACING,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    /// `false` for measurements that are recorded but not tested.
    pub asserted: bool,
    #[serde(flatten)]
    pub detail: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: String,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub checks: Vec<CheckResult>,
}

type Outcome = Result<(bool, Value), String>;

fn check(name: &str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let (pass, detail) = match f() {
        Ok((pass, detail)) => (pass, detail),
        Err(e) => (false, json!({ "error": e })),
    };
    let detail = match detail {
        Value::Object(map) => map,
        other => Map::from_iter([("value".to_string(), other)]),
    };
    CheckResult {
        name: name.into(),
        pass,
        asserted: true,
        detail,
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn m1_table(r0: f64) -> Result<SpectrumTable, String> {
    let v = FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE).map_err(err)?);
    let ls: Vec<u32> = (0..=8).collect();
    spectrum_table(&v, &ls, 5, &RadialGrid::default_bound(), r0).map_err(err)
}

/// Runs every verification check; failures are reported, never raised.
pub fn run_checks() -> VerifyReport {
    let mut checks = Vec::new();
    let opt_tol = ToleranceSpec::new(1e-10, 1e-10, 500).expect("static tolerance");

    checks.push(check("kappa0", || {
        let (k, e) = optimize_trial(1, default_trial_bracket(1), opt_tol).map_err(err)?;
        let pass = (k - KAPPA0_REFERENCE).abs() <= 5e-5;
        Ok((pass, json!({ "expected": KAPPA0_REFERENCE, "got": k, "tolerance": 5e-5, "energy": e })))
    }));
    checks.push(check("kappa1_m4", || {
        let (k, e) = optimize_trial(4, default_trial_bracket(4), opt_tol).map_err(err)?;
        let pass = (k - KAPPA1_M4_REFERENCE).abs() <= 5e-4;
        Ok((pass, json!({ "expected": KAPPA1_M4_REFERENCE, "got": k, "tolerance": 5e-4, "energy": e })))
    }));
    checks.push(check("kappa2_m4", || {
        let got = trial_kappa2(4);
        Ok((got == 36.0 / 19.0, json!({ "expected": 36.0 / 19.0, "got": got })))
    }));

    for m in [2, 3] {
        checks.push(check(&format!("residual_m{m}_max"), || {
            let p = analytic_profile(m).map_err(err)?;
            let worst = log_grid(1e-2, 50.0, 2000)
                .into_iter()
                .map(|r| ode_residual(&p, r).map(f64::abs))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((worst < 1e-10, json!({ "bound": 1e-10, "got": worst })))
        }));
    }
    for m in [2, 3] {
        checks.push(check(&format!("shooting_m{m}_max_deviation"), || {
            let p = shoot_profile(m, default_shooting_tolerance(), 50.0).map_err(err)?;
            let exact = analytic_profile(m).map_err(err)?;
            let worst = (0..=2000)
                .map(|i| 0.01 * i as f64)
                .map(|r| (p.q0(r) - exact.q0(r)).abs())
                .fold(0.0, f64::max);
            Ok((worst < 1e-6, json!({ "bound": 1e-6, "got": worst, "kappa": p.origin_curvature() })))
        }));
    }

    checks.push(check("oscillator_oracle", || {
        let modes = bound_states(&FluctuationPotential::oscillator(), 0, 4, &RadialGrid::default_bound(), 1.0)
            .map_err(err)?;
        let got: Vec<f64> = modes.iter().map(|m| m.omega2).collect();
        let expected: Vec<f64> = (1..=4).map(|n| oscillator_reference(n, 0, 1.0)).collect();
        let worst = got.iter().zip(&expected).map(|(g, e)| (g / e - 1.0).abs()).fold(0.0, f64::max);
        Ok((worst < 1e-4, json!({ "expected": expected, "got": got, "relative_tolerance": 1e-4 })))
    }));

    let table = m1_table(1.0);
    checks.push(check("m1_positivity", || {
        let t = table.clone()?;
        let min = t.modes.iter().map(|m| m.omega2).fold(f64::INFINITY, f64::min);
        Ok((min > 0.0, json!({ "min_omega2": min, "modes": t.modes.len() })))
    }));
    checks.push(check("m1_oscillator_approach", || {
        let t = table.clone()?;
        let mut detail = Map::new();
        let mut pass = true;
        for n in 1..=5 {
            let dev: Vec<f64> = (2..=8)
                .map(|l| {
                    let mode = t.modes.iter().find(|m| m.n == n && m.l == l).expect("mode in table");
                    (mode.omega2 - oscillator_reference(n, l, 1.0)).abs()
                })
                .collect();
            pass &= dev.windows(2).all(|w| w[1] < w[0]);
            detail.insert(format!("n{n}_deviation_l2_to_l8"), json!(dev));
        }
        Ok((pass, Value::Object(detail)))
    }));
    checks.push(check("m1_oscillator_column", || {
        let pass = (1..=5).all(|n| {
            (0..=8).all(|l| oscillator_reference(n, l, 1.0) == 2.0 * f64::from(n) + f64::from(l) - 0.5)
        });
        Ok((pass, json!({ "formula": "2n + l - 1/2" })))
    }));
    checks.push(check("origin_exponent", || {
        let t = table.clone()?;
        let mut detail = Map::new();
        let mut pass = true;
        for l in 0..=2 {
            let mode = t.modes.iter().find(|m| m.n == 1 && m.l == l).expect("mode in table");
            let fit = fit_origin_exponent(mode).map_err(err)?;
            let exact = origin_exponent(l);
            pass &= (fit / exact - 1.0).abs() < 0.02;
            detail.insert(format!("l{l}"), json!({ "expected": exact, "got": fit }));
        }
        Ok((pass, Value::Object(detail)))
    }));
    checks.push(check("gaussian_tail_m1", || {
        let t = table.clone()?;
        let mode = t.modes.iter().find(|m| m.n == 1 && m.l == 0).expect("mode in table");
        let fit = gaussian_tail_check(mode).map_err(err)?;
        Ok(((0.95..=1.05).contains(&fit.g), json!({ "range": [0.95, 1.05], "g": fit.g, "sigma": fit.sigma })))
    }));
    checks.push(check("r0_scaling", || {
        let a = table.clone()?;
        let b = m1_table(2.0)?;
        let worst = a
            .modes
            .iter()
            .zip(&b.modes)
            .map(|(x, y)| (4.0 * y.omega2 / x.omega2 - 1.0).abs())
            .fold(0.0, f64::max);
        Ok((worst < 1e-8, json!({ "relative_tolerance": 1e-8, "got": worst })))
    }));

    checks.push(check("continuum_m3", || {
        let v = FluctuationPotential::bracket(analytic_profile(3).map_err(err)?);
        let probe = continuum_probe(&v, 0, &[20.0, 40.0, 80.0], DEFAULT_BOX_SPACING, 1.0).map_err(err)?;
        let positive = probe.levels.iter().all(|b| b.lambda_min > 0.0 && b.negative == 0);
        let pass = positive && probe.power.is_some_and(|p| (-2.2..=-1.8).contains(&p));
        Ok((pass, json!({ "levels": probe.levels, "power": probe.power, "range": [-2.2, -1.8] })))
    }));
    checks.push(check("potential_positivity", || {
        let profiles = [
            analytic_profile(2).map_err(err)?,
            analytic_profile(3).map_err(err)?,
            trial_profile(4, KAPPA1_M4_REFERENCE).map_err(err)?,
        ];
        let mut detail = Map::new();
        let mut pass = true;
        for p in &profiles {
            let min = log_grid(1e-3, 100.0, 2000)
                .into_iter()
                .map(|r| potential_bracket(p, r))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            pass &= min > 0.0;
            detail.insert(format!("m{}_min", p.m()), json!(min));
        }
        Ok((pass, Value::Object(detail)))
    }));

    checks.push(check("closed_form_ratio_m3", || {
        let s = closed_form_ratio(&analytic_profile(3).map_err(err)?, &log_grid(1e-3, 100.0, 2000)).map_err(err)?;
        Ok((
            s.relative_spread < 1e-8,
            json!({ "measured": s.mean, "relative_spread": s.relative_spread, "constant_within": 1e-8 }),
        ))
    }));
    let mut m2 = check("closed_form_ratio_m2", || {
        let s = closed_form_ratio(&analytic_profile(2).map_err(err)?, &log_grid(1e-3, 100.0, 2000)).map_err(err)?;
        Ok((true, json!({ "mean": s.mean, "min": s.min, "max": s.max, "relative_spread": s.relative_spread })))
    });
    m2.asserted = false;
    checks.push(m2);

    let first_failure = checks.iter().find(|c| !c.pass).map(|c| c.name.clone());
    VerifyReport {
        version: format!("hedgehog-modes {}", super::VERSION),
        passed: first_failure.is_none(),
        first_failure,
        checks,
    }
}
