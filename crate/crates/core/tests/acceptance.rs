//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hedgehog_modes::fluctuation::{closed_form_ratio, potential_bracket, FluctuationPotential};
use hedgehog_modes::numerics::ToleranceSpec;
use hedgehog_modes::profile::{
    analytic_profile, default_shooting_tolerance, default_trial_bracket, ode_residual, optimize_trial,
    shoot_profile, trial_kappa2, trial_profile, KAPPA0_REFERENCE, KAPPA1_M4_REFERENCE,
};
use hedgehog_modes::spectrum::{
    bound_states, continuum_probe, fit_origin_exponent, gaussian_tail_check, origin_exponent,
    oscillator_reference, spectrum_table, RadialGrid, SpectrumTable, DEFAULT_BOX_SPACING,
};

type Outcome = Result<(bool, String), String>;

struct Runner {
    failed: Vec<u32>,
}

impl Runner {
    fn criterion(&mut self, id: u32, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = t.elapsed().as_secs_f64();
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {id:>2} {name:<28} {detail} [{secs:.2} s]");
        if !pass {
            self.failed.push(id);
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn m1_table(r0: f64) -> Result<SpectrumTable, String> {
    let v = FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE).map_err(err)?);
    let ls: Vec<u32> = (0..=8).collect();
    spectrum_table(&v, &ls, 5, &RadialGrid::default_bound(), r0).map_err(err)
}

fn mode(t: &SpectrumTable, n: u32, l: u32) -> &hedgehog_modes::spectrum::EigenMode {
    t.modes.iter().find(|m| m.n == n && m.l == l).expect("mode in table")
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_hedgehog"))
        .args(args)
        .env("HEDGEHOG_OUT_DIR", dir)
        .output()
        .map_err(err)?
        .status;
    match status.code() {
        Some(0 | 1) => Ok(()),
        other => Err(format!("{args:?} exited with {other:?}")),
    }
}

fn main() {
    let mut r = Runner { failed: Vec::new() };
    let tol = ToleranceSpec::new(1e-10, 1e-10, 500).expect("static tolerance");

    r.criterion(1, "variational kappa0 (m=1)", || {
        let t = Instant::now();
        let (k, _) = optimize_trial(1, default_trial_bracket(1), tol).map_err(err)?;
        let secs = t.elapsed().as_secs_f64();
        let pass = (k - KAPPA0_REFERENCE).abs() <= 5e-5 && secs < 5.0;
        Ok((pass, format!("kappa0 = {k:.6}, expected {KAPPA0_REFERENCE} +- 5e-5")))
    });

    r.criterion(2, "variational kappa1 (m=4)", || {
        let t = Instant::now();
        let (k, _) = optimize_trial(4, default_trial_bracket(4), tol).map_err(err)?;
        let secs = t.elapsed().as_secs_f64();
        let k2 = trial_kappa2(4);
        let pass = (k - KAPPA1_M4_REFERENCE).abs() <= 5e-4 && k2 == 36.0 / 19.0 && secs < 10.0;
        Ok((pass, format!("kappa1 = {k:.6}, expected {KAPPA1_M4_REFERENCE} +- 5e-4; kappa2 = {k2}")))
    });

    r.criterion(3, "exact-solution residuals", || {
        let mut worst = [0.0; 2];
        for (w, m) in worst.iter_mut().zip([2, 3]) {
            let p = analytic_profile(m).map_err(err)?;
            for rho in log_grid(1e-2, 50.0, 5000) {
                *w = f64::max(*w, ode_residual(&p, rho).map_err(err)?.abs());
            }
        }
        let pass = worst.iter().all(|&w| w < 1e-10);
        Ok((pass, format!("sup |residual| m=2 {:.1e}, m=3 {:.1e} (< 1e-10)", worst[0], worst[1])))
    });

    r.criterion(4, "shooting fidelity", || {
        let mut detail = Vec::new();
        let mut pass = true;
        for m in [2, 3] {
            let t = Instant::now();
            let p = shoot_profile(m, default_shooting_tolerance(), 50.0).map_err(err)?;
            let secs = t.elapsed().as_secs_f64();
            let exact = analytic_profile(m).map_err(err)?;
            let worst = (0..=20_000)
                .map(|i| 1e-3 * i as f64)
                .map(|rho| (p.q0(rho) - exact.q0(rho)).abs())
                .fold(0.0, f64::max);
            pass &= worst < 1e-6 && secs < 10.0;
            detail.push(format!("m={m} {worst:.1e} in {secs:.2} s"));
        }
        Ok((pass, format!("max |q0 - exact| {} (< 1e-6)", detail.join(", "))))
    });

    r.criterion(5, "eigensolver oscillator oracle", || {
        let t = Instant::now();
        let modes = bound_states(&FluctuationPotential::oscillator(), 0, 4, &RadialGrid::default_bound(), 1.0)
            .map_err(err)?;
        let secs = t.elapsed().as_secs_f64();
        let worst = modes
            .iter()
            .zip([1.5, 3.5, 5.5, 7.5])
            .map(|(m, e)| (m.omega2 / e - 1.0).abs())
            .fold(0.0, f64::max);
        Ok((worst < 1e-4 && secs < 5.0, format!("max relative error {worst:.1e} (< 1e-4)")))
    });

    let table = m1_table(1.0);

    r.criterion(6, "m=1 spectrum structure", || {
        let t = table.clone()?;
        let positive = t.modes.len() == 45 && t.modes.iter().all(|m| m.omega2 > 0.0);
        let column = (1..=5).all(|n| {
            (0..=8).all(|l| oscillator_reference(n, l, 1.0) == 2.0 * f64::from(n) + f64::from(l) - 0.5)
        });
        let not_monotone: Vec<u32> = (1..=5)
            .filter(|&n| {
                let dev: Vec<f64> = (2..=8)
                    .map(|l| (mode(&t, n, l).omega2 - oscillator_reference(n, l, 1.0)).abs())
                    .collect();
                !dev.windows(2).all(|w| w[1] < w[0])
            })
            .collect();
        let pass = positive && column && not_monotone.is_empty();
        Ok((
            pass,
            format!("positive {positive}, oscillator column {column}, deviation not monotone for n in {not_monotone:?}"),
        ))
    });

    r.criterion(7, "origin exponent", || {
        let t = table.clone()?;
        let mut worst: f64 = 0.0;
        for l in 0..=2 {
            let xi = fit_origin_exponent(mode(&t, 1, l)).map_err(err)?;
            worst = worst.max((xi / origin_exponent(l) - 1.0).abs());
        }
        Ok((worst < 0.02, format!("max relative error {:.2}% for l = 0..2 (< 2%)", 100.0 * worst)))
    });

    r.criterion(8, "gaussian tail (m=1)", || {
        let t = table.clone()?;
        let g = gaussian_tail_check(mode(&t, 1, 0)).map_err(err)?.g;
        Ok(((0.95..=1.05).contains(&g), format!("g = {g:.4} (in [0.95, 1.05])")))
    });

    r.criterion(9, "continuum for m=3", || {
        let v = FluctuationPotential::bracket(analytic_profile(3).map_err(err)?);
        let mut negative = 0;
        let mut powers = Vec::new();
        for l in 0..=2 {
            let probe = continuum_probe(&v, l, &[20.0, 40.0, 80.0], DEFAULT_BOX_SPACING, 1.0).map_err(err)?;
            negative += probe.levels.iter().map(|b| b.negative).sum::<usize>();
            powers.push(probe.power.ok_or("no power fit")?);
        }
        let pass = negative == 0 && powers.iter().all(|p| (-2.2..=-1.8).contains(p));
        Ok((pass, format!("{negative} negative eigenvalues, exponents {powers:.3?} (in [-2.2, -1.8])")))
    });

    r.criterion(10, "potential positivity", || {
        let profiles = [
            analytic_profile(2).map_err(err)?,
            analytic_profile(3).map_err(err)?,
            trial_profile(4, KAPPA1_M4_REFERENCE).map_err(err)?,
        ];
        let mut mins = Vec::new();
        for p in &profiles {
            let mut min = f64::INFINITY;
            for rho in log_grid(1e-3, 100.0, 5000) {
                min = min.min(potential_bracket(p, rho).map_err(err)?);
            }
            mins.push(min);
        }
        Ok((mins.iter().all(|&v| v > 0.0), format!("min v for m = 2, 3, 4: {:.2e}, {:.2e}, {:.2e}", mins[0], mins[1], mins[2])))
    });

    r.criterion(11, "r0 scaling", || {
        let a = table.clone()?;
        let b = m1_table(2.0)?;
        let worst = a
            .modes
            .iter()
            .zip(&b.modes)
            .map(|(x, y)| (4.0 * y.omega2 / x.omega2 - 1.0).abs())
            .fold(0.0, f64::max);
        Ok((worst < 1e-8, format!("max relative deviation {worst:.1e} (< 1e-8)")))
    });

    r.criterion(12, "closed-form ratio (m=3)", || {
        let s = closed_form_ratio(&analytic_profile(3).map_err(err)?, &log_grid(1e-3, 100.0, 5000)).map_err(err)?;
        let report = hedgehog_modes::cli::run_checks();
        let recorded = report.checks.iter().any(|c| c.name == "closed_form_ratio_m3" && c.detail.contains_key("measured"));
        Ok((
            s.relative_spread < 1e-8 && recorded,
            format!("ratio {:.12}, relative spread {:.1e} (< 1e-8), recorded in verify report {recorded}", s.mean, s.relative_spread),
        ))
    });

    r.criterion(13, "CLI determinism", || {
        let runs: [&[&str]; 6] = [
            &["profile", "--m", "1", "--method", "shoot"],
            &["profile", "--m", "4", "--optimize"],
            &["potential", "--m", "2", "--format", "json"],
            &["spectrum", "--m", "1", "--plot-stub"],
            &["spectrum", "--m", "3"],
            &["verify"],
        ];
        let a = tempfile::tempdir().map_err(err)?;
        let b = tempfile::tempdir().map_err(err)?;
        for args in runs {
            run_cli(a.path(), args)?;
            run_cli(b.path(), args)?;
        }
        let mut names: Vec<_> = std::fs::read_dir(a.path())
            .map_err(err)?
            .map(|e| e.map(|e| e.file_name()))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        names.sort();
        let mut differing = Vec::new();
        for name in &names {
            let x = std::fs::read(a.path().join(name)).map_err(err)?;
            let y = std::fs::read(b.path().join(name)).map_err(err)?;
            if x != y {
                differing.push(name.to_string_lossy().into_owned());
            }
        }
        Ok((
            differing.is_empty() && names.len() >= 7,
            format!("{} files compared, differing: {differing:?}", names.len()),
        ))
    });

    println!();
    if r.failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: {} of 13 criteria fail: {:?}", r.failed.len(), r.failed);
        std::process::exit(1);
    }
}
