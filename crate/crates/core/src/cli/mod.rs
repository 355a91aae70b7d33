//! Command-line front end.
//!
//! Every subcommand writes one data file (commented CSV or JSON) and prints
//! a JSON summary on stdout. Identical configurations give byte-identical
//! files. Exit codes: 0 success, 1 numerical failure, 2 usage error.

mod args;
pub mod output;
mod verify;

pub use args::{main_with_args, Cli};
pub use verify::{run_checks, CheckResult, VerifyReport};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::fluctuation::{potential_bracket, potential_closed_form, Convention, FluctuationPotential};
use crate::numerics::ToleranceSpec;
use crate::profile::{
    analytic_profile, default_shooting_tolerance, default_trial_bracket, energy_auto, optimize_trial,
    shoot_profile, trial_profile, ProfileError, ProfileFunction, KAPPA0_REFERENCE,
};
use crate::spectrum::{
    continuum_probe, oscillator_reference, spectrum_table, RadialGrid, SpectrumError,
};
use output::{plot_stub, round_json, write_file, Cell, Table};

/// Environment variable naming the directory for output files without `--out`.
pub const OUT_DIR_ENV: &str = "HEDGEHOG_OUT_DIR";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Unsupported { .. } | ProfileError::BadParameter(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::BadGrid(_) | SpectrumError::BadParameter(_) | SpectrumError::Unsupported { .. } => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Profile,
    Potential,
    Spectrum,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Profile => "profile",
            Command::Potential => "potential",
            Command::Spectrum => "spectrum",
            Command::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Trial,
    Shoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Inclusive integer range written `a..b` (or a single `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumRange {
    pub lo: u32,
    pub hi: u32,
}

impl QuantumRange {
    pub fn new(lo: u32, hi: u32) -> std::result::Result<Self, String> {
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(Self { lo, hi })
    }

    pub fn values(&self) -> Vec<u32> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for QuantumRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("expected a non-negative integer or a..b, got '{s}'"))
        };
        match s.split_once("..") {
            Some((a, b)) => Self::new(parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                Self::new(v, v)
            }
        }
    }
}

impl fmt::Display for QuantumRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl Serialize for QuantumRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Complete description of one run. Unset optional fields take the
/// per-command defaults listed on [`RunConfig::new`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub m: u32,
    pub method: Option<Method>,
    pub kappa: Option<f64>,
    pub optimize: bool,
    pub r0: f64,
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    pub points: Option<usize>,
    pub l: Option<QuantumRange>,
    pub n: QuantumRange,
    pub boxes: Vec<f64>,
    pub spacing: f64,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub plot_stub: bool,
}

impl RunConfig {
    /// Defaults: `m = 1`, `r0 = 1`, method by `m` (trial for `m = 1` and
    /// `m >= 4`, analytic for `m = 2, 3`), `n = 1..5`, `l = 0..8` for bound
    /// states and `0..0` for continuum probes, boxes `20, 40, 80` at spacing
    /// `0.01`, CSV output.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            m: 1,
            method: None,
            kappa: None,
            optimize: false,
            r0: 1.0,
            rho_min: None,
            rho_max: None,
            points: None,
            l: None,
            n: QuantumRange { lo: 1, hi: 5 },
            boxes: vec![20.0, 40.0, 80.0],
            spacing: crate::spectrum::DEFAULT_BOX_SPACING,
            abs_tol: None,
            rel_tol: None,
            format: Format::Csv,
            out: None,
            plot_stub: false,
        }
    }

    fn method(&self) -> Method {
        self.method.unwrap_or(match self.m {
            2 | 3 => Method::Analytic,
            _ => Method::Trial,
        })
    }

    fn out_path(&self, stem: &str, format: Format) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
            dir.join(format!("{stem}.{}", format.extension()))
        })
    }

    fn tolerance(&self, default: ToleranceSpec) -> Result<ToleranceSpec> {
        ToleranceSpec::new(
            self.abs_tol.unwrap_or(default.abs_tol),
            self.rel_tol.unwrap_or(default.rel_tol),
            default.max_iter,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(CliError::Usage("m must be at least 1".into()));
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(CliError::Usage(format!("r0 must be positive, got {}", self.r0)));
        }
        if self.n.lo == 0 {
            return Err(CliError::Usage("radial quantum numbers start at n = 1".into()));
        }
        if self.kappa.is_some() && self.optimize {
            return Err(CliError::Usage("--kappa and --optimize are mutually exclusive".into()));
        }
        if let Some(p) = self.points.filter(|&p| p < 2) {
            return Err(CliError::Usage(format!("need at least 2 points, got {p}")));
        }
        Ok(())
    }
}

/// Result of a run: the file written and the summary printed on stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub path: PathBuf,
    pub summary: Value,
    /// Exit code; nonzero only for a failed verification.
    pub code: i32,
}

/// Profile selected by `cfg`, with a description for output headers.
fn resolve_profile(cfg: &RunConfig, support: f64) -> Result<(ProfileFunction, Value)> {
    let m = cfg.m;
    let method = cfg.method();
    if method != Method::Trial && (cfg.kappa.is_some() || cfg.optimize) {
        return Err(CliError::Usage("--kappa and --optimize apply to --method trial only".into()));
    }
    let mut info = json!({ "method": method });
    let profile = match method {
        Method::Analytic => analytic_profile(m).map_err(|e| match e {
            ProfileError::Unsupported { .. } => CliError::Usage(format!("no analytic solution for m={m}")),
            other => other.into(),
        })?,
        Method::Trial => {
            let kappa = match cfg.kappa {
                Some(k) => k,
                None if m == 1 && !cfg.optimize => KAPPA0_REFERENCE,
                None => {
                    let tol = cfg.tolerance(ToleranceSpec::new(1e-10, 1e-10, 500).expect("static tolerance"))?;
                    let (k, e) = optimize_trial(m, default_trial_bracket(m), tol)?;
                    info["optimized"] = json!({ "kappa": k, "energy": e });
                    k
                }
            };
            trial_profile(m, kappa)?
        }
        Method::Shoot => {
            let tol = cfg.tolerance(default_shooting_tolerance())?;
            shoot_profile(m, tol, support.max(20.0))?
        }
    };
    info["kind"] = json!(profile.kind().to_string());
    info["params"] = json!(profile.params());
    Ok((profile, round_json(info)))
}

fn header(table: &mut Table, cfg: &RunConfig) {
    table.meta("version", format!("hedgehog-modes {VERSION}"));
    table.meta("command", cfg.command.to_string());
    table.meta("config", cfg);
}

/// Output radii: `rho_max * i / points` for `i = 1..=points`, or `points`
/// evenly spaced radii from `rho_min` to `rho_max` when `rho_min` is given.
fn output_grid(cfg: &RunConfig, default_max: f64, default_points: usize, allow_zero: bool) -> Result<Vec<f64>> {
    let rho_max = cfg.rho_max.unwrap_or(default_max);
    let points = cfg.points.unwrap_or(default_points);
    match cfg.rho_min {
        None => Ok((1..=points).map(|i| rho_max * i as f64 / points as f64).collect()),
        Some(lo) if (lo > 0.0 || (allow_zero && lo == 0.0)) && lo < rho_max => Ok((0..points)
            .map(|i| if i + 1 == points { rho_max } else { lo + (rho_max - lo) * i as f64 / (points - 1) as f64 })
            .collect()),
        Some(lo) => Err(CliError::Usage(format!("invalid radial range [{lo}, {rho_max}]"))),
    }
}

fn finish(cfg: &RunConfig, stem: &str, table: &Table, plot: (usize, &[usize]), summary: Value) -> Result<Outcome> {
    let path = cfg.out_path(stem, cfg.format);
    write_file(&path, &table.render(cfg.format))?;
    if cfg.plot_stub && cfg.format == Format::Csv {
        let script = plot_stub(&path, &table.columns, plot.0, plot.1);
        write_file(&path.with_extension("gp"), &script)?;
    }
    Ok(Outcome {
        path,
        summary,
        code: 0,
    })
}

/// Writes `(rho, q0, alpha, dq0)` rows of the selected profile.
pub fn run_profile(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let rhos = output_grid(cfg, 10.0, 500, true)?;
    let (profile, info) = resolve_profile(cfg, *rhos.last().expect("non-empty grid"))?;

    let mut table = Table::new(&["rho", "q0", "alpha", "dq0"]);
    header(&mut table, cfg);
    table.meta("profile", &info);
    for &r in &rhos {
        table.push(vec![r.into(), profile.q0(r).into(), profile.alpha(r).into(), profile.dq0(r).into()]);
    }

    let energy_tol = ToleranceSpec::new(1e-10, 1e-10, 50_000).expect("static tolerance");
    let energy = energy_auto(&profile, energy_tol)?;
    let summary = round_json(json!({
        "m": cfg.m,
        "profile": info,
        "energy": energy.value,
        "origin_curvature": profile.origin_curvature(),
    }));
    finish(cfg, &format!("profile_m{}", cfg.m), &table, (0, &[1]), summary)
}

/// Writes `(rho, v_bracket[, v_closed_form])` rows.
pub fn run_potential(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let rhos = output_grid(cfg, 20.0, 1000, false)?;
    let (profile, info) = resolve_profile(cfg, *rhos.last().expect("non-empty grid"))?;
    let closed = matches!(cfg.m, 2 | 3);

    let columns: &[&'static str] = if closed {
        &["rho", "v_bracket", "v_closed_form"]
    } else {
        &["rho", "v_bracket"]
    };
    let mut table = Table::new(columns);
    header(&mut table, cfg);
    table.meta("profile", &info);
    table.meta("convention", Convention::Bracket.to_string());
    if closed {
        table.meta("v_closed_form_convention", Convention::ClosedForm.to_string());
    }
    table.meta("units", "v(rho) with rho = r/r0; V(r) = v/r0^2");

    let mut min_v = f64::INFINITY;
    for &r in &rhos {
        let v = potential_bracket(&profile, r).map_err(|e| CliError::Numerical(e.to_string()))?;
        min_v = min_v.min(v);
        let mut row = vec![r.into(), v.into()];
        if closed {
            let c = potential_closed_form(cfg.m, r).map_err(|e| CliError::Numerical(e.to_string()))?;
            row.push(c.into());
        }
        table.push(row);
    }
    let summary = round_json(json!({
        "m": cfg.m,
        "profile": info,
        "convention": Convention::Bracket,
        "min_v_bracket": min_v,
        "tail": crate::fluctuation::tail_coefficient(cfg.m),
    }));
    let ys: &[usize] = if closed { &[1, 2] } else { &[1] };
    finish(cfg, &format!("potential_m{}", cfg.m), &table, (0, ys), summary)
}

/// Bound states for `m = 1`, box-scaling continuum probe for `m >= 2`.
pub fn run_spectrum(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    if cfg.m == 1 {
        spectrum_bound(cfg)
    } else {
        spectrum_continuum(cfg)
    }
}

fn spectrum_bound(cfg: &RunConfig) -> Result<Outcome> {
    let grid = RadialGrid::new(
        cfg.rho_min.unwrap_or(1e-5),
        cfg.rho_max.unwrap_or(12.0),
        cfg.points.unwrap_or(4000),
    )?;
    let (profile, info) = resolve_profile(cfg, grid.rho_max())?;
    let v = FluctuationPotential::bracket(profile);
    let ls = cfg.l.unwrap_or(QuantumRange { lo: 0, hi: 8 });
    let table_data = spectrum_table(&v, &ls.values(), cfg.n.hi, &grid, cfg.r0)?;

    let mut table = Table::new(&["m", "l", "n", "omega2", "omega2_raw", "omega2_oscillator", "nodes"]);
    header(&mut table, cfg);
    table.meta("profile", &info);
    table.meta("convention", Convention::Bracket.to_string());
    table.meta("units", "omega2 in 1/r0^2 (r0 as configured)");
    table.meta(
        "grid",
        json!({
            "rho_min": grid.rho_min(),
            "rho_max": grid.rho_max(),
            "n_points": grid.n_points(),
            "h": grid.h(),
            "refined_points": grid.refined().n_points(),
        }),
    );
    table.meta(
        "solver",
        "three-point differences, Dirichlet walls, Sturm bisection to 2 ulp, Richardson over h and h/2",
    );
    let mut max_err: f64 = 0.0;
    let mut min_omega2 = f64::INFINITY;
    for mode in table_data.modes.iter().filter(|md| md.n >= cfg.n.lo) {
        max_err = max_err.max(mode.error_estimate);
        min_omega2 = min_omega2.min(mode.omega2);
        table.push(vec![
            cfg.m.into(),
            mode.l.into(),
            mode.n.into(),
            mode.omega2.into(),
            mode.omega2_raw.into(),
            oscillator_reference(mode.n, mode.l, cfg.r0).into(),
            mode.nodes.into(),
        ]);
    }
    table.meta("max_error_estimate", max_err);
    let summary = round_json(json!({
        "m": cfg.m,
        "profile": info,
        "modes": table.rows.len(),
        "min_omega2": min_omega2,
        "max_error_estimate": max_err,
    }));
    finish(cfg, &format!("spectrum_m{}", cfg.m), &table, (2, &[3, 5]), summary)
}

fn spectrum_continuum(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.boxes.is_empty() {
        return Err(CliError::Usage("--boxes needs at least one box size".into()));
    }
    let largest = cfg.boxes.iter().copied().fold(0.0, f64::max);
    let (profile, info) = resolve_profile(cfg, largest)?;
    let v = FluctuationPotential::bracket(profile);
    let ls = cfg.l.unwrap_or(QuantumRange { lo: 0, hi: 0 });

    let mut table = Table::new(&["m", "l", "rho_max", "lambda_min", "negative"]);
    header(&mut table, cfg);
    table.meta("profile", &info);
    table.meta("convention", Convention::Bracket.to_string());
    table.meta("units", "lambda_min in 1/r0^2 (r0 as configured)");
    let mut powers = serde_json::Map::new();
    for l in ls.values() {
        let probe = continuum_probe(&v, l, &cfg.boxes, cfg.spacing, cfg.r0)?;
        for b in &probe.levels {
            table.push(vec![cfg.m.into(), l.into(), b.rho_max.into(), b.lambda_min.into(), b.negative.into()]);
        }
        powers.insert(format!("l{l}"), json!(probe.power));
    }
    let powers = round_json(Value::Object(powers));
    table.meta("fitted_power", &powers);
    let summary = round_json(json!({
        "m": cfg.m,
        "profile": info,
        "fitted_power": powers,
        "bound_states": table.rows.iter().any(|r| r[4] != Cell::Int(0)),
    }));
    finish(cfg, &format!("spectrum_m{}", cfg.m), &table, (2, &[3]), summary)
}

/// Runs the verification checks and writes the JSON report; the exit code
/// is 0 iff every check passes.
pub fn run_verify(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let report = run_checks();
    let path = cfg.out_path("verify", Format::Json);
    let doc = round_json(serde_json::to_value(&report).expect("report serializes"));
    let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
    text.push('\n');
    write_file(&path, &text)?;
    let code = if report.passed { 0 } else { 1 };
    Ok(Outcome {
        path,
        summary: json!({ "passed": report.passed, "first_failure": report.first_failure }),
        code,
    })
}

/// Dispatches on `cfg.command`.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Profile => run_profile(cfg),
        Command::Potential => run_potential(cfg),
        Command::Spectrum => run_spectrum(cfg),
        Command::Verify => run_verify(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_syntax() {
        assert_eq!("0..6".parse::<QuantumRange>().unwrap(), QuantumRange { lo: 0, hi: 6 });
        assert_eq!("3".parse::<QuantumRange>().unwrap(), QuantumRange { lo: 3, hi: 3 });
        assert!("4..2".parse::<QuantumRange>().is_err());
        assert!("a..2".parse::<QuantumRange>().is_err());
        assert_eq!(QuantumRange { lo: 1, hi: 5 }.values().len(), 5);
    }

    #[test]
    fn default_output_grid_hits_round_radii() {
        let mut cfg = RunConfig::new(Command::Profile);
        cfg.rho_max = Some(10.0);
        cfg.points = Some(500);
        let g = output_grid(&cfg, 1.0, 1, true).unwrap();
        assert_eq!(g.len(), 500);
        assert_eq!(g[49], 1.0);
        cfg.rho_min = Some(0.0);
        cfg.points = Some(11);
        assert_eq!(output_grid(&cfg, 1.0, 1, true).unwrap()[1], 1.0);
        assert!(output_grid(&cfg, 1.0, 1, false).is_err());
    }

    #[test]
    fn analytic_m1_is_a_usage_error() {
        let mut cfg = RunConfig::new(Command::Profile);
        cfg.method = Some(Method::Analytic);
        let err = resolve_profile(&cfg, 10.0).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(err.to_string(), "no analytic solution for m=1");
    }

    #[test]
    fn default_methods() {
        let mut cfg = RunConfig::new(Command::Profile);
        assert_eq!(cfg.method(), Method::Trial);
        cfg.m = 3;
        assert_eq!(cfg.method(), Method::Analytic);
        cfg.m = 5;
        assert_eq!(cfg.method(), Method::Trial);
    }

    #[test]
    fn validation() {
        let mut cfg = RunConfig::new(Command::Spectrum);
        cfg.m = 0;
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
        let mut cfg = RunConfig::new(Command::Spectrum);
        cfg.n = QuantumRange { lo: 0, hi: 2 };
        assert_eq!(run(&cfg).unwrap_err().exit_code(), 2);
    }
}
