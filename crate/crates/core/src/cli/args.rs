use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{run, Command, Format, Method, QuantumRange, RunConfig};

/// Hedgehog soliton profiles, fluctuation potentials and normal modes.
#[derive(Debug, Parser)]
#[command(name = "hedgehog", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Profile q0(rho) = cos(alpha): columns rho, q0, alpha, dq0.
    Profile(Common),
    /// Fluctuation potential: columns rho, v_bracket[, v_closed_form].
    Potential(Common),
    /// Bound states (m = 1) or box-scaling continuum probe (m >= 2).
    Spectrum(SpectrumArgs),
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Potential power m >= 1.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Profile source; defaults to analytic for m = 2, 3 and trial otherwise.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Trial parameter (kappa0 for m = 1, kappa1 for m >= 2).
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Minimize the energy over the trial parameter.
    #[arg(long)]
    optimize: bool,
    /// Length scale r0.
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    #[arg(long)]
    rho_min: Option<f64>,
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Output file; defaults to <command>_m<m>.<ext> in $HEDGEHOG_OUT_DIR or the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write a gnuplot script next to a CSV output.
    #[arg(long)]
    plot_stub: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    /// Angular momenta, a..b inclusive [default: 0..8 for m = 1, 0..0 otherwise].
    #[arg(long)]
    l: Option<QuantumRange>,
    /// Radial quantum numbers, a..b inclusive.
    #[arg(long, default_value = "1..5")]
    n: QuantumRange,
    /// Box sizes for the continuum probe, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
    boxes: Vec<f64>,
    /// Grid spacing of the continuum boxes.
    #[arg(long, default_value_t = crate::spectrum::DEFAULT_BOX_SPACING)]
    spacing: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Report file; defaults to verify.json in $HEDGEHOG_OUT_DIR or the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn apply(cfg: &mut RunConfig, c: Common) {
    cfg.m = c.m;
    cfg.method = c.method;
    cfg.kappa = c.kappa;
    cfg.optimize = c.optimize;
    cfg.r0 = c.r0;
    cfg.rho_min = c.rho_min;
    cfg.rho_max = c.rho_max;
    cfg.points = c.points;
    cfg.abs_tol = c.abs_tol;
    cfg.rel_tol = c.rel_tol;
    cfg.out = c.out;
    cfg.format = c.format;
    cfg.plot_stub = c.plot_stub;
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        match self.command {
            Sub::Profile(c) => {
                let mut cfg = RunConfig::new(Command::Profile);
                apply(&mut cfg, c);
                cfg
            }
            Sub::Potential(c) => {
                let mut cfg = RunConfig::new(Command::Potential);
                apply(&mut cfg, c);
                cfg
            }
            Sub::Spectrum(s) => {
                let mut cfg = RunConfig::new(Command::Spectrum);
                apply(&mut cfg, s.common);
                cfg.l = s.l;
                cfg.n = s.n;
                cfg.boxes = s.boxes;
                cfg.spacing = s.spacing;
                cfg
            }
            Sub::Verify(v) => {
                let mut cfg = RunConfig::new(Command::Verify);
                cfg.out = v.out;
                cfg.format = Format::Json;
                cfg
            }
        }
    }
}

/// Parses `args` (including the program name), runs, reports, and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cfg = cli.into_config();
    match run(&cfg) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.summary).expect("summary serializes"));
            eprintln!("wrote {}", outcome.path.display());
            if outcome.code != 0 {
                if let Some(name) = outcome.summary["first_failure"].as_str() {
                    eprintln!("verification failed: first failing check is {name}");
                }
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
