// Minimizes the soliton energy over the one-parameter trial families.

use std::error::Error;

use hedgehog_modes::numerics::ToleranceSpec;
use hedgehog_modes::profile::{default_trial_bracket, energy_auto, optimize_trial, trial_kappa2, trial_profile};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let tol = ToleranceSpec::new(1e-10, 1e-10, 500)?;
    for m in [1, 3, 4, 6] {
        let (kappa, energy) = optimize_trial(m, default_trial_bracket(m), tol)?;
        println!("m = {m}: kappa* = {kappa:.6}, E = {energy:.8}");
        if m >= 2 {
            println!("  kappa2 = {:.8}", trial_kappa2(m));
        }
        let report = energy_auto(&trial_profile(m, kappa)?, tol)?;
        println!(
            "  cutoff {:.1}: truncated {:.8} + tail {:.2e} (bound {:.1e})",
            report.rho_max, report.truncated, report.tail, report.tail_bound
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
