// Box-scaling probe for m >= 2: no bound states, and the lowest level of a
// box of size R falls off like a power of R.

use std::error::Error;

use hedgehog_modes::fluctuation::FluctuationPotential;
use hedgehog_modes::profile::{analytic_profile, trial_profile, KAPPA1_M4_REFERENCE};
use hedgehog_modes::spectrum::{continuum_probe, DEFAULT_BOX_SPACING};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let profiles = [analytic_profile(2)?, analytic_profile(3)?, trial_profile(4, KAPPA1_M4_REFERENCE)?];
    for p in profiles {
        let m = p.m();
        let v = FluctuationPotential::bracket(p);
        for l in [0, 1] {
            let probe = continuum_probe(&v, l, &[20.0, 40.0, 80.0], DEFAULT_BOX_SPACING, 1.0)?;
            let levels: Vec<String> = probe
                .levels
                .iter()
                .map(|b| format!("R={}: {:.4e} ({} negative)", b.rho_max, b.lambda_min, b.negative))
                .collect();
            println!("m = {m}, l = {l}: {}", levels.join(", "));
            if let Some(power) = probe.power {
                println!("  lambda_min ~ R^{power:.3}");
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
