// Fits the small-rho power law and the Gaussian tail of the m = 1 modes.

use std::error::Error;

use hedgehog_modes::fluctuation::FluctuationPotential;
use hedgehog_modes::profile::{trial_profile, KAPPA0_REFERENCE};
use hedgehog_modes::spectrum::{bound_states, fit_origin_exponent, gaussian_tail_check, origin_exponent, RadialGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let v = FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE)?);
    let grid = RadialGrid::default_bound();
    for l in 0..=2 {
        let modes = bound_states(&v, l, 2, &grid, 1.0)?;
        for mode in &modes {
            let tail = gaussian_tail_check(mode)?;
            println!(
                "l = {l}, n = {}: xi = {:.4} (expected {:.4}), g = {:.4}, sigma = {:.3}, wall {:.1e}",
                mode.n,
                fit_origin_exponent(mode)?,
                origin_exponent(l),
                tail.g,
                tail.sigma,
                mode.wall_amplitude()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
