// Bound shape-vibration spectrum for m = 1 next to the oscillator levels.

use std::error::Error;

use hedgehog_modes::fluctuation::FluctuationPotential;
use hedgehog_modes::profile::{trial_profile, KAPPA0_REFERENCE};
use hedgehog_modes::spectrum::{oscillator_reference, spectrum_table, RadialGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let v = FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE)?);
    let ls: Vec<u32> = (0..=4).collect();
    let table = spectrum_table(&v, &ls, 3, &RadialGrid::default_bound(), 1.0)?;
    println!("{:>2} {:>2} {:>14} {:>10} {:>10} {:>5}", "l", "n", "omega2", "error", "oscillator", "nodes");
    for mode in &table.modes {
        println!(
            "{:>2} {:>2} {:>14.9} {:>10.1e} {:>10.2} {:>5}",
            mode.l,
            mode.n,
            mode.omega2,
            mode.error_estimate,
            oscillator_reference(mode.n, mode.l, table.r0),
            mode.nodes
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
