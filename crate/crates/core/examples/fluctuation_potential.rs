// Tabulates the shape-fluctuation potential and compares the bracket form
// with the closed forms for m = 2 and m = 3.

use std::error::Error;

use hedgehog_modes::fluctuation::{closed_form_ratio, FluctuationPotential};
use hedgehog_modes::profile::{analytic_profile, trial_profile, KAPPA0_REFERENCE};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let rhos: Vec<f64> = (0..=60).map(|i| 1e-3 * 10f64.powf(i as f64 / 12.0)).collect();
    for m in [2, 3] {
        let p = analytic_profile(m)?;
        let bracket = FluctuationPotential::bracket(p.clone());
        let closed = FluctuationPotential::closed_form(m)?;
        println!("m = {m}: tail {:?}", bracket.tail());
        for rho in [0.1, 1.0, 10.0] {
            println!(
                "  v({rho}) = {:.8} ({}), {:.8} ({})",
                bracket.value(rho)?,
                bracket.convention(),
                closed.value(rho)?,
                closed.convention()
            );
        }
        let s = closed_form_ratio(&p, &rhos)?;
        println!("  closed/bracket ratio in [{:.6}, {:.6}], spread {:.2e}", s.min, s.max, s.relative_spread);
    }

    let v = FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE)?);
    println!("m = 1 trial: tail {:?}", v.tail());
    for rho in [0.5, 1.0, 2.0, 4.0] {
        println!("  v({rho}) = {:.8}", v.value(rho)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
