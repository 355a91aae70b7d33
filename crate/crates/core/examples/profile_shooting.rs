// Shoots the hedgehog profile for m = 1, 2, 3 and compares against the
// exact solutions where they exist.

use std::error::Error;

use hedgehog_modes::profile::{analytic_profile, default_shooting_tolerance, ode_residual, shoot_profile};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for m in 1..=3 {
        let p = shoot_profile(m, default_shooting_tolerance(), 50.0)?;
        p.check_invariants()?;
        println!("m = {m}: kappa = {:.10}", p.origin_curvature());
        if let Ok(exact) = analytic_profile(m) {
            let worst = (0..=2000)
                .map(|i| 0.01 * i as f64)
                .map(|r| (p.q0(r) - exact.q0(r)).abs())
                .fold(0.0, f64::max);
            println!("  max |q0 - exact| on [0, 20] = {worst:.2e}");
            println!("  residual of the exact profile at rho = 3: {:.2e}", ode_residual(&exact, 3.0)?);
        }
        for rho in [0.5, 1.0, 2.0, 4.0] {
            println!("  q0({rho}) = {:.10}  alpha = {:.10}", p.q0(rho), p.alpha(rho));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
