// Runs the built-in verification checks and prints a one-line summary per
// check.

use std::error::Error;

use hedgehog_modes::cli::run_checks;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let report = run_checks();
    for c in &report.checks {
        let status = match (c.asserted, c.pass) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        println!("{status} {}", c.name);
    }
    match &report.first_failure {
        Some(name) => println!("first failing check: {name}"),
        None => println!("all checks passed"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
