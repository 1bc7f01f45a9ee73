// Runs every structural and LP check on RM(1, 3).

use rm_srr::rm::RmParams;
use rm_srr::verify::run_suite;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_suite(RmParams::new(1, 3)?)?;
    for c in &report.checks {
        println!("{:?} {}: {}", c.status, c.name, c.detail);
    }
    println!(
        "region equals achievable simplex: {:?}",
        report.region_equals_achievable_simplex
    );
    if !report.passed {
        return Err("suite failed".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
