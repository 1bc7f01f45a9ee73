// Smallest and second-smallest recovery sets of v1 in RM(2, 4), with the
// design parameters of the second-smallest family.

use rm_srr::recovery::{
    second_smallest_recovery_sets, smallest_recovery_set, verify_design_property,
};
use rm_srr::rm::RmParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(2, 4)?;
    let j = 5;
    let s = smallest_recovery_set(p, j)?;
    println!(
        "object {} ({}), smallest set {:?}",
        j, s.object.monomial, s.columns
    );
    let sets = second_smallest_recovery_sets(p, j)?;
    for r in &sets {
        println!("  {:?}", r.columns);
    }
    let d = verify_design_property(p, j)?;
    println!("{d:?}");
    assert_eq!(sets.len(), 7);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
