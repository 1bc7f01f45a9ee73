// Exact rational linear programming, first on a hand-written program and
// then on a fractional matching of a recovery hypergraph.

use rm_srr::hypergraph::{build_hypergraph, induced_subgraph, EdgePolicy};
use rm_srr::lp::{duality_check, int, matching_lp, solve_max, LinearProgram, LpOutcome, Sense};
use rm_srr::rm::RmParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut lp = LinearProgram::new(vec![int(3), int(2)]);
    lp.add_row(vec![int(2), int(1)], Sense::Le, int(4))?;
    lp.add_row(vec![int(1), int(3)], Sense::Le, int(5))?;
    match solve_max(&lp)? {
        LpOutcome::Optimal { value, x } => println!("max {value} at ({}, {})", x[0], x[1]),
        other => println!("{other:?}"),
    }

    let g = build_hypergraph(RmParams::new(2, 4)?, EdgePolicy::Oracle)?;
    let sub = induced_subgraph(&g, &[5]);
    print!("{}", matching_lp(&induced_subgraph(&g, &[1])).to_text());
    let (nu, tau) = duality_check(&sub)?;
    println!("object 5: nu* = {}, tau* = {}", nu.value, tau.value);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
