// Closed-form service rate bounds for RM(2, 4) next to the LP optimum of
// each order class.

use rm_srr::hypergraph::{build_hypergraph, EdgePolicy};
use rm_srr::rm::RmParams;
use rm_srr::srr::{
    omega_sum_bound, order_sum_optimum, same_order_sum_bound, simplices, total_sum_bound,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(2, 4)?;
    let g = build_hypergraph(p, EdgePolicy::Oracle)?;
    for l in 0..=p.r {
        println!(
            "order {l}: bound {}, optimum {}, total bound {}",
            same_order_sum_bound(p, l)?,
            order_sum_optimum(&g, l)?,
            total_sum_bound(p, l)?
        );
    }
    let s = simplices(p)?;
    println!(
        "enclosing sum bound {}, ratio {}",
        omega_sum_bound(p),
        s.ratio
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
