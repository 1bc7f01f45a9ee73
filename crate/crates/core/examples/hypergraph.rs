// Recovery hypergraph of RM(1, 2) under both edge policies.

use rm_srr::hypergraph::{build_hypergraph, EdgePolicy};
use rm_srr::rm::RmParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(1, 2)?;
    for policy in [EdgePolicy::Oracle, EdgePolicy::Geometric] {
        let g = build_hypergraph(p, policy)?;
        println!("{policy}: {} edges", g.edges().len());
        for e in g.edges() {
            let aux = if e.auxiliary { " + aux" } else { "" };
            println!("  e{} {:?}{aux}", e.label, e.servers);
        }
    }
    let g = build_hypergraph(p, EdgePolicy::Oracle)?;
    print!("{}", g.incidence_csv());
    println!("{}", serde_json::to_string(&g.to_json())?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
