// Decides whether demand vectors lie in the service rate region of
// RM(1, 2), printing an allocation or a separating cover.

use rm_srr::hypergraph::EdgePolicy;
use rm_srr::rm::RmParams;
use rm_srr::srr::{membership, DemandVector, Membership};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(1, 2)?;
    for text in ["[1, 1/2, 1/2]", "[2.5, 0, 0]"] {
        let d = DemandVector::parse(p, text)?;
        match membership(p, &d, EdgePolicy::Oracle)? {
            Membership::Inside { allocation, .. } => {
                println!("{text} inside");
                for e in allocation.to_json() {
                    println!("  {e:?}");
                }
            }
            Membership::Outside { certificate, .. } => {
                println!("{text} outside, {:?}", certificate.to_json());
            }
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
