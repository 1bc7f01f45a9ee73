// Builds the generator matrix of RM(2, 4) and prints it with row labels.

use rm_srr::gf2::rank;
use rm_srr::rm::{generator_matrix, row_labels, RmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(2, 4)?;
    let g = generator_matrix(p);
    println!(
        "RM({}, {}): n = {}, k = {}, d = {}",
        p.r,
        p.m,
        p.n(),
        p.k(),
        p.d()
    );
    for (label, row) in row_labels(p).iter().zip(g.row_vectors()) {
        let bits: String = row.to_bits().iter().map(|b| char::from(b'0' + b)).collect();
        println!("{label:>5}  {bits}");
    }
    assert_eq!(rank(&g), p.k());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
