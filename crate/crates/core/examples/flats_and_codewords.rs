// Minimum-weight codewords of RM(1, 3) are exactly the affine planes of
// the 3-dimensional binary space.

use std::collections::BTreeSet;

use rm_srr::geometry::{flats_of_dim, gaussian_binomial};
use rm_srr::rm::{min_weight_codewords, RmParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RmParams::new(1, 3)?;
    let words: BTreeSet<Vec<usize>> = min_weight_codewords(p)?
        .iter()
        .map(|w| w.support())
        .collect();
    let flats = flats_of_dim(p.m, p.m - p.r)?;
    println!("{} codewords of weight {}", words.len(), p.d());
    for f in &flats {
        let pts = f.point_indices();
        println!(
            "{:?} basepoint {:?} codeword {}",
            pts,
            f.basepoint().coords(),
            words.contains(&pts)
        );
    }
    assert_eq!(flats.len() as u64, gaussian_binomial(3, 2) * 2);
    assert!(flats.iter().all(|f| words.contains(&f.point_indices())));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
