//! Binary Reed-Muller codes RM(r, m).
//!
//! Row layout: the all-ones row, then one block per degree `l = 1..=r`.
//! Inside a block the monomials run in descending colexicographic order of
//! their index tuples (`v4, v3, v2, v1`, then `v3v4, v2v4, v1v4, v2v3,
//! v1v3, v1v2` for `m = 4`).
//!
//! The row labelled `v_i` takes value 1 at column `j` exactly when bit
//! `i - 1` of `j - 1` is set. With the point ordering of
//! [`crate::geometry`] this is the hyperplane `v_{m+1-i} = 1`; for example
//! the `v4` row of RM(2, 4) is the incidence vector of `v_1 = 1`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{enumerate_codewords, BitMatrix, BitVector};

/// Order `r` and number of variables `m` of a Reed-Muller code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RmParams {
    pub r: u32,
    pub m: u32,
}

/// Largest `m` accepted anywhere; columns are indexed by `u32` points.
pub const MAX_M: u32 = 20;

impl RmParams {
    pub fn new(r: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams {
                r,
                m,
                reason: "m must be at least 1",
            });
        }
        if m > MAX_M {
            return Err(Error::InvalidParams {
                r,
                m,
                reason: "m exceeds the supported maximum of 20",
            });
        }
        if r > m {
            return Err(Error::InvalidParams {
                r,
                m,
                reason: "order r must not exceed m",
            });
        }
        Ok(RmParams { r, m })
    }

    /// Like [`RmParams::new`] but also requires `m >= r + 1`, so that the
    /// dual code is a nonzero Reed-Muller code.
    pub fn with_dual(r: u32, m: u32) -> Result<Self> {
        let p = RmParams::new(r, m)?;
        p.require_dual()?;
        Ok(p)
    }

    pub fn require_dual(&self) -> Result<()> {
        if self.m < self.r + 1 {
            return Err(Error::InvalidParams {
                r: self.r,
                m: self.m,
                reason: "the dual code needs m >= r + 1",
            });
        }
        Ok(())
    }

    /// Block length `2^m`.
    pub fn n(&self) -> usize {
        1usize << self.m
    }

    /// Dimension `sum_{i<=r} C(m, i)`.
    pub fn k(&self) -> usize {
        (0..=self.r).map(|i| binomial(self.m, i)).sum()
    }

    /// Minimum distance `2^(m-r)`.
    pub fn d(&self) -> usize {
        1usize << (self.m - self.r)
    }

    /// Number of objects of order `l`.
    pub fn objects_of_order(&self, l: u32) -> usize {
        binomial(self.m, l)
    }

    /// 1-based object indices of order `l`, as an inclusive range.
    pub fn order_range(&self, l: u32) -> Result<std::ops::RangeInclusive<usize>> {
        if l > self.r {
            return Err(Error::OrderOutOfRange {
                order: l,
                r: self.r,
            });
        }
        let before: usize = (0..l).map(|i| binomial(self.m, i)).sum();
        Ok(before + 1..=before + binomial(self.m, l))
    }
}

impl fmt::Display for RmParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RM({}, {})", self.r, self.m)
    }
}

pub fn binomial(n: u32, k: u32) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

/// A monomial `v_{s1} v_{s2} ... v_{sl}` with `s1 < s2 < ... < sl`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex {
    tuple: Vec<u32>,
}

impl MonomialIndex {
    pub fn new(m: u32, mut tuple: Vec<u32>) -> Result<Self> {
        tuple.sort_unstable();
        let distinct = tuple.windows(2).all(|w| w[0] < w[1]);
        if !distinct || tuple.iter().any(|&s| s == 0 || s > m) {
            return Err(Error::Parse(format!(
                "invalid monomial tuple {tuple:?} for m={m}"
            )));
        }
        Ok(MonomialIndex { tuple })
    }

    fn from_mask(mask: u32) -> Self {
        let tuple = (0..32)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| b + 1)
            .collect();
        MonomialIndex { tuple }
    }

    pub fn degree(&self) -> u32 {
        self.tuple.len() as u32
    }

    pub fn tuple(&self) -> &[u32] {
        &self.tuple
    }

    /// Bit mask with bit `s - 1` set for every index `s` in the tuple.
    pub fn mask(&self) -> u32 {
        self.tuple.iter().fold(0, |acc, s| acc | 1 << (s - 1))
    }

    /// `"1"` for the constant monomial, otherwise e.g. `"v1v2"`.
    pub fn label(&self) -> String {
        if self.tuple.is_empty() {
            "1".to_string()
        } else {
            self.tuple.iter().map(|s| format!("v{s}")).collect()
        }
    }

    /// Message symbol name, e.g. `"a0"` or `"a12"`.
    pub fn symbol(&self) -> String {
        if self.tuple.is_empty() {
            "a0".to_string()
        } else {
            format!(
                "a{}",
                self.tuple
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join("")
            )
        }
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An object (message symbol) together with its order and monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectIndex {
    pub j: usize,
    pub order: u32,
    pub monomial: MonomialIndex,
}

/// Monomials of RM(r, m) in row order.
pub fn monomials(p: RmParams) -> Vec<MonomialIndex> {
    let mut out = vec![MonomialIndex { tuple: Vec::new() }];
    for l in 1..=p.r {
        // colex order on tuples is numeric order on masks
        let mut masks: Vec<u32> = (0u32..1 << p.m).filter(|x| x.count_ones() == l).collect();
        masks.reverse();
        out.extend(masks.into_iter().map(MonomialIndex::from_mask));
    }
    out
}

/// Evaluation of a monomial at every point: column `j` is 1 iff the mask
/// bits are all set in `j - 1`.
pub fn monomial_row(m: u32, monomial: &MonomialIndex) -> BitVector {
    let mask = monomial.mask();
    let mut row = BitVector::zeros(1usize << m);
    for x in 0u32..1 << m {
        if x & mask == mask {
            row.set(x as usize, true);
        }
    }
    row
}

/// The `k x 2^m` generator matrix.
pub fn generator_matrix(p: RmParams) -> BitMatrix {
    let n = p.n();
    // degree-1 rows; higher degrees are elementwise products of these
    let linear: Vec<BitVector> = (1..=p.m)
        .map(|i| monomial_row(p.m, &MonomialIndex { tuple: vec![i] }))
        .collect();
    let rows = monomials(p)
        .iter()
        .map(|mono| {
            mono.tuple.iter().fold(BitVector::ones(n), |acc, &s| {
                acc.and(&linear[s as usize - 1])
            })
        })
        .collect();
    BitMatrix::from_rows(rows).expect("rows share the block length")
}

/// Row labels of the generator matrix, in row order.
pub fn row_labels(p: RmParams) -> Vec<String> {
    monomials(p).iter().map(MonomialIndex::label).collect()
}

/// Maps object index `j` (1-based) to its order and monomial.
pub fn object_order(p: RmParams, j: usize) -> Result<ObjectIndex> {
    let k = p.k();
    if j == 0 || j > k {
        return Err(Error::ObjectOutOfRange { j, k });
    }
    let mut start = 1;
    for l in 0..=p.r {
        let count = binomial(p.m, l);
        if j < start + count {
            let monomial = monomials(p).swap_remove(j - 1);
            debug_assert_eq!(monomial.degree(), l);
            return Ok(ObjectIndex {
                j,
                order: l,
                monomial,
            });
        }
        start += count;
    }
    unreachable!("j <= k lies in some order block")
}

/// All objects of the code in index order.
pub fn objects(p: RmParams) -> Vec<ObjectIndex> {
    monomials(p)
        .into_iter()
        .enumerate()
        .map(|(i, monomial)| ObjectIndex {
            j: i + 1,
            order: monomial.degree(),
            monomial,
        })
        .collect()
}

/// Parameters of the dual code RM(m - r - 1, m).
pub fn dual_params(p: RmParams) -> Result<RmParams> {
    p.require_dual()?;
    RmParams::new(p.m - p.r - 1, p.m)
}

/// Every codeword of weight `2^(m-r)`, sorted by support.
pub fn min_weight_codewords(p: RmParams) -> Result<Vec<BitVector>> {
    let g = generator_matrix(p);
    let d = p.d();
    let mut words: Vec<BitVector> = enumerate_codewords(&g)?
        .filter(|c| c.weight() == d)
        .collect();
    words.sort_by_key(BitVector::support);
    Ok(words)
}

/// Number of minimum-weight codewords whose support contains `required`
/// (1-based coordinates), by exhaustive enumeration.
pub fn constrained_min_weight_count(p: RmParams, required: &[usize]) -> Result<usize> {
    let mask = BitVector::from_support(p.n(), required)?;
    Ok(min_weight_codewords(p)?
        .iter()
        .filter(|c| mask.is_subset_of(c))
        .count())
}

/// Export form of a generator matrix.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorJson {
    pub r: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub rows: Vec<LabelledRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelledRow {
    pub label: String,
    pub bits: String,
}

pub fn generator_json(p: RmParams) -> GeneratorJson {
    let g = generator_matrix(p);
    GeneratorJson {
        r: p.r,
        m: p.m,
        n: p.n(),
        k: p.k(),
        d: p.d(),
        rows: row_labels(p)
            .into_iter()
            .zip(g.row_vectors())
            .map(|(label, row)| LabelledRow {
                label,
                bits: row.to_string(),
            })
            .collect(),
    }
}

/// Comma-separated 0/1 grid, one line per row, rows in generator order.
pub fn generator_csv(p: RmParams) -> String {
    let g = generator_matrix(p);
    let mut out = String::new();
    for row in g.row_vectors() {
        let cells: Vec<&str> = row
            .to_bits()
            .iter()
            .map(|&b| if b == 1 { "1" } else { "0" })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
