//! Recovery sets of message symbols.
//!
//! For an object of order `l` with monomial `sigma`:
//!
//! * the smallest recovery set `S` has `2^l` columns and its points form an
//!   `l`-dimensional subspace through `P_1`;
//! * for `l < r` the next size is `2^(r+1) - 2^l`, one set `F \ S` for every
//!   `(r+1)`-dimensional subspace `F` containing `S`;
//! * for `l = r` the `2^(m-r)` translates of `S` partition the coordinates.
//!
//! [`oracle_all_recovery_sets`] finds every minimal recovery set by a plain
//! subset scan and shares no code with the geometric constructions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{gaussian_binomial, superspaces_containing, Flat, Point};
use crate::gf2::{BitMatrix, BitVector};
use crate::limits::Limits;
use crate::rm::{
    dual_params, generator_matrix, min_weight_codewords, monomial_row, object_order, MonomialIndex,
    ObjectIndex, RmParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryKind {
    Smallest,
    SecondSmallest,
    Oracle,
}

/// A minimal set of generator columns summing to `e_j`.
#[derive(Debug, Clone)]
pub struct RecoverySet {
    pub object: ObjectIndex,
    /// 1-based column indices, ascending.
    pub columns: Vec<usize>,
    /// The subspace `S` for the smallest set, the superspace `F` (or the
    /// translate itself when `l = r`) for second-smallest sets.
    pub witness: Option<Flat>,
    pub kind: RecoveryKind,
}

impl RecoverySet {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

/// `(size, lexicographic)` order on column lists.
pub fn canonical_order(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// True when the columns of `g` listed in `columns` sum to `e_j`.
pub fn sums_to_unit(g: &BitMatrix, columns: &[usize], j: usize) -> Result<bool> {
    let sel = BitVector::from_support(g.cols(), columns)?;
    let sum = g.mul_vec(&sel)?;
    Ok(sum.weight() == 1 && sum.get(j - 1))
}

fn check_sum(g: &BitMatrix, columns: &[usize], j: usize) -> Result<()> {
    if sums_to_unit(g, columns, j)? {
        Ok(())
    } else {
        Err(Error::Verification(format!(
            "columns {columns:?} do not sum to e_{j}"
        )))
    }
}

/// The subspace whose points form the smallest recovery set of `monomial`.
///
/// Built as in the classical argument: the complement tuple `tau` gives the
/// flat `T` cut out by the rows `v_tau`, and `T + 1_m` passes through the
/// origin.
pub fn smallest_subspace(m: u32, monomial: &MonomialIndex) -> Result<Flat> {
    let tau: Vec<u32> = (1..=m).filter(|s| !monomial.tuple().contains(s)).collect();
    let tau = MonomialIndex::new(m, tau)?;
    let t = Flat::from_incidence(m, &monomial_row(m, &tau))?;
    let all_ones = Point::new(m, ((1u64 << m) - 1) as u32);
    Ok(t.translate(all_ones))
}

/// The unique smallest recovery set for object `j`.
pub fn smallest_recovery_set(p: RmParams, j: usize) -> Result<RecoverySet> {
    let object = object_order(p, j)?;
    let subspace = smallest_subspace(p.m, &object.monomial)?;
    debug_assert!(subspace.is_subspace());
    let columns = subspace.point_indices();
    check_sum(&generator_matrix(p), &columns, j)?;
    Ok(RecoverySet {
        object,
        columns,
        witness: Some(subspace),
        kind: RecoveryKind::Smallest,
    })
}

fn via_superspaces(p: RmParams, object: &ObjectIndex, s: &Flat) -> Result<Vec<RecoverySet>> {
    superspaces_containing(s, p.r + 1)?
        .into_iter()
        .map(|f| {
            let columns: Vec<usize> = f.incidence().and(&s.incidence().not()).support();
            Ok(RecoverySet {
                object: object.clone(),
                columns,
                witness: Some(f),
                kind: RecoveryKind::SecondSmallest,
            })
        })
        .collect()
}

fn via_translates(p: RmParams, object: &ObjectIndex, s: &Flat) -> Vec<RecoverySet> {
    let mut seen = s.incidence().clone();
    let mut out = Vec::new();
    for shift in 0u32..1 << p.m {
        if seen.get(shift as usize) {
            continue;
        }
        let t = s.translate(Point::new(p.m, shift));
        for i in t.incidence().iter_ones() {
            seen.set(i, true);
        }
        out.push(RecoverySet {
            object: object.clone(),
            columns: t.point_indices(),
            witness: Some(t),
            kind: RecoveryKind::SecondSmallest,
        });
    }
    out
}

/// Recovery sets of the second-smallest size for object `j`.
///
/// For order `l < r` there are `[m-l, r+1-l]_2` of them, each of size
/// `2^(r+1) - 2^l`. For `l = r` these are the `2^(m-r) - 1` translates of
/// `S`, which together with `S` partition `[n]`.
pub fn second_smallest_recovery_sets(p: RmParams, j: usize) -> Result<Vec<RecoverySet>> {
    p.require_dual()?;
    Limits::from_env().check_geometric(p.m)?;
    let smallest = smallest_recovery_set(p, j)?;
    let object = smallest.object.clone();
    let s = smallest.witness.expect("smallest set carries its subspace");
    let mut sets = if object.order < p.r {
        via_superspaces(p, &object, &s)?
    } else {
        let translates = via_translates(p, &object, &s);
        if p.m <= 4 {
            let a: BTreeSet<Vec<usize>> = translates.iter().map(|t| t.columns.clone()).collect();
            let b: BTreeSet<Vec<usize>> = via_superspaces(p, &object, &s)?
                .into_iter()
                .map(|t| t.columns)
                .collect();
            if a != b {
                return Err(Error::Verification(format!(
                    "translate and superspace constructions disagree for e_{j}"
                )));
            }
        }
        translates
    };
    let g = generator_matrix(p);
    for set in &sets {
        check_sum(&g, &set.columns, j)?;
    }
    sets.sort_by(|a, b| canonical_order(&a.columns, &b.columns));
    Ok(sets)
}

fn column_words(g: &BitMatrix) -> Vec<u64> {
    g.columns().iter().map(BitVector::to_word).collect()
}

fn minimal_only(mut found: Vec<u64>) -> Vec<u64> {
    found.sort_by_key(|s| s.count_ones());
    let mut kept: Vec<u64> = Vec::new();
    for s in found {
        if !kept.iter().any(|&t| t & !s == 0) {
            kept.push(s);
        }
    }
    kept
}

fn mask_to_columns(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

/// Every minimal recovery set of every object, found by scanning all
/// `2^n` column subsets. Index `i` of the result holds object `i + 1`.
pub fn oracle_all_objects(p: RmParams) -> Result<Vec<Vec<RecoverySet>>> {
    Limits::from_env().check_oracle(p.m)?;
    let g = generator_matrix(p);
    let k = p.k();
    if k > 64 {
        return Err(Error::Capacity {
            what: "oracle message length",
            requested: k,
            limit: 64,
        });
    }
    let cols = column_words(&g);
    let n = p.n();
    let mut hits: Vec<Vec<u64>> = vec![Vec::new(); k];
    // Gray-code walk: one column toggles per step
    let mut subset = 0u64;
    let mut syndrome = 0u64;
    for step in 1u64..1u64 << n {
        let bit = step.trailing_zeros() as usize;
        subset ^= 1 << bit;
        syndrome ^= cols[bit];
        if syndrome.count_ones() == 1 {
            hits[syndrome.trailing_zeros() as usize].push(subset);
        }
    }
    hits.into_iter()
        .enumerate()
        .map(|(i, found)| {
            let object = object_order(p, i + 1)?;
            let mut sets: Vec<RecoverySet> = minimal_only(found)
                .into_iter()
                .map(|mask| RecoverySet {
                    object: object.clone(),
                    columns: mask_to_columns(mask),
                    witness: None,
                    kind: RecoveryKind::Oracle,
                })
                .collect();
            sets.sort_by(|a, b| canonical_order(&a.columns, &b.columns));
            Ok(sets)
        })
        .collect()
}

/// Every minimal recovery set of object `j` (brute force, `m <= 4` by
/// default).
pub fn oracle_all_recovery_sets(p: RmParams, j: usize) -> Result<Vec<RecoverySet>> {
    object_order(p, j)?;
    Ok(oracle_all_objects(p)?.swap_remove(j - 1))
}

/// Block-design parameters of the second-smallest family of one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    /// Points outside `S`: `2^m - 2^l`.
    pub v: usize,
    /// Block size `2^(r+1) - 2^l`.
    pub k: usize,
    /// Replication `[m-l-1, r-l]_2`.
    pub lambda: u64,
    pub blocks: usize,
    /// Every point outside `S` lies in exactly `lambda` blocks and every
    /// block has size `k`.
    pub holds: bool,
}

/// Checks the 1-design property of the second-smallest family.
pub fn verify_design_property(p: RmParams, j: usize) -> Result<DesignReport> {
    let smallest = smallest_recovery_set(p, j)?;
    let blocks = second_smallest_recovery_sets(p, j)?;
    let l = smallest.object.order;
    let v = p.n() - (1usize << l);
    let k = (1usize << (p.r + 1)) - (1usize << l);
    let lambda = gaussian_binomial(p.m - l - 1, p.r - l);

    let mut counts = vec![0u64; p.n() + 1];
    for b in &blocks {
        for &c in &b.columns {
            counts[c] += 1;
        }
    }
    let in_s: BTreeSet<usize> = smallest.columns.iter().copied().collect();
    let holds = blocks.iter().all(|b| b.len() == k)
        && (1..=p.n()).all(|c| {
            if in_s.contains(&c) {
                counts[c] == 0
            } else {
                counts[c] == lambda
            }
        });
    Ok(DesignReport {
        v,
        k,
        lambda,
        blocks: blocks.len(),
        holds,
    })
}

/// Minimum-weight codewords of the dual code whose support contains the
/// smallest recovery set `S` of object `j`.
///
/// Also checks that these supports are exactly `S ∪ R` over the
/// second-smallest sets `R`.
pub fn dual_support_correspondence(p: RmParams, j: usize) -> Result<Vec<BitVector>> {
    let dual = dual_params(p)?;
    let smallest = smallest_recovery_set(p, j)?;
    let s = BitVector::from_support(p.n(), &smallest.columns)?;
    let words: Vec<BitVector> = min_weight_codewords(dual)?
        .into_iter()
        .filter(|w| s.is_subset_of(w))
        .collect();

    let from_words: BTreeSet<Vec<usize>> = words.iter().map(BitVector::support).collect();
    let from_sets: BTreeSet<Vec<usize>> = second_smallest_recovery_sets(p, j)?
        .iter()
        .map(|r| {
            let mut u: Vec<usize> = smallest.columns.iter().chain(&r.columns).copied().collect();
            u.sort_unstable();
            u
        })
        .collect();
    if from_words != from_sets || from_words.len() != words.len() {
        return Err(Error::Verification(format!(
            "dual codewords through S and second-smallest sets of e_{j} are not in bijection"
        )));
    }
    Ok(words)
}

/// Export form of the recovery structure of one object.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObjectRecoveryJson {
    pub object_index: usize,
    pub order: u32,
    pub monomial: String,
    pub smallest: Vec<usize>,
    pub second_smallest: Vec<Vec<usize>>,
    pub design: DesignJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_minimal: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignJson {
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
}

/// Recovery summary of object `j`; `oracle` adds the brute-force list.
pub fn object_recovery_json(
    p: RmParams,
    j: usize,
    oracle: Option<&[RecoverySet]>,
) -> Result<ObjectRecoveryJson> {
    let smallest = smallest_recovery_set(p, j)?;
    let second = second_smallest_recovery_sets(p, j)?;
    let design = verify_design_property(p, j)?;
    Ok(ObjectRecoveryJson {
        object_index: j,
        order: smallest.object.order,
        monomial: smallest.object.monomial.label(),
        smallest: smallest.columns,
        second_smallest: second.into_iter().map(|r| r.columns).collect(),
        design: DesignJson {
            v: design.v,
            k: design.k,
            lambda: design.lambda,
        },
        all_minimal: oracle.map(|sets| sets.iter().map(|r| r.columns.clone()).collect()),
    })
}
