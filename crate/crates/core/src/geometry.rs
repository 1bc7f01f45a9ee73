//! The binary affine geometry EG(m, 2).
//!
//! A point is an `m`-bit word. Point `P_j` is the word `j - 1`, read with
//! coordinate `v_1` as the most significant bit, so that `P_1` is the
//! origin and `P_9 = (1, 0, 0, 0)` when `m = 4`. Vector addition is XOR.
//!
//! Subspaces are kept as reduced echelon bases (pivot = leading bit), which
//! makes every enumeration duplicate-free and deterministic. Flats compare
//! by incidence vector.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::limits::Limits;

/// Largest ambient dimension whose points still fit the `u32` encoding.
const MAX_AMBIENT: u32 = 24;

fn check_ambient(m: u32) -> Result<()> {
    if m == 0 || m > MAX_AMBIENT {
        return Err(Error::InvalidParams {
            r: 0,
            m,
            reason: "ambient dimension must lie in 1..=24",
        });
    }
    Ok(())
}

fn check_capacity(m: u32) -> Result<()> {
    Limits::from_env().check_geometric(m)
}

/// A point of EG(m, 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    m: u32,
    bits: u32,
}

impl Point {
    pub fn new(m: u32, bits: u32) -> Self {
        assert!(
            m <= MAX_AMBIENT && (m == 32 || bits >> m == 0),
            "point out of range"
        );
        Point { m, bits }
    }

    /// Point `P_j`, 1-based.
    pub fn from_index(m: u32, j: usize) -> Result<Self> {
        let n = 1usize << m;
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, len: n });
        }
        Ok(Point {
            m,
            bits: (j - 1) as u32,
        })
    }

    /// Point with the given coordinates `(v_1, ..., v_m)`.
    pub fn from_coords(coords: &[u8]) -> Self {
        let m = coords.len() as u32;
        let bits = coords
            .iter()
            .fold(0u32, |acc, &c| (acc << 1) | (c & 1) as u32);
        Point { m, bits }
    }

    pub fn origin(m: u32) -> Self {
        Point { m, bits: 0 }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The packed word; coordinate `v_1` is bit `m - 1`.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// 1-based index `j` of `P_j`.
    pub fn index(&self) -> usize {
        self.bits as usize + 1
    }

    /// Coordinates `(v_1, ..., v_m)`.
    pub fn coords(&self) -> Vec<u8> {
        (0..self.m)
            .rev()
            .map(|b| ((self.bits >> b) & 1) as u8)
            .collect()
    }
}

impl std::ops::Add for Point {
    type Output = Point;

    fn add(self, rhs: Point) -> Point {
        assert_eq!(self.m, rhs.m);
        Point {
            m: self.m,
            bits: self.bits ^ rhs.bits,
        }
    }
}

/// Number of `b`-dimensional subspaces of `F_2^a`.
pub fn gaussian_binomial(a: u32, b: u32) -> u64 {
    if b > a {
        return 0;
    }
    // q-Pascal: [a, b] = [a-1, b-1] + 2^b [a-1, b]
    let mut row = vec![1u64];
    for n in 1..=a {
        let mut next = vec![1u64; n as usize + 1];
        for k in 1..n as usize {
            next[k] = row[k - 1]
                .checked_add(
                    (1u64 << k)
                        .checked_mul(row[k])
                        .expect("gaussian binomial overflow"),
                )
                .expect("gaussian binomial overflow");
        }
        row = next;
    }
    row[b as usize]
}

/// Reduces a spanning set to the canonical echelon basis, leading bits
/// descending, each pivot bit cleared from every other basis vector.
pub fn canonical_basis(vectors: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            if x & leading_bit(b) != 0 {
                x ^= b;
            }
        }
        if x != 0 {
            let lead = leading_bit(x);
            for b in basis.iter_mut() {
                if *b & lead != 0 {
                    *b ^= x;
                }
            }
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

#[inline]
fn leading_bit(x: u32) -> u32 {
    debug_assert!(x != 0);
    1u32 << (31 - x.leading_zeros())
}

/// All points of the span of a basis, ascending.
fn span(basis: &[u32]) -> Vec<u32> {
    let mut pts = vec![0u32];
    for &b in basis {
        let extra: Vec<u32> = pts.iter().map(|p| p ^ b).collect();
        pts.extend(extra);
    }
    pts.sort_unstable();
    pts
}

/// An affine subspace (coset of a linear subspace) of EG(m, 2).
#[derive(Clone)]
pub struct Flat {
    m: u32,
    base: u32,
    basis: Vec<u32>,
    incidence: BitVector,
}

impl PartialEq for Flat {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.incidence == other.incidence
    }
}

impl Eq for Flat {}

impl Hash for Flat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.incidence.hash(state);
    }
}

impl fmt::Debug for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Flat(dim {}, points {:?})",
            self.dimension(),
            self.point_indices()
        )
    }
}

impl Flat {
    /// The coset `shift + span(directions)`.
    pub fn coset(m: u32, shift: u32, directions: &[u32]) -> Result<Self> {
        check_ambient(m)?;
        let mask = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        if shift & !mask != 0 || directions.iter().any(|d| d & !mask != 0) {
            return Err(Error::NotAFlat(
                "coordinates exceed the ambient dimension".into(),
            ));
        }
        let basis = canonical_basis(directions);
        let pts = span(&basis);
        let mut incidence = BitVector::zeros(1usize << m);
        let mut base = u32::MAX;
        for p in pts {
            let q = p ^ shift;
            incidence.set(q as usize, true);
            base = base.min(q);
        }
        Ok(Flat {
            m,
            base,
            basis,
            incidence,
        })
    }

    /// The linear span of `generators`.
    pub fn subspace(m: u32, generators: &[u32]) -> Result<Self> {
        Flat::coset(m, 0, generators)
    }

    /// Recognises a point set as a flat, or explains why it is not one.
    pub fn from_points(m: u32, points: &[u32]) -> Result<Self> {
        check_ambient(m)?;
        let set: BTreeSet<u32> = points.iter().copied().collect();
        let Some(&base) = set.iter().next() else {
            return Err(Error::NotAFlat("empty point set".into()));
        };
        if !set.len().is_power_of_two() {
            return Err(Error::NotAFlat(format!(
                "{} points is not a power of two",
                set.len()
            )));
        }
        let directions: Vec<u32> = set.iter().map(|p| p ^ base).collect();
        let flat = Flat::coset(m, base, &directions)?;
        if flat.size() != set.len() {
            return Err(Error::NotAFlat(format!(
                "{} points span an affine hull of {} points",
                set.len(),
                flat.size()
            )));
        }
        Ok(flat)
    }

    pub fn from_incidence(m: u32, incidence: &BitVector) -> Result<Self> {
        if incidence.len() != 1usize << m {
            return Err(Error::DimensionMismatch {
                expected: 1usize << m,
                found: incidence.len(),
            });
        }
        let pts: Vec<u32> = incidence.iter_ones().map(|i| i as u32).collect();
        Flat::from_points(m, &pts)
    }

    /// The whole space EG(m, 2).
    pub fn whole(m: u32) -> Result<Self> {
        let dirs: Vec<u32> = (0..m).map(|b| 1u32 << b).collect();
        Flat::subspace(m, &dirs)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dimension(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Smallest point of the flat.
    pub fn basepoint(&self) -> Point {
        Point::new(self.m, self.base)
    }

    /// Canonical direction basis.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn incidence(&self) -> &BitVector {
        &self.incidence
    }

    pub fn size(&self) -> usize {
        1usize << self.basis.len()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.incidence.get(p.bits as usize)
    }

    pub fn contains_flat(&self, other: &Flat) -> bool {
        self.m == other.m && other.incidence.is_subset_of(&self.incidence)
    }

    /// True when the flat passes through the origin `P_1`.
    pub fn is_subspace(&self) -> bool {
        self.incidence.get(0)
    }

    pub fn points(&self) -> Vec<Point> {
        self.incidence
            .iter_ones()
            .map(|i| Point::new(self.m, i as u32))
            .collect()
    }

    /// 1-based indices `j` of the points `P_j`, ascending.
    pub fn point_indices(&self) -> Vec<usize> {
        self.incidence.support()
    }

    /// Closure check: `p + q + s` lies in the flat for every triple.
    pub fn is_affinely_closed(&self) -> bool {
        let pts: Vec<u32> = self.incidence.iter_ones().map(|i| i as u32).collect();
        pts.iter().all(|&p| {
            pts.iter().all(|&q| {
                pts.iter()
                    .all(|&s| self.incidence.get((p ^ q ^ s) as usize))
            })
        })
    }

    /// The translate `self + shift`.
    pub fn translate(&self, shift: Point) -> Flat {
        Flat::coset(self.m, self.base ^ shift.bits, &self.basis).expect("translate stays in range")
    }

    pub fn to_json(&self) -> FlatJson {
        FlatJson {
            dimension: self.dimension(),
            point_indices: self.point_indices(),
            incidence_bits: self.incidence.to_string(),
        }
    }
}

/// Export form of a flat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FlatJson {
    pub dimension: u32,
    pub point_indices: Vec<usize>,
    pub incidence_bits: String,
}

/// Intersection of two flats by elementwise product of incidence vectors.
pub fn intersect_flats(h: &Flat, n: &Flat) -> Result<Option<Flat>> {
    if h.m != n.m {
        return Err(Error::DimensionMismatch {
            expected: h.m as usize,
            found: n.m as usize,
        });
    }
    let inc = h.incidence.and(&n.incidence);
    if inc.is_zero() {
        return Ok(None);
    }
    Flat::from_incidence(h.m, &inc).map(Some)
}

/// All `t`-dimensional linear subspaces of `F_2^m`, each exactly once.
///
/// Ordered by pivot set (as a bit mask, ascending) and then by the free
/// entries of the echelon basis.
pub fn subspaces_of_dim(m: u32, t: u32) -> Result<Vec<Flat>> {
    check_ambient(m)?;
    check_capacity(m)?;
    if t > m {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for pivots in (0u32..1 << m).filter(|p| p.count_ones() == t) {
        let pivot_bits: Vec<u32> = (0..m).rev().filter(|b| pivots >> b & 1 == 1).collect();
        // free positions for each basis row: non-pivot bits below its pivot
        let free: Vec<Vec<u32>> = pivot_bits
            .iter()
            .map(|&p| (0..p).filter(|b| pivots >> b & 1 == 0).collect())
            .collect();
        let total: u32 = free.iter().map(|f| f.len() as u32).sum();
        for assignment in 0u64..1u64 << total {
            let mut cursor = 0;
            let basis: Vec<u32> = pivot_bits
                .iter()
                .zip(&free)
                .map(|(&p, fs)| {
                    let mut v = 1u32 << p;
                    for &b in fs {
                        if assignment >> cursor & 1 == 1 {
                            v |= 1 << b;
                        }
                        cursor += 1;
                    }
                    v
                })
                .collect();
            out.push(Flat::subspace(m, &basis)?);
        }
    }
    Ok(out)
}

/// All `target_dim`-dimensional subspaces containing the subspace `s`.
pub fn superspaces_containing(s: &Flat, target_dim: u32) -> Result<Vec<Flat>> {
    if !s.is_subspace() {
        return Err(Error::NotASubspace);
    }
    if target_dim < s.dimension() || target_dim > s.m {
        return Ok(Vec::new());
    }
    Ok(subspaces_of_dim(s.m, target_dim)?
        .into_iter()
        .filter(|f| f.contains_flat(s))
        .collect())
}

/// All `t`-flats: every coset of every `t`-subspace, each exactly once.
pub fn flats_of_dim(m: u32, t: u32) -> Result<Vec<Flat>> {
    let mut out = Vec::new();
    for sub in subspaces_of_dim(m, t)? {
        for shift in 0u32..1 << m {
            // keep the coset only at its smallest representative
            if sub.incidence.iter_ones().all(|d| shift <= shift ^ d as u32) {
                out.push(sub.translate(Point::new(m, shift)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(3, 2), 7);
        assert_eq!(gaussian_binomial(2, 1), 3);
        assert_eq!(gaussian_binomial(4, 2), 35);
        assert_eq!(gaussian_binomial(9, 0), 1);
        assert_eq!(gaussian_binomial(0, 0), 1);
        assert_eq!(gaussian_binomial(2, 3), 0);
        assert_eq!(gaussian_binomial(5, 5), 1);
    }

    #[test]
    fn table_one_ordering() {
        let p9 = Point::from_index(4, 9).unwrap();
        assert_eq!(p9.coords(), vec![1, 0, 0, 0]);
        assert_eq!(Point::from_coords(&[1, 1, 1, 0]).index(), 15);
        assert_eq!(Point::origin(4).index(), 1);
        assert!(Point::from_index(4, 17).is_err());
    }

    #[test]
    fn hyperplane_intersection_example() {
        // v1 = 0 and v2 = 0 in EG(4,2)
        let h = Flat::from_incidence(4, &BitVector::parse("1111111100000000").unwrap()).unwrap();
        let n = Flat::from_incidence(4, &BitVector::parse("1111000011110000").unwrap()).unwrap();
        assert_eq!(h.dimension(), 3);
        let i = intersect_flats(&h, &n).unwrap().unwrap();
        assert_eq!(i.dimension(), 2);
        assert_eq!(i.incidence().to_string(), "1111000000000000");
        assert_eq!(intersect_flats(&h, &h).unwrap().unwrap(), h);
    }

    #[test]
    fn parallel_hyperplanes_do_not_meet() {
        let h = Flat::from_incidence(4, &BitVector::parse("1111111100000000").unwrap()).unwrap();
        let t = h.translate(Point::from_index(4, 9).unwrap());
        assert_eq!(intersect_flats(&h, &t).unwrap(), None);
    }

    #[test]
    fn from_points_rejects_non_flats() {
        assert!(Flat::from_points(3, &[0, 1, 2]).is_err());
        assert!(Flat::from_points(3, &[0, 1, 2, 4]).is_err());
        assert!(Flat::from_points(3, &[]).is_err());
        let f = Flat::from_points(3, &[1, 2, 5, 6]).unwrap();
        assert_eq!(f.dimension(), 2);
        assert!(!f.is_subspace());
        assert!(f.is_affinely_closed());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(subspaces_of_dim(4, 2).unwrap().len(), 35);
        assert_eq!(subspaces_of_dim(2, 1).unwrap().len(), 3);
        let zero = subspaces_of_dim(3, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].point_indices(), vec![1]);
        assert_eq!(flats_of_dim(4, 2).unwrap().len(), 140);
        assert_eq!(flats_of_dim(2, 1).unwrap().len(), 6);
        assert_eq!(flats_of_dim(3, 3).unwrap().len(), 1);
    }

    #[test]
    fn superspaces_of_a_line() {
        let s = Flat::subspace(4, &[1]).unwrap();
        assert_eq!(s.point_indices(), vec![1, 2]);
        let sup = superspaces_containing(&s, 2).unwrap();
        assert_eq!(sup.len(), 7);
        assert!(sup.iter().all(|f| f.contains_flat(&s)));
        assert_eq!(superspaces_containing(&s, 1).unwrap(), vec![s.clone()]);
        let origin = Flat::subspace(4, &[]).unwrap();
        assert_eq!(superspaces_containing(&origin, 3).unwrap().len(), 15);
        let shifted = s.translate(Point::from_index(4, 3).unwrap());
        assert_eq!(
            superspaces_containing(&shifted, 2),
            Err(Error::NotASubspace)
        );
    }

    #[test]
    fn flat_json_shape() {
        let s = Flat::subspace(2, &[1]).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"dimension":1,"pointIndices":[1,2],"incidenceBits":"1100"}"#
        );
    }
}
