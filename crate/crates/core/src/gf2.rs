//! Bit-packed vectors and matrices over GF(2).
//!
//! Storage is 0-based. Helpers that speak the coding-theory convention
//! (coordinates `x_1 ... x_n`) say so in their names or docs.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Hard ceiling on the number of message bits for exhaustive codeword
/// enumeration.
pub const MAX_ENUMERATION_ROWS: usize = 20;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length binary vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Standard basis vector with a one at 0-based position `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVector::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, ignoring whitespace.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Parse(format!("unexpected bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVector::from_bits(&bits))
    }

    /// Incidence vector of a set of 1-based coordinates.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = BitVector::zeros(len);
        for &i in support {
            if i == 0 || i > len {
                return Err(Error::IndexOutOfRange { index: i, len });
            }
            v.set(i - 1, true);
        }
        Ok(v)
    }

    /// Builds a vector from the low `len` bits of a machine word.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= WORD);
        let mut v = BitVector::zeros(len);
        if len > 0 {
            let mask = if len == WORD {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = word & mask;
        }
        v
    }

    /// The low 64 coordinates packed into a word; position `i` is bit `i`.
    pub fn to_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Elementwise product.
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Bitwise complement.
    pub fn not(&self) -> BitVector {
        let mut out = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in subset test");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// 0-based positions of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    /// Support as 1-based coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().map(|i| i + 1).collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense binary matrix stored row by row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Parses rows of `0`/`1` strings.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        BitMatrix::from_rows(
            rows.iter()
                .map(|r| BitVector::parse(r))
                .collect::<Result<_>>()?,
        )
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    /// Column `c` (0-based) as a vector of length `rows`.
    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            cols: self.rows(),
            rows: self.columns(),
        }
    }

    /// `M · x` for a column selector `x` of length `cols`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// `a · M` for a message vector `a` of length `rows`.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        if message.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.rows(),
                found: message.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in message.iter_ones() {
            out.xor_assign(&self.rows[r]);
        }
        Ok(out)
    }

    /// `self · otherᵀ` over GF(2).
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows(), other.rows());
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                if a.dot(b) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{}\n{self}", self.rows(), self.cols)
    }
}

/// Row rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    let mut rows = m.rows.clone();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank computed by eliminating the columns instead of the rows.
pub fn column_rank(m: &BitMatrix) -> usize {
    rank(&m.transpose())
}

/// Finds a column selector `x` with `M · x = target`.
///
/// Row reduction of `[M | target]` picks, at each step, the lowest-index
/// column that still has a nonzero entry below the current pivot row.
/// Free columns are set to zero, so the answer is canonical.
pub fn solve_combination(m: &BitMatrix, target: &BitVector) -> Result<Option<BitVector>> {
    if target.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: target.len(),
        });
    }
    let cols = m.cols();
    let mut aug: Vec<BitVector> = m
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut a = BitVector::zeros(cols + 1);
            for c in row.iter_ones() {
                a.set(c, true);
            }
            a.set(cols, target.get(i));
            a
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == aug.len() {
            break;
        }
        let Some(p) = (r..aug.len()).find(|&i| aug[i].get(c)) else {
            continue;
        };
        aug.swap(r, p);
        let pivot = aug[r].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    // A zero row with a nonzero right-hand side means no solution.
    if aug[r..].iter().any(|row| row.get(cols)) {
        return Ok(None);
    }
    let mut x = BitVector::zeros(cols);
    for (row, &c) in aug.iter().zip(&pivots) {
        if row.get(cols) {
            x.set(c, true);
        }
    }
    Ok(Some(x))
}

/// Iterator over all codewords `a · M`, messages in increasing binary
/// order with row 1 as the most significant message bit.
pub struct Codewords<'a> {
    matrix: &'a BitMatrix,
    next: u64,
    end: u64,
}

impl Iterator for Codewords<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.next >= self.end {
            return None;
        }
        let a = self.next;
        self.next += 1;
        let k = self.matrix.rows();
        let mut word = BitVector::zeros(self.matrix.cols());
        for (r, row) in self.matrix.rows.iter().enumerate() {
            if (a >> (k - 1 - r)) & 1 == 1 {
                word.xor_assign(row);
            }
        }
        Some(word)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// Enumerates all `2^rows` codewords of the row space of `m`.
pub fn enumerate_codewords(m: &BitMatrix) -> Result<Codewords<'_>> {
    if m.rows() > MAX_ENUMERATION_ROWS {
        return Err(Error::Capacity {
            what: "codeword enumeration (message bits)",
            requested: m.rows(),
            limit: MAX_ENUMERATION_ROWS,
        });
    }
    Ok(Codewords {
        matrix: m,
        next: 0,
        end: 1u64 << m.rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g12() -> BitMatrix {
        BitMatrix::parse_rows(&["1111", "0011", "0101"]).unwrap()
    }

    #[test]
    fn bitvector_basics() {
        let v = BitVector::parse("0110 1").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.support(), vec![2, 3, 5]);
        assert_eq!(v.to_string(), "01101");
        assert_eq!(v.not().to_string(), "10010");
        assert!(BitVector::parse("01x").is_err());
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let mut v = BitVector::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.not().weight(), 127);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&g12()), 3);
        assert_eq!(rank(&BitMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&BitMatrix::identity(7)), 7);
        assert_eq!(column_rank(&g12()), 3);
    }

    #[test]
    fn solve_picks_canonical_selector() {
        let g = g12();
        let x = solve_combination(&g, &BitVector::unit(3, 1))
            .unwrap()
            .unwrap();
        assert_eq!(x.support(), vec![1, 3]);
        let zero = solve_combination(&g, &BitVector::zeros(3))
            .unwrap()
            .unwrap();
        assert!(zero.is_zero());
        let id = solve_combination(&BitMatrix::identity(3), &BitVector::unit(3, 0))
            .unwrap()
            .unwrap();
        assert_eq!(id.support(), vec![1]);
    }

    #[test]
    fn solve_reports_no_solution_and_mismatch() {
        let m = BitMatrix::parse_rows(&["11", "11"]).unwrap();
        assert_eq!(
            solve_combination(&m, &BitVector::parse("10").unwrap()).unwrap(),
            None
        );
        assert!(matches!(
            solve_combination(&m, &BitVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn codeword_enumeration() {
        let g = g12();
        let words: Vec<_> = enumerate_codewords(&g).unwrap().collect();
        assert_eq!(words.len(), 8);
        assert_eq!(words[0].to_string(), "0000");
        // message 001 selects the last row
        assert_eq!(words[1].to_string(), "0101");
        let one = BitMatrix::parse_rows(&["11"]).unwrap();
        let w: Vec<String> = enumerate_codewords(&one)
            .unwrap()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(w, vec!["00", "11"]);
        let big = BitMatrix::zeros(21, 4);
        assert!(matches!(
            enumerate_codewords(&big),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn mul_transpose_and_encode() {
        let g = g12();
        let prod = g.mul_transpose(&g).unwrap();
        assert_eq!(prod.rows(), 3);
        let cw = g.encode(&BitVector::parse("110").unwrap()).unwrap();
        assert_eq!(cw.to_string(), "1100");
        assert_eq!(
            g.mul_vec(&BitVector::parse("1010").unwrap())
                .unwrap()
                .to_string(),
            "010"
        );
    }
}
