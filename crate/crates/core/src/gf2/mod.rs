//! Dense bit-packed linear algebra over GF(2).
//!
//! Matrices are stored row-major with each row padded to a whole number of
//! 64-bit words. Bits past the last column of a row are always zero, so row
//! words can be XORed, compared and popcounted without masking.

mod distance;
mod echelon;

pub use distance::{
    count_codewords_of_weight, min_distance, support_search_range, weight_distribution,
    weight_distribution_from_dual,
    DistanceBudget, DistanceResult, DistanceStatus, DistanceStrategy,
};
pub use echelon::{rank, RankProfile};

use std::fmt;

use thiserror::Error;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: {op} needs {expected}, got {actual}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("enumeration needs 2^{needed} codewords, above the cap 2^{cap}")]
    EnumerationTooLarge { needed: usize, cap: usize },
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(Gf2Error::IndexOutOfRange { index: i, len });
            }
            v.flip(i);
        }
        Ok(v)
    }

    /// Builds a vector from 0/1 bytes; any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut v = Self { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        xor_words(&mut self.words, &other.words);
    }

    /// Parity of the bitwise AND with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the set bits in increasing order.
    pub fn support(&self) -> Vec<usize> {
        iter_ones(&self.words).collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

#[inline]
pub(crate) fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Iterates the positions of set bits in a word slice.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            }
        })
    })
}

/// Dense matrix over GF(2), row-major and word-packed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose row `i` has ones exactly at `supports[i]`.
    pub fn from_row_supports(cols: usize, supports: &[Vec<usize>]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(supports.len(), cols);
        for (r, sup) in supports.iter().enumerate() {
            for &c in sup {
                if c >= cols {
                    return Err(Gf2Error::IndexOutOfRange { index: c, len: cols });
                }
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 bytes. All rows must share a length.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    op: "from_dense",
                    expected: cols,
                    actual: row.len(),
                });
            }
            for (c, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    op: "from_rows",
                    expected: cols,
                    actual: v.len(),
                });
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        let idx = r * self.stride + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        iter_ones(self.row_words(r)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Row indices of the ones in each column.
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for c in iter_ones(self.row_words(r)) {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let s = self.stride;
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`, touching only words from `from_word` on.
    #[inline]
    pub(crate) fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_words(&mut tail[from_word..s], &head[src * s + from_word..(src + 1) * s]);
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_words(&mut head[dst * s + from_word..(dst + 1) * s], &tail[from_word..s]);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in iter_ones(self.row_words(r)) {
                t.data[c * t.stride + r / WORD_BITS] |= 1u64 << (r % WORD_BITS);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "multiply",
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            let dst = &mut out.data[r * s..(r + 1) * s];
            for k in iter_ones(&self.data[r * self.stride..(r + 1) * self.stride]) {
                xor_words(dst, other.row_words(k));
            }
        }
        Ok(out)
    }

    /// `M · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "mul_vec",
                expected: self.cols,
                actual: x.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.flip(r);
            }
        }
        Ok(out)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, keep.len());
        for r in 0..self.rows {
            let row = self.row_words(r);
            for (j, &c) in keep.iter().enumerate() {
                if (row[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1 {
                    out.data[r * out.stride + j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn rank_profile(&self) -> RankProfile {
        RankProfile::new(self)
    }

    /// Basis of `{x : M x = 0}`, one vector per row of the result.
    pub fn nullspace_basis(&self) -> BitMatrix {
        self.rank_profile().nullspace_basis()
    }

    /// Whether `x` is a GF(2) combination of the rows of this matrix.
    pub fn in_row_space(&self, x: &BitVec) -> Result<bool, Gf2Error> {
        if x.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "in_row_space",
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok(self.rank_profile().contains(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            for c in 0..self.cols.min(128) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> BitMatrix {
        let lines = [
            [0, 1, 3],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 6],
            [4, 5, 0],
            [5, 6, 1],
            [6, 0, 2],
        ];
        // point-by-block
        let mut h = BitMatrix::zeros(7, 7);
        for (b, l) in lines.iter().enumerate() {
            for &p in l {
                h.set(p, b, true);
            }
        }
        h
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        let m = BitMatrix::identity(65).transpose();
        assert_eq!(m.count_ones(), 65);
    }

    #[test]
    fn identity_is_a_two_sided_unit() {
        let h = fano();
        assert_eq!(BitMatrix::identity(7).multiply(&h).unwrap(), h);
        assert_eq!(h.multiply(&BitMatrix::identity(7)).unwrap(), h);
    }

    #[test]
    fn fano_gram_matrix_is_all_ones() {
        let h = fano();
        let g = h.multiply(&h.transpose()).unwrap();
        assert_eq!(g.count_ones(), 49);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn multiply_rejects_bad_shapes() {
        let a = BitMatrix::zeros(3, 4);
        let b = BitMatrix::zeros(3, 4);
        assert!(matches!(
            a.multiply(&b),
            Err(Gf2Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn swap_and_xor_rows() {
        let mut m = BitMatrix::from_dense(&[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        m.swap_rows(0, 1);
        assert_eq!(m.row_support(0), vec![1, 2]);
        m.xor_row_into(1, 0, 0);
        assert_eq!(m.row_support(0), vec![0, 1]);
        m.xor_row_into(0, 1, 0);
        assert_eq!(m.row_support(1), vec![1, 2]);
    }

    #[test]
    fn select_columns_keeps_order() {
        let m = BitMatrix::from_dense(&[vec![1, 0, 1, 1], vec![0, 1, 1, 0]]).unwrap();
        let s = m.select_columns(&[3, 1]);
        assert_eq!(s.row_support(0), vec![0]);
        assert_eq!(s.row_support(1), vec![1]);
    }

    #[test]
    fn mul_vec_matches_matrix_product() {
        let h = fano();
        let x = BitVec::from_support(7, &[0, 3]).unwrap();
        let xm = BitMatrix::from_rows(7, std::slice::from_ref(&x)).unwrap().transpose();
        let prod = h.multiply(&xm).unwrap().transpose().row(0);
        assert_eq!(h.mul_vec(&x).unwrap(), prod);
    }
}
