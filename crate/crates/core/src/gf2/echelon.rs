use super::{xor_words, BitMatrix, BitVec, WORD_BITS};

/// Reduced row echelon form of a matrix together with its pivot columns.
///
/// Pivoting is deterministic: columns are scanned left to right and the first
/// remaining row with a one in that column becomes the pivot row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    /// `rank` rows in reduced echelon form; row `i` has its leading one at
    /// `pivot_columns[i]` and zeros in every other pivot column.
    pub rref: BitMatrix,
}

impl RankProfile {
    pub fn new(m: &BitMatrix) -> Self {
        let mut work = m.clone();
        let pivots = eliminate(&mut work, true);
        let rank = pivots.len();
        let mut rref = BitMatrix::zeros(rank, m.cols());
        for r in 0..rank {
            rref.row_words_mut(r).copy_from_slice(work.row_words(r));
        }
        Self {
            rank,
            pivot_columns: pivots,
            rref,
        }
    }

    pub fn cols(&self) -> usize {
        self.rref.cols()
    }

    /// Reduces `x` against the echelon rows in place; the result is zero
    /// exactly when `x` was in the row space.
    pub fn reduce(&self, x: &mut [u64]) {
        for (i, &p) in self.pivot_columns.iter().enumerate() {
            if (x[p / WORD_BITS] >> (p % WORD_BITS)) & 1 == 1 {
                let w = p / WORD_BITS;
                xor_words(&mut x[w..], &self.rref.row_words(i)[w..]);
            }
        }
    }

    pub fn contains(&self, x: &BitVec) -> bool {
        assert_eq!(x.len(), self.cols(), "row space membership length mismatch");
        let mut w = x.words().to_vec();
        self.reduce(&mut w);
        w.iter().all(|&v| v == 0)
    }

    /// Nullspace basis read off the reduced form: one vector per free column.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let cols = self.cols();
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivot_columns {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zeros(free.len(), cols);
        for (j, &f) in free.iter().enumerate() {
            basis.set(j, f, true);
            for (i, &p) in self.pivot_columns.iter().enumerate() {
                if self.rref.get(i, f) {
                    basis.set(j, p, true);
                }
            }
        }
        basis
    }
}

/// GF(2) rank without keeping the reduced form.
pub fn rank(m: &BitMatrix) -> usize {
    // Elimination cost scales with the row stride, so work on the orientation
    // with fewer columns.
    let mut work = if m.cols() > m.rows() {
        m.transpose()
    } else {
        m.clone()
    };
    eliminate(&mut work, false).len()
}

/// In-place Gaussian elimination. Returns the pivot columns; afterwards the
/// first `pivots.len()` rows hold the echelon form. With `reduce` set, entries
/// above each pivot are cleared as well.
fn eliminate(m: &mut BitMatrix, reduce: bool) -> Vec<usize> {
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for c in 0..cols {
        if next == rows {
            break;
        }
        let w = c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        let Some(p) = (next..rows).find(|&r| m.row_words(r)[w] & mask != 0) else {
            continue;
        };
        m.swap_rows(p, next);
        let start = if reduce { 0 } else { next + 1 };
        for r in start..rows {
            if r != next && m.row_words(r)[w] & mask != 0 {
                m.xor_row_into(next, r, w);
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// Ones of `x` that fall in non-pivot columns after reduction.
#[cfg(test)]
pub(crate) fn residual_support(profile: &RankProfile, x: &BitVec) -> Vec<usize> {
    let mut w = x.words().to_vec();
    profile.reduce(&mut w);
    super::iter_ones(&w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg32_point_by_line() -> BitMatrix {
        // points of PG(3,2) are the nonzero vectors 1..16 of GF(2)^4; a line is
        // {a, b, a^b}.
        let mut lines = Vec::new();
        for a in 1u32..16 {
            for b in (a + 1)..16 {
                let c = a ^ b;
                if c > b {
                    lines.push([a - 1, b - 1, c - 1]);
                }
            }
        }
        assert_eq!(lines.len(), 35);
        let mut h = BitMatrix::zeros(15, 35);
        for (j, l) in lines.iter().enumerate() {
            for &p in l {
                h.set(p as usize, j, true);
            }
        }
        h
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(rank(&BitMatrix::identity(3)), 3);
        assert_eq!(BitMatrix::identity(4).nullspace_basis().rows(), 0);
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        assert_eq!(rank(&BitMatrix::zeros(0, 0)), 0);
        assert_eq!(rank(&BitMatrix::zeros(5, 0)), 0);
        assert_eq!(BitMatrix::zeros(0, 4).nullspace_basis().rows(), 4);
    }

    #[test]
    fn pg32_rank_is_eleven() {
        let h = pg32_point_by_line();
        assert_eq!(rank(&h), 11);
        let p = RankProfile::new(&h);
        assert_eq!(p.rank, 11);
        assert!(p.pivot_columns.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn all_ones_against_pg32() {
        // Oracle: x is in the row space iff appending it leaves the rank unchanged.
        let h = pg32_point_by_line();
        let ones = BitVec::ones(35);
        let mut rows: Vec<BitVec> = (0..h.rows()).map(|r| h.row(r)).collect();
        rows.push(ones.clone());
        let appended = BitMatrix::from_rows(35, &rows).unwrap();
        let expected = rank(&appended) == rank(&h);
        assert_eq!(h.in_row_space(&ones).unwrap(), expected);
    }

    #[test]
    fn rows_and_zero_are_in_row_space() {
        let h = pg32_point_by_line();
        let p = h.rank_profile();
        assert!(p.contains(&BitVec::zeros(35)));
        for r in 0..h.rows() {
            assert!(p.contains(&h.row(r)));
        }
        assert!(h.in_row_space(&BitVec::zeros(3)).is_err());
    }

    #[test]
    fn nullspace_vectors_have_zero_syndrome() {
        let h = pg32_point_by_line();
        let ns = h.nullspace_basis();
        assert_eq!(ns.rows(), 35 - 11);
        assert_eq!(rank(&ns), ns.rows());
        for r in 0..ns.rows() {
            assert!(h.mul_vec(&ns.row(r)).unwrap().is_zero());
        }
    }

    #[test]
    fn residual_is_empty_for_members() {
        let h = pg32_point_by_line();
        let p = h.rank_profile();
        let mut x = h.row(0);
        x.xor_assign(&h.row(3));
        assert!(residual_support(&p, &x).is_empty());
    }
}
