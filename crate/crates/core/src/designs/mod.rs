//! Incidence structures and the Steiner-design machinery built on them.

mod gdd;
mod girth;
mod pasch;
mod steiner;

pub use gdd::{
    build_transversal_design, compose_gdd_spread, delete_subdesigns, verify_gdd,
    GroupDivisibleDesign,
};
pub use girth::{bipartite_girth, matrix_girth, tanner_girth, Girth};
pub use pasch::count_pasch;
pub use steiner::{build_sts, check_admissible, develop_cyclic, verify_partial_steiner, verify_steiner};

use thiserror::Error;

use crate::field::FieldError;
use crate::gf2::BitMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("parameters (v={v}, mu={mu}, lambda={lambda}) fail the divisibility conditions: r={r_num}/{r_den}, b={b_num}/{b_den}")]
    Inadmissible {
        v: usize,
        mu: usize,
        lambda: usize,
        r_num: usize,
        r_den: usize,
        b_num: usize,
        b_den: usize,
    },
    #[error("block {block} has size {size}, expected {expected}")]
    WrongBlockSize {
        block: usize,
        size: usize,
        expected: usize,
    },
    #[error("uncovered pair {{{0}, {1}}}")]
    UncoveredPair(usize, usize),
    #[error("pair {{{}, {}}} is covered by blocks {} and {}", pair.0, pair.1, blocks.0, blocks.1)]
    RepeatedPair {
        pair: (usize, usize),
        blocks: (usize, usize),
    },
    #[error("block {block} contains point {point}, outside 0..{v}")]
    PointOutOfRange { block: usize, point: usize, v: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("block {block} appears more than once")]
    DuplicateBlock { block: usize },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("pair {{{0}, {1}}} lies inside a group but is covered by a block")]
    PairInsideGroup(usize, usize),
    #[error("groups do not partition the points: {0}")]
    BadGroups(String),
    #[error("part {part} is not a subdesign: {reason}")]
    NotASubdesign { part: usize, reason: String },
    #[error("parts {a} and {b} share point {point}")]
    PartsOverlap { a: usize, b: usize, point: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Points `0..v` and a list of blocks, each a strictly increasing list of
/// point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    provenance: String,
}

impl IncidenceStructure {
    /// Sorts each block, sorts the block list lexicographically, and rejects
    /// out-of-range points, repeated points and repeated blocks.
    pub fn new(
        v: usize,
        blocks: Vec<Vec<usize>>,
        provenance: impl Into<String>,
    ) -> Result<Self, DesignError> {
        let mut blocks = blocks;
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        Self::from_sorted(v, blocks, provenance)
    }

    /// Like [`new`](Self::new) but keeps the block order as given. Each block
    /// must already be sorted.
    pub fn from_sorted(
        v: usize,
        blocks: Vec<Vec<usize>>,
        provenance: impl Into<String>,
    ) -> Result<Self, DesignError> {
        let mut seen = std::collections::HashSet::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(DesignError::EmptyBlock { block: i });
            }
            for w in b.windows(2) {
                if w[0] == w[1] {
                    return Err(DesignError::RepeatedPoint {
                        block: i,
                        point: w[0],
                    });
                }
                if w[0] > w[1] {
                    return Err(DesignError::InvalidParameters(format!(
                        "block {i} is not sorted"
                    )));
                }
            }
            if let Some(&p) = b.last() {
                if p >= v {
                    return Err(DesignError::PointOutOfRange { block: i, point: p, v });
                }
            }
            if !seen.insert(b.as_slice()) {
                return Err(DesignError::DuplicateBlock { block: i });
            }
        }
        Ok(Self {
            v,
            blocks,
            labels: None,
            provenance: provenance.into(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, DesignError> {
        if labels.len() != self.v {
            return Err(DesignError::SizeMismatch(format!(
                "{} labels for {} points",
                labels.len(),
                self.v
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, p: impl Into<String>) {
        self.provenance = p.into();
    }

    /// Index of a block given as a sorted point list.
    pub fn find_block(&self, block: &[usize]) -> Option<usize> {
        self.blocks.iter().position(|b| b == block)
    }

    /// Block size if all blocks share one.
    pub fn uniform_block_size(&self) -> Option<usize> {
        let first = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == first).then_some(first)
    }

    /// For each point, the indices of the blocks containing it.
    pub fn point_blocks(&self) -> Vec<Vec<usize>> {
        let mut pb = vec![Vec::new(); self.v];
        for (j, b) in self.blocks.iter().enumerate() {
            for &p in b {
                pb[p].push(j);
            }
        }
        pb
    }

    pub fn replication_numbers(&self) -> Vec<usize> {
        let mut r = vec![0; self.v];
        for b in &self.blocks {
            for &p in b {
                r[p] += 1;
            }
        }
        r
    }

    /// The `v x b` incidence matrix.
    pub fn point_by_block(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.v, self.blocks.len());
        for (j, b) in self.blocks.iter().enumerate() {
            for &p in b {
                h.set(p, j, true);
            }
        }
        h
    }

    /// The `b x v` incidence matrix.
    pub fn block_by_point(&self) -> BitMatrix {
        BitMatrix::from_row_supports(self.v, &self.blocks).expect("blocks are in range")
    }

    /// Keeps the blocks for which `keep` is true, in their current order.
    pub fn retain_blocks(&self, keep: impl Fn(usize) -> bool, provenance: impl Into<String>) -> Self {
        Self {
            v: self.v,
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, b)| b.clone())
                .collect(),
            labels: self.labels.clone(),
            provenance: provenance.into(),
        }
    }
}

/// Parameters of a 2-(v, mu, lambda) design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub v: usize,
    pub mu: usize,
    pub lambda: usize,
    pub b: usize,
    pub r: usize,
}

impl DesignParams {
    /// Derives `b` and `r` from `(v, mu, lambda)`; `None` if either is not
    /// an integer.
    pub fn derive(v: usize, mu: usize, lambda: usize) -> Option<Self> {
        if mu < 2 || v < mu {
            return None;
        }
        let r_num = lambda * (v - 1);
        let b_num = lambda * v * (v - 1);
        let b_den = mu * (mu - 1);
        (r_num % (mu - 1) == 0 && b_num % b_den == 0).then(|| Self {
            v,
            mu,
            lambda,
            b: b_num / b_den,
            r: r_num / (mu - 1),
        })
    }
}

/// One member of a spread: a point set and the blocks lying inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadPart {
    pub points: Vec<usize>,
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SpreadPartition {
    pub parts: Vec<SpreadPart>,
}

impl SpreadPartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks that the parts are pairwise point-disjoint, that every listed
    /// block lies inside its part, and that each part is a Steiner subdesign
    /// of `s`: every pair of its points is covered by one of its own blocks.
    /// With `full` set the point sets must also cover every point.
    pub fn validate(&self, s: &IncidenceStructure, full: bool) -> Result<(), DesignError> {
        let mut owner = vec![usize::MAX; s.v()];
        for (i, part) in self.parts.iter().enumerate() {
            for &p in &part.points {
                if p >= s.v() {
                    return Err(DesignError::NotASubdesign {
                        part: i,
                        reason: format!("point {p} out of range"),
                    });
                }
                if owner[p] != usize::MAX {
                    return Err(DesignError::PartsOverlap {
                        a: owner[p],
                        b: i,
                        point: p,
                    });
                }
                owner[p] = i;
            }
        }
        if full {
            if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
                return Err(DesignError::NotASubdesign {
                    part: usize::MAX,
                    reason: format!("point {p} is in no part of a full spread"),
                });
            }
        }
        for (i, part) in self.parts.iter().enumerate() {
            validate_part(s, i, part, &owner)?;
        }
        Ok(())
    }
}

fn validate_part(
    s: &IncidenceStructure,
    i: usize,
    part: &SpreadPart,
    owner: &[usize],
) -> Result<(), DesignError> {
    let k = part.points.len();
    let pos: std::collections::HashMap<usize, usize> =
        part.points.iter().enumerate().map(|(a, &p)| (p, a)).collect();
    let mut covered = vec![false; k * k];
    for &bi in &part.blocks {
        if bi >= s.b() {
            return Err(DesignError::NotASubdesign {
                part: i,
                reason: format!("block index {bi} out of range"),
            });
        }
        let b = s.block(bi);
        if let Some(&p) = b.iter().find(|&&p| owner[p] != i) {
            return Err(DesignError::NotASubdesign {
                part: i,
                reason: format!("block {bi} has point {p} outside the part"),
            });
        }
        for (x, &a) in b.iter().enumerate() {
            for &c in &b[x + 1..] {
                let (pa, pc) = (pos[&a], pos[&c]);
                let slot = &mut covered[pa.min(pc) * k + pa.max(pc)];
                if *slot {
                    return Err(DesignError::NotASubdesign {
                        part: i,
                        reason: format!("pair {{{a}, {c}}} covered twice"),
                    });
                }
                *slot = true;
            }
        }
    }
    for a in 0..k {
        for c in (a + 1)..k {
            if !covered[a * k + c] {
                return Err(DesignError::NotASubdesign {
                    part: i,
                    reason: format!(
                        "pair {{{}, {}}} is not covered by the part's blocks",
                        part.points[a], part.points[c]
                    ),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn fano() -> IncidenceStructure {
        develop_cyclic(7, &[vec![0, 1, 3]]).unwrap()
    }

    #[test]
    fn blocks_are_canonicalized() {
        let s = IncidenceStructure::new(4, vec![vec![3, 1], vec![0, 2]], "t").unwrap();
        assert_eq!(s.blocks(), &[vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn malformed_blocks_are_rejected() {
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 3]], "t"),
            Err(DesignError::PointOutOfRange { .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 0]], "t"),
            Err(DesignError::RepeatedPoint { .. })
        ));
        assert!(matches!(
            IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 0]], "t"),
            Err(DesignError::DuplicateBlock { .. })
        ));
    }

    #[test]
    fn derived_params_follow_the_counting_identities() {
        let p = DesignParams::derive(7, 3, 1).unwrap();
        assert_eq!((p.b, p.r), (7, 3));
        assert!(DesignParams::derive(8, 3, 1).is_none());
        let p = DesignParams::derive(13, 4, 1).unwrap();
        assert_eq!((p.b, p.r), (13, 4));
    }

    #[test]
    fn incidence_matrices_are_transposes() {
        let s = fano();
        assert_eq!(s.point_by_block().transpose(), s.block_by_point());
    }

    #[test]
    fn spread_validation_catches_overlap_and_non_subdesigns() {
        let s = fano();
        let line = |i: usize| SpreadPart {
            points: s.block(i).to_vec(),
            blocks: vec![i],
        };
        let ok = SpreadPartition { parts: vec![line(0)] };
        assert!(ok.validate(&s, false).is_ok());
        assert!(ok.validate(&s, true).is_err());
        let overlap = SpreadPartition {
            parts: vec![line(0), line(1)],
        };
        assert!(matches!(
            overlap.validate(&s, false),
            Err(DesignError::PartsOverlap { .. })
        ));
        let missing = SpreadPartition {
            parts: vec![SpreadPart {
                points: s.block(0).to_vec(),
                blocks: vec![],
            }],
        };
        assert!(matches!(
            missing.validate(&s, false),
            Err(DesignError::NotASubdesign { .. })
        ));
    }
}
