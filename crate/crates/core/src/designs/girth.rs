use std::collections::VecDeque;

use super::IncidenceStructure;
use crate::gf2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Girth {
    Exact(usize),
    /// No cycle shorter than the cap exists.
    AtLeast(usize),
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Exact(g) => write!(f, "{g}"),
            Girth::AtLeast(g) => write!(f, ">={g}"),
        }
    }
}

/// Girth of the bipartite point/block graph.
pub fn tanner_girth(s: &IncidenceStructure, cap: usize) -> Girth {
    bipartite_girth(&s.point_blocks(), s.blocks(), cap)
}

/// Girth of the Tanner graph of a parity-check matrix (rows are checks).
pub fn matrix_girth(h: &BitMatrix, cap: usize) -> Girth {
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|r| h.row_support(r)).collect();
    bipartite_girth(&rows, &h.column_supports(), cap)
}

/// Shortest cycle in the bipartite graph with `left[i]` the right-neighbours
/// of left vertex `i` and `right[j]` the left-neighbours of right vertex `j`.
///
/// Runs a breadth-first search from every left vertex. Every cycle passes
/// through a left vertex, and a search rooted on a shortest cycle reports it
/// exactly, so the minimum over roots is the girth.
pub fn bipartite_girth(left: &[Vec<usize>], right: &[Vec<usize>], cap: usize) -> Girth {
    let nl = left.len();
    let total = nl + right.len();
    let mut dist = vec![u32::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut best = usize::MAX;
    for root in 0..nl {
        for &t in &touched {
            dist[t] = u32::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let du = dist[u] as usize;
            // any cycle closed from here has length at least 2*du
            if 2 * du >= best.min(cap) {
                break;
            }
            let neighbours: Box<dyn Iterator<Item = usize>> = if u < nl {
                Box::new(left[u].iter().map(|&j| j + nl))
            } else {
                Box::new(right[u - nl].iter().copied())
            };
            for w in neighbours {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == u32::MAX {
                    dist[w] = du as u32 + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(du + dist[w] as usize + 1);
                }
            }
        }
    }
    if best < cap {
        Girth::Exact(best)
    } else {
        Girth::AtLeast(cap)
    }
}
