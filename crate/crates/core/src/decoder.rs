//! Syndrome decoding by log-domain sum-product on a Tanner graph, flooding
//! schedule.

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoderError {
    #[error("prior flip probability must lie in (0, 0.5), got {0}")]
    InvalidPrior(f64),
    #[error("syndrome has {actual} bits, the graph has {expected} checks")]
    SyndromeLength { expected: usize, actual: usize },
}

pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_LLR_CLAMP: f64 = 30.0;

/// Bipartite graph of a parity-check matrix. Edges are numbered check by
/// check, bits in increasing order within a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    pub n_bits: usize,
    pub n_checks: usize,
    /// Bits of each check.
    pub check_bits: Vec<Vec<usize>>,
    /// Checks of each bit.
    pub bit_checks: Vec<Vec<usize>>,
    check_start: Vec<usize>,
    edge_bit: Vec<usize>,
    /// Edge indices of each bit, in increasing check order.
    bit_edges: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn n_edges(&self) -> usize {
        self.edge_bit.len()
    }

    /// `H e` for an error pattern given as one byte (0 or 1) per bit.
    pub fn syndrome_of(&self, e: &[u8]) -> Vec<u8> {
        self.check_bits
            .iter()
            .map(|bits| bits.iter().fold(0u8, |acc, &b| acc ^ e[b]))
            .collect()
    }
}

/// All rows are kept, including dependent ones.
pub fn build_tanner(h: &BitMatrix) -> TannerGraph {
    let check_bits: Vec<Vec<usize>> = (0..h.rows()).map(|r| h.row_support(r)).collect();
    let mut bit_checks = vec![Vec::new(); h.cols()];
    let mut bit_edges = vec![Vec::new(); h.cols()];
    let mut check_start = Vec::with_capacity(h.rows() + 1);
    let mut edge_bit = Vec::new();
    for (c, bits) in check_bits.iter().enumerate() {
        check_start.push(edge_bit.len());
        for &b in bits {
            bit_checks[b].push(c);
            bit_edges[b].push(edge_bit.len());
            edge_bit.push(b);
        }
    }
    check_start.push(edge_bit.len());
    TannerGraph {
        n_bits: h.cols(),
        n_checks: h.rows(),
        check_bits,
        bit_checks,
        check_start,
        edge_bit,
        bit_edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub converged: bool,
    pub iterations_used: usize,
    pub error_estimate: BitVec,
    /// `H e_hat + s`; zero exactly when converged.
    pub residual_syndrome: BitVec,
}

/// Reusable message buffers for decoding on one graph.
pub struct SumProduct<'g> {
    graph: &'g TannerGraph,
    pub max_iter: usize,
    pub clamp: f64,
    to_check: Vec<f64>,
    to_bit: Vec<f64>,
    tanh_buf: Vec<f64>,
    prefix_buf: Vec<f64>,
    estimate: Vec<u8>,
}

impl<'g> SumProduct<'g> {
    pub fn new(graph: &'g TannerGraph) -> Self {
        let e = graph.n_edges();
        let widest = graph.check_bits.iter().map(|b| b.len()).max().unwrap_or(0);
        Self {
            graph,
            max_iter: DEFAULT_MAX_ITER,
            clamp: DEFAULT_LLR_CLAMP,
            to_check: vec![0.0; e],
            to_bit: vec![0.0; e],
            tanh_buf: vec![0.0; widest],
            prefix_buf: vec![0.0; widest + 1],
            estimate: vec![0; graph.n_bits],
        }
    }

    pub fn graph(&self) -> &TannerGraph {
        self.graph
    }

    /// Hard decision of the last decode, one byte per bit.
    pub fn estimate(&self) -> &[u8] {
        &self.estimate
    }

    fn syndrome_matches(&self, syndrome: &[u8]) -> bool {
        let g = self.graph;
        (0..g.n_checks).all(|c| {
            let par = g.edge_bit[g.check_start[c]..g.check_start[c + 1]]
                .iter()
                .fold(0u8, |acc, &b| acc ^ self.estimate[b]);
            par == syndrome[c]
        })
    }

    /// Decodes a syndrome given as one byte per check. Returns whether the
    /// hard decision reproduces the syndrome and the iteration at which it
    /// did (or `max_iter`).
    pub fn decode_bytes(&mut self, syndrome: &[u8], prior: f64) -> Result<(bool, usize), DecoderError> {
        if !(prior > 0.0 && prior < 0.5) {
            return Err(DecoderError::InvalidPrior(prior));
        }
        let g = self.graph;
        if syndrome.len() != g.n_checks {
            return Err(DecoderError::SyndromeLength {
                expected: g.n_checks,
                actual: syndrome.len(),
            });
        }
        let clamp = self.clamp;
        let l0 = ((1.0 - prior) / prior).ln().min(clamp);
        self.estimate.iter_mut().for_each(|x| *x = 0);
        if syndrome.iter().all(|&s| s == 0) {
            return Ok((true, 0));
        }
        self.to_check.iter_mut().for_each(|m| *m = l0);
        for iter in 1..=self.max_iter {
            // check to bit: tanh rule with the syndrome bit as sign
            for c in 0..g.n_checks {
                let (lo, hi) = (g.check_start[c], g.check_start[c + 1]);
                let deg = hi - lo;
                let th = &mut self.tanh_buf[..deg];
                let prefix = &mut self.prefix_buf[..=deg];
                prefix[0] = 1.0;
                for i in 0..deg {
                    th[i] = (0.5 * self.to_check[lo + i]).tanh();
                    prefix[i + 1] = prefix[i] * th[i];
                }
                let sign = if syndrome[c] == 1 { -1.0 } else { 1.0 };
                let mut suffix = 1.0;
                for i in (0..deg).rev() {
                    let msg = sign * 2.0 * (prefix[i] * suffix).atanh();
                    self.to_bit[lo + i] = msg.clamp(-clamp, clamp);
                    suffix *= th[i];
                }
            }
            // bit to check, and hard decision
            for b in 0..g.n_bits {
                let edges = &g.bit_edges[b];
                let total: f64 = l0 + edges.iter().map(|&e| self.to_bit[e]).sum::<f64>();
                self.estimate[b] = u8::from(total < 0.0);
                for &e in edges {
                    self.to_check[e] = (total - self.to_bit[e]).clamp(-clamp, clamp);
                }
            }
            if self.syndrome_matches(syndrome) {
                return Ok((true, iter));
            }
        }
        Ok((false, self.max_iter))
    }

    pub fn decode(&mut self, syndrome: &BitVec, prior: f64) -> Result<DecodeOutcome, DecoderError> {
        let s = syndrome.to_bits();
        let (converged, iterations_used) = self.decode_bytes(&s, prior)?;
        let residual: Vec<u8> = self
            .graph
            .syndrome_of(&self.estimate)
            .iter()
            .zip(&s)
            .map(|(a, b)| a ^ b)
            .collect();
        let residual_syndrome = BitVec::from_bits(&residual);
        debug_assert!(!converged || residual_syndrome.is_zero());
        Ok(DecodeOutcome {
            converged,
            iterations_used,
            error_estimate: BitVec::from_bits(&self.estimate),
            residual_syndrome,
        })
    }
}

/// One-shot decode with a fresh workspace.
pub fn sp_decode(
    graph: &TannerGraph,
    syndrome: &BitVec,
    prior: f64,
    max_iter: usize,
) -> Result<DecodeOutcome, DecoderError> {
    let mut sp = SumProduct::new(graph);
    sp.max_iter = max_iter;
    sp.decode(syndrome, prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::develop_cyclic;

    fn fano_graph() -> TannerGraph {
        build_tanner(&develop_cyclic(7, &[vec![0, 1, 3]]).unwrap().point_by_block())
    }

    #[test]
    fn graph_shape() {
        let g = fano_graph();
        assert_eq!((g.n_bits, g.n_checks, g.n_edges()), (7, 7, 21));
        for (c, bits) in g.check_bits.iter().enumerate() {
            for &b in bits {
                assert!(g.bit_checks[b].contains(&c));
            }
        }
    }

    #[test]
    fn zero_syndrome_is_a_fixed_point() {
        let g = fano_graph();
        let out = sp_decode(&g, &BitVec::zeros(7), 0.01, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations_used, 0);
        assert!(out.error_estimate.is_zero());
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = fano_graph();
        assert!(sp_decode(&g, &BitVec::zeros(7), 0.5, 10).is_err());
        assert!(sp_decode(&g, &BitVec::zeros(7), 0.0, 10).is_err());
        assert!(sp_decode(&g, &BitVec::zeros(6), 0.1, 10).is_err());
    }

    #[test]
    fn single_check_equals_exact_marginals() {
        // H = [1 1 1]: one iteration gives the exact posterior LLRs
        let h = BitMatrix::from_dense(&[vec![1, 1, 1]]).unwrap();
        let g = build_tanner(&h);
        let p: f64 = 0.1;
        let mut sp = SumProduct::new(&g);
        sp.max_iter = 1;
        sp.decode_bytes(&[1], p).unwrap();
        // brute-force posterior of bit 0 given odd parity
        let mut post = [0.0f64; 2];
        for e in 0..8u32 {
            if e.count_ones() % 2 == 1 {
                let w = e.count_ones() as i32;
                post[(e & 1) as usize] += p.powi(w) * (1.0 - p).powi(3 - w);
            }
        }
        let exact = (post[0] / post[1]).ln();
        let l0 = ((1.0 - p) / p).ln();
        let got = l0 + sp.to_bit[0];
        assert!((got - exact).abs() < 1e-12, "{got} vs {exact}");
    }

    #[test]
    fn messages_stay_finite_and_clamped() {
        let g = fano_graph();
        let mut sp = SumProduct::new(&g);
        sp.max_iter = 50;
        let _ = sp.decode_bytes(&[1, 0, 1, 1, 0, 0, 1], 1e-9).unwrap();
        assert!(sp.to_bit.iter().chain(&sp.to_check).all(|m| m.is_finite() && m.abs() <= 30.0));
    }
}
