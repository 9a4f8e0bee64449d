//! Minimum distance of the binary code `{x : M x = 0}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{iter_ones, xor_words, BitMatrix, Gf2Error, RankProfile, WORD_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceStrategy {
    /// Exhaustive when feasible, then support search, then random search.
    Auto,
    EnumerateCodewords,
    EnumerateSupports,
    RandomizedSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceStatus {
    Exact,
    Bounded,
    /// The code is `{0}`; there is no nonzero codeword.
    NoCodewords,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub status: DistanceStatus,
    pub lower: usize,
    pub upper: Option<usize>,
    /// Columns of `M` summing to zero, of size `upper`.
    pub witness: Option<Vec<usize>>,
}

impl DistanceResult {
    pub fn exact(d: usize, witness: Option<Vec<usize>>) -> Self {
        Self {
            status: DistanceStatus::Exact,
            lower: d,
            upper: Some(d),
            witness,
        }
    }

    pub fn bounded(lower: usize, upper: Option<usize>, witness: Option<Vec<usize>>) -> Self {
        if let Some(u) = upper {
            if u == lower {
                return Self::exact(u, witness);
            }
        }
        Self {
            status: DistanceStatus::Bounded,
            lower,
            upper,
            witness,
        }
    }

    fn no_codewords(n: usize) -> Self {
        Self {
            status: DistanceStatus::NoCodewords,
            lower: n + 1,
            upper: None,
            witness: None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == DistanceStatus::Exact
    }

    pub fn value(&self) -> Option<usize> {
        if self.is_exact() {
            self.upper
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistanceBudget {
    /// Largest code or dual dimension enumerated exhaustively.
    pub exponent_cap: usize,
    /// Largest weight tried by the support search.
    pub support_weight_cap: usize,
    /// Search-tree nodes the support search may visit before giving up.
    pub node_budget: u64,
    pub random_trials: u64,
    pub seed: u64,
    /// The automorphism group of the code is transitive on columns, so the
    /// support search may assume column 0 lies in a minimum-weight codeword.
    pub column_transitive: bool,
}

impl Default for DistanceBudget {
    fn default() -> Self {
        Self {
            exponent_cap: 26,
            support_weight_cap: 6,
            node_budget: 200_000_000,
            random_trials: 200,
            seed: 0,
            column_transitive: false,
        }
    }
}

pub fn min_distance(
    m: &BitMatrix,
    strategy: DistanceStrategy,
    budget: &DistanceBudget,
) -> Result<DistanceResult, Gf2Error> {
    let profile = RankProfile::new(m);
    let n = m.cols();
    let dim = n - profile.rank;
    if dim == 0 {
        return Ok(DistanceResult::no_codewords(n));
    }
    match strategy {
        DistanceStrategy::EnumerateCodewords => enumerate_codewords(m, &profile, budget),
        DistanceStrategy::EnumerateSupports => Ok(support_search(
            m,
            1,
            budget.support_weight_cap,
            budget.node_budget,
            budget.column_transitive,
        )),
        DistanceStrategy::RandomizedSearch => {
            Ok(randomized_search(&profile, budget.random_trials, budget.seed))
        }
        DistanceStrategy::Auto => {
            if dim.min(profile.rank) <= budget.exponent_cap {
                return enumerate_codewords(m, &profile, budget);
            }
            let found = support_search(
                m,
                1,
                budget.support_weight_cap,
                budget.node_budget,
                budget.column_transitive,
            );
            if found.is_exact() {
                return Ok(found);
            }
            let random = randomized_search(&profile, budget.random_trials, budget.seed);
            Ok(DistanceResult::bounded(
                found.lower,
                random.upper,
                random.witness,
            ))
        }
    }
}

fn enumerate_codewords(
    m: &BitMatrix,
    profile: &RankProfile,
    budget: &DistanceBudget,
) -> Result<DistanceResult, Gf2Error> {
    let n = m.cols();
    let dim = n - profile.rank;
    let cap = budget.exponent_cap;
    if dim <= cap && (dim <= profile.rank || profile.rank > cap) {
        let basis = profile.nullspace_basis();
        let (d, witness) = gray_min_weight(&basis);
        return Ok(DistanceResult::exact(d, Some(witness)));
    }
    if profile.rank <= cap {
        let dual = gray_weight_counts(&profile.rref);
        let d = dual_min_distance(n, &dual);
        // The dual route gives the weight but no codeword; look for one of
        // exactly that weight if it is cheap.
        let probe = support_search(m, d, d, budget.node_budget, budget.column_transitive);
        let witness = probe.witness.filter(|w| w.len() == d);
        return Ok(DistanceResult::exact(d, witness));
    }
    Err(Gf2Error::EnumerationTooLarge {
        needed: dim.min(profile.rank),
        cap,
    })
}

/// Walks the span of `basis` in Gray-code order and returns the least nonzero
/// weight with one codeword attaining it.
fn gray_min_weight(basis: &BitMatrix) -> (usize, Vec<usize>) {
    let k = basis.rows();
    let mut acc = vec![0u64; basis.stride()];
    let mut best = usize::MAX;
    let mut best_word = vec![0u64; basis.stride()];
    for i in 1u64..(1u64 << k) {
        xor_words(&mut acc, basis.row_words(i.trailing_zeros() as usize));
        let w: usize = acc.iter().map(|x| x.count_ones() as usize).sum();
        if w < best {
            best = w;
            best_word.copy_from_slice(&acc);
        }
    }
    (best, iter_ones(&best_word).collect())
}

/// Number of words of each weight in the span of the rows of `basis`
/// (which must be linearly independent).
fn gray_weight_counts(basis: &BitMatrix) -> Vec<u64> {
    let k = basis.rows();
    let mut counts = vec![0u64; basis.cols() + 1];
    counts[0] = 1;
    let mut acc = vec![0u64; basis.stride()];
    for i in 1u64..(1u64 << k) {
        xor_words(&mut acc, basis.row_words(i.trailing_zeros() as usize));
        let w: usize = acc.iter().map(|x| x.count_ones() as usize).sum();
        counts[w] += 1;
    }
    counts
}

/// Full weight distribution of `{x : M x = 0}`, by enumerating whichever of
/// the code and its dual is smaller.
pub fn weight_distribution(m: &BitMatrix, exponent_cap: usize) -> Result<Vec<BigUint>, Gf2Error> {
    let profile = RankProfile::new(m);
    let n = m.cols();
    let dim = n - profile.rank;
    if dim <= profile.rank && dim <= exponent_cap {
        let counts = gray_weight_counts(&profile.nullspace_basis());
        return Ok(counts.into_iter().map(BigUint::from).collect());
    }
    if profile.rank <= exponent_cap {
        let dual = gray_weight_counts(&profile.rref);
        return Ok(weight_distribution_from_dual(n, &dual)
            .into_iter()
            .map(|a| a.to_biguint().expect("MacWilliams counts are nonnegative"))
            .collect());
    }
    Err(Gf2Error::EnumerationTooLarge {
        needed: dim.min(profile.rank),
        cap: exponent_cap,
    })
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

struct Krawtchouk {
    n: usize,
    binom: Vec<Vec<BigInt>>,
}

impl Krawtchouk {
    fn new(n: usize) -> Self {
        Self {
            n,
            binom: (0..=n).map(binomial_row).collect(),
        }
    }

    fn c(&self, a: usize, b: usize) -> BigInt {
        if b > a {
            BigInt::zero()
        } else {
            self.binom[a][b].clone()
        }
    }

    /// K_i(j) for length n.
    fn eval(&self, i: usize, j: usize) -> BigInt {
        let mut total = BigInt::zero();
        for s in 0..=i.min(j) {
            let term = self.c(j, s) * self.c(self.n - j, i - s);
            if s % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    /// A_i from the dual weight counts `B` via the MacWilliams identity.
    fn primal_count(&self, i: usize, dual: &[u64], dual_size: &BigInt) -> BigInt {
        let mut sum = BigInt::zero();
        for (j, &b) in dual.iter().enumerate() {
            if b != 0 {
                sum += BigInt::from(b) * self.eval(i, j);
            }
        }
        debug_assert!((&sum % dual_size).is_zero());
        sum / dual_size
    }
}

/// MacWilliams transform: weight distribution of a code from that of its dual.
pub fn weight_distribution_from_dual(n: usize, dual: &[u64]) -> Vec<BigInt> {
    let k = Krawtchouk::new(n);
    let size: BigInt = dual.iter().map(|&b| BigInt::from(b)).sum();
    (0..=n).map(|i| k.primal_count(i, dual, &size)).collect()
}

fn dual_min_distance(n: usize, dual: &[u64]) -> usize {
    let k = Krawtchouk::new(n);
    let size: BigInt = dual.iter().map(|&b| BigInt::from(b)).sum();
    for i in 1..=n {
        let a = k.primal_count(i, dual, &size);
        debug_assert!(!a.is_negative());
        if !a.is_zero() {
            return i;
        }
    }
    unreachable!("a code of positive dimension has a nonzero codeword")
}

/// Count of codewords of weight exactly `w` (small codes only).
pub fn count_codewords_of_weight(
    m: &BitMatrix,
    w: usize,
    exponent_cap: usize,
) -> Result<u64, Gf2Error> {
    let dist = weight_distribution(m, exponent_cap)?;
    Ok(dist.get(w).and_then(|a| a.to_u64()).unwrap_or(0))
}

/// Looks for a nonempty set of `start..=cap` columns of `m` summing to zero,
/// by increasing size, assuming no such set smaller than `start` exists.
///
/// The result is exact when a set is found; otherwise its lower bound is the
/// first size not ruled out. `anchor_zero` restricts the search to sets
/// containing column 0, which is sound when the code's automorphism group is
/// transitive on columns.
pub fn support_search_range(
    m: &BitMatrix,
    start: usize,
    cap: usize,
    node_budget: u64,
    anchor_zero: bool,
) -> DistanceResult {
    support_search(m, start.max(1), cap, node_budget, anchor_zero)
}

/// Depth-first search for a nonempty set of at most `cap` columns summing to
/// zero, by increasing size. Every size below the returned lower bound has
/// been ruled out exhaustively.
fn support_search(
    m: &BitMatrix,
    start: usize,
    cap: usize,
    node_budget: u64,
    anchor_zero: bool,
) -> DistanceResult {
    let n = m.cols();
    let col_rows = m.column_supports();
    let mut row_cols = vec![Vec::new(); m.rows()];
    for (c, rows) in col_rows.iter().enumerate() {
        for &r in rows {
            row_cols[r].push(c);
        }
    }
    let max_col_weight = col_rows.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut search = SupportSearch {
        col_rows: &col_rows,
        row_cols: &row_cols,
        max_col_weight,
        syndrome: vec![0u64; m.rows().div_ceil(WORD_BITS).max(1)],
        odd: 0,
        chosen: Vec::new(),
        found: None,
        blocked: vec![false; n],
        nodes: 0,
        budget: node_budget,
    };
    for target in start..=cap.min(n) {
        let anchors: Box<dyn Iterator<Item = usize>> = if anchor_zero {
            Box::new(0..1)
        } else {
            Box::new(0..n)
        };
        for a in anchors {
            // columns below the anchor are excluded for this subtree
            for b in search.blocked.iter_mut().take(a + 1) {
                *b = true;
            }
            search.toggle(a);
            search.chosen.push(a);
            let hit = search.extend(target);
            search.chosen.pop();
            search.toggle(a);
            match hit {
                Step::Found => {
                    let mut w = search.found.take().expect("set recorded on success");
                    w.sort_unstable();
                    return DistanceResult::exact(target, Some(w));
                }
                Step::OutOfBudget => {
                    return DistanceResult::bounded(target, None, None);
                }
                Step::Exhausted => {}
            }
        }
        search.blocked.iter_mut().for_each(|b| *b = false);
    }
    DistanceResult::bounded(cap.min(n).max(start - 1) + 1, None, None)
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct SupportSearch<'a> {
    col_rows: &'a [Vec<usize>],
    row_cols: &'a [Vec<usize>],
    max_col_weight: usize,
    syndrome: Vec<u64>,
    odd: usize,
    chosen: Vec<usize>,
    found: Option<Vec<usize>>,
    blocked: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl SupportSearch<'_> {
    fn toggle(&mut self, c: usize) {
        for &r in &self.col_rows[c] {
            let bit = 1u64 << (r % WORD_BITS);
            let word = &mut self.syndrome[r / WORD_BITS];
            *word ^= bit;
            if *word & bit != 0 {
                self.odd += 1;
            } else {
                self.odd -= 1;
            }
        }
    }

    fn first_odd_row(&self) -> Option<usize> {
        self.syndrome
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    fn extend(&mut self, target: usize) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        if self.odd == 0 {
            return if self.chosen.len() == target {
                self.found = Some(self.chosen.clone());
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        let left = target - self.chosen.len();
        if left == 0 || self.odd > left * self.max_col_weight {
            return Step::Exhausted;
        }
        let row = self.first_odd_row().expect("odd count is positive");
        let row_cols = self.row_cols;
        let candidates = &row_cols[row];
        let mut newly_blocked = Vec::new();
        let mut outcome = Step::Exhausted;
        for &c in candidates {
            if self.blocked[c] {
                continue;
            }
            self.blocked[c] = true;
            newly_blocked.push(c);
            self.toggle(c);
            self.chosen.push(c);
            let step = self.extend(target);
            self.chosen.pop();
            self.toggle(c);
            match step {
                Step::Exhausted => {}
                other => {
                    outcome = other;
                    break;
                }
            }
        }
        for c in newly_blocked {
            self.blocked[c] = false;
        }
        outcome
    }
}

/// Information-set style search: random column orders, reduce a generator
/// matrix to systematic form, and inspect single rows and pairs of rows.
fn randomized_search(profile: &RankProfile, trials: u64, seed: u64) -> DistanceResult {
    let gen = profile.nullspace_basis();
    let n = gen.cols();
    let k = gen.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<usize>> = None;
    let consider = |words: &[u64], order: &[usize], best: &mut Option<Vec<usize>>| {
        let w: usize = words.iter().map(|x| x.count_ones() as usize).sum();
        if w > 0 && best.as_ref().is_none_or(|b| w < b.len()) {
            let mut sup: Vec<usize> = iter_ones(words).map(|i| order[i]).collect();
            sup.sort_unstable();
            *best = Some(sup);
        }
    };
    for _ in 0..trials.max(1) {
        order.shuffle(&mut rng);
        let permuted = gen.select_columns(&order);
        let sys = RankProfile::new(&permuted).rref;
        for i in 0..sys.rows() {
            consider(sys.row_words(i), &order, &mut best);
        }
        if k <= 256 {
            let mut pair = vec![0u64; sys.stride()];
            for i in 0..sys.rows() {
                for j in (i + 1)..sys.rows() {
                    pair.copy_from_slice(sys.row_words(i));
                    xor_words(&mut pair, sys.row_words(j));
                    consider(&pair, &order, &mut best);
                }
            }
        }
    }
    let upper = best.as_ref().map(|b| b.len());
    DistanceResult::bounded(1, upper, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano_point_by_block() -> BitMatrix {
        let lines: [[usize; 3]; 7] = [
            [0, 1, 3],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 6],
            [0, 4, 5],
            [1, 5, 6],
            [0, 2, 6],
        ];
        let mut h = BitMatrix::zeros(7, 7);
        for (b, l) in lines.iter().enumerate() {
            for &p in l {
                h.set(p, b, true);
            }
        }
        h
    }

    fn brute_force_min(m: &BitMatrix) -> usize {
        let n = m.cols();
        assert!(n <= 22);
        let cols = m.column_supports();
        let mut best = usize::MAX;
        for mask in 1u32..(1 << n) {
            let mut syn = vec![0u8; m.rows()];
            for (c, rows) in cols.iter().enumerate() {
                if mask >> c & 1 == 1 {
                    for &r in rows {
                        syn[r] ^= 1;
                    }
                }
            }
            if syn.iter().all(|&s| s == 0) {
                best = best.min(mask.count_ones() as usize);
            }
        }
        best
    }

    fn check_witness(m: &BitMatrix, r: &DistanceResult) {
        if let Some(w) = &r.witness {
            assert_eq!(Some(w.len()), r.upper);
            let x = super::super::BitVec::from_support(m.cols(), w).unwrap();
            assert!(m.mul_vec(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn fano_distance_is_four_by_every_exhaustive_route() {
        let h = fano_point_by_block();
        let b = DistanceBudget::default();
        for s in [
            DistanceStrategy::Auto,
            DistanceStrategy::EnumerateCodewords,
            DistanceStrategy::EnumerateSupports,
        ] {
            let r = min_distance(&h, s, &b).unwrap();
            assert_eq!(r.value(), Some(4), "{s:?}");
            check_witness(&h, &r);
        }
        assert_eq!(brute_force_min(&h), 4);
    }

    #[test]
    fn randomized_search_never_claims_exactness_from_a_trivial_bound() {
        let h = fano_point_by_block();
        let r = min_distance(&h, DistanceStrategy::RandomizedSearch, &DistanceBudget::default())
            .unwrap();
        assert_eq!(r.lower, 1);
        assert_eq!(r.status, DistanceStatus::Bounded);
        assert_eq!(r.upper, Some(4));
        check_witness(&h, &r);
    }

    #[test]
    fn full_rank_code_has_no_codewords() {
        let r = min_distance(
            &BitMatrix::identity(5),
            DistanceStrategy::Auto,
            &DistanceBudget::default(),
        )
        .unwrap();
        assert_eq!(r.status, DistanceStatus::NoCodewords);
    }

    #[test]
    fn dual_route_matches_primal_route() {
        // A single parity check on 30 bits: dimension 29 forces the dual route.
        let h = BitMatrix::from_dense(&[vec![1u8; 30]]).unwrap();
        let b = DistanceBudget::default();
        let r = min_distance(&h, DistanceStrategy::EnumerateCodewords, &b).unwrap();
        assert_eq!(r.value(), Some(2));
        check_witness(&h, &r);
        let dist = weight_distribution(&h, 26).unwrap();
        // even-weight code: A_w = C(30, w) for w even
        assert_eq!(dist[2], BigUint::from(435u32));
        assert_eq!(dist[3], BigUint::zero());
        assert_eq!(dist[30], BigUint::one());
    }

    #[test]
    fn macwilliams_recovers_hamming_code() {
        // [7,4] Hamming code: dual is the simplex code with B_0 = 1, B_4 = 7.
        let mut dual = vec![0u64; 8];
        dual[0] = 1;
        dual[4] = 7;
        let a = weight_distribution_from_dual(7, &dual);
        let got: Vec<i64> = a.iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(got, vec![1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn support_search_reports_budget_exhaustion_as_bounded() {
        let h = fano_point_by_block();
        let r = support_search(&h, 1, 6, 3, false);
        assert_eq!(r.status, DistanceStatus::Bounded);
        assert!(r.lower <= 4);
    }

    #[test]
    fn too_large_enumeration_is_an_error() {
        let b = DistanceBudget {
            exponent_cap: 1,
            ..DistanceBudget::default()
        };
        let h = fano_point_by_block();
        assert!(matches!(
            min_distance(&h, DistanceStrategy::EnumerateCodewords, &b),
            Err(Gf2Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn strategies_agree_with_brute_force_on_small_random_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..40 {
            let rows = rng.random_range(2..8);
            let cols = rng.random_range(4..14);
            let dense: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..2)).collect())
                .collect();
            let h = BitMatrix::from_dense(&dense).unwrap();
            if h.rank() == cols {
                continue;
            }
            let expect = brute_force_min(&h);
            let b = DistanceBudget {
                support_weight_cap: cols,
                ..DistanceBudget::default()
            };
            for s in [
                DistanceStrategy::EnumerateCodewords,
                DistanceStrategy::EnumerateSupports,
            ] {
                let r = min_distance(&h, s, &b).unwrap();
                assert_eq!(r.value(), Some(expect), "{s:?} on {dense:?}");
                check_witness(&h, &r);
            }
        }
    }
}
