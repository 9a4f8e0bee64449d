use std::collections::BTreeSet;

use super::{DesignError, DesignParams, IncidenceStructure};

/// Necessary divisibility conditions for a 2-(v, mu, lambda) design.
pub fn check_admissible(v: usize, mu: usize, lambda: usize) -> bool {
    DesignParams::derive(v, mu, lambda).is_some() && v > mu && lambda >= 1
}

fn admissibility_error(v: usize, mu: usize, lambda: usize) -> DesignError {
    DesignError::Inadmissible {
        v,
        mu,
        lambda,
        r_num: lambda * v.saturating_sub(1),
        r_den: mu.saturating_sub(1),
        b_num: lambda * v * v.saturating_sub(1),
        b_den: mu * mu.saturating_sub(1),
    }
}

#[inline]
fn pair_slot(v: usize, a: usize, b: usize) -> usize {
    // a < b; rows of the strict upper triangle laid end to end
    a * v - a * (a + 1) / 2 + (b - a - 1)
}

/// Marks every pair covered by a block, failing on the first pair seen twice.
fn cover_pairs(s: &IncidenceStructure, mu: usize) -> Result<Vec<u64>, DesignError> {
    let v = s.v();
    let slots = v * v.saturating_sub(1) / 2;
    let mut covered = vec![0u64; slots.div_ceil(64)];
    for (j, b) in s.blocks().iter().enumerate() {
        if b.len() != mu {
            return Err(DesignError::WrongBlockSize {
                block: j,
                size: b.len(),
                expected: mu,
            });
        }
        for (x, &a) in b.iter().enumerate() {
            for &c in &b[x + 1..] {
                let slot = pair_slot(v, a, c);
                let mask = 1u64 << (slot % 64);
                if covered[slot / 64] & mask != 0 {
                    let first = s
                        .blocks()
                        .iter()
                        .position(|bb| bb.contains(&a) && bb.contains(&c))
                        .expect("pair was covered earlier");
                    return Err(DesignError::RepeatedPair {
                        pair: (a, c),
                        blocks: (first, j),
                    });
                }
                covered[slot / 64] |= mask;
            }
        }
    }
    Ok(covered)
}

/// Checks that `s` is an S(2, mu, v): every block has `mu` points and every
/// pair of points lies in exactly one block.
pub fn verify_steiner(s: &IncidenceStructure, mu: usize) -> Result<DesignParams, DesignError> {
    let v = s.v();
    if mu < 2 || v < mu {
        return Err(DesignError::InvalidParameters(format!(
            "need v >= mu >= 2, got v={v}, mu={mu}"
        )));
    }
    let covered = cover_pairs(s, mu)?;
    let slots = v * (v - 1) / 2;
    let count: usize = covered.iter().map(|w| w.count_ones() as usize).sum();
    if count != slots {
        for a in 0..v {
            for c in (a + 1)..v {
                let slot = pair_slot(v, a, c);
                if covered[slot / 64] >> (slot % 64) & 1 == 0 {
                    return Err(DesignError::UncoveredPair(a, c));
                }
            }
        }
    }
    let params = DesignParams::derive(v, mu, 1).ok_or_else(|| admissibility_error(v, mu, 1))?;
    debug_assert_eq!(params.b, s.b());
    Ok(params)
}

/// Checks block size `mu` and that no pair lies in two blocks.
pub fn verify_partial_steiner(s: &IncidenceStructure, mu: usize) -> Result<(), DesignError> {
    cover_pairs(s, mu).map(|_| ())
}

/// A Steiner triple system on `v` points, for `v` = 1 or 3 (mod 6).
///
/// `v` = 3 (mod 6) uses the Bose construction and `v` = 1 (mod 6) the Skolem
/// construction; both take points `Z_m x Z_3` (plus one extra point for
/// Skolem) with point `(x, i)` numbered `3x + i`.
pub fn build_sts(v: usize) -> Result<IncidenceStructure, DesignError> {
    if v < 7 || !(v % 6 == 1 || v % 6 == 3) {
        return Err(admissibility_error(v, 3, 1));
    }
    let pt = |x: usize, i: usize| 3 * x + (i % 3);
    let mut blocks = Vec::new();
    if v % 6 == 3 {
        let m = v / 3;
        // idempotent commutative quasigroup x o y = (x + y) / 2 mod m, m odd
        let half = m.div_ceil(2);
        let op = |x: usize, y: usize| (x + y) * half % m;
        for x in 0..m {
            blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        }
        for i in 0..3 {
            for x in 0..m {
                for y in (x + 1)..m {
                    blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
                }
            }
        }
        let s = IncidenceStructure::new(v, blocks, format!("STS({v}) Bose"))?;
        verify_steiner(&s, 3)?;
        return Ok(s);
    }
    let n = (v - 1) / 6;
    let m = 2 * n;
    let inf = v - 1;
    // half-idempotent commutative quasigroup of order 2n
    let sigma = |z: usize| if z % 2 == 0 { z / 2 } else { (z - 1) / 2 + n };
    let op = |x: usize, y: usize| sigma((x + y) % m);
    for x in 0..n {
        blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for i in 0..3 {
        for x in 0..n {
            blocks.push(vec![inf, pt(x + n, i), pt(x, i + 1)]);
        }
        for x in 0..m {
            for y in (x + 1)..m {
                blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    let s = IncidenceStructure::new(v, blocks, format!("STS({v}) Skolem"))?;
    verify_steiner(&s, 3)?;
    Ok(s)
}

/// All translates of the base blocks modulo `v`, with repeated translates
/// from short orbits kept once. The result is not verified.
pub fn develop_cyclic(
    v: usize,
    base_blocks: &[Vec<usize>],
) -> Result<IncidenceStructure, DesignError> {
    let mut blocks = BTreeSet::new();
    for (i, base) in base_blocks.iter().enumerate() {
        if let Some(&p) = base.iter().find(|&&p| p >= v) {
            return Err(DesignError::PointOutOfRange { block: i, point: p, v });
        }
        for shift in 0..v {
            let mut b: Vec<usize> = base.iter().map(|&p| (p + shift) % v).collect();
            b.sort_unstable();
            blocks.insert(b);
        }
    }
    IncidenceStructure::new(v, blocks.into_iter().collect(), format!("cyclic development mod {v}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(check_admissible(7, 3, 1));
        assert!(!check_admissible(8, 3, 1));
        assert!(check_admissible(13, 4, 1));
        assert!(!check_admissible(14, 4, 1));
    }

    #[test]
    fn fano_verifies_and_loses_a_pair_without_a_block() {
        let s = develop_cyclic(7, &[vec![0, 1, 3]]).unwrap();
        let p = verify_steiner(&s, 3).unwrap();
        assert_eq!((p.v, p.mu, p.b, p.r), (7, 3, 7, 3));
        let cut = s.retain_blocks(|i| i != 0, "cut");
        assert!(matches!(verify_steiner(&cut, 3), Err(DesignError::UncoveredPair(..))));
    }

    #[test]
    fn doubly_covered_pair_names_both_blocks() {
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]], "t").unwrap();
        assert_eq!(
            verify_steiner(&s, 3),
            Err(DesignError::RepeatedPair {
                pair: (0, 1),
                blocks: (0, 1)
            })
        );
        assert!(matches!(
            verify_steiner(&s, 4),
            Err(DesignError::WrongBlockSize { block: 0, .. })
        ));
    }

    #[test]
    fn small_triple_systems() {
        for (v, b, r) in [(7, 7, 3), (9, 12, 4), (13, 26, 6), (15, 35, 7), (19, 57, 9), (21, 70, 10)] {
            let s = build_sts(v).unwrap();
            let p = verify_steiner(&s, 3).unwrap();
            assert_eq!((p.b, p.r), (b, r), "v={v}");
            assert_eq!(s.b(), b);
        }
        assert!(build_sts(11).is_err());
        assert!(build_sts(3).is_err());
    }

    #[test]
    fn triple_systems_verify_for_every_admissible_order_below_100() {
        for v in (7..100).filter(|v| v % 6 == 1 || v % 6 == 3) {
            let s = build_sts(v).unwrap();
            verify_steiner(&s, 3).unwrap();
        }
    }

    #[test]
    fn cyclic_sts13() {
        let s = develop_cyclic(13, &[vec![0, 1, 4], vec![0, 2, 7]]).unwrap();
        assert_eq!(s.b(), 26);
        verify_steiner(&s, 3).unwrap();
    }

    #[test]
    fn short_orbits_are_deduplicated() {
        // {0,5,10} mod 15 has an orbit of length 5
        let s = develop_cyclic(15, &[vec![0, 5, 10]]).unwrap();
        assert_eq!(s.b(), 5);
    }
}
