use super::{verify_steiner, DesignError, IncidenceStructure};

const MAX_POINTS: usize = 4096;

/// Number of Pasch configurations (four triples on six points, each point in
/// exactly two of them) in a Steiner triple system.
///
/// Every Pasch configuration is found from each ordered pair of its blocks
/// (they pairwise meet) together with the matching of the remaining points,
/// so each one is seen 12 times.
pub fn count_pasch(s: &IncidenceStructure) -> Result<u64, DesignError> {
    verify_steiner(s, 3)?;
    let v = s.v();
    if v > MAX_POINTS {
        return Err(DesignError::InvalidParameters(format!(
            "Pasch counting is limited to {MAX_POINTS} points, got {v}"
        )));
    }
    // third[a*v + b] = the point completing {a, b} to a block
    let mut third = vec![u32::MAX; v * v];
    for b in s.blocks() {
        let (x, y, z) = (b[0], b[1], b[2]);
        for (a, c, t) in [(x, y, z), (x, z, y), (y, z, x)] {
            third[a * v + c] = t as u32;
            third[c * v + a] = t as u32;
        }
    }
    let point_blocks = s.point_blocks();
    let mut hits = 0u64;
    for b1 in s.blocks() {
        for (i, &a) in b1.iter().enumerate() {
            let (b, c) = (b1[(i + 1) % 3], b1[(i + 2) % 3]);
            for &j in &point_blocks[a] {
                let b2 = s.block(j);
                if b2 == b1.as_slice() {
                    continue;
                }
                let mut others = b2.iter().copied().filter(|&p| p != a);
                let (d, e) = (others.next().unwrap(), others.next().unwrap());
                for (x, y) in [(d, e), (e, d)] {
                    if third[b * v + x] == third[c * v + y] {
                        hits += 1;
                    }
                }
            }
        }
    }
    debug_assert_eq!(hits % 12, 0);
    Ok(hits / 12)
}

#[cfg(test)]
mod tests {
    use super::super::{build_sts, develop_cyclic};
    use super::*;

    fn brute_force(s: &IncidenceStructure) -> u64 {
        let b = s.b();
        let mut count = 0;
        for i in 0..b {
            for j in (i + 1)..b {
                for k in (j + 1)..b {
                    for l in (k + 1)..b {
                        let mut deg = vec![0u8; s.v()];
                        for &x in [i, j, k, l].iter() {
                            for &p in s.block(x) {
                                deg[p] += 1;
                            }
                        }
                        if deg.iter().all(|&d| d % 2 == 0) {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn fano_has_seven() {
        let fano = develop_cyclic(7, &[vec![0, 1, 3]]).unwrap();
        assert_eq!(count_pasch(&fano).unwrap(), 7);
        assert_eq!(brute_force(&fano), 7);
    }

    #[test]
    fn matches_exhaustive_search_on_small_systems() {
        for s in [
            build_sts(9).unwrap(),
            build_sts(13).unwrap(),
            develop_cyclic(13, &[vec![0, 1, 4], vec![0, 2, 7]]).unwrap(),
        ] {
            assert_eq!(count_pasch(&s).unwrap(), brute_force(&s), "{}", s.provenance());
        }
    }

    #[test]
    fn non_sts_is_rejected() {
        let s = IncidenceStructure::new(4, vec![vec![0, 1, 2, 3]], "t").unwrap();
        assert!(count_pasch(&s).is_err());
    }
}
