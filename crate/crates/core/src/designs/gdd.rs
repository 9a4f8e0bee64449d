use super::{
    verify_steiner, DesignError, IncidenceStructure, SpreadPart, SpreadPartition,
};
use crate::field::{field_of_order, prime_power};

/// A design whose points are partitioned into groups; pairs inside a group
/// are never covered, pairs across groups exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDivisibleDesign {
    pub structure: IncidenceStructure,
    pub groups: Vec<Vec<usize>>,
}

/// Checks the group divisible axioms: uniform block size `mu`, groups
/// partitioning the points, no block meeting a group twice, and every
/// cross-group pair covered exactly once.
pub fn verify_gdd(gdd: &GroupDivisibleDesign, mu: usize) -> Result<(), DesignError> {
    let s = &gdd.structure;
    let v = s.v();
    let mut group_of = vec![usize::MAX; v];
    for (g, pts) in gdd.groups.iter().enumerate() {
        for &p in pts {
            if p >= v || group_of[p] != usize::MAX {
                return Err(DesignError::BadGroups(format!(
                    "point {p} is repeated or out of range"
                )));
            }
            group_of[p] = g;
        }
    }
    if let Some(p) = group_of.iter().position(|&g| g == usize::MAX) {
        return Err(DesignError::BadGroups(format!("point {p} is in no group")));
    }
    let mut seen = vec![false; v * v];
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
                if group_of[a] == group_of[c] {
                    return Err(DesignError::PairInsideGroup(a, c));
                }
                if seen[a * v + c] {
                    let first = s
                        .blocks()
                        .iter()
                        .position(|bb| bb.contains(&a) && bb.contains(&c))
                        .unwrap();
                    return Err(DesignError::RepeatedPair {
                        pair: (a, c),
                        blocks: (first, j),
                    });
                }
                seen[a * v + c] = true;
            }
        }
    }
    for a in 0..v {
        for c in (a + 1)..v {
            if group_of[a] != group_of[c] && !seen[a * v + c] {
                return Err(DesignError::UncoveredPair(a, c));
            }
        }
    }
    Ok(())
}

/// The transversal design TD(mu, g): points `GF(g) x {0..mu-1}` with `(x, i)`
/// numbered `i*g + x`, groups `GF(g) x {i}`, and for each `(x, y)` the block
/// `{(x + y*a_i, i)}` where `a_i` is the field element with integer code `i`.
pub fn build_transversal_design(mu: usize, g: usize) -> Result<GroupDivisibleDesign, DesignError> {
    if prime_power(g as u64).is_none() {
        return Err(DesignError::InvalidParameters(format!(
            "group size {g} is not a prime power"
        )));
    }
    if mu < 2 || mu > g {
        return Err(DesignError::InvalidParameters(format!(
            "need 2 <= mu <= g, got mu={mu}, g={g}"
        )));
    }
    let f = field_of_order(g as u64)?;
    let mut blocks = Vec::with_capacity(g * g);
    for x in f.elements() {
        for y in f.elements() {
            let b: Vec<usize> = (0..mu)
                .map(|i| i * g + f.add(x, f.mul(y, i as u32)) as usize)
                .collect();
            blocks.push(b);
        }
    }
    let structure = IncidenceStructure::new(mu * g, blocks, format!("TD({mu},{g})"))?;
    let groups = (0..mu).map(|i| (i * g..(i + 1) * g).collect()).collect();
    let gdd = GroupDivisibleDesign { structure, groups };
    verify_gdd(&gdd, mu)?;
    Ok(gdd)
}

/// Fills every group of `gdd` with a copy of `filler` (an S(2, mu, g) on the
/// group's points, in increasing order). The result is an S(2, mu, g*t) and
/// the filled groups form a Steiner spread of it.
///
/// The returned flag is set when the filler has a single block, so the
/// spread's parts are trivial subdesigns.
pub fn compose_gdd_spread(
    gdd: &GroupDivisibleDesign,
    filler: &IncidenceStructure,
) -> Result<(IncidenceStructure, SpreadPartition, bool), DesignError> {
    let mu = gdd.structure.uniform_block_size().ok_or_else(|| {
        DesignError::SizeMismatch("the GDD does not have a uniform block size".into())
    })?;
    let g = filler.v();
    if let Some(bad) = gdd.groups.iter().find(|grp| grp.len() != g) {
        return Err(DesignError::SizeMismatch(format!(
            "group of size {} but the filler has {g} points",
            bad.len()
        )));
    }
    verify_gdd(gdd, mu)?;
    verify_steiner(filler, mu).map_err(|e| {
        DesignError::SizeMismatch(format!("filler is not an S(2,{mu},{g}): {e}"))
    })?;
    let mut blocks: Vec<Vec<usize>> = gdd.structure.blocks().to_vec();
    let mut copies = Vec::with_capacity(gdd.groups.len());
    for grp in &gdd.groups {
        let mut pts = grp.clone();
        pts.sort_unstable();
        let copy: Vec<Vec<usize>> = filler
            .blocks()
            .iter()
            .map(|b| {
                let mut m: Vec<usize> = b.iter().map(|&p| pts[p]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        blocks.extend(copy.iter().cloned());
        copies.push((pts, copy));
    }
    let v = gdd.structure.v();
    let s = IncidenceStructure::new(
        v,
        blocks,
        format!("{} filled with {}", gdd.structure.provenance(), filler.provenance()),
    )?;
    verify_steiner(&s, mu)?;
    let parts = copies
        .into_iter()
        .map(|(points, copy)| SpreadPart {
            points,
            blocks: copy
                .iter()
                .map(|b| s.blocks().binary_search(b).expect("copied block is present"))
                .collect(),
        })
        .collect();
    let spread = SpreadPartition { parts };
    spread.validate(&s, true)?;
    Ok((s, spread, filler.b() == 1))
}

/// Removes the blocks of the first `count` spread parts. Points are kept, so
/// the point-by-block matrix loses columns but no rows.
pub fn delete_subdesigns(
    s: &IncidenceStructure,
    spread: &SpreadPartition,
    count: usize,
) -> Result<IncidenceStructure, DesignError> {
    if count > spread.len() {
        return Err(DesignError::InvalidParameters(format!(
            "asked to delete {count} parts of a spread with {}",
            spread.len()
        )));
    }
    let chosen = SpreadPartition {
        parts: spread.parts[..count].to_vec(),
    };
    chosen.validate(s, false)?;
    let mut drop = vec![false; s.b()];
    for part in &chosen.parts {
        for &b in &part.blocks {
            drop[b] = true;
        }
    }
    Ok(s.retain_blocks(
        |i| !drop[i],
        format!("{} minus {count} subdesign(s)", s.provenance()),
    ))
}
