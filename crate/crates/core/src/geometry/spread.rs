use std::collections::BTreeSet;

use super::{GeometryDesign, GeometryError, GeometryKind};
use crate::designs::{SpreadPart, SpreadPartition};
use crate::field::{enumerate_subspace_reps, make_field, FieldVector};

/// Attaches to each point set the lines lying entirely inside it.
fn parts_with_lines(design: &GeometryDesign, point_sets: Vec<Vec<usize>>) -> SpreadPartition {
    let mut owner = vec![usize::MAX; design.structure.v()];
    for (i, pts) in point_sets.iter().enumerate() {
        for &p in pts {
            owner[p] = i;
        }
    }
    let mut blocks = vec![Vec::new(); point_sets.len()];
    for (j, line) in design.structure.blocks().iter().enumerate() {
        let o = owner[line[0]];
        if o != usize::MAX && line.iter().all(|&p| owner[p] == o) {
            blocks[o].push(j);
        }
    }
    SpreadPartition {
        parts: point_sets
            .into_iter()
            .zip(blocks)
            .map(|(points, blocks)| SpreadPart { points, blocks })
            .collect(),
    }
}

/// Partition of PG(m,q) into copies of PG(s,q), for `(s+1) | (m+1)`.
///
/// Identifies `GF(q)^(m+1)` with `GF(q^(s+1))^N`, `N = (m+1)/(s+1)`, using the
/// basis `1, b, ..., b^s` of `GF(q^(s+1))` over `GF(q)` with `b` primitive;
/// each point of PG(N-1, q^(s+1)) then becomes an `(s+1)`-dimensional
/// subspace over `GF(q)`. Parts are listed in the order of those points.
pub fn pg_spread(design: &GeometryDesign, s: u32) -> Result<SpreadPartition, GeometryError> {
    if design.kind != GeometryKind::Pg {
        return Err(GeometryError::Unsupported(
            "projective spreads need a PG design".into(),
        ));
    }
    let m = design.m;
    if s < 1 || (m + 1) % (s + 1) != 0 {
        return Err(GeometryError::InvalidParameters(format!(
            "s+1 = {} must divide m+1 = {}",
            s + 1,
            m + 1
        )));
    }
    let small = &design.field;
    let big = make_field(small.p(), small.e() * (s + 1))?;
    let phi = big.subfield_embedding(small)?;
    let beta = big.primitive_element();
    let deg = (s + 1) as usize;
    let q = small.q();
    // coords_of[z] = coordinates of z in the basis 1, beta, ..., beta^s
    let mut coords_of = vec![Vec::new(); big.q() as usize];
    for idx in 0..(q as usize).pow(s + 1) {
        let c = FieldVector::from_index(idx, q, deg);
        let mut z = 0;
        let mut pw = 1;
        for &cj in &c.coords {
            z = big.add(z, big.mul(phi[cj as usize], pw));
            pw = big.mul(pw, beta);
        }
        coords_of[z as usize] = c.coords;
    }
    debug_assert!(coords_of.iter().all(|c| c.len() == deg));
    let n_big = ((m + 1) / (s + 1)) as usize;
    let mut point_sets = Vec::new();
    for rep in enumerate_subspace_reps(&big, n_big) {
        let mut pts = BTreeSet::new();
        for lam in 1..big.q() {
            let mut v = Vec::with_capacity((m + 1) as usize);
            for &w in &rep.coords {
                v.extend_from_slice(&coords_of[big.mul(lam, w) as usize]);
            }
            let idx = design
                .point_index(&FieldVector::new(v))
                .expect("nonzero vector names a point");
            pts.insert(idx);
        }
        point_sets.push(pts.into_iter().collect());
    }
    let spread = parts_with_lines(design, point_sets);
    spread.validate(&design.structure, true)?;
    Ok(spread)
}

/// The parallel class of hyperplanes `x_0 = c` of AG(m,q), `m >= 3`, each an
/// AG(m-1,q); parts in increasing order of `c`.
pub fn ag_hyperplane_spread(design: &GeometryDesign) -> Result<SpreadPartition, GeometryError> {
    if design.kind != GeometryKind::Ag {
        return Err(GeometryError::Unsupported(
            "hyperplane spreads need an AG design".into(),
        ));
    }
    if design.m < 3 {
        return Err(GeometryError::InvalidParameters(format!(
            "hyperplane spreads need m >= 3, got {}",
            design.m
        )));
    }
    let mut point_sets = vec![Vec::new(); design.q as usize];
    for (i, c) in design.point_coords.iter().enumerate() {
        point_sets[c.coords[0] as usize].push(i);
    }
    let spread = parts_with_lines(design, point_sets);
    spread.validate(&design.structure, true)?;
    Ok(spread)
}
