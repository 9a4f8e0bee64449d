//! Points and lines of PG(m,q), AG(m,q) and EG(m,q) as incidence structures.

mod hamada;
mod spread;
mod witness;

pub use hamada::{hamada_phi, rank_formula, RankPrediction};
pub use spread::{ag_hyperplane_spread, pg_spread};
pub use witness::{
    affine_dual_hyperoval, affine_hyperoval, dual_hyperoval, hyperbolic_quadric, parallel_pair,
    plane_hyperoval, ColumnSpace, WitnessCodeword, WitnessKind,
};

use std::fmt;

use thiserror::Error;

use crate::designs::{verify_partial_steiner, verify_steiner, DesignError, IncidenceStructure};
use crate::field::{enumerate_subspace_reps, field_of_order, FieldError, FieldVector, FiniteField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("invalid geometry parameters: {0}")]
    InvalidParameters(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("witness does not cover every point an even number of times: {0}")]
    BadWitness(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryKind {
    Pg,
    Ag,
    Eg,
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryKind::Pg => "PG",
            GeometryKind::Ag => "AG",
            GeometryKind::Eg => "EG",
        })
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PG" => Ok(GeometryKind::Pg),
            "AG" => Ok(GeometryKind::Ag),
            "EG" => Ok(GeometryKind::Eg),
            other => Err(GeometryError::InvalidParameters(format!(
                "unknown geometry kind {other:?}"
            ))),
        }
    }
}

/// A geometry named by kind, dimension and field order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeometrySpec {
    pub kind: GeometryKind,
    pub m: u32,
    pub q: u32,
}

impl GeometrySpec {
    pub fn new(kind: GeometryKind, m: u32, q: u32) -> Self {
        Self { kind, m, q }
    }

    pub fn build(&self) -> Result<GeometryDesign, GeometryError> {
        build_geometry(self.kind, self.m, self.q)
    }

    /// `(v, b, line size)`.
    pub fn counts(&self) -> (u64, u64, u64) {
        geometry_counts(self.kind, self.m, self.q as u64)
    }
}

impl fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind, self.m, self.q)
    }
}

/// Expected point count, line count and line size, saturating at
/// `u64::MAX` for spaces too large to count.
pub fn geometry_counts(kind: GeometryKind, m: u32, q: u64) -> (u64, u64, u64) {
    let q = q as u128;
    let pow = |e: u32| q.checked_pow(e).unwrap_or(u128::MAX);
    let qm = pow(m);
    let sat = |x: Option<u128>| x.map_or(u64::MAX, |x| u64::try_from(x).unwrap_or(u64::MAX));
    let (v, b, size) = match kind {
        GeometryKind::Pg => {
            let v = (pow(m + 1) - 1) / (q - 1);
            let b = (pow(m + 1) - 1)
                .checked_mul(qm - 1)
                .map(|x| x / ((q * q - 1) * (q - 1)));
            (Some(v), b, q + 1)
        }
        GeometryKind::Ag => (Some(qm), pow(m - 1).checked_mul(qm - 1).map(|x| x / (q - 1)), q),
        GeometryKind::Eg => (
            Some(qm - 1),
            (pow(m - 1) - 1).checked_mul(qm - 1).map(|x| x / (q - 1)),
            q,
        ),
    };
    (sat(v), sat(b), size as u64)
}

/// A finite geometry's line design together with point coordinates.
#[derive(Clone, Debug)]
pub struct GeometryDesign {
    pub kind: GeometryKind,
    pub m: u32,
    pub q: u32,
    pub structure: IncidenceStructure,
    pub point_coords: Vec<FieldVector>,
    pub field: FiniteField,
    lookup: Vec<u32>,
}

impl GeometryDesign {
    /// Index of the point with the given coordinates (any nonzero multiple
    /// for PG).
    pub fn point_index(&self, coords: &FieldVector) -> Option<usize> {
        let key = match self.kind {
            GeometryKind::Pg => coords.normalized(&self.field),
            _ => coords.clone(),
        };
        if key.len() != self.point_coords[0].len() || key.coords.iter().any(|&c| c >= self.q) {
            return None;
        }
        let i = self.lookup[key.index(self.q)];
        (i != u32::MAX).then_some(i as usize)
    }

    /// Index of the block with exactly these points.
    pub fn block_index(&self, points: &[usize]) -> Option<usize> {
        let mut p = points.to_vec();
        p.sort_unstable();
        self.structure.blocks().binary_search(&p).ok()
    }

    pub fn spec(&self) -> GeometrySpec {
        GeometrySpec::new(self.kind, self.m, self.q)
    }

    pub fn label(&self) -> String {
        self.spec().to_string()
    }

    /// Replication number (lines through a point).
    pub fn r(&self) -> usize {
        let q = self.q as usize;
        let base = (q.pow(self.m) - 1) / (q - 1);
        match self.kind {
            GeometryKind::Pg | GeometryKind::Ag => base,
            GeometryKind::Eg => base - 1,
        }
    }

    fn coords_label(&self, i: usize) -> String {
        let c: Vec<String> = self.point_coords[i]
            .coords
            .iter()
            .map(|x| x.to_string())
            .collect();
        format!("({})", c.join(","))
    }

    /// The structure with point coordinates attached as labels.
    pub fn labelled_structure(&self) -> IncidenceStructure {
        let labels = (0..self.point_coords.len())
            .map(|i| self.coords_label(i))
            .collect();
        self.structure
            .clone()
            .with_labels(labels)
            .expect("one label per point")
    }
}

fn check_params(m: u32, q: u32) -> Result<FiniteField, GeometryError> {
    if m < 2 {
        return Err(GeometryError::InvalidParameters(format!(
            "dimension must be at least 2, got {m}"
        )));
    }
    let f = field_of_order(q as u64)?;
    let size = (q as u64).checked_pow(m + 1).unwrap_or(u64::MAX);
    if size > 1 << 26 {
        return Err(GeometryError::InvalidParameters(format!(
            "q^(m+1) = {q}^{} is too large to enumerate",
            m + 1
        )));
    }
    Ok(f)
}

/// Enumerates lines by taking, for every pair of points not yet covered, the
/// line through them, then sorts the lines.
fn collect_lines(
    v: usize,
    mut line_through: impl FnMut(usize, usize) -> Option<Vec<usize>>,
) -> Vec<Vec<usize>> {
    let slot = |a: usize, b: usize| a * v - a * (a + 1) / 2 + (b - a - 1);
    let mut covered = vec![0u64; (v * v.saturating_sub(1) / 2).div_ceil(64)];
    let mut lines = Vec::new();
    for a in 0..v {
        for b in (a + 1)..v {
            let s = slot(a, b);
            if covered[s / 64] >> (s % 64) & 1 == 1 {
                continue;
            }
            let Some(mut line) = line_through(a, b) else {
                let s = slot(a, b);
                covered[s / 64] |= 1 << (s % 64);
                continue;
            };
            line.sort_unstable();
            for (i, &x) in line.iter().enumerate() {
                for &y in &line[i + 1..] {
                    let s = slot(x, y);
                    covered[s / 64] |= 1 << (s % 64);
                }
            }
            lines.push(line);
        }
    }
    lines
}

pub fn build_pg(m: u32, q: u32) -> Result<GeometryDesign, GeometryError> {
    let f = check_params(m, q)?;
    let points = enumerate_subspace_reps(&f, m as usize + 1);
    let mut lookup = vec![u32::MAX; (q as usize).pow(m + 1)];
    for (i, p) in points.iter().enumerate() {
        lookup[p.index(q)] = i as u32;
    }
    let lines = collect_lines(points.len(), |a, b| {
        let (pa, pb) = (&points[a], &points[b]);
        let mut line = vec![a];
        for lam in f.elements() {
            let x = pb.add(&f, &pa.scale(&f, lam)).normalized(&f);
            line.push(lookup[x.index(q)] as usize);
        }
        Some(line)
    });
    let structure = IncidenceStructure::new(points.len(), lines, format!("PG1({m},{q})"))?;
    verify_steiner(&structure, q as usize + 1)?;
    Ok(GeometryDesign {
        kind: GeometryKind::Pg,
        m,
        q,
        structure,
        point_coords: points,
        field: f,
        lookup,
    })
}

fn affine_points(q: u32, m: u32, skip_origin: bool) -> Vec<FieldVector> {
    let start = usize::from(skip_origin);
    (start..(q as usize).pow(m))
        .map(|i| FieldVector::from_index(i, q, m as usize))
        .collect()
}

fn affine_lines(f: &FiniteField, points: &[FieldVector], lookup: &[u32], avoid_origin: bool) -> Vec<Vec<usize>> {
    let q = f.q();
    collect_lines(points.len(), |a, b| {
        let (pa, pb) = (&points[a], &points[b]);
        let dir = FieldVector::new(
            pb.coords
                .iter()
                .zip(&pa.coords)
                .map(|(&x, &y)| f.sub(x, y))
                .collect(),
        );
        let mut line = Vec::with_capacity(q as usize);
        for lam in f.elements() {
            let x = pa.add(f, &dir.scale(f, lam));
            let idx = lookup[x.index(q)];
            if idx == u32::MAX {
                debug_assert!(avoid_origin && x.is_zero());
                return None;
            }
            line.push(idx as usize);
        }
        Some(line)
    })
}

pub fn build_ag(m: u32, q: u32) -> Result<GeometryDesign, GeometryError> {
    let f = check_params(m, q)?;
    let points = affine_points(q, m, false);
    let lookup: Vec<u32> = (0..points.len() as u32).collect();
    let lines = affine_lines(&f, &points, &lookup, false);
    let structure = IncidenceStructure::new(points.len(), lines, format!("AG1({m},{q})"))?;
    verify_steiner(&structure, q as usize)?;
    Ok(GeometryDesign {
        kind: GeometryKind::Ag,
        m,
        q,
        structure,
        point_coords: points,
        field: f,
        lookup,
    })
}

/// AG(m,q) without the origin and without the lines through it.
pub fn build_eg(m: u32, q: u32) -> Result<GeometryDesign, GeometryError> {
    let f = check_params(m, q)?;
    let points = affine_points(q, m, true);
    let mut lookup = vec![u32::MAX];
    lookup.extend(0..points.len() as u32);
    let lines = affine_lines(&f, &points, &lookup, true);
    let structure = IncidenceStructure::new(points.len(), lines, format!("EG1({m},{q})"))?;
    verify_partial_steiner(&structure, q as usize)?;
    Ok(GeometryDesign {
        kind: GeometryKind::Eg,
        m,
        q,
        structure,
        point_coords: points,
        field: f,
        lookup,
    })
}

pub fn build_geometry(kind: GeometryKind, m: u32, q: u32) -> Result<GeometryDesign, GeometryError> {
    match kind {
        GeometryKind::Pg => build_pg(m, q),
        GeometryKind::Ag => build_ag(m, q),
        GeometryKind::Eg => build_eg(m, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::tanner_girth;
    use crate::designs::Girth;

    #[test]
    fn counts_match_the_closed_forms() {
        for (kind, m, q) in [
            (GeometryKind::Pg, 2, 2),
            (GeometryKind::Pg, 3, 2),
            (GeometryKind::Pg, 3, 3),
            (GeometryKind::Pg, 2, 4),
            (GeometryKind::Ag, 2, 3),
            (GeometryKind::Ag, 3, 2),
            (GeometryKind::Ag, 2, 4),
            (GeometryKind::Eg, 2, 2),
            (GeometryKind::Eg, 2, 8),
            (GeometryKind::Eg, 3, 2),
            (GeometryKind::Eg, 3, 3),
        ] {
            let g = build_geometry(kind, m, q).unwrap();
            let (v, b, k) = geometry_counts(kind, m, q as u64);
            assert_eq!(g.structure.v() as u64, v, "{kind}({m},{q})");
            assert_eq!(g.structure.b() as u64, b, "{kind}({m},{q})");
            assert!(g.structure.blocks().iter().all(|l| l.len() as u64 == k));
            assert!(g.structure.replication_numbers().iter().all(|&r| r == g.r()));
        }
    }

    #[test]
    fn spec_examples() {
        let g = build_pg(3, 2).unwrap();
        assert_eq!((g.structure.v(), g.structure.b(), g.r()), (15, 35, 7));
        let g = build_pg(3, 3).unwrap();
        assert_eq!((g.structure.v(), g.structure.b()), (40, 130));
        let g = build_ag(3, 2).unwrap();
        assert_eq!((g.structure.v(), g.structure.b()), (8, 28));
        let g = build_eg(2, 2).unwrap();
        assert_eq!((g.structure.v(), g.structure.b()), (3, 3));
        assert!(build_pg(1, 2).is_err());
        assert!(build_ag(2, 6).is_err());
    }

    #[test]
    fn eg_is_ag_minus_the_origin_and_its_lines() {
        for (m, q) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (2, 8), (4, 2)] {
            let ag = build_ag(m, q).unwrap();
            let eg = build_eg(m, q).unwrap();
            let mut expected: Vec<Vec<usize>> = ag
                .structure
                .blocks()
                .iter()
                .filter(|l| !l.contains(&0))
                .map(|l| l.iter().map(|&p| p - 1).collect())
                .collect();
            expected.sort();
            assert_eq!(eg.structure.blocks(), expected.as_slice(), "EG({m},{q})");
            let through_origin = ag.structure.b() - eg.structure.b();
            assert_eq!(through_origin, ag.r());
        }
    }

    #[test]
    fn point_lookup_round_trips() {
        for g in [build_pg(2, 4).unwrap(), build_ag(2, 3).unwrap(), build_eg(2, 3).unwrap()] {
            for (i, c) in g.point_coords.iter().enumerate() {
                assert_eq!(g.point_index(c), Some(i));
            }
        }
        let g = build_pg(2, 3).unwrap();
        // (0,2,1) is a multiple of the representative (0,1,2)
        let x = FieldVector::new(vec![0, 2, 1]);
        assert_eq!(g.point_index(&x), g.point_index(&x.normalized(&g.field)));
    }

    #[test]
    fn ag23_has_girth_six() {
        assert_eq!(tanner_girth(&build_ag(2, 3).unwrap().structure, 20), Girth::Exact(6));
    }
}
