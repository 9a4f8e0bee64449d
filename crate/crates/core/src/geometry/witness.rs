//! Explicit low-weight codewords: sets of lines covering every point an even
//! number of times, and sets of points meeting every line evenly.

use super::{GeometryDesign, GeometryError, GeometryKind};
use crate::field::{enumerate_subspace_reps, Elem, FieldVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// q+2 lines of a projective plane, q even.
    DualHyperoval,
    /// The 2(q+1) lines on a hyperbolic quadric of a solid, q odd.
    HyperbolicQuadric,
    /// q+2 points of a projective plane (conic plus nucleus), q even.
    PlaneHyperoval,
    /// The q+1 affine lines of a dual hyperoval whose line at infinity is
    /// one of its members, q even.
    AffineDualHyperoval,
    /// Two parallel classes of an affine plane, 2q lines.
    ParallelPair,
    /// A conic without points at infinity plus its nucleus in AG(2,q),
    /// q even (the nucleus is dropped for EG).
    AffineHyperoval,
}

/// Index space of a witness: lines are the columns of the point-by-block
/// matrix, points the columns of the block-by-point matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnSpace {
    Blocks,
    Points,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCodeword {
    pub kind: WitnessKind,
    pub space: ColumnSpace,
    /// Sorted block or point indices.
    pub support: Vec<usize>,
    pub weight: usize,
}

impl WitnessCodeword {
    fn new(
        design: &GeometryDesign,
        kind: WitnessKind,
        space: ColumnSpace,
        mut support: Vec<usize>,
    ) -> Result<Self, GeometryError> {
        support.sort_unstable();
        support.dedup();
        let w = Self {
            kind,
            space,
            weight: support.len(),
            support,
        };
        w.validate(design)?;
        Ok(w)
    }

    /// Checks the even-incidence property against the design.
    pub fn validate(&self, design: &GeometryDesign) -> Result<(), GeometryError> {
        let s = &design.structure;
        match self.space {
            ColumnSpace::Blocks => {
                let mut deg = vec![0u32; s.v()];
                for &b in &self.support {
                    for &p in s.block(b) {
                        deg[p] += 1;
                    }
                }
                if let Some(p) = deg.iter().position(|d| d % 2 == 1) {
                    return Err(GeometryError::BadWitness(format!(
                        "{:?}: point {p} lies on {} chosen lines",
                        self.kind, deg[p]
                    )));
                }
            }
            ColumnSpace::Points => {
                let mut chosen = vec![false; s.v()];
                for &p in &self.support {
                    chosen[p] = true;
                }
                for (j, line) in s.blocks().iter().enumerate() {
                    let hits = line.iter().filter(|&&p| chosen[p]).count();
                    if hits % 2 == 1 {
                        return Err(GeometryError::BadWitness(format!(
                            "{:?}: line {j} meets the set in {hits} points",
                            self.kind
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn pad(design: &GeometryDesign, head: &[Elem]) -> FieldVector {
    let len = design.point_coords[0].len();
    let mut c = head.to_vec();
    c.resize(len, 0);
    FieldVector::new(c)
}

fn point_of(design: &GeometryDesign, coords: &FieldVector) -> Result<usize, GeometryError> {
    design
        .point_index(coords)
        .ok_or_else(|| GeometryError::BadWitness(format!("{:?} is not a point", coords.coords)))
}

fn line_of(design: &GeometryDesign, pts: &[FieldVector]) -> Result<usize, GeometryError> {
    let idx: Vec<usize> = pts
        .iter()
        .map(|c| point_of(design, c))
        .collect::<Result<_, _>>()?;
    design
        .block_index(&idx)
        .ok_or_else(|| GeometryError::BadWitness(format!("points {idx:?} are not a line")))
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), GeometryError> {
    if cond {
        Ok(())
    } else {
        Err(GeometryError::Unsupported(msg.into()))
    }
}

fn even_q(design: &GeometryDesign) -> bool {
    design.field.p() == 2
}

/// The lines `X0 + b X1 + b^2 X2 = 0` (b in GF(q)), `X1 = 0` and `X2 = 0` of
/// the plane spanned by the first three coordinates.
pub fn dual_hyperoval(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind == GeometryKind::Pg, "dual hyperovals live in PG")?;
    require(even_q(design), "dual hyperovals exist only for even q")?;
    let f = &design.field;
    let plane: Vec<FieldVector> = enumerate_subspace_reps(f, 3)
        .into_iter()
        .map(|p| pad(design, &p.coords))
        .collect();
    let on = |pred: &dyn Fn(&[Elem]) -> bool| -> Vec<FieldVector> {
        plane.iter().filter(|p| pred(&p.coords)).cloned().collect()
    };
    let mut lines = Vec::new();
    for beta in f.elements() {
        let b2 = f.mul(beta, beta);
        let pts = on(&|x| f.add(f.add(x[0], f.mul(beta, x[1])), f.mul(b2, x[2])) == 0);
        lines.push(line_of(design, &pts)?);
    }
    lines.push(line_of(design, &on(&|x| x[1] == 0))?);
    lines.push(line_of(design, &on(&|x| x[2] == 0))?);
    WitnessCodeword::new(design, WitnessKind::DualHyperoval, ColumnSpace::Blocks, lines)
}

/// Both rulings of the quadric `x0 x3 = x1 x2` in the solid spanned by the
/// first four coordinates: points `(ac, ad, bc, bd)`.
pub fn hyperbolic_quadric(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind == GeometryKind::Pg, "hyperbolic quadrics live in PG")?;
    require(!even_q(design), "the quadric witness is for odd q")?;
    require(design.m >= 3, "the quadric witness needs m >= 3")?;
    let f = &design.field;
    let pg1 = enumerate_subspace_reps(f, 2);
    let segre = |ab: &FieldVector, cd: &FieldVector| {
        let (a, b) = (ab.coords[0], ab.coords[1]);
        let (c, d) = (cd.coords[0], cd.coords[1]);
        pad(design, &[f.mul(a, c), f.mul(a, d), f.mul(b, c), f.mul(b, d)])
    };
    let mut lines = Vec::new();
    for fixed in &pg1 {
        let first: Vec<FieldVector> = pg1.iter().map(|x| segre(fixed, x)).collect();
        lines.push(line_of(design, &first)?);
        let second: Vec<FieldVector> = pg1.iter().map(|x| segre(x, fixed)).collect();
        lines.push(line_of(design, &second)?);
    }
    WitnessCodeword::new(design, WitnessKind::HyperbolicQuadric, ColumnSpace::Blocks, lines)
}

/// The points `(1, b, b^2)`, `(0, 1, 0)` and `(0, 0, 1)` of PG(2,q), q even.
pub fn plane_hyperoval(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind == GeometryKind::Pg, "plane hyperovals live in PG")?;
    require(even_q(design), "hyperovals exist only for even q")?;
    require(design.m == 2, "the point witness is for the plane only")?;
    let f = &design.field;
    let mut pts = Vec::new();
    for beta in f.elements() {
        pts.push(point_of(design, &pad(design, &[1, beta, f.mul(beta, beta)]))?);
    }
    pts.push(point_of(design, &pad(design, &[0, 1, 0]))?);
    pts.push(point_of(design, &pad(design, &[0, 0, 1]))?);
    WitnessCodeword::new(design, WitnessKind::PlaneHyperoval, ColumnSpace::Points, pts)
}

/// Affine lines `x0 + b x1 + b^2 = 0` and `x1 = 0` in the plane of the first
/// two coordinates. For EG the configuration is first translated so that the
/// origin lies on none of the lines.
pub fn affine_dual_hyperoval(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind != GeometryKind::Pg, "this witness is affine")?;
    require(even_q(design), "dual hyperovals exist only for even q")?;
    let f = &design.field;
    let q = f.q();
    let mut lines: Vec<Vec<(Elem, Elem)>> = Vec::new();
    for beta in f.elements() {
        let b2 = f.mul(beta, beta);
        // x0 = b x1 + b^2 in characteristic 2
        lines.push(f.elements().map(|x1| (f.add(f.mul(beta, x1), b2), x1)).collect());
    }
    lines.push(f.elements().map(|x0| (x0, 0)).collect());
    let shift = if design.kind == GeometryKind::Eg {
        let mut deg = vec![0u32; (q * q) as usize];
        for l in &lines {
            for &(a, b) in l {
                deg[(a * q + b) as usize] += 1;
            }
        }
        let free = deg.iter().position(|&d| d == 0).ok_or_else(|| {
            GeometryError::BadWitness("every affine point is covered".into())
        })? as u32;
        (free / q, free % q)
    } else {
        (0, 0)
    };
    let mut support = Vec::new();
    for l in &lines {
        let pts: Vec<FieldVector> = l
            .iter()
            .map(|&(a, b)| pad(design, &[f.sub(a, shift.0), f.sub(b, shift.1)]))
            .collect();
        support.push(line_of(design, &pts)?);
    }
    WitnessCodeword::new(design, WitnessKind::AffineDualHyperoval, ColumnSpace::Blocks, support)
}

/// The lines `x0 = c` and `x1 = c` of an affine plane: in the plane
/// `x2 = ... = 0` for AG, and in the plane `x2 = 1` (which misses the
/// origin) for EG, `m >= 3`.
pub fn parallel_pair(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind != GeometryKind::Pg, "this witness is affine")?;
    let third: Vec<Elem> = match design.kind {
        GeometryKind::Eg => {
            require(design.m >= 3, "EG needs m >= 3 for a plane avoiding the origin")?;
            vec![1]
        }
        _ => vec![],
    };
    let f = &design.field;
    let at = |x0: Elem, x1: Elem| {
        let mut c = vec![x0, x1];
        c.extend_from_slice(&third);
        pad(design, &c)
    };
    let mut support = Vec::new();
    for c in f.elements() {
        let vertical: Vec<FieldVector> = f.elements().map(|t| at(c, t)).collect();
        support.push(line_of(design, &vertical)?);
        let horizontal: Vec<FieldVector> = f.elements().map(|t| at(t, c)).collect();
        support.push(line_of(design, &horizontal)?);
    }
    WitnessCodeword::new(design, WitnessKind::ParallelPair, ColumnSpace::Blocks, support)
}

/// Points of `x^2 + xy + a y^2 = 1` with `Tr(a) = 1` (an irreducible form, so
/// no points at infinity), plus the nucleus `(0,0)` for AG. For EG the origin
/// is not a point and the q+1 conic points alone meet every line evenly.
pub fn affine_hyperoval(design: &GeometryDesign) -> Result<WitnessCodeword, GeometryError> {
    require(design.kind != GeometryKind::Pg, "this witness is affine")?;
    require(even_q(design), "hyperovals exist only for even q")?;
    require(design.m == 2, "the point witness is for the plane only")?;
    let f = &design.field;
    let alpha = f
        .elements()
        .find(|&a| f.absolute_trace(a) == 1)
        .expect("trace is onto GF(2)");
    let mut pts = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            let val = f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(alpha, f.mul(y, y)));
            if val == 1 {
                pts.push(point_of(design, &FieldVector::new(vec![x, y]))?);
            }
        }
    }
    if design.kind == GeometryKind::Ag {
        pts.push(point_of(design, &FieldVector::new(vec![0, 0]))?);
    }
    WitnessCodeword::new(design, WitnessKind::AffineHyperoval, ColumnSpace::Points, pts)
}
