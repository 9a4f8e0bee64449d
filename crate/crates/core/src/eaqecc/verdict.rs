use super::{EaqeccError, Orientation};
use crate::designs::{verify_steiner, IncidenceStructure};
use crate::field::prime_power;
use crate::geometry::{
    affine_dual_hyperoval, affine_hyperoval, dual_hyperoval, hyperbolic_quadric, parallel_pair,
    plane_hyperoval, ColumnSpace, GeometryDesign, GeometryKind, GeometrySpec, WitnessKind,
};
use crate::gf2::{
    min_distance, support_search_range, BitMatrix, BitVec, DistanceBudget, DistanceResult,
    DistanceStrategy, RankProfile,
};

/// A distance statement known from theory: `lower <= d <= upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremDistance {
    pub statement: &'static str,
    pub lower: usize,
    pub upper: Option<usize>,
}

impl TheoremDistance {
    fn exact(statement: &'static str, d: u64) -> Self {
        Self {
            statement,
            lower: d as usize,
            upper: Some(d as usize),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceSource {
    /// Exhaustive enumeration of the code or its dual.
    Enumeration,
    /// Support search ruled out every weight below `ruled_out_below`, and
    /// found a codeword of weight `found` if set.
    SupportSearch {
        ruled_out_below: usize,
        found: Option<usize>,
    },
    Theorem(TheoremDistance),
    /// A constructed codeword, validated against `H`.
    Witness { kind: WitnessKind, weight: usize },
    RandomSearch { found: Option<usize> },
}

/// How far a distance value has been checked by computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Every codeword (or dual codeword) was enumerated.
    Enumerated,
    /// An explicit codeword attains the value and search ruled out every
    /// lighter weight.
    Searched,
    /// The value rests on a theorem; computation confirmed it only
    /// partially.
    TheoremOnly,
    /// Only bounds are known.
    Unresolved,
}

impl std::fmt::Display for Certification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Certification::Enumerated => "enumerated",
            Certification::Searched => "searched",
            Certification::TheoremOnly => "theorem-only",
            Certification::Unresolved => "bounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceVerdict {
    pub result: DistanceResult,
    pub sources: Vec<DistanceSource>,
    pub certification: Certification,
}

fn even_t(q: u32) -> Option<u32> {
    prime_power(q as u64).and_then(|(p, t)| (p == 2).then_some(t))
}

/// Known minimum distance of the classical code of a geometry.
pub fn theorem_distance(spec: GeometrySpec, orientation: Orientation) -> Option<TheoremDistance> {
    let q = spec.q as u64;
    let m = spec.m;
    let even = even_t(spec.q).is_some();
    use GeometryKind::*;
    use Orientation::*;
    Some(match (spec.kind, orientation) {
        (Pg, PointByBlock) if even => {
            TheoremDistance::exact("lines of PG(m,q), q even: d = q + 2", q + 2)
        }
        (Pg, PointByBlock) if m >= 3 => TheoremDistance::exact(
            "lines of PG(m,q), q odd, m >= 3: d = 2(q + 1)",
            2 * (q + 1),
        ),
        (Pg, BlockByPoint) if even => TheoremDistance::exact(
            "points of PG(m,q), q even: d = (q + 2) q^(m-2)",
            (q + 2) * q.pow(m - 2),
        ),
        (Ag, PointByBlock) if even => {
            TheoremDistance::exact("lines of AG(m,q), q even: d = q + 1", q + 1)
        }
        (Ag, PointByBlock) => TheoremDistance::exact("lines of AG(m,q), q odd: d = 2q", 2 * q),
        (Ag, BlockByPoint) if even => TheoremDistance::exact(
            "points of AG(m,q), q even: d = (q + 2) q^(m-2)",
            (q + 2) * q.pow(m - 2),
        ),
        (Eg, PointByBlock) if even => {
            TheoremDistance::exact("lines of EG(m,q), q even: d = q + 1", q + 1)
        }
        (Eg, PointByBlock) if m >= 3 => {
            TheoremDistance::exact("lines of EG(m,q), q odd, m >= 3: d = 2q", 2 * q)
        }
        (Eg, BlockByPoint) if even => {
            let bound = (q.pow(m) - 1) / (q - 1);
            if m == 2 {
                TheoremDistance::exact("points of EG(2,q), q even: d = q + 1", bound)
            } else {
                TheoremDistance {
                    statement: "points of EG(m,q), q even: d >= (q^m - 1)/(q - 1)",
                    lower: bound as usize,
                    upper: None,
                }
            }
        }
        _ => return None,
    })
}

fn geometry_witness(
    design: &GeometryDesign,
    orientation: Orientation,
) -> Result<Option<(WitnessKind, Vec<usize>)>, EaqeccError> {
    let even = even_t(design.q).is_some();
    let m = design.m;
    use GeometryKind::*;
    use Orientation::*;
    let w = match (design.kind, orientation) {
        (Pg, PointByBlock) if even => dual_hyperoval(design)?,
        (Pg, PointByBlock) if m >= 3 => hyperbolic_quadric(design)?,
        (Pg, BlockByPoint) if even && m == 2 => plane_hyperoval(design)?,
        (Ag | Eg, PointByBlock) if even => affine_dual_hyperoval(design)?,
        (Ag, PointByBlock) => parallel_pair(design)?,
        (Eg, PointByBlock) if m >= 3 => parallel_pair(design)?,
        (Ag | Eg, BlockByPoint) if even && m == 2 => affine_hyperoval(design)?,
        _ => return Ok(None),
    };
    let expected = match orientation {
        PointByBlock => ColumnSpace::Blocks,
        BlockByPoint => ColumnSpace::Points,
    };
    debug_assert_eq!(w.space, expected);
    Ok(Some((w.kind, w.support)))
}

/// Distance of the code of a finite geometry with parity-check matrix `h`
/// (its incidence matrix in the given orientation).
pub fn distance_verdict(
    design: &GeometryDesign,
    orientation: Orientation,
    h: &BitMatrix,
    budget: &DistanceBudget,
) -> Result<DistanceVerdict, EaqeccError> {
    let theorem = theorem_distance(design.spec(), orientation);
    let witness = geometry_witness(design, orientation)?;
    // collineations act transitively on points and on lines
    assemble(h, theorem, witness, budget, true)
}

/// Distance of a code whose matrix is a geometry's point-by-block matrix
/// with some columns removed; the geometry's distance is inherited as a
/// lower bound.
pub fn deleted_distance_verdict(
    parent: GeometrySpec,
    h: &BitMatrix,
    budget: &DistanceBudget,
) -> Result<DistanceVerdict, EaqeccError> {
    let theorem = theorem_distance(parent, Orientation::PointByBlock).map(|t| TheoremDistance {
        upper: None,
        ..t
    });
    assemble(h, theorem, None, budget, false)
}

/// Distance of the code of an arbitrary incidence structure. Point-by-block
/// matrices of Steiner triple systems satisfy `4 <= d <= 8`.
pub fn structure_distance_verdict(
    s: &IncidenceStructure,
    orientation: Orientation,
    h: &BitMatrix,
    budget: &DistanceBudget,
) -> Result<DistanceVerdict, EaqeccError> {
    let theorem = (orientation == Orientation::PointByBlock
        && s.v() > 3
        && verify_steiner(s, 3).is_ok())
    .then_some(TheoremDistance {
        statement: "Steiner triple systems, point-by-block: 4 <= d <= 8",
        lower: 4,
        upper: Some(8),
    });
    assemble(h, theorem, None, budget, budget.column_transitive)
}

fn conflict(msg: String) -> EaqeccError {
    EaqeccError::Conflict(msg)
}

fn assemble(
    h: &BitMatrix,
    theorem: Option<TheoremDistance>,
    witness: Option<(WitnessKind, Vec<usize>)>,
    budget: &DistanceBudget,
    transitive: bool,
) -> Result<DistanceVerdict, EaqeccError> {
    let n = h.cols();
    let mut sources = Vec::new();
    if let Some((kind, support)) = &witness {
        let x = BitVec::from_support(n, support)?;
        if support.is_empty() || !h.mul_vec(&x)?.is_zero() {
            return Err(conflict(format!("{kind:?} witness is not a codeword")));
        }
        sources.push(DistanceSource::Witness {
            kind: *kind,
            weight: support.len(),
        });
    }
    if let Some(t) = &theorem {
        sources.push(DistanceSource::Theorem(t.clone()));
    }
    let profile = RankProfile::new(h);
    let dim = n - profile.rank;
    let check_against_theorem = |d: usize, how: &str| -> Result<(), EaqeccError> {
        if let Some(t) = &theorem {
            if d < t.lower || t.upper.is_some_and(|u| d > u) {
                return Err(conflict(format!(
                    "{how} gives d = {d}, but \"{}\" claims [{}, {:?}]",
                    t.statement, t.lower, t.upper
                )));
            }
        }
        Ok(())
    };
    if dim == 0 {
        if theorem.is_some() || witness.is_some() {
            return Err(conflict("the code is zero but a distance is claimed".into()));
        }
        return Ok(DistanceVerdict {
            result: min_distance(h, DistanceStrategy::EnumerateCodewords, budget)?,
            sources: vec![DistanceSource::Enumeration],
            certification: Certification::Enumerated,
        });
    }
    if dim.min(profile.rank) <= budget.exponent_cap {
        let mut r = min_distance(h, DistanceStrategy::EnumerateCodewords, budget)?;
        let d = r.lower;
        check_against_theorem(d, "enumeration")?;
        if let Some((kind, support)) = &witness {
            if support.len() < d {
                return Err(conflict(format!(
                    "{kind:?} witness of weight {} beats the enumerated d = {d}",
                    support.len()
                )));
            }
            if r.witness.is_none() && support.len() == d {
                r.witness = Some(support.clone());
            }
        }
        sources.insert(0, DistanceSource::Enumeration);
        return Ok(DistanceVerdict {
            result: r,
            sources,
            certification: Certification::Enumerated,
        });
    }

    let claimed_lower = theorem.as_ref().map_or(1, |t| t.lower);
    let mut upper = theorem.as_ref().and_then(|t| t.upper);
    let mut best = None;
    if let Some((kind, support)) = &witness {
        if support.len() < claimed_lower {
            return Err(conflict(format!(
                "{kind:?} witness of weight {} is below the claimed d >= {claimed_lower}",
                support.len()
            )));
        }
        if upper.is_none_or(|u| support.len() <= u) {
            upper = Some(support.len());
            best = Some(support.clone());
        }
    }

    // Independent check of the lower bound: rule out lighter codewords.
    let mut searched_below = 1;
    if claimed_lower > 1 {
        let r = support_search_range(h, 1, claimed_lower - 1, budget.node_budget, transitive);
        if r.is_exact() {
            return Err(conflict(format!(
                "support search found a codeword of weight {} below the claimed d >= {claimed_lower}",
                r.lower
            )));
        }
        searched_below = r.lower;
        sources.push(DistanceSource::SupportSearch {
            ruled_out_below: r.lower,
            found: None,
        });
    }
    let lower_confirmed = searched_below >= claimed_lower;

    let mut lower = claimed_lower;
    // Look for a codeword between the lower bound and the best known upper
    // bound (or the support cap when there is none).
    let need_codeword = best.is_none() || upper != Some(lower);
    if need_codeword && (theorem.is_some() || lower_confirmed) {
        let top = match upper {
            Some(u) if best.is_some() => u - 1,
            Some(u) => u,
            None => lower + budget.support_weight_cap,
        };
        if top >= lower {
            let r = support_search_range(h, lower, top, budget.node_budget, transitive);
            sources.push(DistanceSource::SupportSearch {
                ruled_out_below: r.lower,
                found: r.upper.filter(|_| r.is_exact()),
            });
            if r.is_exact() {
                lower = r.lower;
                upper = Some(r.lower);
                best = r.witness;
            } else {
                lower = lower.max(r.lower.min(upper.unwrap_or(usize::MAX)));
            }
        }
    }
    if best.is_none() && upper.is_none() {
        let r = min_distance(h, DistanceStrategy::RandomizedSearch, budget)?;
        sources.push(DistanceSource::RandomSearch { found: r.upper });
        upper = r.upper;
        best = r.witness;
    }
    if let Some(u) = upper {
        if u < claimed_lower {
            return Err(conflict(format!(
                "random search found weight {u} below the claimed d >= {claimed_lower}"
            )));
        }
    }
    let result = DistanceResult::bounded(lower, upper, best.filter(|w| Some(w.len()) == upper));
    let certification = if !result.is_exact() {
        Certification::Unresolved
    } else if lower_confirmed && result.witness.is_some() {
        Certification::Searched
    } else {
        Certification::TheoremOnly
    };
    Ok(DistanceVerdict {
        result,
        sources,
        certification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{build_sts, develop_cyclic};
    use crate::geometry::{build_ag, build_eg, build_pg};

    fn verdict(d: &GeometryDesign, o: Orientation) -> DistanceVerdict {
        let h = o.matrix(&d.structure);
        distance_verdict(d, o, &h, &DistanceBudget::default()).unwrap()
    }

    #[test]
    fn pg32_type_ii_is_enumerated_and_matches_theory() {
        let v = verdict(&build_pg(3, 2).unwrap(), Orientation::PointByBlock);
        assert_eq!(v.result.value(), Some(4));
        assert_eq!(v.certification, Certification::Enumerated);
        assert!(v.sources.iter().any(|s| matches!(s, DistanceSource::Theorem(_))));
    }

    #[test]
    fn ag33_type_ii_is_six() {
        let v = verdict(&build_ag(3, 3).unwrap(), Orientation::PointByBlock);
        assert_eq!(v.result.value(), Some(6));
    }

    #[test]
    fn eg_plane_type_i() {
        let v = verdict(&build_eg(2, 8).unwrap(), Orientation::BlockByPoint);
        assert_eq!(v.result.value(), Some(9));
    }

    #[test]
    fn search_route_when_enumeration_is_out_of_reach() {
        let d = build_ag(3, 4).unwrap();
        let h = d.structure.point_by_block();
        let budget = DistanceBudget {
            exponent_cap: 10,
            ..DistanceBudget::default()
        };
        let v = distance_verdict(&d, Orientation::PointByBlock, &h, &budget).unwrap();
        assert_eq!(v.result.value(), Some(5));
        assert_eq!(v.certification, Certification::Searched);
        let w = v.result.witness.unwrap();
        assert!(h.mul_vec(&BitVec::from_support(h.cols(), &w).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn tiny_budget_leaves_theorem_only() {
        let d = build_pg(3, 3).unwrap();
        let h = d.structure.point_by_block();
        let budget = DistanceBudget {
            exponent_cap: 10,
            node_budget: 50,
            ..DistanceBudget::default()
        };
        let v = distance_verdict(&d, Orientation::PointByBlock, &h, &budget).unwrap();
        assert_eq!(v.result.value(), Some(8));
        assert_eq!(v.certification, Certification::TheoremOnly);
    }

    #[test]
    fn wrong_theorem_is_a_conflict() {
        let d = build_pg(3, 2).unwrap();
        let h = d.structure.point_by_block();
        let bogus = TheoremDistance {
            statement: "bogus",
            lower: 5,
            upper: Some(5),
        };
        let r = assemble(&h, Some(bogus), None, &DistanceBudget::default(), true);
        assert!(matches!(r, Err(EaqeccError::Conflict(_))));
        let r = assemble(
            &h,
            None,
            Some((WitnessKind::DualHyperoval, vec![0, 1])),
            &DistanceBudget::default(),
            true,
        );
        assert!(matches!(r, Err(EaqeccError::Conflict(_))));
    }

    #[test]
    fn steiner_triple_systems_respect_the_four_to_eight_window() {
        for s in [build_sts(9).unwrap(), build_sts(13).unwrap(), build_sts(15).unwrap()] {
            let h = s.point_by_block();
            let v = structure_distance_verdict(&s, Orientation::PointByBlock, &h, &DistanceBudget::default())
                .unwrap();
            let d = v.result.value().unwrap();
            assert!((4..=8).contains(&d), "{d}");
        }
        let fano = develop_cyclic(7, &[vec![0, 1, 3]]).unwrap();
        let v = structure_distance_verdict(
            &fano,
            Orientation::PointByBlock,
            &fano.point_by_block(),
            &DistanceBudget::default(),
        )
        .unwrap();
        assert_eq!(v.result.value(), Some(4));
    }
}
