use super::{CPrediction, EaqeccError, EaqeccParams, Orientation};
use crate::designs::Girth;
use crate::field::prime_power;
use crate::geometry::{hamada_phi, rank_formula, GeometryError, GeometryKind, GeometrySpec};
use crate::gf2::DistanceResult;

/// The geometry families with closed-form `[[n, k, d; c]]`.
pub const FAMILIES: [&str; 10] = [
    "PG(m,2^t) Type II, m >= 2",
    "PG(m,q) Type II, q odd, m odd",
    "PG(m,q) Type II, q odd, m even >= 4",
    "PG(2,2^t) Type I",
    "AG(m,2^t) Type II, m >= 2",
    "AG(m,q) Type II, q odd, m odd",
    "AG(m,q) Type II, q odd, m even",
    "AG(2,2^t) Type I",
    "EG(2,2^t) Type I",
    "EG(m,2^t) Type II, m >= 2",
];

fn no_family(spec: GeometrySpec, orientation: Orientation) -> EaqeccError {
    EaqeccError::NoFamily {
        spec,
        orientation,
        families: FAMILIES.join("; "),
    }
}

fn validate(spec: GeometrySpec) -> Result<u32, EaqeccError> {
    let (p, t) = prime_power(spec.q as u64).ok_or_else(|| {
        GeometryError::InvalidParameters(format!("{} is not a prime power", spec.q))
    })?;
    if spec.m < 2 {
        return Err(GeometryError::InvalidParameters(format!(
            "dimension must be at least 2, got {}",
            spec.m
        ))
        .into());
    }
    let big = (spec.q as u128).checked_pow(spec.m + 1);
    if big.is_none_or(|x| x > 1 << 40) {
        return Err(GeometryError::InvalidParameters(format!(
            "{spec} is too large for closed forms"
        ))
        .into());
    }
    Ok(if p == 2 { t } else { 0 })
}

/// `[[n, k, d; c]]` of a geometry code from closed-form expressions alone.
pub fn family_params(
    spec: GeometrySpec,
    orientation: Orientation,
) -> Result<EaqeccParams, EaqeccError> {
    let t = validate(spec)?;
    let even = t > 0;
    let m = spec.m;
    let q = spec.q as u64;
    let (v, b, _) = spec.counts();
    let phi = |m: u32| hamada_phi(m, t);
    let rho = || phi(m) - phi(m - 1);
    let three_t = 3u64.pow(t);
    use GeometryKind::*;
    use Orientation::*;
    // (n, rank, c, d)
    let (n, rank, c, d) = match (spec.kind, orientation, even) {
        (Pg, PointByBlock, true) => (b, phi(m), 1, q + 2),
        (Pg, PointByBlock, false) if m % 2 == 1 => (b, v - 1, 1, 2 * (q + 1)),
        (Pg, PointByBlock, false) if m >= 4 => (b, v - 1, v - 1, 2 * (q + 1)),
        (Pg, BlockByPoint, true) if m == 2 => (v, three_t + 1, 1, q + 2),
        (Ag, PointByBlock, true) => (b, rho(), 1, q + 1),
        (Ag, PointByBlock, false) if m % 2 == 1 => (b, q.pow(m), 1, 2 * q),
        (Ag, PointByBlock, false) => (b, q.pow(m), q.pow(m) - 1, 2 * q),
        (Ag, BlockByPoint, true) if m == 2 => (v, three_t, q, q + 2),
        (Eg, BlockByPoint, true) if m == 2 => (v, three_t - 1, q, q + 1),
        (Eg, PointByBlock, true) => (b, rho() - 1, (q.pow(m) - q) / (q - 1), q + 1),
        _ => return Err(no_family(spec, orientation)),
    };
    Ok(EaqeccParams {
        n: n as usize,
        k: n as i64 - 2 * rank as i64 + c as i64,
        c: c as usize,
        rank_h: rank as usize,
        orientation,
        distance: DistanceResult::exact(d as usize, None),
        girth: Some(Girth::Exact(6)),
        geometry: Some(spec),
        provenance: "closed-form".into(),
    })
}

/// Predicted `c` for a geometry code. Point-by-block PG and AG follow the
/// Steiner parity rule; EG with even q gives `(q^m - q)/(q - 1)`; Type I
/// planes over even q give 1 (PG) and q (AG, EG). Everything else is only
/// bracketed by `1 <= c <= rank(H)`.
pub fn geometry_expected_c(
    spec: GeometrySpec,
    orientation: Orientation,
) -> Result<CPrediction, EaqeccError> {
    let t = validate(spec)?;
    let even = t > 0;
    let q = spec.q as u64;
    let m = spec.m;
    let (v, _, _) = spec.counts();
    let r = (q.pow(m) - 1) / (q - 1);
    use GeometryKind::*;
    use Orientation::*;
    let exact = |c: u64| Ok(CPrediction::Exact(c as usize));
    match (spec.kind, orientation) {
        (Pg | Ag, PointByBlock) => exact(if r % 2 == 1 { 1 } else { v - 1 }),
        (Eg, PointByBlock) if even => exact((q.pow(m) - q) / (q - 1)),
        (Pg, BlockByPoint) if even && m == 2 => exact(1),
        (Ag | Eg, BlockByPoint) if even && m == 2 => exact(q),
        _ => {
            let upper = match rank_formula(spec.kind, m, q)? {
                crate::geometry::RankPrediction::Exact(x) => x,
                crate::geometry::RankPrediction::Interval { upper, .. } => upper,
            };
            Ok(CPrediction::Interval {
                lower: 1,
                upper: upper as usize,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nkdc(kind: GeometryKind, o: Orientation, m: u32, q: u32) -> (usize, i64, usize, usize) {
        let p = family_params(GeometrySpec::new(kind, m, q), o).unwrap();
        (p.n, p.k, p.distance.value().unwrap(), p.c)
    }

    #[test]
    fn spec_examples() {
        use GeometryKind::*;
        use Orientation::*;
        assert_eq!(nkdc(Pg, BlockByPoint, 2, 16), (273, 110, 18, 1));
        assert_eq!(nkdc(Ag, PointByBlock, 3, 5), (775, 526, 10, 1));
        assert_eq!(nkdc(Eg, PointByBlock, 3, 4), (315, 235, 5, 20));
        assert_eq!(nkdc(Pg, PointByBlock, 3, 2), (35, 14, 4, 1));
        assert_eq!(nkdc(Ag, BlockByPoint, 2, 16), (256, 110, 18, 16));
        assert_eq!(nkdc(Eg, BlockByPoint, 2, 8), (63, 19, 9, 8));
        assert_eq!(nkdc(Pg, PointByBlock, 4, 3), (1210, 1090, 8, 120));
        assert_eq!(nkdc(Ag, PointByBlock, 4, 3), (1080, 998, 6, 80));
    }

    #[test]
    fn uncovered_families_list_the_covered_ones() {
        let e = family_params(GeometrySpec::new(GeometryKind::Pg, 3, 2), Orientation::BlockByPoint)
            .unwrap_err();
        assert!(e.to_string().contains("AG(2,2^t) Type I"));
        assert!(family_params(GeometrySpec::new(GeometryKind::Pg, 2, 3), Orientation::PointByBlock)
            .is_err());
        assert!(family_params(GeometrySpec::new(GeometryKind::Eg, 3, 3), Orientation::PointByBlock)
            .is_err());
        assert!(family_params(GeometrySpec::new(GeometryKind::Pg, 2, 6), Orientation::PointByBlock)
            .is_err());
    }

    #[test]
    fn predicted_c_for_geometries() {
        use GeometryKind::*;
        use Orientation::*;
        let c = |k, o, m, q| geometry_expected_c(GeometrySpec::new(k, m, q), o).unwrap();
        assert_eq!(c(Pg, PointByBlock, 3, 3), CPrediction::Exact(1));
        assert_eq!(c(Pg, PointByBlock, 4, 3), CPrediction::Exact(120));
        assert_eq!(c(Eg, PointByBlock, 3, 2), CPrediction::Exact(6));
        assert_eq!(c(Ag, BlockByPoint, 2, 8), CPrediction::Exact(8));
        assert_eq!(
            c(Pg, BlockByPoint, 3, 2),
            CPrediction::Interval { lower: 1, upper: 11 }
        );
    }
}
