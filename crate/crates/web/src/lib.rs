//! Browser bindings. Every export takes plain numbers and strings and returns
//! a JSON string; failures come back as `{"error": "..."}`.

use eaqldpc::designs::{build_sts, verify_steiner, IncidenceStructure};
use eaqldpc::eaqecc::{
    css_from_parity_check, distance_verdict, render_half_up, structure_distance_verdict,
    Orientation,
};
use eaqldpc::geometry::{GeometryDesign, GeometryKind, GeometrySpec};
use eaqldpc::gf2::DistanceBudget;
use eaqldpc::simulator::{estimate_bler, SimCode, SimConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest incidence matrix (points times blocks) the page will build.
const MAX_CELLS: u64 = 20_000_000;
const MAX_TRIALS: u64 = 200_000;

struct Source {
    structure: IncidenceStructure,
    geometry: Option<GeometryDesign>,
    name: String,
}

fn load(family: &str, a: u32, b: u32) -> Result<Source, String> {
    if family.eq_ignore_ascii_case("sts") {
        let s = build_sts(a as usize).map_err(|e| e.to_string())?;
        return Ok(Source {
            structure: s,
            geometry: None,
            name: format!("STS({a})"),
        });
    }
    let kind: GeometryKind = family.parse().map_err(|e: eaqldpc::geometry::GeometryError| e.to_string())?;
    let spec = GeometrySpec::new(kind, a, b);
    if eaqldpc::field::prime_power(b as u64).is_none() || a < 2 {
        return Err(format!("{spec}: need m >= 2 and a prime power q"));
    }
    let (v, blocks, _) = spec.counts();
    if v.saturating_mul(blocks) > MAX_CELLS {
        return Err(format!("{spec} is too large for the page ({v} points, {blocks} lines)"));
    }
    let g = spec.build().map_err(|e| e.to_string())?;
    Ok(Source {
        structure: g.labelled_structure(),
        geometry: Some(g),
        name: spec.to_string(),
    })
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Points, lines and design parameters, with the first `limit` blocks
/// written out by point label.
pub fn design_json(family: &str, a: u32, b: u32, limit: usize) -> Result<Value, String> {
    let src = load(family, a, b)?;
    let s = &src.structure;
    let mu = s.uniform_block_size().ok_or("blocks of unequal size")?;
    let params = verify_steiner(s, mu).map_err(|e| e.to_string())?;
    let label = |p: usize| match s.labels() {
        Some(l) => l[p].clone(),
        None => p.to_string(),
    };
    let blocks: Vec<Vec<String>> = s
        .blocks()
        .iter()
        .take(limit)
        .map(|blk| blk.iter().map(|&p| label(p)).collect())
        .collect();
    Ok(json!({
        "name": src.name,
        "v": s.v(),
        "b": s.b(),
        "mu": mu,
        "r": params.r,
        "blocks": blocks,
    }))
}

/// `[[n, k, d; c]]` of the code whose parity-check matrix is the design's
/// incidence matrix, with a quick distance search.
pub fn params_json(family: &str, a: u32, b: u32, orientation: &str) -> Result<Value, String> {
    let src = load(family, a, b)?;
    let o: Orientation = orientation.parse().map_err(|e: eaqldpc::eaqecc::EaqeccError| e.to_string())?;
    let h = o.matrix(&src.structure);
    let p = css_from_parity_check(&h, o).map_err(|e| e.to_string())?;
    let budget = DistanceBudget {
        exponent_cap: 18,
        node_budget: 2_000_000,
        random_trials: 20,
        ..DistanceBudget::default()
    };
    let verdict = match &src.geometry {
        Some(g) => distance_verdict(g, o, &h, &budget),
        None => structure_distance_verdict(&src.structure, o, &h, &budget),
    }
    .map_err(|e| e.to_string())?;
    let d = &verdict.result;
    Ok(json!({
        "name": src.name,
        "type": o.to_string(),
        "n": p.n,
        "k": p.k,
        "c": p.c,
        "rank": p.rank_h,
        "d": d.value(),
        "d_lower": d.lower,
        "d_upper": d.upper,
        "certification": verdict.certification.to_string(),
        "rate": render_half_up(p.rate(), 4),
        "net_rate": render_half_up(p.net_rate(), 4),
    }))
}

/// Block error rate at one channel parameter.
pub fn simulate_json(
    family: &str,
    a: u32,
    b: u32,
    orientation: &str,
    f_m: f64,
    trials: u64,
    seed: u64,
) -> Result<Value, String> {
    if trials == 0 || trials > MAX_TRIALS {
        return Err(format!("trials must be between 1 and {MAX_TRIALS}"));
    }
    let src = load(family, a, b)?;
    let o: Orientation = orientation.parse().map_err(|e: eaqldpc::eaqecc::EaqeccError| e.to_string())?;
    let code = SimCode::new(o.matrix(&src.structure));
    let config = SimConfig::new(vec![f_m], trials, seed);
    let rec = estimate_bler(&code, &config).map_err(|e| e.to_string())?.remove(0);
    Ok(json!({
        "name": src.name,
        "type": o.to_string(),
        "n": code.n(),
        "f_m": rec.f_m,
        "trials": rec.trials,
        "errors": rec.block_errors,
        "bler": rec.bler,
        "ci_low": rec.ci_low,
        "ci_high": rec.ci_high,
    }))
}

#[wasm_bindgen]
pub fn design(family: &str, a: u32, b: u32, limit: usize) -> String {
    respond(design_json(family, a, b, limit))
}

#[wasm_bindgen]
pub fn code_params(family: &str, a: u32, b: u32, orientation: &str) -> String {
    respond(params_json(family, a, b, orientation))
}

#[wasm_bindgen]
pub fn simulate(family: &str, a: u32, b: u32, orientation: &str, f_m: f64, trials: u32, seed: u32) -> String {
    respond(simulate_json(family, a, b, orientation, f_m, trials as u64, seed as u64))
}
