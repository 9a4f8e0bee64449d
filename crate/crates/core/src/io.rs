//! Text formats: design files, base-block files, MacKay alist, and CSV rows
//! for code parameters and simulation results.
//!
//! Design file:
//!
//! ```text
//! v b
//! # source <provenance>        (optional)
//! # <i> <label>                (optional, one per point, in order)
//! <block 0 points, 0-based, space separated>
//! ...
//! ```
//!
//! Other lines starting with `#` are ignored on input.

use std::fmt::Write as _;

use thiserror::Error;

use crate::designs::{DesignError, IncidenceStructure};
use crate::eaqecc::{render_half_up, EaqeccParams};
use crate::gf2::{BitMatrix, DistanceStatus, Gf2Error};
use crate::simulator::{BlerRecord, SimConfig, SuccessCriterion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>, IoError> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected a non-negative integer, got {t:?}")))
        })
        .collect()
}

pub fn write_design(s: &IncidenceStructure) -> String {
    let mut out = format!("{} {}\n", s.v(), s.b());
    if !s.provenance().is_empty() {
        let _ = writeln!(out, "# source {}", s.provenance());
    }
    if let Some(labels) = s.labels() {
        for (i, l) in labels.iter().enumerate() {
            let _ = writeln!(out, "# {i} {l}");
        }
    }
    for b in s.blocks() {
        let pts: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        out.push_str(&pts.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a design file. Block order is preserved, so writing the result
/// reproduces the input when it was produced by [`write_design`].
pub fn read_design(text: &str) -> Result<IncidenceStructure, IoError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| IoError::Truncated("missing `v b` header".into()))?;
    let hv = parse_numbers(ln, header)?;
    let [v, b] = hv[..] else {
        return Err(parse_err(ln, "header must be `v b`"));
    };
    let mut provenance = String::new();
    let mut labels: Vec<String> = Vec::new();
    let mut blocks = Vec::with_capacity(b);
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(p) = rest.strip_prefix("source ") {
                provenance = p.trim().to_string();
            } else if let Some((i, label)) = rest.split_once(' ') {
                if i.parse::<usize>().ok() == Some(labels.len()) {
                    labels.push(label.trim().to_string());
                }
            }
            continue;
        }
        let pts = parse_numbers(ln, l)?;
        if pts.windows(2).any(|w| w[0] >= w[1]) {
            let mut sorted = pts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != pts.len() {
                return Err(parse_err(ln, "block repeats a point"));
            }
            return Err(parse_err(ln, "block points must be listed in increasing order"));
        }
        blocks.push(pts);
    }
    if blocks.len() != b {
        return Err(parse_err(
            ln,
            format!("header declares {b} blocks, found {}", blocks.len()),
        ));
    }
    let s = IncidenceStructure::from_sorted(v, blocks, provenance)?;
    if labels.is_empty() {
        Ok(s)
    } else {
        Ok(s.with_labels(labels)?)
    }
}

/// Base-block file: the first line is `v`, then one base block per line.
pub fn read_base_blocks(text: &str) -> Result<(usize, Vec<Vec<usize>>), IoError> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.starts_with('#'));
    let (ln, header) = lines
        .next()
        .ok_or_else(|| IoError::Truncated("missing `v` header".into()))?;
    let hv = parse_numbers(ln, header)?;
    let [v] = hv[..] else {
        return Err(parse_err(ln, "header must be the single number `v`"));
    };
    let bases = lines
        .map(|(ln, l)| parse_numbers(ln, l))
        .collect::<Result<Vec<_>, _>>()?;
    if bases.is_empty() {
        return Err(IoError::Truncated("no base blocks".into()));
    }
    Ok((v, bases))
}

pub fn write_base_blocks(v: usize, bases: &[Vec<usize>]) -> String {
    let mut out = format!("{v}\n");
    for b in bases {
        let pts: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        out.push_str(&pts.join(" "));
        out.push('\n');
    }
    out
}

fn padded(list: &[usize], width: usize) -> String {
    let mut cells: Vec<String> = list.iter().map(|x| (x + 1).to_string()).collect();
    cells.resize(width, "0".into());
    cells.join(" ")
}

/// MacKay alist of `h` (`n` columns, `m` rows). Index lists are 1-based and
/// padded with zeros to the maximum degree.
pub fn write_alist(h: &BitMatrix) -> String {
    let cols = h.column_supports();
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|r| h.row_support(r)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let degrees = |lists: &[Vec<usize>]| {
        lists
            .iter()
            .map(|l| l.len().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = format!("{} {}\n{} {}\n", h.cols(), h.rows(), max_col, max_row);
    let _ = writeln!(out, "{}", degrees(&cols));
    let _ = writeln!(out, "{}", degrees(&rows));
    for c in &cols {
        let _ = writeln!(out, "{}", padded(c, max_col.max(1)));
    }
    for r in &rows {
        let _ = writeln!(out, "{}", padded(r, max_row.max(1)));
    }
    out
}

/// Parses an alist, with or without zero padding, and checks that the
/// column and row lists describe the same matrix.
pub fn read_alist(text: &str) -> Result<BitMatrix, IoError> {
    let mut lines = content_lines(text);
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| IoError::Truncated(what.to_string()))
            .and_then(|(ln, l)| Ok((ln, parse_numbers(ln, l)?)))
    };
    let (ln, nm) = next("size line")?;
    let [n, m] = nm[..] else {
        return Err(parse_err(ln, "expected `n m`"));
    };
    let (ln, maxes) = next("maximum degrees")?;
    if maxes.len() != 2 {
        return Err(parse_err(ln, "expected two maximum degrees"));
    }
    let (ln, col_deg) = next("column degrees")?;
    if col_deg.len() != n {
        return Err(parse_err(ln, format!("expected {n} column degrees")));
    }
    let (ln, row_deg) = next("row degrees")?;
    if row_deg.len() != m {
        return Err(parse_err(ln, format!("expected {m} row degrees")));
    }
    let mut read_lists = |count: usize, degs: &[usize], bound: usize, what: &str| {
        let mut lists = Vec::with_capacity(count);
        for (i, &deg) in degs.iter().enumerate() {
            let (ln, raw) = next(what)?;
            let list: Vec<usize> = raw.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
            if list.len() != deg {
                return Err(parse_err(ln, format!("{what} {i}: degree {deg}, found {}", list.len())));
            }
            if let Some(&bad) = list.iter().find(|&&x| x >= bound) {
                return Err(parse_err(ln, format!("index {} out of range 1..={bound}", bad + 1)));
            }
            lists.push(list);
        }
        Ok::<_, IoError>(lists)
    };
    let cols = read_lists(n, &col_deg, m, "column")?;
    let rows = read_lists(m, &row_deg, n, "row")?;
    let h = BitMatrix::from_row_supports(n, &rows)?;
    let mut from_cols = BitMatrix::zeros(m, n);
    for (c, list) in cols.iter().enumerate() {
        for &r in list {
            from_cols.set(r, c, true);
        }
    }
    if from_cols != h {
        return Err(parse_err(0, "column and row lists disagree"));
    }
    Ok(h)
}

pub const PARAMS_CSV_HEADER: &str =
    "kind,orientation,m,q,n,k,d_status,d_lower,d_upper,c,rank_h,girth,rate,net_rate";

/// One parameter row. Geometry columns are empty for codes not built from a
/// geometry; rates are rounded half up to four decimals.
pub fn params_csv_row(p: &EaqeccParams) -> String {
    let (kind, m, q) = match p.geometry {
        Some(g) => (g.kind.to_string(), g.m.to_string(), g.q.to_string()),
        None => (String::new(), String::new(), String::new()),
    };
    let status = match p.distance.status {
        DistanceStatus::Exact => "exact",
        DistanceStatus::Bounded => "bounded",
        DistanceStatus::NoCodewords => "none",
    };
    let upper = p.distance.upper.map(|u| u.to_string()).unwrap_or_default();
    let girth = p.girth.map(|g| g.to_string()).unwrap_or_default();
    format!(
        "{kind},{},{m},{q},{},{},{status},{},{upper},{},{},{girth},{},{}",
        p.orientation,
        p.n,
        p.k,
        p.distance.lower,
        p.c,
        p.rank_h,
        render_half_up(p.rate(), 4),
        render_half_up(p.net_rate(), 4)
    )
}

pub const BLER_CSV_COLUMNS: &str = "f_m,trials,errors,bler,ci_low,ci_high";

/// Simulation results: a `#` header naming the code and run settings, the
/// column line, then one row per point.
pub fn bler_csv(code_id: &str, config: &SimConfig, records: &[BlerRecord]) -> String {
    let prior = config
        .prior_override
        .map(|p| p.to_string())
        .unwrap_or_else(|| "2*f_m".into());
    let criterion = match config.criterion {
        SuccessCriterion::StabilizerEquivalent => "stabilizer-equivalent",
        SuccessCriterion::ExactRecovery => "exact-recovery",
    };
    let mut out = format!(
        "# code={code_id} seed={} trials={} channel={} decoder=sum-product max_iter={} prior={prior} success={criterion}\n{BLER_CSV_COLUMNS}\n",
        config.seed, config.trials, config.reading, config.max_iter
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.6e},{:.6e},{:.6e}",
            r.f_m, r.trials, r.block_errors, r.bler, r.ci_low, r.ci_high
        );
    }
    out
}
