use std::fmt::Write as _;

use eaqldpc::designs::{
    check_admissible, delete_subdesigns, develop_cyclic, matrix_girth, verify_steiner,
    DesignParams, IncidenceStructure,
};
use eaqldpc::eaqecc::{
    css_from_parity_check, distance_verdict, expected_c, structure_distance_verdict,
    DeletionRecord, DistanceSource, DistanceVerdict, EaqeccParams, Orientation,
};
use eaqldpc::geometry::{ag_hyperplane_spread, pg_spread, GeometryKind};
use eaqldpc::gf2::{BitMatrix, DistanceBudget};
use eaqldpc::io;
use eaqldpc::simulator::{estimate_bler_with, SimCode, SimConfig, SuccessCriterion};
use eaqldpc::tables::{self, ReproduceOptions, RowStatus, TableId, TableReport};
use serde_json::json;

use crate::output::Output;
use crate::source::{Loaded, SourceArgs};
use crate::{usage, Cli, CodeArgs, CodeCmd, Command, DesignCmd, Failure, SimArgs, TablesArgs};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let mut out = Output::new(cli.out.clone());
    let (config, result) = match &cli.command {
        Command::Design(cmd) => design(cmd, &mut out),
        Command::Code(cmd) => code(cmd, cli.seed, &mut out),
        Command::Tables(args) => tables_cmd(args, cli.seed, &mut out),
        Command::Sim(args) => sim(args, cli.seed, &mut out),
    };
    // the manifest is written even when a check failed, so the failing
    // artifacts stay traceable
    out.finish(cli.seed, config)?;
    result
}

type Outcome = (serde_json::Value, Result<(), Failure>);

fn design(cmd: &DesignCmd, out: &mut Output) -> Outcome {
    match cmd {
        DesignCmd::Build { source } => {
            let config = json!({ "command": "design build", "source": source.describe() });
            let r = source.load().and_then(|l| emit_design(&l.structure, out));
            (config, r)
        }
        DesignCmd::Verify { file, mu } => {
            let config = json!({ "command": "design verify", "file": file.display().to_string(), "mu": mu });
            let r = (|| {
                let text = std::fs::read_to_string(file)
                    .map_err(|e| usage(format!("{}: {e}", file.display())))?;
                let s = io::read_design(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
                let (report, ok) = verification_report(&s, *mu);
                out.emit("report.txt", &report)?;
                if ok {
                    Ok(())
                } else {
                    Err(Failure::Check("verification failed".into()))
                }
            })();
            (config, r)
        }
        DesignCmd::Develop { v, bases } => {
            let config = json!({ "command": "design develop", "v": v, "bases": bases });
            let r = (|| {
                let blocks = bases
                    .iter()
                    .map(|b| parse_block(b))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = develop_cyclic(*v, &blocks).map_err(usage)?;
                emit_design(&s, out)
            })();
            (config, r)
        }
        DesignCmd::Delete { source, parts } => {
            let config = json!({ "command": "design delete", "source": source.describe(), "parts": parts });
            (config, delete(source, *parts, out))
        }
    }
}

fn parse_block(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| usage(format!("base block {text:?}: {e}"))))
        .collect()
}

/// Writes the design and its verification report; fails if it is not a
/// Steiner design.
fn emit_design(s: &IncidenceStructure, out: &mut Output) -> Result<(), Failure> {
    let (report, ok) = verification_report(s, None);
    out.emit("design.txt", &io::write_design(s))?;
    out.report("report.txt", &report)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

fn verification_report(s: &IncidenceStructure, mu: Option<usize>) -> (String, bool) {
    let mut r = String::new();
    let _ = writeln!(r, "points v = {}, blocks b = {}", s.v(), s.b());
    let Some(mu) = mu.or_else(|| s.uniform_block_size()) else {
        let _ = writeln!(r, "blocks have different sizes: not a Steiner design");
        return (r, false);
    };
    let (v, b) = (s.v(), s.b());
    let admissible = check_admissible(v, mu, 1);
    let _ = writeln!(
        r,
        "necessary conditions for S(2,{mu},{v}): (v-1)/(mu-1) = {}/{}, v(v-1)/(mu(mu-1)) = {}/{} -> {}",
        v.saturating_sub(1),
        mu.saturating_sub(1),
        v * v.saturating_sub(1),
        mu * mu.saturating_sub(1),
        if admissible { "integral" } else { "not integral" }
    );
    let ok = match verify_steiner(s, mu) {
        Ok(DesignParams { r: rep, b: expected_b, .. }) => {
            let _ = writeln!(r, "S(2,{mu},{v}): every pair covered once; r = {rep}, b = {expected_b}");
            expected_b == b
        }
        Err(e) => {
            let _ = writeln!(r, "not an S(2,{mu},{v}): {e}");
            false
        }
    };
    if ok {
        let _ = writeln!(r, "Tanner graph girth: {}", matrix_girth(&s.point_by_block(), 8));
    }
    (r, ok)
}

fn delete(source: &SourceArgs, count: usize, out: &mut Output) -> Result<(), Failure> {
    let Some(spec) = source.geometry_spec() else {
        return Err(usage("deletion needs a geometry with a spread: --pg or --ag"));
    };
    let g = spec.build().map_err(usage)?;
    let spread = match spec.kind {
        GeometryKind::Pg => {
            // smallest subgeometry dimension s >= 2 with (s + 1) | (m + 1), else lines
            let s = (2..spec.m).find(|s| (spec.m + 1) % (s + 1) == 0).unwrap_or(1);
            pg_spread(&g, s)
        }
        GeometryKind::Ag => ag_hyperplane_spread(&g),
        GeometryKind::Eg => return Err(usage("no spread is implemented for EG")),
    }
    .map_err(usage)?;
    let structure = g.labelled_structure();
    let deleted = delete_subdesigns(&structure, &spread, count).map_err(usage)?;
    let mu = structure.uniform_block_size().expect("lines have equal size");
    let params = verify_steiner(&structure, mu).map_err(usage)?;
    let record = DeletionRecord::from_spread(&structure, &spread, count, mu).map_err(usage)?;
    let h = deleted.point_by_block();
    let p = css_from_parity_check(&h, Orientation::PointByBlock).map_err(usage)?;
    let predicted = match expected_c(&params, Orientation::PointByBlock, Some(&record)) {
        Ok(c) => format!("{c:?}"),
        Err(e) => format!("none ({e})"),
    };
    let report = format!(
        "{spec} minus {count} of {} spread parts: n = {}, rank = {}, k = {}, c = {}, predicted c: {predicted}\n",
        spread.len(),
        p.n,
        p.rank_h,
        p.k,
        p.c
    );
    out.emit("design.txt", &io::write_design(&deleted))?;
    out.report("report.txt", &report)
}

/// The parity-check matrix of a loaded design and its parameters without
/// distance.
fn parity_check(l: &Loaded, o: Orientation) -> Result<(BitMatrix, EaqeccParams), Failure> {
    let h = o.matrix(&l.structure);
    let mut p = css_from_parity_check(&h, o).map_err(usage)?;
    p.geometry = l.geometry.as_ref().map(|g| g.spec());
    p.provenance = l.structure.provenance().to_string();
    Ok((h, p))
}

fn verdict(l: &Loaded, o: Orientation, h: &BitMatrix, seed: u64) -> Result<DistanceVerdict, Failure> {
    let budget = DistanceBudget {
        seed,
        ..DistanceBudget::default()
    };
    let r = match &l.geometry {
        Some(g) => distance_verdict(g, o, h, &budget),
        None => structure_distance_verdict(&l.structure, o, h, &budget),
    };
    r.map_err(|e| Failure::Check(format!("distance check failed: {e}")))
}

fn code(cmd: &CodeCmd, seed: u64, out: &mut Output) -> Outcome {
    let (name, args) = match cmd {
        CodeCmd::Params { code, .. } => ("code params", code),
        CodeCmd::Distance { code } => ("code distance", code),
        CodeCmd::ExportAlist { code } => ("code export-alist", code),
    };
    let mut config = json!({
        "command": name,
        "source": args.source.describe(),
        "type": args.orientation.to_string(),
    });
    if let CodeCmd::Params { no_distance, .. } = cmd {
        config["no_distance"] = json!(no_distance);
    }
    (config, code_inner(cmd, args, seed, out))
}

fn code_inner(cmd: &CodeCmd, args: &CodeArgs, seed: u64, out: &mut Output) -> Result<(), Failure> {
    let l = args.source.load()?;
    let o = args.orientation;
    let (h, mut p) = parity_check(&l, o)?;
    match cmd {
        CodeCmd::Params { no_distance, .. } => {
            if !no_distance {
                eprintln!("{}: distance search", l.id);
                p.distance = verdict(&l, o, &h, seed)?.result;
            }
            p = p.with_girth(&h, 8);
            out.emit("params.csv", &format!("{}\n{}\n", io::PARAMS_CSV_HEADER, io::params_csv_row(&p)))
        }
        CodeCmd::Distance { .. } => {
            let v = verdict(&l, o, &h, seed)?;
            p.distance = v.result.clone();
            out.emit("distance.txt", &distance_report(&l.id, &p, &v))
        }
        CodeCmd::ExportAlist { .. } => out.emit("code.alist", &io::write_alist(&h)),
    }
}

fn distance_report(id: &str, p: &EaqeccParams, v: &DistanceVerdict) -> String {
    let mut r = format!("{id} Type {}: {p}\ncertification: {}\n", p.orientation, v.certification);
    for s in &v.sources {
        let line = match s {
            DistanceSource::Enumeration => "exhaustive enumeration".to_string(),
            DistanceSource::SupportSearch { ruled_out_below, found } => match found {
                Some(w) => format!("support search: no codeword below weight {ruled_out_below}, found weight {w}"),
                None => format!("support search: no codeword below weight {ruled_out_below}"),
            },
            DistanceSource::Theorem(t) => format!("theorem: {}", t.statement),
            DistanceSource::Witness { kind, weight } => format!("witness: {kind:?} of weight {weight}"),
            DistanceSource::RandomSearch { found } => match found {
                Some(w) => format!("random search: found weight {w}"),
                None => "random search: nothing found".to_string(),
            },
        };
        let _ = writeln!(r, "  {line}");
    }
    if let Some(w) = &v.result.witness {
        let support: Vec<String> = w.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(r, "minimum-weight codeword support: {}", support.join(" "));
    }
    r
}

fn tables_cmd(args: &TablesArgs, seed: u64, out: &mut Output) -> Outcome {
    let config = json!({
        "command": "tables",
        "table": args.table,
        "no_distance": args.no_distance,
        "accept_errata": args.accept_errata,
    });
    let r = (|| {
        let ids: Vec<TableId> = if args.table.eq_ignore_ascii_case("all") {
            TableId::ALL.to_vec()
        } else {
            vec![args.table.parse().map_err(usage)?]
        };
        let opts = ReproduceOptions {
            distance: (!args.no_distance).then(|| DistanceBudget {
                seed,
                ..DistanceBudget::default()
            }),
            ..ReproduceOptions::default()
        };
        let mut csv = format!("{}\n", TableReport::CSV_HEADER);
        let mut summary = String::new();
        let (mut mismatches, mut errata) = (0, 0);
        for id in ids {
            eprintln!("Table {id}: {}", id.title());
            let report = tables::reproduce(id, &opts);
            csv.push_str(&report.csv_rows());
            let _ = writeln!(
                summary,
                "Table {id}: {} rows, {} ok, {} theorem-only, {} erratum, {} mismatch",
                report.rows.len(),
                report.count(RowStatus::Match),
                report.count(RowStatus::TheoremOnly),
                report.count(RowStatus::Erratum),
                report.count(RowStatus::Mismatch)
            );
            for row in report.rows.iter().filter(|r| matches!(r.status, RowStatus::Erratum | RowStatus::Mismatch)) {
                let _ = writeln!(
                    summary,
                    "  {} {}: printed {}, computed {}; {}",
                    row.status,
                    row.label,
                    row.expected,
                    row.computed,
                    row.notes.join("; ")
                );
            }
            mismatches += report.count(RowStatus::Mismatch);
            errata += report.count(RowStatus::Erratum);
        }
        out.emit("tables.csv", &csv)?;
        out.report("summary.txt", &summary)?;
        if mismatches > 0 {
            Err(Failure::Check(format!("{mismatches} row(s) differ from the printed tables")))
        } else if errata > 0 && !args.accept_errata {
            Err(Failure::Check(format!(
                "{errata} row(s) reproduce only up to known misprints (pass --accept-errata to allow)"
            )))
        } else {
            Ok(())
        }
    })();
    (config, r)
}

fn sim(args: &SimArgs, seed: u64, out: &mut Output) -> Outcome {
    // a small default code keeps `sim --fm ...` usable without a design
    let mut source = args.source.clone();
    let mut orientation = args.orientation;
    if source.is_empty() {
        source.pg = Some(vec![3, 2]);
        orientation = orientation.or(Some(Orientation::PointByBlock));
    }
    let orientation = orientation.unwrap_or(Orientation::PointByBlock);
    let mut config = SimConfig::new(args.f_m.clone(), args.trials, seed);
    config.reading = args.channel;
    config.max_iter = args.max_iter;
    config.prior_override = args.prior;
    if args.exact_recovery {
        config.criterion = SuccessCriterion::ExactRecovery;
    }
    let snapshot = json!({
        "command": "sim",
        "source": source.describe(),
        "type": orientation.to_string(),
        "f_m": args.f_m,
        "trials": args.trials,
        "channel": args.channel.to_string(),
        "max_iter": args.max_iter,
        "prior": args.prior,
        "exact_recovery": args.exact_recovery,
    });
    let r = (|| {
        let l = source.load()?;
        let (h, p) = parity_check(&l, orientation)?;
        let code_id = format!("{}-type-{}-[[{},{},?;{}]]", l.id, orientation, p.n, p.k, p.c);
        let code = SimCode::new(h);
        eprintln!("{code_id}: {} trials per point", args.trials);
        let records = estimate_bler_with(&code, &config, |rec| {
            eprintln!(
                "  f_m = {}: {} errors, BLER {:.3e} [{:.3e}, {:.3e}] in {:.1?}",
                rec.f_m, rec.block_errors, rec.bler, rec.ci_low, rec.ci_high, rec.wall_time
            );
        })
        .map_err(usage)?;
        out.emit("bler.csv", &io::bler_csv(&code_id, &config, &records))
    })();
    (snapshot, r)
}
