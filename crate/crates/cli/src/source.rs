use std::path::PathBuf;

use clap::Args;
use eaqldpc::designs::{build_sts, IncidenceStructure};
use eaqldpc::geometry::{GeometryDesign, GeometryKind, GeometrySpec};

use crate::{usage, Failure};

/// Where a design comes from. At most one may be given.
#[derive(Args, Debug, Clone, Default)]
#[group(multiple = false)]
pub struct SourceArgs {
    /// Points and lines of PG(m, q).
    #[arg(long, num_args = 2, value_names = ["M", "Q"])]
    pub pg: Option<Vec<u32>>,
    /// Points and lines of AG(m, q).
    #[arg(long, num_args = 2, value_names = ["M", "Q"])]
    pub ag: Option<Vec<u32>>,
    /// AG(m, q) without the origin and the lines through it.
    #[arg(long, num_args = 2, value_names = ["M", "Q"])]
    pub eg: Option<Vec<u32>>,
    /// Steiner triple system on v points.
    #[arg(long, value_name = "V")]
    pub sts: Option<usize>,
    /// Design file.
    #[arg(long, value_name = "FILE")]
    pub design: Option<PathBuf>,
}

pub struct Loaded {
    pub structure: IncidenceStructure,
    pub geometry: Option<GeometryDesign>,
    /// Short human-readable name, e.g. `PG(3,2)` or `STS(9)`.
    pub id: String,
}

impl SourceArgs {
    pub fn is_empty(&self) -> bool {
        self.pg.is_none()
            && self.ag.is_none()
            && self.eg.is_none()
            && self.sts.is_none()
            && self.design.is_none()
    }

    pub fn geometry_spec(&self) -> Option<GeometrySpec> {
        let pick = |kind, v: &Option<Vec<u32>>| v.as_ref().map(|mq| GeometrySpec::new(kind, mq[0], mq[1]));
        pick(GeometryKind::Pg, &self.pg)
            .or_else(|| pick(GeometryKind::Ag, &self.ag))
            .or_else(|| pick(GeometryKind::Eg, &self.eg))
    }

    /// Describes the source for the run manifest.
    pub fn describe(&self) -> serde_json::Value {
        if let Some(spec) = self.geometry_spec() {
            serde_json::json!({ "geometry": spec.to_string() })
        } else if let Some(v) = self.sts {
            serde_json::json!({ "sts": v })
        } else if let Some(p) = &self.design {
            serde_json::json!({ "design_file": p.display().to_string() })
        } else {
            serde_json::Value::Null
        }
    }

    pub fn load(&self) -> Result<Loaded, Failure> {
        if let Some(spec) = self.geometry_spec() {
            let g = spec.build().map_err(usage)?;
            return Ok(Loaded {
                structure: g.labelled_structure(),
                id: spec.to_string(),
                geometry: Some(g),
            });
        }
        if let Some(v) = self.sts {
            return Ok(Loaded {
                structure: build_sts(v).map_err(usage)?,
                geometry: None,
                id: format!("STS({v})"),
            });
        }
        if let Some(path) = &self.design {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let structure = eaqldpc::io::read_design(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            return Ok(Loaded {
                structure,
                geometry: None,
                id: path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "design".into()),
            });
        }
        Err(usage("give a design: --pg, --ag, --eg, --sts or --design"))
    }
}
