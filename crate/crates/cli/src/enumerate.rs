//! The `enumerate` subcommand: the weighted diagrams of one half-length,
//! listed explicitly or counted.

use std::path::Path;
use std::process::ExitCode;

use clap::Args;
use qpath_core::pathcount::{diagram_count, diagrams, gen_dyck_paths, PossibilityPolicy, Width};
use serde::Serialize;

use crate::output::{emit, CsvTable, Document, Format};

/// Listing cap: beyond this many diagrams only `--count` is served. The
/// count itself stays cheap because it multiplies possibility counts
/// without visiting diagrams.
const DIAGRAM_LIST_CAP: u64 = 10_000;

#[derive(Args)]
pub struct EnumerateArgs {
    /// Half-length of the paths (the number of up steps).
    #[arg(long)]
    n: u32,
    /// Coefficient family: tangent or secant.
    #[arg(long, default_value = "tangent")]
    family: PossibilityPolicy,
    /// Height bound: a nonnegative integer or "inf".
    #[arg(long, default_value = "inf")]
    width: Width,
    /// Report only the number of diagrams.
    #[arg(long)]
    count: bool,
}

#[derive(Serialize)]
struct DiagramRow {
    /// Step string, e.g. "UUDD".
    path: String,
    /// Chosen column under each step.
    columns: Vec<u32>,
    /// The diagram contributes q^weight.
    weight: u64,
}

#[derive(Serialize)]
struct EnumerateDoc {
    family: String,
    n: u32,
    width: String,
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagrams: Option<Vec<DiagramRow>>,
}

impl Document for EnumerateDoc {
    fn csv(&self) -> CsvTable {
        match &self.diagrams {
            None => CsvTable {
                header: vec!["family", "n", "width", "count"],
                rows: vec![vec![
                    self.family.clone(),
                    self.n.to_string(),
                    self.width.clone(),
                    self.count.clone(),
                ]],
            },
            Some(rows) => CsvTable {
                header: vec!["path", "columns", "weight"],
                rows: rows
                    .iter()
                    .map(|d| {
                        let cols: Vec<String> =
                            d.columns.iter().map(|c| c.to_string()).collect();
                        vec![d.path.clone(), cols.join(" "), d.weight.to_string()]
                    })
                    .collect(),
            },
        }
    }
}

pub fn run(
    args: &EnumerateArgs,
    format: Format,
    output: Option<&Path>,
) -> Result<ExitCode, String> {
    let paths = gen_dyck_paths(args.n, args.width).map_err(|e| e.to_string())?;
    let total: u64 = paths.iter().map(|p| diagram_count(p, args.family)).sum();

    let listing = if args.count {
        None
    } else {
        if total > DIAGRAM_LIST_CAP {
            return Err(format!(
                "{total} diagrams exceed the listing cap {DIAGRAM_LIST_CAP}; rerun with --count"
            ));
        }
        let mut rows = Vec::with_capacity(total as usize);
        for path in &paths {
            for d in diagrams(path, args.family) {
                rows.push(DiagramRow {
                    weight: d.weight_exponent(),
                    path: d.steps,
                    columns: d.columns,
                });
            }
        }
        Some(rows)
    };

    let doc = EnumerateDoc {
        family: args.family.to_string(),
        n: args.n,
        width: args.width.to_string(),
        count: total.to_string(),
        diagrams: listing,
    };
    emit(&doc, format, output)?;
    Ok(ExitCode::SUCCESS)
}
