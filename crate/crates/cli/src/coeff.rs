//! The `coeff` subcommand: one coefficient polynomial at a chosen
//! half-length and width, with the same route selection as `table`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::Args;
use qpath_core::pathcount::{PossibilityPolicy, Width};
use serde::Serialize;

use crate::output::{emit, CsvTable, Document, Format};
use crate::table::{build_row, polys_to};
use crate::MethodChoice;

#[derive(Args)]
pub struct CoeffArgs {
    /// Half-length of the paths (the coefficient index).
    #[arg(long)]
    n: u32,
    /// Coefficient family: tangent or secant.
    #[arg(long, default_value = "tangent")]
    family: PossibilityPolicy,
    /// Height bound: a nonnegative integer or "inf".
    #[arg(long, default_value = "inf")]
    width: Width,
    /// Route: closed, dp, cf, or all methods valid at the width.
    #[arg(long, default_value = "all")]
    method: MethodChoice,
}

#[derive(Serialize)]
struct CoeffDoc {
    family: String,
    n: u32,
    width: String,
    method: String,
    poly: Vec<String>,
    value_at_one: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    by_method: Option<BTreeMap<String, Vec<String>>>,
}

impl Document for CoeffDoc {
    fn csv(&self) -> CsvTable {
        let mut header = vec!["family", "n", "width", "method", "poly", "value_at_one"];
        let mut row = vec![
            self.family.clone(),
            self.n.to_string(),
            self.width.clone(),
            self.method.clone(),
            self.poly.join(" "),
            self.value_at_one.clone(),
        ];
        if let Some(agree) = self.agree {
            header.push("agree");
            row.push(agree.to_string());
        }
        CsvTable {
            header,
            rows: vec![row],
        }
    }
}

pub fn run(args: &CoeffArgs, format: Format, output: Option<&Path>) -> Result<ExitCode, String> {
    let methods = args.method.resolve(args.width)?;
    let columns = methods
        .into_iter()
        .map(|m| Ok((m, polys_to(m, args.family, args.width, args.n)?)))
        .collect::<Result<Vec<_>, String>>()?;

    let (parts, agree) = build_row(args.n, &columns, args.method == MethodChoice::All);
    let doc = CoeffDoc {
        family: args.family.to_string(),
        n: args.n,
        width: args.width.to_string(),
        method: args.method.to_string(),
        poly: parts.poly,
        value_at_one: parts.value_at_one,
        agree: parts.agree,
        by_method: parts.by_method,
    };
    emit(&doc, format, output)?;
    Ok(if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
