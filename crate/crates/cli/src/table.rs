//! The `table` subcommand: coefficient polynomials for every half-length up
//! to a bound, by one route or by all routes with an agreement column.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::Args;
use qpath_core::closedform::{euler_poly, Method};
use qpath_core::contfrac::cf_series;
use qpath_core::pathcount::{dp_series, PossibilityPolicy, Width};
use qpath_core::qalg::QPoly;
use serde::Serialize;

use crate::output::{emit, poly_strings, CsvTable, Document, Format};
use crate::MethodChoice;

#[derive(Args)]
pub struct TableArgs {
    /// Coefficient family: tangent or secant.
    #[arg(long)]
    family: PossibilityPolicy,
    /// Largest half-length to tabulate.
    #[arg(long)]
    max_n: u32,
    /// Height bound: a nonnegative integer or "inf".
    #[arg(long, default_value = "inf")]
    width: Width,
    /// Route: closed, dp, cf, or all methods valid at the width.
    #[arg(long, default_value = "all")]
    method: MethodChoice,
}

#[derive(Serialize)]
struct TableRow {
    n: u32,
    poly: Vec<String>,
    value_at_one: String,
    /// Present with method "all": whether every route gave this polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    /// Present only on disagreement: each route's polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    by_method: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Serialize)]
struct TableDoc {
    family: String,
    width: String,
    method: String,
    rows: Vec<TableRow>,
}

impl Document for TableDoc {
    fn csv(&self) -> CsvTable {
        let with_agree = self.rows.first().is_some_and(|r| r.agree.is_some());
        let mut header = vec!["n", "poly", "value_at_one"];
        if with_agree {
            header.push("agree");
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.n.to_string(),
                    r.poly.join(" "),
                    r.value_at_one.clone(),
                ];
                if let Some(agree) = r.agree {
                    row.push(agree.to_string());
                }
                row
            })
            .collect();
        CsvTable { header, rows }
    }
}

/// All coefficient polynomials for `n <= max_n` along one route.
pub fn polys_to(
    method: Method,
    family: PossibilityPolicy,
    width: Width,
    max_n: u32,
) -> Result<Vec<QPoly>, String> {
    match method {
        Method::Closed => (0..=max_n)
            .map(|n| euler_poly(n, family))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string()),
        Method::Dp => Ok(dp_series(max_n as usize, width, family).coeffs().to_vec()),
        Method::Cf => Ok(cf_series(width, family, max_n as usize).coeffs().to_vec()),
    }
}

/// Builds one row, comparing the routes when there are several.
pub fn build_row(n: u32, columns: &[(Method, Vec<QPoly>)], tagged: bool) -> (TableRowParts, bool) {
    let poly = &columns[0].1[n as usize];
    let agree = columns.iter().all(|(_, polys)| &polys[n as usize] == poly);
    let by_method = (!agree).then(|| {
        columns
            .iter()
            .map(|(m, polys)| (m.to_string(), poly_strings(&polys[n as usize])))
            .collect()
    });
    (
        TableRowParts {
            poly: poly_strings(poly),
            value_at_one: poly.eval_at_one().to_string(),
            agree: tagged.then_some(agree),
            by_method,
        },
        agree,
    )
}

/// Shared row content between `table` and `coeff`.
pub struct TableRowParts {
    pub poly: Vec<String>,
    pub value_at_one: String,
    pub agree: Option<bool>,
    pub by_method: Option<BTreeMap<String, Vec<String>>>,
}

pub fn run(args: &TableArgs, format: Format, output: Option<&Path>) -> Result<ExitCode, String> {
    let methods = args.method.resolve(args.width)?;
    let columns: Vec<(Method, Vec<QPoly>)> = methods
        .into_iter()
        .map(|m| Ok((m, polys_to(m, args.family, args.width, args.max_n)?)))
        .collect::<Result<_, String>>()?;

    let tagged = args.method == MethodChoice::All;
    let mut rows = Vec::with_capacity(args.max_n as usize + 1);
    let mut all_agree = true;
    for n in 0..=args.max_n {
        let (parts, agree) = build_row(n, &columns, tagged);
        all_agree &= agree;
        rows.push(TableRow {
            n,
            poly: parts.poly,
            value_at_one: parts.value_at_one,
            agree: parts.agree,
            by_method: parts.by_method,
        });
    }

    let doc = TableDoc {
        family: args.family.to_string(),
        width: args.width.to_string(),
        method: args.method.to_string(),
        rows,
    };
    emit(&doc, format, output)?;
    Ok(if all_agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
