//! The `verify` subcommand: runs the floating-point verification suites and
//! reports every identity check, exiting 2 if any suite fails.

use std::path::Path;
use std::process::ExitCode;

use clap::Args;
use qpath_core::qhyper::suites::{run_suite, GridSpec, Suite, SuiteConfig, SuiteError, SuiteReport};
use serde::Serialize;

use crate::output::{emit, CsvTable, Document, Format};

#[derive(Args)]
pub struct VerifyArgs {
    /// Suite to run (repeatable): theorems, corollaries, lemma5, heine, w1,
    /// or all.
    #[arg(long = "suite", value_name = "SUITE", default_value = "all")]
    suites: Vec<String>,
    /// Tolerance override for every selected suite (default: per suite).
    #[arg(long)]
    tol: Option<f64>,
    /// Grid override for the grid-driven suites, as t=LO..HI:STEPS,q=LO..HI:STEPS.
    #[arg(long)]
    grid: Option<GridSpec>,
    /// Seed for the sampled suites.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct VerifyDoc {
    pass: bool,
    suites: Vec<SuiteReport>,
}

impl Document for VerifyDoc {
    fn csv(&self) -> CsvTable {
        let header = vec![
            "suite",
            "identity",
            "evaluated_points",
            "skipped_points",
            "max_abs_err",
            "tol",
            "pass",
        ];
        let mut rows = Vec::new();
        for suite in &self.suites {
            for r in &suite.reports {
                rows.push(vec![
                    suite.name.clone(),
                    r.name.clone(),
                    suite.evaluated_points.to_string(),
                    suite.skipped_points.to_string(),
                    format!("{:e}", r.max_abs_err),
                    format!("{:e}", r.tol),
                    r.pass.to_string(),
                ]);
            }
        }
        CsvTable { header, rows }
    }
}

/// Expands the suite selection, keeping first-mention order without
/// duplicates.
fn selected_suites(names: &[String]) -> Result<Vec<Suite>, String> {
    let mut out: Vec<Suite> = Vec::new();
    for name in names {
        if name == "all" {
            for s in Suite::ALL {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            continue;
        }
        let suite: Suite = name.parse()?;
        if !out.contains(&suite) {
            out.push(suite);
        }
    }
    Ok(out)
}

/// Term budget override from the environment; unset means the default.
fn max_terms_from_env(default: usize) -> Result<usize, String> {
    match std::env::var("QPATH_MAX_TERMS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(m) if m >= 1 => Ok(m),
            _ => Err(format!(
                "QPATH_MAX_TERMS={raw:?} is not a positive integer"
            )),
        },
        Err(std::env::VarError::NotPresent) => Ok(default),
        Err(e) => Err(format!("reading QPATH_MAX_TERMS: {e}")),
    }
}

pub fn run(args: &VerifyArgs, format: Format, output: Option<&Path>) -> Result<ExitCode, String> {
    if let Some(tol) = args.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(format!("tolerance must be a positive number, got {tol}"));
        }
    }
    let suites = selected_suites(&args.suites)?;
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig {
        tol: args.tol,
        max_terms: max_terms_from_env(defaults.max_terms)?,
        seed: args.seed.unwrap_or(defaults.seed),
        grid: args.grid,
    };

    let mut reports = Vec::with_capacity(suites.len());
    for suite in suites {
        let report = run_suite(suite, &cfg).map_err(|e| match e {
            SuiteError::EmptyGrid => format!(
                "suite {}: {e}; the real-root guard requires (1 - q)^2 > 4 t^2",
                suite.name()
            ),
            other => format!("suite {}: {other}", suite.name()),
        })?;
        reports.push(report);
    }

    let pass = reports.iter().all(|r| r.pass);
    let doc = VerifyDoc {
        pass,
        suites: reports,
    };
    emit(&doc, format, output)?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
