//! Output plumbing shared by the subcommands.
//!
//! Every invocation produces exactly one document, rendered either as one
//! pretty-printed JSON object or as CSV with a header row. Both renderings
//! carry the same values; field orders and row orders are fixed, so output
//! is byte-deterministic for a fixed invocation.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use qpath_core::qalg::QPoly;
use serde::Serialize;

/// Wire format selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}: expected \"json\" or \"csv\"")),
        }
    }
}

/// A document that can render itself as CSV rows; JSON comes from `Serialize`.
pub trait Document: Serialize {
    fn csv(&self) -> CsvTable;
}

/// Header plus data rows, each cell already a string.
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_field(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Quotes a field when it contains a separator, quote, space, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ' ', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Ascending decimal coefficient strings; the zero polynomial renders as
/// `["0"]` so a polynomial cell is never empty.
pub fn poly_strings(p: &QPoly) -> Vec<String> {
    if p.is_zero() {
        vec!["0".to_string()]
    } else {
        p.coeffs().iter().map(|c| c.to_string()).collect()
    }
}

/// Renders the document and writes it to stdout or the requested file.
pub fn emit(doc: &impl Document, format: Format, output: Option<&Path>) -> Result<(), String> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc)
                .map_err(|e| format!("serializing output: {e}"))?;
            s.push('\n');
            s
        }
        Format::Csv => doc.csv().render(),
    };
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("writing stdout: {e}")),
    }
}
