//! Batch front-end for the q-counted path diagram engine: coefficient
//! tables, single coefficients, diagram listings, and the floating-point
//! verification suites, with JSON or CSV output.
//!
//! Exit codes: 0 on success, 1 on usage or environment errors, 2 when a
//! mathematical comparison disagrees or a verification suite fails. The
//! split lets automation distinguish a broken invocation from a broken
//! claim.

mod coeff;
mod enumerate;
mod output;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpath_core::closedform::Method;
use qpath_core::pathcount::Width;

use output::Format;

#[derive(Parser)]
#[command(
    name = "qpath",
    version,
    about = "Tables, coefficients, diagram listings, and numeric checks \
             for height-restricted q-counted Dyck path diagrams"
)]
struct Cli {
    /// Output format: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Write the document to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate coefficient polynomials for half-lengths 0..=max-n.
    Table(table::TableArgs),
    /// One coefficient polynomial at a given half-length and width.
    Coeff(coeff::CoeffArgs),
    /// List or count the weighted diagrams of a given half-length.
    Enumerate(enumerate::EnumerateArgs),
    /// Run the floating-point verification suites.
    Verify(verify::VerifyArgs),
}

/// Computation route selector: a single method or every method valid at the
/// requested width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MethodChoice {
    One(Method),
    All,
}

impl MethodChoice {
    /// The methods to run. Closed forms exist only without a height bound,
    /// so `all` at finite width means the two bounded routes.
    fn resolve(self, width: Width) -> Result<Vec<Method>, String> {
        match (self, width) {
            (MethodChoice::One(Method::Closed), Width::Bounded(_)) => {
                Err("method \"closed\" applies only to --width inf".to_string())
            }
            (MethodChoice::One(m), _) => Ok(vec![m]),
            (MethodChoice::All, Width::Unbounded) => {
                Ok(vec![Method::Closed, Method::Dp, Method::Cf])
            }
            (MethodChoice::All, Width::Bounded(_)) => Ok(vec![Method::Dp, Method::Cf]),
        }
    }
}

impl std::fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodChoice::One(m) => write!(f, "{m}"),
            MethodChoice::All => write!(f, "all"),
        }
    }
}

impl std::str::FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(MethodChoice::All);
        }
        s.parse::<Method>().map(MethodChoice::One)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests print to stdout and succeed; real
            // parse errors go to stderr with the usage exit code.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let output = cli.output.as_deref();
    let run = match &cli.command {
        Command::Table(args) => table::run(args, format, output),
        Command::Coeff(args) => coeff::run(args, format, output),
        Command::Enumerate(args) => enumerate::run(args, format, output),
        Command::Verify(args) => verify::run(args, format, output),
    };
    match run {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
