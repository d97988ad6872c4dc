//! Command-line front end and HTTP service for the rating engine.

pub mod render;
pub mod server;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tropical_ahp::document::{
    rate_document, solve_document, weights_document, DocOptions, ErrorBody, ErrorKind,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "tropahp", version, about = "Rate alternatives from pairwise comparisons in max-times algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate the alternatives of a problem document
    Rate(ProblemArgs),
    /// Compute the criteria weights only
    Weights(ProblemArgs),
    /// Minimize x⁻Ax for a single square matrix
    Solve(SolveArgs),
    /// Run the HTTP service
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    /// Relative tolerance for scalar equality
    #[arg(long, value_name = "X")]
    pub rel_eq: Option<f64>,
    /// Relative tolerance for ranking ties
    #[arg(long, value_name = "X")]
    pub tie_rel: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Problem document, or `-` for stdin
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[command(flatten)]
    pub tol: Tolerances,
    /// least, most, or index:<k> (one-based generator column)
    #[arg(long, value_name = "POLICY")]
    pub weight_policy: Option<String>,
    /// Upper bound on row selections enumerated for the least differentiating vectors
    #[arg(long, value_name = "N")]
    pub enum_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Matrix document, or `-` for stdin
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    /// Allowed cross-origin request origin; repeatable. Any origin when omitted.
    #[arg(long = "allow-origin", value_name = "ORIGIN")]
    pub allow_origins: Vec<String>,
}

impl ProblemArgs {
    fn overrides(&self) -> DocOptions {
        DocOptions {
            rel_eq: self.tol.rel_eq,
            tie_rel: self.tol.tie_rel,
            weight_policy: self.weight_policy.clone(),
            enum_cap: self.enum_cap,
        }
    }
}

fn read_input(path: &PathBuf) -> std::io::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path)
    }
}

fn exit_code(e: &ErrorBody) -> i32 {
    match e.kind {
        ErrorKind::Validation => EXIT_VALIDATION,
        ErrorKind::Solver => EXIT_SOLVER,
    }
}

fn emit<T: Serialize>(
    result: Result<T, ErrorBody>,
    format: Format,
    table: impl FnOnce(&T) -> String,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match result {
        Ok(doc) => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n",
                Format::Table => table(&doc),
            };
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            match format {
                Format::Json => {
                    let _ = writeln!(err, "{}", serde_json::to_string_pretty(&e).expect("errors serialize"));
                }
                Format::Table => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            exit_code(&e)
        }
    }
}

fn load(path: &PathBuf, err: &mut dyn Write) -> Option<Vec<u8>> {
    match read_input(path) {
        Ok(b) => Some(b),
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            None
        }
    }
}

/// Parses `args` (program name first) and executes the command, returning
/// the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            }
        }
    };

    match cli.command {
        Command::Rate(a) => {
            let Some(input) = load(&a.file, err) else {
                return EXIT_VALIDATION;
            };
            emit(rate_document(&input, &a.overrides()), a.format, render::result_table, out, err)
        }
        Command::Weights(a) => {
            let Some(input) = load(&a.file, err) else {
                return EXIT_VALIDATION;
            };
            emit(weights_document(&input, &a.overrides()), a.format, render::weights_table, out, err)
        }
        Command::Solve(a) => {
            let Some(input) = load(&a.file, err) else {
                return EXIT_VALIDATION;
            };
            let overrides = DocOptions {
                rel_eq: a.tol.rel_eq,
                tie_rel: a.tol.tie_rel,
                ..Default::default()
            };
            emit(solve_document(&input, &overrides), a.format, render::solve_table, out, err)
        }
        Command::Serve(a) => {
            let addr = SocketAddr::new(a.bind, a.port);
            let config = server::ServerConfig {
                allow_origins: a.allow_origins,
            };
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot start runtime: {e}");
                    return EXIT_SOLVER;
                }
            };
            match runtime.block_on(server::serve(addr, config)) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot serve on {addr}: {e}");
                    EXIT_VALIDATION
                }
            }
        }
    }
}
