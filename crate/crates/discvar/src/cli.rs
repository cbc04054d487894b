//! The `discvar` command line.
//!
//! ```text
//! discvar solve <file> [--format text|json] [--components winf,wf,wc,wsing]
//!                      [--wsd-file <file>] [--oracle-primes p1,p2] [--seed n]
//! ```
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 computation error,
//! 3 oracle check failure. Diagnostics go to stderr; the report to stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use discvar_core::fp_oracle::is_prime;
use discvar_core::{DiscriminantVarietyResult, ParametricSystem, Pipeline};

use crate::oracle::{run_oracle, OracleReport};
use crate::parse::{parse_parameter_file, parse_system_file};
use crate::report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "discvar", version, about = "Minimal discriminant varieties of parametric polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the discriminant variety of a system file.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComponentArg {
    Winf,
    Wf,
    Wc,
    Wsing,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// System description file.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Components to compute (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    components: Option<Vec<ComponentArg>>,
    /// Parameter-only generators of W_sd, one per line.
    #[arg(long)]
    wsd_file: Option<PathBuf>,
    /// Run the finite-field checks at these primes.
    #[arg(long, value_delimiter = ',', value_parser = parse_prime)]
    oracle_primes: Option<Vec<u64>>,
    /// Seed for the sampled oracle check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let n: u64 = s.trim().parse().map_err(|_| format!("`{s}` is not a positive integer"))?;
    if is_prime(n) {
        Ok(n)
    } else {
        Err(format!("{n} is not prime"))
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

/// Runs the command line. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_PARSE
                }
            };
        }
    };
    let Command::Solve(args) = cli.command;
    match solve(&args, stderr) {
        Ok((report, code)) => {
            let _ = stdout.write_all(report.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn pipeline_for(args: &SolveArgs, sys: &ParametricSystem) -> Result<Pipeline, Failure> {
    let mut pipeline = Pipeline::default();
    if let Some(list) = &args.components {
        pipeline.w_infinity = list.contains(&ComponentArg::Winf);
        pipeline.w_f = list.contains(&ComponentArg::Wf);
        pipeline.w_c = list.contains(&ComponentArg::Wc);
        pipeline.w_sing = list.contains(&ComponentArg::Wsing);
    }
    if let Some(path) = &args.wsd_file {
        let text = read(path)?;
        let gens = parse_parameter_file(sys.ring(), &text)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)))?;
        pipeline.w_sd = Some(gens);
    }
    Ok(pipeline)
}

fn solve(args: &SolveArgs, stderr: &mut dyn Write) -> Result<(String, i32), Failure> {
    let text = read(&args.file)?;
    let sys = parse_system_file(&text).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("{}:{}:{}: {}", args.file.display(), e.line, e.column, e.message),
        )
    })?;
    let pipeline = pipeline_for(args, &sys)?;
    let result: DiscriminantVarietyResult = pipeline
        .run(&sys)
        .map_err(|e| Failure::new(EXIT_COMPUTE, format!("computation failed: {e}")))?;
    for w in &result.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }

    let oracle: Option<OracleReport> = match &args.oracle_primes {
        Some(primes) => Some(
            run_oracle(&sys, &result, primes, args.seed)
                .map_err(|e| Failure::new(EXIT_COMPUTE, format!("oracle could not run: {e}")))?,
        ),
        None => None,
    };
    let mut code = EXIT_OK;
    if let Some(o) = &oracle {
        for c in o.checks.iter().filter(|c| c.outcome.is_failure()) {
            let _ = writeln!(stderr, "error: oracle check {}: {}", c.name, c.outcome.describe());
            code = EXIT_ORACLE;
        }
    }
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    Ok((Report::new(&result, oracle.as_ref()).render(format), code))
}
