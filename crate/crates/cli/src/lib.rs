//! The `latmat` command-line tool.
//!
//! [`run`] executes one parsed command and returns its report and exit code
//! instead of printing, so the whole tool can be driven from tests.

mod commands;
mod examples;
pub mod input;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latmat_core::Error;

pub use examples::{example_formula, ExampleFormula};
pub use verify::{run_campaign, Mutation, TrialOutcome};

#[derive(Debug, Parser)]
#[command(
    name = "latmat",
    version,
    about = "Exact meet and join matrices on finite lattices"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a meet or join matrix, optionally with its factors.
    Build(BuildArgs),
    /// Determinant by a closed form.
    Det(MatrixArgs),
    /// Inverse by a closed form.
    Inv(MatrixArgs),
    /// Randomized campaign checking every closed form against the oracle.
    Verify(VerifyArgs),
    /// Reproduce one of the eight MIN/MAX chain examples.
    Example(ExampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Join,
    Meet,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    #[arg(long, value_enum, default_value = "join")]
    pub kind: KindArg,
    /// Closed form to use; `auto` picks the cheapest one whose hypothesis holds.
    #[arg(long, default_value = "auto")]
    pub method: String,
    /// Poset file with `elem <id>` and `rel <a> <b>` lines.
    #[arg(long, value_name = "FILE")]
    pub poset: Option<PathBuf>,
    /// Integer chain; also the default set.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub chain: Option<String>,
    /// Positive integers under divisibility, hosted in the divisors of their
    /// lcm; also the default set.
    #[arg(long, value_name = "a,b,c")]
    pub divisors: Option<String>,
    /// Row set X.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub set: Option<String>,
    /// Column set Y; defaults to X.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub set_y: Option<String>,
    /// Basis D for the Cauchy-Binet forms; must hold every x_i ∨ y_j.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub basis: Option<String>,
    /// `identity`, `constant:<r>`, `linear:t=<r>`, or a file of
    /// `<element> <rational>` lines.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Shorthand for `--f linear:t=<r>`.
    #[arg(long, value_name = "t=<r>", allow_hyphen_values = true)]
    pub f_linear: Option<String>,
    /// Shorthand for `--f linear:t=<r>` when no function is given.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Also compute by exact elimination and compare.
    #[arg(long)]
    pub check: bool,
    /// Largest Cauchy-Binet enumeration allowed without --force.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub matrix: MatrixArgs,
    /// Also print the incidence, Ψ and diagonal factors.
    #[arg(long)]
    pub factors: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    /// Deliberately break one formula to confirm the campaign notices.
    #[arg(long, value_enum, hide = true)]
    pub inject: Option<Mutation>,
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    /// Example number, 1 to 8.
    pub id: u8,
    /// Strictly increasing integers.
    #[arg(long, value_name = "a,b,c", allow_hyphen_values = true)]
    pub chain: Option<String>,
    /// First element of a consecutive chain (with --n).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<i64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
    /// The closed form and the oracle differ; the report is already written.
    Disagree,
    /// Some verification trials failed; the report is already written.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) | CliError::Failed(m) => f.write_str(m),
            CliError::Disagree => f.write_str("closed form and oracle disagree"),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_CAP: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::SingularMatrix | Error::ZeroPsi(_)) => EXIT_SINGULAR,
            CliError::Core(
                Error::Hypothesis(_) | Error::Semimultiplicativity(..) | Error::ZeroValue(_),
            ) => EXIT_HYPOTHESIS,
            CliError::Core(Error::CombinatorialBlowup { .. }) => EXIT_CAP,
            _ => EXIT_INPUT,
        }
    }
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(config: &RunConfig) -> Outcome {
    let mut out = String::new();
    let result = match &config.command {
        Command::Build(args) => commands::build(args, &mut out),
        Command::Det(args) => commands::det(args, &mut out),
        Command::Inv(args) => commands::inv(args, &mut out),
        Command::Verify(args) => verify::cmd_verify(args, &mut out),
        Command::Example(args) => examples::cmd_example(args, &mut out),
    };
    match result {
        Ok(()) => Outcome {
            stdout: out,
            stderr: String::new(),
            code: EXIT_OK,
        },
        Err(e) => Outcome {
            stdout: out,
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// Parses `args` (program name first) and runs the command. Usage errors exit
/// with code 1; `--help` and `--version` exit with 0.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            }
        }
    }
}
