mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{GlobalArgs, RunConfig};

/// Small solutions of relative Thue equations over imaginary quadratic fields.
#[derive(Parser, Debug)]
#[command(name = "relthue", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the equations in a JSON spec file.
    Solve {
        /// One spec, an array of specs, or one spec per line.
        spec: PathBuf,
    },
    /// Solve X0^4 - m*Y0^4 = unit for one m or for every m up to a limit.
    Binomial(BinomialArgs),
    /// Check and solve sextic field records.
    Sextic {
        /// Record file; the shipped table when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Only check the listed tuples.
        #[arg(long = "verify-only")]
        verify_only: bool,
    },
    /// Consistency checks over the shipped tables.
    VerifyFixtures {
        /// Restrict checks, e.g. `d=163`, `m=5` or `dk=-10816`; repeatable.
        #[arg(long)]
        filter: Vec<String>,
        /// Replace the shipped binomial table.
        #[arg(long = "binomial-table")]
        binomial_table: Option<PathBuf>,
        /// Replace the shipped sextic table.
        #[arg(long = "sextic-table")]
        sextic_table: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct BinomialArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long, conflicts_with = "m_max", required_unless_present = "m_max")]
    pub m: Option<u64>,
    #[arg(long = "m-max")]
    pub m_max: Option<u64>,
    /// Require gcd(d, m) = 1.
    #[arg(long = "require-coprime")]
    pub require_coprime: bool,
    /// Require m = 2 or 3 mod 4.
    #[arg(long = "require-mod4")]
    pub require_mod4: bool,
    #[arg(long = "require-squarefree")]
    pub require_squarefree: bool,
}

/// What a command found, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// An incomplete search or a failed check.
    Flagged,
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let cfg = RunConfig::from_args(&cli.global)?;
    match cli.command {
        Command::Solve { spec } => commands::solve(&cfg, &spec),
        Command::Binomial(args) => commands::binomial(&cfg, &args),
        Command::Sextic { input, verify_only } => commands::sextic(&cfg, input.as_deref(), verify_only),
        Command::VerifyFixtures { filter, binomial_table, sextic_table } => {
            commands::verify_fixtures(&cfg, &filter, binomial_table.as_deref(), sextic_table.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Flagged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
