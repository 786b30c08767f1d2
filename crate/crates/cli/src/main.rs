mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quatseq_core::SequenceKind;

/// Generate, correlate and verify quaternary cyclotomic sequences of period 2p^m.
#[derive(Parser, Debug)]
#[command(name = "quatseq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit one period of a sequence.
    Gen {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        seq: SequenceKind,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Periodic autocorrelation, annotated with the closed-form prediction where one exists.
    Acf {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        seq: SequenceKind,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: u64,
    },
    /// Periodic cross-correlation C_{a,b}(k) of the two half-period components.
    Ccf {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum)]
        a: ComponentArg,
        #[arg(long, value_enum)]
        b: ComponentArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: u64,
    },
    /// Cyclotomic numbers (i, j) of order two, brute force next to the closed form.
    Cycnum {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// The classes D_i mod p^j and 2p^j, and 2D_i mod 2p^j, at one level j.
    Classes {
        #[command(flatten)]
        instance: Instance,
        /// Defaults to m.
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the verification suite; exits 1 if any check fails.
    Verify {
        /// Comma-separated primes; omit for every prime up to 31.
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// Comma-separated exponents; omit for every m with 2p^m <= --max-n.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

const DEFAULT_MAX_N: u64 = quatseq_core::verification::DEFAULT_MAX_PERIOD;

#[derive(Args, Debug, Clone, Copy)]
struct Instance {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Raw,
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ComponentArg {
    S1,
    S2,
}

enum Failure {
    Usage(String),
    VerificationFailed,
}

impl From<quatseq_core::Error> for Failure {
    fn from(e: quatseq_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(cli.command, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::VerificationFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
