use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use sixtrig::commands::{execute, render_text};
use sixtrig::envelope::{Request, DEFAULT_K_RANGE};
use sixtrig::oracle::{DEFAULT_EXCLUSION, DEFAULT_POINTS};

/// Solve sin x + cos x + tan x + cot x + sec x + csc x = c.
///
/// Exit status: 0 ok, 2 no solution, 1 error.
#[derive(Debug, Parser)]
#[command(name = "sixtrig", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form solution family, enumerated over a range of K.
    Solve {
        /// Right-hand side: a number or an expression such as `1 - 2*sqrt(2)`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Require an integer target and check the integer case structure.
        #[arg(long)]
        integer_mode: bool,
        /// Inclusive range of K, e.g. `-3..3`.
        #[arg(long, default_value = DEFAULT_K_RANGE, allow_hyphen_values = true)]
        k_range: String,
    },
    /// Compare the closed form against a numerical root scan.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        integer_mode: bool,
        /// Matching tolerance for residues, in radians.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Grid points per period.
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        /// Distance kept from the poles at multiples of pi/2.
        #[arg(long, default_value_t = DEFAULT_EXCLUSION)]
        exclusion: f64,
    },
    /// Grid scan of |F(x) - c| over one period.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_EXCLUSION)]
        exclusion: f64,
    },
    /// Locate the roots of a t^2 + b t + c relative to the interval (lo, hi).
    #[command(allow_negative_numbers = true)]
    Classify { a: f64, b: f64, c: f64, lo: f64, hi: f64 },
    /// Write x, F(x) samples to a CSV file.
    Samples {
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: String,
    },
    /// Solve F(|x|) = -3 on |x| <= 4 pi and check every solution.
    Motivating,
}

impl Command {
    fn into_request(self) -> Request {
        match self {
            Command::Solve { target, integer_mode, k_range } => Request::Solve { target, integer_mode, k_range },
            Command::Verify { target, integer_mode, tol, points, exclusion } => {
                Request::Verify { target, integer_mode, tol, points, exclusion }
            }
            Command::Scan { target, points, exclusion } => Request::Scan { target, points, exclusion },
            Command::Classify { a, b, c, lo, hi } => Request::Classify { a, b, c, lo, hi },
            Command::Samples { from, to, step, out } => Request::Samples { from, to, step, out },
            Command::Motivating => Request::Motivating,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let envelope = execute(&cli.command.into_request());
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&envelope).context("serializing output")? + "\n",
        Format::Text => render_text(&envelope),
    };
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        // the reader went away (e.g. `| head`); the status still stands
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        other => other.context("writing output")?,
    }
    Ok(envelope.status.exit_code())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would read as "no solution".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("sixtrig: {e:#}");
            ExitCode::from(1)
        }
    }
}
