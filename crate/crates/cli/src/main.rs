//! `chordstat`: exact counts, distributions, moments and asymptotics of
//! linear chord diagrams with a marked chord.
//!
//! Writes CSV (default) or JSON to stdout. Exit status is 0 on success, 1 for
//! usage errors and out-of-range parameters, and 2 when an internal check
//! fails, including any disagreement between independent computation routes.

mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use chordstat::{Error, StatKind};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{CmdResult, Outcome};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "chordstat", version, about = "Statistics of linear chord diagrams with a marked chord")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

fn parse_stat(s: &str) -> Result<StatKind, String> {
    s.parse::<StatKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// A single count, or the full row for n.
    Count {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Rows n = 1..=n-max of the count table.
    Table {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        n_max: usize,
    },
    /// Exact distribution as rationals and decimals.
    Dist {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        n: usize,
        /// Add x = p/(n-1) and the scaled density (n-1) P(p).
        #[arg(long)]
        normalize: bool,
    },
    /// Factorial moment of order m, mean and variance.
    Moments {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Limiting density (and CDF) on a uniform grid over [0, 1].
    Asym {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        cdf: bool,
    },
    /// Normal-approximation integral N(x) for K or C.
    Normal {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        n: usize,
        /// Uniform grid size; defaults to every lattice point p/(n-1).
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = chordstat::analysis::DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Generating-function coefficients n! [y^p z^n] for n <= order.
    Gf {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        #[arg(long)]
        order: usize,
    },
    /// Brute-force enumeration checked against the exact and series routes.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Permit n = 9.
        #[arg(long)]
        allow_n9: bool,
    },
    /// Monte Carlo frequencies with standard errors.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        reps: u64,
        #[arg(long)]
        seed: u64,
        /// Independent generator streams, run in parallel.
        #[arg(long, default_value_t = 1)]
        streams: usize,
    },
    /// Exact scaled distribution against the limiting density.
    Figure2 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_stat)]
        stat: Option<StatKind>,
        /// Uniform grid size; defaults to every lattice point p/(n-1).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Crossing table from the row recursion, checked against the closed form.
    Recursion {
        #[arg(long)]
        n_max: usize,
    },
    /// Quadrature check of the containing/excluded moment identities.
    Ibp {
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
}

const USAGE: u8 = 1;
const INTERNAL: u8 = 2;

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Count { stat, n, p } => commands::count(stat, n, p),
        Command::Table { stat, n_max } => commands::table(stat, n_max),
        Command::Dist { stat, n, normalize } => commands::dist(stat, n, normalize),
        Command::Moments { stat, n, m } => commands::moments(stat, n, m),
        Command::Asym { stat, points, cdf } => commands::asym(stat, points, cdf),
        Command::Normal {
            stat,
            n,
            points,
            tolerance,
        } => commands::normal(stat, n, points, tolerance),
        Command::Gf { stat, order } => commands::gf(stat, order),
        Command::Oracle { n, threads, allow_n9 } => commands::oracle(n, threads, allow_n9),
        Command::Sample { n, reps, seed, streams } => commands::sample(n, reps, seed, streams),
        Command::Figure2 { n, stat, points } => commands::figure2(n, stat, points),
        Command::Recursion { n_max } => commands::recursion(n_max),
        Command::Ibp { m_max, tolerance } => commands::ibp(m_max, tolerance),
    }
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::InvalidArgument(_) => ("invalid_argument", USAGE),
        Error::UnsupportedStat { .. } => ("unsupported_stat", USAGE),
        Error::ResourceCap { .. } => ("resource_cap", USAGE),
        Error::Invariant(_) => ("invariant", INTERNAL),
        Error::Quadrature { .. } => ("quadrature", INTERNAL),
        Error::Divergent { .. } => ("divergent", INTERNAL),
        Error::OrderMismatch { .. } | Error::ConstantTerm { .. } | Error::BeyondOrder { .. } => {
            ("series", INTERNAL)
        }
    }
}

fn diagnose(err: &mut dyn Write, command: &str, kind: &str, code: u8, messages: &[String]) {
    let line = json!({
        "status": "error",
        "command": command,
        "kind": kind,
        "exit_code": code,
        "messages": messages,
    });
    let _ = writeln!(err, "{line}");
}

/// Writes the outcome and maps it to an exit status.
fn finish(
    command: &str,
    result: CmdResult,
    format: Format,
    started: Instant,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let Outcome {
        mut record,
        disagreements,
    } = match result {
        Ok(o) => o,
        Err(e) => {
            let (kind, code) = error_kind(&e);
            diagnose(err, command, kind, code, &[e.to_string()]);
            return code;
        }
    };
    record.metadata.timing.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    if let Err(e) = record.write(format, out).and_then(|_| out.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return 0;
        }
        diagnose(err, command, "io", INTERNAL, &[e.to_string()]);
        return INTERNAL;
    }
    if disagreements.is_empty() {
        0
    } else {
        diagnose(err, command, "disagreement", INTERNAL, &disagreements);
        INTERNAL
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Count { .. } => "count",
        Command::Table { .. } => "table",
        Command::Dist { .. } => "dist",
        Command::Moments { .. } => "moments",
        Command::Asym { .. } => "asym",
        Command::Normal { .. } => "normal",
        Command::Gf { .. } => "gf",
        Command::Oracle { .. } => "oracle",
        Command::Sample { .. } => "sample",
        Command::Figure2 { .. } => "figure2",
        Command::Recursion { .. } => "recursion",
        Command::Ibp { .. } => "ibp",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => USAGE,
                _ => USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    let result = dispatch(cli.command);
    let code = finish(
        name,
        result,
        cli.format,
        started,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use output::OutputRecord;

    fn run_finish(result: CmdResult) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = finish("test", result, Format::Csv, Instant::now(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn disagreement_exits_internal_with_diagnostic() {
        let outcome = Outcome {
            record: OutputRecord::new("test", &["a"]),
            disagreements: vec!["K_{3,1}: oracle 18, closed form 19".into()],
        };
        let (code, out, err) = run_finish(Ok(outcome));
        assert_eq!(code, 2);
        assert_eq!(out, "a\n");
        let diag: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(diag["kind"], "disagreement");
        assert_eq!(diag["exit_code"], 2);
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        assert_eq!(run_finish(Err(Error::Invariant("x".into()))).0, 2);
        assert_eq!(run_finish(Err(Error::InvalidArgument("x".into()))).0, 1);
        assert_eq!(run_finish(Err(Error::ResourceCap { n: 10, cap: 8 })).0, 1);
        let (code, out, err) = run_finish(Err(Error::Quadrature {
            estimate: 1.0,
            error: 0.1,
            tolerance: 1e-9,
        }));
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("\"quadrature\""));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
