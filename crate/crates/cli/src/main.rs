use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use ciani::hyperelliptic::HypCianiModel;
use ciani::quartic::CianiQuartic;
use ciani_cli::{
    analyze, batch, classify_record, graph_rows, oracle_check, parse_list, parse_prime, parse_rational, CurveInput,
    PrimeChoice, ReportRecord,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "ciani",
    version,
    about = "Stable reduction types of Ciani quartics at odd primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON lines instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify A x^4 + B y^4 + C z^4 + a y^2z^2 + b x^2z^2 + c x^2y^2 at one prime.
    ClassifyQuartic {
        /// A,B,C,a,b,c as integers or fractions n/d.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify a quartic at every odd prime dividing its discriminant.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        label: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify y^2 = x^8 + M x^6 + N x^4 + M x^2 + 1 at one prime.
    ClassifyHyp {
        #[arg(long = "M", allow_hyphen_values = true)]
        m: String,
        #[arg(long = "N", allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        prime: String,
        #[command(flatten)]
        out: Output,
    },
    /// List the 20 decorated graphs with their stable reduction types.
    EnumerateGraphs {
        #[command(flatten)]
        out: Output,
    },
    /// Compare the stable-model oracle with the classifier on CSV rows label,A,B,C,a,b,c.
    OracleCheck {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        header: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Classify CSV rows label,A,B,C,a,b,c or label,M,N.
    Batch {
        #[arg(long)]
        csv: String,
        #[arg(long, conflicts_with = "all_odd", required_unless_present = "all_odd")]
        prime: Option<String>,
        #[arg(long)]
        all_odd: bool,
        /// Skip the first line.
        #[arg(long)]
        header: bool,
        #[command(flatten)]
        out: Output,
    },
}

const EXIT_INVALID: u8 = 1;
const EXIT_UNMATCHED: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID)
}

/// Print a line; a closed stdout (e.g. piped into `head`) ends the process.
fn say(line: &str) {
    if writeln!(io::stdout().lock(), "{line}").is_err() {
        std::process::exit(0);
    }
}

fn emit_json<T: Serialize>(x: &T) {
    say(&serde_json::to_string(x).expect("records serialise"));
}

fn emit_records(records: &[ReportRecord], json: bool) -> ExitCode {
    for r in records {
        if json {
            emit_json(r);
        } else {
            say(&r.human());
        }
    }
    if records.iter().any(ReportRecord::is_unmatched) {
        ExitCode::from(EXIT_UNMATCHED)
    } else {
        ExitCode::SUCCESS
    }
}

fn quartic(coeffs: &str) -> Result<CurveInput, String> {
    let v = parse_list(coeffs, 6)?;
    Ok(CurveInput::Quartic(CianiQuartic::new(
        v.try_into().expect("six values"),
    )))
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::ClassifyQuartic {
            coeffs,
            prime,
            label,
            out,
        } => {
            let (input, ctx) = match (quartic(&coeffs), parse_prime(&prime)) {
                (Ok(i), Ok(c)) => (i, c),
                (Err(e), _) | (_, Err(e)) => return fail(e),
            };
            match classify_record(label.as_deref(), &input, &ctx) {
                Ok(r) => emit_records(&[r], out.json),
                Err(e) => fail(e),
            }
        }
        Command::Analyze { coeffs, label, out } => {
            let input = match quartic(&coeffs) {
                Ok(i) => i,
                Err(e) => return fail(e),
            };
            match analyze(label.as_deref(), &input) {
                Ok(rs) => {
                    if rs.is_empty() {
                        eprintln!("note: no odd bad primes");
                    }
                    emit_records(&rs, out.json)
                }
                Err(e) => fail(e),
            }
        }
        Command::ClassifyHyp { m, n, prime, out } => {
            let parsed = (parse_rational(&m), parse_rational(&n), parse_prime(&prime));
            let (m, n, ctx) = match parsed {
                (Ok(m), Ok(n), Ok(c)) => (m, n, c),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return fail(e),
            };
            let input = CurveInput::Hyperelliptic(HypCianiModel::new(m, n));
            match classify_record(None, &input, &ctx) {
                Ok(r) => emit_records(&[r], out.json),
                Err(e) => fail(e),
            }
        }
        Command::EnumerateGraphs { out } => {
            let rows = graph_rows();
            for r in &rows {
                if out.json {
                    emit_json(r);
                } else {
                    let marks: Vec<String> = r
                        .marks
                        .iter()
                        .map(|m| m.iter().map(u8::to_string).collect::<String>())
                        .collect();
                    let note = if r.listed_type != r.stable_type {
                        format!("  (listed: {})", r.listed_type)
                    } else {
                        String::new()
                    };
                    say(&format!(
                        "{:<6} marks [{}] edges {:?} labels {:?}  {}{}",
                        r.graph,
                        marks.join(" | "),
                        r.edges,
                        r.edge_labels,
                        r.stable_type,
                        note
                    ));
                }
            }
            let mut names: Vec<&str> = rows.iter().map(|r| r.stable_type.as_str()).collect();
            names.sort();
            names.dedup();
            if !out.json {
                say(&format!("{} graphs, {} stable types", rows.len(), names.len()));
            }
            ExitCode::SUCCESS
        }
        Command::OracleCheck {
            fixture,
            prime,
            header,
            out,
        } => {
            let ctx = match parse_prime(&prime) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            let file = match File::open(&fixture) {
                Ok(f) => f,
                Err(e) => return fail(format!("{fixture}: {e}")),
            };
            let rows = match oracle_check(file, header, &ctx) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for r in &rows {
                if out.json {
                    emit_json(r);
                } else if let Some(e) = &r.error {
                    say(&format!("{}  p={}  error: {e}", r.label, r.prime));
                } else {
                    say(&format!(
                        "{}  p={}  classifier {}  oracle {}  {}",
                        r.label,
                        r.prime,
                        r.classifier.as_deref().unwrap_or("-"),
                        r.oracle.as_deref().unwrap_or("-"),
                        if r.agree { "agree" } else { "DISAGREE" }
                    ));
                }
            }
            if rows.iter().any(|r| r.error.is_none() && !r.agree) {
                ExitCode::from(EXIT_DISAGREE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Batch {
            csv,
            prime,
            all_odd,
            header,
            out,
        } => {
            let choice = match (prime, all_odd) {
                (Some(p), false) => match parse_prime(&p) {
                    Ok(c) => PrimeChoice::Fixed(c),
                    Err(e) => return fail(e),
                },
                _ => PrimeChoice::AllOdd,
            };
            let file = match File::open(&csv) {
                Ok(f) => f,
                Err(e) => return fail(format!("{csv}: {e}")),
            };
            match batch(file, header, &choice) {
                Ok(rs) => emit_records(&rs, out.json),
                Err(e) => fail(e),
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
