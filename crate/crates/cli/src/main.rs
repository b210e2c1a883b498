//! `qid`: expand q-series and check the identity registry.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qid_core::cfrac::{NamedCf, DEFAULT_DEPTH_CAP};
use qid_core::dissection::QuotientEntry;
use qid_core::partitions::{gf_expand, partition_spec};
use qid_core::theta::{chi, f_minus, phi, psi, SignedMonomial};
use qid_core::verifier::{find_claim, registry, run_claims, ClaimReport, RunOptions, Summary, SummaryRecord};
use qid_core::{exponent, Error, LatticeSeries};

#[derive(Parser)]
#[command(name = "qid", version, about = "Exact q-series expansion and identity checking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a named series.
    Expand {
        /// phi, psi, fminus, chi, A1..C7, T21.a..T23.d or T35.X1..T37.Z3
        name: String,
        /// Truncation order in lattice units of the series.
        #[arg(long, default_value_t = 20)]
        order: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check one claim, or `all`.
    Check {
        claim: String,
        /// Order in lattice units; overrides every claim's default.
        #[arg(long, env = "QID_DEFAULT_ORDER")]
        order: Option<i64>,
        /// Maximum continued-fraction depth.
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Report runtime_ms as 0, for byte-stable reports.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expand { name, order, format } => expand(&name, order, format),
        Command::Check {
            claim,
            order,
            depth_cap,
            jobs,
            format,
            no_timing,
        } => {
            let options = RunOptions {
                order,
                depth_cap,
                jobs,
                timing: !no_timing,
            };
            check(&claim, &options, format)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qid: {e}");
            match e {
                Error::UnknownName(_) | Error::InvalidArgument(_) => ExitCode::from(EXIT_USAGE),
                _ => ExitCode::from(EXIT_FAIL),
            }
        }
    }
}

fn named_series(name: &str, order: i64) -> Result<LatticeSeries, Error> {
    let one = exponent(1, 1);
    match name {
        "phi" => phi(SignedMonomial::q(1, 1), 1, order),
        "psi" => psi(SignedMonomial::q(1, 1), 1, order),
        "fminus" => f_minus(one, 1, order),
        "chi" => chi(one, 1, order),
        _ => {
            if let Ok(cf) = name.parse::<NamedCf>() {
                return Ok(cf.stabilized(order, DEFAULT_DEPTH_CAP)?.value);
            }
            if let Ok(entry) = QuotientEntry::get(name) {
                if entry.series_key == name {
                    return entry.series(order);
                }
            }
            gf_expand(&partition_spec(name)?, order)
        }
    }
}

fn expand(name: &str, order: i64, format: Format) -> Result<ExitCode, Error> {
    if order < 0 {
        return Err(Error::InvalidArgument(format!("order must be nonnegative, got {order}")));
    }
    let series = named_series(name, order)?;
    let mut out = io::stdout().lock();
    let text = match format {
        Format::Json => serde_json::to_string(&series.to_record()).expect("series record serializes"),
        Format::Text => series.to_string(),
    };
    writeln!(out, "{text}").map_err(io_error)?;
    Ok(ExitCode::SUCCESS)
}

fn check(claim: &str, options: &RunOptions, format: Format) -> Result<ExitCode, Error> {
    if let Some(order) = options.order {
        if order < 0 {
            return Err(Error::InvalidArgument(format!("order must be nonnegative, got {order}")));
        }
    }
    let claims = if claim == "all" {
        registry()
    } else {
        vec![find_claim(claim)?]
    };
    let reports = run_claims(&claims, options)?;
    let summary = Summary::from_reports(&reports);
    let mut out = io::stdout().lock();
    match format {
        Format::Json => write_json(&mut out, &reports, &summary),
        Format::Text => write_text(&mut out, &reports, &summary),
    }
    .map_err(io_error)?;
    Ok(if summary.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    })
}

fn write_json(out: &mut impl Write, reports: &[ClaimReport], summary: &Summary) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    let record = SummaryRecord {
        summary: summary.clone(),
    };
    writeln!(out, "{}", serde_json::to_string(&record)?)
}

fn write_text(out: &mut impl Write, reports: &[ClaimReport], summary: &Summary) -> io::Result<()> {
    let width = reports.iter().map(|r| r.claim_id.len()).max().unwrap_or(5).max(5);
    writeln!(out, "{:<width$}  {:<6} {:>9}  {:>8}  detail", "claim", "status", "order", "ms")?;
    for r in reports {
        let order = format!("{}/{}", r.order_checked.order, r.order_checked.scale);
        let mut detail = match &r.witness {
            Some(w) => format!("q^{}: {} vs {}", w.exponent, w.lhs_coefficient, w.rhs_coefficient),
            None => String::new(),
        };
        if let Some(m) = &r.message {
            if !detail.is_empty() {
                detail.push_str("; ");
            }
            detail.push_str(m);
        }
        writeln!(
            out,
            "{:<width$}  {:<6} {:>9}  {:>8}  {}",
            r.claim_id, r.status, order, r.runtime_ms, detail
        )?;
    }
    writeln!(
        out,
        "\n{} claims: {} pass, {} fail, {} error",
        summary.total, summary.passed, summary.failed, summary.errors
    )?;
    if !summary.counterexamples.is_empty() {
        let list: Vec<String> = summary
            .counterexamples
            .iter()
            .map(|c| format!("{} (q^{})", c.claim_id, c.exponent))
            .collect();
        writeln!(out, "counterexamples: {}", list.join(", "))?;
    }
    Ok(())
}

fn io_error(e: io::Error) -> Error {
    Error::InvalidArgument(format!("output: {e}"))
}
