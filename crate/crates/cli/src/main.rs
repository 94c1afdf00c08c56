//! Command-line front end for the certification engine.
//!
//! Four subcommands. `verify-table` certifies every row of a table in the
//! published CSV or JSON layout and checks that the closed-form thresholds
//! splice onto the table's end. `search` hunts for the best certifiable
//! constant on a single modulus range. `thresholds` solves the large-moduli
//! takeover points for a given constant. `selfcheck` replays the brute-force
//! oracle suite against the interval engine.
//!
//! Exit codes: 0 on success, 1 when a certification or check fails, 2 on
//! invalid input. Reports are deterministic: no timestamps, no timings, and
//! row order is preserved regardless of the worker-thread count.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pagecert::asymptotic::{
    coverage_report, solve_threshold, AsymptoticError, CoverageReport, ThresholdReport,
    DEFAULT_Q0_FOR_A,
};
use pagecert::charbounds::{ModulusRange, Parity};
use pagecert::criterion::{budget_term, PrecisionLevel, Status, VerificationCertificate};
use pagecert::oracle::{
    check_decomposition, direct_l, direct_log_power_sum, direct_power_sum, dd_enclosure,
    kronecker, test_discriminants, RealCharacter,
};
use pagecert::rigor::Enclosure;
use pagecert::search::{
    default_c_step, default_x_grid, find_best_with, format_c, format_lgx, format_q, parse_c,
    parse_q, parse_table, verify_row_with, SearchOptions, TableFormat,
};
use pagecert::specfun::{c1_constant, log_power_sum, power_sum, tail_f};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::io::Read as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pagecert",
    version,
    about = "Certify explicit zero-free constants for real Dirichlet characters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify every row of a table and check end-to-end coverage
    VerifyTable(VerifyTableArgs),
    /// Search one modulus range for the best certifiable constant
    Search(SearchArgs),
    /// Solve the large-moduli takeover thresholds for a constant
    Thresholds(ThresholdsArgs),
    /// Replay the brute-force oracle suite against the interval engine
    Selfcheck(SelfcheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityFilter {
    Even,
    Odd,
    Both,
}

impl ParityFilter {
    fn wants(self, parity: Parity) -> bool {
        match self {
            ParityFilter::Even => parity == Parity::Even,
            ParityFilter::Odd => parity == Parity::Odd,
            ParityFilter::Both => true,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Report format
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Write the report to this path instead of stdout ("-" for stdout)
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyTableArgs {
    /// Table to certify: CSV or JSON, "-" reads stdin
    #[arg(long)]
    input: String,
    /// Which character parity to certify
    #[arg(long, value_enum, default_value_t = ParityFilter::Both)]
    parity: ParityFilter,
    /// Replace Pólya–Vinogradov with the Pomerance character-sum bound
    #[arg(long)]
    pomerance: bool,
    /// Interval precision: fast, standard, or high (default from
    /// PAGECERT_PRECISION, else standard)
    #[arg(long)]
    precision: Option<String>,
    /// Worker threads for row certification (0 picks one per core)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SearchArgs {
    /// Lower end of the modulus range, e.g. "4e5"
    #[arg(long)]
    q_lo: String,
    /// Upper end of the modulus range (exclusive), e.g. "7e5"
    #[arg(long)]
    q_hi: String,
    /// Character parity for the range
    #[arg(long, value_enum)]
    parity: ParityArg,
    /// Starting constant, e.g. "1.000"
    #[arg(long)]
    c_start: String,
    /// Step in the constant (defaults to the range's published granularity)
    #[arg(long)]
    c_step: Option<String>,
    /// Replace Pólya–Vinogradov with the Pomerance character-sum bound
    #[arg(long)]
    pomerance: bool,
    /// Interval precision: fast, standard, or high
    #[arg(long)]
    precision: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ThresholdsArgs {
    /// Constant to solve for, e.g. "1.011"
    #[arg(long)]
    c: String,
    /// Which parities to solve
    #[arg(long, value_enum, default_value_t = ParityFilter::Both)]
    parity: ParityFilter,
    /// Modulus at which the character-sum constant is frozen, e.g. "4.6e20"
    #[arg(long)]
    q0_for_a: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SelfcheckArgs {
    #[command(flatten)]
    out: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyTable(args) => cmd_verify_table(&args),
        Command::Search(args) => cmd_search(&args),
        Command::Thresholds(args) => cmd_thresholds(&args),
        Command::Selfcheck(args) => cmd_selfcheck(&args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!("run `pagecert --help` for usage");
            ExitCode::from(2)
        }
    }
}

// ------------------------------------------------------------ verify-table

struct RowOutcome {
    index: usize,
    parity: Parity,
    q_lo: u128,
    q_hi: u128,
    c_milli: u32,
    log10_x_centi: u32,
    result: Result<VerificationCertificate, String>,
}

impl RowOutcome {
    fn certified(&self) -> bool {
        matches!(&self.result, Ok(c) if c.status == Status::Certified)
    }
}

/// Weakest constant that actually certified, after any side-condition
/// reductions. This is the constant the theorem inherits.
fn certified_min_c(outcomes: &[RowOutcome]) -> Option<u32> {
    outcomes
        .iter()
        .filter(|o| o.certified())
        .filter_map(|o| o.result.as_ref().ok())
        .map(|c| c.config.c_milli)
        .min()
}

fn cmd_verify_table(args: &VerifyTableArgs) -> Result<bool, String> {
    let precision = resolve_precision(args.precision.as_deref())?;
    let text = read_input(&args.input)?;
    let rows = parse_table(&text, sniff_format(&text))
        .map_err(|e| format!("cannot parse {}: {e}", args.input))?;

    let opts = SearchOptions {
        pomerance: args.pomerance,
        precision,
        ..SearchOptions::default()
    };

    let mut jobs: Vec<(usize, Parity)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for parity in [Parity::Even, Parity::Odd] {
            if args.parity.wants(parity) && row.entry(parity).is_some() {
                jobs.push((i, parity));
            }
        }
    }
    if jobs.is_empty() {
        return Err("the table has no rows for the requested parity".into());
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| format!("cannot build thread pool: {e}"))?;
    // par_iter + collect keeps job order, so the report is byte-identical
    // for every thread count.
    let outcomes: Vec<RowOutcome> = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, parity)| {
                let row = &rows[i];
                let entry = row.entry(parity).expect("filtered above");
                RowOutcome {
                    index: i,
                    parity,
                    q_lo: row.q_lo,
                    q_hi: row.q_hi,
                    c_milli: entry.c_milli,
                    log10_x_centi: entry.log10_x_centi,
                    result: verify_row_with(row, parity, &opts).map_err(|e| format!("{e}")),
                }
            })
            .collect()
    });

    let all_certified = outcomes.iter().all(RowOutcome::certified);
    for o in outcomes.iter().filter(|o| !o.certified()) {
        match &o.result {
            Ok(c) => eprintln!(
                "certification failed: row {} ({}) c {}: status {}",
                o.index + 1,
                parity_name(o.parity),
                format_c(o.c_milli),
                status_name(c.status)
            ),
            Err(e) => eprintln!(
                "certification failed: row {} ({}): {e}",
                o.index + 1,
                parity_name(o.parity)
            ),
        }
    }

    // Thresholds are solved at the weakest constant the table actually
    // certifies; coverage additionally needs both parities in the run.
    let c_theorem = certified_min_c(&outcomes);
    let q_end = rows.last().map_or(0, |r| r.q_hi);

    let mut thresholds: Vec<(Parity, Result<ThresholdReport, String>)> = Vec::new();
    if let Some(c) = c_theorem {
        for parity in [Parity::Even, Parity::Odd] {
            if !args.parity.wants(parity) {
                continue;
            }
            // Even characters keep the default freeze point; odd ones only
            // need the constant at the far end of the table.
            let q0 = match parity {
                Parity::Even => DEFAULT_Q0_FOR_A,
                Parity::Odd => q_end.max(DEFAULT_Q0_FOR_A),
            };
            thresholds.push((parity, solve_threshold(c, parity, q0).map_err(|e| format!("{e}"))));
        }
    }

    let coverage = if args.parity == ParityFilter::Both && all_certified {
        let even = thresholds
            .iter()
            .find(|(p, _)| *p == Parity::Even)
            .and_then(|(_, r)| r.as_ref().ok());
        let odd = thresholds
            .iter()
            .find(|(p, _)| *p == Parity::Odd)
            .and_then(|(_, r)| r.as_ref().ok());
        Some(match (even, odd) {
            (Some(e), Some(o)) => coverage_report(&rows, e, o),
            _ => CoverageReport {
                covered: false,
                failures: vec!["threshold solving failed".into()],
            },
        })
    } else {
        None
    };

    let success = all_certified && coverage.as_ref().map_or(true, |c| c.covered);
    if let Some(cov) = coverage.as_ref().filter(|c| !c.covered) {
        for f in &cov.failures {
            eprintln!("coverage failed: {f}");
        }
    }

    let report = match args.out.format {
        ReportFormat::Text => verify_report_text(&outcomes, &thresholds, coverage.as_ref(), precision),
        ReportFormat::Json => verify_report_json(&outcomes, &thresholds, coverage.as_ref(), precision),
        ReportFormat::Csv => verify_report_csv(&outcomes, &thresholds, coverage.as_ref()),
    };
    write_report(&args.out, &report)?;
    Ok(success)
}

fn row_line(o: &RowOutcome) -> String {
    let range = format!("[{}, {})", format_q(o.q_lo), format_q(o.q_hi));
    let c = match &o.result {
        Ok(cert) if cert.reduced_from.is_some() => {
            format!("{} -> {}", format_c(o.c_milli), format_c(cert.config.c_milli))
        }
        _ => format_c(o.c_milli),
    };
    let tail = match &o.result {
        Ok(cert) => format!(
            "{:<12} cells {:<6} F* <= {:+.6}  worst q {} tau {}",
            status_name(cert.status),
            cert.cells_examined,
            cert.f_star.hi,
            fmt_enc(cert.worst_cell.0),
            fmt_enc(cert.worst_cell.1)
        ),
        Err(e) => format!("error: {e}"),
    };
    format!(
        "row {:>2}  {:<4}  {:<22} c {:<16} x 10^{:<6} {}",
        o.index + 1,
        parity_name(o.parity),
        range,
        c,
        format_lgx(o.log10_x_centi),
        tail
    )
}

fn threshold_lines(thresholds: &[(Parity, Result<ThresholdReport, String>)]) -> String {
    let mut s = String::new();
    for (parity, result) in thresholds {
        match result {
            Ok(r) => {
                let _ = writeln!(
                    s,
                    "  {:<4}  pintz-route <= {:.6e}  side-condition <= {:.6e}  combined <= {:.6e}  (A frozen at q0 = {})",
                    parity_name(*parity),
                    r.pintz_threshold.hi,
                    r.side_condition_threshold.hi,
                    r.combined_threshold.hi,
                    format_q(r.q0_for_a)
                );
            }
            Err(e) => {
                let _ = writeln!(s, "  {:<4}  unresolved: {e}", parity_name(*parity));
            }
        }
    }
    s
}

fn verify_report_text(
    outcomes: &[RowOutcome],
    thresholds: &[(Parity, Result<ThresholdReport, String>)],
    coverage: Option<&CoverageReport>,
    precision: PrecisionLevel,
) -> String {
    let even = outcomes.iter().filter(|o| o.parity == Parity::Even).count();
    let odd = outcomes.len() - even;
    let mut s = format!(
        "table verification: {even} even rows, {odd} odd rows, precision {}\n",
        precision_name(precision)
    );
    for o in outcomes {
        let _ = writeln!(s, "{}", row_line(o));
    }
    if let Some(c) = certified_min_c(outcomes) {
        let _ = writeln!(s, "thresholds at c = {}:", format_c(c));
        s.push_str(&threshold_lines(thresholds));
    } else {
        s.push_str("thresholds: skipped, no row certified\n");
    }
    match coverage {
        Some(cov) if cov.covered => {
            s.push_str("coverage: complete, the thresholds splice onto the verified table\n");
        }
        Some(cov) => {
            let _ = writeln!(s, "coverage: FAILED ({})", cov.failures.join("; "));
        }
        None => s.push_str("coverage: not evaluated (needs both parities certified)\n"),
    }
    s
}

fn cert_json(cert: &VerificationCertificate) -> serde_json::Value {
    serde_json::json!({
        "status": status_name(cert.status),
        "c_effective": format_c(cert.config.c_milli),
        "reduced_from": cert.reduced_from.map(format_c),
        "cells_examined": cert.cells_examined,
        "f_star": [cert.f_star.lo, cert.f_star.hi],
        "worst_q": [cert.worst_cell.0.lo, cert.worst_cell.0.hi],
        "worst_tau": [cert.worst_cell.1.lo, cert.worst_cell.1.hi],
    })
}

fn verify_report_json(
    outcomes: &[RowOutcome],
    thresholds: &[(Parity, Result<ThresholdReport, String>)],
    coverage: Option<&CoverageReport>,
    precision: PrecisionLevel,
) -> String {
    let rows: Vec<serde_json::Value> = outcomes
        .iter()
        .map(|o| {
            let mut v = serde_json::json!({
                "row": o.index + 1,
                "parity": parity_name(o.parity),
                "q0": format_q(o.q_lo),
                "q1": format_q(o.q_hi),
                "c": format_c(o.c_milli),
                "log10_x": format_lgx(o.log10_x_centi),
            });
            let extra = match &o.result {
                Ok(cert) => cert_json(cert),
                Err(e) => serde_json::json!({"status": "error", "error": e}),
            };
            v.as_object_mut()
                .expect("object")
                .extend(extra.as_object().expect("object").clone());
            v
        })
        .collect();
    let thresholds: serde_json::Value = thresholds
        .iter()
        .map(|(p, r)| {
            let value = match r {
                Ok(report) => report.to_json(),
                Err(e) => serde_json::json!({"error": e}),
            };
            (parity_name(*p).to_string(), value)
        })
        .collect::<serde_json::Map<_, _>>()
        .into();
    let coverage = match coverage {
        Some(c) => serde_json::json!({"covered": c.covered, "failures": c.failures}),
        None => serde_json::Value::Null,
    };
    let doc = serde_json::json!({
        "command": "verify-table",
        "precision": precision_name(precision),
        "rows": rows,
        "thresholds": thresholds,
        "coverage": coverage,
    });
    pretty_json(&doc)
}

fn verify_report_csv(
    outcomes: &[RowOutcome],
    thresholds: &[(Parity, Result<ThresholdReport, String>)],
    coverage: Option<&CoverageReport>,
) -> String {
    let mut s = String::from(
        "row,parity,q0,q1,c,c_effective,log10_x,status,cells,f_star_hi,worst_q_lo,worst_q_hi,worst_tau_lo,worst_tau_hi\n",
    );
    for o in outcomes {
        match &o.result {
            Ok(cert) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{:.6},{:.6e},{:.6e},{:.6e},{:.6e}",
                    o.index + 1,
                    parity_name(o.parity),
                    format_q(o.q_lo),
                    format_q(o.q_hi),
                    format_c(o.c_milli),
                    format_c(cert.config.c_milli),
                    format_lgx(o.log10_x_centi),
                    status_name(cert.status),
                    cert.cells_examined,
                    cert.f_star.hi,
                    cert.worst_cell.0.lo,
                    cert.worst_cell.0.hi,
                    cert.worst_cell.1.lo,
                    cert.worst_cell.1.hi
                );
            }
            Err(e) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},--,{},error,0,--,--,--,--,--",
                    o.index + 1,
                    parity_name(o.parity),
                    format_q(o.q_lo),
                    format_q(o.q_hi),
                    format_c(o.c_milli),
                    format_lgx(o.log10_x_centi)
                );
                let _ = writeln!(s, "# row {} error: {e}", o.index + 1);
            }
        }
    }
    for (parity, result) in thresholds {
        match result {
            Ok(r) => {
                let _ = writeln!(
                    s,
                    "# threshold {} c={} q0_for_a={} pintz={:.6e} side={:.6e} combined={:.6e}",
                    parity_name(*parity),
                    format_c(r.c_milli),
                    format_q(r.q0_for_a),
                    r.pintz_threshold.hi,
                    r.side_condition_threshold.hi,
                    r.combined_threshold.hi
                );
            }
            Err(e) => {
                let _ = writeln!(s, "# threshold {} unresolved: {e}", parity_name(*parity));
            }
        }
    }
    match coverage {
        Some(c) if c.covered => s.push_str("# coverage=complete\n"),
        Some(c) => {
            let _ = writeln!(s, "# coverage=failed ({})", c.failures.join("; "));
        }
        None => s.push_str("# coverage=not-evaluated\n"),
    }
    s
}

// ------------------------------------------------------------------ search

fn cmd_search(args: &SearchArgs) -> Result<bool, String> {
    let precision = resolve_precision(args.precision.as_deref())?;
    let q_lo = parse_q(&args.q_lo).map_err(|e| format!("bad --q-lo: {e}"))?;
    let q_hi = parse_q(&args.q_hi).map_err(|e| format!("bad --q-hi: {e}"))?;
    let parity = Parity::from(args.parity);
    let range = ModulusRange::new(q_lo, q_hi, parity).map_err(|e| format!("bad range: {e}"))?;
    let c_start = parse_c(&args.c_start).map_err(|e| format!("bad --c-start: {e}"))?;
    let c_step = match &args.c_step {
        Some(text) => {
            let step = parse_c(text).map_err(|e| format!("bad --c-step: {e}"))?;
            if step == 0 {
                return Err("--c-step must be at least 0.001".into());
            }
            step
        }
        None => default_c_step(&range),
    };
    if c_start == 0 {
        return Err("--c-start must be positive".into());
    }

    let opts = SearchOptions {
        pomerance: args.pomerance,
        precision,
        ..SearchOptions::default()
    };
    let grid = default_x_grid(&range, c_start);
    let outcome = find_best_with(range, c_start, c_step, &grid, &opts);

    let header = format!(
        "search [{}, {}) {}, start {} step {}, precision {}",
        format_q(q_lo),
        format_q(q_hi),
        parity_name(parity),
        format_c(c_start),
        format_c(c_step),
        precision_name(precision)
    );
    let report = match &outcome {
        Some(found) => {
            let cert = &found.certificate;
            match args.out.format {
                ReportFormat::Text => format!(
                    "{header}\nbest c {}  witness x 10^{}  {}  cells {}  F* <= {:+.6}  worst q {} tau {}\n",
                    format_c(found.c_milli),
                    format_lgx(found.log10_x_centi),
                    status_name(cert.status),
                    cert.cells_examined,
                    cert.f_star.hi,
                    fmt_enc(cert.worst_cell.0),
                    fmt_enc(cert.worst_cell.1)
                ),
                ReportFormat::Json => {
                    let mut doc = serde_json::json!({
                        "command": "search",
                        "q0": format_q(q_lo),
                        "q1": format_q(q_hi),
                        "parity": parity_name(parity),
                        "precision": precision_name(precision),
                        "c": format_c(found.c_milli),
                        "log10_x": format_lgx(found.log10_x_centi),
                    });
                    doc.as_object_mut()
                        .expect("object")
                        .extend(cert_json(cert).as_object().expect("object").clone());
                    pretty_json(&doc)
                }
                ReportFormat::Csv => format!(
                    "q0,q1,parity,c,log10_x,status,cells,f_star_hi\n{},{},{},{},{},{},{},{:.6}\n",
                    format_q(q_lo),
                    format_q(q_hi),
                    parity_name(parity),
                    format_c(found.c_milli),
                    format_lgx(found.log10_x_centi),
                    status_name(cert.status),
                    cert.cells_examined,
                    cert.f_star.hi
                ),
            }
        }
        None => match args.out.format {
            ReportFormat::Text => format!("{header}\nno certifiable constant at or above {}\n", format_c(c_start)),
            ReportFormat::Json => pretty_json(&serde_json::json!({
                "command": "search",
                "q0": format_q(q_lo),
                "q1": format_q(q_hi),
                "parity": parity_name(parity),
                "precision": precision_name(precision),
                "c": serde_json::Value::Null,
            })),
            ReportFormat::Csv => String::from("q0,q1,parity,c,log10_x,status,cells,f_star_hi\n"),
        },
    };
    if outcome.is_none() {
        eprintln!(
            "search failed: no certifiable constant at or above {} on [{}, {})",
            format_c(c_start),
            format_q(q_lo),
            format_q(q_hi)
        );
    }
    write_report(&args.out, &report)?;
    Ok(outcome.is_some())
}

// -------------------------------------------------------------- thresholds

fn cmd_thresholds(args: &ThresholdsArgs) -> Result<bool, String> {
    let c_milli = parse_c(&args.c).map_err(|e| format!("bad --c: {e}"))?;
    let q0 = match &args.q0_for_a {
        Some(text) => parse_q(text).map_err(|e| format!("bad --q0-for-a: {e}"))?,
        None => DEFAULT_Q0_FOR_A,
    };

    let mut reports: Vec<(Parity, Result<ThresholdReport, AsymptoticError>)> = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        if args.parity.wants(parity) {
            reports.push((parity, solve_threshold(c_milli, parity, q0)));
        }
    }
    // A domain error means the request itself is malformed; failing to
    // bracket a root is a negative mathematical answer, reported as exit 1.
    if let Some((_, Err(AsymptoticError::Domain(msg)))) = reports
        .iter()
        .find(|(_, r)| matches!(r, Err(AsymptoticError::Domain(_))))
    {
        return Err(format!("threshold domain error: {msg}"));
    }
    let all_solved = reports.iter().all(|(_, r)| r.is_ok());
    let stringly: Vec<(Parity, Result<ThresholdReport, String>)> = reports
        .into_iter()
        .map(|(p, r)| (p, r.map_err(|e| format!("{e}"))))
        .collect();

    let report = match args.out.format {
        ReportFormat::Text => {
            let mut s = format!("thresholds at c = {}\n", format_c(c_milli));
            s.push_str(&threshold_lines(&stringly));
            s
        }
        ReportFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = stringly
                .iter()
                .map(|(p, r)| {
                    let value = match r {
                        Ok(report) => report.to_json(),
                        Err(e) => serde_json::json!({"error": e}),
                    };
                    (parity_name(*p).to_string(), value)
                })
                .collect();
            pretty_json(&serde_json::json!({
                "command": "thresholds",
                "c": format_c(c_milli),
                "q0_for_a": format_q(q0),
                "reports": map,
            }))
        }
        ReportFormat::Csv => {
            let mut s = String::from("parity,c,q0_for_a,pintz_hi,side_hi,combined_hi\n");
            for (p, r) in &stringly {
                match r {
                    Ok(rep) => {
                        let _ = writeln!(
                            s,
                            "{},{},{},{:.6e},{:.6e},{:.6e}",
                            parity_name(*p),
                            format_c(rep.c_milli),
                            format_q(rep.q0_for_a),
                            rep.pintz_threshold.hi,
                            rep.side_condition_threshold.hi,
                            rep.combined_threshold.hi
                        );
                    }
                    Err(e) => {
                        let _ = writeln!(s, "{},{},{},unresolved,unresolved,unresolved # {e}",
                            parity_name(*p), format_c(c_milli), format_q(q0));
                    }
                }
            }
            s
        }
    };
    for (p, r) in &stringly {
        if let Err(e) = r {
            eprintln!("threshold solving failed ({}): {e}", parity_name(*p));
        }
    }
    write_report(&args.out, &report)?;
    Ok(all_solved)
}

// --------------------------------------------------------------- selfcheck

struct Section {
    name: &'static str,
    detail: Result<String, String>,
}

fn cmd_selfcheck(args: &SelfcheckArgs) -> Result<bool, String> {
    let sections = vec![
        Section { name: "kronecker symbols", detail: check_kronecker() },
        Section { name: "character fundamentality", detail: check_fundamentality() },
        Section { name: "divisor-sum routes", detail: check_divisor_sums() },
        Section { name: "power sums vs zeta", detail: check_power_sums() },
        Section { name: "remainder decomposition", detail: check_decomposition_grid() },
        Section { name: "weighted-sum floor", detail: check_budget_floor() },
        Section { name: "L(1) positivity", detail: check_l_values() },
    ];
    let ok = sections.iter().all(|s| s.detail.is_ok());

    let report = match args.out.format {
        ReportFormat::Text => {
            let mut s = format!("selfcheck: {} sections\n", sections.len());
            for sec in &sections {
                match &sec.detail {
                    Ok(d) => {
                        let _ = writeln!(s, "  {:<26} ok ({d})", sec.name);
                    }
                    Err(e) => {
                        let _ = writeln!(s, "  {:<26} FAILED ({e})", sec.name);
                    }
                }
            }
            s.push_str(if ok {
                "selfcheck: all sections passed\n"
            } else {
                "selfcheck: FAILED\n"
            });
            s
        }
        ReportFormat::Json => {
            let list: Vec<serde_json::Value> = sections
                .iter()
                .map(|sec| {
                    serde_json::json!({
                        "name": sec.name,
                        "ok": sec.detail.is_ok(),
                        "detail": match &sec.detail {
                            Ok(d) => d,
                            Err(e) => e,
                        },
                    })
                })
                .collect();
            pretty_json(&serde_json::json!({
                "command": "selfcheck",
                "ok": ok,
                "sections": list,
            }))
        }
        ReportFormat::Csv => {
            let mut s = String::from("section,ok,detail\n");
            for sec in &sections {
                let (flag, d) = match &sec.detail {
                    Ok(d) => ("true", d),
                    Err(e) => ("false", e),
                };
                let _ = writeln!(s, "{},{},{}", sec.name, flag, d.replace(',', ";"));
            }
            s
        }
    };
    for sec in sections.iter().filter(|s| s.detail.is_err()) {
        eprintln!(
            "selfcheck failed: {}: {}",
            sec.name,
            sec.detail.as_ref().unwrap_err()
        );
    }
    write_report(&args.out, &report)?;
    Ok(ok)
}

fn check_kronecker() -> Result<String, String> {
    let hand = [
        ((5, 2), -1),
        ((-4, 3), -1),
        ((-4, 5), 1),
        ((8, 3), -1),
        ((8, 7), 1),
        ((12, 5), -1),
        ((12, 11), 1),
    ];
    for ((d, n), want) in hand {
        let got = kronecker(d, n);
        if got != want {
            return Err(format!("kronecker({d}, {n}) = {got}, expected {want}"));
        }
    }
    let mut identities = 0u64;
    for d in test_discriminants() {
        let q = d.unsigned_abs();
        for n in 0..2 * q {
            if kronecker(d, n) != kronecker(d, n + q) {
                return Err(format!("kronecker({d}, .) is not {q}-periodic at n = {n}"));
            }
            identities += 1;
        }
        for m in 1..=40u64 {
            for n in 1..=40u64 {
                if kronecker(d, m * n) != kronecker(d, m) * kronecker(d, n) {
                    return Err(format!(
                        "kronecker({d}, .) not multiplicative at ({m}, {n})"
                    ));
                }
                identities += 1;
            }
        }
    }
    Ok(format!("{} hand values, {identities} identities", hand.len()))
}

fn check_fundamentality() -> Result<String, String> {
    for d in test_discriminants() {
        RealCharacter::new(d).map_err(|e| format!("rejected discriminant {d}: {e}"))?;
    }
    let bogus = [0, 1, -1, 2, -2, 7, -5, 9, 45, 20, -12, 48, 16];
    for d in bogus {
        if RealCharacter::new(d).is_ok() {
            return Err(format!("accepted non-fundamental discriminant {d}"));
        }
    }
    Ok(format!(
        "{} fundamental accepted, {} bogus rejected",
        test_discriminants().len(),
        bogus.len()
    ))
}

fn check_divisor_sums() -> Result<String, String> {
    let mut checked = 0u64;
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).map_err(|e| format!("{e}"))?;
        let table = pagecert::oracle::g_table(&chi, 100_000);
        for (n, &g) in table.iter().enumerate().skip(1) {
            if g < 0 {
                return Err(format!("g({n}) = {g} < 0 for discriminant {d}"));
            }
        }
        for m in 1..=316u64 {
            if table[(m * m) as usize] < 1 {
                return Err(format!("g({}) < 1 for discriminant {d}", m * m));
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} characters to 1e5, squares positive"))
}

fn check_power_sums() -> Result<String, String> {
    let mut points = 0u64;
    for (num, den) in [(1i64, 10i64), (1, 2), (9, 10)] {
        let alpha = Enclosure::from_ratio(num, den);
        for x in [10u64, 100, 1000, 100_000] {
            let xe = Enclosure::from_int(x as i64);
            let plain = power_sum(xe, alpha).as_enclosure();
            let direct = dd_enclosure(direct_power_sum(x, num, den));
            if !(plain.lo <= direct.hi && direct.lo <= plain.hi) {
                return Err(format!("power sum misses direct sum at alpha {num}/{den}, x {x}"));
            }
            let logged = log_power_sum(xe, alpha).as_enclosure();
            let direct_log = dd_enclosure(direct_log_power_sum(x, num, den));
            if !(logged.lo <= direct_log.hi && direct_log.lo <= logged.hi) {
                return Err(format!(
                    "log power sum misses direct sum at alpha {num}/{den}, x {x}"
                ));
            }
            points += 2;
        }
    }
    let c1 = c1_constant(Enclosure::from_ratio(1, 2));
    let reference = 0.539645491190413187110500847485;
    if !c1.contains(reference) {
        return Err("C1(1/2) enclosure misses its reference value".into());
    }
    Ok(format!("{points} containments, C1(1/2) pinned"))
}

fn check_decomposition_grid() -> Result<String, String> {
    let mut points = 0u64;
    for d in [5i64, 8, 13, -3, -4, -7] {
        let chi = RealCharacter::new(d).map_err(|e| format!("{e}"))?;
        for x in [100u64, 1000] {
            for (num, den) in [(1i64, 100i64), (1, 20)] {
                match check_decomposition(&chi, x, num, den) {
                    Ok(true) => points += 1,
                    Ok(false) => {
                        return Err(format!(
                            "remainder escaped its budget at d {d}, x {x}, tau {num}/{den}"
                        ))
                    }
                    Err(e) => return Err(format!("{e}")),
                }
            }
        }
    }
    Ok(format!("{points} grid points contained"))
}

fn check_budget_floor() -> Result<String, String> {
    let mut points = 0u64;
    for d in [5i64, 8, 13, -3, -4, -7] {
        let chi = RealCharacter::new(d).map_err(|e| format!("{e}"))?;
        for x in [100u64, 1000, 10_000] {
            for (num, den) in [(1i64, 100i64), (1, 20)] {
                let sum = dd_enclosure(
                    pagecert::oracle::direct_weighted_sum(&chi, x, num, den)
                        .map_err(|e| format!("{e}"))?,
                );
                let tau = Enclosure::from_ratio(num, den);
                let alpha = Enclosure::from_ratio(2 * num - den, den);
                let floor = budget_term(tau, PrecisionLevel::Standard)
                    - Enclosure::point(tail_f(alpha, Enclosure::from_int(x as i64)).hi);
                if sum.lo < (floor - Enclosure::point(1e-12)).lo {
                    return Err(format!(
                        "weighted sum {} fell under its floor {} at d {d}, x {x}, tau {num}/{den}",
                        sum.lo, floor.lo
                    ));
                }
                points += 1;
            }
        }
    }
    Ok(format!("{points} floor points held"))
}

fn check_l_values() -> Result<String, String> {
    let chi4 = RealCharacter::new(-4).map_err(|e| format!("{e}"))?;
    let l4 = direct_l(&chi4, Enclosure::one(), 20_000).map_err(|e| format!("{e}"))?;
    let quarter_pi = (Enclosure::pi() / Enclosure::from_int(4)).midpoint();
    if !l4.contains(quarter_pi) {
        return Err("L(1, chi_{-4}) enclosure misses pi/4".into());
    }
    let mut positive = 0u64;
    for d in test_discriminants() {
        let chi = RealCharacter::new(d).map_err(|e| format!("{e}"))?;
        let l = direct_l(&chi, Enclosure::one(), 20_000).map_err(|e| format!("{e}"))?;
        if !l.strictly_positive() {
            return Err(format!("L(1) not provably positive for discriminant {d}"));
        }
        positive += 1;
    }
    Ok(format!("pi/4 pinned, {positive} characters positive"))
}

// ------------------------------------------------------------------ shared

fn resolve_precision(flag: Option<&str>) -> Result<PrecisionLevel, String> {
    let name = match flag {
        Some(s) => s.to_string(),
        None => std::env::var("PAGECERT_PRECISION").unwrap_or_else(|_| "standard".into()),
    };
    PrecisionLevel::parse_name(&name)
        .ok_or_else(|| format!("unknown precision `{name}` (expected fast, standard, or high)"))
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn sniff_format(text: &str) -> TableFormat {
    match text.trim_start().chars().next() {
        Some('{') | Some('[') => TableFormat::Json,
        _ => TableFormat::Csv,
    }
}

fn write_report(out: &OutputArgs, report: &str) -> Result<(), String> {
    match out.output.as_deref() {
        None | Some("-") => {
            print!("{report}");
            Ok(())
        }
        Some(path) => std::fs::write(path, report).map_err(|e| format!("cannot write {path}: {e}")),
    }
}

fn parity_name(parity: Parity) -> &'static str {
    match parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Certified => "certified",
        Status::Failed => "failed",
        Status::Inconclusive => "inconclusive",
    }
}

fn precision_name(precision: PrecisionLevel) -> &'static str {
    match precision {
        PrecisionLevel::Fast => "fast",
        PrecisionLevel::Standard => "standard",
        PrecisionLevel::High => "high",
    }
}

fn fmt_enc(e: Enclosure) -> String {
    format!("[{:.3e}, {:.3e}]", e.lo, e.hi)
}

fn pretty_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
