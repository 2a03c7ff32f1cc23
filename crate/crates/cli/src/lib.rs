//! `derange`: compute derangement numbers and partial sums, print tables,
//! and run the identity checkers.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

pub mod record;

use clap::{Parser, Subcommand, ValueEnum};
use derange_core::derangement::{self, Method};
use derange_core::elaurent::{el_floor, el_to_f64, ELaurent};
use derange_core::exact::{factorial, set_precision_cap};
use derange_core::perm::{brute_derangement_count, brute_sum_rule};
use derange_core::quadrature::{integrate_exp_monomial, integrate_tail, MIN_TOLERANCE};
use derange_core::verify::{symbolic_i_upto, Identity, Profile, VerificationReport};
use derange_core::{Error, Integer};
use record::{Field, OutputRecord};
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the series-term cap for enclosures of e.
pub const PRECISION_CAP_ENV: &str = "DERANGE_PRECISION_CAP";

/// Largest argument accepted by `compute`.
pub const COMPUTE_MAX: u32 = 3000;
pub const TABLE_MAX: u32 = 500;
pub const QUADCHECK_MAX: u32 = 12;

#[derive(Debug, Parser)]
#[command(
    name = "derange",
    version,
    about = "Exact derangement numbers and the sum rule Σ n·D(n) = ⌊(p+1)!/e⌋"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// D(n)
    Derangement,
    /// S_p = Σ_{n=0..p} n·D(n)
    Sum,
    /// ⌊n!/e⌋
    Floor,
    /// A_N
    A,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one exact value.
    Compute {
        kind: Kind,
        /// n, p or N depending on the kind
        value: u32,
        /// derangement: table|sum|pair|signed|floor|nearest|brute;
        /// sum: table|floor|brute; floor: enclosure; a: recurrence|closed|floor
        #[arg(long)]
        method: Option<String>,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rows n, D(n), S_n, A_(n+1), ⌊(n+1)!/e⌋ for n = 0..=MAX_N.
    Table {
        max_n: u32,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one identity checker, or `all`.
    Verify {
        identity: String,
        /// First case of the range (defaults per identity and profile)
        #[arg(long)]
        min: Option<u32>,
        /// Last case of the range
        #[arg(long, visible_aliases = ["max-p", "max-n", "max-m"])]
        max: Option<u32>,
        /// Reduced ranges for fast CI runs
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// Full ranges (default)
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Numerical quadrature against the exact integral values.
    Quadcheck {
        #[arg(long, default_value_t = QUADCHECK_MAX)]
        max_n: u32,
        /// Relative tolerance, measured against max(1, |reference|)
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::CapExceeded { .. } => CliError::Usage(e.to_string()),
            Error::PrecisionExhausted { .. } => {
                CliError::Failure(format!("{e} (raise it with {PRECISION_CAP_ENV})"))
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// Output lines plus whether every check passed.
struct Rendered {
    lines: Vec<String>,
    pass: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if let Err(msg) = apply_precision_env() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    let output = match &cli.command {
        Command::Compute { output, .. }
        | Command::Table { output, .. }
        | Command::Verify { output, .. }
        | Command::Quadcheck { output, .. } => output.clone(),
    };
    let result = match cli.command {
        Command::Compute {
            kind,
            value,
            method,
            format,
            ..
        } => cmd_compute(kind, value, method.as_deref(), format),
        Command::Table { max_n, format, .. } => cmd_table(max_n, format),
        Command::Verify {
            identity,
            min,
            max,
            quick,
            format,
            ..
        } => {
            let profile = if quick { Profile::Quick } else { Profile::Full };
            cmd_verify(&identity, min, max, profile, format)
        }
        Command::Quadcheck {
            max_n, tol, format, ..
        } => cmd_quadcheck(max_n, tol, format),
    };
    match result {
        Ok(rendered) => {
            if let Err(e) = emit(&rendered.lines, output.as_ref(), out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILURE;
            }
            if rendered.pass {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn apply_precision_env() -> Result<(), String> {
    match std::env::var(PRECISION_CAP_ENV) {
        Ok(v) => {
            let cap: usize = v.trim().parse().map_err(|_| {
                format!("{PRECISION_CAP_ENV} must be a positive integer, got {v:?}")
            })?;
            if cap == 0 {
                return Err(format!("{PRECISION_CAP_ENV} must be positive"));
            }
            set_precision_cap(cap);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn emit(lines: &[String], output: Option<&PathBuf>, out: &mut dyn Write) -> std::io::Result<()> {
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    match output {
        Some(path) => std::fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn records_to_lines(records: &[OutputRecord], format: Format, header: bool) -> Vec<String> {
    let mut lines = Vec::with_capacity(records.len() + 1);
    match format {
        Format::JsonLines => lines.extend(records.iter().map(OutputRecord::json_line)),
        Format::Csv => {
            if let Some(first) = records.first() {
                lines.push(first.csv_header());
            }
            lines.extend(records.iter().map(OutputRecord::csv_row));
        }
        Format::Plain => {
            if header {
                if let Some(first) = records.first() {
                    lines.push(first.plain_header());
                }
            }
            lines.extend(records.iter().map(OutputRecord::plain_row));
        }
    }
    lines
}

fn check_max(value: u32, max: u32, what: &str) -> Result<(), CliError> {
    if value > max {
        return Err(CliError::Usage(format!(
            "{what} must be at most {max}, got {value}"
        )));
    }
    Ok(())
}

fn bad_method(kind: &str, method: &str, allowed: &str) -> CliError {
    CliError::Usage(format!(
        "unknown method {method:?} for {kind}; expected one of {allowed}"
    ))
}

fn compute_value(
    kind: Kind,
    n: u32,
    method: Option<&str>,
) -> Result<(&'static str, Integer), CliError> {
    Ok(match kind {
        Kind::Derangement => {
            let method = method.unwrap_or("table");
            let value = match method {
                "table" => derangement::derangements(n),
                "brute" => brute_derangement_count(n as usize)?,
                other => {
                    let m = Method::ALL_FORMULAS
                        .into_iter()
                        .find(|m| m.name() == other)
                        .ok_or_else(|| {
                            bad_method(
                                "derangement",
                                other,
                                "table, sum, pair, signed, floor, nearest, brute",
                            )
                        })?;
                    m.derangements(n)?
                }
            };
            (static_name(method), value)
        }
        Kind::Sum => match method.unwrap_or("table") {
            "table" => ("table", derangement::sum_rule_lhs(n)),
            "floor" => ("floor", derangement::sum_rule_rhs(n)?),
            "brute" => ("brute", brute_sum_rule(n as usize)?),
            other => return Err(bad_method("sum", other, "table, floor, brute")),
        },
        Kind::Floor => match method.unwrap_or("enclosure") {
            "enclosure" => ("enclosure", el_floor(&ELaurent::int_over_e(factorial(n)))?),
            other => return Err(bad_method("floor", other, "enclosure")),
        },
        Kind::A => match method.unwrap_or("recurrence") {
            "recurrence" => ("recurrence", derangement::a_recurrence(n)?),
            "closed" => ("closed", derangement::a_closed_form(n)?),
            "floor" => ("floor", derangement::a_floor_formula(n)?),
            other => return Err(bad_method("a", other, "recurrence, closed, floor")),
        },
    })
}

fn static_name(method: &str) -> &'static str {
    match method {
        "table" => "table",
        "brute" => "brute",
        other => Method::ALL_FORMULAS
            .into_iter()
            .find(|m| m.name() == other)
            .map(Method::name)
            .unwrap_or("unknown"),
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Derangement => "derangement",
        Kind::Sum => "sum",
        Kind::Floor => "floor",
        Kind::A => "a",
    }
}

fn cmd_compute(
    kind: Kind,
    n: u32,
    method: Option<&str>,
    format: Format,
) -> Result<Rendered, CliError> {
    check_max(n, COMPUTE_MAX, "argument")?;
    let (method, value) = compute_value(kind, n, method)?;
    let lines = match format {
        Format::Plain => vec![value.to_string()],
        _ => {
            let record = OutputRecord::new()
                .with("kind", Field::Text(kind_name(kind).into()))
                .with("n", Field::Small(u64::from(n)))
                .with("method", Field::Text(method.into()))
                .with("value", Field::Int(value));
            records_to_lines(&[record], format, true)
        }
    };
    Ok(Rendered { lines, pass: true })
}

/// Table rows; the last element lists rows whose columns disagree.
pub fn table_records(max_n: u32) -> Result<(Vec<OutputRecord>, Vec<u32>), Error> {
    let mut rows = Vec::with_capacity(max_n as usize + 1);
    let mut inconsistent = Vec::new();
    let mut partial_sum = Integer::from(0);
    // A_1
    let mut a_next = Integer::from(0);
    for n in 0..=max_n {
        let d = derangement::derangements(n);
        partial_sum += &d * n;
        if n > 0 {
            let big_n = n + 1;
            a_next = a_next * big_n + if big_n % 2 == 1 { big_n - 1 } else { 0 };
        }
        let floor = derangement::sum_rule_rhs(n)?;
        let parity = derangement::derangements(n + 1) - Integer::from(n % 2);
        if partial_sum != floor || a_next != floor || parity != floor {
            inconsistent.push(n);
        }
        rows.push(
            OutputRecord::new()
                .with("n", Field::Small(u64::from(n)))
                .with("derangements", Field::Int(d))
                .with("partial_sum", Field::Int(partial_sum.clone()))
                .with("a_next", Field::Int(a_next.clone()))
                .with("floor_factorial_over_e", Field::Int(floor)),
        );
    }
    Ok((rows, inconsistent))
}

fn cmd_table(max_n: u32, format: Format) -> Result<Rendered, CliError> {
    check_max(max_n, TABLE_MAX, "max_n")?;
    let (rows, inconsistent) = table_records(max_n)?;
    if !inconsistent.is_empty() {
        return Err(CliError::Failure(format!(
            "inconsistent rows at n = {inconsistent:?}"
        )));
    }
    Ok(Rendered {
        lines: records_to_lines(&rows, format, true),
        pass: true,
    })
}

pub fn report_json(r: &VerificationReport) -> serde_json::Value {
    json!({
        "identity_id": r.identity_id,
        "range": [r.range.start(), r.range.end()],
        "cases_checked": r.cases_checked,
        "pass": r.pass(),
        "failures": r.failures.iter().map(|f| json!({
            "input": f.input,
            "lhs": f.lhs,
            "rhs": f.rhs,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_verify(
    identity: &str,
    min: Option<u32>,
    max: Option<u32>,
    profile: Profile,
    format: Format,
) -> Result<Rendered, CliError> {
    if format == Format::Csv {
        return Err(CliError::Usage(
            "verify supports --format plain or json-lines".into(),
        ));
    }
    let identities: Vec<Identity> = if identity == "all" {
        if min.is_some() || max.is_some() {
            return Err(CliError::Usage(
                "--min/--max cannot be combined with `all`".into(),
            ));
        }
        Identity::SUITE.to_vec()
    } else {
        vec![Identity::from_name(identity).ok_or_else(|| {
            let names: Vec<_> = Identity::SUITE.iter().map(|i| i.name()).collect();
            CliError::Usage(format!(
                "unknown identity {identity:?}; expected all, {}, a-closed-form",
                names.join(", ")
            ))
        })?]
    };
    let mut lines = Vec::new();
    let mut passed = 0;
    for id in &identities {
        let default = id.default_range(profile);
        let range = min.unwrap_or(*default.start())..=max.unwrap_or(*default.end());
        let report = id.run(range)?;
        if report.pass() {
            passed += 1;
        }
        match format {
            Format::JsonLines => lines.push(report_json(&report).to_string()),
            _ => lines.extend(report.to_string().lines().map(str::to_string)),
        }
    }
    if format == Format::Plain {
        lines.push(format!(
            "{passed} of {} identities passed",
            identities.len()
        ));
    }
    Ok(Rendered {
        lines,
        pass: passed == identities.len(),
    })
}

/// Quadrature rows for n = 0..=max_n: the integrals over [-1, 0], [0, ∞)
/// and [-1, ∞) against their exact values.
pub fn quadcheck_records(max_n: u32, tol: f64) -> Result<(Vec<OutputRecord>, bool), Error> {
    let quad_tol = (tol * 1e-2).max(MIN_TOLERANCE);
    let integrals = symbolic_i_upto(max_n);
    let mut rows = Vec::new();
    let mut all_pass = true;
    for n in 0..=max_n {
        let n_fact = factorial(n);
        let whole = &integrals[n as usize];
        let finite_ref = el_to_f64(&(whole - &ELaurent::from_integer(n_fact.clone())));
        let finite = integrate_exp_monomial(n, -1.0, 0.0, quad_tol)?;
        let tail = integrate_tail(n, quad_tol)?;
        let checks = [
            ("[-1,0]", finite.value, finite_ref),
            (
                "[0,inf)",
                tail.value,
                el_to_f64(&ELaurent::from_integer(n_fact)),
            ),
            ("[-1,inf)", finite.value + tail.value, el_to_f64(whole)),
        ];
        for (interval, value, reference) in checks {
            let rel = (value - reference).abs() / reference.abs().max(1.0);
            let pass = rel <= tol;
            all_pass &= pass;
            rows.push(
                OutputRecord::new()
                    .with("n", Field::Small(u64::from(n)))
                    .with("interval", Field::Text(interval.into()))
                    .with("value", Field::Float(value))
                    .with("reference", Field::Float(reference))
                    .with("rel_error", Field::Float(rel))
                    .with("pass", Field::Bool(pass)),
            );
        }
    }
    Ok((rows, all_pass))
}

fn cmd_quadcheck(max_n: u32, tol: f64, format: Format) -> Result<Rendered, CliError> {
    check_max(max_n, QUADCHECK_MAX, "max_n")?;
    if !(tol.is_finite() && tol >= MIN_TOLERANCE) {
        return Err(CliError::Usage(format!(
            "--tol must be at least {MIN_TOLERANCE:e}"
        )));
    }
    let (rows, pass) = quadcheck_records(max_n, tol)?;
    let mut lines = records_to_lines(&rows, format, true);
    if format == Format::Plain {
        lines.push(if pass {
            "all within tolerance".into()
        } else {
            "tolerance exceeded".into()
        });
    }
    Ok(Rendered { lines, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("derange").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn compute_examples() {
        assert_eq!(
            run_args(&["compute", "derangement", "5"]),
            (0, "44\n".into(), String::new())
        );
        assert_eq!(run_args(&["compute", "sum", "2"]).1, "2\n");
        assert_eq!(run_args(&["compute", "floor", "5"]).1, "44\n");
        assert_eq!(run_args(&["compute", "a", "5"]).1, "44\n");
    }

    #[test]
    fn compute_every_method() {
        for m in [
            "table", "sum", "pair", "signed", "floor", "nearest", "brute",
        ] {
            let (code, out, _) = run_args(&["compute", "derangement", "7", "--method", m]);
            assert_eq!((code, out.as_str()), (0, "1854\n"), "{m}");
        }
        assert_eq!(
            run_args(&["compute", "a", "4", "--method", "closed"]).1,
            "9\n"
        );
        assert_eq!(
            run_args(&["compute", "a", "4", "--method", "floor"]).1,
            "8\n"
        );
        assert_eq!(
            run_args(&["compute", "sum", "5", "--method", "brute"]).1,
            "264\n"
        );
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(
            run_args(&["compute", "derangement", "5", "--method", "bogus"]).0,
            2
        );
        assert_eq!(
            run_args(&["compute", "derangement", "0", "--method", "nearest"]).0,
            2
        );
        assert_eq!(
            run_args(&["compute", "derangement", "13", "--method", "brute"]).0,
            2
        );
        assert_eq!(run_args(&["compute", "a", "0"]).0, 2);
        assert_eq!(run_args(&["compute", "nonsense", "1"]).0, 2);
        assert_eq!(run_args(&["table", "501"]).0, 2);
        assert_eq!(run_args(&["verify", "nope"]).0, 2);
        assert_eq!(run_args(&["verify", "all", "--max", "3"]).0, 2);
        assert_eq!(run_args(&["verify", "has1", "--max", "501"]).0, 2);
        assert_eq!(run_args(&["verify", "theorem1", "--format", "csv"]).0, 2);
        assert_eq!(run_args(&["quadcheck", "--max-n", "13"]).0, 2);
        assert_eq!(run_args(&["quadcheck", "--tol", "0"]).0, 2);
        assert_eq!(run_args(&[]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }

    #[test]
    fn compute_json_record() {
        let (code, out, _) = run_args(&["compute", "derangement", "30", "--format", "json-lines"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "{\"kind\":\"derangement\",\"n\":30,\"method\":\"table\",\"value\":\"97581073836835777732377428235481\"}\n"
        );
    }

    #[test]
    fn table_rows_are_consistent() {
        let (rows, bad) = table_records(60).unwrap();
        assert!(bad.is_empty());
        assert_eq!(rows.len(), 61);
        assert_eq!(rows[2].plain_row(), "2 1 2 2 2");
    }

    #[test]
    fn failing_identity_exits_1() {
        let (code, out, _) = run_args(&["verify", "has1", "--min", "0", "--max", "3"]);
        assert_eq!(code, 1);
        assert!(out.contains("n=0: lhs = 1*e, rhs = 0"), "{out}");
        assert_eq!(run_args(&["verify", "a-closed-form", "--max", "4"]).0, 1);
    }
}
