//! Command-line front end. Reports are assembled in input order and
//! rendered with fixed digit counts, so identical invocations produce
//! identical bytes.

mod args;
mod records;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

pub use args::{parse_binary_fraction, parse_formulas, parse_index_range, Cli, Command, Format, Output};
pub use records::{ErrorRecord, ExtractRecord, GammaEvalRecord, LaurentRecord, VerifyRecord};

use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::gamma_engine::{digamma, gamma, log_gamma};
use crate::gamma_extractor::{definition_gamma, extract_gamma, REFERENCE_DIGITS};
use crate::numerics::{make_context, PrecisionContext};
use crate::pole_limits::{laurent_of_gamma_from, residue, target_value, verify_formula, FormulaId, Status};
use records::{CheckRecord, SelftestSummary};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Rendered report plus the process outcome.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    /// Diagnostics meant for standard error.
    pub messages: Vec<String>,
}

impl Outcome {
    fn usage(err: LabError) -> Self {
        Outcome { code: EXIT_USAGE, report: String::new(), messages: vec![err.to_string()] }
    }
}

enum Row<T> {
    Ok(T),
    Err(ErrorRecord),
}

impl<T: Serialize> Serialize for Row<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Row::Ok(r) => r.serialize(s),
            Row::Err(e) => e.serialize(s),
        }
    }
}

fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn render_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn context(out: &Output) -> Result<PrecisionContext> {
    make_context(out.target_digits, out.guard_digits)
}

fn exit_code(all_pass: bool) -> i32 {
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn verify(a: &args::FormulaArgs) -> Result<Outcome> {
    let ctx = context(&a.output)?;
    let formulas = parse_formulas(&a.formula, a.n.as_deref())?;
    let x0 = parse_binary_fraction(&a.x0, ctx.bits())?;
    let gamma_ref = definition_gamma(&ctx.escalate(10));
    let results: Vec<Result<_>> =
        formulas.par_iter().map(|&f| verify_formula(f, &x0, a.nodes, &ctx, &gamma_ref)).collect();

    let mut messages = Vec::new();
    let mut all_pass = true;
    let rows: Vec<Row<VerifyRecord>> = formulas
        .iter()
        .zip(results)
        .map(|(&f, r)| match r {
            Ok(rep) => {
                all_pass &= rep.status == Status::Pass;
                messages.extend(rep.diagnostics.iter().map(|d| format!("{f}: {d}")));
                Row::Ok(VerifyRecord::new(&rep))
            }
            Err(e) => {
                all_pass = false;
                Row::Err(ErrorRecord::for_formula(f, e))
            }
        })
        .collect();
    let report = match a.output.format {
        Format::Json => render_json(&rows),
        Format::Csv => render_csv(
            &VerifyRecord::CSV_HEADER,
            rows.iter().map(|r| match r {
                Row::Ok(v) => v.csv_row(),
                Row::Err(e) => e.csv_row(VerifyRecord::CSV_HEADER.len()),
            }),
        ),
    };
    Ok(Outcome { code: exit_code(all_pass), report, messages })
}

fn extract(a: &args::FormulaArgs) -> Result<Outcome> {
    let ctx = context(&a.output)?;
    let formulas = parse_formulas(&a.formula, a.n.as_deref())?;
    let x0 = parse_binary_fraction(&a.x0, ctx.bits())?;
    let want = REFERENCE_DIGITS.min(ctx.target_digits().saturating_sub(2));
    let sig = ctx.working_digits() as usize;
    let results: Vec<Result<_>> = formulas.par_iter().map(|&f| extract_gamma(f, &x0, a.nodes, &ctx)).collect();

    let mut all_pass = true;
    let rows: Vec<Row<ExtractRecord>> = formulas
        .iter()
        .zip(results)
        .map(|(&f, r)| match r {
            Ok(e) => {
                let pass = e.digits_vs_reference >= want;
                all_pass &= pass;
                Row::Ok(ExtractRecord::new(&e, &x0, sig, pass))
            }
            Err(e) => {
                all_pass = false;
                Row::Err(ErrorRecord::for_formula(f, e))
            }
        })
        .collect();
    let report = match a.output.format {
        Format::Json => render_json(&rows),
        Format::Csv => render_csv(
            &ExtractRecord::CSV_HEADER,
            rows.iter().map(|r| match r {
                Row::Ok(v) => v.csv_row(),
                Row::Err(e) => e.csv_row(ExtractRecord::CSV_HEADER.len()),
            }),
        ),
    };
    Ok(Outcome { code: exit_code(all_pass), report, messages: Vec::new() })
}

fn laurent(a: &args::LaurentArgs) -> Result<Outcome> {
    let ctx = context(&a.output)?;
    let poles = parse_index_range(&a.n)?;
    let x0 = parse_binary_fraction(&a.x0, ctx.bits())?;
    let gamma_ref = definition_gamma(&ctx.escalate(10));
    let sig = ctx.working_digits() as usize;
    let results: Vec<Result<_>> = poles.par_iter().map(|&n| laurent_of_gamma_from(n, &x0, &ctx, a.coeffs)).collect();

    let mut all_pass = true;
    let rows: Vec<Row<LaurentRecord>> = poles
        .iter()
        .zip(results)
        .map(|(&n, r)| match r {
            Ok(e) => {
                let res = BigReal::from_rational(&residue(n), ctx.bits());
                let c0 = target_value(FormulaId::Heart(n), &gamma_ref, &ctx);
                let pass = (&e.coefficients[0] - &res).abs() <= e.error_estimates[0]
                    && (&e.coefficients[1] - &c0).abs() <= e.error_estimates[1];
                all_pass &= pass;
                Row::Ok(LaurentRecord::new(&e, &res, &c0, sig, pass))
            }
            Err(e) => {
                all_pass = false;
                Row::Err(ErrorRecord { formula: None, n: Some(n), error: e.to_string(), status: "fail" })
            }
        })
        .collect();
    let report = match a.output.format {
        Format::Json => render_json(&rows),
        Format::Csv => render_csv(
            &LaurentRecord::CSV_HEADER,
            rows.iter().flat_map(|r| match r {
                Row::Ok(v) => v.csv_rows(),
                Row::Err(e) => vec![e.csv_row(LaurentRecord::CSV_HEADER.len())],
            }),
        ),
    };
    Ok(Outcome { code: exit_code(all_pass), report, messages: Vec::new() })
}

fn gamma_eval(a: &args::GammaEvalArgs) -> Result<Outcome> {
    let ctx = context(&a.output)?;
    let z = BigReal::parse_decimal(&a.z, ctx.bits())?;
    let sig = ctx.target_digits() as usize;
    let row = match gamma(&z, &ctx).and_then(|g| Ok((g, digamma(&z, &ctx)?))) {
        Ok((g, psi)) => Row::Ok(GammaEvalRecord {
            z: a.z.trim().to_string(),
            gamma: g.value.to_sci(sig),
            claimed_relative_error: g.claimed_relative_error.to_sci(3),
            log_gamma: if z.is_positive() { Some(log_gamma(&z, &ctx)?.to_sci(sig)) } else { None },
            digamma: psi.to_sci(sig),
            status: "pass",
        }),
        Err(e @ (LabError::Pole { .. } | LabError::Domain(_) | LabError::Precision(_))) => {
            Row::Err(ErrorRecord::bare(e))
        }
        Err(e) => return Err(e),
    };
    let code = exit_code(matches!(row, Row::Ok(_)));
    let report = match a.output.format {
        Format::Json => render_json(&row),
        Format::Csv => render_csv(
            &GammaEvalRecord::CSV_HEADER,
            std::iter::once(match &row {
                Row::Ok(v) => v.csv_row(),
                Row::Err(e) => e.csv_row(GammaEvalRecord::CSV_HEADER.len()),
            }),
        ),
    };
    Ok(Outcome { code, report, messages: Vec::new() })
}

fn selftest_cmd(out: &Output) -> Result<Outcome> {
    let ctx = context(out)?;
    let outcomes = selftest::run_suite(&ctx);
    let checks: Vec<CheckRecord> = outcomes
        .iter()
        .map(|o| CheckRecord {
            name: o.name.to_string(),
            status: if o.passed { "pass" } else { "fail" },
            detail: o.detail.clone(),
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let failed = outcomes.len() - passed;
    let report = match out.format {
        Format::Json => render_json(&SelftestSummary {
            target_digits: ctx.target_digits(),
            working_digits: ctx.working_digits(),
            checks,
            passed,
            failed,
            status: if failed == 0 { "pass" } else { "fail" },
        }),
        Format::Csv => render_csv(
            &["name", "status", "detail"],
            checks.iter().map(|c| vec![c.name.clone(), c.status.to_string(), c.detail.clone()]),
        ),
    };
    Ok(Outcome { code: exit_code(failed == 0), report, messages: Vec::new() })
}

/// Executes a parsed command. Bad arguments yield [`EXIT_USAGE`].
pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Extract(a) => extract(a),
        Command::Laurent(a) => laurent(a),
        Command::GammaEval(a) => gamma_eval(a),
        Command::Selftest(o) => selftest_cmd(o),
    };
    result.unwrap_or_else(Outcome::usage)
}

fn output_of(cli: &Cli) -> &Output {
    match &cli.command {
        Command::Verify(a) | Command::Extract(a) => &a.output,
        Command::Laurent(a) => &a.output,
        Command::GammaEval(a) => &a.output,
        Command::Selftest(o) => o,
    }
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = run(&cli);
    for m in &outcome.messages {
        eprintln!("{m}");
    }
    let written = match &output_of(&cli).out {
        Some(path) => std::fs::write(path, &outcome.report).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(outcome.report.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return EXIT_USAGE;
    }
    outcome.code
}
