//! Serialized report shapes. All numbers travel as decimal strings.

use serde::Serialize;

use crate::bigreal::BigReal;
use crate::gamma_extractor::GammaEstimate;
use crate::pole_limits::{FormulaId, LaurentExpansion, VerificationReport};

/// Exact decimal for values with a short binary expansion (nodes, x0),
/// scientific notation with `sig` digits otherwise.
pub fn exact_or_sci(v: &BigReal, sig: usize) -> String {
    let r = v.to_rational_exact();
    let twos = r.denom().trailing_zeros().unwrap_or(0) as usize;
    if r.denom().bits() as usize == twos + 1 && twos <= 64 && r.numer().bits() <= 128 {
        let s = v.to_fixed(twos);
        if s.contains('.') {
            return s.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        return s;
    }
    v.to_sci(sig)
}

pub fn sci(v: &BigReal, sig: usize) -> String {
    v.to_sci(sig)
}

#[derive(Debug, Serialize)]
pub struct SampleRecord {
    pub x: String,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyRecord {
    pub formula: String,
    pub n: Option<u32>,
    pub x0: String,
    pub nodes: usize,
    pub samples: Vec<SampleRecord>,
    pub extrapolated: String,
    pub target: String,
    pub abs_error: String,
    pub digits_matched: u32,
    pub empirical_order: String,
    pub status: &'static str,
}

pub const UNDEFINED_ORDER: &str = "undefined";

impl VerifyRecord {
    pub fn new(r: &VerificationReport) -> Self {
        let sig = r.context.working_digits() as usize;
        VerifyRecord {
            formula: r.formula.name().to_string(),
            n: r.formula.index(),
            x0: exact_or_sci(&r.x0, sig),
            nodes: r.samples.len(),
            samples: r
                .samples
                .iter()
                .map(|s| SampleRecord { x: exact_or_sci(&s.argument, sig), value: sci(&s.value, sig) })
                .collect(),
            extrapolated: sci(&r.extrapolated, sig),
            target: sci(&r.target, sig),
            abs_error: sci(&r.abs_error, 6),
            digits_matched: r.digits_matched,
            empirical_order: r.empirical_order.as_ref().map_or(UNDEFINED_ORDER.to_string(), |p| p.to_sci(6)),
            status: r.status.as_str(),
        }
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "formula",
        "n",
        "x0",
        "nodes",
        "extrapolated",
        "target",
        "abs_error",
        "digits_matched",
        "empirical_order",
        "status",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.formula.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            self.x0.clone(),
            self.nodes.to_string(),
            self.extrapolated.clone(),
            self.target.clone(),
            self.abs_error.clone(),
            self.digits_matched.to_string(),
            self.empirical_order.clone(),
            self.status.to_string(),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct ExtractRecord {
    pub formula: String,
    pub n: Option<u32>,
    pub x0: String,
    pub nodes_used: usize,
    pub value: String,
    pub error_estimate: String,
    pub digits_vs_reference: u32,
    pub status: &'static str,
}

impl ExtractRecord {
    pub fn new(e: &GammaEstimate, x0: &BigReal, sig: usize, pass: bool) -> Self {
        ExtractRecord {
            formula: e.formula.name().to_string(),
            n: e.formula.index(),
            x0: exact_or_sci(x0, sig),
            nodes_used: e.nodes_used,
            value: sci(&e.value, sig),
            error_estimate: sci(&e.error_estimate, 6),
            digits_vs_reference: e.digits_vs_reference,
            status: if pass { "pass" } else { "fail" },
        }
    }

    pub const CSV_HEADER: [&'static str; 8] =
        ["formula", "n", "x0", "nodes_used", "value", "error_estimate", "digits_vs_reference", "status"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.formula.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            self.x0.clone(),
            self.nodes_used.to_string(),
            self.value.clone(),
            self.error_estimate.clone(),
            self.digits_vs_reference.to_string(),
            self.status.to_string(),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct CoefficientRecord {
    pub power: i64,
    pub value: String,
    pub error_estimate: String,
}

#[derive(Debug, Serialize)]
pub struct LaurentRecord {
    pub pole: u32,
    pub x0: String,
    pub coefficients: Vec<CoefficientRecord>,
    pub condition_estimate: String,
    pub expected_residue: String,
    pub expected_constant: String,
    pub status: &'static str,
}

impl LaurentRecord {
    pub fn new(e: &LaurentExpansion, residue: &BigReal, constant: &BigReal, sig: usize, pass: bool) -> Self {
        LaurentRecord {
            pole: e.pole,
            x0: exact_or_sci(&e.x0, sig),
            coefficients: e
                .coefficients
                .iter()
                .zip(&e.error_estimates)
                .enumerate()
                .map(|(j, (c, err))| CoefficientRecord {
                    power: j as i64 - 1,
                    value: sci(c, sig),
                    error_estimate: sci(err, 6),
                })
                .collect(),
            condition_estimate: sci(&e.condition_estimate, 6),
            expected_residue: sci(residue, sig),
            expected_constant: sci(constant, sig),
            status: if pass { "pass" } else { "fail" },
        }
    }

    pub const CSV_HEADER: [&'static str; 6] = ["pole", "x0", "power", "value", "error_estimate", "status"];

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.coefficients
            .iter()
            .map(|c| {
                vec![
                    self.pole.to_string(),
                    self.x0.clone(),
                    c.power.to_string(),
                    c.value.clone(),
                    c.error_estimate.clone(),
                    self.status.to_string(),
                ]
            })
            .collect()
    }
}

#[derive(Debug, Serialize)]
pub struct GammaEvalRecord {
    pub z: String,
    pub gamma: String,
    pub claimed_relative_error: String,
    pub log_gamma: Option<String>,
    pub digamma: String,
    pub status: &'static str,
}

impl GammaEvalRecord {
    pub const CSV_HEADER: [&'static str; 6] = ["z", "gamma", "claimed_relative_error", "log_gamma", "digamma", "status"];

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.z.clone(),
            self.gamma.clone(),
            self.claimed_relative_error.clone(),
            self.log_gamma.clone().unwrap_or_default(),
            self.digamma.clone(),
            self.status.to_string(),
        ]
    }
}

/// A batch item that could not be evaluated (pole, domain or precision
/// failure). It takes the place of the normal record in the output.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub formula: Option<String>,
    pub n: Option<u32>,
    pub error: String,
    pub status: &'static str,
}

impl ErrorRecord {
    pub fn for_formula(f: FormulaId, err: impl ToString) -> Self {
        ErrorRecord { formula: Some(f.name().to_string()), n: f.index(), error: err.to_string(), status: "fail" }
    }

    pub fn bare(err: impl ToString) -> Self {
        ErrorRecord { formula: None, n: None, error: err.to_string(), status: "fail" }
    }

    /// Pads to `width` columns: formula, n, then the message in the next
    /// column, empty fields, and `fail` last.
    pub fn csv_row(&self, width: usize) -> Vec<String> {
        let mut row = vec![String::new(); width];
        row[0] = self.formula.clone().unwrap_or_default();
        if width > 2 {
            row[1] = self.n.map(|n| n.to_string()).unwrap_or_default();
            row[2] = format!("error: {}", self.error);
        }
        row[width - 1] = "fail".into();
        row
    }
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SelftestSummary {
    pub target_digits: u32,
    pub working_digits: u32,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    pub status: &'static str,
}
