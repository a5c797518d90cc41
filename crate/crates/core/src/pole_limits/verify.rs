use rayon::prelude::*;

use super::expr::{alternative_form, evaluate_expr, target_value};
use super::formula::FormulaId;
use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::numerics::{empirical_order, matched_digits, richardson_extrapolate, PrecisionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// One evaluation on a schedule. `argument` is what the expression was
/// evaluated at; `step` is the quantity tending to zero (they differ only
/// for demys, where argument = 1/step).
#[derive(Debug, Clone)]
pub struct FormulaSample {
    pub step: BigReal,
    pub argument: BigReal,
    pub value: BigReal,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub formula: FormulaId,
    pub context: PrecisionContext,
    pub x0: BigReal,
    pub samples: Vec<FormulaSample>,
    pub extrapolated: BigReal,
    /// Richardson's own estimate, |T[m-1][m-1] - T[m-2][m-2]|.
    pub extrapolation_error: BigReal,
    pub target: BigReal,
    pub abs_error: BigReal,
    pub digits_matched: u32,
    /// `None` when some raw error vanished at working precision.
    pub empirical_order: Option<BigReal>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

/// Evaluates `formula` at steps `x0, x0/2, ..., x0/2^(count-1)`.
///
/// For demys `x0` is also a step: the expression is evaluated at X = 1/step,
/// so the same default schedule serves every formula. Samples are computed
/// in parallel and returned in schedule order.
pub fn sample_formula(
    formula: FormulaId,
    x0: &BigReal,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<Vec<FormulaSample>> {
    if count == 0 {
        return Err(LabError::Input("need at least one node".into()));
    }
    if formula == FormulaId::Demys && (!x0.is_positive() || *x0 > BigReal::pow2(-2, x0.prec())) {
        return Err(LabError::Domain(format!("demys steps must lie in (0, 1/4], got x0 = {x0:.12}")));
    }
    let steps: Vec<BigReal> = (0..count).map(|k| x0.ldexp(-(k as i32))).collect();
    steps
        .par_iter()
        .map(|h| {
            let argument = match formula {
                FormulaId::Demys => h.with_prec(ctx.for_step(h).bits()).recip(),
                _ => h.clone(),
            };
            let value = evaluate_expr(formula, &argument, ctx)?;
            Ok(FormulaSample { step: h.clone(), argument, value })
        })
        .collect()
}

/// Samples, extrapolates and scores `formula` against its closed form.
pub fn verify_formula(
    formula: FormulaId,
    x0: &BigReal,
    num_nodes: usize,
    ctx: &PrecisionContext,
    gamma_ref: &BigReal,
) -> Result<VerificationReport> {
    let samples = sample_formula(formula, x0, num_nodes, ctx)?;
    let pairs: Vec<(BigReal, BigReal)> = samples.iter().map(|s| (s.step.clone(), s.value.clone())).collect();
    let ratio = BigReal::from_i64(2, ctx.bits());
    let table = richardson_extrapolate(&pairs, &ratio, 1)?;

    let target = target_value(formula, gamma_ref, ctx);
    let abs_error = (&table.estimate - &target).abs();
    let digits_matched = matched_digits(&abs_error, &target);
    let mut diagnostics = Vec::new();
    let mut converging = true;

    let raw: Vec<(BigReal, BigReal)> = pairs.iter().map(|(h, v)| (h.clone(), v - &target)).collect();
    for (k, w) in raw.windows(2).enumerate() {
        if w[1].1.abs() >= w[0].1.abs() {
            converging = false;
            diagnostics.push(format!("raw error does not decrease between nodes {k} and {}", k + 1));
        }
    }
    let empirical_order = match empirical_order(&raw) {
        Ok(p) => Some(p),
        Err(e @ LabError::LimitAttained { .. }) => {
            diagnostics.push(e.to_string());
            None
        }
        Err(LabError::Input(_)) if raw.len() < 2 => None,
        Err(e) => return Err(e),
    };

    if let Some(check) = alternative_form(formula, &samples[0].argument, ctx)? {
        if check.digits + 2 < ctx.target_digits() {
            diagnostics.push(format!(
                "alternative form of {} disagrees with the normative form at x = {}: {} vs {} ({} digits)",
                formula,
                check.x.to_sci(6),
                check.alternative.to_sci(12),
                check.normative.to_sci(12),
                check.digits
            ));
        }
    }

    let status = if converging && digits_matched + 2 >= ctx.target_digits() { Status::Pass } else { Status::Fail };
    Ok(VerificationReport {
        formula,
        context: *ctx,
        x0: x0.clone(),
        samples,
        extrapolated: table.estimate,
        extrapolation_error: table.error_estimate,
        target,
        abs_error,
        digits_matched,
        empirical_order,
        status,
        diagnostics,
    })
}
