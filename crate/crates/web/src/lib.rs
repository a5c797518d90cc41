//! Browser bindings: Γ evaluation, the approach of a limit expression to its
//! closed form, and γ extraction. Every export returns a JSON string.
//!
//! The `*_json` functions hold the logic and are plain Rust, so they are
//! testable natively; the `#[wasm_bindgen]` wrappers only convert errors.

use gamma_poles::gamma_engine::{digamma, gamma, log_gamma};
use gamma_poles::gamma_extractor::{definition_gamma, extract_gamma, reference_gamma, REFERENCE_GAMMA};
use gamma_poles::numerics::{make_context, PrecisionContext, DEFAULT_GUARD_DIGITS};
use gamma_poles::pole_limits::{evaluate_expr, target_value, FormulaId};
use gamma_poles::BigReal;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_DIGITS: u32 = 200;
const MAX_POINTS: u32 = 40;
const MAX_NODES: u32 = 40;

fn context(digits: u32) -> Result<PrecisionContext, String> {
    if digits > MAX_DIGITS {
        return Err(format!("at most {MAX_DIGITS} digits"));
    }
    make_context(digits, DEFAULT_GUARD_DIGITS).map_err(|e| e.to_string())
}

fn formula(name: &str, n: Option<u32>) -> Result<FormulaId, String> {
    let name = name.trim().to_ascii_lowercase();
    let n = if FormulaId::is_indexed(&name) { Some(n.unwrap_or(0)) } else { None };
    FormulaId::from_name(&name, n).map_err(|e| e.to_string())
}

fn log10_abs(v: &BigReal) -> Value {
    if v.is_zero() {
        return Value::Null;
    }
    // mantissa and exponent separately: the value may underflow f64
    let s = v.abs().to_sci(17);
    let (m, e) = s.split_once('e').unwrap_or((&s, "0"));
    let m: f64 = m.parse().unwrap_or(f64::NAN);
    let e: f64 = e.parse().unwrap_or(0.0);
    json!(m.log10() + e)
}

pub fn gamma_eval_json(z: &str, digits: u32) -> Result<String, String> {
    let ctx = context(digits)?;
    let zv = BigReal::parse_decimal(z, ctx.bits()).map_err(|e| e.to_string())?;
    let sig = digits as usize;
    let g = gamma(&zv, &ctx).map_err(|e| e.to_string())?;
    let psi = digamma(&zv, &ctx).map_err(|e| e.to_string())?;
    let lg = if zv.is_positive() { Some(log_gamma(&zv, &ctx).map_err(|e| e.to_string())?.to_sci(sig)) } else { None };
    Ok(json!({
        "z": z.trim(),
        "gamma": g.value.to_sci(sig),
        "log_gamma": lg,
        "digamma": psi.to_sci(sig),
    })
    .to_string())
}

/// Expression values at steps 2^e, 2^(e-1), ..., with log10 of the distance
/// to the closed-form limit.
pub fn pole_curve_json(name: &str, n: Option<u32>, first_exponent: i32, count: u32, digits: u32) -> Result<String, String> {
    let f = formula(name, n)?;
    let ctx = context(digits)?;
    if count == 0 || count > MAX_POINTS {
        return Err(format!("between 1 and {MAX_POINTS} points"));
    }
    if first_exponent > -2 {
        return Err("the first step must be at most 2^-2".into());
    }
    let target = target_value(f, &definition_gamma(&ctx.escalate(10)), &ctx);
    let sig = digits as usize;
    let mut points = Vec::with_capacity(count as usize);
    for k in 0..count as i32 {
        let step = BigReal::pow2(first_exponent - k, ctx.bits());
        let arg = if f == FormulaId::Demys { step.recip() } else { step.clone() };
        let value = evaluate_expr(f, &arg, &ctx).map_err(|e| e.to_string())?;
        points.push(json!({
            "log2_step": first_exponent - k,
            "value": value.to_sci(sig),
            "log10_error": log10_abs(&(&value - &target)),
        }));
    }
    Ok(json!({ "formula": f.to_string(), "target": target.to_sci(sig), "points": points }).to_string())
}

/// γ recovered from one formula on the schedule 2^-10, 2^-11, ...
pub fn extract_json(name: &str, n: Option<u32>, nodes: u32, digits: u32) -> Result<String, String> {
    let f = formula(name, n)?;
    let ctx = context(digits)?;
    if !(2..=MAX_NODES).contains(&nodes) {
        return Err(format!("between 2 and {MAX_NODES} nodes"));
    }
    let x0 = BigReal::pow2(-10, ctx.bits());
    let e = extract_gamma(f, &x0, nodes as usize, &ctx).map_err(|e| e.to_string())?;
    let agreement = gamma_poles::gamma_extractor::digits_of_agreement(&e.value, &reference_gamma());
    Ok(json!({
        "formula": f.to_string(),
        "value": e.value.to_sci(ctx.working_digits() as usize),
        "error_estimate": e.error_estimate.to_sci(3),
        "digits_vs_reference": e.digits_vs_reference,
        "raw_agreement": agreement,
        "reference": REFERENCE_GAMMA,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn gamma_eval(z: &str, digits: u32) -> Result<String, JsError> {
    gamma_eval_json(z, digits).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pole_curve(formula: &str, n: Option<u32>, first_exponent: i32, count: u32, digits: u32) -> Result<String, JsError> {
    pole_curve_json(formula, n, first_exponent, count, digits).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn extract(formula: &str, n: Option<u32>, nodes: u32, digits: u32) -> Result<String, JsError> {
    extract_json(formula, n, nodes, digits).map_err(|e| JsError::new(&e))
}
