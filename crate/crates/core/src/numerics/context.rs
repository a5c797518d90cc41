use serde::Serialize;

use crate::bigreal::{bits_for_digits, BigReal};
use crate::error::{LabError, Result};

pub const DEFAULT_GUARD_DIGITS: u32 = 10;

/// Decimal digit budget for a computation.
///
/// `working_digits` is what arithmetic actually carries; it always covers
/// `target_digits + guard_digits` and grows when a step escalates precision
/// to absorb cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    working_digits: u32,
}

/// Builds a context with `working_digits = target_digits + guard_digits`.
pub fn make_context(target_digits: u32, guard_digits: u32) -> Result<PrecisionContext> {
    if target_digits == 0 || guard_digits == 0 {
        return Err(LabError::Input(format!(
            "target and guard digits must be positive (got {target_digits}, {guard_digits})"
        )));
    }
    Ok(PrecisionContext {
        target_digits,
        guard_digits,
        working_digits: target_digits + guard_digits,
    })
}

impl PrecisionContext {
    pub fn new(target_digits: u32, guard_digits: u32) -> Result<Self> {
        make_context(target_digits, guard_digits)
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    /// Binary precision matching `working_digits`.
    pub fn bits(&self) -> usize {
        bits_for_digits(self.working_digits)
    }

    /// Same context with `extra` more working digits.
    pub fn escalate(&self, extra: u32) -> Self {
        PrecisionContext { working_digits: self.working_digits + extra, ..*self }
    }

    /// Context for evaluating a cancelling expression at step `x`: adds
    /// `ceil(log10(1/|x|))` working digits when `|x| < 1`.
    pub fn for_step(&self, x: &BigReal) -> Self {
        self.escalate(cancellation_digits(x))
    }

    /// `10^(-working_digits)` at this context's precision.
    pub fn epsilon(&self) -> BigReal {
        self.pow10(-(self.working_digits as i64))
    }

    /// `10^k` rounded to this context's precision.
    pub fn pow10(&self, k: i64) -> BigReal {
        let p = self.bits();
        let ten = BigReal::from_i64(10, p);
        let m = ten.powi(k.unsigned_abs() as usize);
        if k >= 0 {
            m
        } else {
            m.recip()
        }
    }

    pub fn int(&self, v: i64) -> BigReal {
        BigReal::from_i64(v, self.bits())
    }
}

/// Upper bound on decimal digits lost when subtracting terms of size `1/|x|`
/// to get an O(1) result.
pub(crate) fn cancellation_digits(x: &BigReal) -> u32 {
    match x.exponent() {
        // |x| >= 2^(e-1), so log10(1/|x|) <= (1-e)·log10(2)
        Some(e) if e < 1 => ((1 - e) as f64 * std::f64::consts::LOG10_2).ceil() as u32,
        _ => 0,
    }
}
