//! The bracketed expressions whose limits encode γ, and their closed-form
//! right-hand sides as exact affine maps of γ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::formula::{selector, FormulaId};
use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::gamma_engine::gamma_near_pole;
use crate::harmonic::{factorial, harmonic};
use crate::numerics::{matched_digits, PrecisionContext};

fn sign(n: u32) -> i64 {
    // (-1)^(n+1)
    if n.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// The step h governing cancellation and extrapolation: x itself, or 1/X
/// for the large-argument form.
pub fn step_of(formula: FormulaId, x: &BigReal) -> BigReal {
    match formula {
        FormulaId::Demys => x.recip(),
        _ => x.clone(),
    }
}

fn check_argument(formula: FormulaId, x: &BigReal) -> Result<()> {
    formula.validate()?;
    let p = x.prec();
    match formula {
        FormulaId::Demys => {
            if *x < BigReal::from_i64(4, p) {
                return Err(LabError::Domain(format!("demys needs X >= 4, got {x:.12}")));
            }
        }
        _ => {
            if x.is_zero() {
                return Err(LabError::Pole { pole: -(formula.index().unwrap_or(0) as i64) });
            }
            if x.abs() >= BigReal::pow2(-1, p) {
                return Err(LabError::Domain(format!("{formula} needs 0 < |x| < 1/2, got {x:.12}")));
            }
        }
    }
    Ok(())
}

/// Value of the bracketed expression of `formula` at `x` (at `X` for demys).
///
/// Runs at `ctx.for_step(h)` working digits, h the step, and returns the
/// value at that escalated precision.
pub fn evaluate_expr(formula: FormulaId, x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    check_argument(formula, x)?;
    let ectx = ctx.for_step(&step_of(formula, x));
    let p = ectx.bits();
    let x = x.with_prec(p);
    let one = BigReal::one(p);
    let value = match formula {
        FormulaId::Demys => {
            let h = x.recip();
            &x - gamma_near_pole(0, &h, &ectx)?
        }
        FormulaId::Clubsuit => x.recip() - gamma_near_pole(0, &x, &ectx)?,
        FormulaId::Heart(n) => {
            let nf = BigReal::from_bigint(&BigInt::from(factorial(n as u64)), p);
            let pole = BigReal::from_i64(sign(n), p) / (nf * &x);
            pole + gamma_near_pole(n, &x, &ectx)?
        }
        FormulaId::Spade(n) => {
            let inv = x.recip();
            let num = &inv - gamma_near_pole(n, &x, &ectx)?;
            let den = -&one - &x * gamma_near_pole(n, &-&x, &ectx)?;
            inv + num / den
        }
        FormulaId::Diamond => {
            let num = x.recip() - gamma_near_pole(0, &x, &ectx)?;
            let den = -&one + &x * gamma_near_pole(0, &-&x, &ectx)?;
            num / den
        }
        FormulaId::Unified(n) => {
            let s = selector(n);
            let chi = BigReal::from_i64(s.chi as i64, p);
            let flip = BigReal::from_i64(if s.delta == 1 { -1 } else { 1 }, p);
            let inv = x.recip();
            let num = &inv - gamma_near_pole(n, &x, &ectx)?;
            let den = -&one - flip * (&x * gamma_near_pole(n, &-&x, &ectx)?);
            chi * inv + num / den
        }
    };
    Ok(value)
}

/// Right-hand side `slope·γ + offset`, with both parts exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub slope: BigRational,
    pub offset: BigRational,
}

impl ClosedForm {
    pub fn apply(&self, gamma: &BigReal, prec: usize) -> BigReal {
        let g = gamma.with_prec(prec);
        BigReal::from_rational(&self.slope, prec) * g + BigReal::from_rational(&self.offset, prec)
    }

    /// γ = (limit - offset) / slope.
    pub fn invert(&self, limit: &BigReal, prec: usize) -> BigReal {
        let inv = BigRational::one() / &self.slope;
        (limit.with_prec(prec) - BigReal::from_rational(&self.offset, prec)) * BigReal::from_rational(&inv, prec)
    }
}

pub fn closed_form(formula: FormulaId) -> ClosedForm {
    let rat = |v: i64| BigRational::from_integer(v.into());
    let fact = |n: u32| BigRational::from_integer(BigInt::from(factorial(n as u64)));
    let (slope, n) = match formula {
        FormulaId::Demys | FormulaId::Clubsuit => return ClosedForm { slope: rat(1), offset: BigRational::zero() },
        FormulaId::Diamond => (BigRational::new((-1).into(), 2.into()), 0),
        FormulaId::Heart(n) => (rat(sign(n)) / fact(n), n),
        FormulaId::Spade(n) => (rat(sign(n)) * rat(2) / (fact(n) + rat(sign(n))), n),
        FormulaId::Unified(n) => {
            let s = selector(n);
            let base = rat(2) / (fact(n) + rat(s.chi as i64 * sign(n)));
            let base = if s.epsilon < 0 { BigRational::one() / base } else { base };
            (rat(sign(n)) * base, n)
        }
    };
    let offset = -(&slope * harmonic(n as u64).value);
    ClosedForm { slope, offset }
}

/// The limit the expression of `formula` tends to, given γ.
pub fn target_value(formula: FormulaId, gamma_ref: &BigReal, ctx: &PrecisionContext) -> BigReal {
    let p = ctx.bits().max(gamma_ref.prec());
    closed_form(formula).apply(gamma_ref, p)
}

/// Comparison of a formula's alternative form against the
/// normative expression at one point.
#[derive(Debug, Clone)]
pub struct FormAgreement {
    pub formula: FormulaId,
    pub x: BigReal,
    pub normative: BigReal,
    pub alternative: BigReal,
    pub digits: u32,
}

/// Evaluates the alternative form where one exists (spade and diamond):
///
/// - spade: (1/x)·[1 + (1/x - Γ(-n+x)) / (-1/x - Γ(-n-x))]
/// - diamond: (1 - 1/x - Γ(x)) / (x - 1/x + Γ(-x))
///
/// The spade forms are algebraically identical. The diamond form as written
/// tends to 1 rather than -γ/2, so its check is expected to disagree.
pub fn alternative_form(formula: FormulaId, x: &BigReal, ctx: &PrecisionContext) -> Result<Option<FormAgreement>> {
    let n = match formula {
        FormulaId::Spade(n) => n,
        FormulaId::Diamond => 0,
        _ => return Ok(None),
    };
    let normative = evaluate_expr(formula, x, ctx)?;
    let ectx = ctx.for_step(x);
    let p = ectx.bits();
    let xp = x.with_prec(p);
    let one = BigReal::one(p);
    let inv = xp.recip();
    let g_plus = gamma_near_pole(n, &xp, &ectx)?;
    let g_minus = gamma_near_pole(n, &-&xp, &ectx)?;
    let alternative = if n == 0 && formula == FormulaId::Diamond {
        (&one - &inv - g_plus) / (&xp - &inv + g_minus)
    } else {
        let ratio = (&inv - g_plus) / (-&inv - g_minus);
        &inv * (one + ratio)
    };
    let digits = matched_digits(&(&alternative - &normative).abs(), &normative);
    Ok(Some(FormAgreement { formula, x: x.clone(), normative, alternative, digits }))
}
