use num_bigint::BigInt;

use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::gamma_engine::gamma_near_pole;
use crate::numerics::{fit_laurent, geometric_schedule, PrecisionContext, DEFAULT_X0_EXPONENT};

/// Laurent data of Γ at the pole -n: `coefficients[0]` is c₋₁, then c₀, c₁, ...
#[derive(Debug, Clone)]
pub struct LaurentExpansion {
    pub pole: u32,
    pub x0: BigReal,
    pub coefficients: Vec<BigReal>,
    pub error_estimates: Vec<BigReal>,
    pub condition_estimate: BigReal,
}

/// c₋₁ = (-1)^n / n! exactly.
pub fn residue(n: u32) -> num_rational::BigRational {
    let f = BigInt::from(crate::harmonic::factorial(n as u64));
    let s = if n.is_multiple_of(2) { 1 } else { -1 };
    num_rational::BigRational::new(BigInt::from(s), f)
}

pub fn laurent_of_gamma(n: u32, ctx: &PrecisionContext, num_coeffs: usize) -> Result<LaurentExpansion> {
    let x0 = BigReal::pow2(DEFAULT_X0_EXPONENT, ctx.bits());
    laurent_of_gamma_from(n, &x0, ctx, num_coeffs)
}

/// Fits `num_coeffs` Laurent coefficients of Γ(-n + x) from samples at
/// `x0, x0/2, ...`, then refits on the set shifted by one node to estimate
/// the truncation error.
pub fn laurent_of_gamma_from(
    n: u32,
    x0: &BigReal,
    ctx: &PrecisionContext,
    num_coeffs: usize,
) -> Result<LaurentExpansion> {
    if num_coeffs < 2 {
        return Err(LabError::Input("a Laurent expansion needs at least c₋₁ and c₀".into()));
    }
    if x0.is_zero() || x0.abs() >= BigReal::pow2(-1, x0.prec()) {
        return Err(LabError::Domain(format!("Laurent sampling needs 0 < |x0| < 1/2, got {x0:.12}")));
    }
    let k = num_coeffs;
    // Geometric nodes with ratio 2 give an equilibrated Vandermonde system
    // whose pivots spread by about 2^(k(k-1)/2).
    let cond_digits = ((k * (k - 1) / 2) as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 2;
    let nodes = geometric_schedule(x0, k + 1);
    let ectx = ctx.for_step(&nodes[k]).escalate(cond_digits);
    let p = ectx.bits();

    let samples: Vec<(BigReal, BigReal)> = nodes
        .iter()
        .map(|x| {
            let x = x.with_prec(p);
            gamma_near_pole(n, &x, &ectx).map(|v| (x, v))
        })
        .collect::<Result<_>>()?;

    let primary = fit_laurent(&samples[..k], 1, k, &ectx)?;
    let shifted = fit_laurent(&samples[1..], 1, k, &ectx)?;

    // Rounding floor: sample noise amplified by the conditioning, divided by
    // the column scale |x0|^(j-1).
    let biggest = samples.iter().map(|(_, v)| v.abs()).fold(BigReal::zero(p), |a, b| if b > a { b } else { a });
    let noise = &primary.condition_estimate * ectx.epsilon() * biggest;
    let x0p = x0.with_prec(p).abs();
    let mut col_scale = x0p.recip();
    let two = BigReal::from_i64(2, p);
    let mut error_estimates = Vec::with_capacity(k);
    for (c, c_shift) in primary.coefficients.iter().zip(&shifted.coefficients) {
        error_estimates.push(&two * (c - c_shift).abs() + &noise / &col_scale);
        col_scale = col_scale * &x0p;
    }

    Ok(LaurentExpansion {
        pole: n,
        x0: x0.clone(),
        coefficients: primary.coefficients,
        error_estimates,
        condition_estimate: primary.condition_estimate,
    })
}
