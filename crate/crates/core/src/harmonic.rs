//! Exact harmonic numbers and factorials, plus the two integral identities
//! that tie them to the real line: Euler's integral for H_n and the
//! vanishing mean of ψ(1 + t) over [0, 1].
//!
//! γ is never computed here; identity checks take it as `gamma_ref`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bigreal::BigReal;
use crate::error::Result;
use crate::gamma_engine::digamma;
use crate::numerics::{integrate, PrecisionContext};

/// H_n as a reduced fraction. H_0 = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicValue {
    pub index: u64,
    pub value: BigRational,
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn harmonic(n: u64) -> HarmonicValue {
    // accumulate p/q + 1/k = (p k + q) / (q k) and reduce once at the end
    let mut p = BigInt::zero();
    let mut q = BigInt::one();
    for k in 1..=n {
        let k = BigInt::from(k);
        p = &p * &k + &q;
        q *= k;
    }
    HarmonicValue { index: n, value: BigRational::new(p, q) }
}

/// Integrand of Euler's representation, (1 - t^n) / (1 - t), with its
/// removable value n at t = 1.
fn euler_integrand(n: u64, t: &BigReal) -> BigReal {
    let one = BigReal::one(t.prec());
    if *t == one {
        return BigReal::from_u64(n, t.prec());
    }
    (&one - t.powi(n as usize)) / (&one - t)
}

/// H_n = ∫₀¹ (1 - t^n)/(1 - t) dt by adaptive Gauss-Legendre quadrature.
pub fn harmonic_via_euler_integral(n: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    let p = ctx.bits();
    if n == 0 {
        return Ok(BigReal::zero(p));
    }
    let tol = ctx.pow10(-(ctx.working_digits() as i64) + 3);
    let q = integrate(|t| Ok(euler_integrand(n, t)), &BigReal::zero(p), &BigReal::one(p), ctx, &tol)?;
    Ok(q.value)
}

/// ∫₀¹ ψ(1 + t) dt, which equals ln Γ(2) - ln Γ(1) = 0. With
/// H_t = ψ(t + 1) + γ this is the statement that the mean of the fractional
/// harmonic numbers over [0, 1] is γ.
pub fn digamma_unit_integral(ctx: &PrecisionContext) -> Result<BigReal> {
    let p = ctx.bits();
    let one = BigReal::one(p);
    let tol = ctx.pow10(-(ctx.working_digits() as i64) + 3);
    let q = integrate(|t| digamma(&(&one + t), ctx), &BigReal::zero(p), &one, ctx, &tol)?;
    Ok(q.value)
}

/// (-1)^(n+1) (γ - H_n) / n!, the right-hand side of the pole limit at -n.
pub fn vanishing_term(n: u64, gamma_ref: &BigReal, ctx: &PrecisionContext) -> BigReal {
    let p = ctx.bits().max(gamma_ref.prec());
    let h = BigReal::from_rational(&harmonic(n).value, p);
    let fact = BigReal::from_bigint(&BigInt::from(factorial(n)), p);
    let v = (gamma_ref.with_prec(p) - h) / fact;
    if n.is_multiple_of(2) {
        -v
    } else {
        v
    }
}
