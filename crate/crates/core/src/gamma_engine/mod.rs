//! Real-axis Γ, ln Γ and ψ at arbitrary precision.
//!
//! The production path raises the argument by recurrence until the Stirling
//! asymptotic series (with exact Bernoulli coefficients) converges to the
//! requested precision, then undoes the shift with an exact-structure
//! product or sum. Negative arguments are routed through
//! [`gamma_near_pole`], which confines all pole-proximate behavior to the
//! analytic factor Γ(1 + x). [`euler_product_gamma`] is Euler's finite
//! product, kept deliberately slow and independent as an oracle.

mod bernoulli;

pub use bernoulli::bernoulli;

use num_rational::BigRational;

use crate::bigreal::{digits_for_bits, BigReal};
use crate::error::{LabError, Result};
use crate::numerics::PrecisionContext;

/// Extra bits carried inside every evaluation before the final rounding.
const INTERNAL_GUARD_BITS: usize = 64;

/// A Γ value together with the relative error the engine vouches for.
#[derive(Debug, Clone)]
pub struct GammaPoint {
    pub argument: BigReal,
    pub value: BigReal,
    pub claimed_relative_error: BigReal,
}

fn internal_bits(z: &BigReal, ctx: &PrecisionContext) -> usize {
    ctx.bits().max(z.prec()) + INTERNAL_GUARD_BITS
}

/// Rejects nonpositive integers, naming the pole.
fn check_pole(z: &BigReal) -> Result<()> {
    if z.is_integer() && !z.is_positive() {
        let pole = z.to_i64().unwrap_or(i64::MIN);
        return Err(LabError::Pole { pole });
    }
    Ok(())
}

/// Smallest argument at which the Stirling series reaches `bits` of accuracy
/// before its terms start growing: the minimal term is about e^(-2πw).
fn stirling_threshold(bits: usize) -> u64 {
    let digits = digits_for_bits(bits) as f64;
    (digits * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI)).ceil() as u64 + 2
}

/// Number of unit shifts needed to lift `z` to the Stirling threshold.
fn shift_count(z: &BigReal, bits: usize) -> u64 {
    let w_min = stirling_threshold(bits) as i64;
    let floor = z.floor_int();
    let floor = i64::try_from(floor).unwrap_or(if z.is_negative() { i64::MIN / 2 } else { i64::MAX / 2 });
    (w_min - floor).max(0) as u64
}

// Stirling tail: sum of B_{2k} / (2k (2k-1) w^(2k-1)) for ln Γ, or of
// B_{2k} / (2k w^(2k)) for ψ, stopping once terms drop below 2^-bits.
fn asymptotic_tail(w: &BigReal, bits: usize, digamma: bool) -> Result<BigReal> {
    let p = w.prec();
    let tol = BigReal::pow2(-(bits as i32), p);
    let w2 = w * w;
    let mut power = if digamma { w2.clone() } else { w.clone() };
    let mut sum = BigReal::zero(p);
    let mut last: Option<BigReal> = None;
    for k in 1..10_000usize {
        let b = bernoulli(2 * k);
        let divisor = if digamma { 2 * k } else { 2 * k * (2 * k - 1) };
        let coef = BigReal::from_rational(&(b / BigRational::from_integer(divisor.into())), p);
        let term = coef / &power;
        let mag = term.abs();
        if mag < tol {
            return Ok(sum);
        }
        if let Some(prev) = &last {
            if mag > *prev {
                return Err(LabError::Precision(format!(
                    "Stirling series diverged before reaching {bits} bits at w = {w:.6}"
                )));
            }
        }
        sum = sum + term;
        last = Some(mag);
        power = power * &w2;
    }
    Err(LabError::Precision("Stirling series did not converge".into()))
}

/// ln Γ(w) for w past the Stirling threshold.
fn stirling_ln_gamma(w: &BigReal, bits: usize) -> Result<BigReal> {
    let p = w.prec();
    let half = BigReal::pow2(-1, p);
    let half_ln_2pi = (BigReal::pi(p).ldexp(1)).ln() * &half;
    let main = (w - &half) * w.ln() - w + half_ln_2pi;
    Ok(main + asymptotic_tail(w, bits, false)?)
}

/// Returns (ln Γ(z + N), z (z+1) ... (z+N-1)) for positive z.
fn shifted_ln_gamma(z: &BigReal, bits: usize) -> Result<(BigReal, BigReal)> {
    let n = shift_count(z, bits);
    let one = BigReal::one(bits);
    let mut w = z.with_prec(bits);
    let mut prod = BigReal::one(bits);
    for _ in 0..n {
        prod = prod * &w;
        w = w + &one;
    }
    Ok((stirling_ln_gamma(&w, bits)?, prod))
}

fn gamma_positive(z: &BigReal, bits: usize) -> Result<BigReal> {
    let (lg, prod) = shifted_ln_gamma(z, bits)?;
    Ok(lg.exp() / prod)
}

/// ln Γ(z) for real z > 0.
pub fn log_gamma(z: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if !z.is_positive() {
        return Err(LabError::Domain(format!("log_gamma needs z > 0, got {z:.12}")));
    }
    let bits = internal_bits(z, ctx);
    let (lg, prod) = shifted_ln_gamma(z, bits)?;
    Ok((lg - prod.ln()).with_prec(ctx.bits()))
}

/// Γ(z) on the real axis.
///
/// Positive arguments use the shifted Stirling series. Negative arguments
/// within 1/2 of a pole go through [`gamma_near_pole`]; the only negative
/// arguments farther away are the half-integers, handled by reflection.
pub fn gamma(z: &BigReal, ctx: &PrecisionContext) -> Result<GammaPoint> {
    check_pole(z)?;
    let claimed_relative_error = ctx.pow10(3 - ctx.working_digits() as i64);
    let value = if z.is_positive() {
        gamma_positive(z, internal_bits(z, ctx))?.with_prec(ctx.bits())
    } else {
        let bits = internal_bits(z, ctx);
        let zi = z.with_prec(bits);
        let n = (-&zi).round_int();
        let x = &zi + BigReal::from_bigint(&n, bits);
        let half = BigReal::pow2(-1, bits);
        if x.abs() < half {
            let n = u32::try_from(n)
                .map_err(|_| LabError::Domain(format!("argument {z:.6} is too far from the origin")))?;
            gamma_near_pole(n, &x, ctx)?
        } else {
            // Γ(z) = π / (sin(πz) Γ(1 - z))
            let pi = BigReal::pi(bits);
            let one = BigReal::one(bits);
            let s = (&pi * &zi).sin();
            (pi / (s * gamma_positive(&(one - &zi), bits)?)).with_prec(ctx.bits())
        }
    };
    Ok(GammaPoint { argument: z.clone(), value, claimed_relative_error })
}

/// ψ(z) = Γ'(z)/Γ(z) for real z off the poles, via
/// ψ(z) = ψ(z + m) - Σ_{k<m} 1/(z + k) and the asymptotic series for ψ.
pub fn digamma(z: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    check_pole(z)?;
    let bits = internal_bits(z, ctx);
    let m = shift_count(z, bits);
    let one = BigReal::one(bits);
    let mut w = z.with_prec(bits);
    let mut shift_sum = BigReal::zero(bits);
    for _ in 0..m {
        shift_sum = shift_sum + w.recip();
        w = w + &one;
    }
    let psi_w = w.ln() - w.ldexp(1).recip() - asymptotic_tail(&w, bits, true)?;
    Ok((psi_w - shift_sum).with_prec(ctx.bits()))
}

/// Euler's finite product n! n^z / (z (z+1) ... (z+n)) with n = `terms`.
///
/// Converges to Γ(z) with O(1/n) relative error; used only as an oracle.
pub fn euler_product_gamma(z: &BigReal, terms: u64, ctx: &PrecisionContext) -> Result<BigReal> {
    check_pole(z)?;
    if terms == 0 {
        return Err(LabError::Input("Euler product needs at least one term".into()));
    }
    let bits = internal_bits(z, ctx);
    let one = BigReal::one(bits);
    let zi = z.with_prec(bits);
    let mut acc = zi.recip();
    let mut k = BigReal::zero(bits);
    let mut zk = zi.clone();
    for _ in 0..terms {
        k = k + &one;
        zk = zk + &one;
        acc = acc * &k / &zk;
    }
    let n = BigReal::from_u64(terms, bits);
    let n_pow_z = match zi.to_i64() {
        Some(e) if e >= 0 => n.powi(e as usize),
        _ => (&zi * n.ln()).exp(),
    };
    Ok((acc * n_pow_z).with_prec(ctx.bits()))
}

/// Γ(-n + x) for a nonnegative integer n and 0 < |x| < 1/2, computed as
/// Γ(1 + x) / (x (x - 1) (x - 2) ... (x - n)).
pub fn gamma_near_pole(n: u32, x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    if x.is_zero() {
        return Err(LabError::Pole { pole: -(n as i64) });
    }
    let bits = internal_bits(x, ctx);
    let xi = x.with_prec(bits);
    if xi.abs() >= BigReal::pow2(-1, bits) {
        return Err(LabError::Domain(format!(
            "near-pole offset must satisfy |x| < 1/2, got {x:.12}; use gamma directly"
        )));
    }
    let one = BigReal::one(bits);
    let g1 = gamma_positive(&(&one + &xi), bits)?;
    Ok((g1 / pole_factor(n, &xi)).with_prec(ctx.bits()))
}

/// x (x - 1) ... (x - n) at the precision of `x`.
pub fn pole_factor(n: u32, x: &BigReal) -> BigReal {
    let one = BigReal::one(x.prec());
    let mut shifted = x.clone();
    let mut prod = x.clone();
    for _ in 0..n {
        shifted = shifted - &one;
        prod = prod * &shifted;
    }
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_context;

    fn ctx() -> PrecisionContext {
        make_context(30, 10).unwrap()
    }

    fn num(s: &str) -> BigReal {
        BigReal::parse_decimal(s, ctx().bits()).unwrap()
    }

    fn rel_close(a: &BigReal, b: &BigReal, digits: i64) -> bool {
        (a - b).abs() <= b.abs() * ctx().pow10(-digits)
    }

    // 50-digit references from the Legendre duplication formula and pi.
    const SQRT_PI: &str = "1.7724538509055160272981674833411451827975494561224";
    const EULER_GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";

    #[test]
    fn factorials() {
        assert_eq!(gamma(&num("5"), &ctx()).unwrap().value, ctx().int(24));
        assert!(rel_close(&gamma(&num("1"), &ctx()).unwrap().value, &ctx().int(1), 38));
        assert!(rel_close(&gamma(&num("11"), &ctx()).unwrap().value, &ctx().int(3628800), 38));
    }

    #[test]
    fn half_integers() {
        let sqrt_pi = num(SQRT_PI);
        assert!(rel_close(&gamma(&num("0.5"), &ctx()).unwrap().value, &sqrt_pi, 38));
        let want = -(sqrt_pi.ldexp(1));
        let got = gamma(&num("-0.5"), &ctx()).unwrap().value;
        assert!(rel_close(&got, &want, 38), "{got}");
        assert!(got.to_sci(11).starts_with("-3.5449077018"));
    }

    #[test]
    fn poles_are_named() {
        assert_eq!(gamma(&num("0"), &ctx()).unwrap_err(), LabError::Pole { pole: 0 });
        assert_eq!(gamma(&num("-3"), &ctx()).unwrap_err(), LabError::Pole { pole: -3 });
        assert_eq!(digamma(&num("-1"), &ctx()).unwrap_err(), LabError::Pole { pole: -1 });
        assert_eq!(gamma_near_pole(4, &num("0"), &ctx()).unwrap_err(), LabError::Pole { pole: -4 });
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(&num("1"), &ctx()).unwrap().abs() < ctx().pow10(-38));
        assert!(log_gamma(&num("2"), &ctx()).unwrap().abs() < ctx().pow10(-38));
        let want = ctx().int(3628800).ln();
        assert!(rel_close(&log_gamma(&num("11"), &ctx()).unwrap(), &want, 37));
        assert!(matches!(log_gamma(&num("0"), &ctx()), Err(LabError::Domain(_))));
        assert!(matches!(log_gamma(&num("-2.5"), &ctx()), Err(LabError::Domain(_))));
    }

    #[test]
    fn digamma_at_integers() {
        let g = num(EULER_GAMMA_50);
        assert!(rel_close(&digamma(&num("1"), &ctx()).unwrap(), &-&g, 38));
        assert!(rel_close(&digamma(&num("2"), &ctx()).unwrap(), &(ctx().int(1) - &g), 38));
        let h2 = num("1.5");
        assert!(rel_close(&digamma(&num("3"), &ctx()).unwrap(), &(h2 - &g), 38));
    }

    #[test]
    fn euler_product_small_cases() {
        let v = euler_product_gamma(&num("1"), 999, &ctx()).unwrap();
        let want = BigReal::from_rational(&BigRational::new(999.into(), 1000.into()), ctx().bits());
        assert_eq!(v, want);
        // z = 2, n = 3: 3! 3^2 / (2·3·4·5) = 54/120
        let v = euler_product_gamma(&num("2"), 3, &ctx()).unwrap();
        let want = BigReal::from_rational(&BigRational::new(54.into(), 120.into()), ctx().bits());
        assert_eq!(v, want);
    }

    #[test]
    fn near_pole_matches_general_path_and_domain() {
        let x = num("0.5").ldexp(-3);
        let a = gamma_near_pole(2, &x, &ctx()).unwrap();
        let b = gamma(&(num("-2") + &x), &ctx()).unwrap().value;
        assert_eq!(a, b);
        let g05 = gamma_near_pole(0, &num("0.25"), &ctx()).unwrap();
        assert!(rel_close(&g05, &gamma(&num("0.25"), &ctx()).unwrap().value, 37));
        assert!(matches!(gamma_near_pole(1, &num("0.5"), &ctx()), Err(LabError::Domain(_))));
        assert!(matches!(gamma_near_pole(1, &num("-0.75"), &ctx()), Err(LabError::Domain(_))));
    }
}
