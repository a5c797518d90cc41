use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::bigreal::BigReal;

/// Sentinel digit count reported for exact agreement.
pub const AGREEMENT_CAP: u32 = 1_000_000;

/// `floor(-log10(abs_error / max(1, |reference|)))`, clamped at 0, or
/// [`AGREEMENT_CAP`] when `abs_error` is zero.
pub fn matched_digits(abs_error: &BigReal, reference: &BigReal) -> u32 {
    if abs_error.is_zero() {
        return AGREEMENT_CAP;
    }
    let mut q = abs_error.abs().to_rational_exact();
    let r = reference.abs().to_rational_exact();
    if r > BigRational::one() {
        q /= r;
    }
    if q >= BigRational::one() {
        return 0;
    }
    // estimate from bit lengths, then fix up exactly
    let approx = (q.denom().bits() as f64 - q.numer().bits() as f64) * std::f64::consts::LOG10_2;
    let mut d = approx.floor().max(0.0) as u32;
    let ten = BigRational::from_integer(10.into());
    let tenth = |k: u32| BigRational::one() / Pow::pow(&ten, k);
    while d > 0 && q > tenth(d) {
        d -= 1;
    }
    while q <= tenth(d + 1) {
        d += 1;
    }
    d.min(AGREEMENT_CAP)
}
