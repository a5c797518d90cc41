//! Arbitrary-precision real numbers.
//!
//! [`BigReal`] pairs an `astro-float` value with the binary precision it was
//! produced at. Binary operations round to the larger of the two operand
//! precisions, so mixing an exact small constant with a working-precision
//! value never degrades the result. All rounding is round-half-to-even.
//!
//! Exact conversions to and from [`BigRational`] give bit-exact decimal
//! parsing and formatting, independent of the backing library's own
//! string routines.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float_num::{BigFloat, Consts, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LabError, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// log2(10), used to translate decimal digit budgets into bits.
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    // Per-thread cache of pi, ln 2, ln 10 and e. Values depend only on the
    // requested precision, so callers observe pure behavior.
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Number of bits needed to carry `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + 2
}

/// Decimal digits carried by `bits` of binary precision (rounded down).
pub fn digits_for_bits(bits: usize) -> u32 {
    (bits as f64 / LOG2_10).floor() as u32
}

// The backend rounds every precision up to whole words; doing the same here
// keeps `prec()` honest and makes equal-precision results comparable.
fn word_aligned(bits: usize) -> usize {
    bits.max(1).div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE
}

#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        let prec = word_aligned(prec);
        debug_assert!(!v.is_nan(), "NaN produced: {:?}", v.err());
        BigReal { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::new(prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(value: i64, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from(value), prec)
    }

    pub fn from_u64(value: u64, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from(value), prec)
    }

    /// Exact conversion of a finite `f64`, then rounding to `prec`.
    pub fn from_f64(value: f64, prec: usize) -> Self {
        let r = BigRational::from_float(value).expect("finite f64");
        Self::from_rational(&r, prec)
    }

    pub fn from_bigint(value: &BigInt, prec: usize) -> Self {
        let prec = word_aligned(prec);
        if value.is_zero() {
            return Self::zero(prec);
        }
        let sign = if value.is_negative() { Sign::Neg } else { Sign::Pos };
        let words = biguint_to_words(value.magnitude());
        let e = (words.len() * WORD_BIT_SIZE) as i32;
        let mut v = BigFloat::from_words(&words, sign, e);
        v.set_precision(prec, RM).expect("precision within range");
        Self::wrap(v, prec)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(value: &BigRational, prec: usize) -> Self {
        if value.denom().is_one() {
            return Self::from_bigint(value.numer(), prec);
        }
        let num = Self::exact_int(value.numer());
        let den = Self::exact_int(value.denom());
        Self::wrap(num.v.div(&den.v, prec, RM), prec)
    }

    fn exact_int(value: &BigInt) -> Self {
        let bits = (value.bits() as usize).max(1);
        let prec = bits.div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE;
        Self::from_bigint(value, prec)
    }

    /// Parses a decimal literal (`-1.25e-3`, `0.0009765625`, `7`) and rounds
    /// it correctly to `prec` bits.
    pub fn parse_decimal(text: &str, prec: usize) -> Result<Self> {
        Ok(Self::from_rational(&parse_decimal_rational(text)?, prec))
    }

    /// pi rounded to `prec` bits.
    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    /// `2^k` exactly.
    pub fn pow2(k: i32, prec: usize) -> Self {
        Self::one(prec).ldexp(k)
    }

    /// Binary precision in bits.
    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let prec = word_aligned(prec);
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("precision within range");
        Self::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.v.is_positive()
    }

    /// True when the value is an exact integer.
    pub fn is_integer(&self) -> bool {
        self.is_zero() || self.v.is_int()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().expect("finite value");
        v.set_exponent(e + k);
        Self::wrap(v, self.prec)
    }

    /// Binary exponent `e` with `2^(e-1) <= |self| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            self.v.exponent()
        }
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        debug_assert!(!self.is_negative());
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), p)
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(&self) -> Self {
        debug_assert!(self.is_positive(), "ln of non-positive value");
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.cos(p, RM, cc)), p)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    /// Largest integer not above the value.
    pub fn floor_int(&self) -> BigInt {
        self.to_rational_exact().floor().to_integer()
    }

    /// Nearest integer (ties to even).
    pub fn round_int(&self) -> BigInt {
        let r = self.to_rational_exact();
        div_round_even(r.numer(), r.denom())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.floor_int().to_i64()
        } else {
            None
        }
    }

    /// The exact binary value as a rational.
    pub fn to_rational_exact(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (words, _bits, sign, e, _inexact) = self.v.as_raw_parts().expect("finite value");
        let mantissa = BigInt::from_biguint(IntSign::Plus, words_to_biguint(words));
        let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
        let mut r = if shift >= 0 {
            BigRational::from_integer(mantissa << shift as usize)
        } else {
            BigRational::new(mantissa, BigInt::one() << (-shift) as usize)
        };
        if sign == Sign::Neg {
            r = -r;
        }
        r
    }

    /// Nearest `f64` (for diagnostics and plotting only).
    pub fn to_f64(&self) -> f64 {
        self.to_sci(20).parse().unwrap_or(f64::NAN)
    }

    /// Scientific notation with exactly `sig` significant digits, e.g.
    /// `-2.886078324507664303e-1`. Deterministic and exact up to the final
    /// decimal rounding.
    pub fn to_sci(&self, sig: usize) -> String {
        rational_to_sci(&self.to_rational_exact(), sig.max(1))
    }

    /// Fixed-point notation with `frac` digits after the decimal point.
    pub fn to_fixed(&self, frac: usize) -> String {
        rational_to_fixed(&self.to_rational_exact(), frac)
    }

    /// Decimal digits this value's precision carries.
    pub fn decimal_digits(&self) -> u32 {
        digits_for_bits(self.prec)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        BigFloat::cmp(&self.v, &other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(self.decimal_digits() as usize);
        f.write_str(&self.to_sci(sig))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({} @ {} bits)", self.to_sci(self.decimal_digits().max(1) as usize), self.prec)
    }
}

macro_rules! impl_binop {
    ($tr:ident, $m:ident) => {
        impl<'a> $tr<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                let p = self.prec.max(rhs.prec);
                BigReal::wrap(self.v.$m(&rhs.v, p, RM), p)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                self.$m(&rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

fn biguint_to_words(n: &BigUint) -> Vec<Word> {
    const WB: usize = WORD_BIT_SIZE / 8;
    let mut bytes = n.to_bytes_le();
    bytes.resize(bytes.len().div_ceil(WB) * WB, 0);
    bytes
        .chunks(WB)
        .map(|c| {
            let mut buf = [0u8; WB];
            buf.copy_from_slice(c);
            Word::from_le_bytes(buf)
        })
        .collect()
}

fn words_to_biguint(words: &[Word]) -> BigUint {
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    BigUint::from_bytes_le(&bytes)
}

/// `n / d` rounded to the nearest integer, ties to even. `d` must be positive.
pub fn div_round_even(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    let twice: BigInt = &r << 1usize;
    match twice.cmp(d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

fn rational_to_sci(r: &BigRational, sig: usize) -> String {
    let zeros = "0".repeat(sig - 1);
    if r.is_zero() {
        return if sig == 1 { "0e0".to_string() } else { format!("0.{zeros}e0") };
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Initial guess of floor(log10 |r|) from bit lengths; corrected below.
    let approx = (a.numer().bits() as f64 - a.denom().bits() as f64) / LOG2_10;
    let mut k = approx.floor() as i64;
    let lo = pow10(sig as u32 - 1);
    let hi = pow10(sig as u32);
    let q = loop {
        let shift = sig as i64 - 1 - k;
        let scaled = if shift >= 0 {
            &a * BigRational::from_integer(pow10(shift as u32))
        } else {
            &a / BigRational::from_integer(pow10((-shift) as u32))
        };
        let q = div_round_even(scaled.numer(), scaled.denom());
        if q >= hi {
            k += 1;
        } else if q < lo {
            k -= 1;
        } else {
            break q;
        }
    };
    let digits = q.to_string();
    let mut out = String::with_capacity(sig + 8);
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if sig > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push('e');
    out.push_str(&k.to_string());
    out
}

fn rational_to_fixed(r: &BigRational, frac: usize) -> String {
    let scaled = r * BigRational::from_integer(pow10(frac as u32));
    let q = div_round_even(scaled.numer(), scaled.denom());
    let neg = q.is_negative();
    let mut digits = q.magnitude().to_string();
    if digits.len() <= frac {
        digits = format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits);
    }
    let split = digits.len() - frac;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..split]);
    if frac > 0 {
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

/// Exact rational value of a decimal literal: optional sign, digits with an
/// optional fractional part, optional `e`/`E` exponent.
pub fn parse_decimal_rational(text: &str) -> Result<BigRational> {
    let bad = || LabError::Input(format!("not a decimal number: {text:?}"));
    let s = text.trim();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..].parse().map_err(|_| bad())?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exp.abs() > 100_000 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    Ok(if scale >= 0 {
        BigRational::from_integer(num * pow10(scale as u32))
    } else {
        BigRational::new(num, pow10((-scale) as u32))
    })
}
