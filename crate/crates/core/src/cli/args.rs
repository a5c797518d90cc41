use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};

use crate::bigreal::{parse_decimal_rational, BigReal};
use crate::error::{LabError, Result};
use crate::numerics::{DEFAULT_GUARD_DIGITS, DEFAULT_NODES};
use crate::pole_limits::FormulaId;

#[derive(Debug, Parser)]
#[command(name = "gamma-poles", version, about = "Gamma function pole limits and Euler's constant at high precision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check limit formulas against their closed forms
    Verify(FormulaArgs),
    /// Recover Euler's constant from limit formulas
    Extract(FormulaArgs),
    /// Laurent coefficients of Γ at the poles -n
    Laurent(LaurentArgs),
    /// Evaluate Γ, ln Γ and ψ at one point
    GammaEval(GammaEvalArgs),
    /// Run the invariant suite
    Selftest(Output),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, default_value_t = 30)]
    pub target_digits: u32,
    #[arg(long, default_value_t = DEFAULT_GUARD_DIGITS)]
    pub guard_digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FormulaArgs {
    /// demys, clubsuit, heart, spade, diamond or unified
    #[arg(long)]
    pub formula: String,
    /// Index, or inclusive range a..b, for heart, spade and unified
    #[arg(long)]
    pub n: Option<String>,
    /// First step: an exact binary fraction such as 0.0009765625 or 2^-10
    #[arg(long, default_value = "2^-10", allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct LaurentArgs {
    /// Pole index, or inclusive range a..b
    #[arg(long, default_value = "0")]
    pub n: String,
    #[arg(long, default_value_t = 8)]
    pub coeffs: usize,
    #[arg(long, default_value = "2^-10", allow_hyphen_values = true)]
    pub x0: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct GammaEvalArgs {
    /// Decimal argument, e.g. -0.5 or 3.7
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[command(flatten)]
    pub output: Output,
}

/// `"7"` or an inclusive range `"a..b"`.
pub fn parse_index_range(text: &str) -> Result<Vec<u32>> {
    let bad = || LabError::Input(format!("expected an index n or a range a..b, got {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(LabError::Input(format!("empty range {text:?}")));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(text)?]),
    }
}

/// Formulas selected by a name and an optional index range.
pub fn parse_formulas(name: &str, n: Option<&str>) -> Result<Vec<FormulaId>> {
    let name = name.trim().to_ascii_lowercase();
    match n {
        Some(n) => parse_index_range(n)?.into_iter().map(|i| FormulaId::from_name(&name, Some(i))).collect(),
        None => FormulaId::from_name(&name, None).map(|f| vec![f]),
    }
}

/// Parses `2^k`, `-2^k` or a decimal string whose value is a dyadic
/// rational, returning it exactly. Anything else is rejected.
pub fn parse_binary_fraction(text: &str, prec: usize) -> Result<BigReal> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) if rest.starts_with("2^") => (true, rest),
        _ => (false, t),
    };
    if let Some(exp) = body.strip_prefix("2^") {
        let exp = exp.trim_start_matches('(').trim_end_matches(')');
        let k: i32 = exp.parse().map_err(|_| LabError::Input(format!("bad power of two {text:?}")))?;
        let v = BigReal::pow2(k, prec);
        return Ok(if neg { -v } else { v });
    }
    let r = parse_decimal_rational(t)?;
    let d = r.denom().clone();
    if d.is_zero() || (&d & (&d - num_bigint::BigInt::one())) != num_bigint::BigInt::zero() {
        return Err(LabError::Input(format!("{text:?} is not an exact binary fraction")));
    }
    let bits = (r.numer().bits() as usize + 2).max(prec);
    Ok(BigReal::from_rational(&r, bits))
}
