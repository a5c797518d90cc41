use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bigreal::BigReal;
use crate::error::{LabError, Result};
use crate::numerics::PrecisionContext;

/// Result of an adaptive Gauss-Legendre integration.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: BigReal,
    /// `|Q_n - Q_{n/2}|` for the final doubling step.
    pub error_estimate: BigReal,
    pub points: usize,
}

type Rule = Arc<Vec<(BigReal, BigReal)>>;

fn rule_cache() -> &'static Mutex<HashMap<(usize, usize), Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` at `prec` bits.
pub fn gauss_legendre_rule(n: usize, prec: usize) -> Rule {
    if let Some(r) = rule_cache().lock().unwrap().get(&(n, prec)) {
        return r.clone();
    }
    let rule = Arc::new(compute_rule(n, prec));
    rule_cache().lock().unwrap().insert((n, prec), rule.clone());
    rule
}

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
fn legendre_pair(n: usize, x: &BigReal) -> (BigReal, BigReal) {
    let p = x.prec();
    let mut prev = BigReal::one(p);
    let mut cur = x.clone();
    for k in 1..n {
        let kk = BigReal::from_u64(k as u64, p);
        let next = (BigReal::from_u64(2 * k as u64 + 1, p) * x * &cur - &kk * &prev)
            / BigReal::from_u64(k as u64 + 1, p);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn compute_rule(n: usize, prec: usize) -> Vec<(BigReal, BigReal)> {
    let wp = prec + 32;
    let one = BigReal::one(wp);
    let nn = BigReal::from_u64(n as u64, wp);
    let tol = BigReal::pow2(-(prec as i32) - 8, wp);
    let mut half = Vec::with_capacity(n / 2 + 1);
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = BigReal::from_f64(guess, wp);
        let mut deriv = BigReal::zero(wp);
        for _ in 0..200 {
            let (pn, pm) = legendre_pair(n, &x);
            deriv = &nn * (&x * &pn - &pm) / (&x * &x - &one);
            let dx = &pn / &deriv;
            x = &x - &dx;
            if dx.abs() < tol {
                let (pn, pm) = legendre_pair(n, &x);
                deriv = &nn * (&x * &pn - &pm) / (&x * &x - &one);
                break;
            }
        }
        let w = BigReal::from_i64(2, wp) / ((&one - &x * &x) * &deriv * &deriv);
        half.push((x.with_prec(prec), w.with_prec(prec)));
    }
    let mut rule: Vec<(BigReal, BigReal)> = half.iter().map(|(x, w)| (-x, w.clone())).collect();
    let mirrored = if n % 2 == 1 { half.len() - 1 } else { half.len() };
    rule.extend(half[..mirrored].iter().rev().cloned());
    rule
}

fn apply_rule<F>(f: &F, a: &BigReal, b: &BigReal, n: usize, prec: usize) -> Result<BigReal>
where
    F: Fn(&BigReal) -> Result<BigReal>,
{
    let two = BigReal::from_i64(2, prec);
    let mid = (a + b) / &two;
    let half = (b - a) / &two;
    let mut sum = BigReal::zero(prec);
    for (x, w) in gauss_legendre_rule(n, prec).iter() {
        let t = &mid + &half * x;
        sum = sum + w * f(&t)?;
    }
    Ok(sum * half)
}

/// Integrates `f` over `[a, b]` with Gauss-Legendre rules of 8, 16, 32, ...
/// points until two successive rules agree to within `tol`.
pub fn integrate<F>(f: F, a: &BigReal, b: &BigReal, ctx: &PrecisionContext, tol: &BigReal) -> Result<Quadrature>
where
    F: Fn(&BigReal) -> Result<BigReal>,
{
    let prec = ctx.bits();
    let mut n = 8;
    let mut prev = apply_rule(&f, a, b, n, prec)?;
    while n < 512 {
        n *= 2;
        let cur = apply_rule(&f, a, b, n, prec)?;
        let err = (&cur - &prev).abs();
        if err <= *tol {
            return Ok(Quadrature { value: cur, error_estimate: err, points: n });
        }
        prev = cur;
    }
    Err(LabError::Precision(format!("quadrature did not converge to {tol:.3} with {n} points")))
}
