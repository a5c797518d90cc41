//! The invariant suite behind `gamma-poles selftest`.
//!
//! Each check is deterministic: details only contain values rounded to a
//! few digits, so repeated runs produce identical reports.

use rayon::prelude::*;

use crate::bigreal::BigReal;
use crate::error::Result;
use crate::gamma_engine::{digamma, euler_product_gamma, gamma, gamma_near_pole, log_gamma, pole_factor};
use crate::gamma_extractor::{definition_gamma, digits_of_agreement, extract_gamma, REFERENCE_DIGITS};
use crate::harmonic::{digamma_unit_integral, harmonic, harmonic_via_euler_integral, vanishing_term};
use crate::numerics::{
    empirical_order, fit_laurent, geometric_schedule, matched_digits, richardson_extrapolate, PrecisionContext,
};
use crate::pole_limits::{
    closed_form, evaluate_expr, laurent_of_gamma, residue, target_value, verify_formula, FormulaId, Status,
};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Suite) -> Result<(bool, String)>;

/// Shared inputs for the checks.
pub struct Suite {
    pub ctx: PrecisionContext,
    pub gamma_ref: BigReal,
    pub x0: BigReal,
    pub nodes: usize,
}

impl Suite {
    pub fn new(ctx: PrecisionContext) -> Self {
        Suite { ctx, gamma_ref: definition_gamma(&ctx.escalate(10)), x0: BigReal::pow2(-10, ctx.bits()), nodes: 16 }
    }

    fn num(&self, s: &str) -> BigReal {
        BigReal::parse_decimal(s, self.ctx.bits()).expect("literal")
    }

    /// 10^(k - working_digits)
    fn ulps(&self, k: i64) -> BigReal {
        self.ctx.pow10(k - self.ctx.working_digits() as i64)
    }
}

fn rel(a: &BigReal, b: &BigReal) -> BigReal {
    let d = (a - b).abs();
    if b.is_zero() {
        d
    } else {
        d / b.abs()
    }
}

fn max_of(v: impl IntoIterator<Item = BigReal>, prec: usize) -> BigReal {
    v.into_iter().fold(BigReal::zero(prec), |a, b| if b > a { b } else { a })
}

/// The formulas whose extraction is scored against the reference digits.
pub fn extraction_formulas() -> Vec<FormulaId> {
    let mut v = vec![FormulaId::Clubsuit];
    v.extend((0..=10).map(FormulaId::Heart));
    v.extend((1..=10).map(FormulaId::Spade));
    v.push(FormulaId::Diamond);
    v.extend((0..=10).map(FormulaId::Unified));
    v
}

fn richardson_polynomial(s: &Suite) -> Result<(bool, String)> {
    // 3 - 2h + 5h^2 - h^3 + 0.5h^4 with 5 columns
    let p = s.ctx.bits();
    let coeffs = [s.num("3"), s.num("-2"), s.num("5"), s.num("-1"), s.num("0.5")];
    let nodes = geometric_schedule(&s.num("0.5"), coeffs.len());
    let samples: Vec<_> = nodes
        .iter()
        .map(|h| (h.clone(), coeffs.iter().rev().fold(BigReal::zero(p), |acc, c| acc * h + c)))
        .collect();
    let t = richardson_extrapolate(&samples, &s.num("2"), 1)?;
    let err = rel(&t.estimate, &coeffs[0]);
    Ok((err <= s.ulps(2), format!("relative error {}", err.to_sci(3))))
}

fn laurent_polynomial(s: &Suite) -> Result<(bool, String)> {
    let want = [s.num("-0.75"), s.num("2"), s.num("0.125"), s.num("-3")];
    let nodes = geometric_schedule(&s.num("0.25"), want.len());
    let samples: Vec<_> = nodes
        .iter()
        .map(|x| {
            let v = want.iter().rev().fold(BigReal::zero(s.ctx.bits()), |acc, c| acc * x + c) / x;
            (x.clone(), v)
        })
        .collect();
    let fit = fit_laurent(&samples, 1, want.len(), &s.ctx)?;
    let err = max_of(fit.coefficients.iter().zip(&want).map(|(c, w)| rel(c, w)), s.ctx.bits());
    Ok((err <= s.ulps(2), format!("max relative error {}", err.to_sci(3))))
}

fn order_synthetic(s: &Suite) -> Result<(bool, String)> {
    // e(h) = h^2 (1 + 1e-4 h), on nodes below 1
    let mut worst = 0.0f64;
    for p in [1usize, 2, 3] {
        let data: Vec<_> = geometric_schedule(&s.num("0.5"), 6)
            .into_iter()
            .map(|h| {
                let e = h.powi(p) * (s.num("1") + s.num("0.0001") * &h);
                (h, e)
            })
            .collect();
        let got = empirical_order(&data)?.to_f64();
        worst = worst.max((got - p as f64).abs());
    }
    Ok((worst <= 0.01, format!("max deviation {worst:.2e}")))
}

fn gamma_recurrence(s: &Suite) -> Result<(bool, String)> {
    let mut worst = BigReal::zero(s.ctx.bits());
    for z in ["0.1", "0.35", "1.7", "2.5", "9.25", "33.3", "57.01", "99.9"] {
        let z = s.num(z);
        let a = gamma(&(&z + s.num("1")), &s.ctx)?.value;
        let b = &z * gamma(&z, &s.ctx)?.value;
        let e = rel(&b, &a);
        if e > worst {
            worst = e;
        }
    }
    Ok((worst <= s.ulps(3), format!("max relative residual {}", worst.to_sci(3))))
}

fn gamma_reflection(s: &Suite) -> Result<(bool, String)> {
    let p = s.ctx.bits();
    let pi = BigReal::pi(p);
    let mut worst = BigReal::zero(p);
    for z in ["0.1", "0.2", "0.3", "0.4", "0.6", "0.75", "0.9"] {
        let z = s.num(z);
        let prod = gamma(&z, &s.ctx)?.value * gamma(&(s.num("1") - &z), &s.ctx)?.value * (&pi * &z).sin() / &pi;
        let e = rel(&prod, &s.num("1"));
        if e > worst {
            worst = e;
        }
    }
    Ok((worst <= s.ulps(3), format!("max relative residual {}", worst.to_sci(3))))
}

fn euler_product_oracle(s: &Suite) -> Result<(bool, String)> {
    let zs = ["0.25", "0.5", "1.5", "3.7"];
    let errs: Vec<BigReal> = zs
        .par_iter()
        .map(|z| {
            let z = s.num(z);
            let g = gamma(&z, &s.ctx)?.value;
            Ok(rel(&euler_product_gamma(&z, 1_000_000, &s.ctx)?, &g))
        })
        .collect::<Result<_>>()?;
    let worst = max_of(errs, s.ctx.bits());
    let exact = euler_product_gamma(&s.num("1"), 999, &s.ctx)? == s.num("999") / s.num("1000");
    Ok((worst <= s.num("0.00001") && exact, format!("max relative gap {}, z=1 n=999 exact: {exact}", worst.to_sci(3))))
}

fn digamma_finite_difference(s: &Suite) -> Result<(bool, String)> {
    let h = s.ctx.pow10(-(s.ctx.working_digits() as i64) / 3);
    let two = s.num("2");
    let mut worst = u32::MAX;
    for z in ["1", "2.5", "7", "13.25", "20"] {
        let z = s.num(z);
        let fd = (log_gamma(&(&z + &h), &s.ctx)? - log_gamma(&(&z - &h), &s.ctx)?) / (&two * &h);
        let psi = digamma(&z, &s.ctx)?;
        worst = worst.min(matched_digits(&(fd - &psi).abs(), &psi));
    }
    Ok((worst >= s.ctx.target_digits() / 2, format!("min digits {worst}")))
}

fn near_pole_product(s: &Suite) -> Result<(bool, String)> {
    let mut worst = BigReal::zero(s.ctx.bits());
    for n in [0u32, 1, 2, 5, 10, 20] {
        for x in ["0.25", "-0.3", "0.0009765625", "-0.000001"] {
            let x = s.num(x);
            let lhs = gamma_near_pole(n, &x, &s.ctx)? * pole_factor(n, &x);
            let rhs = gamma(&(&x + s.num("1")), &s.ctx)?.value;
            let e = rel(&lhs, &rhs);
            if e > worst {
                worst = e;
            }
        }
    }
    Ok((worst <= s.ulps(3), format!("max relative residual {}", worst.to_sci(3))))
}

fn harmonic_differences(_: &Suite) -> Result<(bool, String)> {
    let ok = (1..=200u64).all(|n| {
        harmonic(n).value - harmonic(n - 1).value == num_rational::BigRational::new(1.into(), (n as i64).into())
    });
    Ok((ok, "H_n - H_(n-1) = 1/n for n <= 200".into()))
}

fn harmonic_euler_integral(s: &Suite) -> Result<(bool, String)> {
    let errs: Vec<BigReal> = (0..=30u64)
        .into_par_iter()
        .map(|n| {
            let exact = BigReal::from_rational(&harmonic(n).value, s.ctx.bits());
            Ok((harmonic_via_euler_integral(n, &s.ctx)? - exact).abs())
        })
        .collect::<Result<_>>()?;
    let worst = max_of(errs, s.ctx.bits());
    let tol = s.ctx.pow10(-(s.ctx.target_digits() as i64));
    Ok((worst <= tol, format!("max abs error {}", worst.to_sci(3))))
}

fn digamma_harmonic_relation(s: &Suite) -> Result<(bool, String)> {
    let mut worst = u32::MAX;
    for n in 1..=50u64 {
        let psi = digamma(&BigReal::from_u64(n, s.ctx.bits()), &s.ctx)?;
        let want = BigReal::from_rational(&harmonic(n - 1).value, s.ctx.bits()) - &s.gamma_ref;
        worst = worst.min(matched_digits(&(psi - &want).abs(), &want));
    }
    Ok((worst + 2 >= s.ctx.target_digits(), format!("min digits {worst}")))
}

fn digamma_integral(s: &Suite) -> Result<(bool, String)> {
    let v = digamma_unit_integral(&s.ctx)?.abs();
    Ok((v <= s.ctx.pow10(2 - s.ctx.target_digits() as i64), format!("|integral| {}", v.to_sci(3))))
}

fn vanishing(s: &Suite) -> Result<(bool, String)> {
    let terms: Vec<BigReal> = (0..=40u64).map(|n| vanishing_term(n, &s.gamma_ref, &s.ctx).abs()).collect();
    let decreasing = terms[3..].windows(2).all(|w| w[1] < w[0]);
    let small = terms[19..].iter().all(|t| *t < s.ctx.pow10(-15));
    let t20 = &terms[20];
    let ok = decreasing && small && *t20 < s.ctx.pow10(-17);
    Ok((ok, format!("decreasing from n=3: {decreasing}, |term(20)| {}", t20.to_sci(3))))
}

fn two_sided(s: &Suite) -> Result<(bool, String)> {
    let mut formulas = vec![FormulaId::Clubsuit];
    formulas.extend((0..=5).map(FormulaId::Heart));
    let digits: Vec<u32> = formulas
        .par_iter()
        .map(|&f| {
            let plus = verify_formula(f, &s.x0, s.nodes, &s.ctx, &s.gamma_ref)?;
            let minus = verify_formula(f, &-&s.x0, s.nodes, &s.ctx, &s.gamma_ref)?;
            Ok(digits_of_agreement(&plus.extrapolated, &minus.extrapolated))
        })
        .collect::<Result<_>>()?;
    let worst = *digits.iter().min().expect("nonempty");
    Ok((worst + 2 >= s.ctx.target_digits(), format!("min digits {worst}")))
}

fn unified_dispatch(s: &Suite) -> Result<(bool, String)> {
    let nodes = geometric_schedule(&s.x0, s.nodes);
    let pairs: Vec<(FormulaId, FormulaId)> = std::iter::once((FormulaId::Unified(0), FormulaId::Diamond))
        .chain((1..=10).map(|n| (FormulaId::Unified(n), FormulaId::Spade(n))))
        .collect();
    let mismatches: usize = pairs
        .par_iter()
        .map(|&(u, other)| {
            let mut bad = 0;
            for x in nodes.iter().chain(std::iter::once(&-&s.x0)) {
                if evaluate_expr(u, x, &s.ctx)? != evaluate_expr(other, x, &s.ctx)? {
                    bad += 1;
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum();
    Ok((mismatches == 0, format!("{mismatches} mismatching evaluations")))
}

fn demys_equivalence(s: &Suite) -> Result<(bool, String)> {
    let mut worst = u32::MAX;
    for k in [4, 8, 12] {
        let big = BigReal::pow2(k, s.ctx.bits());
        let a = evaluate_expr(FormulaId::Demys, &big, &s.ctx)?;
        let b = evaluate_expr(FormulaId::Clubsuit, &big.recip(), &s.ctx)?;
        worst = worst.min(digits_of_agreement(&a, &b));
    }
    Ok((worst + 2 >= s.ctx.target_digits(), format!("min digits {worst}")))
}

fn heart_sweep(s: &Suite) -> Result<(bool, String)> {
    let reports: Vec<_> = (0..=20u32)
        .into_par_iter()
        .map(|n| verify_formula(FormulaId::Heart(n), &s.x0, s.nodes, &s.ctx, &s.gamma_ref))
        .collect::<Result<_>>()?;
    let all_pass = reports.iter().all(|r| r.status == Status::Pass);
    let min_digits = reports.iter().map(|r| r.digits_matched).min().unwrap_or(0);
    let order_ok = reports.iter().all(|r| r.empirical_order.as_ref().is_some_and(|p| (p.to_f64() - 1.0).abs() <= 0.1));
    Ok((all_pass && order_ok, format!("min digits {min_digits}, orders within 0.1 of 1: {order_ok}")))
}

fn laurent_coherence(s: &Suite) -> Result<(bool, String)> {
    let ok: Vec<bool> = (0..=10u32)
        .into_par_iter()
        .map(|n| {
            let e = laurent_of_gamma(n, &s.ctx, 10)?;
            let r = BigReal::from_rational(&residue(n), s.ctx.bits());
            let c0 = target_value(FormulaId::Heart(n), &s.gamma_ref, &s.ctx);
            Ok((&e.coefficients[0] - r).abs() <= e.error_estimates[0]
                && (&e.coefficients[1] - c0).abs() <= e.error_estimates[1])
        })
        .collect::<Result<_>>()?;
    let failing: Vec<String> = ok.iter().enumerate().filter(|(_, ok)| !**ok).map(|(n, _)| n.to_string()).collect();
    Ok((failing.is_empty(), format!("poles outside their error estimates: [{}]", failing.join(","))))
}

fn extraction(s: &Suite) -> Result<(bool, String)> {
    let estimates: Vec<_> = extraction_formulas()
        .par_iter()
        .map(|&f| extract_gamma(f, &s.x0, s.nodes, &s.ctx))
        .collect::<Result<_>>()?;
    let want = REFERENCE_DIGITS.min(s.ctx.target_digits().saturating_sub(2));
    let reference_ok = estimates.iter().all(|e| e.digits_vs_reference >= want);
    let mut pairwise = u32::MAX;
    for (i, a) in estimates.iter().enumerate() {
        for b in &estimates[i + 1..] {
            pairwise = pairwise.min(digits_of_agreement(&a.value, &b.value));
        }
    }
    let ok = reference_ok && pairwise + 3 >= s.ctx.target_digits();
    Ok((ok, format!("all reach {want} reference digits: {reference_ok}, min pairwise digits {pairwise}")))
}

fn inversion_exactness(s: &Suite) -> Result<(bool, String)> {
    let mut formulas = extraction_formulas();
    formulas.push(FormulaId::Demys);
    let p = s.ctx.bits();
    let g = s.gamma_ref.with_prec(p);
    let worst = max_of(
        formulas.iter().map(|&f| {
            let cf = closed_form(f);
            (cf.invert(&cf.apply(&g, p), p) - &g).abs()
        }),
        p,
    );
    Ok((worst <= s.ulps(2), format!("max abs error {}", worst.to_sci(3))))
}

fn monotone_improvement(s: &Suite) -> Result<(bool, String)> {
    let formulas = [FormulaId::Clubsuit, FormulaId::Heart(5), FormulaId::Diamond, FormulaId::Spade(3)];
    let ok: Vec<bool> = formulas
        .par_iter()
        .map(|&f| {
            let mut prev = 0;
            for k in 2..=s.nodes {
                let d = extract_gamma(f, &s.x0, k, &s.ctx)?.digits_vs_reference;
                if d < prev {
                    return Ok(false);
                }
                prev = d;
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    let ok = ok.iter().all(|b| *b);
    Ok((ok, format!("reference digits non-decreasing in node count: {ok}")))
}

fn checks() -> Vec<(&'static str, Check)> {
    vec![
        ("numerics.richardson_polynomial", richardson_polynomial),
        ("numerics.laurent_polynomial", laurent_polynomial),
        ("numerics.empirical_order_synthetic", order_synthetic),
        ("gamma.recurrence", gamma_recurrence),
        ("gamma.reflection", gamma_reflection),
        ("gamma.euler_product_oracle", euler_product_oracle),
        ("gamma.digamma_finite_difference", digamma_finite_difference),
        ("gamma.near_pole_product", near_pole_product),
        ("harmonic.unit_differences", harmonic_differences),
        ("harmonic.euler_integral", harmonic_euler_integral),
        ("harmonic.digamma_relation", digamma_harmonic_relation),
        ("harmonic.digamma_unit_integral", digamma_integral),
        ("harmonic.vanishing_term", vanishing),
        ("limits.two_sided", two_sided),
        ("limits.unified_dispatch", unified_dispatch),
        ("limits.demys_equivalence", demys_equivalence),
        ("limits.heart_sweep", heart_sweep),
        ("limits.laurent_coherence", laurent_coherence),
        ("extract.reference_and_cross_agreement", extraction),
        ("extract.inversion_exactness", inversion_exactness),
        ("extract.monotone_improvement", monotone_improvement),
    ]
}

/// Runs every check, in parallel, reporting in a fixed order.
pub fn run_suite(ctx: &PrecisionContext) -> Vec<CheckOutcome> {
    let suite = Suite::new(*ctx);
    checks()
        .into_par_iter()
        .map(|(name, check)| match check(&suite) {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}
