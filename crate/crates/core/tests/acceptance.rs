//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::Command;

use gamma_poles::gamma_engine::{digamma, euler_product_gamma, gamma};
use gamma_poles::gamma_extractor::{definition_gamma, digits_of_agreement, extract_gamma, REFERENCE_DIGITS};
use gamma_poles::harmonic::{digamma_unit_integral, harmonic, harmonic_via_euler_integral, vanishing_term};
use gamma_poles::numerics::{geometric_schedule, make_context, PrecisionContext};
use gamma_poles::pole_limits::{
    evaluate_expr, laurent_of_gamma, residue, target_value, verify_formula, FormulaId, Status,
};
use gamma_poles::{BigReal, Result};
use rayon::prelude::*;

struct Setup {
    ctx: PrecisionContext,
    x0: BigReal,
    nodes: usize,
    gamma_ref: BigReal,
}

impl Setup {
    fn new() -> Self {
        let ctx = make_context(30, 10).unwrap();
        Setup { ctx, x0: BigReal::pow2(-10, ctx.bits()), nodes: 16, gamma_ref: definition_gamma(&ctx.escalate(10)) }
    }

    fn num(&self, s: &str) -> BigReal {
        BigReal::parse_decimal(s, self.ctx.bits()).unwrap()
    }
}

fn rel(a: &BigReal, b: &BigReal) -> BigReal {
    (a - b).abs() / b.abs()
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gamma-poles")).args(args).output().expect("binary runs")
}

fn gamma_reproduction(s: &Setup) -> Result<(bool, String)> {
    let mut formulas = vec![FormulaId::Clubsuit];
    formulas.extend((0..=10).map(FormulaId::Heart));
    formulas.extend((1..=10).map(FormulaId::Spade));
    formulas.push(FormulaId::Diamond);
    formulas.extend((0..=10).map(FormulaId::Unified));
    let estimates: Vec<_> =
        formulas.par_iter().map(|&f| extract_gamma(f, &s.x0, s.nodes, &s.ctx)).collect::<Result<_>>()?;
    let short: Vec<String> = estimates
        .iter()
        .filter(|e| e.digits_vs_reference < REFERENCE_DIGITS)
        .map(|e| format!("{}={}", e.formula, e.digits_vs_reference))
        .collect();
    let cli = binary(&["extract", "--formula", "clubsuit"]);
    let cli_json: serde_json::Value = serde_json::from_slice(&cli.stdout).unwrap_or_default();
    let cli_ok = cli.status.success() && cli_json[0]["digits_vs_reference"] == REFERENCE_DIGITS;
    Ok((
        short.is_empty() && cli_ok,
        format!(
            "{}/{} formulas at {REFERENCE_DIGITS} digits, cli extract clubsuit ok: {cli_ok}{}",
            estimates.len() - short.len(),
            estimates.len(),
            if short.is_empty() { String::new() } else { format!(", short: {}", short.join(" ")) }
        ),
    ))
}

fn conjecture_sweep(s: &Setup) -> Result<(bool, String)> {
    let reports: Vec<_> = (0..=20u32)
        .into_par_iter()
        .map(|n| verify_formula(FormulaId::Heart(n), &s.x0, s.nodes, &s.ctx, &s.gamma_ref))
        .collect::<Result<_>>()?;
    let min_digits = reports.iter().map(|r| r.digits_matched).min().unwrap();
    let orders: Vec<f64> = reports.iter().map(|r| r.empirical_order.as_ref().map_or(f64::NAN, |p| p.to_f64())).collect();
    let worst = orders.iter().map(|p| (p - 1.0).abs()).fold(0.0f64, |a, b| if b.is_nan() || b > a { b } else { a });
    let ok = reports.iter().all(|r| r.status == Status::Pass) && min_digits >= 24 && worst <= 0.1;
    Ok((ok, format!("21 reports, min digits_matched {min_digits}, max |order - 1| {worst:.2e}")))
}

fn dispatch_identity(s: &Setup) -> Result<(bool, String)> {
    let nodes = geometric_schedule(&s.x0, s.nodes);
    let pairs: Vec<(FormulaId, FormulaId)> = std::iter::once((FormulaId::Unified(0), FormulaId::Diamond))
        .chain((1..=10).map(|n| (FormulaId::Unified(n), FormulaId::Spade(n))))
        .collect();
    let counts: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|&(u, f)| {
            let mut same = 0;
            for x in &nodes {
                if evaluate_expr(u, x, &s.ctx)? == evaluate_expr(f, x, &s.ctx)? {
                    same += 1;
                }
            }
            Ok((same, nodes.len()))
        })
        .collect::<Result<_>>()?;
    let same: usize = counts.iter().map(|c| c.0).sum();
    let total: usize = counts.iter().map(|c| c.1).sum();
    Ok((same == total, format!("{same}/{total} evaluations bit-identical (n = 0..10)")))
}

fn two_sided(s: &Setup) -> Result<(bool, String)> {
    let mut formulas = vec![FormulaId::Clubsuit];
    formulas.extend((0..=5).map(FormulaId::Heart));
    let digits: Vec<u32> = formulas
        .par_iter()
        .map(|&f| {
            let plus = verify_formula(f, &s.x0, s.nodes, &s.ctx, &s.gamma_ref)?;
            let minus = verify_formula(f, &-&s.x0, s.nodes, &s.ctx, &s.gamma_ref)?;
            Ok(digits_of_agreement(&minus.extrapolated, &plus.extrapolated))
        })
        .collect::<Result<_>>()?;
    let worst = *digits.iter().min().unwrap();
    Ok((worst >= 26, format!("min agreement of +x and -x extrapolations: {worst} digits")))
}

fn laurent_structure(s: &Setup) -> Result<(bool, String)> {
    let tol = s.ctx.pow10(-20);
    let rows: Vec<(bool, bool, BigReal)> = (0..=10u32)
        .into_par_iter()
        .map(|n| {
            let e = laurent_of_gamma(n, &s.ctx, 10)?;
            let r = BigReal::from_rational(&residue(n), s.ctx.bits());
            let c0 = target_value(FormulaId::Heart(n), &s.gamma_ref, &s.ctx);
            let within = (&e.coefficients[0] - r).abs() <= e.error_estimates[0]
                && (&e.coefficients[1] - c0).abs() <= e.error_estimates[1];
            let small = e.error_estimates[0] <= tol && e.error_estimates[1] <= tol;
            let est = if e.error_estimates[1] > e.error_estimates[0] { e.error_estimates[1].clone() } else { e.error_estimates[0].clone() };
            Ok((within, small, est))
        })
        .collect::<Result<_>>()?;
    let within = rows.iter().all(|r| r.0);
    let small = rows.iter().all(|r| r.1);
    let largest = rows.iter().map(|r| r.2.clone()).fold(BigReal::zero(s.ctx.bits()), |a, b| if b > a { b } else { a });
    let e2 = laurent_of_gamma(2, &s.ctx, 10)?;
    let half_ok = (&e2.coefficients[0] - s.num("0.5")).abs() <= e2.error_estimates[0];
    Ok((
        within && small && half_ok,
        format!(
            "n = 0..10 within estimates: {within}, largest estimate {} (<= 1e-20: {small}), n=2 residue 1/2: {half_ok}",
            largest.to_sci(3)
        ),
    ))
}

fn identity_suite(s: &Setup) -> Result<(bool, String)> {
    let c = &s.ctx;
    let p = c.bits();
    let one = BigReal::one(p);
    let mut rec = BigReal::zero(p);
    for z in ["0.1", "0.37", "1.5", "2.71828", "10.3", "47.9", "99.5"] {
        let z = s.num(z);
        let e = rel(&(&z * gamma(&z, c)?.value), &gamma(&(&z + &one), c)?.value);
        if e > rec {
            rec = e;
        }
    }
    let pi = BigReal::pi(p);
    let mut refl = BigReal::zero(p);
    for z in ["0.05", "0.2", "0.33", "0.45", "0.55", "0.8", "0.95"] {
        let z = s.num(z);
        let prod = gamma(&z, c)?.value * gamma(&(&one - &z), c)?.value * (&pi * &z).sin() / &pi;
        let e = rel(&prod, &one);
        if e > refl {
            refl = e;
        }
    }
    let psi_digits = (1..=50u64)
        .map(|n| {
            let psi = digamma(&BigReal::from_u64(n, p), c)?;
            let want = BigReal::from_rational(&harmonic(n - 1).value, p) - &s.gamma_ref;
            Ok(digits_of_agreement(&psi, &want))
        })
        .collect::<Result<Vec<u32>>>()?
        .into_iter()
        .min()
        .unwrap();
    let integral = digamma_unit_integral(c)?.abs();
    let euler: Vec<BigReal> = (0..=30u64)
        .into_par_iter()
        .map(|n| Ok((harmonic_via_euler_integral(n, c)? - BigReal::from_rational(&harmonic(n).value, p)).abs()))
        .collect::<Result<_>>()?;
    let euler = euler.into_iter().fold(BigReal::zero(p), |a, b| if b > a { b } else { a });
    let ok = rec <= c.pow10(-27)
        && refl <= c.pow10(-27)
        && psi_digits >= 28
        && integral <= c.pow10(-28)
        && euler <= c.pow10(-30);
    Ok((
        ok,
        format!(
            "recurrence {}, reflection {}, psi digits {psi_digits}, |int psi(1+t)| {}, Euler integral {}",
            rec.to_sci(2),
            refl.to_sci(2),
            integral.to_sci(2),
            euler.to_sci(2)
        ),
    ))
}

fn oracle_equivalence(s: &Setup) -> Result<(bool, String)> {
    let digits: Vec<u32> = ["0.25", "0.5", "1.5", "3.7"]
        .par_iter()
        .map(|z| {
            let z = s.num(z);
            Ok(digits_of_agreement(&euler_product_gamma(&z, 1_000_000, &s.ctx)?, &gamma(&z, &s.ctx)?.value))
        })
        .collect::<Result<_>>()?;
    let worst = *digits.iter().min().unwrap();
    let thousandths = BigReal::from_rational(&num_rational::BigRational::new(999.into(), 1000.into()), s.ctx.bits());
    let exact = euler_product_gamma(&s.num("1"), 999, &s.ctx)? == thousandths;
    Ok((worst >= 5 && exact, format!("min agreement {worst} digits, z=1 n=999 equals 0.999: {exact}")))
}

fn vanishing(s: &Setup) -> Result<(bool, String)> {
    let terms: Vec<BigReal> = (0..=60u64).map(|n| vanishing_term(n, &s.gamma_ref, &s.ctx).abs()).collect();
    let decreasing = terms[3..].windows(2).all(|w| w[1] < w[0]);
    let small = terms[20] < s.ctx.pow10(-17);
    Ok((decreasing && small, format!("decreasing for n = 3..60: {decreasing}, |term(20)| = {}", terms[20].to_sci(3))))
}

fn demys(s: &Setup) -> Result<(bool, String)> {
    let mut worst = u32::MAX;
    for k in [4, 8, 12] {
        let big = BigReal::pow2(k, s.ctx.bits());
        let a = evaluate_expr(FormulaId::Demys, &big, &s.ctx)?;
        let b = evaluate_expr(FormulaId::Clubsuit, &big.recip(), &s.ctx)?;
        worst = worst.min(digits_of_agreement(&a, &b));
    }
    Ok((worst >= 28, format!("min agreement {worst} digits over X = 16, 256, 4096")))
}

fn determinism(_: &Setup) -> Result<(bool, String)> {
    let a = binary(&["selftest"]);
    let b = binary(&["selftest"]);
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    let csv_a = binary(&["selftest", "--format", "csv"]);
    let csv_b = binary(&["selftest", "--format", "csv"]);
    let same_csv = csv_a.stdout == csv_b.stdout;
    let passed = a.status.success();
    Ok((
        same && same_csv,
        format!("json identical: {same} ({} bytes), csv identical: {same_csv}, selftest exit 0: {passed}", a.stdout.len()),
    ))
}

type Criterion = (&'static str, fn(&Setup) -> Result<(bool, String)>);

fn main() {
    let setup = Setup::new();
    let criteria: [Criterion; 10] = [
        ("gamma reproduction", gamma_reproduction),
        ("conjecture sweep", conjecture_sweep),
        ("dispatch identity", dispatch_identity),
        ("two-sided approach", two_sided),
        ("Laurent structure", laurent_structure),
        ("identity suite", identity_suite),
        ("oracle equivalence", oracle_equivalence),
        ("vanishing term", vanishing),
        ("Demys equivalence", demys),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match check(&setup) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!("criterion {:>2} [PRIMARY] {name}: {} — {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
