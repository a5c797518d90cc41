use gamma_poles::gamma_engine::{gamma, gamma_near_pole, pole_factor};
use gamma_poles::harmonic::harmonic;
use gamma_poles::numerics::{empirical_order, fit_laurent, geometric_schedule, make_context, richardson_extrapolate};
use gamma_poles::pole_limits::{closed_form, evaluate_expr, FormulaId};
use gamma_poles::BigReal;
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> gamma_poles::numerics::PrecisionContext {
    make_context(20, 10).unwrap()
}

fn rel(a: &BigReal, b: &BigReal) -> BigReal {
    (a - b).abs() / b.abs()
}

/// 10^(k - working_digits)
fn ulps(k: i64) -> BigReal {
    ctx().pow10(k - ctx().working_digits() as i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recurrence(z in 0.1f64..100.0) {
        let c = ctx();
        let z = BigReal::from_f64(z, c.bits());
        let lhs = gamma(&(&z + BigReal::one(c.bits())), &c).unwrap().value;
        let rhs = &z * gamma(&z, &c).unwrap().value;
        prop_assert!(rel(&rhs, &lhs) <= ulps(3));
    }

    #[test]
    fn reflection(z in 0.001f64..0.999) {
        let c = ctx();
        let p = c.bits();
        let z = BigReal::from_f64(z, p);
        let pi = BigReal::pi(p);
        let prod = gamma(&z, &c).unwrap().value
            * gamma(&(BigReal::one(p) - &z), &c).unwrap().value
            * (&pi * &z).sin() / &pi;
        prop_assert!(rel(&prod, &BigReal::one(p)) <= ulps(3));
    }

    #[test]
    fn near_pole_matches_direct_evaluation(n in 0u32..15, x in -0.49f64..0.49) {
        prop_assume!(x != 0.0);
        let c = ctx();
        let x = BigReal::from_f64(x, c.bits());
        let near = gamma_near_pole(n, &x, &c).unwrap();
        let restored = &near * pole_factor(n, &x);
        let g1 = gamma(&(&x + BigReal::one(c.bits())), &c).unwrap().value;
        prop_assert!(rel(&restored, &g1) <= ulps(3));
        let direct = gamma(&(&x - BigReal::from_u64(n as u64, c.bits())), &c).unwrap().value;
        prop_assert!(rel(&near, &direct) <= ulps(3));
    }

    #[test]
    fn richardson_reproduces_polynomial_constants(coeffs in prop::collection::vec(-50i64..50, 1..7)) {
        let c = ctx();
        let p = c.bits();
        let nodes = geometric_schedule(&BigReal::pow2(-1, p), coeffs.len() + 1);
        let samples: Vec<_> = nodes.iter().map(|h| {
            let mut v = BigReal::zero(p);
            for k in coeffs.iter().rev() { v = v * h + BigReal::from_i64(*k, p); }
            v = v * h + BigReal::from_i64(7, p);
            (h.clone(), v)
        }).collect();
        let t = richardson_extrapolate(&samples, &BigReal::from_i64(2, p), 1).unwrap();
        prop_assert!(rel(&t.estimate, &BigReal::from_i64(7, p)) <= ulps(2));
    }

    #[test]
    fn laurent_fit_recovers_coefficients(coeffs in prop::collection::vec(1i64..40, 2..6)) {
        let c = ctx();
        let p = c.bits();
        let want: Vec<BigReal> = coeffs.iter().map(|&k| BigReal::from_i64(k, p)).collect();
        let nodes = geometric_schedule(&BigReal::pow2(-2, p), want.len());
        let samples: Vec<_> = nodes.iter().map(|x| {
            let poly = want.iter().rev().fold(BigReal::zero(p), |acc, w| acc * x + w);
            (x.clone(), poly / x)
        }).collect();
        let fit = fit_laurent(&samples, 1, want.len(), &c).unwrap();
        for (got, w) in fit.coefficients.iter().zip(&want) {
            prop_assert!(rel(got, w) <= ulps(2));
        }
    }

    #[test]
    fn empirical_order_on_synthetic_errors(order in 1usize..4, scale in 1i64..1000) {
        let p = ctx().bits();
        let s = BigReal::from_i64(scale, p);
        let tiny = BigReal::pow2(-14, p);
        let data: Vec<_> = geometric_schedule(&BigReal::pow2(-1, p), 6).into_iter().map(|h| {
            let e = &s * h.powi(order) * (BigReal::one(p) + &tiny * &h);
            (h, e)
        }).collect();
        let got = empirical_order(&data).unwrap().to_f64();
        prop_assert!((got - order as f64).abs() <= 0.01);
    }

    #[test]
    fn harmonic_step_is_unit_fraction(n in 1u64..400) {
        let d = harmonic(n).value - harmonic(n - 1).value;
        prop_assert_eq!(d, BigRational::new(1.into(), (n as i64).into()));
    }

    #[test]
    fn unified_dispatch_is_bit_exact(n in 0u32..12, k in 3i32..40, negative in any::<bool>()) {
        let c = ctx();
        let x = BigReal::pow2(-k, c.bits());
        let x = if negative { -x } else { x };
        let other = if n == 0 { FormulaId::Diamond } else { FormulaId::Spade(n) };
        prop_assert_eq!(evaluate_expr(FormulaId::Unified(n), &x, &c).unwrap(), evaluate_expr(other, &x, &c).unwrap());
    }

    #[test]
    fn closed_forms_invert_exactly(n in 0u32..25) {
        let p = 256;
        let g = BigReal::parse_decimal("0.5772156649015328606065120900824024310421", p).unwrap();
        let mut fs = vec![FormulaId::Heart(n), FormulaId::Unified(n)];
        if n > 0 { fs.push(FormulaId::Spade(n)); }
        for f in fs {
            let cf = closed_form(f);
            prop_assert!((cf.invert(&cf.apply(&g, p), p) - &g).abs() <= BigReal::pow2(-240, p));
        }
    }
}
