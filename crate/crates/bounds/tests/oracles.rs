use indpath_bounds::functions::{f_val, g_exponent, h_val, s_log, thr_bign, thr_lowbd, thr_mono};
use indpath_bounds::verify::{
    bounds_checks, lowbdstretch_check, mono_checks, verify_mono, Verdict,
};
use indpath_bounds::{
    alpha_constant, check_param_fns, default_params, BigReal, BoundContext, DefaultParams, Float,
    Integer, ParamFns, ParamSource, Rational, RationalParams,
};
use proptest::prelude::*;

fn toy_params() -> ParamFns {
    ParamFns::unchecked(RationalParams::constant(
        256,
        Rational::from((1, 4)),
        Rational::from((3, 16)),
        Rational::from((1, 2)),
    ))
}

#[test]
fn alpha_contains_brute_force_partial_sum_plus_tail() {
    const N: u64 = 10_000_000;
    // Neumaier summation of the first N - 9 terms.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 9..N {
        let x = k as f64;
        let term = 1.0 / (x * x.log2() * x.log2());
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    let partial = sum + comp;
    let n = N as f64;
    let integral = std::f64::consts::LN_2.powi(2) / n.ln();
    let first = 1.0 / (n * n.log2() * n.log2());
    // integral_N^inf f <= sum_{k>=N} f(k) <= f(N) + integral_N^inf f
    let lo = partial + integral - 1e-12;
    let hi = partial + integral + first + 1e-12;
    let a = alpha_constant(256);
    assert!(a.lo().to_f64() <= hi && a.hi().to_f64() >= lo, "alpha {a:?} vs [{lo}, {hi}]");
    assert!((a.to_f64() - 0.22).abs() <= 0.005);
}

#[test]
fn phi_zero_matches_closed_form() {
    let d = DefaultParams::new(256);
    let alpha = d.alpha().to_f64();
    let expected = 1.0 / (8.0 * alpha * 10.0 * 10f64.log2().powi(2));
    let got = d.phi(0).to_f64();
    assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
    assert!(d.gamma(-1).contains_rational(&Rational::from(0)));
}

#[test]
fn default_params_are_compliant_up_to_100() {
    let p = default_params(256).unwrap();
    assert!(p.compliant());
    assert!(check_param_fns(&p, 100).unwrap());
}

#[test]
fn rational_params_match_exact_arithmetic() {
    // ell = m^16: ell^(1/4) = m^4, ell^(3/16) = m^3, ell^(1/2) = m^8,
    // and both constants equal 4^16.
    let c = Rational::from(Integer::from(1) << 32);
    for m in 2i64..=5 {
        let ell = BigReal::from_integer(256, &Integer::from(m.pow(16)));
        let ctx = BoundContext::new(2, toy_params(), ell).unwrap();
        for p in [0i64, 1, 7] {
            let pz = Integer::from(p);
            let f = Rational::from(m.pow(4)) - Rational::from((p, 2)) - &c;
            let h = Rational::from(m.pow(3)) + Rational::from((p, 2)) - &c;
            let e = Rational::from(2 * m.pow(8) * (3 * m.pow(4) - p));
            assert!(f_val(&ctx, 2, &pz).unwrap().contains_rational(&f));
            assert!(h_val(&ctx, 2, &pz).unwrap().contains_rational(&h));
            assert!(g_exponent(&ctx, 2, &pz).unwrap().contains_rational(&e));
        }
    }
}

#[test]
fn lowbdstretch_margin_matches_float_oracle() {
    let params = ParamFns::unchecked(RationalParams::constant(
        256,
        Rational::from((1, 8)),
        Rational::from((1, 10)),
        Rational::from((1, 4)),
    ));
    // thr_lowbd = 2^8; n = 2^300 stays inside f64.
    assert!(thr_lowbd(&params, 1).contains_rational(&Rational::from(256)));
    let ell = 300.0f64;
    let ctx = BoundContext::new(1, params, BigReal::from_i64(256, 300)).unwrap();
    let p = 2.0f64;
    let ell3 = ell - 3f64.log2();
    let e3 = 2.0 * ell3.powf(0.25) * (3.0 * ell3.powf(0.125) - p);
    let g = 2f64.powf(ell3) / 12f64.powf(e3);
    let s = (g - 1.0) / 3.0;
    let e = 2.0 * ell.powf(0.25) * (3.0 * ell.powf(0.125) - p);
    let bound_log2 = ell - 12f64.log2() * (e + 1.0);
    let expected = s.log2() - bound_log2;
    let check = lowbdstretch_check(&ctx, 2, &Integer::from(2)).unwrap();
    let got = check.margin.to_f64();
    assert!((got - expected).abs() < 1e-9 * expected.abs().max(1.0), "{got} vs {expected}");
    assert_eq!(check.verdict, Verdict::Pass);
    let sl = s_log(&ctx, 2, &Integer::from(2)).unwrap().to_f64();
    assert!((sl - s.log2()).abs() < 1e-9 * sl.abs());
}

#[test]
fn mono_can_fail_for_non_admissible_params() {
    // phi increasing in t violates the definition; f then increases in t.
    let params = ParamFns::unchecked(RationalParams::new(
        256,
        |t| Rational::from((t + 2, 64)),
        |t| Rational::from((t + 1, 64)) - Rational::from((1, 64)),
        |_| Rational::from((1, 2)),
    ));
    assert_eq!(check_param_fns(&params, 3).unwrap(), false);
    let ell = thr_mono(&params, 1).upper_point().mul_i64(2);
    let ctx = BoundContext::new(1, params, ell).unwrap();
    assert_eq!(verify_mono(&ctx, 1, &Integer::from(0)).unwrap(), false);
}

#[test]
fn raising_precision_keeps_verdicts() {
    let low = ParamFns::unchecked(DefaultParams::new(256));
    let high = ParamFns::unchecked(DefaultParams::new(512));
    for (r, t) in [(1u64, 1i64), (3, 6), (5, 15)] {
        let ell = thr_bign(&low, t, &Integer::from(0)).upper_point().mul_i64(2);
        let a = BoundContext::new(r, low.clone(), ell.clone()).unwrap();
        let b = BoundContext::new(r, high.clone(), ell.with_prec(512)).unwrap();
        for p in [0u32, 2] {
            let p = Integer::from(p);
            let va: Vec<_> = bounds_checks(&a, t, &p).unwrap().into_iter().map(|c| c.verdict).collect();
            let vb: Vec<_> = bounds_checks(&b, t, &p).unwrap().into_iter().map(|c| c.verdict).collect();
            assert_eq!(va, vb);
            let ma: Vec<_> = mono_checks(&a, t, &p).unwrap().into_iter().map(|c| c.verdict).collect();
            let mb: Vec<_> = mono_checks(&b, t, &p).unwrap().into_iter().map(|c| c.verdict).collect();
            assert_eq!(ma, mb);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn g_exponent_increases_with_ell(t in 1i64..12, p in 0u32..4, a in 8.0f64..60.0, step in 0.5f64..20.0) {
        let params = ParamFns::unchecked(DefaultParams::new(128));
        let ell_a = BigReal::from_float(Float::with_val(128, 2f64.powf(a)));
        let ell_b = BigReal::from_float(Float::with_val(128, 2f64.powf(a + step)));
        let ca = BoundContext::new(1, params.clone(), ell_a).unwrap();
        let cb = BoundContext::new(1, params, ell_b).unwrap();
        let p = Integer::from(p);
        let ea = g_exponent(&ca, t, &p).unwrap();
        // Only meaningful while p < 3 ell^phi.
        prop_assume!(ea.is_positive());
        let eb = g_exponent(&cb, t, &p).unwrap();
        prop_assert_eq!(eb.gt(&ea), Some(true));
    }
}
