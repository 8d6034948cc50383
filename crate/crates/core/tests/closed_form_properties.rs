use proptest::prelude::*;
use uncoded_bc::closed_forms::*;
use uncoded_bc::params::*;

fn problem(sigma2: f64, rho: f64, power: f64, n1: f64, n2: f64) -> Problem {
    validate_problem(
        SourceParams::new(sigma2, rho),
        ChannelParams::new(power, n1, n2),
    )
    .unwrap()
}

fn desk() -> Problem {
    problem(1.0, 0.5, 1.0, 1.0, 2.0)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

prop_compose! {
    fn any_problem()(
        sigma2 in 0.1f64..10.0,
        rho in 0.0f64..0.99,
        power in 0.05f64..20.0,
        n1 in 0.05f64..5.0,
        gap in 0.01f64..5.0,
    ) -> Problem {
        problem(sigma2, rho, power, n1, n1 + gap)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ratio_invariance(p in any_problem(), a in 0.0f64..1.0, c in 1e-3f64..1e3) {
        let base = uncoded_distortions(&p, UncodedCoeffs::from_alpha(a).unwrap()).unwrap();
        let scaled = uncoded_distortions(&p, UncodedCoeffs::new(c * a, c * (1.0 - a)).unwrap()).unwrap();
        let ulp4 = 4.0 * f64::EPSILON;
        prop_assert!(rel_err(scaled.d1, base.d1) <= ulp4, "{} vs {}", scaled.d1, base.d1);
        prop_assert!(rel_err(scaled.d2, base.d2) <= ulp4, "{} vs {}", scaled.d2, base.d2);
    }

    #[test]
    fn ratio_invariance_is_exact_for_dyadic_scales(p in any_problem(), a in 0.0f64..1.0, k in -20i32..20) {
        let c = 2f64.powi(k);
        let base = uncoded_distortions(&p, UncodedCoeffs::from_alpha(a).unwrap()).unwrap();
        let scaled = uncoded_distortions(&p, UncodedCoeffs::new(c * a, c * (1.0 - a)).unwrap()).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn endpoint_identities(p in any_problem()) {
        let e = uncoded_distortions(&p, UncodedCoeffs::new(1.0, 0.0).unwrap()).unwrap();
        prop_assert!(rel_err(e.d1, d_min(&p, Receiver::One)) <= 1e-12);
        prop_assert!(rel_err(e.d2, d2_star_at_d1min(&p)) <= 1e-12);
        let f = uncoded_distortions(&p, UncodedCoeffs::new(0.0, 1.0).unwrap()).unwrap();
        prop_assert!(rel_err(f.d1, d1_star_at_d2min(&p)) <= 1e-12);
        prop_assert!(rel_err(f.d2, d_min(&p, Receiver::Two)) <= 1e-12);
    }

    #[test]
    fn achievability_meets_converse_below_threshold(p in any_problem(), t in 0.0f64..1.0) {
        let lo = d_min(&p, Receiver::One);
        let hi = d1_star_at_d2min(&p);
        let d1 = lo + t * (hi - lo);
        prop_assume!(d1 < hi);
        prop_assume!(is_uncoded_optimal(&p, d1).unwrap());
        let ctx = ConverseContext::new(&p, d1).unwrap();
        let w = ctx.witness_a_star().unwrap();
        prop_assert!(w.a1() >= 0.0 && w.a2() >= 0.0);
        let d2u = uncoded_distortions(&p, UncodedCoeffs::from_alpha(ctx.alpha()).unwrap()).unwrap().d2;
        let psi = ctx.psi(w).unwrap();
        prop_assert!((d2u - psi).abs() <= 1e-9 * p.sigma2(), "d2u={} psi={}", d2u, psi);
    }

    #[test]
    fn d2_tilde_sandwich(p in any_problem(), t in 0.0f64..1.0) {
        let lo = d_min(&p, Receiver::One);
        let hi = d1_star_at_d2min(&p);
        let d1 = lo + t * (hi - lo);
        prop_assume!(d1 < hi && is_uncoded_optimal(&p, d1).unwrap());
        let dt = d2_tilde_star(&p, d1).unwrap();
        prop_assert!(dt >= lo * (1.0 - 1e-12));
        prop_assert!(dt <= p.sigma2());
    }

    #[test]
    fn alpha_solver_inverts(p in any_problem(), a in 0.0f64..=1.0) {
        let d1 = uncoded_distortions(&p, UncodedCoeffs::from_alpha(a).unwrap()).unwrap().d1;
        let lo = d_min(&p, Receiver::One);
        let hi = d1_star_at_d2min(&p);
        let target = d1.clamp(lo, hi);
        let alpha = solve_alpha_for_d1(&p, target).unwrap();
        let back = uncoded_distortions(&p, UncodedCoeffs::from_alpha(alpha).unwrap()).unwrap().d1;
        prop_assert!((back - target).abs() <= 1e-12 * p.sigma2());
    }
}

#[test]
fn threshold_floor_grid() {
    for k in 1..=9 {
        let rho = k as f64 / 10.0;
        let s = SourceParams::new(1.0, rho);
        let floor = simple_threshold(&s).unwrap();
        let at = gamma_threshold(&s, 1.0 - rho).unwrap().value();
        assert!(rel_err(at, floor) <= 1e-12, "rho={rho}: {at} vs {floor}");
        let c = s.conditional_variance();
        for j in 1..=200 {
            let d1 = c * j as f64 / 201.0;
            let g = gamma_threshold(&s, d1).unwrap().value();
            assert!(g >= floor - 1e-12, "rho={rho} d1={d1}: {g} < {floor}");
        }
    }
}

#[test]
fn witness_maximality_on_grid() {
    let p = desk();
    let lo = d_min(&p, Receiver::One);
    let hi = d1_star_at_d2min(&p);
    for t in [0.0, 0.2, 0.5, 0.8, 0.97] {
        let ctx = ConverseContext::new(&p, lo + t * (hi - lo)).unwrap();
        let best = ctx.psi(ctx.witness_a_star().unwrap()).unwrap();
        for i in 0..=100 {
            for j in 0..=100 {
                let w = BoundWitness::new(0.02 * i as f64, 0.02 * j as f64).unwrap();
                let v = ctx.psi(w).unwrap();
                assert!(
                    best >= v - 1e-9,
                    "t={t} w=({}, {}): {v} > {best}",
                    w.a1(),
                    w.a2()
                );
            }
        }
    }
}

#[test]
fn uncoded_curve_is_monotone_in_alpha() {
    for p in [
        desk(),
        problem(2.0, 0.9, 5.0, 0.5, 3.0),
        problem(1.0, 0.0, 0.3, 1.0, 1.5),
    ] {
        let mut prev = uncoded_distortions(&p, UncodedCoeffs::from_alpha(0.0).unwrap()).unwrap();
        for k in 1..1000 {
            let d = uncoded_distortions(&p, UncodedCoeffs::from_alpha(k as f64 / 999.0).unwrap())
                .unwrap();
            assert!(d.d1 < prev.d1, "d1 not decreasing at k={k}");
            assert!(d.d2 > prev.d2, "d2 not increasing at k={k}");
            prev = d;
        }
    }
}

#[test]
fn above_threshold_is_a_distinct_error() {
    let p = problem(1.0, 0.1, 100.0, 1.0, 2.0);
    let lo = d_min(&p, Receiver::One);
    let hi = d1_star_at_d2min(&p);
    let d1 = 0.5 * (lo + hi);
    assert!(!is_uncoded_optimal(&p, d1).unwrap());
    assert!(matches!(
        witness_a_star(&p, d1),
        Err(uncoded_bc::Error::AboveThreshold { .. })
    ));
    assert!(matches!(
        witness_a_star(&p, hi),
        Err(uncoded_bc::Error::OutOfRange { .. })
    ));
}
