use coupled_riemann::half_riemann::*;
use coupled_riemann::{Error, FluxFunction};
use proptest::prelude::*;

fn burgers() -> FluxFunction {
    FluxFunction::quadratic(0.0)
}

fn quartic() -> FluxFunction {
    FluxFunction::polynomial(vec![0.0, -1.0, -0.5, 0.0, 0.0625])
}

/// Exact Burgers Riemann solution.
fn burgers_exact(ul: f64, ur: f64, xi: f64) -> f64 {
    if ul <= ur {
        xi.clamp(ul, ur)
    } else if xi < 0.5 * (ul + ur) {
        ul
    } else {
        ur
    }
}

#[test]
fn burgers_rarefaction_and_shock() {
    let w = riemann_waves(&burgers(), -1.0, -0.2, 256).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w[0].kind, WaveKind::Rarefaction);
    assert_eq!((w[0].speed_lo, w[0].speed_hi), (-1.0, -0.2));

    let w = riemann_waves(&burgers(), 0.0, -0.75, 256).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(w[0].kind, WaveKind::Shock);
    assert!((w[0].speed_lo + 0.375).abs() < 1e-15);
    assert!(w[0].rh_residual(&burgers()) < 1e-15);
}

#[test]
fn left_fan_matches_exact_solution() {
    let fan = solve_half(&burgers(), -1.0, -0.25, Side::Left, 512).unwrap();
    for i in 0..=50 {
        let xi = -1.5 + 1.5 * i as f64 / 50.0;
        let u = eval_fan(&fan, xi).unwrap();
        if xi < 0.0 {
            assert!((u - burgers_exact(-1.0, -0.25, xi)).abs() < 1e-9, "xi = {xi}");
        }
    }
    assert_eq!(eval_fan(&fan, 0.0).unwrap(), -0.25);
    assert_eq!(fan.supports(), vec![(-1.0, -0.25)]);
}

#[test]
fn right_shock_limits() {
    let f = FluxFunction::quadratic(-1.0);
    let fan = solve_half(&f, -0.75, 0.0, Side::Right, 512).unwrap();
    assert_eq!(fan.waves.len(), 1);
    let s = fan.waves[0].speed_lo;
    assert!((s - 0.625).abs() < 1e-14);
    assert_eq!(eval_fan_limit(&fan, s, Limit::FromBelow).unwrap(), 0.0);
    assert_eq!(eval_fan_limit(&fan, s, Limit::FromAbove).unwrap(), -0.75);
}

#[test]
fn waves_on_the_wrong_side_are_rejected() {
    let r = solve_half(&burgers(), 0.2, 0.6, Side::Left, 256);
    assert!(matches!(r, Err(Error::Admissibility(_))));
    let r = solve_half(&burgers(), 0.2, -0.6, Side::Right, 256);
    assert!(matches!(r, Err(Error::Admissibility(_))));
}

#[test]
fn sonic_wave_touching_interface_is_flagged() {
    let fan = solve_half(&burgers(), -1.0, 0.0, Side::Left, 256).unwrap();
    assert!(fan.waves.iter().any(|w| w.at_interface));
    assert!(fan.has_interior_waves());
}

#[test]
fn empty_fan() {
    let fan = solve_half(&burgers(), 0.4, 0.4, Side::Right, 64).unwrap();
    assert!(fan.is_empty());
    assert!(!fan.has_interior_waves());
    assert_eq!(eval_fan(&fan, 3.0).unwrap(), 0.4);
}

#[test]
fn nonconvex_composite_waves_satisfy_oleinik() {
    let f = quartic();
    // A shock attached to a rarefaction across the inflection point.
    let waves = riemann_waves(&f, -2.5, 1.5, 4096).unwrap();
    assert!(waves.iter().any(|w| w.kind == WaveKind::Shock));
    assert!(waves.iter().any(|w| w.kind == WaveKind::Rarefaction));
    for w in waves.windows(2) {
        assert!(w[0].speed_hi <= w[1].speed_lo + 1e-9);
        assert_eq!(w[0].u_right, w[1].u_left);
    }
    for w in &waves {
        if w.kind == WaveKind::Shock {
            assert!(w.rh_residual(&f) < 1e-8);
            assert!(oleinik_violation(&f, w.u_left, w.u_right, 256) < 1e-8);
        }
    }
}

#[test]
fn oleinik_flags_expansion_shock() {
    // An increasing Burgers jump is not admissible.
    assert!(oleinik_violation(&burgers(), -1.0, 1.0, 64) > 0.1);
    assert_eq!(oleinik_violation(&burgers(), 1.0, -1.0, 64), 0.0);
}

proptest! {
    #[test]
    fn fan_is_monotone_and_entropic(ul in -3.0f64..3.0, ur in -3.0f64..3.0, c in -1.0f64..1.0) {
        let f = FluxFunction::quadratic(c);
        let waves = riemann_waves(&f, ul, ur, 128).unwrap();
        let (lo, hi) = (ul.min(ur), ul.max(ur));
        for w in &waves {
            prop_assert!(w.u_left >= lo - 1e-12 && w.u_left <= hi + 1e-12);
            prop_assert!(w.speed_lo <= w.speed_hi);
            if w.kind == WaveKind::Shock {
                prop_assert!(oleinik_violation(&f, w.u_left, w.u_right, 32) < 1e-9);
            }
        }
    }

    #[test]
    fn quartic_fans_pass_entropy_report(ul in -2.5f64..1.5, ur in -2.5f64..1.5) {
        let f = quartic();
        let waves = riemann_waves(&f, ul, ur, 1024).unwrap();
        for w in &waves {
            if w.kind == WaveKind::Shock {
                prop_assert!(w.rh_residual(&f) < 1e-8);
                prop_assert!(oleinik_violation(&f, w.u_left, w.u_right, 64) < 1e-7);
            }
        }
    }
}
