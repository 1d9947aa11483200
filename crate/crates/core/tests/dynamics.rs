use std::f64::consts::PI;

use ncphase::dynamics::*;
use ncphase::nc::{Coefficients, PhasePoint};
use ncphase::oracle::rk4;
use proptest::prelude::*;

fn ic() -> impl Strategy<Value = InitialConditions> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|[x, y, px, py]| InitialConditions::new(x, y, px, py))
}

proptest! {
    #[test]
    fn periodic_in_half_period(ic in ic(), gamma in 0.05..3.0f64, t in -5.0..5.0f64, m in 0.3..3.0f64) {
        let a = evolve(&ic, gamma, m, t).unwrap();
        let b = evolve(&ic, gamma, m, t + PI / gamma).unwrap();
        let scale = 1.0 + a.to_array().iter().fold(0.0f64, |s, v| s.max(v.abs()));
        prop_assert!(a.max_abs_diff(&b) < 1e-12 * scale * (1.0 + m * gamma + 1.0 / (m * gamma)));
    }

    #[test]
    fn omega_is_conserved(ic in ic(), gamma in 0.05..3.0f64, t in 0.0..20.0f64) {
        let c = Coefficients::from_frequency(gamma, 1.0, 1.0);
        let w0 = omega(&ic.point(), &c);
        let w = omega(&evolve(&ic, gamma, 1.0, t).unwrap(), &c);
        prop_assume!(w0.abs() > 1e-3);
        prop_assert!(((w - w0) / w0).abs() < 1e-10);
    }

    #[test]
    fn inverse_undoes_evolution(ic in ic(), gamma in 0.05..3.0f64, t in -10.0..10.0f64) {
        let p = evolve(&ic, gamma, 1.0, t).unwrap();
        let back = invert_evolution(&p, gamma, 1.0, t).unwrap();
        prop_assert!(back.point().max_abs_diff(&ic.point()) < 1e-12 * (1.0 + 1.0 / gamma));
    }

    #[test]
    fn matches_rk4(ic in ic(), gamma in 0.2..2.0f64) {
        let t = 2.0 * PI / gamma;
        let exact = evolve(&ic, gamma, 1.0, t).unwrap();
        let num = rk4(&ic.point(), gamma, 1.0, t, 8000);
        prop_assert!(exact.max_abs_diff(&num) < 1e-8);
    }
}

#[test]
fn fixed_points() {
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    let p = evolve(&ic, 1.0, 1.0, PI / 2.0).unwrap();
    assert!(p.max_abs_diff(&PhasePoint::new(0.5, -0.5, -0.5, 0.5)) < 1e-15);
    let num = rk4(&ic.point(), 1.0, 1.0, PI / 2.0, 2000);
    assert!(num.max_abs_diff(&PhasePoint::new(0.5, -0.5, -0.5, 0.5)) < 1e-8);
    assert!(evolve(&ic, 1.0, 1.0, PI).unwrap().max_abs_diff(&ic.point()) < 1e-15);
    assert_eq!(evolve(&ic, 1.0, 1.0, 0.0).unwrap(), ic.point());
}

#[test]
fn omega_examples() {
    let c = Coefficients::from_frequency(2.0, 0.5, 1.0);
    assert!((c.ratio() - 1.0).abs() < 1e-15);
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    assert!((omega(&ic.point(), &c) - 1.0).abs() < 1e-15);
    assert_eq!(omega(&PhasePoint::default(), &c), 0.0);
    for t in [0.1, 1.0, 10.0] {
        let p = evolve(&ic, 2.0, 0.5, t).unwrap();
        assert!((omega(&p, &c) - 1.0).abs() < 1e-10);
    }
}

/// Five-point stencils of each coordinate satisfy x''' + 4 gamma^2 x' = 0.
#[test]
fn third_order_equations() {
    let ic = InitialConditions::new(0.7, -0.2, 1.1, 0.4);
    let (gamma, h) = (0.8, 1e-2);
    for &t in &[0.3, 1.7, 4.0] {
        let f = |dt: f64| evolve(&ic, gamma, 1.0, t + dt).unwrap().to_array();
        let (m2, m1, p1, p2) = (f(-2.0 * h), f(-h), f(h), f(2.0 * h));
        for k in 0..4 {
            let d1 = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
            let d3 = (p2[k] - 2.0 * p1[k] + 2.0 * m1[k] - m2[k]) / (2.0 * h * h * h);
            assert!((d3 + 4.0 * gamma * gamma * d1).abs() < 1e-3, "coordinate {k} at t = {t}");
        }
    }
}

#[test]
fn commutative_continuity_is_first_order() {
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    let t = 1.0;
    let line = evolve_commutative(&ic, 1.0, t).unwrap();
    let d = |g: f64| evolve(&ic, g, 1.0, t).unwrap().max_abs_diff(&line);
    let ratio = d(1e-3) / d(5e-4);
    assert!((ratio - 2.0).abs() < 0.01, "ratio {ratio}");
    // tiny gamma: difference of order gamma t^2
    assert!(d(1e-8) < 1e-7);
}

#[test]
fn straight_line_examples() {
    let p = evolve_commutative(&InitialConditions::new(0.0, 0.0, 1.0, 1.0), 1.0, 2.0).unwrap();
    assert_eq!(p, PhasePoint::new(2.0, 2.0, 1.0, 1.0));
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    assert_eq!(evolve_commutative(&ic, 1.0, 0.0).unwrap(), ic.point());
}

#[test]
fn trajectory_samples() {
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    let grid: Vec<f64> = (0..=64).map(|k| PI * k as f64 / 64.0).collect();
    let tr = sample_trajectory(&ic, 1.0, 1.0, &grid).unwrap();
    assert_eq!(tr.samples.len(), 65);
    let (first, last) = (tr.samples[0].point, tr.samples[64].point);
    assert!(first.max_abs_diff(&last) < 1e-15);
    assert!(tr.omega_drift() < 1e-10);

    // gamma = 1/500 stays within 1% of free motion over [0, 1]
    let grid: Vec<f64> = (0..=50).map(|k| k as f64 / 50.0).collect();
    let tr = sample_trajectory(&ic, 1.0 / 500.0, 1.0, &grid).unwrap();
    for s in &tr.samples {
        let line = evolve_commutative(&ic, 1.0, s.t).unwrap();
        assert!((s.point.q1 - line.q1).abs() < 0.01 * line.q1.abs().max(0.5));
        assert!((s.point.pi1 - line.pi1).abs() < 0.01 * line.pi1.abs().max(0.5));
    }
}

#[test]
fn rejects_bad_input() {
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    assert!(evolve(&ic, 0.0, 1.0, 1.0).is_err());
    assert!(evolve(&ic, 1.0, -1.0, 1.0).is_err());
    assert!(evolve(&InitialConditions::new(f64::NAN, 0.0, 0.0, 0.0), 1.0, 1.0, 1.0).is_err());
    assert!(sample_trajectory(&ic, 1.0, 1.0, &[0.0, 1.0, 0.5]).is_err());
}
