//! Built-in oracle checks: each compares a fast path against an independent
//! computation or a closed form.

use std::f64::consts::PI;

use super::table::{format_num, Table};
use crate::dynamics::{evolve, omega, InitialConditions, Propagator};
use crate::error::Result;
use crate::nc::{
    derive_sw_params, jacobian_det, sw_forward, sw_forward_matrix, sw_inverse, validate_algebra, Coefficients,
    NcParams, PhasePoint,
};
use crate::numerics::{QuadratureSpec, SeriesControl};
use crate::oracle::{brute_inner_sum, det4, laguerre_explicit, rk4};
use crate::qinfo::{closed_form_entropies, linear_entropies};
use crate::thermo::{free2d_closed_forms, inner_sum_closed, thermo_variables, ModelId, ThermoContext};
use crate::wigner::{laguerre, GaussianState};

#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation seen.
    pub deviation: f64,
    pub tolerance: f64,
}

fn check(name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> SelfCheck {
    let deviation = f().unwrap_or(f64::INFINITY);
    SelfCheck {
        name,
        passed: deviation <= tolerance,
        deviation,
        tolerance,
    }
}

/// Deterministic sample points in `[-2, 2]^4`.
fn sample_points(n: usize) -> Vec<PhasePoint> {
    (0..n)
        .map(|k| {
            let f = |j: usize| 2.0 * ((k * 4 + j) as f64 * 0.754_877_666).fract() * 2.0 - 2.0;
            PhasePoint::new(f(0), f(1), f(2), f(3))
        })
        .collect()
}

pub fn run_selftest() -> Vec<SelfCheck> {
    let nc = NcParams::natural(0.3, 0.8);
    let mut out = Vec::new();

    out.push(check("sw round trip", 1e-12, || {
        let nc = nc.clone()?;
        let sw = derive_sw_params(&nc, 1.3)?;
        let mut worst: f64 = 0.0;
        for p in sample_points(200) {
            let back = sw_inverse(&sw, &nc, &sw_forward(&sw, &nc, &p))?;
            worst = worst.max(back.max_abs_diff(&p));
        }
        Ok(worst)
    }));
    out.push(check("sw algebra", 1e-12, || {
        let nc = nc.clone()?;
        Ok(validate_algebra(&derive_sw_params(&nc, 0.7)?, &nc).max_residual())
    }));
    out.push(check("sw jacobian", 1e-12, || {
        let nc = nc.clone()?;
        let sw = derive_sw_params(&nc, 1.1)?;
        Ok((det4(&sw_forward_matrix(&sw, &nc)) - jacobian_det(&nc)).abs())
    }));
    out.push(check("closed form vs rk4", 1e-8, || {
        let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
        let mut worst: f64 = 0.0;
        for &gamma in &[1.0, 0.5, 0.2] {
            let t = 2.0 * PI / gamma;
            let exact = evolve(&ic, gamma, 1.0, t)?;
            let num = rk4(&ic.point(), gamma, 1.0, t, 20_000);
            worst = worst.max(exact.max_abs_diff(&num));
        }
        Ok(worst)
    }));
    out.push(check("half period revival", 1e-12, || {
        let p = PhasePoint::new(0.3, -1.2, 0.8, 0.1);
        let back = Propagator::new(1.7, 1.0, PI / 1.7)?.apply(&p);
        Ok(back.max_abs_diff(&p))
    }));
    out.push(check("omega drift", 1e-10, || {
        let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
        let c = Coefficients::from_frequency(1.0, 1.0, 1.0);
        let w0 = omega(&ic.point(), &c);
        let mut worst: f64 = 0.0;
        for k in 0..=64 {
            let p = evolve(&ic, 1.0, 1.0, PI * k as f64 / 64.0)?;
            worst = worst.max(((omega(&p, &c) - w0) / w0).abs());
        }
        Ok(worst)
    }));
    out.push(check("laguerre recurrence", 1e-10, || {
        let mut worst: f64 = 0.0;
        for n in 0..12 {
            for &x in &[0.0, 0.5, 1.3, 4.0] {
                let e = laguerre_explicit(n, x);
                worst = worst.max((laguerre(n, x) - e).abs() / (1.0 + e.abs()));
            }
        }
        Ok(worst)
    }));
    out.push(check("entropy closed forms", 1e-4, || {
        let g = GaussianState::new(3.0, 1.0, -1.0)?;
        let e = linear_entropies(&g, 1.0, 1.0, PI / 3.0, &QuadratureSpec::default())?;
        let c = closed_form_entropies(1.0, PI / 3.0);
        Ok((e.s1 - c.s1).abs().max((e.s2 - c.s2).abs()).max((e.s12 - c.s12).abs()))
    }));
    out.push(check("free gas closed forms", 1e-10, || {
        let ctx = ThermoContext::default();
        let mut worst: f64 = 0.0;
        for &sigma in &[0.1, 1.0, 10.0] {
            let p = thermo_variables(ModelId::Free2dNc, sigma, 1.0, &ctx)?;
            let (u, s, cv) = free2d_closed_forms(sigma)?;
            for (a, b) in [(p.u, u), (p.s, s), (p.cv, cv)] {
                worst = worst.max(((a - b) / b).abs());
            }
        }
        Ok(worst)
    }));
    out.push(check("3d inner sum", 1e-12, || {
        let mut worst: f64 = 0.0;
        for &sigma in &[0.1, 1.0, 5.0] {
            for ell in 0..=50 {
                let b = brute_inner_sum(ell, sigma);
                worst = worst.max(((inner_sum_closed(ell, sigma) - b) / b).abs());
            }
        }
        Ok(worst)
    }));
    out.push(check("rotor ground degeneracy", 1e-6, || {
        let ctx = ThermoContext {
            series: SeriesControl::default(),
            ..ThermoContext::default()
        };
        let p = thermo_variables(ModelId::Rotor2dNc, 50.0, 1.0, &ctx)?;
        Ok((p.s - 2f64.ln()).abs())
    }));
    out
}

pub fn table(checks: &[SelfCheck]) -> Table {
    let mut t = Table::new(&["check", "status", "deviation", "tolerance"]);
    for c in checks {
        t.push(vec![
            c.name.into(),
            if c.passed { "pass" } else { "FAIL" }.into(),
            format_num(c.deviation).into(),
            format_num(c.tolerance).into(),
        ]);
    }
    t
}
