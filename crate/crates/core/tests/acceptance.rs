//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false`.

use std::f64::consts::PI;
use std::time::Instant;

use ncphase::dynamics::{evolve, evolve_auto, evolve_commutative, sample_trajectory, InitialConditions};
use ncphase::nc::{derive_sw_params, nc_coefficients, NcParams};
use ncphase::numerics::QuadratureSpec;
use ncphase::oracle::{brute_inner_sum, rk4};
use ncphase::qinfo::{closed_form_entropies, linear_entropies, mutual_information};
use ncphase::thermo::{
    free2d_closed_forms, inner_sum_closed, log_grid, sweep, thermo_variables, ModelId, ThermoContext,
};
use ncphase::wigner::{reduce_wigner, stargen_energy, Axis, Axis12, GaussianState, Grid2d};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn free_gas_closed_forms() -> Outcome {
    let ctx = ThermoContext::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for sigma in log_grid(0.1, 10.0, 31) {
        let p = thermo_variables(ModelId::Free2dNc, sigma, 1.0, &ctx).expect("free gas point");
        let (u, s, cv) = free2d_closed_forms(sigma).expect("closed forms");
        worst = worst.max(rel(p.u, u)).max(rel(p.s, s)).max(rel(p.cv, cv));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && secs < 1.0,
        format!("max rel err {worst:.2e} (< 1e-10), {secs:.3} s (< 1 s)"),
    )
}

fn quantization() -> Outcome {
    let (eta, mass, hbar) = (0.8, 1.3, 1.0);
    let mut spacing: f64 = 0.0;
    let mut spread: f64 = 0.0;
    let gammas: Vec<f64> = [(0.0, 1.0), (0.4, 0.7), (1.1, 2.5), (0.05, 0.3)]
        .iter()
        .map(|&(theta, mu)| {
            let nc = NcParams::new(theta, eta, hbar, mass).expect("valid parameters");
            let sw = derive_sw_params(&nc, mu).expect("map exists");
            nc_coefficients(&nc, &sw).gamma
        })
        .collect();
    for n in 0..100u32 {
        let energies: Vec<f64> = gammas.iter().map(|&g| stargen_energy(n, g, hbar)).collect();
        let e0 = energies[0];
        spread = spread.max(energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max));
        let step = stargen_energy(n + 1, gammas[0], hbar) - e0;
        let want = 2.0 * hbar * gammas[0];
        spacing = spacing.max((step - want).abs() / (f64::EPSILON * stargen_energy(n + 1, gammas[0], hbar)));
    }
    outcome(
        spacing <= 2.0 && spread == 0.0,
        format!("spacing off 2 hbar gamma by {spacing:.1} ulp of E_n+1 (<= 2), spread over (theta, mu) {spread:e}"),
    )
}

fn dynamics() -> Outcome {
    let ics = [
        InitialConditions::new(0.5, 0.5, 0.5, 0.5),
        InitialConditions::new(1.0, -2.0, 0.3, 1.7),
        InitialConditions::new(-0.4, 0.0, -1.2, 0.9),
    ];
    let (mut drift, mut rk, mut period): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &gamma in &[1.0, 0.5, 0.2, 0.05] {
        let half = PI / gamma;
        let grid: Vec<f64> = (0..=256).map(|k| half * k as f64 / 256.0).collect();
        for ic in &ics {
            let tr = sample_trajectory(ic, gamma, 1.0, &grid).expect("trajectory");
            drift = drift.max(tr.omega_drift());
            let t_end = 2.0 * half;
            for k in 1..=4 {
                let t = t_end * k as f64 / 4.0;
                let exact = evolve(ic, gamma, 1.0, t).expect("closed form");
                let num = rk4(&ic.point(), gamma, 1.0, t, 4000 * k);
                rk = rk.max(exact.max_abs_diff(&num));
            }
            for &t in &[0.0, 0.37, 1.9] {
                let a = evolve(ic, gamma, 1.0, t).expect("closed form");
                let b = evolve(ic, gamma, 1.0, t + half).expect("closed form");
                period = period.max(a.max_abs_diff(&b));
            }
        }
    }
    outcome(
        drift < 1e-10 && rk < 1e-8 && period < 1e-12,
        format!("Omega drift {drift:.2e} (< 1e-10), vs RK4 {rk:.2e} (< 1e-8), period pi/gamma {period:.2e} (< 1e-12)"),
    )
}

fn commutative_limit() -> Outcome {
    let ic = InitialConditions::new(0.5, 0.5, 0.5, 0.5);
    let mut worst: f64 = 0.0;
    for k in 0..=100 {
        let t = k as f64 / 100.0;
        let nc = evolve_auto(&ic, 1e-6, 1.0, t).expect("evolution");
        let line = evolve_commutative(&ic, 1.0, t).expect("free motion");
        worst = worst.max(nc.max_abs_diff(&line));
    }
    outcome(worst < 1e-5, format!("max |gamma=1e-6 - straight line| = {worst:.2e} (< 1e-5)"))
}

fn entropies() -> Outcome {
    let g = GaussianState::new(3.0, 1.0, -1.0).expect("state");
    let spec = QuadratureSpec::default();
    let start = Instant::now();
    let (mut s, mut i) = (0.0f64, 0.0f64);
    for k in 0..25 {
        let gt = 2.0 * PI * k as f64 / 24.0;
        let e = linear_entropies(&g, 1.0, 1.0, gt, &spec).expect("entropies");
        let c = closed_form_entropies(1.0, gt);
        s = s.max((e.s1 - c.s1).abs()).max((e.s2 - c.s2).abs()).max((e.s12 - c.s12).abs());
        i = i.max((e.i12() - mutual_information(1.0, gt)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let revival = mutual_information(1.0, 0.0).max(mutual_information(1.0, PI));
    outcome(
        s < 1e-4 && i < 1e-4 && revival < 1e-30 && secs < 60.0,
        format!("S max err {s:.2e}, I12 max err {i:.2e} (< 1e-4), I12(0), I12(pi/gamma) <= {revival:.1e}, {secs:.1} s (< 60 s)"),
    )
}

fn revival() -> Outcome {
    let g = GaussianState::new(3.0, 1.0, -1.0).expect("state");
    let grid = Grid2d {
        q: Axis::uniform(-3.0, 3.0, 31).expect("axis"),
        pi: Axis::uniform(-4.0, 4.0, 41).expect("axis"),
    };
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for axis in [Axis12::One, Axis12::Two] {
        let w0 = reduce_wigner(&g, axis, 1.0, 1.0, 0.0, &grid, &spec).expect("t = 0");
        let w1 = reduce_wigner(&g, axis, 1.0, 1.0, PI, &grid, &spec).expect("t = pi/gamma");
        worst = worst.max(w0.max_abs_diff(&w1));
    }
    outcome(worst < 1e-8, format!("max pointwise |t=pi/gamma - t=0| = {worst:.2e} (< 1e-8)"))
}

fn rotor_degeneracy() -> Outcome {
    let p = thermo_variables(ModelId::Rotor2dNc, 50.0, 1.0, &ThermoContext::default()).expect("rotor point");
    let d = (p.s - 2f64.ln()).abs();
    outcome(d <= 1e-6, format!("S/k_B = {:.12} vs ln 2, |diff| {d:.2e} (<= 1e-6)", p.s))
}

fn deviation_peaks() -> Outcome {
    let sigmas = log_grid(0.1, 20.0, 60);
    let ctx = ThermoContext::default();
    let peak = |model: ModelId| -> f64 {
        let rows = sweep(&[model], &sigmas, &[1.0], &ctx, None).expect("sweep");
        rows.iter()
            .filter_map(|r| r.delta.map(|d| (r.sigma, d.2.abs())))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(s, _)| s)
            .unwrap_or(f64::NAN)
    };
    let (p2, p3) = (peak(ModelId::Rotor2dNc), peak(ModelId::Rotor3dNc));
    outcome(
        (3.0..=7.0).contains(&p2) && (1.5..=4.0).contains(&p3),
        format!("argmax |dCv| at sigma = {p2:.3} (2D, in [3, 7]), {p3:.3} (3D, in [1.5, 4])"),
    )
}

fn inner_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for &sigma in &[0.1, 1.0, 5.0] {
        for ell in 0..=50 {
            worst = worst.max(rel(inner_sum_closed(ell, sigma), brute_inner_sum(ell, sigma)));
        }
    }
    outcome(worst < 1e-12, format!("max rel err {worst:.2e} (< 1e-12)"))
}

fn thermo_identity() -> Outcome {
    let sigmas = log_grid(0.1, 20.0, 60);
    let lambdas = [0.01, 0.1, 1.0, 10.0];
    let rows = sweep(&ModelId::ALL, &sigmas, &lambdas, &ThermoContext::default(), None).expect("sweep");
    let mut worst: f64 = 0.0;
    let mut min_cv = f64::INFINITY;
    let mut errors = 0;
    for r in &rows {
        match r.point {
            Some(p) => {
                worst = worst.max(p.identity_residual());
                min_cv = min_cv.min(p.cv);
            }
            None => errors += 1,
        }
    }
    outcome(
        worst < 1e-10 && min_cv >= 0.0 && errors == 0,
        format!(
            "{} points, max |S - ln Z - sigma U| {worst:.2e} (< 1e-10), min Cv {min_cv:.2e} (>= 0), {errors} failed points",
            rows.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("free 2D closed forms via series", free_gas_closed_forms),
        ("quantized spectrum", quantization),
        ("dynamics: Omega, RK4, period", dynamics),
        ("commutative limit", commutative_limit),
        ("entropy closed forms", entropies),
        ("reduced Wigner revival", revival),
        ("2D NC rotor entropy ln 2", rotor_degeneracy),
        ("deviation peaks", deviation_peaks),
        ("3D inner-sum identity", inner_sum),
        ("thermodynamic identity and Cv >= 0", thermo_identity),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
