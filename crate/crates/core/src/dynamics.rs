//! Exact evolution of the commutative phase-space variables under the NC
//! free-particle Hamiltonian.
//!
//! The closed forms are written for the `mu = 1` map, where `2 beta^2 = 1/m`
//! and `2 alpha^2 = m gamma^2`. The constant of motion `Omega` is conserved
//! along them when evaluated with `Coefficients::from_frequency(gamma, m, 1.0)`.

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nc::{Coefficients, PhasePoint};

/// Initial coordinates `x = Q1(0)`, `y = Q2(0)`, `pi_x = Pi1(0)`, `pi_y = Pi2(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialConditions {
    pub x: f64,
    pub y: f64,
    pub pix: f64,
    pub piy: f64,
}

impl InitialConditions {
    pub const fn new(x: f64, y: f64, pix: f64, piy: f64) -> Self {
        InitialConditions { x, y, pix, piy }
    }

    pub fn point(&self) -> PhasePoint {
        PhasePoint::new(self.x, self.y, self.pix, self.piy)
    }

    fn check(&self) -> Result<()> {
        if [self.x, self.y, self.pix, self.piy].iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("non-finite initial conditions {self:?}")))
        }
    }

    fn max_abs(&self) -> f64 {
        [self.x, self.y, self.pix, self.piy]
            .iter()
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

impl From<PhasePoint> for InitialConditions {
    fn from(p: PhasePoint) -> Self {
        InitialConditions::new(p.q1, p.q2, p.pi1, p.pi2)
    }
}

/// A phase point stamped with its time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub point: PhasePoint,
}

/// Sampled trajectory with `Omega` attached to each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub gamma: f64,
    pub mass: f64,
    pub samples: Vec<PhaseState>,
    pub omega: Vec<f64>,
}

impl Trajectory {
    /// Largest `|Omega_k - Omega_0| / |Omega_0|` along the samples.
    pub fn omega_drift(&self) -> f64 {
        let Some(&o0) = self.omega.first() else {
            return 0.0;
        };
        let scale = if o0 != 0.0 { o0.abs() } else { 1.0 };
        self.omega
            .iter()
            .map(|o| (o - o0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Evolution by a fixed time `t`, with the trigonometric factors computed once.
/// Applying it to many points is the hot loop of the Wigner-function code.
#[derive(Debug, Clone, Copy)]
pub struct Propagator {
    /// `cos^2(gamma t)`
    c2: f64,
    /// `sin^2(gamma t) / (m gamma)`
    s2_over_k: f64,
    /// `m gamma sin^2(gamma t)`
    k_s2: f64,
    /// `sin(2 gamma t) / 2`
    half_s: f64,
    /// `sin(2 gamma t) / (2 m gamma)`, which tends to `t/m` as `gamma -> 0`
    half_s_over_k: f64,
    /// `m gamma sin(2 gamma t) / 2`
    k_half_s: f64,
}

impl Propagator {
    pub fn new(gamma: f64, mass: f64, t: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::DegenerateGamma { gamma });
        }
        check_mass_time(mass, t)?;
        let k = mass * gamma;
        let (s, c) = (gamma * t).sin_cos();
        let s2x = (2.0 * gamma * t).sin();
        Ok(Propagator {
            c2: c * c,
            s2_over_k: s * s / k,
            k_s2: k * s * s,
            half_s: 0.5 * s2x,
            half_s_over_k: 0.5 * s2x / k,
            k_half_s: 0.5 * k * s2x,
        })
    }

    /// Free motion, `gamma = 0`.
    pub fn commutative(mass: f64, t: f64) -> Result<Self> {
        check_mass_time(mass, t)?;
        Ok(Propagator {
            c2: 1.0,
            s2_over_k: 0.0,
            k_s2: 0.0,
            half_s: 0.0,
            half_s_over_k: t / mass,
            k_half_s: 0.0,
        })
    }

    /// The closed-form solutions, rewritten with half-angle identities so the
    /// `1/gamma` terms never cancel numerically:
    ///
    /// ```text
    /// Q1  = x c^2 + (pi_y/k) s^2 + (y/2) S + pi_x S/(2k)
    /// Q2  = y c^2 - (pi_x/k) s^2 - (x/2) S + pi_y S/(2k)
    /// Pi1 = pi_x c^2 - k y s^2 + (pi_y/2) S - k x S/2
    /// Pi2 = pi_y c^2 + k x s^2 - (pi_x/2) S - k y S/2
    /// ```
    ///
    /// with `c = cos(gamma t)`, `s = sin(gamma t)`, `S = sin(2 gamma t)`, `k = m gamma`.
    #[inline]
    pub fn apply(&self, p: &PhasePoint) -> PhasePoint {
        let PhasePoint {
            q1: x,
            q2: y,
            pi1: px,
            pi2: py,
        } = *p;
        PhasePoint {
            q1: x * self.c2 + py * self.s2_over_k + y * self.half_s + px * self.half_s_over_k,
            q2: y * self.c2 - px * self.s2_over_k - x * self.half_s + py * self.half_s_over_k,
            pi1: px * self.c2 - y * self.k_s2 + py * self.half_s - x * self.k_half_s,
            pi2: py * self.c2 + x * self.k_s2 - px * self.half_s - y * self.k_half_s,
        }
    }
}

fn check_mass_time(mass: f64, t: f64) -> Result<()> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite time {t}")));
    }
    Ok(())
}

/// State at time `t` from initial conditions `ic`; requires `gamma > 0`.
pub fn evolve(ic: &InitialConditions, gamma: f64, mass: f64, t: f64) -> Result<PhasePoint> {
    ic.check()?;
    Ok(Propagator::new(gamma, mass, t)?.apply(&ic.point()))
}

/// Free-particle straight lines, the `gamma -> 0` limit of [`evolve`]:
/// `Q_k = Q_k(0) + Pi_k(0) t / m`, momenta constant.
pub fn evolve_commutative(ic: &InitialConditions, mass: f64, t: f64) -> Result<PhasePoint> {
    ic.check()?;
    Ok(Propagator::commutative(mass, t)?.apply(&ic.point()))
}

/// Routes to the commutative branch when `|gamma| t_max max|ic| < 1e-10`.
pub fn evolve_auto(ic: &InitialConditions, gamma: f64, mass: f64, t: f64) -> Result<PhasePoint> {
    if uses_commutative_branch(ic, gamma, t.abs()) {
        if gamma != 0.0 {
            warn!("gamma = {gamma:e} is below the closed-form threshold; using free motion");
        }
        evolve_commutative(ic, mass, t)
    } else {
        evolve(ic, gamma, mass, t)
    }
}

fn uses_commutative_branch(ic: &InitialConditions, gamma: f64, t_max: f64) -> bool {
    gamma.abs() * t_max * ic.max_abs() < 1e-10 || gamma == 0.0
}

/// Initial conditions that reach `state` after time `t`: evolution by `-t`.
pub fn invert_evolution(
    state: &PhasePoint,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<InitialConditions> {
    Ok(Propagator::new(gamma, mass, -t)?.apply(state).into())
}

/// Constant of motion
/// `Omega = (alpha/beta) Q^2 + (beta/alpha) Pi^2 + 2 (Pi1 Q2 - Pi2 Q1)`.
pub fn omega(p: &PhasePoint, coeff: &Coefficients) -> f64 {
    let r = coeff.ratio();
    r * (p.q1 * p.q1 + p.q2 * p.q2) + (p.pi1 * p.pi1 + p.pi2 * p.pi2) / r
        + 2.0 * (p.pi1 * p.q2 - p.pi2 * p.q1)
}

/// Evolves `ic` to every time of `t_grid` (strictly increasing). Samples are
/// computed in parallel and returned in grid order.
pub fn sample_trajectory(
    ic: &InitialConditions,
    gamma: f64,
    mass: f64,
    t_grid: &[f64],
) -> Result<Trajectory> {
    ic.check()?;
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
    }
    let t_max = t_grid.iter().fold(0.0, |m: f64, t| m.max(t.abs()));
    let free = uses_commutative_branch(ic, gamma, t_max);
    if free && gamma != 0.0 {
        warn!("gamma = {gamma:e} is below the closed-form threshold; using free motion");
    }
    let samples = t_grid
        .par_iter()
        .map(|&t| {
            let prop = if free {
                Propagator::commutative(mass, t)?
            } else {
                Propagator::new(gamma, mass, t)?
            };
            Ok(PhaseState {
                t,
                point: prop.apply(&ic.point()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let omega = if gamma > 0.0 {
        let coeff = Coefficients::from_frequency(gamma, mass, 1.0);
        samples.iter().map(|s| omega(&s.point, &coeff)).collect()
    } else {
        vec![f64::NAN; samples.len()]
    };
    Ok(Trajectory {
        gamma,
        mass,
        samples,
        omega,
    })
}
