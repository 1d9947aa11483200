//! Purity-based linear entropies of the Gaussian envelope and the mutual
//! information between the two phase-space sectors.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::QuadratureSpec;
use crate::wigner::{reduce_frame, Axis, Axis12, EnvelopeFrame, GaussianState, Grid2d, ReducedWigner};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTriple {
    pub s1: f64,
    pub s2: f64,
    pub s12: f64,
    pub t: f64,
    pub gamma: f64,
}

impl EntropyTriple {
    /// `I12 = S1 + S2 - S12`.
    pub fn i12(&self) -> f64 {
        self.s1 + self.s2 - self.s12
    }
}

/// Panel counts for the grids the reduced purities are summed on. Each panel
/// carries 16 Gauss-Legendre nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntropyGrid {
    pub q_panels: usize,
    pub pi_panels: usize,
}

impl Default for EntropyGrid {
    fn default() -> Self {
        EntropyGrid {
            q_panels: 2,
            pi_panels: 6,
        }
    }
}

/// `(2a sqrt(2 pi) / hbar) * integral of rho~^2 dQ dPi`, summed with the grid's
/// quadrature weights.
pub fn purity_reduced(rw: &ReducedWigner, a: f64, hbar: f64) -> Result<f64> {
    if !(a > 0.0 && hbar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "purity needs a, hbar > 0 (a {a}, hbar {hbar})"
        )));
    }
    let p = 2.0 * a * (2.0 * PI).sqrt() / hbar * rw.weighted_sum(2);
    if !p.is_finite() {
        return Err(Error::QuadratureFailure {
            estimate: p,
            error: f64::NAN,
            panels: rw.values.len(),
        });
    }
    Ok(p)
}

/// Closed forms `S1 = S2 = 1 - |cos gamma t|`, `S12 = 1 - cos^2 gamma t`.
pub fn closed_form_entropies(gamma: f64, t: f64) -> EntropyTriple {
    let c = (gamma * t).cos().abs();
    EntropyTriple {
        s1: 1.0 - c,
        s2: 1.0 - c,
        s12: 1.0 - c * c,
        t,
        gamma,
    }
}

/// `(1 - |cos gamma t|)^2`.
pub fn mutual_information(gamma: f64, t: f64) -> f64 {
    let d = 1.0 - (gamma * t).cos().abs();
    d * d
}

/// Grid on which the reduced function of `axis` is resolved: Gauss-Legendre
/// over the box in `Q`, a tangent map in `Pi` centred on the ridge.
pub fn entropy_grid(frame: &EnvelopeFrame, axis: Axis12, panels: EntropyGrid) -> Result<Grid2d> {
    let a = frame.state.a;
    let (center, scale) = frame.kept_momentum_window(axis).unwrap_or((0.0, 1.0));
    Ok(Grid2d {
        q: Axis::gauss_legendre(-a, a, panels.q_panels)?,
        pi: Axis::real_line(center, scale, panels.pi_panels)?,
    })
}

/// Numeric linear entropies. Natural units (`hbar = 1`), matching the unit
/// momentum width of the envelope.
pub fn linear_entropies(
    g: &GaussianState,
    gamma: f64,
    mass: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<EntropyTriple> {
    linear_entropies_on(g, gamma, mass, t, spec, EntropyGrid::default())
}

pub fn linear_entropies_on(
    g: &GaussianState,
    gamma: f64,
    mass: f64,
    t: f64,
    spec: &QuadratureSpec,
    panels: EntropyGrid,
) -> Result<EntropyTriple> {
    spec.validate()?;
    let hbar = 1.0;
    let frame = EnvelopeFrame::new(*g, gamma, mass, t)?;

    let reduced = |axis: Axis12| -> Result<f64> {
        let grid = entropy_grid(&frame, axis, panels)?;
        let values = reduce_frame(&frame, axis, &grid, spec)?;
        let rw = ReducedWigner {
            axis,
            t,
            grid,
            values,
        };
        purity_reduced(&rw, g.a, hbar)
    };
    let p1 = reduced(Axis12::One)?;
    let p2 = reduced(Axis12::Two)?;

    // The full state factorizes in the inverted momenta, so its purity is a
    // product of a box area and a 2D momentum integral.
    let p12 = match (frame.moment(1, spec)?, frame.moment(2, spec)?) {
        (Some(m1), Some(m2)) => {
            8.0 * PI * g.a * g.a / (hbar * hbar) * m2 / (m1 * m1)
        }
        _ => 0.0,
    };
    Ok(EntropyTriple {
        s1: 1.0 - p1,
        s2: 1.0 - p2,
        s12: 1.0 - p12,
        t,
        gamma,
    })
}

/// [`linear_entropies`] over many times, in parallel, in input order.
pub fn entropy_series(
    g: &GaussianState,
    gamma: f64,
    mass: f64,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<EntropyTriple>> {
    times
        .par_iter()
        .map(|&t| linear_entropies(g, gamma, mass, t, spec))
        .collect()
}
