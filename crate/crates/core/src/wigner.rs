//! Wigner functions of the NC free particle: Laguerre star-genstates, their
//! momentum marginals, and the time-dependent Gaussian momentum envelope with
//! its reduced (one sector traced out) functions on grids.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::dynamics::{omega, InitialConditions, Propagator};
use crate::error::{Error, Result};
use crate::nc::{Coefficients, PhasePoint};
use crate::numerics::{gauss_legendre_16, integrate_1d, integrate_2d, integrate_2d_with, Interval, QuadratureSpec};

/// Laguerre polynomial `L_n(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `E_n = hbar gamma (2n + 1)`.
pub fn stargen_energy(n: u32, gamma: f64, hbar: f64) -> f64 {
    hbar * gamma * (2.0 * n as f64 + 1.0)
}

/// Quantized NC free-particle state
/// `N (-1)^n / (pi hbar) exp(-Omega/hbar) L_n(Omega/hbar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StargenState {
    pub n: u32,
    pub coeff: Coefficients,
    pub hbar: f64,
    /// Half-width of the position localization box.
    pub a: f64,
    pub norm: f64,
}

impl StargenState {
    /// State with `norm = 1`; see [`momentum_marginal`] for the normalized one.
    pub fn new(n: u32, coeff: Coefficients, hbar: f64, a: f64) -> Result<Self> {
        if !(coeff.alpha2 > 0.0 && coeff.beta2 > 0.0) {
            return Err(Error::InvalidParameter(
                "star-genstates need alpha, beta > 0 (eta > 0)".into(),
            ));
        }
        if !(hbar > 0.0 && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar and a must be positive (hbar {hbar}, a {a})"
            )));
        }
        Ok(StargenState {
            n,
            coeff,
            hbar,
            a,
            norm: 1.0,
        })
    }

    pub fn energy(&self) -> f64 {
        stargen_energy(self.n, self.coeff.gamma, self.hbar)
    }
}

pub fn stargen_density(s: &StargenState, p: &PhasePoint) -> f64 {
    let u = omega(p, &s.coeff) / s.hbar;
    let sign = if s.n.is_multiple_of(2) { 1.0 } else { -1.0 };
    s.norm * sign / (PI * s.hbar) * (-u).exp() * laguerre(s.n, u)
}

/// How the marginal normalization constant was fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `integral of |phi|^2 dPi1 = 1`.
    Signed,
    /// The signed integral vanishes (every `n >= 1`), so the absolute mass
    /// `integral of ||phi|^2| dPi1` is set to 1 instead.
    Absolute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumMarginal {
    /// State with its normalization constant filled in.
    pub state: StargenState,
    pub normalization: Normalization,
    pub pi1: Vec<f64>,
    pub density: Vec<f64>,
}

/// Integrates the star-genstate over `Q2` in the localization box and over all
/// `Pi2`, at fixed `(Q1, Pi1)`. Uses the state's own `norm`.
///
/// The box is centred on the initial coordinate `y`.
pub fn reduced_stargen(
    s: &StargenState,
    y: f64,
    q1: f64,
    pi1: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let r = s.coeff.ratio();
    // Omega is minimal in Pi2 at Pi2 = (alpha/beta) Q1.
    let inner = Interval::Real {
        center: r * q1,
        scale: stargen_width(s),
    };
    let est = integrate_2d(
        |q2, pi2| stargen_density(s, &PhasePoint::new(q1, q2, pi1, pi2)),
        Interval::Finite(y - s.a, y + s.a),
        inner,
        spec,
    )?;
    Ok(est.value)
}

fn stargen_width(s: &StargenState) -> f64 {
    (s.coeff.ratio() * s.hbar * (2.0 * s.n as f64 + 1.0)).sqrt()
}

/// Momentum distribution `|phi(Pi1; 0)|^2 = 2a * reduced(Q1, Pi1)` on a grid,
/// normalized over the whole `Pi1` axis. The result does not depend on `x`,
/// `pi_x` or `pi_y`; only `y` (the centre of the `Q2` box) enters.
pub fn momentum_marginal(
    s: &StargenState,
    ic: &InitialConditions,
    pi1_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<MomentumMarginal> {
    let raw_state = StargenState { norm: 1.0, ..*s };
    let y = ic.y;
    let raw = |pi1: f64| -> Result<f64> {
        Ok(2.0 * s.a * reduced_stargen(&raw_state, y, 0.0, pi1, spec)?)
    };

    let r = s.coeff.ratio();
    let axis = Interval::Real {
        center: -r * y,
        scale: stargen_width(s) + r * s.a,
    };
    let (signed, absolute) = {
        let failure = std::cell::Cell::new(None);
        let eval = |pi1: f64| match raw(pi1) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        };
        let signed = integrate_1d(eval, axis, spec);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let signed = signed?.value;
        let absolute = integrate_1d(|p| eval(p).abs(), axis, spec);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        (signed, absolute?.value)
    };
    if !(absolute > 0.0) {
        return Err(Error::QuadratureFailure {
            estimate: absolute,
            error: f64::NAN,
            panels: 0,
        });
    }
    let (total, normalization) = if signed.abs() > 1e-6 * absolute {
        (signed, Normalization::Signed)
    } else {
        (absolute, Normalization::Absolute)
    };
    let norm = (1.0 / total).abs();
    let state = StargenState { norm, ..*s };

    let density = pi1_grid
        .par_iter()
        .map(|&p| raw(p).map(|v| v * norm))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentumMarginal {
        state,
        normalization,
        pi1: pi1_grid.to_vec(),
        density,
    })
}

/// Gaussian momentum envelope
/// `(4 pi a^2)^-1 exp(-[(pi~_x - pi_x)^2 + (pi~_y - pi_y)^2])`, where `pi~` are
/// the initial momenta that evolve into the evaluation point. Unit momentum
/// width, natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub a: f64,
    pub pix: f64,
    pub piy: f64,
}

impl GaussianState {
    pub fn new(a: f64, pix: f64, piy: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !pix.is_finite() || !piy.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invalid Gaussian state a = {a}, pi = ({pix}, {piy})"
            )));
        }
        Ok(GaussianState { a, pix, piy })
    }

    /// Peak value `(4 pi a^2)^-1`.
    pub fn peak(&self) -> f64 {
        1.0 / (4.0 * PI * self.a * self.a)
    }

    /// Envelope as a function of the initial momenta.
    #[inline]
    fn at_initial(&self, pix0: f64, piy0: f64) -> f64 {
        let dx = pix0 - self.pix;
        let dy = piy0 - self.piy;
        self.peak() * (-(dx * dx + dy * dy)).exp()
    }
}

/// The envelope at time `t`, with the inverse evolution prepared once.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeFrame {
    pub state: GaussianState,
    pub t: f64,
    back: Propagator,
    /// `d pi~ / d Pi` as columns: `[d pi~/d Pi1, d pi~/d Pi2]`.
    dpi: [[f64; 2]; 2],
}

impl EnvelopeFrame {
    /// `gamma = 0` is stationary: `pi~ = Pi`.
    pub fn new(state: GaussianState, gamma: f64, mass: f64, t: f64) -> Result<Self> {
        let back = if gamma == 0.0 {
            Propagator::commutative(mass, -t)?
        } else {
            Propagator::new(gamma, mass, -t)?
        };
        // The inverse evolution is linear, so differences of unit vectors give
        // its momentum block exactly.
        let e1 = back.apply(&PhasePoint::new(0.0, 0.0, 1.0, 0.0));
        let e2 = back.apply(&PhasePoint::new(0.0, 0.0, 0.0, 1.0));
        Ok(EnvelopeFrame {
            state,
            t,
            back,
            dpi: [[e1.pi1, e1.pi2], [e2.pi1, e2.pi2]],
        })
    }

    #[inline]
    pub fn density(&self, p: &PhasePoint) -> f64 {
        let b = self.back.apply(p);
        self.state.at_initial(b.pi1, b.pi2)
    }

    /// True when `|cos gamma t|` is below `1e-12`: the envelope is then
    /// constant along a momentum line and the normalized state is zero to
    /// well below any quadrature tolerance.
    pub fn is_flat(&self) -> bool {
        self.momentum_jacobian() < 1e-24
    }

    /// `|det d pi~ / d Pi|`.
    pub fn momentum_jacobian(&self) -> f64 {
        let [c1, c2] = self.dpi;
        (c1[0] * c2[1] - c1[1] * c2[0]).abs()
    }

    /// `integral over the box and all momenta of density^power`, computed in
    /// the inverted momentum variables. Returns `None` if the envelope is
    /// momentarily flat along a momentum direction (zero Jacobian).
    pub fn moment(&self, power: i32, spec: &QuadratureSpec) -> Result<Option<f64>> {
        if self.is_flat() {
            return Ok(None);
        }
        let jac = self.momentum_jacobian();
        let a = self.state.a;
        let boxed = integrate_2d(|_, _| 1.0, Interval::Finite(-a, a), Interval::Finite(-a, a), spec)?;
        let g = &self.state;
        let mom = integrate_2d(
            |u, v| g.at_initial(u, v).powi(power),
            Interval::Real {
                center: g.pix,
                scale: 1.0,
            },
            Interval::Real {
                center: g.piy,
                scale: 1.0,
            },
            spec,
        )?;
        Ok(Some(boxed.value * mom.value / jac))
    }

    /// Tangent-map interval along the traced-out momentum `Pi_k`, centred on
    /// the closest approach of `pi~` to the envelope centre.
    fn trace_interval(&self, traced: usize, at: &PhasePoint) -> Option<Interval> {
        let v = self.dpi[traced];
        let vv = v[0] * v[0] + v[1] * v[1];
        if vv == 0.0 {
            return None;
        }
        let mut base = *at;
        match traced {
            0 => base.pi1 = 0.0,
            _ => base.pi2 = 0.0,
        }
        let w = self.back.apply(&base);
        let dx = w.pi1 - self.state.pix;
        let dy = w.pi2 - self.state.piy;
        Some(Interval::Real {
            center: -(dx * v[0] + dy * v[1]) / vv,
            scale: 1.0 / vv.sqrt(),
        })
    }

    /// Width and centre of the reduced function along the kept momentum, used
    /// to place tangent-mapped grids. The centre is averaged over the box ends.
    pub fn kept_momentum_window(&self, axis: Axis12) -> Option<(f64, f64)> {
        let (kept, traced) = axis.momentum_indices();
        if self.is_flat() {
            return None;
        }
        let v = self.dpi[traced];
        let vn = (v[0] * v[0] + v[1] * v[1]).sqrt();
        // Unit vector perpendicular to v; the reduced function is a Gaussian in
        // the projection of pi~ on it, which moves at speed jac/|v| with the
        // kept momentum.
        let n = [-v[1] / vn, v[0] / vn];
        let u = self.dpi[kept];
        let speed = u[0] * n[0] + u[1] * n[1];
        let a = self.state.a;
        let center_at = |q: f64| {
            let p = axis.point(q, 0.0, 0.0, 0.0);
            let w = self.back.apply(&p);
            let off = (w.pi1 - self.state.pix) * n[0] + (w.pi2 - self.state.piy) * n[1];
            -off / speed
        };
        let (lo, hi) = (center_at(-a), center_at(a));
        let width = 1.0 / speed.abs();
        Some((0.5 * (lo + hi), width + 0.5 * (hi - lo).abs()))
    }
}

pub fn gaussian_density(
    g: &GaussianState,
    p: &PhasePoint,
    gamma: f64,
    mass: f64,
    t: f64,
) -> Result<f64> {
    Ok(EnvelopeFrame::new(*g, gamma, mass, t)?.density(p))
}

/// Which sector is kept by a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis12 {
    /// Keep `(Q1, Pi1)`, trace out `(Q2, Pi2)`.
    One,
    /// Keep `(Q2, Pi2)`, trace out `(Q1, Pi1)`.
    Two,
}

impl Axis12 {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Axis12::One),
            2 => Ok(Axis12::Two),
            _ => Err(Error::InvalidParameter(format!("axis must be 1 or 2, got {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Axis12::One => 1,
            Axis12::Two => 2,
        }
    }

    /// `(kept, traced)` momentum indices.
    fn momentum_indices(self) -> (usize, usize) {
        match self {
            Axis12::One => (0, 1),
            Axis12::Two => (1, 0),
        }
    }

    /// Assembles a phase point from kept `(q, pi)` and traced `(qt, pit)`.
    #[inline]
    fn point(self, q: f64, pi: f64, qt: f64, pit: f64) -> PhasePoint {
        match self {
            Axis12::One => PhasePoint::new(q, qt, pi, pit),
            Axis12::Two => PhasePoint::new(qt, q, pit, pi),
        }
    }
}

/// Grid axis with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Axis {
    /// `n` equally spaced points on `[lo, hi]` with trapezoid weights.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "uniform axis needs n >= 2 and lo < hi (got {lo}, {hi}, {n})"
            )));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes = (0..n).map(|i| lo + h * i as f64).collect();
        let weights = (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
            .collect();
        Ok(Axis { nodes, weights })
    }

    /// Arbitrary increasing nodes with trapezoid weights.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("grid nodes must be non-empty and strictly increasing".into()));
        }
        let n = nodes.len();
        let weights = (0..n)
            .map(|i| {
                let left = if i > 0 { nodes[i] - nodes[i - 1] } else { 0.0 };
                let right = if i + 1 < n { nodes[i + 1] - nodes[i] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect();
        Ok(Axis { nodes, weights })
    }

    /// Composite 16-point Gauss-Legendre nodes on `[lo, hi]`.
    pub fn gauss_legendre(lo: f64, hi: f64, panels: usize) -> Result<Self> {
        if panels == 0 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "Gauss-Legendre axis needs panels >= 1 and lo < hi (got {lo}, {hi}, {panels})"
            )));
        }
        Ok(Self::composite(lo, hi, panels, |u| (u, 1.0)))
    }

    /// Composite Gauss-Legendre nodes covering the real line through
    /// `x = center + scale tan(u)`.
    pub fn real_line(center: f64, scale: f64, panels: usize) -> Result<Self> {
        if panels == 0 || !(scale > 0.0) || !scale.is_finite() || !center.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "real-line axis needs panels >= 1 and a finite positive scale (got {scale})"
            )));
        }
        let h = std::f64::consts::FRAC_PI_2;
        Ok(Self::composite(-h, h, panels, |u| {
            let (s, c) = u.sin_cos();
            (center + scale * s / c, scale / (c * c))
        }))
    }

    fn composite(lo: f64, hi: f64, panels: usize, map: impl Fn(f64) -> (f64, f64)) -> Self {
        let (x, w) = gauss_legendre_16();
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(16 * panels);
        let mut weights = Vec::with_capacity(16 * panels);
        for k in 0..panels {
            let a = lo + width * k as f64;
            let mid = a + 0.5 * width;
            for (&t, &wt) in x.iter().zip(w.iter()) {
                let (node, jac) = map(mid + 0.5 * width * t);
                nodes.push(node);
                weights.push(0.5 * width * wt * jac);
            }
        }
        Axis { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Rectangular `(Q, Pi)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2d {
    pub q: Axis,
    pub pi: Axis,
}

/// Reduced Wigner function on a grid; `values` is row-major with `Q` as the
/// row index.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWigner {
    pub axis: Axis12,
    pub t: f64,
    pub grid: Grid2d,
    pub values: Vec<f64>,
}

impl ReducedWigner {
    pub fn value(&self, iq: usize, ipi: usize) -> f64 {
        self.values[iq * self.grid.pi.len() + ipi]
    }

    /// Weighted sum of `values^power` over the grid.
    pub fn weighted_sum(&self, power: i32) -> f64 {
        let npi = self.grid.pi.len();
        self.grid
            .q
            .weights
            .iter()
            .enumerate()
            .map(|(i, wq)| {
                let row = &self.values[i * npi..(i + 1) * npi];
                wq * row
                    .iter()
                    .zip(&self.grid.pi.weights)
                    .map(|(v, wp)| wp * v.powi(power))
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn max_abs_diff(&self, other: &ReducedWigner) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Traces out the complementary sector of the normalized envelope: `Q` over
/// `(-a, a)` and `Pi` over the real line, at every grid point.
///
/// The envelope is renormalized to unit mass over the box at time `t`; the
/// bare envelope's mass grows as the inverse-evolution Jacobian shrinks.
pub fn reduce_wigner(
    g: &GaussianState,
    axis: Axis12,
    gamma: f64,
    mass: f64,
    t: f64,
    grid: &Grid2d,
    spec: &QuadratureSpec,
) -> Result<ReducedWigner> {
    let frame = EnvelopeFrame::new(*g, gamma, mass, t)?;
    let values = reduce_frame(&frame, axis, grid, spec)?;
    Ok(ReducedWigner {
        axis,
        t,
        grid: grid.clone(),
        values,
    })
}

pub(crate) fn reduce_frame(
    frame: &EnvelopeFrame,
    axis: Axis12,
    grid: &Grid2d,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let Some(total) = frame.moment(1, spec)? else {
        // Flat along a momentum direction: the normalized state vanishes
        // pointwise.
        return Ok(vec![0.0; grid.q.len() * grid.pi.len()]);
    };
    let (_, traced) = axis.momentum_indices();
    let a = frame.state.a;
    let points: Vec<(f64, f64)> = grid
        .q
        .nodes
        .iter()
        .flat_map(|&q| grid.pi.nodes.iter().map(move |&p| (q, p)))
        .collect();
    points
        .par_iter()
        .map(|&(q, p)| {
            let est = integrate_2d_with(
                |qt, pt| frame.density(&axis.point(q, p, qt, pt)),
                Interval::Finite(-a, a),
                |qt| {
                    frame
                        .trace_interval(traced, &axis.point(q, p, qt, 0.0))
                        .expect("non-zero Jacobian implies non-zero column")
                },
                spec,
            )?;
            Ok(est.value / total)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn explicit_laguerre(n: u32, x: f64) -> f64 {
        // sum_k (-1)^k C(n,k) x^k / k!
        let mut sum = 0.0;
        let mut binom = 1.0;
        let mut fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                binom *= (n - k + 1) as f64 / k as f64;
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * x.powi(k as i32) / fact;
        }
        sum
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(laguerre(0, 3.7), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        assert!((laguerre(5, 1.3) - explicit_laguerre(5, 1.3)).abs() < 1e-12);
        for n in 0..12 {
            for &x in &[0.0, 0.4, 2.5, 7.0] {
                let e = explicit_laguerre(n, x);
                assert!((laguerre(n, x) - e).abs() < 1e-10 * (1.0 + e.abs()));
            }
        }
    }

    #[test]
    fn energies() {
        assert_eq!(stargen_energy(0, 1.0, 1.0), 1.0);
        assert_eq!(stargen_energy(2, 1.0, 1.0), 5.0);
        for n in 0..20 {
            let d = stargen_energy(n + 1, 0.37, 1.1) - stargen_energy(n, 0.37, 1.1);
            assert!((d - 2.0 * 1.1 * 0.37).abs() < 1e-14);
        }
    }

    fn state(n: u32) -> StargenState {
        StargenState::new(n, Coefficients::from_frequency(0.5, 1.0, 1.0), 1.0, 3.0).unwrap()
    }

    #[test]
    fn density_at_origin_and_sign_change() {
        let s = state(0);
        assert!((stargen_density(&s, &PhasePoint::default()) - 1.0 / PI).abs() < 1e-15);
        // n = 1: L_1 has its root at Omega/hbar = 1.
        let s1 = state(1);
        let r = s1.coeff.ratio();
        let below = PhasePoint::new((0.9 / r).sqrt(), 0.0, 0.0, 0.0);
        let above = PhasePoint::new((1.1 / r).sqrt(), 0.0, 0.0, 0.0);
        assert!(stargen_density(&s1, &below) < 0.0);
        assert!(stargen_density(&s1, &above) > 0.0);
    }

    #[test]
    fn rejects_commutative_coefficients() {
        let c = Coefficients::from_frequency(0.0, 1.0, 1.0);
        assert!(StargenState::new(0, c, 1.0, 3.0).is_err());
    }

    #[test]
    fn ground_marginal_is_normalized_and_symmetric() {
        let spec = QuadratureSpec::default();
        let s = state(0);
        let ic = InitialConditions::new(0.0, 0.0, 0.0, 0.0);
        let grid: Vec<f64> = (-20..=20).map(|k| 0.25 * k as f64).collect();
        let m = momentum_marginal(&s, &ic, &grid, &spec).unwrap();
        assert_eq!(m.normalization, Normalization::Signed);
        for k in 0..grid.len() {
            let mirror = m.density[grid.len() - 1 - k];
            assert!((m.density[k] - mirror).abs() < 1e-9);
        }
        let peak = m.density.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(peak, m.density[20]);

        let total = integrate_1d(
            |p| 2.0 * s.a * reduced_stargen(&m.state, 0.0, 0.0, p, &spec).unwrap(),
            Interval::Real {
                center: 0.0,
                scale: 2.0,
            },
            &spec,
        )
        .unwrap();
        assert!((total.value - 1.0).abs() < 1e-6, "{}", total.value);
    }

    #[test]
    fn excited_marginal_falls_back_to_absolute_mass() {
        let spec = QuadratureSpec::default();
        let m = momentum_marginal(&state(1), &InitialConditions::default(), &[0.0, 1.0], &spec)
            .unwrap();
        assert_eq!(m.normalization, Normalization::Absolute);
        assert!(m.state.norm > 0.0);
    }

    #[test]
    fn gaussian_peak_at_time_zero() {
        let g = GaussianState::new(3.0, 1.0, -1.0).unwrap();
        let v = gaussian_density(&g, &PhasePoint::new(0.7, -2.0, 1.0, -1.0), 1.0, 1.0, 0.0).unwrap();
        assert!((v - g.peak()).abs() < 1e-16);
        // stationary without NC dynamics
        let p = PhasePoint::new(0.7, -2.0, 0.3, 0.2);
        let v0 = gaussian_density(&g, &p, 0.0, 1.0, 0.0).unwrap();
        let v1 = gaussian_density(&g, &p, 0.0, 1.0, 5.0).unwrap();
        assert_eq!(v0, v1);
    }

    #[test]
    fn axes() {
        let u = Axis::uniform(-1.0, 1.0, 5).unwrap();
        assert_eq!(u.weights.iter().sum::<f64>(), 2.0);
        let gl = Axis::gauss_legendre(-3.0, 3.0, 2).unwrap();
        let m: f64 = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| w * x * x).sum();
        assert!((m - 18.0).abs() < 1e-12);
        let r = Axis::real_line(2.0, 1.5, 8).unwrap();
        let g: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * (-((x - 2.0) / 1.5).powi(2)).exp())
            .sum();
        assert!((g - 1.5 * PI.sqrt()).abs() < 1e-9);
        assert!(Axis::uniform(0.0, 1.0, 1).is_err());
        assert!(Axis::real_line(0.0, 0.0, 1).is_err());
    }

    #[test]
    fn stationary_reduction_is_a_ridge() {
        let spec = QuadratureSpec::default();
        let g = GaussianState::new(3.0, 1.0, -1.0).unwrap();
        let grid = Grid2d {
            q: Axis::uniform(-3.0, 3.0, 7).unwrap(),
            pi: Axis::uniform(-2.0, 4.0, 13).unwrap(),
        };
        let rw = reduce_wigner(&g, Axis12::One, 0.0, 1.0, 2.0, &grid, &spec).unwrap();
        for i in 0..7 {
            for j in 0..13 {
                let p = grid.pi.nodes[j];
                let want = (-(p - 1.0) * (p - 1.0)).exp() / (6.0 * PI.sqrt());
                assert!((rw.value(i, j) - want).abs() < 1e-9);
            }
        }
    }
}
