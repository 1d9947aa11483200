use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Tolerances and panel budget for the adaptive Gauss-Legendre engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            max_panels: 4096,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_panels: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            rel_tol,
            max_panels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::InvalidParameter("max_panels must be >= 1".into()));
        }
        Ok(())
    }
}

/// Integration range along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    /// Closed interval `[lo, hi]`.
    Finite(f64, f64),
    /// The whole real line, mapped by `x = center + scale * tan(u)`,
    /// `u` in `(-pi/2, pi/2)`. `scale` should be of the order of the width of
    /// the integrand.
    Real { center: f64, scale: f64 },
}

impl Interval {
    pub fn real_line() -> Self {
        Interval::Real {
            center: 0.0,
            scale: 1.0,
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            Interval::Finite(lo, hi) if lo.is_finite() && hi.is_finite() => Ok(()),
            Interval::Real { center, scale } if center.is_finite() && scale.is_finite() && scale > 0.0 => {
                Ok(())
            }
            other => Err(Error::InvalidParameter(format!(
                "invalid integration interval {other:?}"
            ))),
        }
    }

    /// Domain of the integration variable after mapping.
    fn domain(&self) -> (f64, f64) {
        match *self {
            Interval::Finite(lo, hi) => (lo, hi),
            Interval::Real { .. } => (-FRAC_PI_2, FRAC_PI_2),
        }
    }

    /// Maps a point of the domain to `(x, dx/du)`.
    #[inline]
    fn map(&self, u: f64) -> (f64, f64) {
        match *self {
            Interval::Finite(..) => (u, 1.0),
            Interval::Real { center, scale } => {
                let (s, c) = u.sin_cos();
                (center + scale * s / c, scale / (c * c))
            }
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum over panels of `|whole - halves|`; a conservative bound.
    pub error: f64,
    pub panels: usize,
}

const GL_ORDER: usize = 16;

/// Nodes and weights of the 16-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_16() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(gauss_legendre_rule::<GL_ORDER>)
}

fn gauss_legendre_rule<const N: usize>() -> ([f64; N], [f64; N]) {
    let mut nodes = [0.0; N];
    let mut weights = [0.0; N];
    let n = N as f64;
    for i in 0..N {
        // Tricomi initial guess, then Newton on P_N.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(N, x);
            dp = n * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (p, p_prev) = legendre_pair(N, x);
                dp = n * (x * p - p_prev) / (x * x - 1.0);
                break;
            }
        }
        nodes[N - 1 - i] = x;
        weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Returns `(P_n(x), P_{n-1}(x))`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Applies the 16-point rule on `[a, b]` to an integrand that also carries an
/// auxiliary channel (integrated alongside, not used for adaptivity).
#[inline]
fn panel<F>(f: &F, iv: &Interval, a: f64, b: f64) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64),
{
    let (nodes, weights) = gauss_legendre_16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut value = 0.0;
    let mut aux = 0.0;
    for (&t, &w) in nodes.iter().zip(weights.iter()) {
        let (x, jac) = iv.map(mid + half * t);
        let (v, e) = f(x);
        value += w * jac * v;
        aux += w * jac * e;
    }
    (value * half, aux * half)
}

struct Adapted {
    value: f64,
    error: f64,
    aux: f64,
    panels: usize,
}

/// Depth-first adaptive bisection. Panels are processed left to right so the
/// summation order, and therefore the result, is fully deterministic.
fn adapt<F>(f: &F, iv: Interval, spec: &QuadratureSpec) -> Result<Adapted>
where
    F: Fn(f64) -> (f64, f64),
{
    iv.check()?;
    let (lo, hi) = iv.domain();
    if lo == hi {
        return Ok(Adapted {
            value: 0.0,
            error: 0.0,
            aux: 0.0,
            panels: 0,
        });
    }
    let width = hi - lo;
    let whole = panel(f, &iv, lo, hi);
    let mut scale: Option<f64> = None;
    let mut stack = vec![(lo, hi, whole)];
    let mut out = Adapted {
        value: 0.0,
        error: 0.0,
        aux: 0.0,
        panels: 1,
    };

    while let Some((a, b, whole)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = panel(f, &iv, a, m);
        let right = panel(f, &iv, m, b);
        let halves = left.0 + right.0;
        if !halves.is_finite() {
            return Err(Error::QuadratureFailure {
                estimate: out.value,
                error: f64::INFINITY,
                panels: out.panels,
            });
        }
        let scale = *scale.get_or_insert(halves.abs());
        let err = (whole.0 - halves).abs();
        let tol = spec.abs_tol.max(spec.rel_tol * scale) * (b - a) / width;
        if err <= tol || (b - a) <= f64::EPSILON * width {
            out.value += halves;
            out.aux += left.1 + right.1;
            out.error += err;
            continue;
        }
        out.panels += 1;
        if out.panels > spec.max_panels {
            let pending: f64 = stack.iter().map(|p| p.2 .0).sum();
            return Err(Error::QuadratureFailure {
                estimate: out.value + halves + pending,
                error: out.error + err,
                panels: out.panels,
            });
        }
        stack.push((m, b, right));
        stack.push((a, m, left));
    }
    Ok(out)
}

/// Adaptive 16-point Gauss-Legendre integral of `f` over `iv`.
pub fn integrate_1d<F>(f: F, iv: Interval, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let g = |x: f64| (f(x), 0.0);
    let r = adapt(&g, iv, spec)?;
    Ok(Estimate {
        value: r.value,
        error: r.error,
        panels: r.panels,
    })
}

/// Iterated integral over `q` (outer) and `p` (inner).
pub fn integrate_2d<F>(f: F, q: Interval, p: Interval, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_2d_with(f, q, |_| p, spec)
}

/// Iterated integral where the inner interval may depend on the outer
/// coordinate (used to centre tangent maps on a moving peak). The reported
/// error adds the outer estimate to the integrated inner estimates.
pub fn integrate_2d_with<F, P>(f: F, q: Interval, inner: P, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64, f64) -> f64,
    P: Fn(f64) -> Interval,
{
    let failure: Cell<Option<Error>> = Cell::new(None);
    let inner_panels = Cell::new(0usize);
    let g = |x: f64| -> (f64, f64) {
        match integrate_1d(|y| f(x, y), inner(x), spec) {
            Ok(e) => {
                inner_panels.set(inner_panels.get() + e.panels);
                (e.value, e.error)
            }
            Err(err) => {
                let keep = failure.take().unwrap_or(err);
                failure.set(Some(keep));
                (f64::NAN, f64::NAN)
            }
        }
    };
    let outer = adapt(&g, q, spec);
    if let Some(err) = failure.take() {
        return Err(err);
    }
    let outer = outer?;
    Ok(Estimate {
        value: outer.value,
        error: outer.error + outer.aux.abs(),
        panels: outer.panels + inner_panels.get(),
    })
}
