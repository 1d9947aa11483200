//! Canonical-ensemble thermodynamics of NC free gases and rigid rotors.
//!
//! Everything is dimensionless: `sigma = hbar gamma / kT`, energies in units
//! of `hbar gamma`, entropy and heat capacity in units of `k_B`. Derivatives of
//! `ln Z` are taken term by term as Boltzmann moments of the truncated series.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{sum_adaptive, sum_adaptive_terms, SeriesControl, SeriesSum};

/// Below this, rotor sums need of order `sqrt(lambda / sigma)` terms.
pub const SIGMA_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Free2dNc,
    Free3dNc,
    Rotor2dNc,
    Rotor3dNc,
    Rotor2dStd,
    Rotor3dStd,
}

impl ModelId {
    pub const ALL: [ModelId; 6] = [
        ModelId::Free2dNc,
        ModelId::Free3dNc,
        ModelId::Rotor2dNc,
        ModelId::Rotor3dNc,
        ModelId::Rotor2dStd,
        ModelId::Rotor3dStd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Free2dNc => "free2d-nc",
            ModelId::Free3dNc => "free3d-nc",
            ModelId::Rotor2dNc => "rotor2d-nc",
            ModelId::Rotor3dNc => "rotor3d-nc",
            ModelId::Rotor2dStd => "rotor2d-std",
            ModelId::Rotor3dStd => "rotor3d-std",
        }
    }

    /// The commutative model an NC rotor is compared against.
    pub fn standard_partner(self) -> Option<ModelId> {
        match self {
            ModelId::Rotor2dNc => Some(ModelId::Rotor2dStd),
            ModelId::Rotor3dNc => Some(ModelId::Rotor3dStd),
            _ => None,
        }
    }

    pub fn is_rotor(self) -> bool {
        !matches!(self, ModelId::Free2dNc | ModelId::Free3dNc)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        ModelId::ALL
            .iter()
            .copied()
            .find(|m| m.name() == key)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown model '{s}' (expected one of {})",
                    ModelId::ALL.map(|m| m.name()).join(", ")
                ))
            })
    }
}

/// Settings shared by every thermodynamic evaluation. The free 3D gas needs
/// the box and the mass for its translational factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoContext {
    pub series: SeriesControl,
    pub box_half_width: f64,
    pub mass: f64,
    pub hbar: f64,
    pub gamma: f64,
}

impl Default for ThermoContext {
    fn default() -> Self {
        ThermoContext {
            series: SeriesControl::default(),
            box_half_width: 3.0,
            mass: 1.0,
            hbar: 1.0,
            gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub sigma: f64,
    pub lambda: f64,
    pub model: ModelId,
    pub z: f64,
    pub ln_z: f64,
    /// `U / hbar gamma`.
    pub u: f64,
    /// `S / k_B`.
    pub s: f64,
    /// `C_v / k_B`.
    pub cv: f64,
    pub terms: usize,
}

impl ThermoPoint {
    /// `|S - (ln Z + sigma U)|`.
    pub fn identity_residual(&self) -> f64 {
        (self.s - (self.ln_z + self.sigma * self.u)).abs()
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::DomainError(format!("sigma must be positive and finite, got {sigma}")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::DomainError(format!("lambda must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// `Z = 1 / (2 sinh sigma)`.
pub fn z_free2d(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(0.5 / sigma.sinh())
}

/// `sum_n exp(-(2n+1) sigma)` by the adaptive series engine.
pub fn z_free2d_series(sigma: f64, ctl: &SeriesControl) -> Result<SeriesSum> {
    check_sigma(sigma)?;
    sum_adaptive(|n| (-(2.0 * n as f64 + 1.0) * sigma).exp(), ctl)
}

/// `(U, S, C_v)` of the free 2D gas in closed form: `coth sigma`,
/// `sigma coth sigma - ln(2 sinh sigma)`, `(sigma / sinh sigma)^2`. Written in
/// terms of `exp(-2 sigma)` so large `sigma` keeps full relative precision.
pub fn free2d_closed_forms(sigma: f64) -> Result<(f64, f64, f64)> {
    check_sigma(sigma)?;
    let q = (-2.0 * sigma).exp();
    let one_minus_q = -(-2.0 * sigma).exp_m1();
    let u = 1.0 + 2.0 * q / one_minus_q;
    let s = 2.0 * sigma * q / one_minus_q - (-q).ln_1p();
    let cv = (sigma / sigma.sinh()).powi(2);
    Ok((u, s, cv))
}

/// `sqrt(2/pi) (a/hbar) Z(sigma) sqrt(m kT)`.
pub fn z_free3d(sigma: f64, a: f64, mass: f64, kt: f64, hbar: f64) -> Result<f64> {
    if !(a > 0.0 && mass > 0.0 && kt > 0.0 && hbar > 0.0) {
        return Err(Error::DomainError(format!(
            "free 3D gas needs a, m, kT, hbar > 0 (a {a}, m {mass}, kT {kt}, hbar {hbar})"
        )));
    }
    Ok(translational_factor(a, mass, kt, hbar) * z_free2d(sigma)?)
}

fn translational_factor(a: f64, mass: f64, kt: f64, hbar: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() * a / hbar * (mass * kt).sqrt()
}

/// Sum `sum_{mz=-ell}^{ell} exp(-sigma mz)` in closed form.
pub fn inner_sum_closed(ell: u64, sigma: f64) -> f64 {
    let l = ell as f64;
    (l * sigma).cosh() + (l * sigma).sinh() / (0.5 * sigma).tanh()
}

/// Rotor level energy. 2D models take `ell = None`; 3D models need
/// `|mz| <= ell`. Standard models drop the `mz` and `lambda/4` terms.
pub fn rotor_energy(
    model: ModelId,
    mz: i64,
    ell: Option<u64>,
    lambda: f64,
    gamma: f64,
    hbar: f64,
) -> Result<f64> {
    check_lambda(lambda)?;
    let m = mz as f64;
    let bracket = match (model, ell) {
        (ModelId::Rotor2dNc, None) => m * m / lambda + m + lambda / 4.0,
        (ModelId::Rotor2dStd, None) => m * m / lambda,
        (ModelId::Rotor3dNc | ModelId::Rotor3dStd, Some(l)) => {
            if mz.unsigned_abs() > l {
                return Err(Error::QuantumNumberError { ell: l, mz });
            }
            let lf = l as f64;
            let base = lf * (lf + 1.0) / lambda;
            if model == ModelId::Rotor3dNc {
                base + m + lambda / 4.0
            } else {
                base
            }
        }
        (ModelId::Rotor3dNc | ModelId::Rotor3dStd, None) => {
            return Err(Error::InvalidParameter(format!("{model} needs ell")));
        }
        (ModelId::Rotor2dNc | ModelId::Rotor2dStd, Some(_)) => {
            return Err(Error::InvalidParameter(format!("{model} takes no ell")));
        }
        (ModelId::Free2dNc | ModelId::Free3dNc, _) => {
            return Err(Error::InvalidParameter(format!("{model} is not a rotor")));
        }
    };
    Ok(hbar * gamma * bracket)
}

/// A group of degenerate-ish levels sharing one energy offset `e`, with
/// multiplicity `exp(ln_g)` and an internal spread of mean `m1` and variance
/// `var` (the `mz` ladder of a 3D rotor).
#[derive(Debug, Clone, Copy)]
struct Level {
    e: f64,
    ln_g: f64,
    m1: f64,
    var: f64,
}

impl Level {
    fn simple(e: f64) -> Self {
        Level {
            e,
            ln_g: 0.0,
            m1: 0.0,
            var: 0.0,
        }
    }
}

/// Spectrum description; `eps` scales the NC Zeeman-like terms (1 for the NC
/// rotors, 0 for the standard ones).
#[derive(Debug, Clone, Copy)]
enum Spectrum {
    Free2d,
    Rotor2d { lambda: f64, eps: f64 },
    Rotor3d { lambda: f64, eps: f64 },
}

impl Spectrum {
    fn of(model: ModelId, lambda: f64, eps: f64) -> Self {
        match model {
            ModelId::Free2dNc | ModelId::Free3dNc => Spectrum::Free2d,
            ModelId::Rotor2dNc => Spectrum::Rotor2d { lambda, eps },
            ModelId::Rotor2dStd => Spectrum::Rotor2d { lambda, eps: 0.0 },
            ModelId::Rotor3dNc => Spectrum::Rotor3d { lambda, eps },
            ModelId::Rotor3dStd => Spectrum::Rotor3d { lambda, eps: 0.0 },
        }
    }

    /// Group `k` of the series. Groups move outwards from the lowest level so
    /// weights decay monotonically after the first few.
    fn group(&self, k: usize, sigma: f64) -> Vec<Level> {
        match *self {
            Spectrum::Free2d => vec![Level::simple(2.0 * k as f64 + 1.0)],
            Spectrum::Rotor2d { lambda, eps } => {
                let e = |m: i64| {
                    let m = m as f64;
                    m * m / lambda + eps * (m + lambda / 4.0)
                };
                let base = (-0.5 * eps * lambda).floor() as i64;
                let k = k as i64;
                vec![Level::simple(e(base + 1 + k)), Level::simple(e(base - k))]
            }
            Spectrum::Rotor3d { lambda, eps } => {
                let centre = Self::lowest_ell(lambda, eps);
                let mut out = vec![Self::ell_level(centre + k as u64, lambda, eps, sigma)];
                if k > 0 && (k as u64) <= centre {
                    out.push(Self::ell_level(centre - k as u64, lambda, eps, sigma));
                }
                out
            }
        }
    }

    fn base_3d(ell: u64, lambda: f64, eps: f64) -> f64 {
        let l = ell as f64;
        l * (l + 1.0) / lambda + eps * (lambda / 4.0 - l)
    }

    /// `argmin_ell` of the lowest level in each `ell` multiplet.
    fn lowest_ell(lambda: f64, eps: f64) -> u64 {
        let c = (0.5 * (lambda * eps - 1.0)).max(0.0);
        let lo = c.floor() as u64;
        if Self::base_3d(lo + 1, lambda, eps) < Self::base_3d(lo, lambda, eps) {
            lo + 1
        } else {
            lo
        }
    }

    /// One `ell` multiplet: base energy at `mz = -ell`, ladder `k = mz + ell`
    /// with step `eps`, summed in closed form.
    fn ell_level(ell: u64, lambda: f64, eps: f64, sigma: f64) -> Level {
        let n = (2 * ell + 1) as f64;
        let e = Self::base_3d(ell, lambda, eps);
        let b = sigma * eps;
        if b == 0.0 || ell == 0 {
            return Level {
                e,
                ln_g: n.ln(),
                m1: 0.0,
                var: 0.0,
            };
        }
        // x = exp(-b); T = (1 - x^N) / (1 - x).
        let one_minus_x = -(-b).exp_m1();
        let one_minus_xn = -(-b * n).exp_m1();
        let x = (-b).exp();
        let xn = (-b * n).exp();
        let mean_k = x / one_minus_x - n * xn / one_minus_xn;
        let var_k = x / (one_minus_x * one_minus_x) - n * n * xn / (one_minus_xn * one_minus_xn);
        Level {
            e,
            ln_g: one_minus_xn.ln() - one_minus_x.ln(),
            m1: eps * mean_k,
            var: eps * eps * var_k.max(0.0),
        }
    }

    fn min_sigma_terms(&self, sigma: f64, ctl: &SeriesControl) -> f64 {
        let decades = (1.0 / ctl.rel_tol).ln().max(1.0);
        match *self {
            Spectrum::Free2d => decades / (2.0 * sigma),
            Spectrum::Rotor2d { lambda, .. } | Spectrum::Rotor3d { lambda, .. } => {
                (lambda * decades / sigma).sqrt() + lambda
            }
        }
    }
}

/// Boltzmann statistics of a truncated spectrum.
#[derive(Debug, Clone, Copy)]
struct Moments {
    ln_z: f64,
    mean: f64,
    var: f64,
    /// `ln Z + sigma <e>` without the cancelling reference energy.
    entropy: f64,
    terms: usize,
}

fn moments(spec: Spectrum, sigma: f64, ctl: &SeriesControl) -> Result<Moments> {
    let first = spec.group(0, sigma);
    // Reference level: the heaviest one of the first group. Its relative
    // weight is exactly 1 so ln Z' = ln_1p(rest) keeps full precision.
    let (r, reference) = first
        .iter()
        .copied()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            (a.ln_g - sigma * a.e)
                .partial_cmp(&(b.ln_g - sigma * b.e))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("every group has a level");
    let weigh = |l: &Level| ((l.ln_g - reference.ln_g) - sigma * (l.e - reference.e)).exp();

    let groups = sum_adaptive_terms(
        |k| spec.group(k, sigma),
        |g: &Vec<Level>| {
            g.iter()
                .map(|l| {
                    let d = l.e - reference.e + l.m1;
                    weigh(l) * (1.0 + d * d + l.var)
                })
                .sum()
        },
        ctl,
    )?;

    let mut rest = 0.0;
    let mut total = 0.0;
    let mut first_moment = 0.0;
    for (k, g) in groups.iter().enumerate() {
        for (i, l) in g.iter().enumerate() {
            let w = weigh(l);
            total += w;
            if !(k == 0 && i == r) {
                rest += w;
            }
            first_moment += w * (l.e - reference.e + l.m1);
        }
    }
    let mean = first_moment / total;
    let mut var = 0.0;
    for l in groups.iter().flatten() {
        let d = l.e - reference.e + l.m1 - mean;
        var += weigh(l) * (d * d + l.var);
    }
    var /= total;

    let ln_zr = reference.ln_g + rest.ln_1p();
    Ok(Moments {
        ln_z: ln_zr - sigma * reference.e,
        mean: reference.e + mean,
        var,
        entropy: ln_zr + sigma * mean,
        terms: groups.len(),
    })
}

fn guard_sigma(spec: &Spectrum, sigma: f64, ctl: &SeriesControl) -> Result<()> {
    check_sigma(sigma)?;
    if sigma < SIGMA_MIN {
        return Err(Error::DomainError(format!(
            "sigma = {sigma} is below {SIGMA_MIN}; the series would need about {:.0} terms",
            spec.min_sigma_terms(sigma, ctl)
        )));
    }
    Ok(())
}

/// Rotor partition function by adaptive summation.
pub fn z_rotor(model: ModelId, sigma: f64, lambda: f64, ctl: &SeriesControl) -> Result<f64> {
    z_rotor_continued(model, sigma, lambda, 1.0, ctl)
}

/// As [`z_rotor`], with the NC terms `mz + lambda/4` scaled by `eps`;
/// `eps = 0` reproduces the standard rotor.
pub fn z_rotor_continued(
    model: ModelId,
    sigma: f64,
    lambda: f64,
    eps: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !model.is_rotor() {
        return Err(Error::InvalidParameter(format!("{model} is not a rotor")));
    }
    check_lambda(lambda)?;
    let spec = Spectrum::of(model, lambda, eps);
    guard_sigma(&spec, sigma, ctl)?;
    Ok(moments(spec, sigma, ctl)?.ln_z.exp())
}

/// `Z, U, S, C_v` at one point.
pub fn thermo_variables(model: ModelId, sigma: f64, lambda: f64, ctx: &ThermoContext) -> Result<ThermoPoint> {
    ctx.series.validate()?;
    if model.is_rotor() {
        check_lambda(lambda)?;
    }
    let spec = Spectrum::of(model, lambda, 1.0);
    guard_sigma(&spec, sigma, &ctx.series)?;
    let m = moments(spec, sigma, &ctx.series)?;
    let mut p = ThermoPoint {
        sigma,
        lambda,
        model,
        z: m.ln_z.exp(),
        ln_z: m.ln_z,
        u: m.mean,
        s: m.entropy,
        cv: sigma * sigma * m.var,
        terms: m.terms,
    };
    if model == ModelId::Free3dNc {
        let ThermoContext {
            box_half_width: a,
            mass,
            hbar,
            gamma,
            ..
        } = *ctx;
        if !(a > 0.0 && mass > 0.0 && hbar > 0.0 && gamma > 0.0) {
            return Err(Error::DomainError(format!(
                "free 3D gas needs a, m, hbar, gamma > 0 (a {a}, m {mass}, hbar {hbar}, gamma {gamma})"
            )));
        }
        // ln F = const - ln(sigma)/2: adds 1/(2 sigma) to U and 1/2 to C_v.
        let ln_f = translational_factor(a, mass, hbar * gamma / sigma, hbar).ln();
        p.ln_z += ln_f;
        p.z = p.ln_z.exp();
        p.u += 0.5 / sigma;
        p.s += ln_f + 0.5;
        p.cv += 0.5;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sigma: f64,
    pub lambda: f64,
    pub model: ModelId,
    pub point: Option<ThermoPoint>,
    /// `(dU, dS, dC_v)` against the standard partner, NC rotors only.
    pub delta: Option<(f64, f64, f64)>,
    pub error: Option<String>,
}

/// Evaluates every `(lambda, model, sigma)` combination, lambda-major. Failed
/// points are recorded in `error` and the sweep continues. `jobs` bounds the
/// worker count (`None`: rayon's default).
pub fn sweep(
    models: &[ModelId],
    sigmas: &[f64],
    lambdas: &[f64],
    ctx: &ThermoContext,
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let cells: Vec<(f64, ModelId, f64)> = lambdas
        .iter()
        .flat_map(|&l| {
            models
                .iter()
                .flat_map(move |&m| sigmas.iter().map(move |&s| (l, m, s)))
        })
        .collect();
    let eval = |&(lambda, model, sigma): &(f64, ModelId, f64)| -> SweepRow {
        let point = thermo_variables(model, sigma, lambda, ctx);
        let partner = model
            .standard_partner()
            .map(|std| thermo_variables(std, sigma, lambda, ctx));
        let (point, delta, error) = match (point, partner) {
            (Err(e), _) => (None, None, Some(e.to_string())),
            (Ok(p), None) => (Some(p), None, None),
            (Ok(p), Some(Ok(q))) => (Some(p), Some((p.u - q.u, p.s - q.s, p.cv - q.cv)), None),
            (Ok(p), Some(Err(e))) => (Some(p), None, Some(format!("standard partner: {e}"))),
        };
        SweepRow {
            sigma,
            lambda,
            model,
            point,
            delta,
            error,
        }
    };
    let run = || cells.par_iter().map(eval).collect::<Vec<_>>();
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(run))
        }
        None => Ok(run()),
    }
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo; n];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    // endpoints exactly as given
    out[0] = lo;
    out[n - 1] = hi;
    out
}
