//! Deformed Heisenberg-Weyl algebra in two dimensions and its Seiberg-Witten
//! map to commutative phase-space variables.
//!
//! Conventions: `eps_12 = +1 = -eps_21`. The NC operators are
//!
//! ```text
//! q_i = nu Q_i - theta/(2 nu hbar) eps_ij Pi_j
//! p_i = mu Pi_i + eta/(2 mu hbar) eps_ij Q_j
//! ```
//!
//! with `nu mu (1 - nu mu) = theta eta / (4 hbar^2)`.

use crate::error::{Error, Result};

/// Physical inputs of the deformed algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcParams {
    pub theta: f64,
    pub eta: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl NcParams {
    pub fn new(theta: f64, eta: f64, hbar: f64, mass: f64) -> Result<Self> {
        let nc = NcParams {
            theta,
            eta,
            hbar,
            mass,
        };
        nc.validate()?;
        Ok(nc)
    }

    /// Natural units, `hbar = m = 1`.
    pub fn natural(theta: f64, eta: f64) -> Result<Self> {
        Self::new(theta, eta, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.theta, self.eta, self.hbar, self.mass]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(format!("non-finite NC parameters {self:?}")));
        }
        if !(self.hbar > 0.0 && self.mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar and mass must be positive (hbar {}, m {})",
                self.hbar, self.mass
            )));
        }
        if self.theta < 0.0 || self.eta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "theta and eta must be non-negative (theta {}, eta {})",
                self.theta, self.eta
            )));
        }
        if self.theta_eta_ratio() >= 1.0 {
            return Err(Error::ConstraintViolation(format!(
                "theta*eta = {} must be below hbar^2 = {}",
                self.theta * self.eta,
                self.hbar * self.hbar
            )));
        }
        Ok(())
    }

    /// `theta eta / hbar^2`.
    pub fn theta_eta_ratio(&self) -> f64 {
        self.theta * self.eta / (self.hbar * self.hbar)
    }

    /// Characteristic frequency `gamma = eta / (2 m hbar)`.
    pub fn gamma(&self) -> f64 {
        self.eta / (2.0 * self.mass * self.hbar)
    }
}

/// Dimensionless map coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwParams {
    pub mu: f64,
    pub nu: f64,
}

/// Coefficients of the free-particle Hamiltonian in commutative variables,
/// `H = alpha^2 Q^2 + beta^2 Pi^2 + gamma eps_ij Pi_i Q_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma: f64,
}

impl Coefficients {
    /// Coefficients expressed through the frequency directly:
    /// `alpha^2 = m gamma^2 / (2 mu^2)`, `beta^2 = mu^2 / (2 m)`.
    pub fn from_frequency(gamma: f64, mass: f64, mu: f64) -> Self {
        Coefficients {
            alpha2: mass * gamma * gamma / (2.0 * mu * mu),
            beta2: mu * mu / (2.0 * mass),
            gamma,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha2.sqrt()
    }

    pub fn beta(&self) -> f64 {
        self.beta2.sqrt()
    }

    /// `alpha / beta`, the weight of `Q^2` in the constant of motion.
    pub fn ratio(&self) -> f64 {
        (self.alpha2 / self.beta2).sqrt()
    }
}

/// A point `(Q1, Q2, Pi1, Pi2)` of commutative phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub q1: f64,
    pub q2: f64,
    pub pi1: f64,
    pub pi2: f64,
}

impl PhasePoint {
    pub const fn new(q1: f64, q2: f64, pi1: f64, pi2: f64) -> Self {
        PhasePoint { q1, q2, pi1, pi2 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.pi1, self.pi2]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        PhasePoint::new(v[0], v[1], v[2], v[3])
    }

    pub fn max_abs_diff(&self, other: &PhasePoint) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// NC operators `(q1, q2, p1, p2)` as c-numbers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NcVariables {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl NcVariables {
    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }
}

/// Solves the constraint for `nu`, taking the root `xi = nu mu` that tends to
/// 1 in the commutative limit.
pub fn derive_sw_params(nc: &NcParams, mu: f64) -> Result<SwParams> {
    nc.validate()?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let disc = 1.0 - nc.theta_eta_ratio();
    if disc <= 0.0 {
        return Err(Error::ConstraintViolation(format!(
            "theta*eta/hbar^2 = {} leaves no real map",
            nc.theta_eta_ratio()
        )));
    }
    let xi = 0.5 * (1.0 + disc.sqrt());
    Ok(SwParams { mu, nu: xi / mu })
}

/// Hamiltonian coefficients; independent of `theta` and `nu`.
pub fn nc_coefficients(nc: &NcParams, sw: &SwParams) -> Coefficients {
    let NcParams {
        eta, hbar, mass, ..
    } = *nc;
    Coefficients {
        alpha2: eta * eta / (8.0 * mass * sw.mu * sw.mu * hbar * hbar),
        beta2: sw.mu * sw.mu / (2.0 * mass),
        gamma: eta / (2.0 * mass * hbar),
    }
}

/// Explicit 4x4 matrix of the forward map, acting on `(Q1, Q2, Pi1, Pi2)` and
/// producing `(q1, q2, p1, p2)`.
pub fn sw_forward_matrix(sw: &SwParams, nc: &NcParams) -> [[f64; 4]; 4] {
    let b = nc.theta / (2.0 * sw.nu * nc.hbar);
    let c = nc.eta / (2.0 * sw.mu * nc.hbar);
    let (nu, mu) = (sw.nu, sw.mu);
    [
        [nu, 0.0, 0.0, -b],
        [0.0, nu, b, 0.0],
        [0.0, c, mu, 0.0],
        [-c, 0.0, 0.0, mu],
    ]
}

pub fn sw_forward(sw: &SwParams, nc: &NcParams, s: &PhasePoint) -> NcVariables {
    let b = nc.theta / (2.0 * sw.nu * nc.hbar);
    let c = nc.eta / (2.0 * sw.mu * nc.hbar);
    NcVariables {
        q1: sw.nu * s.q1 - b * s.pi2,
        q2: sw.nu * s.q2 + b * s.pi1,
        p1: sw.mu * s.pi1 + c * s.q2,
        p2: sw.mu * s.pi2 - c * s.q1,
    }
}

/// Inverse map
/// `Q_i = mu (1 - theta eta/hbar^2)^(-1/2) (q_i + theta/(2 nu mu hbar) eps_ij p_j)`,
/// `Pi_i = nu (1 - theta eta/hbar^2)^(-1/2) (p_i - eta/(2 nu mu hbar) eps_ij q_j)`.
pub fn sw_inverse(sw: &SwParams, nc: &NcParams, v: &NcVariables) -> Result<PhasePoint> {
    let disc = 1.0 - nc.theta_eta_ratio();
    if disc <= 0.0 {
        return Err(Error::ConstraintViolation(format!(
            "theta*eta/hbar^2 = {} is not invertible",
            nc.theta_eta_ratio()
        )));
    }
    let k = 1.0 / disc.sqrt();
    let xi = sw.nu * sw.mu;
    let bq = nc.theta / (2.0 * xi * nc.hbar);
    let bp = nc.eta / (2.0 * xi * nc.hbar);
    Ok(PhasePoint {
        q1: sw.mu * k * (v.q1 + bq * v.p2),
        q2: sw.mu * k * (v.q2 - bq * v.p1),
        pi1: sw.nu * k * (v.p1 - bp * v.q2),
        pi2: sw.nu * k * (v.p2 + bp * v.q1),
    })
}

/// `|d(q,p)/d(Q,Pi)| = 1 - theta eta / hbar^2`.
pub fn jacobian_det(nc: &NcParams) -> f64 {
    1.0 - nc.theta_eta_ratio()
}

/// Residuals of the three matrix conditions the map must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraCheckReport {
    /// `max |A D^T - B C^T - I|`
    pub heisenberg: f64,
    /// `max |A B^T - B A^T - Theta/hbar|`
    pub position: f64,
    /// `max |C D^T - D C^T - N/hbar|`
    pub momentum: f64,
    pub tolerance: f64,
}

impl AlgebraCheckReport {
    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance
    }

    pub fn max_residual(&self) -> f64 {
        self.heisenberg.max(self.position).max(self.momentum)
    }
}

type M2 = [[f64; 2]; 2];

const EPS2: M2 = [[0.0, 1.0], [-1.0, 0.0]];

fn scale(a: f64, m: &M2) -> M2 {
    [[a * m[0][0], a * m[0][1]], [a * m[1][0], a * m[1][1]]]
}

fn mul_t(a: &M2, b: &M2) -> M2 {
    // a * b^T
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (0..2).map(|k| a[i][k] * b[j][k]).sum();
        }
    }
    out
}

fn max_dev(x: &M2, y: &M2, target: &M2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((x[i][j] - y[i][j] - target[i][j]).abs());
        }
    }
    m
}

/// Builds the 2x2 blocks of the map and checks the defining matrix equations.
pub fn validate_algebra(sw: &SwParams, nc: &NcParams) -> AlgebraCheckReport {
    let ident: M2 = [[1.0, 0.0], [0.0, 1.0]];
    let a = scale(sw.nu, &ident);
    let b = scale(-nc.theta / (2.0 * sw.nu * nc.hbar), &EPS2);
    let c = scale(nc.eta / (2.0 * sw.mu * nc.hbar), &EPS2);
    let d = scale(sw.mu, &ident);
    let theta_m = scale(nc.theta / nc.hbar, &EPS2);
    let eta_m = scale(nc.eta / nc.hbar, &EPS2);

    AlgebraCheckReport {
        heisenberg: max_dev(&mul_t(&a, &d), &mul_t(&b, &c), &ident),
        position: max_dev(&mul_t(&a, &b), &mul_t(&b, &a), &theta_m),
        momentum: max_dev(&mul_t(&c, &d), &mul_t(&d, &c), &eta_m),
        tolerance: 1e-12,
    }
}
