//! Independent reference computations used to cross-check the fast paths:
//! a Runge-Kutta integrator for the equations of motion, explicit sums and
//! polynomial expansions. Deliberately naive.

use crate::nc::PhasePoint;

/// Right-hand side of the equations of motion (`mu = 1`):
/// `Q1' = Pi1/m + g Q2`, `Q2' = Pi2/m - g Q1`,
/// `Pi1' = g Pi2 - m g^2 Q1`, `Pi2' = -g Pi1 - m g^2 Q2`.
pub fn equations_of_motion(p: &[f64; 4], gamma: f64, mass: f64) -> [f64; 4] {
    let [q1, q2, p1, p2] = *p;
    let k = mass * gamma * gamma;
    [
        p1 / mass + gamma * q2,
        p2 / mass - gamma * q1,
        gamma * p2 - k * q1,
        -gamma * p1 - k * q2,
    ]
}

/// Classical RK4 with `steps` equal steps from 0 to `t`.
pub fn rk4(start: &PhasePoint, gamma: f64, mass: f64, t: f64, steps: usize) -> PhasePoint {
    let h = t / steps as f64;
    let mut y = start.to_array();
    let add = |y: &[f64; 4], k: &[f64; 4], s: f64| {
        let mut out = *y;
        for i in 0..4 {
            out[i] += s * k[i];
        }
        out
    };
    for _ in 0..steps {
        let k1 = equations_of_motion(&y, gamma, mass);
        let k2 = equations_of_motion(&add(&y, &k1, 0.5 * h), gamma, mass);
        let k3 = equations_of_motion(&add(&y, &k2, 0.5 * h), gamma, mass);
        let k4 = equations_of_motion(&add(&y, &k3, h), gamma, mass);
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    PhasePoint::from_array(y)
}

/// `sum_{mz=-ell}^{ell} exp(-sigma mz)`, term by term.
pub fn brute_inner_sum(ell: u64, sigma: f64) -> f64 {
    let l = ell as i64;
    (-l..=l).map(|mz| (-sigma * mz as f64).exp()).sum()
}

/// `L_n(x) = sum_k (-1)^k C(n, k) x^k / k!`.
pub fn laguerre_explicit(n: u32, x: f64) -> f64 {
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

/// Determinant by cofactor expansion along the first row.
pub fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let det3 = |r: [usize; 3], c: [usize; 3]| {
        let a = |i: usize, j: usize| m[r[i]][c[j]];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    let mut d = 0.0;
    for (j, &pivot) in m[0].iter().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        d += sign * pivot * det3([1, 2, 3], [cols[0], cols[1], cols[2]]);
    }
    d
}

/// `(ln Z, U, S, C_v)` of an explicit list of dimensionless levels (with
/// repetition for degeneracy), straight from the Gibbs distribution.
pub fn gibbs(levels: &[f64], sigma: f64) -> (f64, f64, f64, f64) {
    let e0 = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = levels.iter().map(|e| (-sigma * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let probs: Vec<f64> = w.iter().map(|x| x / z).collect();
    let u: f64 = probs.iter().zip(levels).map(|(p, e)| p * e).sum();
    let u2: f64 = probs.iter().zip(levels).map(|(p, e)| p * (e - u) * (e - u)).sum();
    let s: f64 = -probs.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>();
    (z.ln() - sigma * e0, u, s, sigma * sigma * u2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_diagonal_and_permutation() {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (i + 1) as f64;
        }
        assert_eq!(det4(&m), 24.0);
        m.swap(0, 1);
        assert_eq!(det4(&m), -24.0);
    }

    #[test]
    fn gibbs_two_level() {
        let (ln_z, u, s, _) = gibbs(&[0.0, 0.0], 3.0);
        assert!((ln_z - 2f64.ln()).abs() < 1e-15);
        assert_eq!(u, 0.0);
        assert!((s - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn rk4_free_motion_is_exact() {
        let p = rk4(&PhasePoint::new(0.0, 0.0, 1.0, 1.0), 0.0, 1.0, 2.0, 10);
        assert!(p.max_abs_diff(&PhasePoint::new(2.0, 2.0, 1.0, 1.0)) < 1e-14);
    }
}
