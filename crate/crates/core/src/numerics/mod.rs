//! Quadrature and series engines with explicit error control.

mod quadrature;
mod series;

pub use quadrature::{
    gauss_legendre_16, integrate_1d, integrate_2d, integrate_2d_with, Estimate, Interval,
    QuadratureSpec,
};
pub use series::{sum_adaptive, sum_adaptive_terms, SeriesControl, SeriesSum};
