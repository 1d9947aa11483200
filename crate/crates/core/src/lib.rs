//! Phase-space noncommutative quantum mechanics: the Seiberg-Witten map to
//! commutative variables, exact free-particle dynamics, Wigner states and their
//! purity, and rotor thermodynamics.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod nc;
pub mod numerics;
pub mod oracle;
pub mod qinfo;
pub mod thermo;
pub mod wigner;

pub use error::{Error, Result};
