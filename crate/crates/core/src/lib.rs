//! Undercompressive shocks for `u_t + (u - u^3)_x = beta u_xx + mu u_xxt` and
//! the p-system: kinetic relations, traveling-wave shooting, Riemann
//! solutions and a finite-difference solver.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kinetics;
pub mod model;
mod ode;
pub mod pde;
pub mod phaseplane;
pub mod psystem;
pub mod riemann;
mod tridiag;

pub use error::{Error, Result};
