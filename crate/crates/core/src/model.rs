//! Flux algebra for `u_t + (u - u^3)_x = 0` and linear stability of the
//! regularized equation `u_t + f(u)_x = beta u_xx + mu u_xxt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance used when comparing speeds during classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Dissipation/dispersion coefficients of the regularized scalar equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarParams {
    pub beta: f64,
    pub mu: f64,
}

impl ScalarParams {
    pub fn new(beta: f64, mu: f64) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(Error::OutOfDomain {
                name: "beta",
                value: beta,
                range: "[0, inf)".into(),
            });
        }
        if !mu.is_finite() || mu == 0.0 {
            return Err(Error::OutOfDomain {
                name: "mu",
                value: mu,
                range: "nonzero".into(),
            });
        }
        Ok(Self { beta, mu })
    }

    /// `beta / sqrt(mu)`, the only combination entering the traveling-wave ODE.
    /// Undefined (NaN) for negative `mu`.
    pub fn gamma(&self) -> f64 {
        self.beta / self.mu.sqrt()
    }
}

/// `f(u) = u - u^3`.
#[inline]
pub fn flux(u: f64) -> f64 {
    u - u * u * u
}

/// `f'(u) = 1 - 3u^2`.
#[inline]
pub fn char_speed(u: f64) -> f64 {
    1.0 - 3.0 * u * u
}

/// `f''(u) = -6u`; negative for `u > 0` (concave), positive for `u < 0`.
#[inline]
pub fn flux_curvature(u: f64) -> f64 {
    -6.0 * u
}

/// Rankine–Hugoniot speed, the slope of the chord of `f` between the two states.
/// Reduces to `char_speed(u)` when both states coincide.
#[inline]
pub fn rh_speed(u_minus: f64, u_plus: f64) -> f64 {
    if u_minus == u_plus {
        return char_speed(u_minus);
    }
    1.0 - (u_plus * u_plus + u_plus * u_minus + u_minus * u_minus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShockKind {
    Lax,
    UndercompressiveCandidate,
    Inadmissible,
    Characteristic,
}

/// A candidate discontinuity together with its classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockPair {
    pub u_minus: f64,
    pub u_plus: f64,
    pub speed: f64,
    pub kind: ShockKind,
    /// Set when the speed equals a characteristic speed on either side
    /// (within [`CLASSIFY_TOL`]). Such shocks are reported as `Inadmissible`.
    pub sonic: bool,
}

pub fn classify_shock(u_minus: f64, u_plus: f64) -> ShockPair {
    let speed = rh_speed(u_minus, u_plus);
    let mut pair = ShockPair {
        u_minus,
        u_plus,
        speed,
        kind: ShockKind::Inadmissible,
        sonic: false,
    };
    if u_minus == u_plus {
        pair.kind = ShockKind::Characteristic;
        return pair;
    }
    // s - f'(u_-) and s - f'(u_+) in factored form; cheaper to keep exact signs.
    let behind = (u_minus - u_plus) * (2.0 * u_minus + u_plus);
    let ahead = (u_plus - u_minus) * (2.0 * u_plus + u_minus);
    if behind.abs() <= CLASSIFY_TOL || ahead.abs() <= CLASSIFY_TOL {
        pair.sonic = true;
        return pair;
    }
    pair.kind = if behind < 0.0 && ahead > 0.0 {
        ShockKind::Lax
    } else if behind > 0.0 && ahead > 0.0 {
        ShockKind::UndercompressiveCandidate
    } else {
        ShockKind::Inadmissible
    };
    pair
}

/// Growth rate `lambda(xi)` of the Fourier mode `exp(i xi x + lambda t)` for
/// the equation linearized about the constant `u_bar`.
pub fn dispersion_lambda(u_bar: f64, beta: f64, mu: f64, xi: f64) -> Result<Complex64> {
    let denom = 1.0 + mu * xi * xi;
    if denom.abs() < 1e-14 {
        return Err(Error::Pole(format!(
            "1 + mu xi^2 = 0 at xi = {xi} (mu = {mu})"
        )));
    }
    let num = Complex64::new(-beta * xi * xi, -xi * char_speed(u_bar));
    Ok(num / denom)
}
