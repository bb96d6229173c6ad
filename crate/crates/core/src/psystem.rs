//! Traveling waves of the p-system with cubic stress,
//! `u_t - v_x = 0`, `v_t - (u^3)_x = eps v_xx - eps^2 A u_xxt`.
//!
//! A wave of speed `s` between `u_-` and `u_+` solves
//!
//! ```text
//! u' = w,
//! s A w' = s w + s^2 (u - u_-) - (u^3 - u_-^3),
//! ```
//!
//! whose equilibria are `u_-` and the roots of `u^2 + u u_- + u_-^2 = s^2`.
//! The undercompressive family is parametrized by `b = u_+ / u_-` and lies on
//! the invariant parabola `w = kappa (u - u_-)(u - u_+)` with
//! `kappa^2 = 1 / (-2 A s)`. For `-1 < b <= -1/2` the sign of `kappa` is
//! negative, so (with `A > 0`) the orbit leaves `u_+` and enters `u_-`; the
//! shooting below reports which orientation connects.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::bisect;
use crate::phaseplane::{connect_field, parabola_residual_with, CubicField, OrbitResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PSystemLocusPoint {
    pub b: f64,
    /// Dispersion coefficient `A`.
    pub a: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub u_zero: f64,
    pub s: f64,
    /// `1 / sqrt(-2 A s)`, always positive.
    pub k: f64,
    pub v_minus: f64,
    pub v_plus: f64,
}

/// `u_-(b) = 2 sqrt(b^2 + b + 1) / (9 A (1 + b)^2)`.
fn u_minus_of_b(b: f64, a: f64) -> f64 {
    2.0 * (b * b + b + 1.0).sqrt() / (9.0 * a * (1.0 + b) * (1.0 + b))
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "A",
            value: a,
            range: "(0, inf); use psys_symmetry for A < 0".into(),
        })
    }
}

/// Smallest admissible left state, `4 sqrt(3) / (9 A)`.
pub fn psys_threshold(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(4.0 * 3f64.sqrt() / (9.0 * a))
}

/// State pair `u_- -> u_+` with the wave speed of sign `-sign(A)` fixed by
/// `s^2 = u_+^2 + u_+ u_- + u_-^2`; no locus membership is implied.
pub fn psys_pair(u_minus: f64, u_plus: f64, a: f64, v_minus: f64) -> PSystemLocusPoint {
    let s = -a.signum() * (u_plus * u_plus + u_plus * u_minus + u_minus * u_minus).sqrt();
    PSystemLocusPoint {
        b: u_plus / u_minus,
        a,
        u_minus,
        u_plus,
        u_zero: -(u_minus + u_plus),
        s,
        k: 1.0 / (-2.0 * a * s).sqrt(),
        v_minus,
        v_plus: v_minus - s * (u_plus - u_minus),
    }
}

/// Locus point with ratio `b` in `(-1, -1/2]` and `v_- = 0`.
pub fn psys_locus(b: f64, a: f64) -> Result<PSystemLocusPoint> {
    psys_locus_with_v(b, a, 0.0)
}

pub fn psys_locus_with_v(b: f64, a: f64, v_minus: f64) -> Result<PSystemLocusPoint> {
    check_a(a)?;
    if !(b > -1.0 && b <= -0.5) {
        return Err(Error::OutOfDomain {
            name: "b",
            value: b,
            range: "(-1, -1/2]".into(),
        });
    }
    let u_minus = u_minus_of_b(b, a);
    Ok(psys_pair(u_minus, b * u_minus, a, v_minus))
}

/// The unique `u_+` paired with `u_minus > psys_threshold(A)`, by inverting the
/// decreasing map `b -> u_-(b)` on `(-1, -1/2)`.
pub fn psys_kinetic_u_plus(u_minus: f64, a: f64) -> Result<f64> {
    let threshold = psys_threshold(a)?;
    if !(u_minus > threshold) || !u_minus.is_finite() {
        return Err(Error::OutOfDomain {
            name: "u_minus",
            value: u_minus,
            range: format!("({threshold}, inf)"),
        });
    }
    // u_-(b) blows up like (1 + b)^-2; start the bracket where it already exceeds u_minus
    let mut lo = -0.75;
    while u_minus_of_b(lo, a) <= u_minus {
        lo = -1.0 + 0.5 * (lo + 1.0);
    }
    let b = bisect(lo, -0.5, 1e-15, |b| u_minus_of_b(b, a) - u_minus);
    Ok(b * u_minus)
}

/// Largest violation of the locus identities, valid in every sign quadrant
/// reachable by [`psys_symmetry`].
pub fn psys_locus_residual(p: &PSystemLocusPoint) -> f64 {
    let (um, up) = (p.u_minus, p.u_plus);
    let res = [
        (p.s * p.s - (up * up + up * um + um * um)).abs(),
        (p.u_zero + um + up).abs(),
        (p.k - 1.0 / (-2.0 * p.a * p.s).sqrt()).abs(),
        (p.s.abs() * p.k - 1.5 * (um + up).abs()).abs(),
        (um.abs() - u_minus_of_b(p.b, p.a.abs())).abs(),
        (up - p.b * um).abs(),
        (p.v_plus - p.v_minus + p.s * (up - um)).abs(),
    ];
    let mut worst = res.iter().copied().fold(0.0, f64::max);
    if !(p.a * p.s < 0.0) {
        worst = f64::INFINITY;
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsysSymmetry {
    /// `u -> -u`, `v -> -v`.
    Odd,
    /// `A -> -A`, `s -> -s`, `xi -> -xi`.
    FlipA,
}

pub fn psys_symmetry(p: &PSystemLocusPoint, map: PsysSymmetry) -> PSystemLocusPoint {
    match map {
        PsysSymmetry::Odd => PSystemLocusPoint {
            u_minus: -p.u_minus,
            u_plus: -p.u_plus,
            u_zero: -p.u_zero,
            v_minus: -p.v_minus,
            v_plus: -p.v_plus,
            ..*p
        },
        PsysSymmetry::FlipA => PSystemLocusPoint {
            a: -p.a,
            s: -p.s,
            v_plus: p.v_minus + p.s * (p.u_plus - p.u_minus),
            ..*p
        },
    }
}

/// Direction in which the heteroclinic orbit runs for increasing `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// From `u_-` to `u_+`.
    Forward,
    /// From `u_+` to `u_-`.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsysShot {
    pub orbit: OrbitResult,
    /// Orientation that connects, if either does.
    pub orientation: Option<Orientation>,
    /// `max |w - kappa (u - u_-)(u - u_+)|` along the orbit, with the sign of
    /// `kappa` matching the orientation found (forward if none).
    pub parabola_residual: f64,
}

impl PsysShot {
    pub fn connects(&self) -> bool {
        self.orientation.is_some()
    }
}

/// The traveling-wave field `u' = w`, `w' = w / A - (u - u_-)(u - u_+)(u - u_0) / (s A)`.
pub fn psys_field(p: &PSystemLocusPoint) -> CubicField {
    CubicField {
        damping: 1.0 / p.a,
        scale: -1.0 / (p.s * p.a),
        roots: [p.u_minus, p.u_plus, p.u_zero],
    }
}

/// Shoots for the orbit in one orientation only.
pub fn psys_shoot_oriented(
    p: &PSystemLocusPoint,
    orientation: Orientation,
    tol: f64,
) -> Result<OrbitResult> {
    if !(p.s * p.a < 0.0) {
        return Err(Error::NotSaddle(p.u_minus));
    }
    let (from, to) = match orientation {
        Orientation::Forward => (p.u_minus, p.u_plus),
        Orientation::Reversed => (p.u_plus, p.u_minus),
    };
    connect_field(&psys_field(p), from, to, tol)
}

/// Shoots for the saddle–saddle orbit between `u_-` and `u_+`, trying both
/// orientations. Fails with `NotSaddle` unless `s A < 0`.
pub fn psys_shoot(p: &PSystemLocusPoint, tol: f64) -> Result<PsysShot> {
    // a forward orbit lies on the parabola with w of sign (u_+ - u_-)
    let forward_sign = (p.u_minus - p.u_plus).signum();
    let residual =
        |orbit: &OrbitResult, sign: f64| parabola_residual_with(orbit, sign * p.k, p.u_minus, p.u_plus);
    let fwd = psys_shoot_oriented(p, Orientation::Forward, tol)?;
    if fwd.connects() {
        return Ok(PsysShot {
            parabola_residual: residual(&fwd, forward_sign),
            orbit: fwd,
            orientation: Some(Orientation::Forward),
        });
    }
    let rev = psys_shoot_oriented(p, Orientation::Reversed, tol)?;
    if rev.connects() {
        return Ok(PsysShot {
            parabola_residual: residual(&rev, -forward_sign),
            orbit: rev,
            orientation: Some(Orientation::Reversed),
        });
    }
    Ok(PsysShot {
        parabola_residual: residual(&fwd, forward_sign),
        orbit: fwd,
        orientation: None,
    })
}
