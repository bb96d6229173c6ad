//! Closed-form locus of undercompressive (saddle–saddle) shocks.
//!
//! For a fixed `gamma = beta / sqrt(mu)` in `(0, sqrt(3/8))`, the pairs
//! `(u_-, u_+)` joined by a traveling wave on an invariant parabola are
//! parametrized by the ratio `a = -u_- / u_+` and a branch sign:
//!
//! ```text
//! u_+ = -sqrt((1 ± sqrt(D(a, gamma))) / (2 (1 - a + a^2))),   u_- = -a u_+,
//! D(a, gamma) = 1 - (8/9) gamma^2 (1 + a / (a - 1)^2),
//! ```
//!
//! with `1/2 <= a <= a_tilde(gamma)`. Everything here assumes `u_- > 0 > u_+`;
//! the mirror family is obtained from `u -> -u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rh_speed;

/// Parabola coefficient of every scalar saddle–saddle orbit: `v = k (u - u_-)(u - u_+)`.
pub const PARABOLA_K: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Values of `D` this close to zero are treated as the merge point of the branches.
const D_ZERO_TOL: f64 = 1e-12;

/// Bisection stopping width in `a`.
const BISECT_TOL: f64 = 1e-12;

/// Upper end of the gamma range with a nonempty locus, `sqrt(3/8)`.
pub fn gamma_max() -> f64 {
    (3.0f64 / 8.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// One undercompressive shock on the locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticPoint {
    pub a: f64,
    pub branch: Branch,
    pub u_minus: f64,
    pub u_zero: f64,
    pub u_plus: f64,
    pub s: f64,
    pub gamma: f64,
    /// `a = 1/2` (curve stops on the line `u_- = -u_+/2`).
    pub at_half: bool,
    /// `a = a_tilde` (branches merge, `D = 0`).
    pub at_merge: bool,
}

impl KineticPoint {
    /// Residual of `sqrt(s) (u_+ + u_-) + (sqrt(2)/3) gamma`.
    pub fn relation_residual(&self) -> f64 {
        kinetic_residual(self.u_minus, self.u_plus, self.gamma)
    }

    /// `u_0 - sqrt(2) gamma / (3 sqrt(s))`.
    pub fn middle_residual(&self) -> f64 {
        self.u_zero - 2f64.sqrt() * self.gamma / (3.0 * self.s.sqrt())
    }

    /// Mirror image under `u -> -u` (a shock from `u_- < 0` to `u_+ > 0`).
    pub fn mirrored(&self) -> KineticPoint {
        KineticPoint {
            u_minus: -self.u_minus,
            u_zero: -self.u_zero,
            u_plus: -self.u_plus,
            ..*self
        }
    }
}

/// Residual of the kinetic relation
/// `sqrt(1 - (u_+^2 + u_- u_+ + u_-^2)) (u_+ + u_-) + (sqrt(2)/3) gamma`.
/// NaN when the speed is negative.
pub fn kinetic_residual(u_minus: f64, u_plus: f64, gamma: f64) -> f64 {
    rh_speed(u_minus, u_plus).sqrt() * (u_plus + u_minus) + 2f64.sqrt() / 3.0 * gamma
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) {
        Err(Error::OutOfDomain {
            name: "gamma",
            value: gamma,
            range: "(0, sqrt(3/8)]".into(),
        })
    } else if gamma > gamma_max() {
        Err(Error::NoLocus { gamma })
    } else {
        Ok(())
    }
}

pub fn discriminant(a: f64, gamma: f64) -> Result<f64> {
    if a == 1.0 {
        return Err(Error::Pole("D(a, gamma) has a pole at a = 1".into()));
    }
    let am1 = a - 1.0;
    Ok(1.0 - 8.0 / 9.0 * gamma * gamma * (1.0 + a / (am1 * am1)))
}

/// Right end of the `a` interval on which `D(a, gamma) >= 0`.
pub fn a_tilde(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let k = 8.0 * gamma * gamma / 9.0;
    let root = (k * (4.0 - 3.0 * k)).max(0.0).sqrt();
    Ok(((k - 2.0 + root) / (2.0 * (k - 1.0))).max(0.5))
}

/// The two values of `u_+` at `a = 1/2`, returned as `(lower, upper)`.
pub fn u_plus_bounds(gamma: f64) -> Result<(f64, f64)> {
    check_gamma(gamma)?;
    let inner = (1.0 - 8.0 * gamma * gamma / 3.0).max(0.0).sqrt();
    let lower = -(2.0 / 3.0 * (1.0 + inner)).sqrt();
    let upper = -(2.0 / 3.0 * (1.0 - inner)).sqrt();
    Ok((lower, upper))
}

/// `u_+` on a branch as a function of `a`, with `D` clamped at the merge point.
fn branch_u_plus(a: f64, gamma: f64, branch: Branch) -> f64 {
    let d = discriminant(a, gamma).unwrap_or(f64::NAN).max(0.0);
    -((1.0 + branch.sign() * d.sqrt()) / (2.0 * (1.0 - a + a * a))).sqrt()
}

pub fn locus_point(a: f64, gamma: f64, branch: Branch) -> Result<KineticPoint> {
    let a_max = a_tilde(gamma)?;
    if !(a >= 0.5 && a <= a_max + BISECT_TOL) {
        return Err(Error::OutOfDomain {
            name: "a",
            value: a,
            range: format!("[0.5, {a_max}]"),
        });
    }
    let d = discriminant(a, gamma)?;
    if d < -D_ZERO_TOL {
        return Err(Error::NoLocus { gamma });
    }
    let a = a.min(a_max);
    let u_plus = branch_u_plus(a, gamma, branch);
    let u_minus = -a * u_plus;
    Ok(KineticPoint {
        a,
        branch,
        u_minus,
        u_zero: -(u_minus + u_plus),
        u_plus,
        s: rh_speed(u_minus, u_plus),
        gamma,
        at_half: a == 0.5,
        at_merge: d.abs() <= D_ZERO_TOL || a == a_max,
    })
}

/// `n` points per branch, uniformly spaced in `a` over the closed interval `[1/2, a_tilde]`.
pub fn sample_locus(gamma: f64, n: usize) -> Result<Vec<KineticPoint>> {
    let a_max = a_tilde(gamma)?;
    let mut out = Vec::with_capacity(2 * n);
    for branch in [Branch::Plus, Branch::Minus] {
        for i in 0..n {
            let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
            out.push(locus_point(0.5 + t * (a_max - 0.5), gamma, branch)?);
        }
    }
    Ok(out)
}

/// Bisection for a root of `g` on `[lo, hi]` given a sign change.
pub(crate) fn bisect(mut lo: f64, mut hi: f64, tol: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut g_lo = g(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if (g_mid < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The ratio `a` and branch of the locus point with the given `u_+`.
pub fn invert_u_plus(u_plus: f64, gamma: f64) -> Result<(f64, Branch)> {
    let (lower, upper) = u_plus_bounds(gamma)?;
    if !(u_plus >= lower && u_plus <= upper) {
        return Err(Error::NoConnection {
            u_plus,
            lower,
            upper,
        });
    }
    let a_max = a_tilde(gamma)?;
    let merged = branch_u_plus(a_max, gamma, Branch::Plus);
    // u_+^(+) increases from `lower` to `merged`; u_+^(-) decreases from `upper` to `merged`.
    let branch = if u_plus <= merged {
        Branch::Plus
    } else {
        Branch::Minus
    };
    let g = |a: f64| branch_u_plus(a, gamma, branch) - u_plus;
    // endpoints are hit to rounding; bisection cannot resolve a sign there
    let a = if g(0.5).abs() <= 1e-14 {
        0.5
    } else if g(a_max).abs() <= 1e-14 {
        a_max
    } else {
        bisect(0.5, a_max, BISECT_TOL, g)
    };
    Ok((a, branch))
}

/// Left state of the unique undercompressive shock ending at `u_plus`.
pub fn kinetic_u_minus(u_plus: f64, gamma: f64) -> Result<f64> {
    let (a, _) = invert_u_plus(u_plus, gamma)?;
    Ok(-a * u_plus)
}

/// The full locus point ending at `u_plus` (with `s`, `u_0` recomputed from the pair).
pub fn kinetic_point_for_u_plus(u_plus: f64, gamma: f64) -> Result<KineticPoint> {
    let (a, branch) = invert_u_plus(u_plus, gamma)?;
    let a_max = a_tilde(gamma)?;
    let u_minus = -a * u_plus;
    Ok(KineticPoint {
        a,
        branch,
        u_minus,
        u_zero: -(u_minus + u_plus),
        u_plus,
        s: rh_speed(u_minus, u_plus),
        gamma,
        at_half: a == 0.5,
        at_merge: a == a_max,
    })
}

/// Number of samples per branch used to bracket roots of `u_-(a) = target`.
const CANDIDATE_SCAN: usize = 4000;

/// All right states `u_+` reachable from `u_minus` by an undercompressive shock.
/// Works for either sign of `u_minus` (negative left states use the mirror family).
pub fn kinetic_u_plus_candidates(u_minus: f64, gamma: f64) -> Vec<f64> {
    if check_gamma(gamma).is_err() || u_minus == 0.0 {
        return Vec::new();
    }
    if u_minus < 0.0 {
        return kinetic_u_plus_candidates(-u_minus, gamma)
            .into_iter()
            .map(|u| -u)
            .collect();
    }
    let a_max = match a_tilde(gamma) {
        Ok(a) => a,
        Err(_) => return Vec::new(),
    };
    let mut roots: Vec<f64> = Vec::new();
    for branch in [Branch::Plus, Branch::Minus] {
        let g = |a: f64| -a * branch_u_plus(a, gamma, branch) - u_minus;
        let mut a_prev = 0.5;
        let mut g_prev = g(a_prev);
        if g_prev == 0.0 {
            roots.push(a_prev);
        }
        for i in 1..=CANDIDATE_SCAN {
            let a = 0.5 + (a_max - 0.5) * i as f64 / CANDIDATE_SCAN as f64;
            let ga = g(a);
            if ga == 0.0 {
                roots.push(a);
            } else if (ga < 0.0) != (g_prev < 0.0) && g_prev != 0.0 {
                roots.push(bisect(a_prev, a, BISECT_TOL, g));
            }
            a_prev = a;
            g_prev = ga;
        }
    }
    let mut out: Vec<f64> = roots.into_iter().map(|a| -u_minus / a).collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // the two branches share the merge point
    out.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    out
}

/// Signed area `∫_{u_+}^{u_-} c(u) du` with `c(u) = -(f(u) - chord(u))`.
/// Positive exactly when a decreasing saddle–saddle profile is energetically
/// possible; zero for `u_+ = -u_-`.
pub fn entropy_integral(u_minus: f64, u_plus: f64) -> f64 {
    let s = rh_speed(u_minus, u_plus);
    let c0 = u_minus * u_minus * u_minus - u_minus;
    // antiderivative of u^3 - u - c0 + s (u - u_minus)
    let prim = |u: f64| {
        0.25 * u.powi(4) - 0.5 * u * u - c0 * u + 0.5 * s * (u - u_minus).powi(2)
    };
    prim(u_minus) - prim(u_plus)
}

/// Right state paired with `u_minus` when `gamma = 0`: the symmetric jump `u_+ = -u_-`.
pub fn zero_dissipation_u_plus(u_minus: f64) -> f64 {
    -u_minus
}
