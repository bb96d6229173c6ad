//! Riemann solver for `u_t + (u - u^3)_x = 0` with traveling-wave admissibility.
//!
//! Solutions are built for `u_L > 0` and mapped to `u_L < 0` by the odd
//! symmetry `u -> -u`. An undercompressive shock travels faster than the
//! characteristics on both sides, so whenever one appears it is the rightmost
//! wave; the remaining problem between `u_L` and its left state is classical.
//!
//! For `u_L > 0`, with `[lo, hi]` the range of kinetic right states:
//!
//! | `u_R`                         | `u_L`                         | pattern |
//! |-------------------------------|-------------------------------|---------|
//! | `u_R > u_L`                   |                               | S       |
//! | `0 <= u_R < u_L`              |                               | R       |
//! | `u_R` in `[lo, hi]`           | `u_L <= u_0(u_R)`             | S       |
//! |                               | `u_0 < u_L < u_M`             | SΣ      |
//! |                               | `u_L = u_M`                   | Σ       |
//! |                               | `u_L > u_M`                   | RΣ      |
//! | other `u_R < 0`               | `u_R <= -2 u_L`               | S       |
//! |                               | `u_R > -2 u_L`                | RS      |
//!
//! where `u_M = kinetic_u_minus(u_R)` and `u_0 = -(u_M + u_R)`. In the last row
//! the shock leaves the fan at `-u_R / 2` with speed equal to the characteristic
//! speed there.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kinetics::{gamma_max, kinetic_residual, kinetic_u_minus, u_plus_bounds};
use crate::model::{char_speed, classify_shock, rh_speed, ShockKind};
use crate::phaseplane::tw_admissible;

/// Tolerance for accepting a shock attached tangentially to a fan.
pub const SONIC_TOL: f64 = 1e-10;
/// Maximum kinetic-relation residual accepted by [`verify`].
pub const KINETIC_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    Rarefaction,
    LaxShock,
    UndercompressiveShock,
}

impl WaveKind {
    pub fn symbol(self) -> &'static str {
        match self {
            WaveKind::Rarefaction => "R",
            WaveKind::LaxShock => "S",
            WaveKind::UndercompressiveShock => "Σ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub kind: WaveKind,
    pub left_state: f64,
    pub right_state: f64,
    /// `[sigma_left, sigma_right]`; both ends equal for shocks.
    pub speed_range: [f64; 2],
}

impl Wave {
    fn shock(kind: WaveKind, left: f64, right: f64) -> Self {
        let s = rh_speed(left, right);
        Self {
            kind,
            left_state: left,
            right_state: right,
            speed_range: [s, s],
        }
    }

    fn fan(left: f64, right: f64) -> Self {
        Self {
            kind: WaveKind::Rarefaction,
            left_state: left,
            right_state: right,
            speed_range: [char_speed(left), char_speed(right)],
        }
    }

    fn negated(&self) -> Self {
        Self {
            left_state: -self.left_state,
            right_state: -self.right_state,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution {
    pub u_l: f64,
    pub u_r: f64,
    pub gamma: f64,
    pub waves: Vec<Wave>,
    pub pattern: String,
}

impl RiemannSolution {
    fn new(u_l: f64, u_r: f64, gamma: f64, waves: Vec<Wave>) -> Self {
        Self {
            u_l,
            u_r,
            gamma,
            pattern: pattern_label(&waves),
            waves,
        }
    }

    /// States strictly between consecutive waves.
    pub fn intermediate_states(&self) -> Vec<f64> {
        self.waves
            .iter()
            .take(self.waves.len().saturating_sub(1))
            .map(|w| w.right_state)
            .collect()
    }
}

/// Label of a wave sequence, `"C"` for the constant solution.
pub fn pattern_label(waves: &[Wave]) -> String {
    if waves.is_empty() {
        return "C".into();
    }
    waves.iter().map(|w| w.kind.symbol()).collect()
}

fn nonclassical(gamma: f64) -> bool {
    gamma > 0.0 && gamma <= gamma_max()
}

/// Closed-form TW-admissibility of a Lax shock.
///
/// Shocks with `s <= 0` always have a profile. For `s > 0` and `u_- > 0` the
/// profile disappears exactly when `u_+` lies in the kinetic range and `u_-`
/// exceeds the middle equilibrium of the undercompressive shock ending at
/// `u_+`: beyond that point the unstable manifold of `u_-` passes the saddle
/// `u_+` on the far side. [`verify`] re-checks the same property by shooting.
pub fn lax_shock_admissible(u_minus: f64, u_plus: f64, gamma: f64) -> bool {
    if u_minus < 0.0 {
        return lax_shock_admissible(-u_minus, -u_plus, gamma);
    }
    if rh_speed(u_minus, u_plus) <= 0.0 || !nonclassical(gamma) || u_plus >= 0.0 {
        return true;
    }
    let Ok((lo, hi)) = u_plus_bounds(gamma) else {
        return true;
    };
    if u_plus < lo || u_plus > hi {
        return true;
    }
    let u_m = kinetic_u_minus(u_plus, gamma).expect("u_plus inside bounds");
    u_minus <= -(u_m + u_plus)
}

/// Solves the Riemann problem with left state `u_l` and right state `u_r`.
///
/// For `gamma` outside `(0, sqrt(3/8)]` there are no undercompressive shocks and
/// the classical solution is returned.
pub fn solve(u_l: f64, u_r: f64, gamma: f64) -> RiemannSolution {
    if u_l < 0.0 {
        let mirrored = solve(-u_l, -u_r, gamma);
        let waves = mirrored.waves.iter().map(Wave::negated).collect();
        return RiemannSolution::new(u_l, u_r, gamma, waves);
    }
    RiemannSolution::new(u_l, u_r, gamma, waves_for_nonnegative_left(u_l, u_r, gamma))
}

fn waves_for_nonnegative_left(u_l: f64, u_r: f64, gamma: f64) -> Vec<Wave> {
    use WaveKind::*;
    if u_l == u_r {
        return Vec::new();
    }
    if u_l == 0.0 || u_r > u_l {
        return vec![Wave::shock(LaxShock, u_l, u_r)];
    }
    if u_r >= 0.0 {
        return vec![Wave::fan(u_l, u_r)];
    }
    if nonclassical(gamma) {
        if let Ok(u_m) = kinetic_u_minus(u_r, gamma) {
            let u_0 = -(u_m + u_r);
            let sigma = Wave::shock(UndercompressiveShock, u_m, u_r);
            return if u_l <= u_0 {
                vec![Wave::shock(LaxShock, u_l, u_r)]
            } else if u_l < u_m {
                vec![Wave::shock(LaxShock, u_l, u_m), sigma]
            } else if u_l == u_m {
                vec![sigma]
            } else {
                vec![Wave::fan(u_l, u_m), sigma]
            };
        }
    }
    if u_r <= -2.0 * u_l {
        return vec![Wave::shock(LaxShock, u_l, u_r)];
    }
    let u_t = -0.5 * u_r;
    let s = char_speed(u_t);
    vec![
        Wave::fan(u_l, u_t),
        Wave {
            kind: LaxShock,
            left_state: u_t,
            right_state: u_r,
            speed_range: [s, s],
        },
    ]
}

/// Value of the solution at `r = x / t`; right-continuous at shocks.
pub fn evaluate(sol: &RiemannSolution, r: f64) -> f64 {
    let mut state = sol.u_l;
    for w in &sol.waves {
        let [lo, hi] = w.speed_range;
        if r < lo {
            return state;
        }
        if w.kind == WaveKind::Rarefaction && r < hi {
            let sign = (w.left_state + w.right_state).signum();
            return sign * ((1.0 - r) / 3.0).max(0.0).sqrt();
        }
        state = w.right_state;
    }
    state
}

/// Re-checks every structural and admissibility property of a solution,
/// returning a description of each violation. Lax shocks are confirmed by
/// phase-plane shooting.
pub fn verify(sol: &RiemannSolution) -> Vec<String> {
    let mut issues = Vec::new();
    if sol.waves.is_empty() {
        if sol.u_l != sol.u_r {
            issues.push("empty wave list for distinct states".into());
        }
        return issues;
    }
    if sol.waves[0].left_state != sol.u_l {
        issues.push("leftmost state differs from u_L".into());
    }
    if sol.waves.last().unwrap().right_state != sol.u_r {
        issues.push("rightmost state differs from u_R".into());
    }
    for (i, pair) in sol.waves.windows(2).enumerate() {
        if pair[0].right_state != pair[1].left_state {
            issues.push(format!("waves {i} and {} do not share a state", i + 1));
        }
        if pair[0].speed_range[1] > pair[1].speed_range[0] + SONIC_TOL {
            issues.push(format!("waves {i} and {} are out of order", i + 1));
        }
    }
    for (i, w) in sol.waves.iter().enumerate() {
        let (l, r) = (w.left_state, w.right_state);
        match w.kind {
            WaveKind::Rarefaction => {
                let [a, b] = w.speed_range;
                if l * r < 0.0 || a >= b {
                    issues.push(format!("wave {i}: fan is not monotone"));
                }
                if (a - char_speed(l)).abs() > SONIC_TOL || (b - char_speed(r)).abs() > SONIC_TOL {
                    issues.push(format!("wave {i}: fan edges are not characteristic"));
                }
            }
            WaveKind::LaxShock => {
                let s = w.speed_range[0];
                if (s - rh_speed(l, r)).abs() > SONIC_TOL {
                    issues.push(format!("wave {i}: speed violates Rankine-Hugoniot"));
                }
                let tangent = (s - char_speed(l)).abs() <= SONIC_TOL;
                let pair = classify_shock(l, r);
                if !tangent && pair.kind != ShockKind::Lax {
                    issues.push(format!("wave {i}: not a Lax shock ({:?})", pair.kind));
                } else if !tangent && !tw_admissible(l, r, sol.gamma) {
                    issues.push(format!("wave {i}: no traveling-wave profile"));
                }
            }
            WaveKind::UndercompressiveShock => {
                let res = if l > 0.0 {
                    kinetic_residual(l, r, sol.gamma)
                } else {
                    kinetic_residual(-l, -r, sol.gamma)
                };
                if !(res.abs() < KINETIC_TOL) {
                    issues.push(format!("wave {i}: kinetic residual {res:e}"));
                }
            }
        }
    }
    issues
}

/// Uniform square grid `[lo, hi]^2` with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl PlaneGrid {
    pub fn value(&self, i: usize) -> f64 {
        if self.n < 2 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneCell {
    pub u_l: f64,
    pub u_r: f64,
    pub pattern: String,
}

/// Pattern label for every `(u_L, u_R)` grid cell, in row-major order
/// (`u_L` outer). Cells are solved in parallel.
pub fn classify_plane(gamma: f64, grid: PlaneGrid) -> Vec<PlaneCell> {
    (0..grid.n * grid.n)
        .into_par_iter()
        .map(|k| {
            let (u_l, u_r) = (grid.value(k / grid.n), grid.value(k % grid.n));
            PlaneCell {
                u_l,
                u_r,
                pattern: solve(u_l, u_r, gamma).pattern,
            }
        })
        .collect()
}
