//! Traveling-wave phase plane for the scalar equation.
//!
//! With `xi = (x - s t) / sqrt(mu s)` and `s > 0`, profiles solve
//!
//! ```text
//! u' = v,
//! v' = (gamma / sqrt(s)) v + c(u),   c(u) = u^3 - u - (u_-^3 - u_-) + s (u - u_-),
//! ```
//!
//! and a shock `u_- -> u_+` is TW-admissible when an orbit joins `(u_-, 0)` to
//! `(u_+, 0)`. Connections are detected numerically by shooting along the
//! invariant manifolds of the saddles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::rh_speed;
use crate::ode::{State, Stepper, Tolerances};

/// Default gap below which two manifolds are considered to coincide.
pub const CONNECTION_TOL: f64 = 1e-6;
/// Offset of the shooting seed along the eigenvector.
pub const SEED_OFFSET: f64 = 1e-8;
/// Orbits leaving `|u| <= BOX_U R, |v| <= BOX_V R^2 max(1, sqrt|scale|)` are
/// declared divergent, where `R = max(1, max |equilibrium|)`.
pub const BOX_U: f64 = 3.0;
pub const BOX_V: f64 = 10.0;
/// Hard stop on the integration length.
const XI_MAX: f64 = 1e5;
/// Endpoints passed by the caller are snapped to equilibria within this distance.
const ROOT_MATCH_TOL: f64 = 1e-9;
/// Speeds with `|s|` below this use the first-order (zero-speed) profile equation.
const ZERO_SPEED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Connects,
    MissesAbove,
    MissesBelow,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSample {
    pub xi: f64,
    pub u: f64,
    pub v: f64,
}

/// Outcome of a shooting run.
///
/// For saddle-to-saddle shots `terminal_distance` is the gap between the
/// unstable manifold of the start and the stable manifold of the target where
/// both cross the separating section; for shots into a node it is the closest
/// approach to the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub trajectory: Vec<OrbitSample>,
    pub verdict: Verdict,
    pub terminal_distance: f64,
}

impl OrbitResult {
    pub fn connects(&self) -> bool {
        self.verdict == Verdict::Connects
    }
}

/// The planar field `u' = v, v' = damping v + scale (u - r0)(u - r1)(u - r2)`.
///
/// Both the scalar traveling-wave system and the p-system reduce to this form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicField {
    pub damping: f64,
    pub scale: f64,
    pub roots: [f64; 3],
}

impl CubicField {
    pub fn cubic(&self, u: f64) -> f64 {
        let [a, b, c] = self.roots;
        self.scale * (u - a) * (u - b) * (u - c)
    }

    pub fn cubic_slope(&self, u: f64) -> f64 {
        let [a, b, c] = self.roots;
        self.scale * ((u - b) * (u - c) + (u - a) * (u - c) + (u - a) * (u - b))
    }

    pub fn rhs(&self, y: State) -> State {
        [y[1], self.damping * y[1] + self.cubic(y[0])]
    }

    /// An equilibrium is a saddle iff the Jacobian determinant `-c'(u)` is negative.
    pub fn is_saddle(&self, u: f64) -> bool {
        self.cubic_slope(u) > 0.0
    }

    /// Eigenvalues of `[[0, 1], [c'(u), damping]]`, larger real part first.
    pub fn eigenvalues(&self, u: f64) -> (Complex64, Complex64) {
        let b = self.damping;
        let disc = Complex64::new(b * b + 4.0 * self.cubic_slope(u), 0.0).sqrt();
        (
            (Complex64::new(b, 0.0) + disc) * 0.5,
            (Complex64::new(b, 0.0) - disc) * 0.5,
        )
    }

    fn snap(&self, u: f64) -> Result<f64> {
        self.roots
            .iter()
            .copied()
            .find(|r| (r - u).abs() <= ROOT_MATCH_TOL)
            .ok_or(Error::OutOfDomain {
                name: "equilibrium",
                value: u,
                range: format!("{:?}", self.roots),
            })
    }

    /// Equilibrium strictly between `a` and `b`, if any.
    fn root_between(&self, a: f64, b: f64) -> Option<f64> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.roots
            .iter()
            .copied()
            .find(|&r| r > lo + ROOT_MATCH_TOL && r < hi - ROOT_MATCH_TOL)
    }
}

fn unit(x: f64, y: f64) -> (f64, f64) {
    let n = x.hypot(y);
    (x / n, y / n)
}

fn outside_box(field: &CubicField, y: &State) -> bool {
    let r = field.roots.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let v_max = BOX_V * r * r * field.scale.abs().sqrt().max(1.0);
    !(y[0].abs() <= BOX_U * r && y[1].abs() <= v_max)
}

enum SectionRun {
    Reached(Vec<OrbitSample>),
    Lost(Vec<OrbitSample>),
}

/// Integrates from `start` until `u` crosses `u_section`; the crossing point is
/// located by bisection on the final step and appended to the samples.
fn run_to_section(field: &CubicField, start: State, direction: f64, u_section: f64) -> SectionRun {
    let mut st = Stepper::new(|y| field.rhs(y), start, direction, Tolerances::default());
    let side = (start[0] - u_section).signum();
    let mut samples = vec![OrbitSample {
        xi: 0.0,
        u: start[0],
        v: start[1],
    }];
    while st.t.abs() < XI_MAX {
        let (t_prev, y_prev) = (st.t, st.y);
        if !st.advance() {
            return SectionRun::Lost(samples);
        }
        if (st.y[0] - u_section).signum() != side {
            let (mut lo, mut hi) = (0.0, st.t - t_prev);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let y = st.probe(y_prev, mid);
                if (y[0] - u_section).signum() == side {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let h = 0.5 * (lo + hi);
            let y = st.probe(y_prev, h);
            samples.push(OrbitSample {
                xi: t_prev + h,
                u: y[0],
                v: y[1],
            });
            return SectionRun::Reached(samples);
        }
        samples.push(OrbitSample {
            xi: st.t,
            u: st.y[0],
            v: st.y[1],
        });
        if outside_box(field, &st.y) {
            return SectionRun::Lost(samples);
        }
    }
    SectionRun::Lost(samples)
}

/// Integrates from `start` until the orbit settles within `tol` of an equilibrium
/// other than `exclude`, leaves the box, or runs out of time.
fn run_to_point(
    field: &CubicField,
    start: State,
    direction: f64,
    target: f64,
    exclude: f64,
    tol: f64,
) -> OrbitResult {
    let mut st = Stepper::new(|y| field.rhs(y), start, direction, Tolerances::default());
    let mut samples = vec![OrbitSample {
        xi: 0.0,
        u: start[0],
        v: start[1],
    }];
    let dist = |y: &State, r: f64| (y[0] - r).hypot(y[1]);
    let mut closest = dist(&start, target);
    let mut verdict = Verdict::Diverges;
    while st.t.abs() < XI_MAX {
        if !st.advance() {
            break;
        }
        samples.push(OrbitSample {
            xi: st.t,
            u: st.y[0],
            v: st.y[1],
        });
        let d = dist(&st.y, target);
        closest = closest.min(d);
        if d < tol {
            verdict = Verdict::Connects;
            break;
        }
        if outside_box(field, &st.y) {
            break;
        }
        if let Some(&other) = field
            .roots
            .iter()
            .find(|&&r| r != exclude && r != target && dist(&st.y, r) < tol)
        {
            verdict = if other > target {
                Verdict::MissesAbove
            } else {
                Verdict::MissesBelow
            };
            break;
        }
    }
    if direction < 0.0 {
        // report in increasing xi
        samples.reverse();
    }
    OrbitResult {
        trajectory: samples,
        verdict,
        terminal_distance: closest,
    }
}

fn real_eigenvalues(field: &CubicField, u: f64) -> (f64, f64) {
    let (a, b) = field.eigenvalues(u);
    (a.re, b.re)
}

/// Unstable manifold of `from` against the stable manifold of `to`, compared on
/// the vertical section through the middle equilibrium.
fn shoot_between_saddles(field: &CubicField, from: f64, to: f64, tol: f64) -> OrbitResult {
    let u_section = field
        .root_between(from, to)
        .unwrap_or(0.5 * (from + to));
    let dir = (to - from).signum();

    let (lam_u, _) = real_eigenvalues(field, from);
    let (ex, ey) = unit(1.0, lam_u);
    let start_fwd = [from + dir * SEED_OFFSET * ex, dir * SEED_OFFSET * ey];

    let (_, lam_s) = real_eigenvalues(field, to);
    let (ex, ey) = unit(1.0, lam_s);
    let start_bwd = [to - dir * SEED_OFFSET * ex, -dir * SEED_OFFSET * ey];

    let fwd = run_to_section(field, start_fwd, 1.0, u_section);
    let bwd = run_to_section(field, start_bwd, -1.0, u_section);
    match (fwd, bwd) {
        (SectionRun::Reached(f), SectionRun::Reached(b)) => {
            let end_f = *f.last().unwrap();
            let end_b = *b.last().unwrap();
            let gap = end_f.v - end_b.v;
            let verdict = if gap.abs() < tol {
                Verdict::Connects
            } else if gap > 0.0 {
                Verdict::MissesAbove
            } else {
                Verdict::MissesBelow
            };
            let mut trajectory = f;
            let shift = end_f.xi - end_b.xi;
            trajectory.extend(b.iter().rev().skip(1).map(|p| OrbitSample {
                xi: p.xi + shift,
                ..*p
            }));
            OrbitResult {
                trajectory,
                verdict,
                terminal_distance: gap.abs(),
            }
        }
        (f, _) => {
            let samples = match f {
                SectionRun::Reached(s) | SectionRun::Lost(s) => s,
            };
            let closest = samples
                .iter()
                .map(|p| (p.u - to).hypot(p.v))
                .fold(f64::INFINITY, f64::min);
            OrbitResult {
                trajectory: samples,
                verdict: Verdict::Diverges,
                terminal_distance: closest,
            }
        }
    }
}

/// Shoots from equilibrium `from` to equilibrium `to` of a cubic field.
///
/// * saddle to saddle: two-sided shooting with a section at the middle equilibrium;
/// * saddle to node: forward along the unstable manifold of `from`;
/// * node to saddle: backward along the stable manifold of `to`.
pub fn connect_field(field: &CubicField, from: f64, to: f64, tol: f64) -> Result<OrbitResult> {
    let from = field.snap(from)?;
    let to = field.snap(to)?;
    let dir = (to - from).signum();
    match (field.is_saddle(from), field.is_saddle(to)) {
        (true, true) => Ok(shoot_between_saddles(field, from, to, tol)),
        (true, false) => {
            let (lam_u, _) = real_eigenvalues(field, from);
            let (ex, ey) = unit(1.0, lam_u);
            let start = [from + dir * SEED_OFFSET * ex, dir * SEED_OFFSET * ey];
            Ok(run_to_point(field, start, 1.0, to, from, tol))
        }
        (false, true) => {
            let (_, lam_s) = real_eigenvalues(field, to);
            let (ex, ey) = unit(1.0, lam_s);
            let start = [to - dir * SEED_OFFSET * ex, -dir * SEED_OFFSET * ey];
            Ok(run_to_point(field, start, -1.0, from, to, tol))
        }
        (false, false) => Err(Error::NotSaddle(from)),
    }
}

/// Traveling-wave problem for a given speed and left state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwProblem {
    pub gamma: f64,
    pub s: f64,
    pub u_minus: f64,
    /// Distinct real equilibria, in decreasing order.
    pub equilibria: Vec<f64>,
    /// All three roots of `c` with multiplicity, when real.
    roots: Option<[f64; 3]>,
}

impl TwProblem {
    pub fn new(gamma: f64, s: f64, u_minus: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::DegenerateSpeed(s));
        }
        let disc = 4.0 * (1.0 - s) - 3.0 * u_minus * u_minus;
        let roots = (disc >= 0.0).then(|| {
            let r = disc.sqrt();
            [u_minus, 0.5 * (-u_minus + r), 0.5 * (-u_minus - r)]
        });
        Ok(Self {
            gamma,
            s,
            u_minus,
            equilibria: equilibria(u_minus, s),
            roots,
        })
    }

    /// Problem whose equilibria are exactly `u_-`, `u_+` and `-(u_- + u_+)`.
    pub fn for_shock(u_minus: f64, u_plus: f64, gamma: f64) -> Result<Self> {
        let s = rh_speed(u_minus, u_plus);
        if !(s > 0.0) {
            return Err(Error::DegenerateSpeed(s));
        }
        let roots = [u_minus, u_plus, -(u_minus + u_plus)];
        Ok(Self {
            gamma,
            s,
            u_minus,
            equilibria: distinct_desc(&roots),
            roots: Some(roots),
        })
    }

    pub fn from_point(p: &crate::kinetics::KineticPoint) -> Result<Self> {
        Self::for_shock(p.u_minus, p.u_plus, p.gamma)
    }

    pub fn damping(&self) -> f64 {
        self.gamma / self.s.sqrt()
    }

    /// `c(u) = u^3 - u - (u_-^3 - u_-) + s (u - u_-)`.
    pub fn cubic(&self, u: f64) -> f64 {
        let um = self.u_minus;
        u * u * u - u - (um * um * um - um) + self.s * (u - um)
    }

    pub fn field(&self) -> Option<CubicField> {
        self.roots.map(|roots| CubicField {
            damping: self.damping(),
            scale: 1.0,
            roots,
        })
    }

    pub fn is_saddle(&self, u: f64) -> bool {
        // det J = -(s - 1 + 3u^2)
        self.s - 1.0 + 3.0 * u * u > 0.0
    }
}

fn distinct_desc(roots: &[f64]) -> Vec<f64> {
    let mut v = roots.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

/// `(u', v')` of the traveling-wave system.
pub fn vector_field(u: f64, v: f64, prob: &TwProblem) -> (f64, f64) {
    (v, prob.damping() * v + prob.cubic(u))
}

/// Equilibria `u` of the traveling-wave system for left state `u_minus` and
/// speed `s`: `u_minus` itself and the real roots of `u^2 + u_- u + u_-^2 = 1 - s`.
pub fn equilibria(u_minus: f64, s: f64) -> Vec<f64> {
    let disc = 4.0 * (1.0 - s) - 3.0 * u_minus * u_minus;
    if disc < 0.0 {
        return vec![u_minus];
    }
    let r = disc.sqrt();
    distinct_desc(&[u_minus, 0.5 * (-u_minus + r), 0.5 * (-u_minus - r)])
}

/// `lambda_± = (gamma/sqrt(s) ± sqrt(gamma^2/s + 4 (s - 1 + 3u^2))) / 2`.
pub fn eigenvalues(u: f64, prob: &TwProblem) -> (Complex64, Complex64) {
    let b = prob.damping();
    let disc = Complex64::new(
        prob.gamma * prob.gamma / prob.s + 4.0 * (prob.s - 1.0 + 3.0 * u * u),
        0.0,
    )
    .sqrt();
    (
        (Complex64::new(b, 0.0) + disc) * 0.5,
        (Complex64::new(b, 0.0) - disc) * 0.5,
    )
}

fn require_field(prob: &TwProblem) -> Result<CubicField> {
    prob.field().ok_or(Error::OutOfDomain {
        name: "s",
        value: prob.s,
        range: "three real equilibria required".into(),
    })
}

/// Shoots along the unstable manifold of the saddle `from` toward the
/// equilibrium `toward`.
pub fn shoot_unstable(prob: &TwProblem, from: f64, toward: f64, tol: f64) -> Result<OrbitResult> {
    let field = require_field(prob)?;
    let from = field.snap(from)?;
    if !field.is_saddle(from) {
        return Err(Error::NotSaddle(from));
    }
    connect_field(&field, from, toward, tol)
}

/// Integrates the stable manifold of the saddle `to` backward toward `from`.
pub fn shoot_stable(prob: &TwProblem, to: f64, from: f64, tol: f64) -> Result<OrbitResult> {
    let field = require_field(prob)?;
    let to = field.snap(to)?;
    if !field.is_saddle(to) {
        return Err(Error::NotSaddle(to));
    }
    connect_field(&field, from, to, tol)
}

/// Any-speed check for a traveling wave behind the shock `u_minus -> u_plus`.
///
/// Negative speeds use `xi = (x - s t) / sqrt(mu |s|)`, which turns the profile
/// equation into `u'' = -(gamma / sqrt|s|) u' - c(u)`; a zero speed leaves the
/// first-order equation `beta u' = f(u) - f(u_-)`.
pub fn shock_profile(u_minus: f64, u_plus: f64, gamma: f64, tol: f64) -> Result<OrbitResult> {
    let s = rh_speed(u_minus, u_plus);
    let roots = [u_minus, u_plus, -(u_minus + u_plus)];
    if s > ZERO_SPEED_TOL {
        let prob = TwProblem::for_shock(u_minus, u_plus, gamma)?;
        return connect_field(&require_field(&prob)?, u_minus, u_plus, tol);
    }
    if s < -ZERO_SPEED_TOL {
        let field = CubicField {
            damping: -gamma / (-s).sqrt(),
            scale: -1.0,
            roots,
        };
        return connect_field(&field, u_minus, u_plus, tol);
    }
    // zero speed: monotone first-order flow, connected iff no equilibrium in between
    // and f(u) - f(u_-) has the sign of u_+ - u_-.
    let third = roots[2];
    let (lo, hi) = if u_minus < u_plus {
        (u_minus, u_plus)
    } else {
        (u_plus, u_minus)
    };
    let mid = 0.5 * (u_minus + u_plus);
    let drift = crate::model::flux(mid) - crate::model::flux(u_minus);
    let ok = !(third > lo && third < hi) && drift * (u_plus - u_minus) > 0.0;
    Ok(OrbitResult {
        trajectory: Vec::new(),
        verdict: if ok { Verdict::Connects } else { Verdict::Diverges },
        terminal_distance: if ok { 0.0 } else { f64::MAX },
    })
}

/// `true` if `u_minus -> u_plus` has a traveling-wave profile.
pub fn tw_admissible(u_minus: f64, u_plus: f64, gamma: f64) -> bool {
    shock_profile(u_minus, u_plus, gamma, CONNECTION_TOL)
        .map(|o| o.connects())
        .unwrap_or(false)
}

/// `max |v - k (u - u_a)(u - u_b)|` over the orbit samples.
pub fn parabola_residual_with(orbit: &OrbitResult, k: f64, u_a: f64, u_b: f64) -> f64 {
    orbit
        .trajectory
        .iter()
        .map(|p| (p.v - k * (p.u - u_a) * (p.u - u_b)).abs())
        .fold(0.0, f64::max)
}

/// Distance of a scalar orbit from the invariant parabola through `u_±`, with
/// `k = ±1/sqrt(2)` oriented so that `v` has the sign of `u_+ - u_-`.
pub fn parabola_residual(orbit: &OrbitResult, u_minus: f64, u_plus: f64) -> f64 {
    let k = (u_minus - u_plus).signum() * crate::kinetics::PARABOLA_K;
    parabola_residual_with(orbit, k, u_minus, u_plus)
}
