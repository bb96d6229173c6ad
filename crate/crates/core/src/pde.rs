//! Method-of-lines solver for `u_t + (u - u^3)_x = beta u_xx + mu u_xxt`.
//!
//! Each stage solves `(I - mu D2) w = beta D2 u - D1 f(u)` for `w = u_t`, with
//! a conservative central flux, and the stages are combined by classical RK4.
//! The matrix is factored once per simulation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::{KineticPoint, PARABOLA_K};
use crate::model::{char_speed, flux};
use crate::tridiag::{CyclicTridiagonal, Tridiagonal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// End values held at their initial (far-field) states.
    DirichletFarField,
    /// Mirror ghost points (zero slope).
    Neumann,
    /// Periodic grid of `nx` points on `[x_min, x_max)`.
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    /// `((u_R - u_L) tanh(steepness x) + (u_R + u_L)) / 2`.
    SmoothedRiemann { u_l: f64, u_r: f64, steepness: f64 },
    /// Exact profile of an undercompressive traveling wave centred at `x0`.
    TravelingWaveSeed { point: KineticPoint, x0: f64 },
    /// Grid values, one per node.
    Custom(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub beta: f64,
    pub mu: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub dt: f64,
    pub t_end: f64,
    pub bc: BoundaryCondition,
    pub initial: InitialCondition,
    /// Weight of the local Lax–Friedrichs dissipation added to the central flux.
    #[serde(default)]
    pub upwind: f64,
    /// Accept `mu < 0` (linearly ill-posed; only for instability experiments).
    #[serde(default)]
    pub allow_negative_dispersion: bool,
}

impl SimConfig {
    /// The configuration used for the `u_L = 0.4`, `u_R = -0.8` run at
    /// `gamma = 1/sqrt(6)`.
    pub fn reference_run() -> Self {
        Self {
            beta: 0.1,
            mu: 0.06,
            x_min: -30.0,
            x_max: 60.0,
            nx: 4001,
            dt: 0.01,
            t_end: 50.0,
            bc: BoundaryCondition::DirichletFarField,
            initial: InitialCondition::SmoothedRiemann {
                u_l: 0.4,
                u_r: -0.8,
                steepness: 1.0 / 6f64.sqrt(),
            },
            upwind: 0.0,
            allow_negative_dispersion: false,
        }
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            bad.push(format!("beta = {} must be finite and >= 0", self.beta));
        }
        if !self.mu.is_finite() || self.mu == 0.0 || (self.mu < 0.0 && !self.allow_negative_dispersion) {
            bad.push(format!("mu = {} must be > 0", self.mu));
        }
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            bad.push(format!("x_max = {} must exceed x_min = {}", self.x_max, self.x_min));
        }
        if self.nx < 3 {
            bad.push(format!("nx = {} must be >= 3", self.nx));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bad.push(format!("dt = {} must be > 0", self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            bad.push(format!("t_end = {} must be >= 0", self.t_end));
        }
        if !(self.upwind >= 0.0 && self.upwind <= 1.0) {
            bad.push(format!("upwind = {} must lie in [0, 1]", self.upwind));
        }
        match &self.initial {
            InitialCondition::Custom(v) if v.len() != self.nx => {
                bad.push(format!("initial profile has {} values, expected nx = {}", v.len(), self.nx));
            }
            InitialCondition::SmoothedRiemann { u_l, u_r, steepness } => {
                if !(u_l.is_finite() && u_r.is_finite()) {
                    bad.push("initial states must be finite".into());
                }
                if !(*steepness > 0.0) {
                    bad.push(format!("steepness = {steepness} must be > 0"));
                }
            }
            InitialCondition::TravelingWaveSeed { point, .. } => {
                let g = self.beta / self.mu.sqrt();
                if !((g - point.gamma).abs() <= 1e-8 * point.gamma.max(1.0)) {
                    bad.push(format!(
                        "beta/sqrt(mu) = {g} does not match the seed's gamma = {}",
                        point.gamma
                    ));
                }
            }
            _ => {}
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(bad))
        }
    }

    pub fn dx(&self) -> f64 {
        match self.bc {
            BoundaryCondition::Periodic => (self.x_max - self.x_min) / self.nx as f64,
            _ => (self.x_max - self.x_min) / (self.nx - 1) as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub t: f64,
    pub u: Vec<f64>,
    pub dx: f64,
    pub x_min: f64,
}

impl SimState {
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    /// `sum u dx` (trapezoid weights at the ends).
    pub fn mass(&self, periodic: bool) -> f64 {
        let n = self.u.len();
        let total: f64 = self.u.iter().sum();
        if periodic {
            total * self.dx
        } else {
            (total - 0.5 * (self.u[0] + self.u[n - 1])) * self.dx
        }
    }
}

/// Undercompressive traveling-wave profile of `point` for the given `mu`,
/// centred at `x0`: `u_+ + (u_- - u_+) / (1 + exp(k (u_- - u_+) x / sqrt(mu s)))`.
pub fn traveling_wave_profile(point: &KineticPoint, mu: f64, x: f64, x0: f64) -> f64 {
    let (um, up) = (point.u_minus, point.u_plus);
    let rate = PARABOLA_K * (um - up) / (mu * point.s).sqrt();
    let e = (rate * (x - x0)).clamp(-700.0, 700.0).exp();
    up + (um - up) / (1.0 + e)
}

pub fn initial_profile(cfg: &SimConfig) -> Result<SimState> {
    cfg.validate()?;
    let n = cfg.nx;
    let mut u: Vec<f64> = match &cfg.initial {
        InitialCondition::SmoothedRiemann { u_l, u_r, steepness } => (0..n)
            .map(|i| 0.5 * ((u_r - u_l) * (steepness * cfg.x(i)).tanh() + (u_r + u_l)))
            .collect(),
        InitialCondition::TravelingWaveSeed { point, x0 } => (0..n)
            .map(|i| traveling_wave_profile(point, cfg.mu, cfg.x(i), *x0))
            .collect(),
        InitialCondition::Custom(v) => v.clone(),
    };
    if cfg.bc == BoundaryCondition::DirichletFarField {
        let (left, right) = match &cfg.initial {
            InitialCondition::SmoothedRiemann { u_l, u_r, .. } => (*u_l, *u_r),
            InitialCondition::TravelingWaveSeed { point, .. } => (point.u_minus, point.u_plus),
            InitialCondition::Custom(v) => (v[0], v[n - 1]),
        };
        u[0] = left;
        u[n - 1] = right;
    }
    Ok(SimState {
        t: 0.0,
        u,
        dx: cfg.dx(),
        x_min: cfg.x_min,
    })
}

enum Operator {
    Open(Tridiagonal),
    Cyclic(CyclicTridiagonal),
}

/// Advances a configuration in time, reusing the factored BBM operator.
pub struct Simulator {
    cfg: SimConfig,
    op: Operator,
    state: SimState,
    flux_buf: Vec<f64>,
    stages: [Vec<f64>; 4],
    trial: Vec<f64>,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        let state = initial_profile(&cfg)?;
        Self::from_state(cfg, state)
    }

    pub fn from_state(cfg: SimConfig, state: SimState) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.nx;
        if state.u.len() != n {
            return Err(Error::InvalidConfig(vec![format!(
                "state has {} values, expected nx = {n}",
                state.u.len()
            )]));
        }
        let r = cfg.mu / (cfg.dx() * cfg.dx());
        let mut sub = vec![-r; n - 1];
        let mut diag = vec![1.0 + 2.0 * r; n];
        let mut sup = vec![-r; n - 1];
        let op = match cfg.bc {
            BoundaryCondition::DirichletFarField => {
                diag[0] = 1.0;
                sup[0] = 0.0;
                diag[n - 1] = 1.0;
                sub[n - 2] = 0.0;
                Operator::Open(Tridiagonal::factor(&sub, &diag, &sup)?)
            }
            BoundaryCondition::Neumann => {
                sup[0] = -2.0 * r;
                sub[n - 2] = -2.0 * r;
                Operator::Open(Tridiagonal::factor(&sub, &diag, &sup)?)
            }
            BoundaryCondition::Periodic => {
                Operator::Cyclic(CyclicTridiagonal::factor(&sub, &diag, &sup, -r, -r)?)
            }
        };
        Ok(Self {
            op,
            state,
            flux_buf: vec![0.0; n + 1],
            stages: std::array::from_fn(|_| vec![0.0; n]),
            trial: vec![0.0; n],
            cfg,
        })
    }

    pub fn state(&self) -> &SimState {
        &self.state
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn into_state(self) -> SimState {
        self.state
    }

    /// `w = u_t` for the profile `u`, written into `out`.
    fn time_derivative(&mut self, u: &[f64], out_idx: usize) -> Result<()> {
        let n = u.len();
        let dx = self.state.dx;
        let (beta, theta) = (self.cfg.beta, self.cfg.upwind);
        let periodic = self.cfg.bc == BoundaryCondition::Periodic;
        let at = |i: isize| -> f64 {
            if i < 0 {
                if periodic {
                    u[(i + n as isize) as usize]
                } else {
                    u[(-i) as usize]
                }
            } else if i as usize >= n {
                if periodic {
                    u[i as usize - n]
                } else {
                    u[2 * (n - 1) - i as usize]
                }
            } else {
                u[i as usize]
            }
        };
        // flux_buf[j] = F_{j - 1/2}
        for j in 0..=n {
            let (a, b) = (at(j as isize - 1), at(j as isize));
            let mut face = 0.5 * (flux(a) + flux(b));
            if theta > 0.0 {
                let speed = char_speed(a).abs().max(char_speed(b).abs());
                face -= 0.5 * theta * speed * (b - a);
            }
            self.flux_buf[j] = face;
        }
        let out = &mut self.stages[out_idx];
        for i in 0..n {
            let ii = i as isize;
            let lap = (at(ii + 1) - 2.0 * u[i] + at(ii - 1)) / (dx * dx);
            out[i] = beta * lap - (self.flux_buf[i + 1] - self.flux_buf[i]) / dx;
        }
        if self.cfg.bc == BoundaryCondition::DirichletFarField {
            out[0] = 0.0;
            out[n - 1] = 0.0;
        }
        match &self.op {
            Operator::Open(lu) => lu.solve_in_place(out),
            Operator::Cyclic(lu) => lu.solve_in_place(out),
        }
        if out.iter().any(|x| !x.is_finite()) {
            return Err(Error::SolverBreakdown(0));
        }
        Ok(())
    }

    /// One RK4 step of size `dt`.
    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        let u = std::mem::take(&mut self.state.u);
        let mut trial = std::mem::take(&mut self.trial);
        let result = (|| {
            self.time_derivative(&u, 0)?;
            for (stage, frac) in [(1, 0.5), (2, 0.5), (3, 1.0)] {
                let prev = &self.stages[stage - 1];
                for ((t, &ui), &k) in trial.iter_mut().zip(&u).zip(prev) {
                    *t = ui + frac * dt * k;
                }
                self.time_derivative(&trial, stage)?;
            }
            Ok(())
        })();
        let mut u = u;
        if result.is_ok() {
            let [k1, k2, k3, k4] = &self.stages;
            for i in 0..u.len() {
                u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            self.state.t += dt;
        }
        self.state.u = u;
        self.trial = trial;
        result
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.cfg.dt)
    }

    /// Steps until `t`, shortening the last step to land on it exactly.
    pub fn run_until(&mut self, t: f64) -> Result<()> {
        while self.state.t < t - 1e-12 * t.abs().max(1.0) {
            let h = self.cfg.dt.min(t - self.state.t);
            self.step_by(h)?;
        }
        Ok(())
    }

    pub fn run(&mut self) -> Result<&SimState> {
        self.run_until(self.cfg.t_end)?;
        Ok(&self.state)
    }
}

/// Advances `state` by one `cfg.dt`. Convenience wrapper that refactors the
/// operator on each call; use [`Simulator`] for long runs.
pub fn step(state: &SimState, cfg: &SimConfig) -> Result<SimState> {
    let mut sim = Simulator::from_state(cfg.clone(), state.clone())?;
    sim.step()?;
    Ok(sim.into_state())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub value: f64,
    pub x_start: f64,
    pub x_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Front {
    /// Steepest point of the transition.
    pub position: f64,
    /// Equal-area position `x_1 + int (b - u) / (b - a) dx` between the centres
    /// of the neighbouring plateaus (values `a`, `b`). By conservation it moves
    /// with the chord speed of `a` and `b` as soon as they are constant, and is
    /// insensitive to the transient shape of a forming shock.
    pub balance_position: f64,
    /// Plateau values on either side.
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontReport {
    pub t: f64,
    pub plateaus: Vec<Plateau>,
    pub fronts: Vec<Front>,
}

/// Plateaus shorter than this fraction of the domain are ignored.
const MIN_PLATEAU_FRACTION: f64 = 0.01;

/// Finds plateaus (maximal runs with `|u_{i+1} - u_i| < plateau_tol dx`, at
/// least 1% of the domain wide) and one front at the steepest point between
/// each pair of consecutive plateaus. Plateau values are run medians; front
/// positions are refined by a parabola through the steepest slope and its
/// neighbours.
pub fn detect_fronts(state: &SimState, plateau_tol: f64) -> FrontReport {
    let u = &state.u;
    let n = u.len();
    let dx = state.dx;
    let min_len = ((MIN_PLATEAU_FRACTION * n as f64).ceil() as usize).max(2);
    let flat: Vec<bool> = u.windows(2).map(|w| (w[1] - w[0]).abs() < plateau_tol * dx).collect();

    // node runs [i, j] with all intervals in between flat
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < flat.len() {
        if !flat[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < flat.len() && flat[i] {
            i += 1;
        }
        if i - start + 1 >= min_len {
            runs.push((start, i));
        }
    }

    let plateaus: Vec<Plateau> = runs
        .iter()
        .map(|&(a, b)| {
            let mut vals = u[a..=b].to_vec();
            vals.sort_by(|p, q| p.partial_cmp(q).unwrap());
            Plateau {
                value: vals[vals.len() / 2],
                x_start: state.x(a),
                x_end: state.x(b),
            }
        })
        .collect();

    let mut fronts = Vec::new();
    for (k, pair) in runs.windows(2).enumerate() {
        let (lo, hi) = (pair[0].1, pair[1].0);
        let sign = (plateaus[k + 1].value - plateaus[k].value).signum();
        // steepest interval in the jump direction
        let (best, _) = (lo..hi)
            .map(|j| (j, sign * (u[j + 1] - u[j])))
            .fold((lo, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
        let slope = |j: usize| sign * (u[j + 1] - u[j]);
        let mut offset = 0.0;
        if best > lo && best + 1 < hi {
            let (a, b, c) = (slope(best - 1), slope(best), slope(best + 1));
            let denom = a - 2.0 * b + c;
            if denom < 0.0 {
                offset = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
            }
        }
        let (a, b) = (plateaus[k].value, plateaus[k + 1].value);
        let (x1, x2) = ((runs[k].0 + runs[k].1) / 2, (runs[k + 1].0 + runs[k + 1].1) / 2);
        let deficit: f64 = u[x1..x2].iter().map(|v| (b - v) / (b - a)).sum();
        fronts.push(Front {
            position: state.x(best) + (0.5 + offset) * dx,
            balance_position: state.x(x1) + (deficit - 0.5) * dx,
            left: plateaus[k].value,
            right: plateaus[k + 1].value,
        });
    }
    FrontReport {
        t: state.t,
        plateaus,
        fronts,
    }
}

/// First position where `u` crosses `level`, by linear interpolation.
pub fn level_crossing(state: &SimState, level: f64) -> Option<f64> {
    state.u.windows(2).enumerate().find_map(|(i, w)| {
        let (a, b) = (w[0] - level, w[1] - level);
        if a == 0.0 {
            Some(state.x(i))
        } else if a * b < 0.0 {
            Some(state.x(i) + a / (a - b) * state.dx)
        } else {
            None
        }
    })
}

/// Least-squares slope of `positions` against `times`.
pub fn fit_speed(times: &[f64], positions: &[f64]) -> f64 {
    let n = times.len() as f64;
    let tm = times.iter().sum::<f64>() / n;
    let xm = positions.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (t, x) in times.iter().zip(positions) {
        num += (t - tm) * (x - xm);
        den += (t - tm) * (t - tm);
    }
    num / den
}

/// Front reports at each of the given times, in order.
pub fn track_fronts(sim: &mut Simulator, times: &[f64], plateau_tol: f64) -> Result<Vec<FrontReport>> {
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        sim.run_until(t)?;
        out.push(detect_fronts(sim.state(), plateau_tol));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontLocator {
    Steepest,
    #[default]
    Balance,
}

impl FrontLocator {
    pub fn position(self, front: &Front) -> f64 {
        match self {
            FrontLocator::Steepest => front.position,
            FrontLocator::Balance => front.balance_position,
        }
    }
}

/// Speed of each front fitted over the reports that show the same number of
/// fronts as the last one. Returns an empty list if there are fewer than two
/// such reports.
pub fn front_speeds(reports: &[FrontReport], locator: FrontLocator) -> Vec<f64> {
    let Some(last) = reports.last() else {
        return Vec::new();
    };
    let m = last.fronts.len();
    let tail: Vec<&FrontReport> = reports
        .iter()
        .rev()
        .take_while(|r| r.fronts.len() == m)
        .collect();
    if tail.len() < 2 {
        return Vec::new();
    }
    let times: Vec<f64> = tail.iter().map(|r| r.t).collect();
    (0..m)
        .map(|k| {
            let xs: Vec<f64> = tail.iter().map(|r| locator.position(&r.fronts[k])).collect();
            fit_speed(&times, &xs)
        })
        .collect()
}
