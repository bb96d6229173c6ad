//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints its own PASS/FAIL line; the process exits nonzero if any fails.

// `ensure!(x <= tol)` must fail for NaN, hence the negated comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use ucshock::kinetics::*;
use ucshock::model::*;
use ucshock::pde::*;
use ucshock::error::Error;
use ucshock::phaseplane::{parabola_residual, shoot_unstable, TwProblem, CONNECTION_TOL};
use ucshock::psystem::*;
use ucshock::riemann::{evaluate, solve, RiemannSolution, WaveKind};

const G6: f64 = 0.408_248_290_463_863;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within_time(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn sampled_gammas() -> Vec<f64> {
    (1..=6).map(|k| 0.1 * k as f64 * gamma_max()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    let mut count = 0;
    for g in sampled_gammas() {
        let a_max = a_tilde(g).map_err(|e| e.to_string())?;
        for branch in [Branch::Plus, Branch::Minus] {
            for i in 0..50 {
                let a = 0.5 + (a_max - 0.5) * i as f64 / 49.0;
                let p = locus_point(a, g, branch).map_err(|e| e.to_string())?;
                worst[0] = worst[0].max((p.u_minus + p.u_zero + p.u_plus).abs());
                worst[1] = worst[1].max(p.middle_residual().abs());
                worst[2] = worst[2].max(p.relation_residual().abs());
                count += 1;
            }
        }
    }
    within_time(start.elapsed(), Duration::from_secs(1))?;
    ensure!(worst[0] <= 1e-12, "sum rule residual {:.2e}", worst[0]);
    ensure!(worst[1] <= 1e-10, "middle-state residual {:.2e}", worst[1]);
    ensure!(worst[2] <= 1e-10, "kinetic relation residual {:.2e}", worst[2]);
    Ok(format!(
        "{count} points; residuals sum {:.1e}, u_0 {:.1e}, relation {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    for g in sampled_gammas() {
        let inner = (1.0 - 8.0 * g * g / 3.0).sqrt();
        let lower = -(2.0 / 3.0 * (1.0 + inner)).sqrt();
        let upper = -(2.0 / 3.0 * (1.0 - inner)).sqrt();
        let plus = locus_point(0.5, g, Branch::Plus).map_err(|e| e.to_string())?;
        let minus = locus_point(0.5, g, Branch::Minus).map_err(|e| e.to_string())?;
        worst = worst
            .max((plus.u_plus - lower).abs())
            .max((minus.u_plus - upper).abs());
    }
    ensure!(worst <= 1e-12, "endpoint mismatch {worst:.2e}");
    let plus = locus_point(0.5, G6, Branch::Plus).unwrap().u_plus;
    let minus = locus_point(0.5, G6, Branch::Minus).unwrap().u_plus;
    ensure!((plus + 1.07869).abs() <= 1e-5, "lower bound {plus}");
    ensure!((minus + 0.41202).abs() <= 1e-5, "upper bound {minus}");
    Ok(format!(
        "max mismatch {worst:.1e}; gamma = 1/sqrt(6): ({plus:.6}, {minus:.6})"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a_max = a_tilde(G6).unwrap();
    // a = 1/2 on the minus branch is sonic (u_- = u_0), so sample the open interval
    let points: Vec<KineticPoint> = [Branch::Plus, Branch::Minus]
        .iter()
        .flat_map(|&b| {
            (0..10).map(move |i| {
                let a = 0.5 + (a_max - 0.5) * (i as f64 + 0.5) / 10.0;
                locus_point(a, G6, b).unwrap()
            })
        })
        .collect();
    // shooting along the unstable manifold of u_-; a perturbation can push u_-
    // inside the equilibria, leaving no saddle-saddle orbit to find
    let shoot = |u_minus: f64, u_plus: f64| {
        TwProblem::for_shock(u_minus, u_plus, G6)
            .and_then(|prob| shoot_unstable(&prob, u_minus, u_plus, CONNECTION_TOL))
    };
    let results: Vec<Result<(f64, f64, usize), String>> = points
        .par_iter()
        .map(|p| {
            let orbit = shoot(p.u_minus, p.u_plus).map_err(|e| format!("a = {}: {e}", p.a))?;
            if !orbit.connects() || orbit.terminal_distance >= 1e-6 {
                return Err(format!("a = {} {:?}: {:?}", p.a, p.branch, orbit.verdict));
            }
            let res = parabola_residual(&orbit, p.u_minus, p.u_plus);
            if res >= 1e-5 {
                return Err(format!("a = {}: parabola residual {res:.2e}", p.a));
            }
            let mut not_saddle = 0;
            for f in [0.95, 1.05] {
                match shoot(p.u_minus, f * p.u_plus) {
                    Ok(o) if o.connects() => {
                        return Err(format!("a = {}: perturbation x{f} still connects", p.a))
                    }
                    Ok(_) => {}
                    Err(Error::NotSaddle(_)) => not_saddle += 1,
                    Err(e) => return Err(format!("a = {}: perturbation x{f}: {e}", p.a)),
                }
            }
            Ok((orbit.terminal_distance, res, not_saddle))
        })
        .collect();
    let mut dist = 0.0f64;
    let mut res = 0.0f64;
    let mut not_saddle = 0;
    for r in results {
        let (d, q, n) = r?;
        dist = dist.max(d);
        res = res.max(q);
        not_saddle += n;
    }
    within_time(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "20 connections (max distance {dist:.1e}, parabola residual {res:.1e}); \
         40 perturbations rejected ({not_saddle} leave u_- a non-saddle)"
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let n = 200;
    let (g_top, da) = (0.8, 0.5 / n as f64);
    let dg = g_top / n as f64;
    let mut mismatches = 0;
    for j in 0..n {
        let g = (j as f64 + 0.5) * dg;
        let a_max = a_tilde(g).ok();
        for i in 0..n {
            let a = 0.5 + (i as f64 + 0.5) * da;
            let positive = discriminant(a, g).unwrap() > 0.0;
            let predicted = g < gamma_max() && a_max.is_some_and(|m| a < m);
            let near_edge =
                (g - gamma_max()).abs() < dg || a_max.is_some_and(|m| (a - m).abs() < da);
            if positive != predicted && !near_edge {
                mismatches += 1;
            }
        }
    }
    ensure!(mismatches == 0, "{mismatches} cells disagree");
    let d = |a: f64| 1.0 - 8.0 / 9.0 * G6 * G6 * (1.0 + a / ((a - 1.0) * (a - 1.0)));
    let (mut lo, mut hi) = (0.5, 0.99);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if d(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let at = a_tilde(G6).unwrap();
    ensure!((at - lo).abs() <= 1e-5, "a_tilde {at} vs bisection {lo}");
    ensure!((at - 0.66096).abs() <= 1e-5, "a_tilde {at}");
    within_time(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("40000 cells agree; a_tilde(1/sqrt 6) = {at:.6} (bisection {lo:.6})"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let cfg = SimConfig::reference_run();
    let mut sim = Simulator::new(cfg.clone()).map_err(|e| e.to_string())?;
    let times: Vec<f64> = (0..=4).map(|k| 30.0 + 5.0 * k as f64).collect();
    let reports = track_fronts(&mut sim, &times, 1e-2).map_err(|e| e.to_string())?;
    let last = reports.last().unwrap();
    ensure!(
        last.plateaus.len() == 3 && last.fronts.len() == 2,
        "found {} plateaus, {} fronts",
        last.plateaus.len(),
        last.fronts.len()
    );
    let u_m_oracle = kinetic_u_minus(-0.8, G6).unwrap();
    let u_m = last.plateaus[1].value;
    let speeds = front_speeds(&reports, FrontLocator::Balance);
    let s_lax = rh_speed(0.4, u_m_oracle);
    let s_uc = rh_speed(u_m_oracle, -0.8);
    ensure!(((u_m - u_m_oracle) / u_m_oracle).abs() <= 0.01, "plateau {u_m} vs {u_m_oracle}");
    ensure!(((speeds[0] - s_lax) / s_lax).abs() <= 0.02, "Lax speed {} vs {s_lax}", speeds[0]);
    ensure!(((speeds[1] - s_uc) / s_uc).abs() <= 0.02, "undercompressive speed {} vs {s_uc}", speeds[1]);
    within_time(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "u_M {u_m:.5} (oracle {u_m_oracle:.5}), speeds {:.4} / {:.4} (oracle {s_lax:.4} / {s_uc:.4}), nx = {}",
        speeds[0], speeds[1], cfg.nx
    ))
}

/// Domain that keeps every wave 40 units from the boundary until `t_end`, so that
/// the slowly decaying edges of weak fans do not reach the far-field plateaus.
fn riemann_config(sol: &RiemannSolution, t_end: f64) -> SimConfig {
    let lo = sol.waves.iter().map(|w| w.speed_range[0]).fold(0.0, f64::min);
    let hi = sol.waves.iter().map(|w| w.speed_range[1]).fold(0.0, f64::max);
    let x_min = (lo * t_end - 40.0).floor();
    let x_max = (hi * t_end + 40.0).ceil();
    let nx = ((x_max - x_min) / 0.0225).round() as usize + 1;
    SimConfig {
        x_min,
        x_max,
        nx,
        t_end,
        initial: InitialCondition::SmoothedRiemann {
            u_l: sol.u_l,
            u_r: sol.u_r,
            steepness: G6,
        },
        ..SimConfig::reference_run()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Constant regions of the similarity solution at time `t`, as `(x0, x1, state)`.
fn constant_regions(sol: &RiemannSolution, state: &SimState, t: f64) -> Vec<(f64, f64, f64)> {
    let x_end = state.x(state.u.len() - 1);
    let mut regions = vec![(state.x_min, sol.waves[0].speed_range[0] * t, sol.u_l)];
    for w in sol.waves.windows(2) {
        regions.push((w[0].speed_range[1] * t, w[1].speed_range[0] * t, w[0].right_state));
    }
    regions.push((sol.waves.last().unwrap().speed_range[1] * t, x_end, sol.u_r));
    regions
}

fn index_of(state: &SimState, x: f64) -> usize {
    (((x - state.x_min) / state.dx).round().max(0.0) as usize).min(state.u.len() - 1)
}

/// Median of `u` over the flattest quarter-length window inside `[x0, x1]`;
/// weak shocks leave wide viscous tails that reach into young plateaus.
fn plateau_value(state: &SimState, x0: f64, x1: f64) -> f64 {
    let u = &state.u[index_of(state, x0)..=index_of(state, x1)];
    let m = (u.len() / 4).max(1);
    let spread = |w: &[f64]| {
        let (lo, hi) = w.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        hi - lo
    };
    let flattest = u
        .windows(m)
        .min_by(|a, b| spread(a).partial_cmp(&spread(b)).unwrap())
        .unwrap();
    let mut vals = flattest.to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals[vals.len() / 2]
}

/// Equal-area position of the jump from `a` to `b` inside `[x0, x1]`.
fn balance_position(state: &SimState, x0: f64, x1: f64, a: f64, b: f64) -> f64 {
    let (i0, i1) = (index_of(state, x0), index_of(state, x1));
    let deficit: f64 = state.u[i0..i1].iter().map(|v| (b - v) / (b - a)).sum();
    state.x(i0) + (deficit - 0.5) * state.dx
}

/// Simulates the smoothed Riemann data and compares plateaus and wave speeds with
/// the similarity solution. Plateaus are read in the middle of each constant
/// region that has opened up; isolated shocks are located by their equal-area
/// position between neighbouring plateaus, and fans and attached shocks by the
/// crossing of a level inside the wave.
fn cross_validate(u_l: f64, u_r: f64) -> Result<(String, f64, f64), String> {
    let sol = solve(u_l, u_r, G6);
    let cfg = riemann_config(&sol, 100.0);
    let mut sim = Simulator::new(cfg).map_err(|e| e.to_string())?;
    let times: Vec<f64> = (0..=4).map(|k| 60.0 + 10.0 * k as f64).collect();
    let mut states = Vec::new();
    for &t in &times {
        sim.run_until(t).map_err(|e| e.to_string())?;
        states.push(sim.state().clone());
    }
    let label = format!("({u_l:.4}, {u_r}) {}", sol.pattern);
    let last = states.last().unwrap();
    let t_end = last.t;

    // regions narrower than 0.05 t (attached composites) never open up
    let open = |r: &(f64, f64, f64)| r.1 - r.0 > 0.05 * t_end;
    let mut worst_plateau = 0.0f64;
    for r in constant_regions(&sol, last, t_end).iter().filter(|r| open(r)) {
        let got = plateau_value(last, r.0, r.1);
        ensure!(rel(got, r.2) <= 0.01, "{label}: plateau {got} vs {}", r.2);
        worst_plateau = worst_plateau.max(rel(got, r.2));
    }

    let mut worst_speed = 0.0f64;
    for (k, w) in sol.waves.iter().enumerate() {
        let shock = w.kind != WaveKind::Rarefaction;
        let at = |st: &SimState| {
            let regions = constant_regions(&sol, st, st.t);
            (regions[k], regions[k + 1])
        };
        let (left, right) = at(last);
        let (measured, want) = if shock && open(&left) && open(&right) {
            let xs: Vec<f64> = states
                .iter()
                .map(|st| {
                    let (l, r) = at(st);
                    let (a, b) = (plateau_value(st, l.0, l.1), plateau_value(st, r.0, r.1));
                    balance_position(st, 0.5 * (l.0 + l.1), 0.5 * (r.0 + r.1), a, b)
                })
                .collect();
            (fit_speed(&times, &xs), w.speed_range[0])
        } else {
            // a level inside the wave; for a fan its characteristic speed
            let level = 0.5 * (w.left_state + w.right_state);
            let want = if shock { w.speed_range[0] } else { char_speed(level) };
            let xs: Vec<f64> = states
                .iter()
                .map(|s| crossing_near(s, level, want * s.t))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("{label}: level {level} not found"))?;
            (fit_speed(&times, &xs), want)
        };
        let err = rel(measured, want);
        ensure!(err <= 0.02, "{label}: wave {k} speed {measured} vs {want}");
        worst_speed = worst_speed.max(err);
    }
    Ok((label, worst_plateau, worst_speed))
}

/// Crossing of `level` closest to `guess`.
fn crossing_near(state: &SimState, level: f64, guess: f64) -> Option<f64> {
    state
        .u
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let (a, b) = (w[0] - level, w[1] - level);
            (a * b < 0.0 || a == 0.0).then(|| state.x(i) + a / (a - b) * state.dx)
        })
        .min_by(|p, q| (p - guess).abs().partial_cmp(&(q - guess).abs()).unwrap())
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let u_m = kinetic_u_minus(-0.8, G6).unwrap();
    let pairs = [
        (0.1, 0.3),
        (0.3, 0.1),
        (-0.3, -0.1),
        (0.1, -0.8),
        (0.4, -0.8),
        (-0.4, 0.8),
        (0.8, -0.8),
        (u_m, -0.8),
        (0.8, -0.3),
        (0.6, -0.6),
    ];
    let results: Vec<_> = pairs.par_iter().map(|&(l, r)| cross_validate(l, r)).collect();
    let mut patterns = Vec::new();
    let (mut plateau, mut speed) = (0.0f64, 0.0f64);
    for r in results {
        let (label, p, s) = r?;
        patterns.push(label.rsplit(' ').next().unwrap().to_string());
        plateau = plateau.max(p);
        speed = speed.max(s);
    }
    within_time(start.elapsed(), Duration::from_secs(20 * 60))?;
    Ok(format!(
        "patterns {}; worst plateau error {:.2}%, worst speed error {:.2}%",
        patterns.join(" "),
        100.0 * plateau,
        100.0 * speed
    ))
}

fn mode_amplitude(state: &SimState, u_bar: f64, xi: f64) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (i, v) in state.u.iter().enumerate() {
        re += (v - u_bar) * (xi * state.x(i)).cos();
        im += (v - u_bar) * (xi * state.x(i)).sin();
    }
    2.0 * re.hypot(im) / state.u.len() as f64
}

fn measured_rate(beta: f64, mu: f64, u_bar: f64, xi: f64, length: f64, t1: f64, t2: f64) -> Result<f64, String> {
    let nx = 256;
    let u0 = (0..nx)
        .map(|i| u_bar + 1e-6 * (xi * i as f64 * length / nx as f64).cos())
        .collect();
    let cfg = SimConfig {
        beta,
        mu,
        x_min: 0.0,
        x_max: length,
        nx,
        dt: 0.005,
        t_end: t2,
        bc: BoundaryCondition::Periodic,
        initial: InitialCondition::Custom(u0),
        upwind: 0.0,
        allow_negative_dispersion: mu < 0.0,
    };
    let mut sim = Simulator::new(cfg).map_err(|e| e.to_string())?;
    sim.run_until(t1).map_err(|e| e.to_string())?;
    let a1 = mode_amplitude(sim.state(), u_bar, xi);
    sim.run_until(t2).map_err(|e| e.to_string())?;
    let a2 = mode_amplitude(sim.state(), u_bar, xi);
    Ok((a2 / a1).ln() / (t2 - t1))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for xi in [1.0, 2.0, 4.0] {
        let want = dispersion_lambda(0.3, 0.1, 0.06, xi).unwrap().re;
        let got = measured_rate(0.1, 0.06, 0.3, xi, 2.0 * PI, 1.0, 6.0)?;
        ensure!(rel(got, want) <= 0.05, "xi = {xi}: rate {got} vs {want}");
        parts.push(format!("xi={xi}: {got:.5} vs {want:.5}"));
    }
    // mu = -1: cutoff 1/sqrt|mu| = 1, probe xi = 2
    let want = dispersion_lambda(0.0, 1.0, -1.0, 2.0).unwrap().re;
    let got = measured_rate(1.0, -1.0, 0.0, 2.0, PI, 0.5, 3.0)?;
    ensure!(want > 0.0 && got > 0.0, "no growth for mu < 0: {got}");
    within_time(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{}; mu=-1, xi=2 grows at {got:.4} (Re lambda {want:.4})", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let bs: Vec<f64> = (0..9).map(|k| -0.95 + 0.05 * k as f64).collect();
    let grid: Vec<(f64, f64)> = bs
        .iter()
        .flat_map(|&b| [0.5, 1.0, 2.0, 4.0].map(|a| (b, a)))
        .collect();
    for &(b, a) in &grid {
        let p = psys_locus(b, a).map_err(|e| e.to_string())?;
        let scale = p.u_minus.max(1.0).powi(2);
        ensure!(psys_locus_residual(&p) <= 1e-12 * scale, "locus residual at b={b}, A={a}");
        ensure!((p.s.abs() * p.k - 1.5 * (p.u_minus + p.u_plus)).abs() <= 1e-10, "|s|k at b={b}, A={a}");
        ensure!(p.s * p.s < 3.0 * p.u_minus.powi(2) && p.s * p.s < 3.0 * p.u_plus.powi(2), "s^2 bound at b={b}, A={a}");
        ensure!(p.s < 0.0, "speed sign at b={b}, A={a}");
    }
    for a in [0.5, 1.0, 2.0, 4.0] {
        let um = psys_locus(-0.5, a).unwrap().u_minus;
        ensure!((um - 4.0 * 3f64.sqrt() / (9.0 * a)).abs() <= 1e-12, "threshold at A={a}: {um}");
    }
    let shots: Vec<Result<f64, String>> = grid
        .par_iter()
        .map(|&(b, a)| {
            let p = psys_locus(b, a).unwrap();
            let shot = psys_shoot(&p, CONNECTION_TOL).map_err(|e| e.to_string())?;
            if !shot.connects() || shot.parabola_residual >= 1e-5 {
                return Err(format!("b={b}, A={a}: no connection"));
            }
            for f in [0.95, 1.05] {
                let q = psys_pair(p.u_minus, f * p.u_plus, a, 0.0);
                if psys_shoot(&q, CONNECTION_TOL).map(|s| s.connects()).unwrap_or(false) {
                    return Err(format!("b={b}, A={a}: perturbation x{f} connects"));
                }
            }
            Ok(shot.parabola_residual)
        })
        .collect();
    let mut worst = 0.0f64;
    for s in shots {
        worst = worst.max(s?);
    }
    // reference point against direct evaluation of the locus formulas
    let (b, a): (f64, f64) = (-0.6, 4.0);
    let um = 2.0 * (b * b + b + 1.0).sqrt() / (9.0 * a * (1.0 + b).powi(2));
    let up = b * um;
    let s = -(up * up + up * um + um * um).sqrt();
    let k = 1.0 / (-2.0 * a * s).sqrt();
    let p = psys_locus(b, a).unwrap();
    for (name, got, want) in [("u_-", p.u_minus, um), ("u_+", p.u_plus, up), ("s", p.s, s), ("k", p.k, k)] {
        ensure!((got - want).abs() <= 1e-5, "{name} = {got} vs {want}");
    }
    // the commonly quoted k = 0.688273 violates |s| k = 1.5 (u_- + u_+); the
    // exact value is checked above and the gap only reported
    let k_literal = 0.688273;
    within_time(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "36 points connect (max parabola residual {worst:.1e}), 72 perturbations rejected; \
         b=-0.6, A=4: ({:.6}, {:.6}, {:.6}, {:.6}) [quoted k 0.688273 off by {:.1e}]",
        p.u_minus,
        p.u_plus,
        p.s,
        p.k,
        (p.k - k_literal).abs()
    ))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    let samples: Vec<f64> = (0..41).map(|i| -1.2 + 0.06 * i as f64).collect();
    for &u in &samples {
        ensure!(flux(-u) == -flux(u) && char_speed(-u) == char_speed(u), "flux at {u}");
        for &v in &samples {
            ensure!(rh_speed(-u, -v) == rh_speed(u, v), "rh_speed at ({u}, {v})");
            let (p, q) = (classify_shock(u, v), classify_shock(-u, -v));
            ensure!(p.kind == q.kind && p.sonic == q.sonic, "classify_shock at ({u}, {v})");
            ensure!(
                (entropy_integral(-u, -v) - entropy_integral(u, v)).abs() <= 1e-14,
                "entropy_integral at ({u}, {v})"
            );
            let (a, b) = (solve(u, v, G6), solve(-u, -v, G6));
            ensure!(a.pattern == b.pattern && a.waves.len() == b.waves.len(), "solve at ({u}, {v})");
            for r in [-1.0, 0.0, 0.3, 0.5, 0.9] {
                ensure!(evaluate(&a, r) == -evaluate(&b, r), "evaluate at ({u}, {v}), r = {r}");
            }
            checks += 1;
        }
    }
    for g in sampled_gammas() {
        for p in sample_locus(g, 20).map_err(|e| e.to_string())? {
            let m = p.mirrored();
            ensure!(kinetic_residual(-m.u_minus, -m.u_plus, g).abs() <= 1e-10, "mirrored locus");
            ensure!(
                (entropy_integral(m.u_minus, m.u_plus) - entropy_integral(p.u_minus, p.u_plus)).abs() <= 1e-14,
                "mirrored entropy"
            );
        }
    }
    for xi in [0.1, 1.0, 10.0] {
        ensure!(
            dispersion_lambda(0.4, 0.1, 0.06, xi).unwrap() == dispersion_lambda(-0.4, 0.1, 0.06, xi).unwrap(),
            "dispersion relation"
        );
    }
    let mut psys = 0;
    for b in [-0.95, -0.8, -0.6, -0.5] {
        for a in [0.5, 1.0, 4.0] {
            let p = psys_locus_with_v(b, a, 0.3).unwrap();
            for map in [PsysSymmetry::Odd, PsysSymmetry::FlipA] {
                let q = psys_symmetry(&p, map);
                ensure!(psys_locus_residual(&q) <= 1e-12 * p.u_minus.max(1.0).powi(2), "{map:?} at b={b}, A={a}");
                psys += 1;
            }
        }
    }
    within_time(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{checks} scalar state pairs, {psys} p-system images"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("kinetic locus self-consistency", criterion_1),
        ("endpoint identity", criterion_2),
        ("shooting verification of the locus", criterion_3),
        ("discriminant sign structure", criterion_4),
        ("Lax + undercompressive reference run", criterion_5),
        ("Riemann/PDE cross-validation", criterion_6),
        ("dispersion relation", criterion_7),
        ("p-system locus and orbits", criterion_8),
        ("odd symmetry", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} [{secs:.2}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.2}s] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
