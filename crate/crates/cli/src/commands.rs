use serde_json::json;
use ucshock::kinetics::{a_tilde, gamma_max, locus_point, Branch, KineticPoint};
use ucshock::pde::{detect_fronts, BoundaryCondition, InitialCondition, SimConfig, SimState, Simulator};
use ucshock::phaseplane::{parabola_residual, shock_profile};
use ucshock::psystem::{psys_locus_with_v, psys_shoot};
use ucshock::riemann::{classify_plane, evaluate, solve, verify, PlaneGrid};

use crate::output::{Cell, Report, Table};
use crate::params::{parse_grid, parse_sweep, Params, Problems, Value};
use crate::CliError;

fn branches(raw: &str, problems: &mut Problems) -> Vec<Branch> {
    match raw {
        "both" => vec![Branch::Plus, Branch::Minus],
        "plus" => vec![Branch::Plus],
        "minus" => vec![Branch::Minus],
        other => {
            problems.0.push(format!("`branch` must be plus, minus or both, got `{other}`"));
            Vec::new()
        }
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

pub fn kinetics(params: Params) -> Result<Report, CliError> {
    let mut problems = Problems::default();
    let gammas = match (params.float("gamma"), params.text("gamma-fractions")) {
        (Some(g), None) => vec![g],
        (None, Some(raw)) => parse_sweep("gamma-fractions", raw, &mut problems)
            .into_iter()
            .map(|f| f * gamma_max())
            .collect(),
        (Some(_), Some(_)) => {
            problems.0.push("give either `gamma` or `gamma-fractions`, not both".into());
            Vec::new()
        }
        (None, None) => {
            problems.0.push("missing required parameter `gamma`".into());
            Vec::new()
        }
    };
    let branches = branches(params.text("branch").unwrap_or("both"), &mut problems);
    let sweep = params.text("sweep-a").map(|raw| parse_sweep("sweep-a", raw, &mut problems));
    let n = params.int("n").unwrap_or(50);
    problems.check(n >= 2, || format!("`n` = {n} must be at least 2"));
    problems.finish().map_err(CliError::Config)?;

    let mut points: Vec<KineticPoint> = Vec::new();
    for &g in &gammas {
        let a_max = a_tilde(g)?;
        let a_values: Vec<f64> = match &sweep {
            Some(v) => v.clone(),
            None => (0..n).map(|i| 0.5 + (a_max - 0.5) * i as f64 / (n - 1) as f64).collect(),
        };
        for &b in &branches {
            for &a in &a_values {
                points.push(locus_point(a, g, b)?);
            }
        }
    }

    let mut table = Table::new(&[
        "gamma", "branch", "a", "u_minus", "u_zero", "u_plus", "s", "at_half", "at_merge",
    ]);
    for p in &points {
        table.push(vec![
            p.gamma.into(),
            branch_name(p.branch).into(),
            p.a.into(),
            p.u_minus.into(),
            p.u_zero.into(),
            p.u_plus.into(),
            p.s.into(),
            p.at_half.into(),
            p.at_merge.into(),
        ]);
    }
    let summary = gammas
        .iter()
        .map(|&g| ("a_tilde", format!("{:?} (gamma = {g:?})", a_tilde(g).unwrap())))
        .collect();
    Ok(Report {
        command: "kinetics",
        params,
        summary,
        table,
        json: json!(points),
    })
}

pub fn phase(params: Params) -> Result<Report, CliError> {
    let mut problems = Problems::default();
    let gamma = problems.require_float(&params, "gamma");
    let tol = params.float("tol").unwrap_or(1e-6);
    problems.check(tol > 0.0, || format!("`tol` = {tol} must be > 0"));
    let from_locus = match (params.float("a"), params.float("u-minus"), params.float("u-plus")) {
        (Some(a), None, None) => match branches(params.text("branch").unwrap_or("minus"), &mut problems)[..] {
            [b] => Some((a, b)),
            [] => None,
            _ => {
                problems.0.push("`branch` must be plus or minus when `a` is given".into());
                None
            }
        },
        (None, Some(_), Some(_)) => None,
        _ => {
            problems.0.push("give either `a` (with `branch`) or both `u-minus` and `u-plus`".into());
            None
        }
    };
    problems.finish().map_err(CliError::Config)?;

    let (u_minus, u_plus) = match from_locus {
        Some((a, b)) => {
            let p = locus_point(a, gamma, b)?;
            (p.u_minus, p.u_plus)
        }
        None => (params.float("u-minus").unwrap(), params.float("u-plus").unwrap()),
    };
    let orbit = shock_profile(u_minus, u_plus, gamma, tol)?;
    let residual = parabola_residual(&orbit, u_minus, u_plus);
    let mut table = Table::new(&["xi", "u", "v"]);
    for s in &orbit.trajectory {
        table.push(vec![s.xi.into(), s.u.into(), s.v.into()]);
    }
    let summary = vec![
        ("u_minus", format!("{u_minus:?}")),
        ("u_plus", format!("{u_plus:?}")),
        ("verdict", format!("{:?}", orbit.verdict)),
        ("terminal_distance", format!("{:?}", orbit.terminal_distance)),
        ("parabola_residual", format!("{residual:?}")),
    ];
    Ok(Report {
        command: "phase",
        params,
        summary,
        table,
        json: json!({
            "u_minus": u_minus,
            "u_plus": u_plus,
            "orbit": orbit,
            "parabola_residual": residual,
        }),
    })
}

pub fn riemann(params: Params) -> Result<Report, CliError> {
    let mut problems = Problems::default();
    let gamma = problems.require_float(&params, "gamma");
    // a missing gamma (NaN) is already reported
    problems.check(gamma > 0.0 || gamma.is_nan(), || format!("`gamma` = {gamma} must be > 0"));
    if let Some(raw) = params.text("plane") {
        let grid = parse_grid("plane", raw, &mut problems);
        problems.check(params.float("uL").is_none() && params.float("uR").is_none(), || {
            "`plane` replaces `uL`/`uR`; give one or the other".into()
        });
        problems.finish().map_err(CliError::Config)?;
        let (lo, hi, n) = grid.unwrap();
        let cells = classify_plane(gamma, PlaneGrid { lo, hi, n });
        let mut table = Table::new(&["u_l", "u_r", "pattern"]);
        for c in &cells {
            table.push(vec![c.u_l.into(), c.u_r.into(), c.pattern.clone().into()]);
        }
        return Ok(Report {
            command: "riemann",
            params,
            summary: Vec::new(),
            table,
            json: json!(cells),
        });
    }

    let u_l = problems.require_float(&params, "uL");
    let u_r = problems.require_float(&params, "uR");
    let samples = params.text("sample").and_then(|raw| parse_grid("sample", raw, &mut problems));
    problems.finish().map_err(CliError::Config)?;

    let sol = solve(u_l, u_r, gamma);
    let issues = verify(&sol);
    let mut summary = vec![("pattern", sol.pattern.clone())];
    for m in sol.intermediate_states() {
        summary.push(("intermediate_state", format!("{m:?}")));
    }
    for issue in &issues {
        summary.push(("admissibility_issue", issue.clone()));
    }
    let (table, profile) = match samples {
        Some((r0, r1, n)) => {
            let mut t = Table::new(&["r", "u"]);
            let mut profile = Vec::new();
            for i in 0..n {
                let r = if n > 1 { r0 + (r1 - r0) * i as f64 / (n - 1) as f64 } else { r0 };
                let u = evaluate(&sol, r);
                t.push(vec![r.into(), u.into()]);
                profile.push(json!({ "r": r, "u": u }));
            }
            (t, Some(profile))
        }
        None => {
            let mut t = Table::new(&["kind", "left_state", "right_state", "speed_left", "speed_right"]);
            for w in &sol.waves {
                t.push(vec![
                    w.kind.symbol().into(),
                    w.left_state.into(),
                    w.right_state.into(),
                    w.speed_range[0].into(),
                    w.speed_range[1].into(),
                ]);
            }
            (t, None)
        }
    };
    let mut json = json!({ "solution": sol, "admissibility_issues": issues });
    if let Some(p) = profile {
        json["profile"] = json!(p);
    }
    Ok(Report {
        command: "riemann",
        params,
        summary,
        table,
        json,
    })
}

pub fn simulate(mut params: Params) -> Result<Report, CliError> {
    let mut problems = Problems::default();
    let f = |k: &str| params.float(k).unwrap();
    let bc = match params.text("bc").unwrap() {
        "dirichlet" => Some(BoundaryCondition::DirichletFarField),
        "neumann" => Some(BoundaryCondition::Neumann),
        "periodic" => Some(BoundaryCondition::Periodic),
        other => {
            problems.0.push(format!("`bc` must be dirichlet, neumann or periodic, got `{other}`"));
            None
        }
    };
    let nx = params.int("nx").unwrap();
    let steepness = params
        .float("steepness")
        // a bad `mu` is reported by `validate`; don't report it twice
        .unwrap_or_else(|| if f("mu") > 0.0 { f("beta") / f("mu").sqrt() } else { 1.0 });
    let cfg = SimConfig {
        beta: f("beta"),
        mu: f("mu"),
        x_min: f("x-min"),
        x_max: f("x-max"),
        nx: nx.max(0) as usize,
        dt: f("dt"),
        t_end: f("t-end"),
        bc: bc.unwrap_or(BoundaryCondition::DirichletFarField),
        initial: InitialCondition::SmoothedRiemann {
            u_l: f("uL"),
            u_r: f("uR"),
            steepness,
        },
        upwind: f("upwind"),
        allow_negative_dispersion: false,
    };
    if let Err(ucshock::Error::InvalidConfig(msgs)) = cfg.validate() {
        problems.0.extend(msgs);
    }
    let every = params.float("snapshot-every");
    if let Some(e) = every {
        problems.check(e > 0.0, || format!("`snapshot-every` = {e} must be > 0"));
    }
    let plateau_tol = f("plateau-tol");
    problems.check(plateau_tol > 0.0, || format!("`plateau-tol` = {plateau_tol} must be > 0"));
    problems.finish().map_err(CliError::Config)?;
    params.set("steepness", Value::Float(steepness));

    let mut sim = Simulator::new(cfg.clone())?;
    let mut snapshots: Vec<SimState> = Vec::new();
    if let Some(e) = every {
        let count = (cfg.t_end / e + 1e-9).floor() as usize;
        for k in 0..=count {
            sim.run_until(k as f64 * e)?;
            snapshots.push(sim.state().clone());
        }
    }
    sim.run_until(cfg.t_end)?;
    if snapshots.last().is_none_or(|s| s.t < cfg.t_end) {
        snapshots.push(sim.state().clone());
    }
    let fronts = detect_fronts(sim.state(), plateau_tol);

    let mut table = Table::new(&["t", "x", "u"]);
    for s in &snapshots {
        for (i, &u) in s.u.iter().enumerate() {
            table.push(vec![s.t.into(), s.x(i).into(), u.into()]);
        }
    }
    let mut summary: Vec<(&'static str, String)> = fronts
        .plateaus
        .iter()
        .map(|p| ("plateau", format!("{:?} on [{:?}, {:?}]", p.value, p.x_start, p.x_end)))
        .collect();
    for fr in &fronts.fronts {
        summary.push((
            "front",
            format!("{:?} -> {:?} at x = {:?}", fr.left, fr.right, fr.balance_position),
        ));
    }
    Ok(Report {
        command: "simulate",
        params,
        summary,
        table,
        json: json!({ "config": cfg, "snapshots": snapshots, "fronts": fronts }),
    })
}

pub fn psystem(params: Params) -> Result<Report, CliError> {
    let mut problems = Problems::default();
    let a = params.float("A").unwrap();
    let v_minus = params.float("v-minus").unwrap();
    let tol = params.float("tol").unwrap();
    problems.check(tol > 0.0, || format!("`tol` = {tol} must be > 0"));
    let bs = match (params.float("b"), params.text("sweep-b")) {
        (Some(b), None) => vec![b],
        (None, Some(raw)) => parse_sweep("sweep-b", raw, &mut problems),
        (Some(_), Some(_)) => {
            problems.0.push("give either `b` or `sweep-b`, not both".into());
            Vec::new()
        }
        (None, None) => {
            problems.0.push("missing required parameter `b` (or `sweep-b`)".into());
            Vec::new()
        }
    };
    problems.finish().map_err(CliError::Config)?;

    let shoot = params.flag("shoot");
    let mut columns = vec!["b", "A", "u_minus", "u_plus", "u_zero", "s", "k", "v_minus", "v_plus"];
    if shoot {
        columns.extend(["orientation", "parabola_residual"]);
    }
    let mut table = Table::new(&columns);
    let mut rows = Vec::new();
    for &b in &bs {
        let p = psys_locus_with_v(b, a, v_minus)?;
        let mut row: Vec<Cell> = [p.b, p.a, p.u_minus, p.u_plus, p.u_zero, p.s, p.k, p.v_minus, p.v_plus]
            .into_iter()
            .map(Cell::from)
            .collect();
        let mut entry = json!({ "point": p });
        if shoot {
            let shot = psys_shoot(&p, tol)?;
            let orientation = shot
                .orientation
                .map_or("none".to_string(), |o| format!("{o:?}").to_lowercase());
            row.push(orientation.into());
            row.push(shot.parabola_residual.into());
            entry["orientation"] = json!(shot.orientation);
            entry["parabola_residual"] = json!(shot.parabola_residual);
        }
        table.push(row);
        rows.push(entry);
    }
    Ok(Report {
        command: "psystem",
        params,
        summary: Vec::new(),
        table,
        json: json!(rows),
    })
}
