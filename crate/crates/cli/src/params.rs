//! Parameter tables, merging of preset, config file and flags, and typed access.

use std::collections::BTreeMap;
use std::fmt;

use clap::{Arg, ArgAction, ArgMatches};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Text,
    Flag,
}

pub struct ParamDef {
    pub key: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn p(key: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> ParamDef {
    ParamDef { key, kind, default, help }
}

use Kind::*;

pub const KINETICS: &[ParamDef] = &[
    p("gamma", Float, None, "ratio beta/sqrt(mu)"),
    p("gamma-fractions", Text, None, "lo:hi:step, gamma as multiples of sqrt(3/8) (instead of --gamma)"),
    p("sweep-a", Text, None, "lo:hi:step of the locus parameter a"),
    p("n", Int, Some("50"), "points per branch when no sweep is given"),
    p("branch", Text, Some("both"), "plus, minus or both"),
];

pub const PHASE: &[ParamDef] = &[
    p("gamma", Float, None, "ratio beta/sqrt(mu)"),
    p("u-minus", Float, None, "left state"),
    p("u-plus", Float, None, "right state"),
    p("a", Float, None, "locus parameter (instead of the states)"),
    p("branch", Text, Some("minus"), "locus branch used with --a"),
    p("tol", Float, Some("1e-6"), "connection tolerance"),
];

pub const RIEMANN: &[ParamDef] = &[
    p("gamma", Float, None, "ratio beta/sqrt(mu)"),
    p("uL", Float, None, "left state"),
    p("uR", Float, None, "right state"),
    p("sample", Text, None, "r0:r1:n, evaluate the solution at n values of x/t"),
    p("plane", Text, None, "lo:hi:n, pattern map over [lo, hi]^2 instead of one problem"),
];

pub const SIMULATE: &[ParamDef] = &[
    p("beta", Float, Some("0.1"), "dissipation coefficient"),
    p("mu", Float, Some("0.06"), "dispersion coefficient"),
    p("x-min", Float, Some("-30"), "left end of the domain"),
    p("x-max", Float, Some("60"), "right end of the domain"),
    p("nx", Int, Some("4001"), "grid points"),
    p("dt", Float, Some("0.01"), "time step"),
    p("t-end", Float, Some("50"), "final time"),
    p("bc", Text, Some("dirichlet"), "dirichlet, neumann or periodic"),
    p("uL", Float, Some("0.4"), "left state of the smoothed step"),
    p("uR", Float, Some("-0.8"), "right state of the smoothed step"),
    p("steepness", Float, None, "tanh steepness (default beta/sqrt(mu))"),
    p("upwind", Float, Some("0"), "weight of the added Lax-Friedrichs dissipation"),
    p("snapshot-every", Float, None, "also output the profile at multiples of this time"),
    p("plateau-tol", Float, Some("0.01"), "slope tolerance of the plateau detector"),
];

pub const PSYSTEM: &[ParamDef] = &[
    p("A", Float, Some("4"), "dispersion coefficient A > 0"),
    p("b", Float, None, "ratio u_+/u_- in (-1, -1/2]"),
    p("sweep-b", Text, None, "lo:hi:step of b (instead of --b)"),
    p("v-minus", Float, Some("0"), "left value of v"),
    p("shoot", Flag, None, "verify each point by phase-plane shooting"),
    p("tol", Float, Some("1e-6"), "connection tolerance"),
];

pub fn defs(command: &str) -> &'static [ParamDef] {
    match command {
        "kinetics" => KINETICS,
        "phase" => PHASE,
        "riemann" => RIEMANN,
        "simulate" => SIMULATE,
        "psystem" => PSYSTEM,
        _ => &[],
    }
}

pub fn args(defs: &[ParamDef]) -> Vec<Arg> {
    defs
        .iter()
        .map(|s| {
            let arg = Arg::new(s.key).long(s.key).help(s.help);
            match s.kind {
                Flag => arg.action(ArgAction::SetTrue),
                Text => arg.value_name("VALUE").allow_hyphen_values(true),
                _ => arg.value_name("VALUE").allow_negative_numbers(true),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Text(String),
    Flag(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Int(x) => write!(f, "{x}"),
            Value::Text(x) => write!(f, "{x}"),
            Value::Flag(x) => write!(f, "{x}"),
        }
    }
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Float(x) => serde_json::json!(x),
            Value::Int(x) => serde_json::json!(x),
            Value::Text(x) => serde_json::json!(x),
            Value::Flag(x) => serde_json::json!(x),
        }
    }
}

fn parse_str(kind: Kind, raw: &str) -> Option<Value> {
    match kind {
        Float => raw.trim().parse().ok().filter(|x: &f64| x.is_finite()).map(Value::Float),
        Int => raw.trim().parse().ok().map(Value::Int),
        Text => Some(Value::Text(raw.to_string())),
        Flag => raw.trim().parse().ok().map(Value::Flag),
    }
}

fn from_toml(kind: Kind, v: &toml::Value) -> Option<Value> {
    match (kind, v) {
        (Float, toml::Value::Float(x)) if x.is_finite() => Some(Value::Float(*x)),
        (Float, toml::Value::Integer(x)) => Some(Value::Float(*x as f64)),
        (Int, toml::Value::Integer(x)) => Some(Value::Int(*x)),
        (Text, toml::Value::String(x)) => Some(Value::Text(x.clone())),
        (Flag, toml::Value::Boolean(x)) => Some(Value::Flag(*x)),
        _ => None,
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Float => "a number",
        Int => "an integer",
        Text => "a string",
        Flag => "a boolean",
    }
}

/// Fully resolved parameters of one run, in key order.
#[derive(Debug, Clone, Default)]
pub struct Params(pub BTreeMap<String, Value>);

/// Merges, in increasing priority, declared defaults, a preset, a config table and
/// flags. Every unknown key and every ill-typed value is reported.
pub fn resolve(
    defs: &[ParamDef],
    preset: &[(&str, String)],
    file: &toml::Table,
    flags: &ArgMatches,
) -> Result<Params, Vec<String>> {
    let mut errors = Vec::new();
    let mut out = BTreeMap::new();
    let lookup = |key: &str| defs.iter().find(|s| s.key == key);

    for s in defs {
        if let Some(d) = s.default {
            out.insert(s.key.to_string(), parse_str(s.kind, d).expect("valid default"));
        }
    }
    for (key, raw) in preset {
        let def = lookup(key).expect("preset keys are valid");
        out.insert(key.to_string(), parse_str(def.kind, raw).expect("valid preset"));
    }
    for (key, v) in file {
        match lookup(key) {
            None => errors.push(format!("unknown key `{key}`")),
            Some(def) => match from_toml(def.kind, v) {
                Some(value) => {
                    out.insert(key.clone(), value);
                }
                None => errors.push(format!("`{key}` must be {}, got {v}", kind_name(def.kind))),
            },
        }
    }
    for s in defs {
        if s.kind == Flag {
            if flags.try_get_one::<bool>(s.key).ok().flatten() == Some(&true) {
                out.insert(s.key.to_string(), Value::Flag(true));
            }
        } else if let Ok(Some(raw)) = flags.try_get_one::<String>(s.key) {
            match parse_str(s.kind, raw) {
                Some(value) => {
                    out.insert(s.key.to_string(), value);
                }
                None => errors.push(format!("--{} must be {}, got `{raw}`", s.key, kind_name(s.kind))),
            }
        }
    }
    if errors.is_empty() {
        Ok(Params(out))
    } else {
        Err(errors)
    }
}

impl Params {
    pub fn float(&self, key: &str) -> Option<f64> {
        match self.0.get(key) {
            Some(Value::Float(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.0.get(key) {
            Some(Value::Int(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.0.get(key) {
            Some(Value::Text(x)) => Some(x),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.0.get(key), Some(Value::Flag(true)))
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.0.insert(key.to_string(), value);
    }
}

/// Collects validation messages so that a run can report all of them at once.
#[derive(Default)]
pub struct Problems(pub Vec<String>);

impl Problems {
    pub fn require_float(&mut self, p: &Params, key: &str) -> f64 {
        p.float(key).unwrap_or_else(|| {
            self.0.push(format!("missing required parameter `{key}`"));
            f64::NAN
        })
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    pub fn finish(self) -> Result<(), Vec<String>> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(self.0)
        }
    }
}

/// `lo:hi:step`, inclusive of `hi` up to rounding (never past it).
pub fn parse_sweep(key: &str, raw: &str, problems: &mut Problems) -> Vec<f64> {
    let parts: Vec<Option<f64>> = raw.split(':').map(|s| s.trim().parse().ok()).collect();
    match parts.as_slice() {
        [Some(lo), Some(hi), Some(step)] if *step > 0.0 && hi >= lo && (hi - lo) / step < 1e7 => {
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| (lo + i as f64 * step).min(*hi)).collect()
        }
        _ => {
            problems.0.push(format!("`{key}` must be lo:hi:step with step > 0 and hi >= lo, got `{raw}`"));
            Vec::new()
        }
    }
}

/// `lo:hi:n`, `n` points including both ends.
pub fn parse_grid(key: &str, raw: &str, problems: &mut Problems) -> Option<(f64, f64, usize)> {
    let parts: Vec<&str> = raw.split(':').map(str::trim).collect();
    if let [lo, hi, n] = parts.as_slice() {
        if let (Ok(lo), Ok(hi), Ok(n)) = (lo.parse::<f64>(), hi.parse::<f64>(), n.parse::<usize>()) {
            if n >= 1 && lo.is_finite() && hi.is_finite() && hi >= lo {
                return Some((lo, hi, n));
            }
        }
    }
    problems.0.push(format!("`{key}` must be lo:hi:n with n >= 1 and hi >= lo, got `{raw}`"));
    None
}
