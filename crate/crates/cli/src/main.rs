mod commands;
mod output;
mod params;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};
use serde_json::json;
use ucshock::Error;

use output::{Format, Report};
use params::Params;

pub enum CliError {
    /// Bad flags, config file or parameter values; exit code 2.
    Config(Vec<String>),
    /// Rejected by the library: inputs outside its domain give exit code 2,
    /// numerical failures exit code 1.
    Compute(ucshock::Error),
    Io(String),
}

impl From<ucshock::Error> for CliError {
    fn from(e: ucshock::Error) -> Self {
        CliError::Compute(e)
    }
}

impl CliError {
    fn report(&self) -> (serde_json::Value, u8) {
        let (kind, messages, code) = match self {
            CliError::Config(m) => ("config", m.clone(), 2),
            CliError::Compute(e @ (Error::NoLocus { .. } | Error::OutOfDomain { .. } | Error::InvalidConfig(_))) => {
                ("domain", vec![e.to_string()], 2)
            }
            CliError::Compute(e) => ("compute", vec![e.to_string()], 1),
            CliError::Io(m) => ("io", vec![m.clone()], 1),
        };
        (json!({ "error": { "kind": kind, "messages": messages } }), code)
    }
}

const COMMANDS: [(&str, &str); 5] = [
    ("kinetics", "points on the undercompressive locus"),
    ("phase", "traveling-wave orbit between two states"),
    ("riemann", "Riemann solution, or the pattern map over a grid of states"),
    ("simulate", "finite-difference run from a smoothed step"),
    ("psystem", "undercompressive locus of the p-system"),
];

const PRESETS: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

/// Command and parameters of a named preset.
fn preset(name: &str) -> (&'static str, Vec<(&'static str, String)>) {
    let gamma = format!("{:?}", 1.0 / 6f64.sqrt());
    match name {
        "fig1" => ("kinetics", vec![("gamma", gamma)]),
        "fig2" => ("kinetics", vec![("gamma-fractions", "0.1:1:0.1".into())]),
        "fig3" => ("riemann", vec![("gamma", gamma), ("plane", "-1.5:1.5:121".into())]),
        "fig4" => ("simulate", vec![("snapshot-every", "2".into())]),
        "fig5" => ("psystem", vec![("A", "4".into()), ("sweep-b", "-0.75:-0.5:0.01".into())]),
        _ => unreachable!("validated by clap"),
    }
}

fn cli() -> Command {
    let mut cmd = Command::new("ucshock")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Undercompressive shocks for u_t + (u - u^3)_x = beta u_xx + mu u_xxt")
        .arg(Arg::new("config").long("config").value_name("FILE").global(true).help("TOML file of parameters"))
        .arg(Arg::new("output").long("output").short('o').value_name("FILE").global(true).help("write here instead of stdout"))
        .arg(
            Arg::new("format")
                .long("format")
                .value_parser(["csv", "json"])
                .global(true)
                .help("output format (default json for riemann, csv otherwise)"),
        )
        .arg(Arg::new("preset").long("preset").value_parser(PRESETS).global(true).help("named parameter set"));
    for (name, about) in COMMANDS {
        cmd = cmd.subcommand(Command::new(name).about(about).args(params::args(params::defs(name))));
    }
    cmd
}

fn load_config(path: Option<&String>) -> Result<toml::Table, CliError> {
    let Some(path) = path else {
        return Ok(toml::Table::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(vec![format!("cannot read {path}: {e}")]))?;
    text.parse::<toml::Table>()
        .map_err(|e| CliError::Config(vec![format!("{path}: {}", e.message())]))
}

fn take_text(file: &mut toml::Table, key: &str, errors: &mut Vec<String>) -> Option<String> {
    match file.remove(key)? {
        toml::Value::String(s) => Some(s),
        other => {
            errors.push(format!("`{key}` must be a string, got {other}"));
            None
        }
    }
}

struct Run {
    command: &'static str,
    params: Params,
    format: Format,
    output: Option<PathBuf>,
}

fn plan(matches: &ArgMatches) -> Result<Run, CliError> {
    let mut file = load_config(matches.get_one::<String>("config"))?;
    let mut errors = Vec::new();
    let file_command = take_text(&mut file, "command", &mut errors);
    let file_format = take_text(&mut file, "format", &mut errors);
    let file_output = take_text(&mut file, "output", &mut errors);
    let file_preset = take_text(&mut file, "preset", &mut errors);

    let preset_name = matches.get_one::<String>("preset").cloned().or(file_preset);
    let preset = match preset_name.as_deref() {
        None => None,
        Some(p) if PRESETS.contains(&p) => Some(preset(p)),
        Some(p) => {
            errors.push(format!("unknown preset `{p}` (expected one of {})", PRESETS.join(", ")));
            None
        }
    };

    let flag_command = matches.subcommand_name();
    let candidates = [
        flag_command.map(|c| ("command line", c.to_string())),
        file_command.map(|c| ("config file", c)),
        preset.as_ref().map(|(c, _)| ("preset", c.to_string())),
    ];
    let mut command = None;
    for (source, name) in candidates.into_iter().flatten() {
        match COMMANDS.iter().find(|(c, _)| *c == name) {
            None => errors.push(format!("unknown command `{name}` in {source}")),
            Some((c, _)) => match command {
                None => command = Some((*c, source)),
                Some((first, first_source)) if first != *c => {
                    errors.push(format!("{source} selects `{c}` but {first_source} selects `{first}`"))
                }
                _ => {}
            },
        }
    }
    let Some((command, _)) = command else {
        errors.push("no command given (use a subcommand, `command` in the config file, or --preset)".into());
        return Err(CliError::Config(errors));
    };

    let format = match matches.get_one::<String>("format").cloned().or(file_format).as_deref() {
        None if command == "riemann" => Format::Json,
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => {
            errors.push(format!("`format` must be csv or json, got `{other}`"));
            Format::Csv
        }
    };
    let output = matches.get_one::<String>("output").cloned().or(file_output).map(PathBuf::from);

    let empty = ArgMatches::default();
    let flags = matches.subcommand_matches(command).unwrap_or(&empty);
    let preset_values = preset.map(|(_, v)| v).unwrap_or_default();
    let params = params::resolve(params::defs(command), &preset_values, &file, flags);
    match params {
        Ok(params) if errors.is_empty() => Ok(Run {
            command,
            params,
            format,
            output,
        }),
        Ok(_) => Err(CliError::Config(errors)),
        Err(more) => {
            errors.extend(more);
            Err(CliError::Config(errors))
        }
    }
}

fn execute(run: Run) -> Result<(), CliError> {
    let report: Report = match run.command {
        "kinetics" => commands::kinetics(run.params)?,
        "phase" => commands::phase(run.params)?,
        "riemann" => commands::riemann(run.params)?,
        "simulate" => commands::simulate(run.params)?,
        "psystem" => commands::psystem(run.params)?,
        _ => unreachable!(),
    };
    let text = report.render(run.format).map_err(CliError::Io)?;
    match run.output {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed pipe (`| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion | DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return fail(CliError::Config(vec![first]));
        }
    };
    match plan(&matches).and_then(execute) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    let (doc, code) = e.report();
    eprintln!("{doc}");
    ExitCode::from(code)
}
