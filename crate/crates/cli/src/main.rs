//! `gwharvest`: single points, grid sweeps, figure presets and the oracle suite.
//!
//! Exit codes: 0 success, 1 internal or verification failure, 2 usage or
//! validation error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gwharvest::model::{load_config, validate, DimensionlessParams, ParamKey, ParamOverrides, SeparationAxis};
use gwharvest::oracle::{verify_suite, VerifyGrid};
use gwharvest::sweep::{
    emit_csv, emit_svg, format_number, report_columns, run_grid, write_csv, Axis, FigurePreset, GridSpec, PresetId,
    SweepError,
};
use gwharvest::{harvest, HarvestReport};
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable naming the default output directory of `figure`.
const OUT_DIR_ENV: &str = "GWHARVEST_OUT_DIR";

#[derive(Parser)]
#[command(name = "gwharvest", version, about = "Entanglement harvesting in a gravitational-wave background")]
struct Cli {
    /// Worker threads for sweeps and the oracle suite (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every observable at one parameter point.
    Point {
        #[command(flatten)]
        params: ParamFlags,
        /// Print JSON instead of key = value lines.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a one- or two-axis grid and write CSV.
    Sweep {
        /// Swept parameter as name:min:max:count; give once or twice.
        #[arg(long = "axis", required = true, value_name = "NAME:MIN:MAX:COUNT")]
        axes: Vec<String>,
        #[command(flatten)]
        params: ParamFlags,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the CSV and SVG of a figure preset.
    Figure {
        /// fig1a, fig1b, fig1c, fig2, fig3, fig4, fig5, fig4a, fig4b or fig4c.
        preset: String,
        /// Output directory (default: $GWHARVEST_OUT_DIR, else the current directory).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Compare every closed form with its quadrature oracle.
    Verify {
        /// Relative tolerance of regulated oracles; regulator-free ones use tol * 1e-3.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = GridChoice::Default)]
        grid: GridChoice,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GridChoice {
    Minimal,
    Default,
}

#[derive(Clone, Copy, ValueEnum)]
enum Separation {
    X,
    Y,
}

/// Flags mirror the config keys one to one.
#[derive(Args, Default)]
struct ParamFlags {
    /// TOML file of `key = value` parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long = "omega_sigma", allow_hyphen_values = true)]
    omega_sigma: Option<f64>,
    #[arg(long = "Omega_sigma", allow_hyphen_values = true)]
    gap_omega_sigma: Option<f64>,
    #[arg(long = "D_sigma", allow_hyphen_values = true)]
    d_sigma: Option<f64>,
    #[arg(long = "t0_sigma", allow_hyphen_values = true)]
    t0_sigma: Option<f64>,
    #[arg(long = "lambda", allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Separation direction relative to the wave polarization.
    #[arg(long, value_enum)]
    separation: Option<Separation>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    fn internal(message: impl ToString) -> Self {
        Failure { code: 1, message: message.to_string() }
    }
}

impl ParamFlags {
    /// Config values layered under flag values.
    fn overrides(&self) -> Result<ParamOverrides, Failure> {
        let base = match &self.config {
            Some(path) => load_config(path).map_err(Failure::usage)?,
            None => ParamOverrides::new(),
        };
        let mut flags = ParamOverrides::new();
        let given = [
            (ParamKey::A, self.a),
            (ParamKey::OmegaSigma, self.omega_sigma),
            (ParamKey::GapOmegaSigma, self.gap_omega_sigma),
            (ParamKey::DSigma, self.d_sigma),
            (ParamKey::T0Sigma, self.t0_sigma),
            (ParamKey::Lambda, self.lambda),
        ];
        for (key, value) in given {
            if let Some(v) = value {
                flags.set(key, v);
            }
        }
        Ok(base.layered(&flags))
    }

    fn axis(&self) -> Option<SeparationAxis> {
        self.separation.map(|s| match s {
            Separation::X => SeparationAxis::X,
            Separation::Y => SeparationAxis::Y,
        })
    }

    fn resolve(&self) -> Result<DimensionlessParams, Failure> {
        let mut p = self.overrides()?.apply(DimensionlessParams::default());
        if let Some(axis) = self.axis() {
            p.pair.axis = axis;
        }
        Ok(p)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Point { params, json } => cmd_point(params, *json),
        Command::Sweep { axes, params, output } => cmd_sweep(axes, params, output.as_ref()),
        Command::Figure { preset, output, params } => cmd_figure(preset, output.clone(), params),
        Command::Verify { tol, grid, json } => cmd_verify(*tol, *grid, *json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn param_lines(p: &DimensionlessParams) -> Vec<(&'static str, f64)> {
    [ParamKey::OmegaSigma, ParamKey::GapOmegaSigma, ParamKey::DSigma, ParamKey::T0Sigma, ParamKey::A, ParamKey::Lambda]
        .iter()
        .map(|&k| (k.name(), p.get(k)))
        .collect()
}

fn point_json(report: &HarvestReport, warnings: &[String]) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    for (name, v) in param_lines(&report.params) {
        obj.insert(name.to_string(), v.into());
    }
    for (name, v) in report_columns(report) {
        obj.insert(name.to_string(), v.map_or(serde_json::Value::Null, Into::into));
    }
    obj.insert("status".into(), report.status().into());
    obj.insert("warnings".into(), warnings.into());
    serde_json::Value::Object(obj)
}

fn cmd_point(flags: &ParamFlags, json: bool) -> Result<u8, Failure> {
    let params = flags.resolve()?;
    let warnings: Vec<String> = validate(&params).map_err(Failure::usage)?.iter().map(|w| w.to_string()).collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = harvest(&params).map_err(Failure::internal)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&point_json(&report, &warnings)).map_err(Failure::internal)?);
        return Ok(0);
    }
    for (name, v) in param_lines(&params) {
        println!("{name} = {}", format_number(v));
    }
    for (name, v) in report_columns(&report) {
        match v {
            Some(v) => println!("{name} = {}", format_number(v)),
            None => println!("{name} = n/a (|X_M| below the first-order threshold)"),
        }
    }
    println!("status = {}", report.status());
    Ok(0)
}

fn cmd_sweep(axes: &[String], flags: &ParamFlags, output: Option<&PathBuf>) -> Result<u8, Failure> {
    if axes.len() > 2 {
        return Err(Failure::usage("at most two --axis flags"));
    }
    let parsed = axes.iter().map(|a| Axis::parse(a)).collect::<Result<Vec<_>, _>>().map_err(Failure::usage)?;
    let fixed = flags.resolve()?;
    let spec = GridSpec::new(parsed[0], parsed.get(1).copied(), fixed).map_err(Failure::usage)?;
    let rows = run_grid(&spec);
    match output {
        Some(path) => emit_csv(&rows, path).map_err(Failure::internal)?,
        None => write_csv(&rows, std::io::stdout().lock()).map_err(Failure::internal)?,
    }
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} points failed; see the status column", rows.len());
    }
    Ok(0)
}

fn cmd_figure(id: &str, output: Option<PathBuf>, flags: &ParamFlags) -> Result<u8, Failure> {
    let id = PresetId::from_name(id).map_err(Failure::usage)?;
    let mut preset = FigurePreset::new(id);
    let overrides = flags.overrides()?;
    for key in ParamKey::ALL {
        if let Some(v) = overrides.get(key) {
            preset = preset.with_fixed(key, v);
        }
    }
    if let Some(axis) = flags.axis() {
        preset.grid.fixed.pair.axis = axis;
    }
    let dir = output.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| Failure::internal(SweepError::Io { path: dir.clone(), source }))?;
    let rows = preset.run();
    let csv = dir.join(format!("{id}.csv"));
    let svg = dir.join(format!("{id}.svg"));
    emit_csv(&rows, &csv).map_err(Failure::internal)?;
    emit_svg(&rows, &preset, &svg).map_err(Failure::internal)?;
    println!("{}", csv.display());
    println!("{}", svg.display());
    Ok(0)
}

fn cmd_verify(tol: f64, grid: GridChoice, json: bool) -> Result<u8, Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
    }
    let grid = match grid {
        GridChoice::Minimal => VerifyGrid::minimal(),
        GridChoice::Default => VerifyGrid::default_grid(),
    };
    let report = verify_suite(&grid, tol);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(Failure::internal)?);
    } else {
        print!("{}", report.to_table());
        if !report.all_passed() && tol < 1e-7 {
            println!("note: regulated oracles extrapolate to about 1e-7 relative; tolerances below that are expected to fail");
        }
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}
