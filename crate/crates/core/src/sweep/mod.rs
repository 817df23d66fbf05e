//! Parameter grids, figure presets, CSV and SVG output.
//!
//! A grid has one or two swept axes over a fixed base point. Rows come back
//! in row-major order (first axis outer) whatever the thread count, so
//! emitted files are byte-stable.

mod preset;
mod svg;

pub use preset::{FigurePreset, OutputQuantity, PresetId};
pub use svg::{emit_svg, write_svg};

use crate::closedform::{harvest, ClosedFormError, HarvestReport};
use crate::model::{DimensionlessParams, ParamKey};
use rayon::prelude::*;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown axis `{0}`; expected one of A, omega_sigma, Omega_sigma, D_sigma, t0_sigma")]
    UnknownAxis(String),
    #[error("malformed axis `{0}`; expected name:min:max:count")]
    MalformedAxis(String),
    #[error("axis {name} needs min < max and count >= 2, got [{min}, {max}] with {count} points")]
    InvalidAxis { name: &'static str, min: f64, max: f64, count: usize },
    #[error("both axes sweep {0}")]
    DuplicateAxis(&'static str),
    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),
    #[error("IncompleteGrid: {0}")]
    IncompleteGrid(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Keys that may be swept. The coupling only rescales and is never an axis.
pub const SWEEPABLE: [ParamKey; 5] =
    [ParamKey::A, ParamKey::OmegaSigma, ParamKey::GapOmegaSigma, ParamKey::DSigma, ParamKey::T0Sigma];

/// Evenly spaced values `min..=max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub key: ParamKey,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(key: ParamKey, min: f64, max: f64, count: usize) -> Result<Self, SweepError> {
        if !SWEEPABLE.contains(&key) {
            return Err(SweepError::UnknownAxis(key.name().to_string()));
        }
        if min >= max || !min.is_finite() || !max.is_finite() || count < 2 {
            return Err(SweepError::InvalidAxis { name: key.name(), min, max, count });
        }
        Ok(Axis { key, min, max, count })
    }

    /// Parses `name:min:max:count`.
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        let parts: Vec<&str> = text.split(':').collect();
        let [name, min, max, count] = parts[..] else {
            return Err(SweepError::MalformedAxis(text.to_string()));
        };
        let key = ParamKey::from_name(name)
            .filter(|k| SWEEPABLE.contains(k))
            .ok_or_else(|| SweepError::UnknownAxis(name.to_string()))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| SweepError::MalformedAxis(text.to_string()));
        let count = count.trim().parse::<usize>().map_err(|_| SweepError::MalformedAxis(text.to_string()))?;
        Axis::new(key, num(min)?, num(max)?, count)
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Values of every parameter not on an axis.
    pub fixed: DimensionlessParams,
}

impl GridSpec {
    pub fn new(axis1: Axis, axis2: Option<Axis>, fixed: DimensionlessParams) -> Result<Self, SweepError> {
        if let Some(a2) = &axis2 {
            if a2.key == axis1.key {
                return Err(SweepError::DuplicateAxis(a2.key.name()));
            }
        }
        Ok(GridSpec { axis1, axis2, fixed })
    }

    pub fn len(&self) -> usize {
        self.axis1.count * self.axis2.map_or(1, |a| a.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameter points in row-major order.
    pub fn points(&self) -> Vec<DimensionlessParams> {
        let inner = self.axis2.map(|a| a.values());
        let mut out = Vec::with_capacity(self.len());
        for v1 in self.axis1.values() {
            let base = self.fixed.with(self.axis1.key, v1);
            match (&inner, &self.axis2) {
                (Some(vals), Some(a2)) => out.extend(vals.iter().map(|&v2| base.with(a2.key, v2))),
                _ => out.push(base),
            }
        }
        out
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub params: DimensionlessParams,
    pub outcome: Result<HarvestReport, ClosedFormError>,
}

impl GridRow {
    pub fn status(&self) -> &'static str {
        match &self.outcome {
            Ok(r) => r.status(),
            Err(e) => e.tag(),
        }
    }

    pub fn report(&self) -> Option<&HarvestReport> {
        self.outcome.as_ref().ok()
    }
}

pub fn evaluate_point(params: DimensionlessParams) -> GridRow {
    GridRow { params, outcome: harvest(&params) }
}

/// Evaluates every grid point in parallel; per-point errors stay in their row.
pub fn run_grid(spec: &GridSpec) -> Vec<GridRow> {
    spec.points().into_par_iter().map(evaluate_point).collect()
}

pub const CSV_HEADER: [&str; 21] = [
    "omega_sigma",
    "Omega_sigma",
    "D_sigma",
    "t0_sigma",
    "A",
    "p_norm",
    "re_x_m",
    "im_x_m",
    "re_c_m",
    "im_c_m",
    "re_x_gw",
    "im_x_gw",
    "re_c_gw",
    "im_c_gw",
    "theta_m",
    "theta_gw",
    "concurrence",
    "psi_m",
    "psi_gw",
    "corr",
    "status",
];

/// Shortest decimal that parses back to the same `f64`; exponent notation
/// outside `[1e-5, 1e16)`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Column values for a report, in [`CSV_HEADER`] order minus the parameter
/// columns and status. `theta_gw` is `None` outside first-order validity.
pub fn report_columns(r: &HarvestReport) -> [(&'static str, Option<f64>); 15] {
    [
        ("p_norm", Some(r.p_norm)),
        ("re_x_m", Some(r.x_m.re)),
        ("im_x_m", Some(r.x_m.im)),
        ("re_c_m", Some(r.c_m.re)),
        ("im_c_m", Some(r.c_m.im)),
        ("re_x_gw", Some(r.x_gw.re)),
        ("im_x_gw", Some(r.x_gw.im)),
        ("re_c_gw", Some(r.c_gw.re)),
        ("im_c_gw", Some(r.c_gw.im)),
        ("theta_m", Some(r.theta_m)),
        ("theta_gw", r.theta_gw),
        ("concurrence", Some(r.concurrence)),
        ("psi_m", Some(r.psi_m)),
        ("psi_gw", Some(r.psi_gw)),
        ("corr", Some(r.corr)),
    ]
}

fn csv_record(row: &GridRow) -> Vec<String> {
    let p = &row.params;
    let mut rec: Vec<String> =
        [ParamKey::OmegaSigma, ParamKey::GapOmegaSigma, ParamKey::DSigma, ParamKey::T0Sigma, ParamKey::A]
            .iter()
            .map(|&k| format_number(p.get(k)))
            .collect();
    match row.report() {
        Some(r) => rec.extend(report_columns(r).iter().map(|(_, v)| v.map(format_number).unwrap_or_default())),
        None => rec.extend(std::iter::repeat_n(String::new(), 15)),
    }
    rec.push(row.status().to_string());
    rec
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[GridRow], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(csv_record(row))?;
    }
    w.flush()
}

pub fn emit_csv(rows: &[GridRow], path: &Path) -> Result<(), SweepError> {
    let io = |source| SweepError::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::create(path).map_err(io)?;
    write_csv(rows, std::io::BufWriter::new(file)).map_err(io)
}

/// Minimum of `f` on `[lo, hi]`: a `count`-point scan, then golden-section
/// search between the neighbours of the best scan point.
pub fn refine_minimum(f: impl Fn(f64) -> f64, lo: f64, hi: f64, count: usize) -> (f64, f64) {
    let step = (hi - lo) / (count - 1) as f64;
    let xs: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
    let best = (0..count).min_by(|&i, &j| f(xs[i]).total_cmp(&f(xs[j]))).expect("count >= 2");
    let (mut a, mut b) = (xs[best.saturating_sub(1)], xs[(best + 1).min(count - 1)]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 * (1.0 + a.abs()) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx <= f(xs[best]) {
        (x, fx)
    } else {
        (xs[best], f(xs[best]))
    }
}
