//! Standalone SVG heatmaps and line charts.

use super::preset::FigurePreset;
use super::{GridRow, SweepError};
use crate::model::ParamKey;
use std::fmt::Write as _;
use std::path::Path;

const PALETTE: [&str; 6] = ["#1b6ca8", "#d1495b", "#2a9d4b", "#e39b17", "#6a4c93", "#4d4d4d"];
// viridis, sampled at five points
const SEQUENTIAL: [(f64, f64, f64); 5] =
    [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];

fn axis_label(key: ParamKey) -> &'static str {
    match key {
        ParamKey::A => "A",
        ParamKey::OmegaSigma => "ωσ",
        ParamKey::GapOmegaSigma => "Ωσ",
        ParamKey::DSigma => "D/σ",
        ParamKey::T0Sigma => "t0/σ",
        ParamKey::Lambda => "λ",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn comment(s: &str) -> String {
    format!("<!-- {} -->\n", s.replace("--", "- -"))
}

/// Plotted values in row order, or the reason the figure cannot be drawn.
fn plotted_values(rows: &[GridRow], preset: &FigurePreset) -> Result<Vec<f64>, SweepError> {
    let expected = preset.expected_rows();
    if rows.len() != expected {
        return Err(SweepError::IncompleteGrid(format!("{} rows for {}, expected {expected}", rows.len(), preset.id)));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let q = preset.output_quantity;
            let report = row.report().ok_or_else(|| {
                SweepError::IncompleteGrid(format!("row {i} of {} has status {}", preset.id, row.status()))
            })?;
            q.value(report)
                .filter(|v| v.is_finite())
                .ok_or_else(|| SweepError::IncompleteGrid(format!("row {i} of {} has no {}", preset.id, q.column())))
        })
        .collect()
}

/// Roughly `n` round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = hi - lo;
    if span.is_nan() || span <= 0.0 {
        return vec![lo];
    }
    let raw = span / n as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_text(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

fn sequential(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (SEQUENTIAL.len() - 1) as f64;
    let i = (t.floor() as usize).min(SEQUENTIAL.len() - 2);
    let f = t - i as f64;
    let (a, b) = (SEQUENTIAL[i], SEQUENTIAL[i + 1]);
    let mix = |x: f64, y: f64| (x + f * (y - x)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Blue below zero, red above, white at zero; `t` in [-1, 1].
fn diverging(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let fade = |c: f64| (255.0 - t.abs() * (255.0 - c)).round() as u8;
    if t < 0.0 {
        format!("#{:02x}{:02x}{:02x}", fade(33.0), fade(102.0), fade(172.0))
    } else {
        format!("#{:02x}{:02x}{:02x}", fade(178.0), fade(24.0), fade(43.0))
    }
}

struct Frame {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.x + (v - self.xlo) / (self.xhi - self.xlo) * self.w
    }

    fn py(&self, v: f64) -> f64 {
        self.y + self.h - (v - self.ylo) / (self.yhi - self.ylo) * self.h
    }

    fn axes(&self, s: &mut String, xlabel: &str, ylabel: &str) {
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##,
            self.x, self.y, self.w, self.h
        );
        for t in ticks(self.xlo, self.xhi, 6) {
            let x = self.px(t);
            let yb = self.y + self.h;
            let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{yb:.2}" x2="{x:.2}" y2="{:.2}" stroke="#000"/>"##, yb + 5.0);
            let _ =
                writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, yb + 18.0, tick_text(t));
        }
        for t in ticks(self.ylo, self.yhi, 5) {
            let y = self.py(t);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#000"/>"##,
                self.x - 5.0,
                self.x
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                self.x - 8.0,
                y + 4.0,
                tick_text(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            self.x + 0.5 * self.w,
            self.y + self.h + 38.0,
            escape(xlabel)
        );
        let (lx, ly) = (self.x - 62.0, self.y + 0.5 * self.h);
        let _ = writeln!(
            s,
            r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
            escape(ylabel)
        );
    }
}

fn header(preset: &FigurePreset, width: f64, height: f64) -> String {
    let mut s = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    s.push('\n');
    s.push_str(&comment(&format!("preset: {}", preset.id)));
    s.push_str(&comment(&format!("plotted column: {}", preset.output_quantity.column())));
    let f = &preset.grid.fixed;
    s.push_str(&comment(&format!(
        "fixed: A = {}, omega_sigma = {}, Omega_sigma = {}, D_sigma = {}, t0_sigma = {}, lambda = {} (swept keys ignored)",
        f.gw.amplitude_a, f.gw.omega_sigma, f.detector.gap_omega_sigma, f.pair.d_sigma, f.detector.t0_sigma, f.detector.coupling_lambda
    )));
    for a in &preset.assumptions {
        s.push_str(&comment(&format!("assumption: {a}")));
    }
    let _ = writeln!(s, r##"<rect width="{width}" height="{height}" fill="#fff"/>"##);
    s
}

fn heatmap(rows: &[GridRow], values: &[f64], preset: &FigurePreset) -> String {
    let a1 = preset.grid.axis1;
    let a2 = preset.grid.axis2.expect("heatmap has two axes");
    let (width, height) = (760.0, 600.0);
    let frame = Frame { x: 90.0, y: 50.0, w: 520.0, h: 470.0, xlo: a1.min, xhi: a1.max, ylo: a2.min, yhi: a2.max };
    let mut s = header(preset, width, height);
    let q = preset.output_quantity;
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="15">{} {}</text>"#,
        frame.x + 0.5 * frame.w,
        preset.id,
        escape(q.label())
    );

    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let signed = lo < 0.0 && hi > 0.0;
    let bound = lo.abs().max(hi.abs());
    let colour = |v: f64| {
        if signed {
            diverging(v / bound)
        } else if hi > lo {
            sequential((v - lo) / (hi - lo))
        } else {
            sequential(0.0)
        }
    };

    let (dx, dy) = ((a1.max - a1.min) / (a1.count - 1) as f64, (a2.max - a2.min) / (a2.count - 1) as f64);
    let clip = |v: f64, lo: f64, hi: f64| v.clamp(lo, hi);
    s.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (row, &v) in rows.iter().zip(values) {
        let (x, y) = (row.params.get(a1.key), row.params.get(a2.key));
        let x0 = frame.px(clip(x - 0.5 * dx, a1.min, a1.max));
        let x1 = frame.px(clip(x + 0.5 * dx, a1.min, a1.max));
        let y0 = frame.py(clip(y + 0.5 * dy, a2.min, a2.max));
        let y1 = frame.py(clip(y - 0.5 * dy, a2.min, a2.max));
        let _ = writeln!(
            s,
            r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            x1 - x0 + 0.3,
            y1 - y0 + 0.3,
            colour(v)
        );
    }
    s.push_str("</g>\n");
    frame.axes(&mut s, axis_label(a1.key), axis_label(a2.key));

    // colour bar
    let (bx, by, bw, bh) = (frame.x + frame.w + 30.0, frame.y, 22.0, frame.h);
    let (clo, chi) = if signed { (-bound, bound) } else { (lo, hi) };
    let steps = 64;
    for k in 0..steps {
        let v = clo + (chi - clo) * (k as f64 + 0.5) / steps as f64;
        let y = by + bh - (k as f64 + 1.0) * bh / steps as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{bx:.2}" y="{y:.2}" width="{bw}" height="{:.2}" fill="{}"/>"#,
            bh / steps as f64 + 0.3,
            colour(v)
        );
    }
    let _ = writeln!(s, r##"<rect x="{bx:.2}" y="{by:.2}" width="{bw}" height="{bh:.2}" fill="none" stroke="#000"/>"##);
    if chi > clo {
        for t in ticks(clo, chi, 5) {
            let y = by + bh - (t - clo) / (chi - clo) * bh;
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, bx + bw + 5.0, y + 4.0, tick_text(t));
        }
    }
    s.push_str("</svg>\n");
    s
}

fn line_chart(rows: &[GridRow], values: &[f64], preset: &FigurePreset) -> String {
    let a1 = preset.grid.axis1;
    let curve_key = preset.grid.axis2.map(|a| a.key);
    let grids = preset.grids();
    let per_panel = preset.grid.len();
    let (width, panel_h) = (760.0, 330.0);
    let height = 20.0 + panel_h * grids.len() as f64;
    let mut s = header(preset, width, height);
    let q = preset.output_quantity;

    for (p, grid) in grids.iter().enumerate() {
        let rows = &rows[p * per_panel..(p + 1) * per_panel];
        let values = &values[p * per_panel..(p + 1) * per_panel];
        let mut lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mut hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            lo -= 0.5 * lo.abs().max(1e-300);
            hi += 0.5 * hi.abs().max(1e-300);
        }
        let pad = 0.05 * (hi - lo);
        let top = 20.0 + panel_h * p as f64;
        let frame = Frame {
            x: 100.0,
            y: top + 40.0,
            w: 500.0,
            h: panel_h - 100.0,
            xlo: a1.min,
            xhi: a1.max,
            ylo: lo - pad,
            yhi: hi + pad,
        };
        let title = match &preset.panels {
            Some((k, vals)) => format!("{} {} at {} = {}", preset.id, q.label(), axis_label(*k), vals[p]),
            None => format!("{} {}", preset.id, q.label()),
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15">{}</text>"#,
            frame.x + 0.5 * frame.w,
            top + 22.0,
            escape(&title)
        );
        if frame.ylo < 0.0 && frame.yhi > 0.0 {
            let y = frame.py(0.0);
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
                frame.x,
                frame.x + frame.w
            );
        }

        // rows are row-major with the curve key inner
        let curves: Vec<f64> = grid.axis2.map(|a| a.values()).unwrap_or_else(|| vec![f64::NAN]);
        for (c, &cv) in curves.iter().enumerate() {
            let pts: Vec<String> = rows
                .iter()
                .zip(values)
                .skip(c)
                .step_by(curves.len())
                .map(|(r, &v)| format!("{:.2},{:.2}", frame.px(r.params.get(a1.key)), frame.py(v)))
                .collect();
            let colour = PALETTE[c % PALETTE.len()];
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{colour}" stroke-width="1.6" points="{}"/>"#,
                pts.join(" ")
            );
            if let Some(k) = curve_key {
                let ly = frame.y + 14.0 + 18.0 * c as f64;
                let lx = frame.x + frame.w + 20.0;
                let _ = writeln!(
                    s,
                    r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
                    lx + 24.0
                );
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}">{} = {}</text>"#,
                    lx + 30.0,
                    ly + 4.0,
                    axis_label(k),
                    tick_text(cv)
                );
            }
        }
        frame.axes(&mut s, axis_label(a1.key), q.label());
    }
    s.push_str("</svg>\n");
    s
}

/// SVG text for a preset: heatmap for (Omega, D) presets, one line chart
/// panel per panel value otherwise.
pub fn write_svg(rows: &[GridRow], preset: &FigurePreset) -> Result<String, SweepError> {
    let values = plotted_values(rows, preset)?;
    Ok(if preset.is_heatmap() { heatmap(rows, &values, preset) } else { line_chart(rows, &values, preset) })
}

pub fn emit_svg(rows: &[GridRow], preset: &FigurePreset, path: &Path) -> Result<(), SweepError> {
    let text = write_svg(rows, preset)?;
    std::fs::write(path, text).map_err(|source| SweepError::Io { path: path.to_path_buf(), source })
}
