//! Minimal self-contained SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use super::output::{write_file, Series};
use crate::error::{LicsError, Result};
use crate::transforms::Basis;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 5] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#000000"];

/// Population series smaller than this everywhere are left out of the plot.
const EMPTY_SERIES: f64 = 1e-12;

pub struct Plot {
    pub x_label: String,
    pub y_label: String,
    pub x: Vec<f64>,
    pub lines: Vec<(String, Vec<f64>)>,
}

impl Plot {
    pub fn from_series(data: Series<'_>) -> Self {
        match data {
            Series::Trajectory(t) => {
                let names: [&str; 4] = match t.basis() {
                    Basis::TwoLevel2 => ["|c_g|²", "|c_e|²", "", ""],
                    Basis::Original4 => ["|c_g1|²", "|c_g2|²", "|c_e1|²", "|c_e2|²"],
                    _ => ["|b_g|²", "|b_e|²", "|d_g|²", "|d_e|²"],
                };
                let dim = t.states[0].amps().len();
                let mut lines = Vec::new();
                for (k, name) in names.iter().take(dim).enumerate() {
                    let ys: Vec<f64> = t.states.iter().map(|s| s.amps()[k].norm_sqr()).collect();
                    if ys.iter().any(|&y| y > EMPTY_SERIES) {
                        lines.push((name.to_string(), ys));
                    }
                }
                lines.push(("ionization".to_string(), t.ionization.clone()));
                Self {
                    x_label: "t / T".into(),
                    y_label: "population".into(),
                    x: t.states.iter().map(|s| s.time).collect(),
                    lines,
                }
            }
            Series::Profile(p) => Self {
                x_label: "Δ · T".into(),
                y_label: format!("ionization at t/T = {}", p.observation_time),
                x: p.deltas.clone(),
                lines: vec![("ionization".to_string(), p.ionization.clone())],
            },
        }
    }

    pub fn to_svg(&self) -> String {
        let (x_lo, x_hi) = padded_range(self.x.iter().copied());
        let (y_lo, y_hi) = padded_range(self.lines.iter().flat_map(|(_, ys)| ys.iter().copied()));
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * pw;
        let sy = |y: f64| TOP + ph - (y - y_lo) / (y_hi - y_lo) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        for t in ticks(x_lo, x_hi) {
            let px = sx(t);
            let _ = writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{y1:.2}" stroke="black"/><text x="{px:.2}" y="{ty:.2}" text-anchor="middle">{}</text>"#,
                tick_label(t),
                y0 = TOP + ph,
                y1 = TOP + ph + 5.0,
                ty = TOP + ph + 18.0,
            );
        }
        for t in ticks(y_lo, y_hi) {
            let py = sy(t);
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{}</text>"#,
                tick_label(t),
                x0 = LEFT - 5.0,
                tx = LEFT - 8.0,
                ty = py + 4.0,
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (k, (name, ys)) in self.lines.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let dash = if name == "ionization" {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let pts: Vec<String> = self
                .x
                .iter()
                .zip(ys)
                .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                pts.join(" ")
            );
            let ly = TOP + 15.0 + 20.0 * k as f64;
            let lx = WIDTH - RIGHT + 15.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 25.0,
                lx + 30.0,
                ly + 4.0,
                escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

/// Round-number ticks covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(x: f64) -> String {
    let s = format!("{:.4}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(data: Series<'_>, path: &Path) -> Result<()> {
    if data.is_empty() {
        return Err(LicsError::Precondition(
            "nothing to plot: empty data".into(),
        ));
    }
    write_file(path, &Plot::from_series(data).to_svg())
}
