//! Minimal standalone SVG line charts for the six telemetry figures.

use std::fmt::Write as _;
use std::path::Path;

use mrp_smc::Vec3;

use crate::telemetry::{TelemetryError, TelemetryRecord};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const TICKS: usize = 5;

// Component 1 solid, 2 dashed, 3 dotted.
const STYLES: [(&str, &str); 3] = [("#1f77b4", ""), ("#d62728", "8 4"), ("#2ca02c", "2 3")];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub file_name: &'static str,
    pub title: String,
    pub y_label: String,
    pub t: Vec<f64>,
    pub series: Vec<Series>,
}

fn chart(
    records: &[TelemetryRecord],
    file_name: &'static str,
    title: &str,
    symbol: &str,
    unit: &str,
    pick: impl Fn(&TelemetryRecord) -> Vec3,
) -> Chart {
    let series = (0..3)
        .map(|i| Series {
            label: format!("{symbol}{}", i + 1),
            values: records.iter().map(|r| pick(r)[i]).collect(),
        })
        .collect();
    Chart {
        file_name,
        title: title.to_string(),
        y_label: if unit.is_empty() {
            symbol.to_string()
        } else {
            format!("{symbol} [{unit}]")
        },
        t: records.iter().map(|r| r.t).collect(),
        series,
    }
}

/// The six figures: sliding variable, body rate, attitude error, inertial attitude, u_N, u_eq.
pub fn build_charts(records: &[TelemetryRecord]) -> Vec<Chart> {
    vec![
        chart(records, "xi.svg", "Sliding motion", "ξ", "", |r| r.xi),
        chart(records, "omega.svg", "Body angular velocity", "ω", "rad/s", |r| {
            r.omega
        }),
        chart(records, "sigma_db.svg", "Attitude error (MRP)", "σ_db", "", |r| {
            r.sigma_db
        }),
        chart(records, "sigma_lb.svg", "Inertial attitude (MRP)", "σ_lb", "", |r| {
            r.sigma_lb
        }),
        chart(records, "u_N.svg", "Reaching control", "u_N", "N·m", |r| r.u_n),
        chart(records, "u_eq.svg", "Equivalent control", "u_eq", "N·m", |r| r.u_eq),
    ]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        format!("{v:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        format!("{v:.2e}")
    }
}

impl Chart {
    pub fn to_svg(&self) -> String {
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let (t0, t1) = extent(self.t.iter().copied());
        let (y0, y1) = extent(self.series.iter().flat_map(|s| s.values.iter().copied()));
        let px = |t: f64| MARGIN_LEFT + (t - t0) / (t1 - t0) * plot_w;
        let py = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );

        for k in 0..=TICKS {
            let frac = k as f64 / TICKS as f64;
            let t = t0 + frac * (t1 - t0);
            let y = y0 + frac * (y1 - y0);
            let (x, yy) = (px(t), py(y));
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{MARGIN_TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                MARGIN_TOP + plot_h,
                MARGIN_TOP + plot_h + 16.0,
                tick_label(t)
            );
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                MARGIN_LEFT + plot_w,
                MARGIN_LEFT - 6.0,
                yy + 4.0,
                tick_label(y)
            );
        }
        if y0 < 0.0 && y1 > 0.0 {
            let z = py(0.0);
            let _ = writeln!(
                svg,
                r##"<line x1="{MARGIN_LEFT}" y1="{z:.2}" x2="{:.2}" y2="{z:.2}" stroke="#888"/>"##,
                MARGIN_LEFT + plot_w
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">t [s]</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>"#,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let (color, dash) = STYLES[i % STYLES.len()];
            let points = self
                .t
                .iter()
                .zip(&s.values)
                .filter(|(_, v)| v.is_finite())
                .map(|(&t, &v)| format!("{:.2},{:.2}", px(t), py(v)))
                .collect::<Vec<_>>()
                .join(" ");
            let dash_attr = if dash.is_empty() {
                String::new()
            } else {
                format!(r#" stroke-dasharray="{dash}""#)
            };
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} data-series="{}" points="{points}"/>"#,
                escape(&s.label)
            );
            let ly = MARGIN_TOP + 16.0 + 20.0 * i as f64;
            let lx = MARGIN_LEFT + plot_w + 12.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash_attr}/><text x="{}" y="{}">{}</text>"#,
                lx + 30.0,
                lx + 36.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Writes the six SVG charts into `out_dir`, creating it if needed.
pub fn emit_plots(
    records: &[TelemetryRecord],
    out_dir: impl AsRef<Path>,
) -> Result<Vec<std::path::PathBuf>, TelemetryError> {
    if records.is_empty() {
        return Err(TelemetryError::Empty);
    }
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir)?;
    build_charts(records)
        .into_iter()
        .map(|c| {
            let path = dir.join(c.file_name);
            std::fs::write(&path, c.to_svg())?;
            Ok(path)
        })
        .collect()
}
