//! Minimal SVG line plots: time on x, one or more traces on y. Carriers are
//! drawn solid and envelopes dashed.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Clone, Debug)]
pub struct Trace<'a> {
    pub label: &'a str,
    pub t: &'a [f64],
    pub y: &'a [f64],
    pub stroke: Stroke,
}

#[derive(Clone, Debug)]
pub struct Panel<'a> {
    pub title: &'a str,
    pub traces: Vec<Trace<'a>>,
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Render panels stacked vertically, each with its own y range.
pub fn render(panels: &[Panel<'_>]) -> String {
    let total_h = HEIGHT * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{total_h}" viewBox="0 0 {WIDTH} {total_h}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, panel) in panels.iter().enumerate() {
        let top = HEIGHT * i as f64;
        let (t0, t1) = bounds(panel.traces.iter().flat_map(|tr| tr.t.iter()));
        let (y0, y1) = bounds(panel.traces.iter().flat_map(|tr| tr.y.iter()));
        let plot_w = WIDTH - 2.0 * MARGIN;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let sx = |t: f64| MARGIN + (t - t0) / (t1 - t0) * plot_w;
        let sy = |y: f64| top + MARGIN + (y1 - y) / (y1 - y0) * plot_h;
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{:.2}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black" stroke-width="1"/>"#,
            top + MARGIN
        );
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{:.2}" font-family="sans-serif" font-size="14">{}</text>"#,
            top + MARGIN - 12.0,
            escape(panel.title)
        );
        if y0 < 0.0 && y1 > 0.0 {
            let _ = writeln!(
                out,
                r##"<line x1="{MARGIN}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-width="0.5"/>"##,
                sy(0.0),
                MARGIN + plot_w,
                sy(0.0)
            );
        }
        for (label, x, anchor) in [(t0, MARGIN, "start"), (t1, MARGIN + plot_w, "end")] {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">t = {label:.3}</text>"#,
                top + HEIGHT - MARGIN + 16.0
            );
        }
        for (label, y) in [(y1, top + MARGIN + 4.0), (y0, top + HEIGHT - MARGIN)] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{label:.3e}</text>"#,
                MARGIN - 4.0
            );
        }
        for (j, tr) in panel.traces.iter().enumerate() {
            let color = COLORS[j % COLORS.len()];
            let dash = match tr.stroke {
                Stroke::Solid => "",
                Stroke::Dashed => r#" stroke-dasharray="6 4""#,
            };
            let width = match tr.stroke {
                Stroke::Solid => 0.8,
                Stroke::Dashed => 1.6,
            };
            let mut pts = String::new();
            for (&t, &y) in tr.t.iter().zip(tr.y) {
                let _ = write!(pts, "{:.2},{:.2} ", sx(t), sy(y));
            }
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{}"/>"#,
                pts.trim_end()
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{color}" text-anchor="end">{}</text>"#,
                MARGIN + plot_w - 4.0,
                top + MARGIN + 14.0 * (j + 1) as f64,
                escape(tr.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn write_svg(panels: &[Panel<'_>], path: &Path) -> Result<()> {
    std::fs::write(path, render(panels)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_solid_and_dashed_polylines() {
        let t = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, -1.0];
        let e = [1.0, 1.0, 1.0];
        let svg = render(&[Panel {
            title: "E & envelope",
            traces: vec![
                Trace {
                    label: "E",
                    t: &t,
                    y: &y,
                    stroke: Stroke::Solid,
                },
                Trace {
                    label: "|E|",
                    t: &t,
                    y: &e,
                    stroke: Stroke::Dashed,
                },
            ],
        }]);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.contains("E &amp; envelope"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn flat_trace_does_not_divide_by_zero() {
        let t = [0.0, 1.0];
        let y = [2.0, 2.0];
        let svg = render(&[Panel {
            title: "flat",
            traces: vec![Trace {
                label: "c",
                t: &t,
                y: &y,
                stroke: Stroke::Solid,
            }],
        }]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
