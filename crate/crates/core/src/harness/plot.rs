//! Minimal SVG line charts of a training trace.

use std::fmt::Write as _;

use super::trace::TraceTable;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 220.0;
const MARGIN: f64 = 48.0;
const COST_COLOUR: &str = "#888888";
const EXACT_COLOUR: &str = "#d62728";
const ESTIMATE_COLOUR: &str = "#1f77b4";

struct Panel<'a> {
    title: &'a str,
    lines: Vec<(&'static str, Vec<f64>)>,
}

fn polyline(out: &mut String, xs: &[f64], ys: &[f64], (lo, hi): (f64, f64), top: f64, colour: &str) {
    let span_x = (xs.last().copied().unwrap_or(0.0) - xs[0]).max(1.0);
    let span_y = if hi > lo { hi - lo } else { 1.0 };
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = PANEL_HEIGHT - 2.0 * MARGIN;
    let points: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let px = MARGIN + (x - xs[0]) / span_x * plot_w;
            let py = top + MARGIN + (1.0 - (y - lo) / span_y) * plot_h;
            format!("{px:.2},{py:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
        points.join(" ")
    );
}

/// Renders one panel per quantity series (cost in gray, exact value in red,
/// estimate in blue), or a single cost panel when the trace has no series.
pub fn render_svg(trace: &TraceTable) -> Result<String> {
    if trace.is_empty() {
        return Err(Error::Trace("trace has no rows".into()));
    }
    let xs: Vec<f64> = trace.epochs.iter().map(|&e| e as f64).collect();
    let panels: Vec<Panel> = if trace.series.is_empty() {
        vec![Panel {
            title: "cost",
            lines: vec![(COST_COLOUR, trace.cost.clone())],
        }]
    } else {
        trace
            .series
            .iter()
            .map(|s| Panel {
                title: &s.label,
                lines: vec![
                    (COST_COLOUR, trace.cost.clone()),
                    (EXACT_COLOUR, vec![s.exact; xs.len()]),
                    (ESTIMATE_COLOUR, s.estimates.clone()),
                ],
            })
            .collect()
    };
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, panel) in panels.iter().enumerate() {
        let top = k as f64 * PANEL_HEIGHT;
        let finite = panel.lines.iter().flat_map(|(_, ys)| ys.iter().copied()).filter(|y| y.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
        let range = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
        let _ = writeln!(
            out,
            r##"<rect x="{MARGIN}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#cccccc"/>"##,
            top + MARGIN,
            WIDTH - 2.0 * MARGIN,
            PANEL_HEIGHT - 2.0 * MARGIN
        );
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
            top + MARGIN - 8.0,
            panel.title
        );
        let _ = writeln!(
            out,
            r#"<text x="4" y="{:.2}" font-family="sans-serif" font-size="10">{:.3}</text><text x="4" y="{:.2}" font-family="sans-serif" font-size="10">{:.3}</text>"#,
            top + MARGIN + 4.0,
            range.1,
            top + PANEL_HEIGHT - MARGIN,
            range.0
        );
        for (colour, ys) in &panel.lines {
            polyline(&mut out, &xs, ys, range, top, colour);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::trace::SeriesColumn;

    fn table(series: Vec<SeriesColumn>) -> TraceTable {
        TraceTable {
            epochs: vec![0, 1],
            cost: vec![0.6, 0.2],
            grad_norm: vec![0.1, 0.1],
            series,
        }
    }

    #[test]
    fn two_rows_give_two_point_lines() {
        let svg = render_svg(&table(vec![SeriesColumn {
            label: "von_neumann".into(),
            exact: 1.0,
            estimates: vec![0.5, 0.9],
        }]))
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        for line in svg.lines().filter(|l| l.starts_with("<polyline")) {
            let points = line.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
            assert_eq!(points.split(' ').count(), 2);
        }
        assert!(svg.contains(EXACT_COLOUR) && svg.contains(ESTIMATE_COLOUR));
    }

    #[test]
    fn cost_only_chart() {
        let svg = render_svg(&table(Vec::new())).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains(COST_COLOUR));
    }

    #[test]
    fn empty_trace_is_an_error() {
        assert!(render_svg(&TraceTable::default()).is_err());
    }
}
