//! Self-contained SVG line charts: axes, tick labels, legend, and one
//! polyline per series. No timestamps or external resources, so identical
//! inputs render byte-identical files.

use std::fmt::Write as _;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 58.0;
const TICKS: usize = 6;
/// Longest polyline worth drawing; denser series are thinned evenly.
const MAX_POINTS_PER_SERIES: usize = 512;

const PALETTE: [&str; 7] =
    ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineStyle {
    Solid,
    /// Used for reference series overlays.
    Dashed,
}

/// A named curve to draw.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: LineStyle,
}

impl Series {
    pub fn solid(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, style: LineStyle::Solid }
    }

    pub fn dashed(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { label: label.into(), points, style: LineStyle::Dashed }
    }
}

/// Renders a complete SVG document for the given series.
///
/// Series are drawn in order with a fixed palette; non-finite points are
/// skipped. An empty chart still renders axes and the title.
pub fn render_line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut finite: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| s.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect())
        .collect();
    for points in &mut finite {
        thin(points);
    }

    let (x_min, x_max) = axis_bounds(finite.iter().flatten().map(|p| p.0));
    let (y_min, y_max) = axis_bounds(finite.iter().flatten().map(|p| p.1));

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
        let py = MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
        (px, py)
    };

    let mut svg = String::with_capacity(16 * 1024);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="26" font-family="sans-serif" font-size="17" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Gridlines, ticks, and tick labels.
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let x_val = x_min + frac * (x_max - x_min);
        let y_val = y_min + frac * (y_max - y_min);
        let (gx, _) = to_px(x_val, y_min);
        let (_, gy) = to_px(x_min, y_val);
        let _ = writeln!(
            svg,
            r##"<line x1="{gx:.1}" y1="{MARGIN_TOP}" x2="{gx:.1}" y2="{:.1}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{gy:.1}" x2="{:.1}" y2="{gy:.1}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{gx:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 18.0,
            tick_label(x_val)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            gy + 4.0,
            tick_label(y_val)
        );
    }

    // Axis frame and labels.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    // Curves.
    for (idx, (s, points)) in series.iter().zip(&finite).enumerate() {
        if points.is_empty() {
            continue;
        }
        let color = PALETTE[idx % PALETTE.len()];
        let dash = match s.style {
            LineStyle::Solid => "",
            LineStyle::Dashed => r#" stroke-dasharray="7 4""#,
        };
        let mut coords = String::with_capacity(points.len() * 14);
        for &(x, y) in points {
            let (px, py) = to_px(x, y);
            let _ = write!(coords, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
            coords.trim_end()
        );
    }

    // Legend, top-right inside the frame.
    let legend_x = MARGIN_LEFT + plot_w - 170.0;
    let mut legend_y = MARGIN_TOP + 16.0;
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="162" height="{}" fill="white" fill-opacity="0.85" stroke="#999999"/>"##,
        legend_x - 6.0,
        legend_y - 12.0,
        series.len() * 18 + 8
    );
    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let dash = match s.style {
            LineStyle::Solid => "",
            LineStyle::Dashed => r#" stroke-dasharray="7 4""#,
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x:.1}" y1="{legend_y:.1}" x2="{:.1}" y2="{legend_y:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
            legend_x + 26.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            legend_x + 32.0,
            legend_y + 4.0,
            escape(&s.label)
        );
        legend_y += 18.0;
    }

    svg.push_str("</svg>\n");
    svg
}

fn axis_bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        // Degenerate range: pad around the value.
        let pad = min.abs().max(1.0) * 0.1;
        return (min - pad, max + pad);
    }
    let pad = (max - min) * 0.05;
    (min - pad, max + pad)
}

fn thin(points: &mut Vec<(f64, f64)>) {
    if points.len() <= MAX_POINTS_PER_SERIES {
        return;
    }
    let last = *points.last().expect("non-empty");
    let stride = points.len().div_ceil(MAX_POINTS_PER_SERIES);
    let mut kept: Vec<(f64, f64)> = points.iter().copied().step_by(stride).collect();
    if kept.last() != Some(&last) {
        kept.push(last);
    }
    *points = kept;
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if (1e-3..1e5).contains(&magnitude) {
        let s = format!("{v:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
