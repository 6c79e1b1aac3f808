//! Minimal static SVG line plots: one polyline per series, linear or log x
//! axis, fixed palette and layout so identical inputs render byte-identical
//! files.

use anyhow::{bail, Context, Result};
use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 40.0;
const PLOT_WIDTH: f64 = 630.0;
const PLOT_HEIGHT: f64 = 440.0;
const MAX_LEGEND: usize = 12;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Compact tick label: plain decimal in a middle magnitude band, scientific
/// outside it, trailing zeros trimmed.
fn tick_label(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs();
    if !(1e-3..1e5).contains(&magnitude) {
        return format!("{value:.2e}");
    }
    let mut text = format!("{value:.3}");
    while text.ends_with('0') {
        text.pop();
    }
    if text.ends_with('.') {
        text.pop();
    }
    text
}

/// Renders the series as a standalone SVG document.
///
/// Errors if there is nothing to draw. Points with non-finite coordinates
/// (or non-positive x on a log axis) are dropped.
pub fn render_svg(
    title: &str,
    x_label: &str,
    y_label: &str,
    x_scale: Scale,
    series: &[Series],
) -> Result<String> {
    let fx = |x: f64| match x_scale {
        Scale::Linear => x,
        Scale::Log => x.log10(),
    };
    let usable = |x: f64, y: f64| {
        y.is_finite() && fx(x).is_finite() && (x_scale == Scale::Linear || x > 0.0)
    };

    let visible: Vec<(String, Vec<(f64, f64)>)> = series
        .iter()
        .map(|s| {
            let pts: Vec<(f64, f64)> =
                s.points.iter().filter(|&&(x, y)| usable(x, y)).map(|&(x, y)| (fx(x), y)).collect();
            (s.label.clone(), pts)
        })
        .filter(|(_, pts)| !pts.is_empty())
        .collect();
    if visible.is_empty() {
        bail!("nothing to plot: no series with finite points");
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in &visible {
        for &(x, y) in pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let y_pad = (y_max - y_min) * 0.05;
    y_min -= y_pad;
    y_max += y_pad;

    let px = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * PLOT_WIDTH;
    let py = |y: f64| MARGIN_TOP + PLOT_HEIGHT - (y - y_min) / (y_max - y_min) * PLOT_HEIGHT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if !title.is_empty() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            MARGIN_LEFT + PLOT_WIDTH / 2.0,
            escape(title)
        );
    }

    // gridlines and tick labels
    for i in 0..=5 {
        let t = f64::from(i) / 5.0;
        let gx = MARGIN_LEFT + t * PLOT_WIDTH;
        let gy = MARGIN_TOP + PLOT_HEIGHT - t * PLOT_HEIGHT;
        let xv = x_min + t * (x_max - x_min);
        let yv = y_min + t * (y_max - y_min);
        let _ = writeln!(
            svg,
            r##"<line x1="{gx:.2}" y1="{MARGIN_TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            MARGIN_TOP + PLOT_HEIGHT
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + PLOT_WIDTH
        );
        let x_text = match x_scale {
            Scale::Linear => tick_label(xv),
            Scale::Log => tick_label(10f64.powf(xv)),
        };
        let _ = writeln!(
            svg,
            r#"<text x="{gx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + PLOT_HEIGHT + 18.0,
            escape(&x_text)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            gy + 4.0,
            escape(&tick_label(yv))
        );
    }

    // frame
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT_WIDTH}" height="{PLOT_HEIGHT}" fill="none" stroke="black"/>"#
    );
    // axis labels
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + PLOT_WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        MARGIN_TOP + PLOT_HEIGHT / 2.0,
        escape(y_label)
    );

    // data polylines
    for (i, (_, pts)) in visible.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut coords = String::new();
        for &(x, y) in pts {
            let _ = write!(coords, "{:.2},{:.2} ", px(x), py(y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.trim_end()
        );
    }

    // legend
    let legend_x = MARGIN_LEFT + PLOT_WIDTH + 12.0;
    for (i, (label, _)) in visible.iter().take(MAX_LEGEND).enumerate() {
        let y = MARGIN_TOP + 12.0 + 18.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            legend_x + 24.0,
            y + 4.0,
            escape(label)
        );
    }
    if visible.len() > MAX_LEGEND {
        let y = MARGIN_TOP + 12.0 + 18.0 * MAX_LEGEND as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}">… {} more</text>"#,
            legend_x,
            y + 4.0,
            visible.len() - MAX_LEGEND
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders and writes the plot; nothing is written when rendering fails.
pub fn write_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    x_scale: Scale,
    series: &[Series],
) -> Result<()> {
    let svg = render_svg(title, x_label, y_label, x_scale, series)?;
    std::fs::write(path, svg).with_context(|| format!("writing plot {}", path.display()))
}
