//! Minimal static line charts.

use std::fmt::Write;

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

const W: f64 = 800.0;
const H: f64 = 220.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#7f7f7f"];

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// One panel per series, stacked vertically, sharing the x range.
pub fn stacked_chart(title: &str, x_label: &str, series: &[Series]) -> String {
    let (x0, x1) = extent(series.iter().flat_map(|s| s.x.iter().copied()));
    let height = PAD + series.len() as f64 * (H + PAD);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{height}" viewBox="0 0 {w} {height}" font-family="sans-serif" font-size="12">"#,
        w = W + 2.0 * PAD
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{}" font-size="14">{}</text>"#,
        PAD * 0.6,
        escape(title)
    );
    for (k, s) in series.iter().enumerate() {
        let top = PAD + k as f64 * (H + PAD);
        let (y0, y1) = extent(s.y.iter().copied());
        let px = |x: f64| PAD + (x - x0) / (x1 - x0) * W;
        let py = |y: f64| top + H - (y - y0) / (y1 - y0) * H;
        let _ = writeln!(
            out,
            r##"<rect x="{PAD}" y="{top}" width="{W}" height="{H}" fill="none" stroke="#999"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            PAD + 6.0,
            top + 14.0,
            escape(s.label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
            PAD - 4.0,
            top + 10.0,
            y1
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#,
            PAD - 4.0,
            top + H,
            y0
        );
        let mut points = String::new();
        for (&x, &y) in s.x.iter().zip(s.y) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(points, "{:.2},{:.2} ", px(x), py(y));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
            COLORS[k % COLORS.len()],
            points.trim_end()
        );
    }
    let bottom = height - PAD * 0.3;
    let _ = writeln!(out, r#"<text x="{PAD}" y="{bottom}">{x0}</text>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="end">{x1}</text>"#,
        PAD + W
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="middle">{}</text>"#,
        PAD + W / 2.0,
        escape(x_label)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
