//! Minimal deterministic SVG charts: line/marker plots with optional error
//! bars, and cell heat maps.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub errors: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn line(name: &str, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.to_string(), points, errors: None, style: Style::Line }
    }

    pub fn markers(name: &str, points: Vec<(f64, f64)>) -> Self {
        Series { name: name.to_string(), points, errors: None, style: Style::Markers }
    }

    pub fn with_errors(mut self, errors: Vec<f64>) -> Self {
        self.errors = Some(errors);
        self
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for k in 0..=4 {
        let xv = f.x.0 + (f.x.1 - f.x.0) * k as f64 / 4.0;
        let yv = f.y.0 + (f.y.1 - f.y.0) * k as f64 / 4.0;
        let (px, py) = (num(f.px(xv)), num(f.py(yv)));
        let _ = writeln!(out, r#"<line x1="{px}" y1="{y1}" x2="{px}" y2="{}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(out, r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#, y1 + 18.0, num(xv));
        let _ = writeln!(out, r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            x0 - 8.0,
            num(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn legend(out: &mut String, entries: &[(String, &str)]) {
    for (k, (name, color)) in entries.iter().enumerate() {
        let y = TOP + 14.0 + 16.0 * k as f64;
        let x = WIDTH - RIGHT - 130.0;
        let _ = writeln!(out, r#"<rect x="{x}" y="{}" width="10" height="10" fill="{color}"/>"#, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{}</text>"#, x + 16.0, escape(name));
    }
}

/// Line and marker chart. `y_range` fixes the vertical axis when given.
pub fn plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series], y_range: Option<(f64, f64)>) -> String {
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let x = range(xs);
    let y = y_range.unwrap_or_else(|| {
        range(series.iter().flat_map(|s| {
            s.points.iter().enumerate().flat_map(move |(k, p)| {
                let e = s.errors.as_ref().map_or(0.0, |e| e[k]);
                [p.1 - e, p.1 + e]
            })
        }))
    });
    let f = Frame { x, y };
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, &f, xlabel, ylabel);
    if f.y.0 < 0.0 && f.y.1 > 0.0 {
        let py = num(f.py(0.0));
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{py}" x2="{}" y2="{py}" stroke="#999999" stroke-dasharray="4 3"/>"##,
            WIDTH - RIGHT
        );
    }
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let finite: Vec<&(f64, f64)> = s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        match s.style {
            Style::Line => {
                let pts: Vec<String> =
                    finite.iter().map(|p| format!("{},{}", num(f.px(p.0)), num(f.py(p.1)))).collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    pts.join(" ")
                );
            }
            Style::Markers => {
                for p in &finite {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                        num(f.px(p.0)),
                        num(f.py(p.1))
                    );
                }
            }
        }
        if let Some(errors) = &s.errors {
            for (p, e) in s.points.iter().zip(errors) {
                if !(p.0.is_finite() && p.1.is_finite() && e.is_finite()) {
                    continue;
                }
                let px = num(f.px(p.0));
                let _ = writeln!(
                    out,
                    r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="{color}"/>"#,
                    num(f.py(p.1 - e)),
                    num(f.py(p.1 + e))
                );
            }
        }
    }
    let entries: Vec<(String, &str)> =
        series.iter().enumerate().map(|(k, s)| (s.name.clone(), PALETTE[k % PALETTE.len()])).collect();
    legend(&mut out, &entries);
    out.push_str("</svg>\n");
    out
}

/// Heat map of `(x, y, colour)` cells on the grid spanned by the distinct
/// `x` and `y` values.
pub fn heatmap(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    cells: &[(f64, f64, String)],
    key: &[(String, &str)],
) -> String {
    let mut xs: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let mut ys: Vec<f64> = cells.iter().map(|c| c.1).collect();
    for v in [&mut xs, &mut ys] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let step = |v: &[f64]| if v.len() > 1 { (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64 } else { 1.0 };
    let (dx, dy) = (step(&xs), step(&ys));
    let f = Frame {
        x: (xs.first().copied().unwrap_or(0.0) - dx / 2.0, xs.last().copied().unwrap_or(1.0) + dx / 2.0),
        y: (ys.first().copied().unwrap_or(0.0) - dy / 2.0, ys.last().copied().unwrap_or(1.0) + dy / 2.0),
    };
    let mut out = String::new();
    open(&mut out, title);
    let w = (f.px(dx) - f.px(0.0)).abs();
    let h = (f.py(0.0) - f.py(dy)).abs();
    for (x, y, color) in cells {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{color}"/>"#,
            num(f.px(x - dx / 2.0)),
            num(f.py(y + dy / 2.0)),
            num(w),
            num(h)
        );
    }
    axes(&mut out, &f, xlabel, ylabel);
    legend(&mut out, key);
    out.push_str("</svg>\n");
    out
}

/// White-to-blue ramp for values in `[0, 1]`.
pub fn ramp(v: f64) -> String {
    let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
    let lerp = |a: f64, b: f64| (a + (b - a) * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(255.0, 8.0), lerp(255.0, 48.0), lerp(255.0, 107.0))
}
