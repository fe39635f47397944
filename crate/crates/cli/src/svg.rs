//! Hand-written SVG 1.1 charts: scatter points and polylines on linear axes.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const POINT_RADIUS: f64 = 3.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub x: f64,
    pub y: f64,
    /// Hover text.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SvgScatter {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<ScatterPoint>,
    pub lines: Vec<Polyline>,
    /// Fixed axis ranges; computed from the data when `None`.
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Tick step from {1, 2, 5} x 10^k giving about five intervals over `span`.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f <= 1.0 {
        1.0
    } else if f <= 2.0 {
        2.0
    } else if f <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Axis range snapped outwards to tick multiples, and its ticks.
fn axis(values: impl Iterator<Item = f64>, fixed: Option<(f64, f64)>) -> (f64, f64, Vec<f64>) {
    let (lo, hi) = fixed.unwrap_or_else(|| {
        let (lo, hi) = values
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if lo > hi {
            (0.0, 1.0)
        } else if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    });
    let step = nice_step(hi - lo);
    let (lo, hi) = if fixed.is_some() { (lo, hi) } else { ((lo / step).floor() * step, (hi / step).ceil() * step) };
    let mut ticks = Vec::new();
    let mut k = (lo / step).ceil();
    while k * step <= hi + step * 1e-9 {
        ticks.push(k * step);
        k += 1.0;
    }
    (lo, hi, ticks)
}

fn tick_label(v: f64) -> String {
    let v = if v.abs() < 1e-12 { 0.0 } else { v };
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl SvgScatter {
    pub fn render(&self) -> String {
        let xs = self.points.iter().map(|p| p.x).chain(self.lines.iter().flat_map(|l| l.points.iter().map(|p| p.0)));
        let ys = self.points.iter().map(|p| p.y).chain(self.lines.iter().flat_map(|l| l.points.iter().map(|p| p.1)));
        let (x0, x1, xticks) = axis(xs, self.x_range);
        let (y0, y1, yticks) = axis(ys, self.y_range);
        let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let sx = |x: f64| (left + (x - x0) / (x1 - x0) * (right - left)).clamp(left, right);
        let sy = |y: f64| (bottom - (y - y0) / (y1 - y0) * (bottom - top)).clamp(top, bottom);

        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            w,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        let _ = writeln!(w, r##"<g stroke="#cccccc" stroke-width="0.5">"##);
        for &t in &xticks {
            let _ = writeln!(w, r#"<line x1="{0:.2}" y1="{top:.2}" x2="{0:.2}" y2="{bottom:.2}"/>"#, sx(t));
        }
        for &t in &yticks {
            let _ = writeln!(w, r#"<line x1="{left:.2}" y1="{0:.2}" x2="{right:.2}" y2="{0:.2}"/>"#, sy(t));
        }
        let _ = writeln!(w, "</g>");
        let _ = writeln!(
            w,
            r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(w, r#"<g text-anchor="middle">"#);
        for &t in &xticks {
            let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, sx(t), bottom + 18.0, tick_label(t));
        }
        let _ = writeln!(w, "</g>");
        let _ = writeln!(w, r#"<g text-anchor="end">"#);
        for &t in &yticks {
            let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, left - 6.0, sy(t) + 4.0, tick_label(t));
        }
        let _ = writeln!(w, "</g>");
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
            (left + right) / 2.0,
            HEIGHT - 20.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            w,
            r#"<text x="20" y="{0:.2}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {0:.2})">{1}</text>"#,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        );

        for (i, line) in self.lines.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = line.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let dash = if line.dashed { r#" stroke-dasharray="6,4""# } else { "" };
            let _ = writeln!(
                w,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}><title>{}</title></polyline>"#,
                pts.join(" "),
                escape(&line.name)
            );
            let ly = top + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                w,
                r#"<line x1="{0:.2}" y1="{ly:.2}" x2="{1:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
                left + 10.0,
                left + 30.0
            );
            let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, left + 36.0, ly + 4.0, escape(&line.name));
        }

        let _ = writeln!(w, r#"<g fill="{}" fill-opacity="0.7">"#, PALETTE[0]);
        for p in &self.points {
            let (cx, cy) = (sx(p.x), sy(p.y));
            match &p.label {
                Some(label) => {
                    let _ = writeln!(
                        w,
                        r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{POINT_RADIUS}"><title>{}</title></circle>"#,
                        escape(label)
                    );
                }
                None => {
                    let _ = writeln!(w, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{POINT_RADIUS}"/>"#);
                }
            }
        }
        let _ = writeln!(w, "</g>");
        let _ = writeln!(w, "</svg>");
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.render())
    }
}

/// At most `max` points, evenly spaced by index, keeping both endpoints.
pub fn thin<T: Copy>(points: &[T], max: usize) -> Vec<T> {
    if points.len() <= max || max < 2 {
        return points.to_vec();
    }
    let last = points.len() - 1;
    (0..max).map(|i| points[i * last / (max - 1)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_plot_has_axes() {
        let svg = SvgScatter { x_label: "soc".into(), y_label: "thm".into(), ..Default::default() }.render();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(">soc</text>") && svg.contains(">thm</text>"));
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn labels_escaped() {
        let svg = SvgScatter {
            points: vec![ScatterPoint { x: 0.5, y: 0.5, label: Some("cats & <dogs>".into()) }],
            ..Default::default()
        }
        .render();
        assert!(svg.contains("cats &amp; &lt;dogs&gt;"));
    }

    #[test]
    fn ticks_are_nice() {
        let (lo, hi, ticks) = axis([0.13, 0.87].into_iter(), None);
        assert_eq!((lo, hi), (0.0, 1.0));
        assert_eq!(ticks.len(), 6);
        let (_, _, ticks) = axis(std::iter::empty(), Some((0.0, 1.0)));
        assert_eq!(ticks.first(), Some(&0.0));
        assert!((ticks.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn points_stay_inside_plot_area() {
        let svg = SvgScatter {
            points: vec![ScatterPoint { x: 5.0, y: -3.0, label: None }],
            x_range: Some((0.0, 1.0)),
            y_range: Some((0.0, 1.0)),
            ..Default::default()
        }
        .render();
        let expected = format!(r#"<circle cx="{:.2}" cy="{:.2}""#, WIDTH - MARGIN_RIGHT, HEIGHT - MARGIN_BOTTOM);
        assert!(svg.contains(&expected), "{svg}");
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let v: Vec<usize> = (0..1001).collect();
        let t = thin(&v, 11);
        assert_eq!(t, vec![0, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000]);
        assert_eq!(thin(&v[..5], 11), vec![0, 1, 2, 3, 4]);
    }
}
