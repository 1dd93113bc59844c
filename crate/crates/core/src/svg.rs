//! Minimal SVG 1.1 line plots: polylines over linear axes with ticks and a legend.

use std::fmt::Write;

use crate::harness::ErrorReport;
use crate::ode::Trajectory;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
    pub markers: bool,
}

impl Series {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>) -> Series {
        Series {
            name: name.into(),
            points,
            dashed: false,
            markers: false,
        }
    }

    pub fn dashed(mut self) -> Series {
        self.dashed = true;
        self
    }

    pub fn with_markers(mut self) -> Series {
        self.markers = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub width: f64,
    pub height: f64,
}

impl Plot {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Plot {
        Plot {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            width: 640.0,
            height: 420.0,
        }
    }

    pub fn push(&mut self, series: Series) -> &mut Plot {
        self.series.push(series);
        self
    }

    fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let finite = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|(x, y)| x.is_finite() && y.is_finite());
        let mut xr = (f64::INFINITY, f64::NEG_INFINITY);
        let mut yr = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in finite {
            xr = (xr.0.min(x), xr.1.max(x));
            yr = (yr.0.min(y), yr.1.max(y));
        }
        let widen = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        (widen(xr), widen(yr))
    }

    /// Renders the plot. Non-finite points split a series into separate polylines.
    pub fn to_svg(&self) -> String {
        let (w, h) = (self.width, self.height);
        let (left, right, top, bottom) = (70.0, 20.0, 36.0, 52.0);
        let ((x0, x1), (y0, y1)) = self.bounds();
        let xt = nice_ticks(x0, x1, 6);
        let yt = nice_ticks(y0, y1, 6);
        let (x0, x1) = (x0.min(xt[0]), x1.max(xt[xt.len() - 1]));
        let (y0, y1) = (y0.min(yt[0]), y1.max(yt[yt.len() - 1]));
        let px = |x: f64| left + (x - x0) / (x1 - x0) * (w - left - right);
        let py = |y: f64| h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            w / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            w - left - right,
            h - top - bottom
        );
        for &t in &xt {
            let x = px(t);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"##,
                top,
                h - bottom,
                h - bottom + 16.0,
                tick_label(t)
            );
        }
        for &t in &yt {
            let y = py(t);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                w - right,
                left - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            left + (w - left - right) / 2.0,
            h - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            top + (h - top - bottom) / 2.0,
            escape(&self.y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let dash = if series.dashed { r#" stroke-dasharray="6 4""# } else { "" };
            for run in series.points.split(|(x, y)| !(x.is_finite() && y.is_finite())) {
                if run.is_empty() {
                    continue;
                }
                let pts: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                    pts.join(" ")
                );
                if series.markers {
                    for &(x, y) in run {
                        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(x), py(y));
                    }
                }
            }
            let ly = top + 14.0 + 16.0 * i as f64;
            let lx = w - right - 120.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(&series.name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Numeric trajectory against the exact solution when one is given.
pub fn trajectory_plot(title: &str, label: &str, traj: &Trajectory, exact: Option<&dyn Fn(f64) -> f64>) -> Plot {
    let mut plot = Plot::new(title, "t", "u");
    plot.push(Series::line(label, traj.values.clone()));
    if let Some(exact) = exact {
        let (t0, t1) = (traj.values[0].0, traj.last().0);
        let fine: Vec<(f64, f64)> = (0..=400)
            .map(|i| t0 + (t1 - t0) * i as f64 / 400.0)
            .map(|t| (t, exact(t)))
            .collect();
        plot.push(Series::line("exact", fine).dashed());
    }
    plot
}

/// `log₁₀ ℰ` against `log₂ N`, one series per scheme in order of first appearance.
pub fn sweep_plot(title: &str, reports: &[ErrorReport]) -> Plot {
    let mut plot = Plot::new(title, "log2 N", "log10 E");
    let mut schemes = Vec::new();
    for r in reports {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
    }
    for scheme in schemes {
        let pts = reports
            .iter()
            .filter(|r| r.scheme == scheme)
            .map(|r| ((r.n as f64).log2(), if r.e > 0.0 { r.e.log10() } else { f64::NAN }))
            .collect();
        plot.push(Series::line(scheme.code(), pts).with_markers());
    }
    plot
}

/// Round tick positions (multiples of 1, 2 or 5 times a power of ten) covering `[lo, hi]`.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).floor() as i64;
    let end = (hi / step).ceil() as i64;
    (start..=end).map(|i| i as f64 * step).collect()
}

fn tick_label(t: f64) -> String {
    if t == 0.0 {
        return "0".into();
    }
    let a = t.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{t:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{t:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round_and_cover() {
        assert_eq!(nice_ticks(0.0, 1.0, 5), [0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        let t = nice_ticks(-7.3, 2.1, 6);
        assert!(t[0] <= -7.3 && *t.last().unwrap() >= 2.1);
    }

    #[test]
    fn renders_series_and_breaks_on_nan() {
        let mut p = Plot::new("a < b", "t", "u");
        p.push(Series::line("num", vec![(0.0, 1.0), (0.5, f64::NAN), (1.0, 0.0), (2.0, 1.0)]));
        p.push(Series::line("exact", vec![(0.0, 1.0), (2.0, 1.0)]).dashed().with_markers());
        let svg = p.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg, p.to_svg());
    }

    #[test]
    fn degenerate_range() {
        let mut p = Plot::new("flat", "x", "y");
        p.push(Series::line("c", vec![(1.0, 2.0), (1.0, 2.0)]));
        assert!(!p.to_svg().contains("NaN"));
        let empty = Plot::new("empty", "x", "y");
        assert!(!empty.to_svg().contains("NaN"));
    }
}
