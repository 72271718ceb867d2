//! Minimal SVG line plots: polylines, shaded bands, axis ticks.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// `(x, lo, hi)` triples drawn as a translucent polygon behind the line.
    pub band: Option<Vec<(f64, f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Self { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 {
            let pad = lo.abs().max(1.0) * 0.5;
            return Self {
                lo: lo - pad,
                hi: hi + pad,
            };
        }
        Self { lo, hi }
    }

    fn ticks(&self) -> Vec<f64> {
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|f| f * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|i| i as f64 * step).collect()
    }

    fn map(&self, v: f64, from: f64, to: f64) -> f64 {
        from + (v - self.lo) / (self.hi - self.lo) * (to - from)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Plot {
    pub fn render_svg(&self) -> String {
        let xs = Axis::fit(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0)),
        );
        let ys = Axis::fit(self.series.iter().flat_map(|s| {
            let band = s.band.iter().flatten().flat_map(|b| [b.1, b.2]);
            s.points.iter().map(|p| p.1).chain(band)
        }));
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let px = |v: f64| xs.map(v, x0, x1);
        let py = |v: f64| ys.map(v, y0, y1);

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        );
        let _ = writeln!(
            out,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
            (x0 + x1) / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.3}" y="{y1:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        for t in xs.ticks() {
            let x = px(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.3}" y1="{y0:.3}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
                y0 + 4.0,
                y0 + 16.0,
                tick_label(t)
            );
        }
        for t in ys.ticks() {
            let y = py(t);
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{y:.3}" x2="{x0:.3}" y2="{y:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
                x0 - 4.0,
                x0 - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="14" y="{:.3}" text-anchor="middle" transform="rotate(-90 14 {:.3})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );

        for (i, s) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            if let Some(band) = s.band.as_ref().filter(|b| !b.is_empty()) {
                let upper = band
                    .iter()
                    .map(|b| format!("{:.3},{:.3}", px(b.0), py(b.2)));
                let lower = band
                    .iter()
                    .rev()
                    .map(|b| format!("{:.3},{:.3}", px(b.0), py(b.1)));
                let pts: Vec<String> = upper.chain(lower).collect();
                let _ = writeln!(
                    out,
                    r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
                    pts.join(" ")
                );
            }
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.1.is_finite())
                .map(|p| format!("{:.3},{:.3}", px(p.0), py(p.1)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                pts.join(" ")
            );
            let ly = TOP + 14.0 * i as f64 + 8.0;
            let _ = writeln!(
                out,
                r#"<line x1="{:.3}" y1="{ly:.3}" x2="{:.3}" y2="{ly:.3}" stroke="{color}" stroke-width="2"/><text x="{:.3}" y="{:.3}">{}</text>"#,
                x1 + 10.0,
                x1 + 28.0,
                x1 + 32.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_lines_and_bands() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "d".into(),
            y_label: "value".into(),
            series: vec![Series {
                label: "mean".into(),
                points: vec![(1.0, 0.5), (2.0, 1.5), (3.0, f64::INFINITY)],
                band: Some(vec![(1.0, 0.4, 0.6), (2.0, 1.2, 1.8)]),
            }],
        };
        let svg = plot.render_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("inf"));
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn ticks_cover_range() {
        let a = Axis { lo: 0.13, hi: 2.2 };
        let t = a.ticks();
        assert_eq!(t.first().copied(), Some(0.5));
        assert!(t.iter().all(|v| *v >= 0.13 && *v <= 2.2));
        assert_eq!(tick_label(0.5), "0.5");
        assert_eq!(tick_label(2.0), "2");
    }

    #[test]
    fn empty_plot_is_valid() {
        let svg = Plot::default().render_svg();
        assert!(svg.contains("</svg>"));
    }
}
