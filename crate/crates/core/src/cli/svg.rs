//! Minimal standalone SVG plots built from rect, polyline and text elements.
//! Coordinates are printed with fixed precision so output is byte-stable.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

/// Line colours cycled through by [`Plot::polyline`] callers.
pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub struct Plot {
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
    title: String,
    x_label: String,
    y_label: String,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Plot {
            x_range: widen(x_range),
            y_range: widen(y_range),
            body: String::new(),
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], color: &str, width: f64) {
        if points.is_empty() {
            return;
        }
        let mut pts = String::new();
        for &(x, y) in points {
            let _ = write!(pts, "{:.2},{:.2} ", self.px(x), self.py(y));
        }
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
            pts.trim_end()
        );
    }

    /// Filled rectangle spanning data coordinates [x0, x1] x [y0, y1].
    pub fn rect(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, fill: &str, stroke: Option<&str>) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (c, d) = (self.py(y1), self.py(y0));
        let stroke = stroke
            .map(|s| format!(r#" stroke="{s}" stroke-width="0.5""#))
            .unwrap_or_default();
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"{stroke}/>"#,
            a.min(b),
            c.min(d),
            (b - a).abs(),
            (d - c).abs()
        );
    }

    /// Small square marker centred on (x, y).
    pub fn marker(&mut self, x: f64, y: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{:.2}" y="{:.2}" width="4" height="4" fill="{color}"/>"#,
            self.px(x) - 2.0,
            self.py(y) - 2.0
        );
    }

    pub fn legend(&mut self, row: usize, label: &str, color: &str) {
        let y = TOP + 14.0 * row as f64 + 10.0;
        let x = WIDTH - RIGHT - 160.0;
        let _ = writeln!(
            self.body,
            r#"<rect x="{x:.2}" y="{:.2}" width="12" height="4" fill="{color}"/><text x="{:.2}" y="{y:.2}" font-size="11">{}</text>"#,
            y - 4.0,
            x + 16.0,
            escape(label)
        );
    }

    /// Heat map of `cells` (x centre, y centre, value) with cell size
    /// (dx, dy); values map linearly from `range` onto a blue-to-red ramp.
    pub fn heatmap(&mut self, cells: &[(f64, f64, f64)], dx: f64, dy: f64, range: (f64, f64)) {
        let span = if range.1 > range.0 { range.1 - range.0 } else { 1.0 };
        for &(x, y, v) in cells {
            let s = ((v - range.0) / span).clamp(0.0, 1.0);
            let fill = ramp(s);
            self.rect(x - 0.5 * dx, x + 0.5 * dx, y - 0.5 * dy, y + 0.5 * dy, &fill, None);
        }
    }

    fn axes(&self) -> String {
        let mut s = String::new();
        let (x0, x1) = (self.px(self.x_range.0), self.px(self.x_range.1));
        let (y0, y1) = (self.py(self.y_range.0), self.py(self.y_range.1));
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000"/>"##,
            x1 - x0,
            y0 - y1
        );
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let (px, py) = (self.px(xv), self.py(yv));
            let _ = writeln!(
                s,
                r##"<polyline stroke="#000" points="{px:.2},{y0:.2} {px:.2},{:.2}"/><text x="{px:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
                y0 + 5.0,
                y0 + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r##"<polyline stroke="#000" points="{x0:.2},{py:.2} {:.2},{py:.2}"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            0.5 * (x0 + x1),
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            escape(&self.y_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            0.5 * WIDTH,
            escape(&self.title)
        );
        s
    }

    pub fn render(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{}{}</svg>\n",
            self.body,
            self.axes()
        )
    }
}

fn ramp(s: f64) -> String {
    let r = (255.0 * s).round() as u8;
    let g = (255.0 * (1.0 - (2.0 * s - 1.0).abs()) * 0.8).round() as u8;
    let b = (255.0 * (1.0 - s)).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Range of the finite values in `v`.
pub fn extent(v: impl IntoIterator<Item = f64>) -> (f64, f64) {
    v.into_iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_deterministically() {
        let mut p = Plot::new("a < b", "x", "y", (0.0, 1.0), (0.0, 2.0));
        p.polyline(&[(0.0, 0.0), (1.0, 2.0)], PALETTE[0], 1.0);
        p.rect(0.2, 0.4, 0.0, 1.0, "#ccc", Some("#000"));
        let a = p.render();
        assert_eq!(a, p.render());
        assert!(a.starts_with("<svg"));
        assert!(a.contains("a &lt; b"));
        assert!(a.contains("<polyline"));
    }

    #[test]
    fn ticks_and_ramp() {
        assert_eq!(tick(-0.0001), "0");
        assert_eq!(tick(2.5), "2.5");
        assert_eq!(ramp(0.0), "#0000ff");
        assert_eq!(ramp(1.0), "#ff0000");
        assert_eq!(extent([1.0, f64::NAN, -2.0]), (-2.0, 1.0));
    }
}
