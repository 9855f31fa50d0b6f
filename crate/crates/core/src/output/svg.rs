use std::fmt::Write;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;

enum Shape {
    Polyline { pts: Vec<(f64, f64)>, stroke: String },
    Polygon { pts: Vec<(f64, f64)>, stroke: String, fill: String },
    Circle { c: (f64, f64), r_px: f64, fill: String },
    Label { at: (f64, f64), text: String },
}

/// Plot in data coordinates, autoscaled into a fixed 800x600 viewport.
pub struct SvgPlot {
    title: String,
    x_label: String,
    y_label: String,
    shapes: Vec<Shape>,
    equal_aspect: bool,
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
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

struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.sx, HEIGHT - MARGIN - (y - self.y0) * self.sy)
    }
}

impl SvgPlot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            shapes: Vec::new(),
            equal_aspect: false,
        }
    }

    /// Same scale on both axes, for geometric pictures.
    pub fn equal_aspect(mut self) -> Self {
        self.equal_aspect = true;
        self
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str) {
        let pts = pts.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
        self.shapes.push(Shape::Polyline { pts, stroke: stroke.into() });
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], stroke: &str, fill: &str) {
        let pts = pts.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
        self.shapes.push(Shape::Polygon { pts, stroke: stroke.into(), fill: fill.into() });
    }

    /// Marker of fixed pixel radius.
    pub fn circle(&mut self, c: (f64, f64), r_px: f64, fill: &str) {
        if c.0.is_finite() && c.1.is_finite() {
            self.shapes.push(Shape::Circle { c, r_px, fill: fill.into() });
        }
    }

    pub fn label(&mut self, at: (f64, f64), text: &str) {
        if at.0.is_finite() && at.1.is_finite() {
            self.shapes.push(Shape::Label { at, text: text.into() });
        }
    }

    fn frame(&self) -> Frame {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |(x, y): (f64, f64)| {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        };
        for s in &self.shapes {
            match s {
                Shape::Polyline { pts, .. } | Shape::Polygon { pts, .. } => pts.iter().copied().for_each(&mut add),
                Shape::Circle { c, .. } => add(*c),
                Shape::Label { at, .. } => add(*at),
            }
        }
        if !lo.0.is_finite() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let pad = |a: f64, b: f64| if b - a > 0.0 { (a, b) } else { (a - 0.5, b + 0.5) };
        let (x0, x1) = pad(lo.0, hi.0);
        let (y0, y1) = pad(lo.1, hi.1);
        let (w, h) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
        let (mut sx, mut sy) = (w / (x1 - x0), h / (y1 - y0));
        if self.equal_aspect {
            let s = sx.min(sy);
            sx = s;
            sy = s;
        }
        Frame { x0, y0, sx, sy }
    }

    pub fn render(&self) -> String {
        let f = self.frame();
        let mut out = String::new();
        let pts_attr = |pts: &[(f64, f64)]| {
            pts.iter()
                .map(|&p| {
                    let (x, y) = f.map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        // Writing to a String cannot fail.
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
            WIDTH - 2.0 * MARGIN,
            HEIGHT - 2.0 * MARGIN
        );
        for s in &self.shapes {
            let _ = match s {
                Shape::Polygon { pts, stroke, fill } => writeln!(
                    out,
                    r#"<polygon points="{}" stroke="{}" fill="{}" fill-opacity="0.3"/>"#,
                    pts_attr(pts),
                    escape(stroke),
                    escape(fill)
                ),
                Shape::Polyline { pts, stroke } => writeln!(
                    out,
                    r#"<polyline points="{}" stroke="{}" fill="none" stroke-width="1"/>"#,
                    pts_attr(pts),
                    escape(stroke)
                ),
                Shape::Circle { c, r_px, fill } => {
                    let (x, y) = f.map(*c);
                    writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r_px}" fill="{}"/>"#, escape(fill))
                }
                Shape::Label { at, text } => {
                    let (x, y) = f.map(*at);
                    writeln!(out, r#"<text x="{x:.2}" y="{y:.2}" font-size="12">{}</text>"#, escape(text))
                }
            };
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="30" font-size="16" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="15" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        out.push_str("</svg>\n");
        out
    }
}
