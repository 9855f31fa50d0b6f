//! Plain-text key/value description of set lists.
//!
//! ```text
//! # comment
//! [set]
//! kind = segment
//! p = -2.0000000000000000e0 2.0000000000000000e0 1.0000000000000000e0
//! q = -2.0000000000000000e0 2.0000000000000000e0 -1.0000000000000000e0
//!
//! [set]
//! kind = hull
//! generator = 7.0710678118654757e-1 7.0710678118654746e-1 -1.0000000000000000e0
//! generator = ...
//! ```
//!
//! Numbers are written with 17 significant digits so that parsing restores
//! every coordinate exactly.

use std::fmt::Write as _;

use crate::convex_sets::ConvexSet;
use crate::error::{Error, Result};
use crate::point::Point;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn coords(p: &Point) -> String {
    p.coords().iter().map(|c| num(*c)).collect::<Vec<_>>().join(" ")
}

pub fn write_sets(sets: &[ConvexSet]) -> String {
    let mut out = String::new();
    for (i, set) in sets.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("[set]\n");
        let _ = writeln!(out, "kind = {}", set.kind());
        match set {
            ConvexSet::Point(p) => {
                let _ = writeln!(out, "p = {}", coords(p));
            }
            ConvexSet::Segment(s) => {
                let (p, q) = s.endpoints();
                let _ = writeln!(out, "p = {}", coords(&p));
                let _ = writeln!(out, "q = {}", coords(&q));
            }
            ConvexSet::Cylinder(c) => {
                let _ = writeln!(out, "radius = {}", num(c.radius()));
                let _ = writeln!(out, "half_height = {}", num(c.half_height()));
            }
            ConvexSet::Hull(h) => {
                for g in h.generators() {
                    let _ = writeln!(out, "generator = {}", coords(g));
                }
            }
        }
    }
    out
}

#[derive(Default)]
struct Pending {
    line: usize,
    kind: Option<String>,
    p: Option<Point>,
    q: Option<Point>,
    radius: Option<f64>,
    half_height: Option<f64>,
    generators: Vec<Point>,
}

impl Pending {
    fn finish(self) -> Result<ConvexSet> {
        let err = |message: String| Error::Parse { line: self.line, message };
        let missing = |key: &str| err(format!("missing key `{key}`"));
        match self.kind.as_deref() {
            Some("point") => ConvexSet::point(self.p.ok_or_else(|| missing("p"))?),
            Some("segment") => ConvexSet::segment(self.p.ok_or_else(|| missing("p"))?, self.q.ok_or_else(|| missing("q"))?),
            Some("cylinder") => ConvexSet::cylinder(
                self.radius.ok_or_else(|| missing("radius"))?,
                self.half_height.ok_or_else(|| missing("half_height"))?,
            ),
            Some("hull") => ConvexSet::hull(self.generators),
            Some(other) => Err(err(format!("unknown set kind `{other}`"))),
            None => Err(missing("kind")),
        }
    }
}

fn parse_point(value: &str, line: usize) -> Result<Point> {
    let vals: std::result::Result<Vec<f64>, _> = value.split_whitespace().map(str::parse::<f64>).collect();
    let vals = vals.map_err(|e| Error::Parse { line, message: e.to_string() })?;
    Point::from_slice(&vals).map_err(|e| Error::Parse { line, message: e.to_string() })
}

fn parse_scalar(value: &str, line: usize) -> Result<f64> {
    value.trim().parse::<f64>().map_err(|e| Error::Parse { line, message: e.to_string() })
}

pub fn parse_sets(text: &str) -> Result<Vec<ConvexSet>> {
    let mut sets = Vec::new();
    let mut cur: Option<Pending> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if l == "[set]" {
            if let Some(p) = cur.take() {
                sets.push(p.finish()?);
            }
            cur = Some(Pending { line, ..Default::default() });
            continue;
        }
        let Some((key, value)) = l.split_once('=') else {
            return Err(Error::Parse { line, message: format!("expected `key = value`, got `{l}`") });
        };
        let Some(p) = cur.as_mut() else {
            return Err(Error::Parse { line, message: "key outside of a [set] block".into() });
        };
        let value = value.trim();
        match key.trim() {
            "kind" => p.kind = Some(value.to_string()),
            "p" => p.p = Some(parse_point(value, line)?),
            "q" => p.q = Some(parse_point(value, line)?),
            "radius" => p.radius = Some(parse_scalar(value, line)?),
            "half_height" => p.half_height = Some(parse_scalar(value, line)?),
            "generator" => p.generators.push(parse_point(value, line)?),
            other => return Err(Error::Parse { line, message: format!("unknown key `{other}`") }),
        }
    }
    if let Some(p) = cur.take() {
        sets.push(p.finish()?);
    }
    Ok(sets)
}
