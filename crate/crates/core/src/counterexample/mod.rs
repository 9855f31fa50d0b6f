//! The three-set counterexample: two vertical segments over `a = (-2, 2)` and
//! `b = (2, 2)`, and the hull `C_3` of the zig-zag points
//! `p_k = (cos t_k, sin t_k, (-1)^k)`.
//!
//! Every epsilon-cycle of this system is horizontal, and its xy-shadow is the
//! cycle of `{a}`, `{b}` and `C'_3 = co{v_k}` with support `(a, b, c)`. The
//! contact point `c` walks along the arc as `eps` decreases while its height
//! `z(c)` follows the zig-zag, which is what makes the cycles oscillate.

mod contact;
mod sweep;

pub use contact::{Contact, PlateauBounds};
pub use sweep::{
    contact_grid, epsilon_sweep, omega_limit, oscillation_witness, witness_from_sweep, OmegaSample, OscillationWitness,
    SweepEntry, SweepOutcome,
};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::convex_sets::{write_sets, ConvexSet};
use crate::engine::SetSystem;
use crate::error::{Error, Result};
use crate::point::Point;

/// Angles `t_1 < t_2 < ... < t_K`.
#[derive(Clone, Debug, PartialEq)]
pub enum AngleRule {
    /// `t_k = pi/2 (1 - 1/(2k))`.
    Default,
    /// Explicit angles; the list length fixes the largest usable K.
    Custom(Vec<f64>),
}

impl AngleRule {
    pub fn angles(&self, k_count: usize) -> Result<Vec<f64>> {
        let t: Vec<f64> = match self {
            AngleRule::Default => (1..=k_count).map(|k| FRAC_PI_2 * (1.0 - 1.0 / (2.0 * k as f64))).collect(),
            AngleRule::Custom(list) => {
                if list.len() < k_count {
                    return Err(Error::InvalidAngles(format!("{} angles given, {k_count} needed", list.len())));
                }
                list[..k_count].to_vec()
            }
        };
        validate_angles(&t)?;
        Ok(t)
    }

    /// Whitespace- or comma-separated angles in radians; `#` starts a comment.
    pub fn parse_custom(text: &str) -> Result<Self> {
        let mut t = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
                let v = tok.parse::<f64>().map_err(|e| Error::Parse { line: n + 1, message: e.to_string() })?;
                t.push(v);
            }
        }
        validate_angles(&t)?;
        Ok(AngleRule::Custom(t))
    }
}

const ANGLE_TOL: f64 = 1e-12;

fn validate_angles(t: &[f64]) -> Result<()> {
    if t.len() < 2 {
        return Err(Error::InvalidAngles(format!("need at least 2 angles, got {}", t.len())));
    }
    if (t[0] - FRAC_PI_4).abs() > ANGLE_TOL {
        return Err(Error::InvalidAngles(format!("first angle must be pi/4, got {}", t[0])));
    }
    for w in t.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidAngles(format!("angles must increase strictly: {} then {}", w[0], w[1])));
        }
    }
    if let Some(&last) = t.last() {
        if !(last < FRAC_PI_2) {
            return Err(Error::InvalidAngles(format!("angles must stay below pi/2, got {last}")));
        }
    }
    Ok(())
}

/// How the infinite hull is cut down to finitely many generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Add the accumulation points `(0, 1, +-1)` (and `(0, 1)` in the plane).
    /// `C_3` then contains the segment `{(0, 1, z)}`, as the full closed hull does.
    LimitPoints,
    /// Keep exactly `p_1, ..., p_K`.
    Truncated,
}

pub fn point_a() -> Point {
    Point::new2(-2.0, 2.0)
}

pub fn point_b() -> Point {
    Point::new2(2.0, 2.0)
}

/// Limit of `v_k`.
pub fn v_infinity() -> Point {
    Point::new2(0.0, 1.0)
}

/// Least-squares point of the planar shadow.
pub fn least_squares_xy() -> Point {
    Point::new2(0.0, 5.0 / 3.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleModel {
    t: Vec<f64>,
    v: Vec<Point>,
    p: Vec<Point>,
    closure: Closure,
    sets3d: SetSystem,
    sets2d: SetSystem,
}

/// A point `c = (1 - s) v_k + s v_{k+1}` of the planar path with its height.
///
/// `k` is 1-based. Segments run over `k = 1..K-1` with `s` in `[0, 1)`; the
/// last vertex `v_K` is `k = K, s = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathPoint {
    pub k: usize,
    pub s: f64,
    pub point: Point,
    pub height: f64,
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 { 1.0 } else { -1.0 }
}

impl CounterexampleModel {
    pub const DEFAULT_K: usize = 40;

    pub fn build(k_count: usize, rule: &AngleRule) -> Result<Self> {
        Self::build_with(k_count, rule, Closure::LimitPoints)
    }

    pub fn build_with(k_count: usize, rule: &AngleRule, closure: Closure) -> Result<Self> {
        if k_count < 2 {
            return Err(Error::InvalidArgument(format!("K must be at least 2, got {k_count}")));
        }
        let t = rule.angles(k_count)?;
        let v: Vec<Point> = t.iter().map(|&tk| Point::new2(tk.cos(), tk.sin())).collect();
        let p: Vec<Point> = v.iter().enumerate().map(|(i, vk)| vk.with_z(sign(i + 1))).collect();
        let mut gens3 = p.clone();
        let mut gens2 = v.clone();
        if closure == Closure::LimitPoints {
            gens3.push(Point::new3(0.0, 1.0, 1.0));
            gens3.push(Point::new3(0.0, 1.0, -1.0));
            gens2.push(v_infinity());
        }
        let (a, b) = (point_a(), point_b());
        let sets3d = SetSystem::new(vec![
            ConvexSet::segment(a.with_z(1.0), a.with_z(-1.0))?,
            ConvexSet::segment(b.with_z(1.0), b.with_z(-1.0))?,
            ConvexSet::hull(gens3)?,
        ])?;
        let sets2d = SetSystem::new(vec![ConvexSet::point(a)?, ConvexSet::point(b)?, ConvexSet::hull(gens2)?])?;
        Ok(Self { t, v, p, closure, sets3d, sets2d })
    }

    pub fn k_count(&self) -> usize {
        self.v.len()
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn angles(&self) -> &[f64] {
        &self.t
    }

    /// `v_k`, 1-based.
    pub fn v(&self, k: usize) -> Point {
        self.v[k - 1]
    }

    /// `p_k`, 1-based.
    pub fn p(&self, k: usize) -> Point {
        self.p[k - 1]
    }

    pub fn sets3d(&self) -> &SetSystem {
        &self.sets3d
    }

    pub fn sets2d(&self) -> &SetSystem {
        &self.sets2d
    }

    /// Number of path segments `[v_k, v_{k+1}]`.
    pub fn segment_count(&self) -> usize {
        self.k_count() - 1
    }

    /// Unit direction `d_k` of segment k.
    pub fn direction(&self, k: usize) -> Point {
        let e = self.v(k + 1) - self.v(k);
        e * (1.0 / e.norm())
    }

    /// The three-dimensional system in the plain-text set format.
    pub fn describe(&self) -> String {
        write_sets(self.sets3d.sets())
    }

    pub fn path_point(&self, k: usize, s: f64) -> Result<PathPoint> {
        let kk = self.k_count();
        let valid = (1..kk).contains(&k) && (0.0..1.0).contains(&s) || (k == kk && s == 0.0);
        if !valid {
            return Err(Error::InvalidArgument(format!("no path point at segment {k}, parameter {s}")));
        }
        if s == 0.0 {
            return Ok(PathPoint { k, s, point: self.v(k), height: sign(k) });
        }
        let point = self.v(k).lerp(&self.v(k + 1), s);
        let height = (1.0 - s) * sign(k) + s * sign(k + 1);
        Ok(PathPoint { k, s, point, height })
    }

    pub fn vertex(&self, k: usize) -> Result<PathPoint> {
        self.path_point(k, 0.0)
    }

    /// Lifts a planar path point to the zig-zag path.
    pub fn lift(&self, c: &PathPoint) -> Point {
        c.point.with_z(c.height)
    }

    /// Locates a planar point on the path, within `tol`.
    pub fn locate(&self, c: &Point, tol: f64) -> Result<PathPoint> {
        if c.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: c.dim() });
        }
        let mut best = f64::INFINITY;
        for k in 1..self.k_count() {
            let (p, q) = (self.v(k), self.v(k + 1));
            let e = q - p;
            let s = ((*c - p).dot(&e) / e.norm_sq()).clamp(0.0, 1.0);
            let d = c.dist(&p.lerp(&q, s));
            if d <= tol {
                return if s >= 1.0 { self.path_point(k + 1, 0.0) } else { self.path_point(k, s) };
            }
            best = best.min(d);
        }
        Err(Error::NotOnPath { distance: best })
    }

    /// Lifts any planar point of the path, rejecting points off the path.
    pub fn lift_point(&self, c: &Point) -> Result<Point> {
        Ok(self.lift(&self.locate(c, 1e-9)?))
    }
}

/// Drops the z-coordinate of a point in R^3.
pub fn project_xy(u: &Point) -> Result<Point> {
    if u.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: u.dim() });
    }
    Ok(u.xy())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_sets::verify_projection;

    #[test]
    fn two_point_model_angles() {
        let m = CounterexampleModel::build(2, &AngleRule::Default).unwrap();
        assert_eq!(m.angles(), &[FRAC_PI_4, 3.0 * std::f64::consts::PI / 8.0]);
        assert!(m.v(1).dist(&Point::new2(0.7071068, 0.7071068)) < 1e-7);
        assert!(m.v(2).dist(&Point::new2(0.3826834, 0.9238795)) < 1e-7);
    }

    #[test]
    fn heights_alternate_and_project_to_arc() {
        let m = CounterexampleModel::build(9, &AngleRule::Default).unwrap();
        for k in 1..=9 {
            assert_eq!(m.p(k).z(), if k % 2 == 0 { 1.0 } else { -1.0 });
            assert_eq!(project_xy(&m.p(k)).unwrap(), m.v(k));
            assert_eq!(m.lift(&m.vertex(k).unwrap()), m.p(k));
        }
    }

    #[test]
    fn every_vertex_is_extreme() {
        // v_k is extreme iff some outward direction certifies it as the projection.
        let m = CounterexampleModel::build(40, &AngleRule::Default).unwrap();
        let hull = &m.sets2d().sets()[2];
        for k in 1..=40 {
            let u = m.v(k) * 1.5;
            assert!(verify_projection(hull, &u, &m.v(k)) <= 0.0, "v_{k} not certified");
            assert!(hull.project(&u).unwrap().point.dist(&m.v(k)) < 1e-12);
        }
    }

    #[test]
    fn midpoint_of_first_segment_has_zero_height() {
        let m = CounterexampleModel::build(4, &AngleRule::Default).unwrap();
        let c = m.path_point(1, 0.5).unwrap();
        assert_eq!(c.height, 0.0);
        assert!(c.point.dist(&((m.v(1) + m.v(2)) * 0.5)) < 1e-16);
    }

    #[test]
    fn locate_round_trip_and_rejection() {
        let m = CounterexampleModel::build(12, &AngleRule::Default).unwrap();
        let c = m.path_point(5, 0.3).unwrap();
        let back = m.locate(&c.point, 1e-12).unwrap();
        assert_eq!(back.k, 5);
        assert!((back.s - 0.3).abs() < 1e-12);
        assert!(matches!(m.lift_point(&Point::new2(0.0, 0.0)), Err(Error::NotOnPath { .. })));
        assert!(project_xy(&Point::new2(1.0, 1.0)).is_err());
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(CounterexampleModel::build(1, &AngleRule::Default).is_err());
        assert!(AngleRule::Custom(vec![0.7, 1.0]).angles(2).is_err());
        assert!(AngleRule::Custom(vec![FRAC_PI_4, 0.5]).angles(2).is_err());
        assert!(AngleRule::Custom(vec![FRAC_PI_4, FRAC_PI_2]).angles(2).is_err());
        assert!(AngleRule::Custom(vec![FRAC_PI_4, 1.0, 1.0]).angles(3).is_err());
        assert!(AngleRule::Custom(vec![FRAC_PI_4, 1.0]).angles(3).is_err());
    }

    #[test]
    fn parses_custom_angle_files() {
        let r = AngleRule::parse_custom("# angles\n0.7853981633974483, 1.0\n1.2 1.5\n").unwrap();
        let m = CounterexampleModel::build(4, &r).unwrap();
        assert_eq!(m.angles()[3], 1.5);
        assert!(AngleRule::parse_custom("0.78 x").is_err());
    }

    #[test]
    fn description_round_trips() {
        let m = CounterexampleModel::build(5, &AngleRule::Default).unwrap();
        let sets = crate::convex_sets::parse_sets(&m.describe()).unwrap();
        assert_eq!(sets, m.sets3d().sets());
    }

    #[test]
    fn truncated_hull_has_exactly_k_generators() {
        let m = CounterexampleModel::build_with(6, &AngleRule::Default, Closure::Truncated).unwrap();
        match &m.sets3d().sets()[2] {
            ConvexSet::Hull(h) => assert_eq!(h.generators(), &(1..=6).map(|k| m.p(k)).collect::<Vec<_>>()[..]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
