//! Closed convex sets with exact projections and a certificate checker.
//!
//! A point `w` in `C` is the projection of `u` exactly when
//! `<v - w, u - w> <= 0` for every `v` in `C`. For hulls and segments it is
//! enough to test the generators; for the cylinder the test runs over its two
//! rim circles, which carry all extreme points.

mod format;
mod wolfe;

use nalgebra::DMatrix;

pub use format::{parse_sets, write_sets};
pub use wolfe::project_hull_nearest_point;

use crate::error::{Error, Result};
use crate::point::Point;

/// Absolute tolerance for set membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Rim samples per cylinder face used by [`verify_projection`].
pub const CYLINDER_RIM_SAMPLES: usize = 360;

/// Certificate tolerance for projecting `u`: `1e-10 * (1 + |u|^2)`.
pub fn projection_tolerance(u: &Point) -> f64 {
    1e-10 * (1.0 + u.norm_sq())
}

/// Identifies the piece of the set on which a projection landed.
///
/// For hulls these are the generator indices carrying positive weight. For
/// segments `{0}`, `{1}` and `{0, 1}` mean "at p", "at q" and "interior". For
/// the cylinder the members are flags: 0 radial clamp, 1 top clamp, 2 bottom
/// clamp.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Face {
    members: [u32; 4],
    len: u8,
}

impl Face {
    pub fn members(&self) -> &[u32] {
        &self.members[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn push(&mut self, m: u32) {
        self.members[self.len as usize] = m;
        self.len += 1;
    }

    fn of(ms: &[u32]) -> Face {
        let mut f = Face::default();
        for &m in ms {
            f.push(m);
        }
        f
    }
}

/// Output of [`ConvexSet::project`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionResult {
    pub point: Point,
    /// `max(0, max_v <v - w, u - w>)` over the certificate points of the set.
    pub certificate_violation: f64,
    pub face: Face,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    p: Point,
    q: Point,
}

impl Segment {
    pub fn endpoints(&self) -> (Point, Point) {
        (self.p, self.q)
    }

    /// Index of the single varying coordinate, if the segment is axis aligned.
    fn axis(&self) -> Option<usize> {
        let d = self.q - self.p;
        let mut axis = None;
        for (i, c) in d.coords().iter().enumerate() {
            if *c != 0.0 {
                if axis.is_some() {
                    return None;
                }
                axis = Some(i);
            }
        }
        axis
    }

    fn project(&self, u: Point) -> (Point, Face) {
        if let Some(i) = self.axis() {
            // Clamp the varying coordinate; the others are copied from `p`, so
            // coordinates of `u` along the axis pass through bit for bit.
            let (lo, hi) = (self.p[i].min(self.q[i]), self.p[i].max(self.q[i]));
            let mut w = self.p;
            let c = u[i].clamp(lo, hi);
            w.set(i, c);
            let face = if c == self.p[i] {
                Face::of(&[0])
            } else if c == self.q[i] {
                Face::of(&[1])
            } else {
                Face::of(&[0, 1])
            };
            return (w, face);
        }
        let d = self.q - self.p;
        let t = (u - self.p).dot(&d) / d.norm_sq();
        if t <= 0.0 {
            (self.p, Face::of(&[0]))
        } else if t >= 1.0 {
            (self.q, Face::of(&[1]))
        } else {
            (self.p + d * t, Face::of(&[0, 1]))
        }
    }
}

/// Solid cylinder `x^2 + y^2 <= r^2, |z| <= h` around the z-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Cylinder {
    radius: f64,
    half_height: f64,
}

impl Cylinder {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn half_height(&self) -> f64 {
        self.half_height
    }

    fn project(&self, u: Point) -> (Point, Face) {
        let mut face = Face::default();
        let rho = u.x().hypot(u.y());
        let (x, y) = if rho > self.radius {
            face.push(0);
            let s = self.radius / rho;
            (u.x() * s, u.y() * s)
        } else {
            (u.x(), u.y())
        };
        let z = if u.z() > self.half_height {
            face.push(1);
            self.half_height
        } else if u.z() < -self.half_height {
            face.push(2);
            -self.half_height
        } else {
            u.z()
        };
        (Point::new3(x, y, z), face)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    generators: Vec<Point>,
}

impl Hull {
    pub fn generators(&self) -> &[Point] {
        &self.generators
    }
}

/// A closed convex set in R^2 or R^3.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexSet {
    Point(Point),
    Segment(Segment),
    Cylinder(Cylinder),
    Hull(Hull),
}

impl ConvexSet {
    pub fn point(p: Point) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidSet(format!("non-finite point {p:?}")));
        }
        Ok(ConvexSet::Point(p))
    }

    pub fn segment(p: Point, q: Point) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
        }
        if !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidSet("non-finite segment endpoint".into()));
        }
        if p == q {
            return Err(Error::InvalidSet("segment endpoints must be distinct".into()));
        }
        Ok(ConvexSet::Segment(Segment { p, q }))
    }

    pub fn cylinder(radius: f64, half_height: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite() && half_height > 0.0 && half_height.is_finite()) {
            return Err(Error::InvalidSet(format!(
                "cylinder needs positive finite radius and half-height, got r={radius}, h={half_height}"
            )));
        }
        Ok(ConvexSet::Cylinder(Cylinder { radius, half_height }))
    }

    pub fn hull(generators: Vec<Point>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidSet("hull needs at least one generator".into()));
        };
        let dim = first.dim();
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
            if !g.is_finite() {
                return Err(Error::InvalidSet(format!("non-finite generator {g:?}")));
            }
        }
        Ok(ConvexSet::Hull(Hull { generators }))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Point(p) => p.dim(),
            ConvexSet::Segment(s) => s.p.dim(),
            ConvexSet::Cylinder(_) => 3,
            ConvexSet::Hull(h) => h.generators[0].dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexSet::Point(_) => "point",
            ConvexSet::Segment(_) => "segment",
            ConvexSet::Cylinder(_) => "cylinder",
            ConvexSet::Hull(_) => "hull",
        }
    }

    /// Euclidean projection of `u` onto the set.
    ///
    /// Points, segments and the cylinder use closed forms. Hulls run Wolfe's
    /// algorithm and fail if the certificate cannot be brought below
    /// [`projection_tolerance`].
    pub fn project(&self, u: &Point) -> Result<ProjectionResult> {
        let u = *u;
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        let (point, face) = match self {
            ConvexSet::Point(p) => (*p, Face::of(&[0])),
            ConvexSet::Segment(s) => s.project(u),
            ConvexSet::Cylinder(c) => c.project(u),
            ConvexSet::Hull(h) => {
                return project_hull_nearest_point(&h.generators, u, projection_tolerance(&u));
            }
        };
        let certificate_violation = verify_projection(self, &u, &point).max(0.0);
        Ok(ProjectionResult { point, certificate_violation, face })
    }

    /// Projection without the certificate evaluation; used in hot loops.
    pub(crate) fn project_fast(&self, u: &Point) -> Result<(Point, Face)> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        Ok(match self {
            ConvexSet::Point(p) => (*p, Face::of(&[0])),
            ConvexSet::Segment(s) => s.project(*u),
            ConvexSet::Cylinder(c) => c.project(*u),
            ConvexSet::Hull(h) => {
                let r = project_hull_nearest_point(&h.generators, *u, projection_tolerance(u))?;
                (r.point, r.face)
            }
        })
    }

    /// Distance from `u` to the set.
    pub fn distance(&self, u: &Point) -> Result<f64> {
        Ok(self.project_fast(u)?.0.dist(u))
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        match self {
            ConvexSet::Cylinder(c) => x.x().hypot(x.y()) <= c.radius + tol && x.z().abs() <= c.half_height + tol,
            _ => self.distance(x).map(|d| d <= tol).unwrap_or(false),
        }
    }

    /// Points whose certificate inequalities characterize projections.
    ///
    /// For the cylinder this is a finite rim sample and therefore only an
    /// approximation; [`verify_projection`] adds the exact maximizer.
    pub fn certificate_points(&self) -> Vec<Point> {
        match self {
            ConvexSet::Point(p) => vec![*p],
            ConvexSet::Segment(s) => vec![s.p, s.q],
            ConvexSet::Hull(h) => h.generators.clone(),
            ConvexSet::Cylinder(c) => rim_samples(c, CYLINDER_RIM_SAMPLES),
        }
    }

    /// Jacobian of the projection at `u`, given the piece `face` it landed on.
    ///
    /// The projection is piecewise smooth; off the piece boundaries this is its
    /// derivative. On hull faces and segment interiors it is the orthogonal
    /// projector onto the face directions.
    pub fn projection_jacobian(&self, u: &Point, face: &Face) -> DMatrix<f64> {
        let n = self.dim();
        match self {
            ConvexSet::Point(_) => DMatrix::zeros(n, n),
            ConvexSet::Segment(s) => {
                if face.len() == 2 {
                    let d = (s.q - s.p).to_dvector();
                    let dd = d.norm_squared();
                    &d * d.transpose() / dd
                } else {
                    DMatrix::zeros(n, n)
                }
            }
            ConvexSet::Cylinder(c) => {
                let mut j = DMatrix::identity(3, 3);
                let m = face.members();
                if m.contains(&0) {
                    let rho = u.x().hypot(u.y());
                    let (hx, hy) = (u.x() / rho, u.y() / rho);
                    let s = c.radius / rho;
                    j[(0, 0)] = s * (1.0 - hx * hx);
                    j[(0, 1)] = -s * hx * hy;
                    j[(1, 0)] = -s * hx * hy;
                    j[(1, 1)] = s * (1.0 - hy * hy);
                }
                if m.contains(&1) || m.contains(&2) {
                    j[(2, 2)] = 0.0;
                }
                j
            }
            ConvexSet::Hull(h) => {
                let ms = face.members();
                if ms.len() > n {
                    return DMatrix::identity(n, n);
                }
                let base = h.generators[ms[0] as usize];
                let mut basis: Vec<Point> = Vec::with_capacity(ms.len());
                for &m in &ms[1..] {
                    let mut b = h.generators[m as usize] - base;
                    for q in &basis {
                        b = b - *q * q.dot(&b);
                    }
                    let nb = b.norm();
                    if nb > 1e-14 {
                        basis.push(b * (1.0 / nb));
                    }
                }
                let mut j = DMatrix::zeros(n, n);
                for q in basis {
                    let v = q.to_dvector();
                    j += &v * v.transpose();
                }
                j
            }
        }
    }
}

fn rim_samples(c: &Cylinder, per_face: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(2 * per_face);
    for i in 0..per_face {
        let theta = std::f64::consts::TAU * i as f64 / per_face as f64;
        let (s, co) = theta.sin_cos();
        for z in [c.half_height, -c.half_height] {
            out.push(Point::new3(c.radius * co, c.radius * s, z));
        }
    }
    out
}

/// `max_v <v - w, u - w>` over the certificate points of `set`.
///
/// A value `<= 0` (up to round-off) certifies `w = Proj_C(u)` when `w` is in
/// `C`. For the cylinder the rim grid is augmented with the exact support
/// point in direction `u - w`, so the returned value is the true maximum.
pub fn verify_projection(set: &ConvexSet, u: &Point, w: &Point) -> f64 {
    let n = *u - *w;
    let value = |v: &Point| (*v - *w).dot(&n);
    match set {
        ConvexSet::Point(p) => value(p),
        ConvexSet::Segment(s) => value(&s.p).max(value(&s.q)),
        ConvexSet::Hull(h) => h.generators.iter().map(value).fold(f64::NEG_INFINITY, f64::max),
        ConvexSet::Cylinder(c) => {
            let grid = rim_samples(c, CYLINDER_RIM_SAMPLES)
                .iter()
                .map(value)
                .fold(f64::NEG_INFINITY, f64::max);
            let rho = n.x().hypot(n.y());
            let (ex, ey) = if rho > 0.0 { (n.x() / rho, n.y() / rho) } else { (1.0, 0.0) };
            let ez = if n.z() >= 0.0 { c.half_height } else { -c.half_height };
            let support = Point::new3(c.radius * ex, c.radius * ey, ez);
            grid.max(value(&support))
        }
    }
}
