use super::{point_a, point_b, v_infinity, Closure, CounterexampleModel, PathPoint};
use crate::engine::{check_epsilon, cycle_residual, iterates_from_support, EpsilonCycle};
use crate::error::{Error, Result};
use crate::point::Point;

/// Where the third support point sits for a given relaxation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contact {
    /// Strictly decreasing branch: `c` moves along segment `k`.
    Path(PathPoint),
    /// The contact sticks at the vertex `v_k` for a whole interval of eps.
    Plateau(PathPoint),
}

impl Contact {
    pub fn point(&self) -> &PathPoint {
        match self {
            Contact::Path(c) | Contact::Plateau(c) => c,
        }
    }

    pub fn height(&self) -> f64 {
        self.point().height
    }

    pub fn is_plateau(&self) -> bool {
        matches!(self, Contact::Plateau(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Contact::Path(_) => "path",
            Contact::Plateau(_) => "plateau",
        }
    }
}

/// The eps-interval `(lower, upper]` on which the contact stays at `v_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateauBounds {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
}

impl PlateauBounds {
    pub fn contains(&self, eps: f64) -> bool {
        eps > self.lower && eps <= self.upper
    }
}

/// `1 + <b - c, d> / <a - c, d>`, after checking the signs that make it a
/// relaxation in `(0, 1)`.
fn epsilon_along(c: &Point, d: &Point) -> Result<f64> {
    let alpha = (point_a() - *c).dot(d);
    let beta = (point_b() - *c).dot(d);
    if !(alpha > 0.0) {
        return Err(Error::ContactGeometry(format!("alpha = {alpha:e} is not positive")));
    }
    if !(beta < 0.0) {
        return Err(Error::ContactGeometry(format!("beta = {beta:e} is not negative")));
    }
    if !(alpha + beta > 0.0) {
        return Err(Error::ContactGeometry(format!("alpha + beta = {:e} is not positive", alpha + beta)));
    }
    Ok(1.0 + beta / alpha)
}

const BISECTION_STEPS: usize = 80;

impl CounterexampleModel {
    /// Direction of the hull edge leaving `v_k` towards larger angles.
    fn leaving_direction(&self, k: usize) -> Result<Point> {
        if k < self.k_count() {
            return Ok(self.direction(k));
        }
        match self.closure() {
            Closure::LimitPoints => {
                let e = v_infinity() - self.v(k);
                Ok(e * (1.0 / e.norm()))
            }
            Closure::Truncated => Err(Error::ContactGeometry(format!(
                "the truncated hull has no edge leaving v_{k} towards the axis"
            ))),
        }
    }

    /// Relaxation whose cycle has its third support point at `c`.
    pub fn epsilon_of_contact(&self, c: &PathPoint) -> Result<f64> {
        epsilon_along(&c.point, &self.leaving_direction(c.k)?)
    }

    /// Value of the segment-k formula at the segment's far end, `v_{k+1}`.
    ///
    /// This is the supremum of eps over the half-open segment and the upper
    /// end of the plateau at `v_{k+1}`.
    pub fn segment_end_epsilon(&self, k: usize) -> Result<f64> {
        if !(1..self.k_count()).contains(&k) {
            return Err(Error::InvalidArgument(format!("no segment {k}")));
        }
        epsilon_along(&self.v(k + 1), &self.direction(k))
    }

    pub fn plateau(&self, k: usize) -> Result<PlateauBounds> {
        if !(1..=self.k_count()).contains(&k) {
            return Err(Error::InvalidArgument(format!("no vertex {k}")));
        }
        let upper = if k == 1 { 1.0 } else { self.segment_end_epsilon(k - 1)? };
        let lower = match (k == self.k_count(), self.closure()) {
            (true, Closure::Truncated) => 0.0,
            _ => epsilon_along(&self.v(k), &self.leaving_direction(k)?)?,
        };
        Ok(PlateauBounds { k, lower, upper })
    }

    /// Smallest relaxation whose cycle is represented by the truncated model.
    pub fn eps_min(&self) -> Result<f64> {
        Ok(self.plateau(self.k_count())?.lower)
    }

    /// Contact point of the unique eps-cycle, found by bisection on the
    /// segment whose eps-range holds `eps`, or the vertex whose plateau does.
    pub fn invert_epsilon(&self, eps: f64) -> Result<Contact> {
        check_epsilon(eps)?;
        for k in 1..=self.k_count() {
            let plateau = self.plateau(k)?;
            if plateau.contains(eps) {
                return Ok(Contact::Plateau(self.vertex(k)?));
            }
            if k == self.k_count() {
                break;
            }
            let far = self.segment_end_epsilon(k)?;
            if eps <= plateau.lower && eps > far {
                let d = self.direction(k);
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..BISECTION_STEPS {
                    let mid = 0.5 * (lo + hi);
                    let c = self.v(k).lerp(&self.v(k + 1), mid);
                    if epsilon_along(&c, &d)? >= eps {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(Contact::Path(self.path_point(k, lo)?));
            }
        }
        Err(Error::BelowTruncationReach { epsilon: eps, reach: self.eps_min()?, k: self.k_count() })
    }

    /// Closed-form cycle with support `(a, b, c)` lifted to height `z(c)`.
    pub fn cycle_at(&self, c: &PathPoint, eps: f64) -> Result<EpsilonCycle> {
        check_epsilon(eps)?;
        let z = c.height;
        let support = vec![point_a().with_z(z), point_b().with_z(z), c.point.with_z(z)];
        let iterates = iterates_from_support(&support, eps)?;
        let (residual, _) = cycle_residual(self.sets3d(), &iterates, eps)?;
        Ok(EpsilonCycle { epsilon: eps, iterates, support, residual, loops: 0 })
    }

    /// The cycle whose contact point is `c`, at relaxation `eps(c)`.
    pub fn cycle_from_contact(&self, c: &PathPoint) -> Result<EpsilonCycle> {
        self.cycle_at(c, self.epsilon_of_contact(c)?)
    }

    /// Closed-form cycle for any reachable relaxation.
    pub fn cycle_for_epsilon(&self, eps: f64) -> Result<(Contact, EpsilonCycle)> {
        let contact = self.invert_epsilon(eps)?;
        let cycle = self.cycle_at(contact.point(), eps)?;
        Ok((contact, cycle))
    }
}
