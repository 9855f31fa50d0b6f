//! Under-relaxed cyclic projections.
//!
//! One loop over a system `C_1, ..., C_m` replaces `u` by
//! `u + eps (P_i(u) - u)` for `i = 1..m` in order. An epsilon-cycle is an
//! m-tuple that one loop maps onto itself; its support is the tuple of
//! projections `w_i = P_i(u_{i-1})` (indices mod m) that realizes it.

mod cycle;
mod lambda;
mod least_squares;
mod support;

pub use cycle::{
    cycle_residual, loop_map_jacobian, solve_cycle, solve_cycle_grid, sweep, CycleOptions, EpsilonCycle, GridMode,
};
pub use lambda::{run_lambda_process, LoopSample, Schedule, ScheduleSegment, Trajectory};
pub use least_squares::{
    least_squares_gradient, least_squares_objective, least_squares_phi, solve_least_squares, LeastSquaresOptions,
};
pub use support::{contraction_denominator, iterates_from_support, support_of};

use crate::convex_sets::ConvexSet;
use crate::error::{Error, Result};
use crate::point::Point;

/// Ordered list of at least two convex sets in one ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct SetSystem {
    sets: Vec<ConvexSet>,
    dim: usize,
}

impl SetSystem {
    pub fn new(sets: Vec<ConvexSet>) -> Result<Self> {
        if sets.len() < 2 {
            return Err(Error::InvalidArgument(format!("a system needs at least 2 sets, got {}", sets.len())));
        }
        let dim = sets[0].dim();
        if let Some(s) = sets.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
        }
        Ok(Self { sets, dim })
    }

    pub fn sets(&self) -> &[ConvexSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn check_point(&self, u: &Point) -> Result<()> {
        if u.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.dim() });
        }
        if !u.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite point {u:?}")));
        }
        Ok(())
    }
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("relaxation must lie in (0, 1], got {eps}")))
    }
}

/// The planar system of Example 1 lifted to R^3: two vertical segments over
/// `(-2, 2)` and `(2, 2)` and the solid unit cylinder `|z| <= 1`.
pub fn example1_system() -> SetSystem {
    let c1 = ConvexSet::segment(Point::new3(-2.0, 2.0, 1.0), Point::new3(-2.0, 2.0, -1.0)).expect("valid segment");
    let c2 = ConvexSet::segment(Point::new3(2.0, 2.0, 1.0), Point::new3(2.0, 2.0, -1.0)).expect("valid segment");
    let c3 = ConvexSet::cylinder(1.0, 1.0).expect("valid cylinder");
    SetSystem::new(vec![c1, c2, c3]).expect("consistent dimensions")
}
