use super::{least_squares_xy, Contact, CounterexampleModel, PathPoint};
use crate::engine::{solve_cycle_grid, CycleOptions, EpsilonCycle, GridMode};
use crate::error::Result;
use crate::point::Point;

/// Horizontal cycles must keep all six points within this z-spread.
pub const PLANAR_TOL: f64 = 1e-8;

/// Contacts at `s = 0.25` and `0.75` sit at height `+-0.5`.
pub const WITNESS_HEIGHT: f64 = 0.5;
pub const WITNESS_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub cycle: EpsilonCycle,
    pub height: f64,
    pub z_spread: f64,
    pub planar: bool,
    /// Contact predicted by inverting eps(c), when eps is within reach.
    pub predicted: Option<Contact>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepEntry {
    pub epsilon: f64,
    pub outcome: Result<SweepOutcome>,
}

/// Solves the three-dimensional cycle at every eps. Failures are kept per
/// entry and do not stop the sweep.
pub fn epsilon_sweep(
    model: &CounterexampleModel,
    epsilons: &[f64],
    u_start: &Point,
    opts: &CycleOptions,
    mode: GridMode,
) -> Vec<SweepEntry> {
    solve_cycle_grid(model.sets3d(), u_start, epsilons, opts, mode)
        .into_iter()
        .zip(epsilons)
        .map(|(r, &epsilon)| SweepEntry {
            epsilon,
            outcome: r.map(|cycle| {
                let z_spread = cycle.z_spread();
                SweepOutcome {
                    height: cycle.height(),
                    z_spread,
                    planar: z_spread <= PLANAR_TOL,
                    predicted: model.invert_epsilon(epsilon).ok(),
                    cycle,
                }
            }),
        })
        .collect()
}

/// Contacts at `s = 0.25, 0.75` on segments `1..=k_max`, in decreasing eps.
pub fn contact_grid(model: &CounterexampleModel, k_max: usize) -> Result<Vec<PathPoint>> {
    let mut out = Vec::with_capacity(2 * k_max);
    for k in 1..=k_max {
        out.push(model.path_point(k, 0.25)?);
        out.push(model.path_point(k, 0.75)?);
    }
    Ok(out)
}

/// Heights of iterated cycles at the contact grid.
///
/// With `z(c) = (-1)^k (1 - 2s)`, the heights at fixed `s` must flip sign
/// from one segment to the next while keeping magnitude 0.5.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationWitness {
    pub contacts: Vec<PathPoint>,
    pub sweep: Vec<SweepEntry>,
    /// `None` where the solver failed or the cycle was not planar.
    pub heights: Vec<Option<f64>>,
    /// Sign changes between consecutive segments, summed over both `s`.
    pub alternations: usize,
    pub max_height_error: f64,
    pub holds: bool,
}

pub fn oscillation_witness(
    model: &CounterexampleModel,
    k_max: usize,
    u_start: &Point,
    opts: &CycleOptions,
    mode: GridMode,
) -> Result<OscillationWitness> {
    let contacts = contact_grid(model, k_max)?;
    let epsilons = contacts.iter().map(|c| model.epsilon_of_contact(c)).collect::<Result<Vec<_>>>()?;
    let sweep = epsilon_sweep(model, &epsilons, u_start, opts, mode);
    Ok(witness_from_sweep(contacts, sweep))
}

/// Evaluates the witness on a sweep already solved at the contact grid
/// epsilons, in [`contact_grid`] order.
pub fn witness_from_sweep(contacts: Vec<PathPoint>, sweep: Vec<SweepEntry>) -> OscillationWitness {
    let heights: Vec<Option<f64>> =
        sweep.iter().map(|e| e.outcome.as_ref().ok().filter(|o| o.planar).map(|o| o.height)).collect();

    let mut alternations = 0;
    let mut all_alternate = contacts.len() >= 4 && contacts.len() == sweep.len();
    let mut max_height_error = 0.0f64;
    for h in &heights {
        match h {
            Some(h) => max_height_error = max_height_error.max((h.abs() - WITNESS_HEIGHT).abs()),
            None => max_height_error = f64::INFINITY,
        }
    }
    for offset in 0..2 {
        let seq: Vec<Option<f64>> = heights.iter().skip(offset).step_by(2).copied().collect();
        for w in seq.windows(2) {
            match (w[0], w[1]) {
                (Some(x), Some(y)) if x * y < 0.0 => alternations += 1,
                _ => all_alternate = false,
            }
        }
    }
    let holds = all_alternate && max_height_error <= WITNESS_TOL;
    OscillationWitness { contacts, sweep, heights, alternations, max_height_error, holds }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OmegaSample {
    pub epsilon: f64,
    pub diameter: f64,
    /// Distance of the cycle's mean xy-point from `(0, 5/3)`.
    pub xy_distance: f64,
    pub height: f64,
}

/// Closed-form cycles along a grid, measuring how they shrink onto the
/// least-squares segment.
pub fn omega_limit(model: &CounterexampleModel, epsilons: &[f64]) -> Result<Vec<OmegaSample>> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let (_, c) = model.cycle_for_epsilon(epsilon)?;
            let mean = c.iterates.iter().fold(Point::zeros(2), |acc, u| acc + u.xy()) * (1.0 / 3.0);
            Ok(OmegaSample {
                epsilon,
                diameter: c.diameter(),
                xy_distance: mean.dist(&least_squares_xy()),
                height: c.height(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::AngleRule;

    #[test]
    fn witness_on_small_model() {
        let m = CounterexampleModel::build(6, &AngleRule::Default).unwrap();
        let w = oscillation_witness(&m, 4, &Point::new3(0.0, 0.0, 0.0), &CycleOptions::with_tol(1e-11), GridMode::WarmStart)
            .unwrap();
        assert!(w.holds, "{w:?}");
        assert_eq!(w.alternations, 6);
        assert!(w.sweep.windows(2).all(|p| p[1].epsilon < p[0].epsilon));
    }

    #[test]
    fn degenerate_model_has_no_witness() {
        let m = CounterexampleModel::build(2, &AngleRule::Default).unwrap();
        let w = oscillation_witness(&m, 0, &Point::new3(0.0, 0.0, 0.0), &CycleOptions::default(), GridMode::Parallel)
            .unwrap();
        assert!(!w.holds);
        assert_eq!(w.alternations, 0);
    }

    #[test]
    fn sweep_records_predictions() {
        let m = CounterexampleModel::build(12, &AngleRule::Default).unwrap();
        let sweep = epsilon_sweep(&m, &[1.0, 0.5], &Point::new3(1.0, 2.0, 0.0), &CycleOptions::default(), GridMode::WarmStart);
        for e in &sweep {
            let o = e.outcome.as_ref().unwrap();
            assert!(o.planar);
            let predicted = o.predicted.unwrap();
            assert!((predicted.height() - o.height).abs() < 1e-7);
        }
    }

    #[test]
    fn omega_limit_shrinks() {
        let m = CounterexampleModel::build(40, &AngleRule::Default).unwrap();
        let eps_min = m.eps_min().unwrap();
        let floor = 1.01 * eps_min;
        let grid: Vec<f64> = (0..30).map(|i| 0.9 * (floor / 0.9f64).powf(i as f64 / 29.0)).collect();
        let samples = omega_limit(&m, &grid).unwrap();
        for s in &samples {
            assert!(s.diameter <= 6.0 * s.epsilon, "{s:?}");
        }
        let last = samples.last().unwrap();
        assert!(last.xy_distance < 0.05, "{last:?}");
    }
}
