use log::debug;
use nalgebra::{DMatrix, SVD};
use rayon::prelude::*;

use super::{check_epsilon, SetSystem};
use crate::error::{Error, Result};
use crate::point::Point;

/// An m-tuple of iterates with its support and closing residual.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonCycle {
    pub epsilon: f64,
    /// `u_1, ..., u_m`.
    pub iterates: Vec<Point>,
    /// `w_i = P_i(u_{i-1})`, with `u_0 = u_m`.
    pub support: Vec<Point>,
    /// `max_i |u_i - ((1 - eps) u_{i-1} + eps w_i)|`.
    pub residual: f64,
    /// Sweeps performed by the solver; zero for closed-form cycles.
    pub loops: u64,
}

impl EpsilonCycle {
    /// Largest pairwise distance between iterates.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for (i, a) in self.iterates.iter().enumerate() {
            for b in &self.iterates[i + 1..] {
                d = d.max(a.dist(b));
            }
        }
        d
    }

    /// Spread of the z-coordinates over iterates and support points.
    pub fn z_spread(&self) -> f64 {
        let zs = self.iterates.iter().chain(&self.support).map(Point::z);
        let (lo, hi) = zs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z), hi.max(z)));
        hi - lo
    }

    /// Mean height of the iterates and support points.
    pub fn height(&self) -> f64 {
        let n = (self.iterates.len() + self.support.len()) as f64;
        self.iterates.iter().chain(&self.support).map(Point::z).sum::<f64>() / n
    }

    /// Max-norm distance between corresponding iterates of two cycles.
    pub fn max_iterate_diff(&self, other: &EpsilonCycle) -> f64 {
        self.iterates
            .iter()
            .zip(&other.iterates)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleOptions {
    /// Stop once a loop moves the iterate by at most `tol * eps`.
    pub tol: f64,
    pub max_loops: u64,
    /// Loops between progress checks (and Newton polishing attempts).
    pub check_every: u64,
    /// Try Newton steps on the loop map at each progress check.
    pub polish: bool,
}

impl Default for CycleOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_loops: 10_000_000, check_every: 1_000, polish: true }
    }
}

impl CycleOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

fn step(system: &SetSystem, i: usize, u: Point, eps: f64) -> Result<Point> {
    let (w, _) = system.sets()[i].project_fast(&u)?;
    Ok(u + (w - u) * eps)
}

/// One full loop from `u`, writing the intra-loop iterates into `out`.
fn sweep_into(system: &SetSystem, u: Point, eps: f64, out: &mut [Point]) -> Result<Point> {
    let mut cur = u;
    for (i, slot) in out.iter_mut().enumerate() {
        cur = step(system, i, cur, eps)?;
        *slot = cur;
    }
    Ok(cur)
}

/// Performs one loop `u_{km+1}, ..., u_{km+m}` starting from `u_start`.
///
/// Returns the final point together with all m intra-loop iterates.
pub fn sweep(system: &SetSystem, u_start: &Point, eps: f64) -> Result<(Point, Vec<Point>)> {
    check_epsilon(eps)?;
    system.check_point(u_start)?;
    let mut out = vec![*u_start; system.len()];
    let end = sweep_into(system, *u_start, eps, &mut out)?;
    Ok((end, out))
}

/// Support of `iterates` and the closing residual of the cycle equations.
pub fn cycle_residual(system: &SetSystem, iterates: &[Point], eps: f64) -> Result<(f64, Vec<Point>)> {
    let m = system.len();
    if iterates.len() != m {
        return Err(Error::InvalidArgument(format!("expected {m} iterates, got {}", iterates.len())));
    }
    let mut support = Vec::with_capacity(m);
    let mut residual = 0.0f64;
    for i in 0..m {
        let prev = iterates[(i + m - 1) % m];
        let w = system.sets()[i].project_fast(&prev)?.0;
        let predicted = prev * (1.0 - eps) + w * eps;
        residual = residual.max(iterates[i].dist(&predicted));
        support.push(w);
    }
    Ok((residual, support))
}

/// The loop map `F(u)` and its Jacobian, composed from the projection
/// Jacobians of the pieces the iterates land on.
pub fn loop_map_jacobian(system: &SetSystem, u: &Point, eps: f64) -> Result<(Point, DMatrix<f64>)> {
    let n = system.dim();
    let mut jac = DMatrix::<f64>::identity(n, n);
    let mut cur = *u;
    for set in system.sets() {
        let (w, face) = set.project_fast(&cur)?;
        let a = DMatrix::<f64>::identity(n, n) * (1.0 - eps) + set.projection_jacobian(&cur, &face) * eps;
        jac = a * jac;
        cur = cur + (w - cur) * eps;
    }
    Ok((cur, jac))
}

const NEWTON_STEPS: usize = 8;
const MAX_FINAL_POLISHES: usize = 3;

/// Newton iteration on `F(u) - u = 0`, kept only while the loop displacement
/// shrinks. Singular directions (neutral families of cycles) are left alone by
/// the minimum-norm SVD solve.
fn newton_polish(system: &SetSystem, u: Point, eps: f64) -> Result<Option<(Point, f64)>> {
    let n = system.dim();
    let mut best = u;
    let (fu, _) = loop_map_jacobian(system, &u, eps)?;
    let start_disp = fu.dist(&u);
    let mut best_disp = start_disp;
    for _ in 0..NEWTON_STEPS {
        if best_disp == 0.0 {
            break;
        }
        let (fu, jac) = loop_map_jacobian(system, &best, eps)?;
        let g = (fu - best).to_dvector();
        let a = jac - DMatrix::<f64>::identity(n, n);
        let svd = SVD::new(a, true, true);
        let cutoff = 1e-15 * svd.singular_values.max();
        let Ok(delta) = svd.solve(&(-g), cutoff) else {
            break;
        };
        let cand = best + Point::from_dvector(&delta);
        if !cand.is_finite() {
            break;
        }
        let (fc, _) = loop_map_jacobian(system, &cand, eps)?;
        let disp = fc.dist(&cand);
        if !(disp < best_disp) {
            break;
        }
        best = cand;
        best_disp = disp;
    }
    Ok((best_disp < start_disp).then_some((best, best_disp)))
}

const DRIFT_RTOL: f64 = 0.05;
const DRIFT_DOUBLINGS: usize = 64;
const DRIFT_BISECTIONS: usize = 40;

/// On pieces where the loop map acts as a translation, consecutive loops
/// move the iterate by nearly the same vector `d`. Jumps to `u + T d` for the
/// largest `T` (found by doubling, then bisection) at which one loop still
/// moves by `d` up to a few percent, which is about where plain iteration
/// would arrive after `T` loops. The directions transverse to the drift
/// contract quickly, so the small mismatch is relaxed by the next loops.
fn extrapolate_drift(system: &SetSystem, u: Point, eps: f64, buf: &mut [Point]) -> Result<Option<Point>> {
    let d = sweep_into(system, u, eps, buf)? - u;
    let dn = d.norm();
    if dn == 0.0 {
        return Ok(None);
    }
    let mut same = |t: f64| -> Result<bool> {
        let p = u + d * t;
        if !p.is_finite() {
            return Ok(false);
        }
        let dp = sweep_into(system, p, eps, buf)? - p;
        Ok((dp - d).norm() <= DRIFT_RTOL * dn)
    };
    let mut good = 1.0;
    let mut bad = None;
    for _ in 0..DRIFT_DOUBLINGS {
        if same(2.0 * good)? {
            good *= 2.0;
        } else {
            bad = Some(2.0 * good);
            break;
        }
    }
    if let Some(mut bad) = bad {
        for _ in 0..DRIFT_BISECTIONS {
            let mid = 0.5 * (good + bad);
            if same(mid)? {
                good = mid;
            } else {
                bad = mid;
            }
        }
    }
    Ok((good > 1.0).then(|| u + d * good))
}

/// Alternates Newton steps and drift jumps until neither helps.
fn polish(system: &SetSystem, mut u: Point, eps: f64, target: f64, buf: &mut [Point]) -> Result<Point> {
    for _ in 0..4 {
        if let Some((p, d)) = newton_polish(system, u, eps)? {
            debug!("eps={eps}: newton step, displacement now {d:e}");
            u = p;
            if d <= target {
                break;
            }
        } else if let Some(p) = extrapolate_drift(system, u, eps, buf)? {
            debug!("eps={eps}: drift jump by {:e}", p.dist(&u));
            u = p;
        } else {
            break;
        }
    }
    Ok(u)
}

/// Iterates loops from `u_start` until the loop-to-loop displacement is at
/// most `tol * eps`, then returns the last loop as an [`EpsilonCycle`].
///
/// With `polish` enabled, every `check_every` loops the solver tries Newton
/// steps on the loop map, kept only if they lower the displacement, and jumps
/// along pieces where the loop map is a pure translation. Once the stopping
/// rule is met it also tries a Newton step, which matters where the map
/// contracts slowly. The stopping rule is still what certifies the result.
pub fn solve_cycle(system: &SetSystem, u_start: &Point, eps: f64, opts: &CycleOptions) -> Result<EpsilonCycle> {
    check_epsilon(eps)?;
    system.check_point(u_start)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let check_every = opts.check_every.max(1);
    let mut buf = vec![*u_start; system.len()];
    let mut cur = *u_start;
    let mut disp = f64::INFINITY;
    let mut final_polishes = 0;
    for loop_idx in 1..=opts.max_loops {
        let next = sweep_into(system, cur, eps, &mut buf)?;
        disp = next.dist(&cur);
        cur = next;
        if !disp.is_finite() {
            return Err(Error::InvalidArgument(format!("iteration diverged at loop {loop_idx}")));
        }
        if disp <= opts.tol * eps {
            // A small displacement can hide a large error along directions the
            // loop map barely contracts. A Newton step resolves those.
            if opts.polish && final_polishes < MAX_FINAL_POLISHES {
                final_polishes += 1;
                if let Some((p, d)) = newton_polish(system, cur, eps)? {
                    if d < 0.5 * disp {
                        debug!("eps={eps}: final newton step moved {:e}", p.dist(&cur));
                        cur = p;
                        continue;
                    }
                }
            }
            let (residual, support) = cycle_residual(system, &buf, eps)?;
            if residual <= opts.tol {
                return Ok(EpsilonCycle { epsilon: eps, iterates: buf, support, residual, loops: loop_idx });
            }
        }
        if loop_idx % check_every == 0 {
            debug!("eps={eps}: loop {loop_idx}, displacement {disp:e}");
            if opts.polish {
                let mut scratch = buf.clone();
                cur = polish(system, cur, eps, opts.tol * eps, &mut scratch)?;
            }
        }
    }
    Err(Error::MaxLoopsExceeded { loops: opts.max_loops, displacement: disp })
}

/// How [`solve_cycle_grid`] schedules its grid points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    /// Sequential; each solve starts from the previous cycle's last iterate.
    WarmStart,
    /// Independent solves from the same start, run concurrently.
    Parallel,
}

/// Solves for the cycle at every relaxation in `epsilons`.
///
/// Failures are recorded per point; the sweep always covers the full grid.
pub fn solve_cycle_grid(
    system: &SetSystem,
    u_start: &Point,
    epsilons: &[f64],
    opts: &CycleOptions,
    mode: GridMode,
) -> Vec<Result<EpsilonCycle>> {
    match mode {
        GridMode::Parallel => epsilons.par_iter().map(|&e| solve_cycle(system, u_start, e, opts)).collect(),
        GridMode::WarmStart => {
            let mut start = *u_start;
            epsilons
                .iter()
                .map(|&e| {
                    let r = solve_cycle(system, &start, e, opts);
                    if let Ok(c) = &r {
                        start = *c.iterates.last().expect("nonempty cycle");
                    }
                    r
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_sets::ConvexSet;
    use crate::engine::example1_system;

    fn singletons() -> SetSystem {
        SetSystem::new(vec![
            ConvexSet::point(Point::new2(-2.0, 2.0)).unwrap(),
            ConvexSet::point(Point::new2(2.0, 2.0)).unwrap(),
        ])
        .unwrap()
    }

    fn crossing_segments() -> SetSystem {
        SetSystem::new(vec![
            ConvexSet::segment(Point::new2(-1.0, -1.0), Point::new2(1.0, 1.0)).unwrap(),
            ConvexSet::segment(Point::new2(-1.0, 1.0), Point::new2(1.0, -1.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn common_point_is_fixed() {
        let sys = crossing_segments();
        let p = Point::new2(0.0, 0.0);
        for eps in [0.1, 0.5, 1.0] {
            let (end, its) = sweep(&sys, &p, eps).unwrap();
            assert_eq!(end, p);
            assert!(its.iter().all(|q| *q == p));
        }
    }

    #[test]
    fn unrelaxed_singletons_alternate() {
        let sys = singletons();
        let (end, its) = sweep(&sys, &Point::new2(10.0, -3.0), 1.0).unwrap();
        assert_eq!(its, vec![Point::new2(-2.0, 2.0), Point::new2(2.0, 2.0)]);
        let (_, its) = sweep(&sys, &end, 1.0).unwrap();
        assert_eq!(its, vec![Point::new2(-2.0, 2.0), Point::new2(2.0, 2.0)]);
    }

    #[test]
    fn example1_sweep_stays_in_plane() {
        let sys = example1_system();
        let z0 = 0.3;
        let (_, its) = sweep(&sys, &Point::new3(3.0, -4.0, z0), 0.5).unwrap();
        assert!(its.iter().all(|p| p.z() == z0));
    }

    #[test]
    fn feasible_system_cycle_collapses() {
        let sys = crossing_segments();
        for eps in [0.3, 0.7, 1.0] {
            let c = solve_cycle(&sys, &Point::new2(0.9, 0.2), eps, &CycleOptions::with_tol(1e-12)).unwrap();
            assert!(c.residual <= 1e-12);
            assert!(c.diameter() <= 1e-10, "diameter {}", c.diameter());
            assert!(c.iterates[0].norm() <= 1e-10);
        }
    }

    #[test]
    fn singleton_cycle_matches_two_set_closed_form() {
        // For two points the cycle solves u1 = (1-e) u2 + e a, u2 = (1-e) u1 + e b.
        let sys = singletons();
        let eps = 0.25;
        let c = solve_cycle(&sys, &Point::new2(0.0, 0.0), eps, &CycleOptions::with_tol(1e-13)).unwrap();
        let (a, b) = (Point::new2(-2.0, 2.0), Point::new2(2.0, 2.0));
        let d = 1.0 - (1.0 - eps) * (1.0 - eps);
        let u1 = (b * ((1.0 - eps) * eps) + a * eps) * (1.0 / d);
        assert!(c.iterates[0].dist(&u1) < 1e-12, "{:?} vs {u1:?}", c.iterates[0]);
    }

    #[test]
    fn rejects_bad_relaxation() {
        let sys = singletons();
        let u = Point::new2(0.0, 0.0);
        assert!(sweep(&sys, &u, 0.0).is_err());
        assert!(sweep(&sys, &u, 1.5).is_err());
        assert!(solve_cycle(&sys, &u, -0.1, &CycleOptions::default()).is_err());
        assert!(solve_cycle(&sys, &u, 0.5, &CycleOptions::with_tol(0.0)).is_err());
        assert!(sweep(&sys, &Point::new3(0.0, 0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn loop_cap_reports_last_displacement() {
        let sys = example1_system();
        let opts = CycleOptions { tol: 1e-14, max_loops: 3, check_every: 1000, polish: false };
        match solve_cycle(&sys, &Point::new3(9.0, 9.0, 0.0), 0.01, &opts) {
            Err(Error::MaxLoopsExceeded { loops: 3, displacement }) => assert!(displacement > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn polish_and_plain_iteration_agree_on_example1() {
        let sys = example1_system();
        let u0 = Point::new3(1.0, -3.0, -0.4);
        let plain = CycleOptions { tol: 1e-13, polish: false, ..CycleOptions::default() };
        let polished = CycleOptions { tol: 1e-13, check_every: 10, ..CycleOptions::default() };
        let a = solve_cycle(&sys, &u0, 0.5, &plain).unwrap();
        let b = solve_cycle(&sys, &u0, 0.5, &polished).unwrap();
        assert!(a.max_iterate_diff(&b) < 1e-10);
        assert!(b.iterates.iter().all(|p| p.z() == -0.4));
    }

    #[test]
    fn grid_modes_agree() {
        let sys = example1_system();
        let eps = [0.9, 0.6, 0.3];
        let u0 = Point::new3(0.0, 0.0, 0.5);
        let opts = CycleOptions::with_tol(1e-12);
        let a = solve_cycle_grid(&sys, &u0, &eps, &opts, GridMode::WarmStart);
        let b = solve_cycle_grid(&sys, &u0, &eps, &opts, GridMode::Parallel);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.as_ref().unwrap().max_iterate_diff(y.as_ref().unwrap()) < 1e-9);
        }
    }
}
