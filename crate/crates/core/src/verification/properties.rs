use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracles::{linear_cycle_oracle, qp_projection_oracle};
use super::{Mutation, OracleReport, Worst};
use crate::convex_sets::{verify_projection, ConvexSet, Face};
use crate::counterexample::{
    oscillation_witness, point_a, point_b, v_infinity, AngleRule, CounterexampleModel,
};
use crate::engine::{
    contraction_denominator, cycle_residual, example1_system, iterates_from_support, least_squares_gradient,
    least_squares_objective, solve_cycle, support_of, sweep, CycleOptions, EpsilonCycle, GridMode, SetSystem,
};
use crate::error::Result;
use crate::point::Point;

const PROJECTION_SAMPLES: usize = 1000;
const PROJECTION_TOL: f64 = 1e-9;
const CERTIFICATE_TOL: f64 = 1e-10;
const QP_INSTANCES: usize = 100;
const QP_TOL: f64 = 1e-7;
const START_TOL: f64 = 1e-7;
const SUPPORT_TOL: f64 = 1e-8;
const PLANAR_TOL: f64 = 1e-8;
const OBJECTIVE_TOL: f64 = 1e-12;
const GRADIENT_TOL: f64 = 1e-5;
const LINEAR_TOL: f64 = 1e-12;
const FORMULA_TOL: f64 = 1e-7;

fn rand_point(rng: &mut ChaCha8Rng, dim: usize, r: f64) -> Point {
    let c: Vec<f64> = (0..dim).map(|_| rng.gen_range(-r..=r)).collect();
    Point::from_slice(&c).expect("dimension is 2 or 3")
}

fn rand_dim(rng: &mut ChaCha8Rng) -> usize {
    if rng.gen_bool(0.5) { 2 } else { 3 }
}

fn random_set(rng: &mut ChaCha8Rng, kind: &str) -> ConvexSet {
    let set = match kind {
        "point" => {
            let d = rand_dim(rng);
            ConvexSet::point(rand_point(rng, d, 5.0))
        }
        "segment" => {
            let d = rand_dim(rng);
            ConvexSet::segment(rand_point(rng, d, 5.0), rand_point(rng, d, 5.0))
        }
        "cylinder" => ConvexSet::cylinder(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0)),
        _ => {
            let d = rand_dim(rng);
            let n = if d == 2 { rng.gen_range(1..=50) } else { rng.gen_range(1..=20) };
            ConvexSet::hull((0..n).map(|_| rand_point(rng, d, 5.0)).collect())
        }
    };
    set.expect("random sets are well formed")
}

fn membership_error(set: &ConvexSet, w: &Point) -> Result<f64> {
    Ok(match set {
        ConvexSet::Cylinder(c) => (w.x().hypot(w.y()) - c.radius()).max(w.z().abs() - c.half_height()).max(0.0),
        _ => set.distance(w)?,
    })
}

/// Nonexpansiveness, idempotence, membership and certificate per set kind.
pub(super) fn projection_properties(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let mut out = Vec::new();
    for kind in ["point", "segment", "cylinder", "hull"] {
        let mut nonexp = Worst::new();
        let mut idem = Worst::new();
        let mut member = Worst::new();
        let mut cert = Worst::new();
        for i in 0..PROJECTION_SAMPLES {
            let set = random_set(rng, kind);
            let u = rand_point(rng, set.dim(), 10.0);
            let v = rand_point(rng, set.dim(), 10.0);
            let (pu, pv) = match (set.project(&u), set.project(&v)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    nonexp.fail(format!("sample {i}: {e}"));
                    continue;
                }
            };
            nonexp.record((pu.point.dist(&pv.point) - u.dist(&v)).max(0.0), || format!("sample {i}, {u:?} {v:?}"));
            match set.project(&pu.point) {
                Ok(r) => idem.record(r.point.dist(&pu.point), || format!("sample {i}, {u:?}")),
                Err(e) => idem.fail(format!("sample {i}: {e}")),
            }
            match membership_error(&set, &pu.point) {
                Ok(e) => member.record(e, || format!("sample {i}, {:?}", pu.point)),
                Err(e) => member.fail(format!("sample {i}: {e}")),
            }
            let scaled = verify_projection(&set, &u, &pu.point).max(0.0) / (1.0 + u.norm_sq());
            cert.record(scaled, || format!("sample {i}, {u:?}"));
        }
        out.push(nonexp.report(&format!("projection.nonexpansive.{kind}"), PROJECTION_TOL));
        out.push(idem.report(&format!("projection.idempotent.{kind}"), PROJECTION_TOL));
        out.push(member.report(&format!("projection.membership.{kind}"), PROJECTION_TOL));
        out.push(cert.report(&format!("projection.certificate.{kind}"), CERTIFICATE_TOL));
    }
    out
}

fn hull_generators(set: &ConvexSet) -> &[Point] {
    match set {
        ConvexSet::Hull(h) => h.generators(),
        _ => unreachable!("third counterexample set is a hull"),
    }
}

fn compare_with_qp(worst: &mut Worst, gens: &[Point], u: &Point, label: &str) {
    let hull = ConvexSet::hull(gens.to_vec()).expect("generators are finite");
    match (hull.project(u), qp_projection_oracle(gens, u)) {
        (Ok(a), Ok(b)) => worst.record(a.point.dist(&b), || format!("{label}, {} generators, u={u:?}", gens.len())),
        (Err(e), _) | (_, Err(e)) => worst.fail(format!("{label}: {e}")),
    }
}

/// Wolfe's algorithm against the simplex-constrained QP oracle.
pub(super) fn hull_vs_qp(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let mut worst = Worst::new();
    for i in 0..QP_INSTANCES {
        let n = rng.gen_range(1..=50);
        let gens: Vec<Point> = (0..n).map(|_| rand_point(rng, 2, 3.0)).collect();
        let u = rand_point(rng, 2, 10.0);
        compare_with_qp(&mut worst, &gens, &u, &format!("instance {i}"));
    }
    for k in [10, 40] {
        let model = CounterexampleModel::build(k, &AngleRule::Default).expect("default model builds");
        let gens = hull_generators(&model.sets2d().sets()[2]);
        compare_with_qp(&mut worst, gens, &Point::new2(0.0, 2.0), &format!("counterexample K={k}"));
    }
    vec![worst.report("projection.hull_vs_qp", QP_TOL)]
}

const START_EPSILONS: [f64; 4] = [0.9, 0.5, 0.2, 0.05];
const STARTS: usize = 5;

/// Cycles of the 40-vertex model from random starts: agreement, support
/// round trip, and the planar reduction.
pub(super) fn cycle_start_independence(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(CounterexampleModel::DEFAULT_K, &AngleRule::Default)
        .expect("default model builds");
    let opts = CycleOptions::default();
    let mut agree = Worst::new();
    let mut support = Worst::new();
    let mut planar = Worst::new();
    for eps in START_EPSILONS {
        let mut cycles: Vec<EpsilonCycle> = Vec::new();
        for j in 0..STARTS {
            let start = rand_point(rng, 3, 10.0);
            let cycle = match solve_cycle(model.sets3d(), &start, eps, &opts) {
                Ok(c) => c,
                Err(e) => {
                    agree.fail(format!("eps={eps}, start {j}: {e}"));
                    continue;
                }
            };
            let rebuilt = support_of(model.sets3d(), &cycle.iterates)
                .and_then(|w| iterates_from_support(&w, eps))
                .map(|u| u.iter().zip(&cycle.iterates).map(|(a, b)| a.dist(b)).fold(0.0, f64::max));
            match rebuilt {
                Ok(e) => support.record(e, || format!("eps={eps}, start {j}")),
                Err(e) => support.fail(format!("eps={eps}, start {j}: {e}")),
            }
            let xy: Vec<Point> = cycle.iterates.iter().map(Point::xy).collect();
            match cycle_residual(model.sets2d(), &xy, eps) {
                Ok((r, _)) => planar.record(r.max(cycle.z_spread()), || {
                    format!("eps={eps}, start {j}: z-spread {:.2e}, planar residual {r:.2e}", cycle.z_spread())
                }),
                Err(e) => planar.fail(format!("eps={eps}, start {j}: {e}")),
            }
            if let Some(first) = cycles.first() {
                agree.record(cycle.max_iterate_diff(first), || format!("eps={eps}, start {j} vs start 0"));
            }
            cycles.push(cycle);
        }
    }
    vec![
        agree.report("cycle.start_independence", START_TOL),
        support.report("cycle.support_consistency", SUPPORT_TOL),
        planar.report("counterexample.dimension_reduction", PLANAR_TOL),
    ]
}

const CONTRACTION_GRID: usize = 100_000;

/// `eps^2 - 3 eps + 3 = (1 - eps)(2 - eps) + 1 > 1` on a dense grid of
/// `(0, 1)`. The error counts grid points where either fact fails.
pub(super) fn contraction_factor(_: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let mut violations = 0usize;
    let mut min_margin = f64::INFINITY;
    for i in 1..=CONTRACTION_GRID {
        let eps = i as f64 / (CONTRACTION_GRID + 1) as f64;
        let d = contraction_denominator(eps);
        let factored = (1.0 - eps) * (2.0 - eps) + 1.0;
        min_margin = min_margin.min(d - 1.0);
        if d <= 1.0 || (d - factored).abs() > 4.0 * f64::EPSILON {
            violations += 1;
        }
    }
    let details = vec![format!("smallest margin over 1: {min_margin:.3e}")];
    vec![OracleReport::new("cycle.contraction_factor", violations as f64, 0.0, CONTRACTION_GRID, details)]
}

/// A random set in dimension `dim` containing the origin.
fn set_through_origin(rng: &mut ChaCha8Rng, dim: usize) -> ConvexSet {
    let choice = rng.gen_range(0..if dim == 3 { 3 } else { 2 });
    let set = match choice {
        0 => {
            let p = rand_point(rng, dim, 5.0);
            ConvexSet::segment(p, p * -rng.gen_range(0.1..2.0))
        }
        1 => {
            let n = rng.gen_range(1..=12);
            let mut gens: Vec<Point> = (0..n).map(|_| rand_point(rng, dim, 5.0)).collect();
            gens.push(Point::zeros(dim));
            ConvexSet::hull(gens)
        }
        _ => ConvexSet::cylinder(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0)),
    };
    set.expect("random sets are well formed")
}

const MONOTONE_SYSTEMS: usize = 20;
const MONOTONE_LOOPS: usize = 200;
const MONOTONE_EPSILONS: [f64; 3] = [0.01, 0.05, 0.2];

/// Along the constant-relaxation process on systems sharing the origin, the
/// objective does not increase from loop to loop and every single step is
/// Fejer monotone with respect to the origin.
pub(super) fn monotone_objective(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let mut worst = Worst::new();
    for sys_idx in 0..MONOTONE_SYSTEMS {
        let dim = rand_dim(rng);
        let sets = (0..3).map(|_| set_through_origin(rng, dim)).collect();
        let system = SetSystem::new(sets).expect("three sets of one dimension");
        for eps in MONOTONE_EPSILONS {
            let mut u = rand_point(rng, dim, 10.0);
            let run = (|| -> Result<()> {
                let mut f = least_squares_objective(&system, &u)?;
                for l in 0..MONOTONE_LOOPS {
                    let (next, steps) = sweep(&system, &u, eps)?;
                    let mut prev_norm = u.norm();
                    for s in &steps {
                        let n = s.norm();
                        worst.record((n - prev_norm).max(0.0), || format!("system {sys_idx}, eps={eps}, loop {l}: distance"));
                        prev_norm = n;
                    }
                    let f_next = least_squares_objective(&system, &next)?;
                    worst.record((f_next - f).max(0.0), || format!("system {sys_idx}, eps={eps}, loop {l}: objective"));
                    f = f_next;
                    u = next;
                }
                Ok(())
            })();
            if let Err(e) = run {
                worst.fail(format!("system {sys_idx}, eps={eps}: {e}"));
            }
        }
    }
    vec![worst.report("cycle.monotone_objective", OBJECTIVE_TOL)]
}

const GRADIENT_POINTS: usize = 50;
const FD_STEP: f64 = 1e-6;

fn faces(system: &SetSystem, u: &Point) -> Result<Vec<Face>> {
    system.sets().iter().map(|s| Ok(s.project_fast(u)?.1)).collect()
}

fn gradient_error(system: &SetSystem, u: &Point) -> Result<Option<f64>> {
    let base = faces(system, u)?;
    let g = least_squares_gradient(system, u)?;
    let mut fd = Point::zeros(u.dim());
    for k in 0..u.dim() {
        let (mut up, mut dn) = (*u, *u);
        up.set(k, u[k] + FD_STEP);
        dn.set(k, u[k] - FD_STEP);
        // Finite differences are only meaningful off the piece boundaries.
        if faces(system, &up)? != base || faces(system, &dn)? != base {
            return Ok(None);
        }
        fd.set(k, (least_squares_objective(system, &up)? - least_squares_objective(system, &dn)?) / (2.0 * FD_STEP));
    }
    Ok(Some(fd.dist(&g) / g.norm().max(1.0)))
}

/// Analytic gradient of the objective against central differences.
pub(super) fn gradient_check(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(CounterexampleModel::DEFAULT_K, &AngleRule::Default)
        .expect("default model builds");
    let systems = [("example 1", example1_system()), ("counterexample", model.sets3d().clone())];
    let mut worst = Worst::new();
    for (label, system) in &systems {
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < GRADIENT_POINTS && attempts < 100 * GRADIENT_POINTS {
            attempts += 1;
            let u = rand_point(rng, 3, 5.0);
            match gradient_error(system, &u) {
                Ok(Some(e)) => {
                    accepted += 1;
                    worst.record(e, || format!("{label}, u={u:?}"));
                }
                Ok(None) => {}
                Err(e) => worst.fail(format!("{label}, u={u:?}: {e}")),
            }
        }
        if accepted < GRADIENT_POINTS {
            worst.fail(format!("{label}: only {accepted} smooth points found"));
        }
    }
    vec![worst.report("cycle.gradient_check", GRADIENT_TOL)]
}

const LINEAR_SAMPLES: usize = 1000;

/// General support formula against direct substitution.
pub(super) fn linear_oracle_agreement(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let mut worst = Worst::new();
    for i in 0..LINEAR_SAMPLES {
        let dim = rand_dim(rng);
        let w = [rand_point(rng, dim, 5.0), rand_point(rng, dim, 5.0), rand_point(rng, dim, 5.0)];
        let eps = rng.gen_range(1e-3..=1.0);
        match (iterates_from_support(&w, eps), linear_cycle_oracle(&w, eps)) {
            (Ok(a), Ok(b)) => {
                let e = a.iter().zip(&b).map(|(x, y)| x.dist(y)).fold(0.0, f64::max);
                worst.record(e, || format!("sample {i}, eps={eps}"));
            }
            (Err(e), _) | (_, Err(e)) => worst.fail(format!("sample {i}: {e}")),
        }
    }
    vec![worst.report("cycle.linear_oracle", LINEAR_TOL)]
}

const FORMULA_SEGMENTS: usize = 10;
const FORMULA_PER_SEGMENT: usize = 5;

/// Iterated cycles at `eps(c)` against the closed form built from `c`.
pub(super) fn formula_vs_iteration(rng: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(12, &AngleRule::Default).expect("default model builds");
    let opts = CycleOptions::default();
    let mut worst = Worst::new();
    for k in 1..=FORMULA_SEGMENTS {
        for _ in 0..FORMULA_PER_SEGMENT {
            let s = rng.gen_range(0.0..1.0);
            let start = rand_point(rng, 3, 10.0);
            let run = || -> Result<f64> {
                let c = model.path_point(k, s)?;
                let closed = model.cycle_from_contact(&c)?;
                let iterated = solve_cycle(model.sets3d(), &start, closed.epsilon, &opts)?;
                Ok(iterated.max_iterate_diff(&closed))
            };
            match run() {
                Ok(e) => worst.record(e, || format!("k={k}, s={s:.6}")),
                Err(e) => worst.fail(format!("k={k}, s={s:.6}: {e}")),
            }
        }
    }
    vec![worst.report("counterexample.formula_vs_iteration", FORMULA_TOL)]
}

/// Relaxation that puts the third support point at `c` for a path leaving
/// `c` in direction `d`, evaluated from scratch.
fn epsilon_formula(c: &Point, d: &Point, mutation: Option<Mutation>) -> f64 {
    let alpha = (point_a() - *c).dot(d);
    let beta = (point_b() - *c).dot(d);
    match mutation {
        None => 1.0 + beta / alpha,
        Some(Mutation::EpsilonFormula) => 1.0 - beta / alpha,
    }
}

const MONOTONICITY_GRID: usize = 1000;
const FINAL_SEGMENT_BOUND: f64 = 0.1;

/// Strict decrease of eps along the path of the 12-vertex model, downward
/// jumps at its vertices, and decreasing segment maxima of the 40-vertex
/// model ending below 0.1.
///
/// The error is the largest eps on the last 40-vertex segment when every
/// structural check holds, and infinite otherwise.
pub(super) fn epsilon_monotonicity(_: &mut ChaCha8Rng, mutation: Option<Mutation>) -> Vec<OracleReport> {
    let small = CounterexampleModel::build(12, &AngleRule::Default).expect("default model builds");
    let segs = small.segment_count();
    let mut details = Vec::new();
    let mut ok = true;

    let mut prev: Option<(usize, f64, f64)> = None;
    for j in 0..MONOTONICITY_GRID {
        let tau = j as f64 * segs as f64 / MONOTONICITY_GRID as f64;
        let k = tau.floor() as usize + 1;
        let s = tau - tau.floor();
        let c = small.v(k).lerp(&small.v(k + 1), s);
        let eps = epsilon_formula(&c, &small.direction(k), mutation);
        if let Some((pk, ps, pe)) = prev {
            if !(eps < pe) {
                ok = false;
                if details.len() < 5 {
                    details.push(format!("eps rises from {pe:.9} (k={pk}, s={ps:.4}) to {eps:.9} (k={k}, s={s:.4})"));
                }
            }
        }
        prev = Some((k, s, eps));
    }
    for k in 1..segs {
        let v = small.v(k + 1);
        let before = epsilon_formula(&v, &small.direction(k), mutation);
        let after = epsilon_formula(&v, &small.direction(k + 1), mutation);
        if !(after < before) {
            ok = false;
            details.push(format!("no downward jump at v_{}: {before:.9} -> {after:.9}", k + 1));
        }
    }

    let large = CounterexampleModel::build(CounterexampleModel::DEFAULT_K, &AngleRule::Default)
        .expect("default model builds");
    let tops: Vec<f64> = (1..=large.segment_count())
        .map(|k| epsilon_formula(&large.v(k), &large.direction(k), mutation))
        .collect();
    if let Some(w) = tops.windows(2).position(|w| !(w[1] < w[0])) {
        ok = false;
        details.push(format!("segment maxima rise at segment {}: {:.9} -> {:.9}", w + 2, tops[w], tops[w + 1]));
    }
    let last = *tops.last().expect("at least one segment");
    details.push(format!("largest eps on the last of {} segments: {last:.6}", large.segment_count()));

    let err = if ok { last } else { f64::INFINITY };
    let samples = MONOTONICITY_GRID + (segs - 1) + tops.len();
    let mut reports = vec![OracleReport::new("counterexample.epsilon_monotonicity", err, FINAL_SEGMENT_BOUND, samples, details)];

    if mutation.is_none() {
        // The model's own evaluation must match the from-scratch formula.
        let mut worst = Worst::new();
        for j in 0..MONOTONICITY_GRID {
            let tau = j as f64 * segs as f64 / MONOTONICITY_GRID as f64;
            let (k, s) = (tau.floor() as usize + 1, tau - tau.floor());
            let c = small.path_point(k, s).expect("grid stays on the path");
            match small.epsilon_of_contact(&c) {
                Ok(e) => worst.record((e - epsilon_formula(&c.point, &small.direction(k), None)).abs(), || {
                    format!("k={k}, s={s:.4}")
                }),
                Err(e) => worst.fail(format!("k={k}, s={s:.4}: {e}")),
            }
        }
        reports.push(worst.report("counterexample.epsilon_formula", 1e-12));
    }
    reports
}

/// `|d_k - (-1, 0)|` decreases and ends below 0.1.
pub(super) fn direction_limit(_: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(CounterexampleModel::DEFAULT_K, &AngleRule::Default)
        .expect("default model builds");
    let target = Point::new2(-1.0, 0.0);
    let dists: Vec<f64> = (1..=model.segment_count()).map(|k| model.direction(k).dist(&target)).collect();
    let mut details = Vec::new();
    let monotone = match dists.windows(2).position(|w| !(w[1] < w[0])) {
        Some(i) => {
            details.push(format!("distance rises at segment {}", i + 2));
            false
        }
        None => true,
    };
    let last = *dists.last().expect("at least one segment");
    details.push(format!("first {:.6}, last {last:.6}", dists[0]));
    let err = if monotone { last } else { f64::INFINITY };
    vec![OracleReport::new("counterexample.direction_limit", err, 0.1, dists.len(), details)]
}

const OMEGA_GRID: usize = 30;
/// `|u_i - u_{i-1}| = eps |w_i - u_{i-1}|` and the support triangle has
/// diameter `|a - b| = 4`.
const OMEGA_RATIO_BOUND: f64 = 4.0;

/// Closed-form cycles down to the truncation limit: diameter and distance
/// of the mean from `(0, 5/3)` measured in units of eps.
pub(super) fn omega_limit_report(_: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(CounterexampleModel::DEFAULT_K, &AngleRule::Default)
        .expect("default model builds");
    let mut worst = Worst::new();
    let grid: Result<Vec<f64>> = model.eps_min().map(|m| {
        let floor = 1.01 * m;
        (0..OMEGA_GRID).map(|i| 0.9 * (floor / 0.9f64).powf(i as f64 / (OMEGA_GRID - 1) as f64)).collect()
    });
    match grid.and_then(|g| crate::counterexample::omega_limit(&model, &g)) {
        Ok(samples) => {
            for s in &samples {
                let ratio = (s.diameter / s.epsilon).max(s.xy_distance / s.epsilon);
                worst.record(ratio, || {
                    format!("eps={:.4e}: diameter {:.3e}, distance {:.3e}", s.epsilon, s.diameter, s.xy_distance)
                });
            }
            let (first, last) = (samples[0], samples[samples.len() - 1]);
            if !(last.diameter < first.diameter && last.xy_distance < first.xy_distance) {
                worst.fail(format!("no shrinkage: {first:?} -> {last:?}"));
            }
        }
        Err(e) => worst.fail(e.to_string()),
    }
    vec![worst.report("counterexample.omega_limit", OMEGA_RATIO_BOUND)]
}

/// Heights at `s = 0.25, 0.75` on segments 1..10 of the 12-vertex model.
pub(super) fn oscillation(_: &mut ChaCha8Rng, _: Option<Mutation>) -> Vec<OracleReport> {
    let model = CounterexampleModel::build(12, &AngleRule::Default).expect("default model builds");
    let w = oscillation_witness(&model, 10, &v_infinity().with_z(0.0), &CycleOptions::default(), GridMode::WarmStart);
    let report = match w {
        Ok(w) => {
            let err = if w.holds { w.max_height_error } else { f64::INFINITY };
            let details = vec![
                format!("{} sign alternations", w.alternations),
                format!("largest | |height| - 0.5 |: {:.3e}", w.max_height_error),
            ];
            OracleReport::new("counterexample.oscillation", err, 1e-6, w.heights.len(), details)
        }
        Err(e) => OracleReport::new("counterexample.oscillation", f64::INFINITY, 1e-6, 0, vec![e.to_string()]),
    };
    vec![report]
}
