//! Release criteria. Runs without the test harness so every PASS/FAIL line
//! is printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use underrelax::counterexample::{oscillation_witness, AngleRule, CounterexampleModel};
use underrelax::engine::{
    cycle_residual, example1_system, iterates_from_support, least_squares_gradient, run_lambda_process,
    solve_cycle, solve_least_squares, CycleOptions, EpsilonCycle, GridMode, LeastSquaresOptions, Schedule,
    ScheduleSegment,
};
use underrelax::verification::{linear_cycle_oracle, run_property_suite};
use underrelax::Point;

const SEED: u64 = 20_240_901;

struct Outcome {
    pass: bool,
    summary: String,
}

fn rand_point(rng: &mut ChaCha8Rng, r: f64) -> Point {
    Point::new3(rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

fn model(k: usize) -> CounterexampleModel {
    CounterexampleModel::build(k, &AngleRule::Default).expect("default model builds")
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.2} s of {} s allowed", elapsed.as_secs_f64(), limit.as_secs()))
}

fn least_squares_set() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let systems = [("example 1", example1_system()), ("counterexample K=40", model(40).sets3d().clone())];
    let mut worst_x = 0.0f64;
    let mut worst_y = 0.0f64;
    let mut worst_grad = 0.0f64;
    let mut errors = Vec::new();
    for (name, sys) in &systems {
        for _ in 0..10 {
            match solve_least_squares(sys, &rand_point(&mut rng, 10.0), &LeastSquaresOptions::default()) {
                Ok(u) => {
                    worst_x = worst_x.max(u.x().abs());
                    worst_y = worst_y.max((u.y() - 5.0 / 3.0).abs());
                }
                Err(e) => errors.push(format!("{name}: {e}")),
            }
        }
        match least_squares_gradient(sys, &Point::new3(0.0, 5.0 / 3.0, 0.0)) {
            Ok(g) => worst_grad = worst_grad.max(g.norm()),
            Err(e) => errors.push(format!("{name}: {e}")),
        }
    }
    let (fast, time) = within(t.elapsed(), Duration::from_secs(1));
    Outcome {
        pass: errors.is_empty() && worst_x <= 1e-6 && worst_y <= 1e-6 && worst_grad <= 1e-12 && fast,
        summary: format!(
            "max |x| {worst_x:.2e}, max |y - 5/3| {worst_y:.2e} (<= 1e-6), |grad| at (0,5/3,0) {worst_grad:.2e} (<= 1e-12), {time}{}",
            if errors.is_empty() { String::new() } else { format!(", errors: {errors:?}") }
        ),
    }
}

/// Criteria 2 and 3 share their cycles.
fn uniqueness_and_reduction() -> (Outcome, Outcome) {
    let t = Instant::now();
    let m = model(40);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let opts = CycleOptions::default();
    let mut spread = 0.0f64;
    let mut z_spread = 0.0f64;
    let mut planar = 0.0f64;
    let mut errors = Vec::new();
    for eps in [0.9, 0.5, 0.2, 0.05] {
        let mut cycles: Vec<EpsilonCycle> = Vec::new();
        for _ in 0..5 {
            let start = rand_point(&mut rng, 10.0);
            match solve_cycle(m.sets3d(), &start, eps, &opts) {
                Ok(c) => cycles.push(c),
                Err(e) => errors.push(format!("eps={eps}: {e}")),
            }
        }
        for c in &cycles {
            spread = spread.max(c.max_iterate_diff(&cycles[0]));
            z_spread = z_spread.max(c.z_spread());
            let xy: Vec<Point> = c.iterates.iter().map(Point::xy).collect();
            match cycle_residual(m.sets2d(), &xy, eps) {
                Ok((r, _)) => planar = planar.max(r),
                Err(e) => errors.push(format!("eps={eps} planar: {e}")),
            }
        }
    }
    let (fast, time) = within(t.elapsed(), Duration::from_secs(30));
    let err = if errors.is_empty() { String::new() } else { format!(", errors: {errors:?}") };
    (
        Outcome {
            pass: errors.is_empty() && spread <= 1e-7 && fast,
            summary: format!("cross-start spread {spread:.2e} (<= 1e-7), {time}{err}"),
        },
        Outcome {
            pass: errors.is_empty() && z_spread <= 1e-8 && planar <= 1e-8,
            summary: format!("z-spread {z_spread:.2e} (<= 1e-8), planar cycle residual {planar:.2e} (<= 1e-8){err}"),
        },
    )
}

fn closed_form_vs_iteration() -> Outcome {
    let m = model(12);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let opts = CycleOptions::default();
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for n in 0..50 {
        let k = 1 + n % 10;
        let s = rng.gen_range(0.0..1.0);
        let start = rand_point(&mut rng, 10.0);
        let run = || -> underrelax::Result<f64> {
            let closed = m.cycle_from_contact(&m.path_point(k, s)?)?;
            Ok(solve_cycle(m.sets3d(), &start, closed.epsilon, &opts)?.max_iterate_diff(&closed))
        };
        match run() {
            Ok(e) => worst = worst.max(e),
            Err(e) => errors.push(format!("k={k}, s={s}: {e}")),
        }
    }
    let mut linear = 0.0f64;
    for _ in 0..1000 {
        let w = [rand_point(&mut rng, 5.0), rand_point(&mut rng, 5.0), rand_point(&mut rng, 5.0)];
        let eps = rng.gen_range(1e-3..=1.0);
        match (iterates_from_support(&w, eps), linear_cycle_oracle(&w, eps)) {
            (Ok(a), Ok(b)) => {
                linear = linear.max(a.iter().zip(&b).map(|(x, y)| x.dist(y)).fold(0.0, f64::max));
            }
            (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
        }
    }
    Outcome {
        pass: errors.is_empty() && worst <= 1e-7 && linear <= 1e-12,
        summary: format!(
            "50 contacts: max deviation {worst:.2e} (<= 1e-7); 1000 supports vs linear oracle {linear:.2e} (<= 1e-12){}",
            if errors.is_empty() { String::new() } else { format!(", errors: {errors:?}") }
        ),
    }
}

fn oscillation() -> Outcome {
    let t = Instant::now();
    let m = model(12);
    let w = oscillation_witness(&m, 10, &Point::new3(0.0, 1.0, 0.0), &CycleOptions::default(), GridMode::Parallel);
    let (fast, time) = within(t.elapsed(), Duration::from_secs(120));
    match w {
        Ok(w) => Outcome {
            pass: w.holds && fast,
            summary: format!(
                "{} of 18 sign alternations, max | |height| - 0.5 | {:.2e} (<= 1e-6), {time}",
                w.alternations, w.max_height_error
            ),
        },
        Err(e) => Outcome { pass: false, summary: e.to_string() },
    }
}

fn epsilon_monotonicity() -> Outcome {
    let m = model(12);
    let segs = m.segment_count();
    let mut problems = Vec::new();
    let mut prev: Option<f64> = None;
    for j in 0..1000 {
        let tau = j as f64 * segs as f64 / 1000.0;
        let (k, s) = (tau.floor() as usize + 1, tau - tau.floor());
        let eps = m.path_point(k, s).and_then(|c| m.epsilon_of_contact(&c));
        match eps {
            Ok(e) => {
                if let Some(p) = prev {
                    if !(e < p) {
                        problems.push(format!("eps rises at k={k}, s={s:.4}"));
                    }
                }
                prev = Some(e);
            }
            Err(e) => problems.push(e.to_string()),
        }
    }
    let mut min_jump = f64::INFINITY;
    for k in 2..m.k_count() {
        match (m.segment_end_epsilon(k - 1), m.plateau(k)) {
            (Ok(end), Ok(p)) => {
                // Approaching v_k along segment k-1 gives `end`; the vertex itself
                // carries the plateau (lower, upper] with upper = end.
                let jump = end - p.lower;
                min_jump = min_jump.min(jump);
                if !(jump > 0.0) || p.upper != end {
                    problems.push(format!("no downward jump at v_{k}"));
                }
            }
            (Err(e), _) | (_, Err(e)) => problems.push(e.to_string()),
        }
    }
    let big = model(40);
    let final_max = match big.path_point(big.segment_count(), 0.0).and_then(|c| big.epsilon_of_contact(&c)) {
        Ok(e) => e,
        Err(e) => {
            problems.push(e.to_string());
            f64::INFINITY
        }
    };
    Outcome {
        pass: problems.is_empty() && final_max < 0.1,
        summary: format!(
            "1000-point grid strictly decreasing, smallest vertex jump {min_jump:.3e}, final K=40 segment eps <= {final_max:.4} (< 0.1){}",
            if problems.is_empty() { String::new() } else { format!(", problems: {problems:?}") }
        ),
    }
}

fn lambda_oscillation() -> Outcome {
    const HOLD: u64 = 100_000;
    const ROUNDS: usize = 2;
    let m = model(40);
    let run = || -> underrelax::Result<(Vec<f64>, Vec<f64>, f64, f64)> {
        let c3 = m.path_point(3, 0.25)?;
        let c4 = m.path_point(4, 0.25)?;
        let (e3, e4) = (m.epsilon_of_contact(&c3)?, m.epsilon_of_contact(&c4)?);
        let (h3, h4) = (c3.height, c4.height);
        let mut segments = Vec::new();
        let mut targets = Vec::new();
        for _ in 0..ROUNDS {
            segments.push(ScheduleSegment::Const { lambda: e3, loops: HOLD });
            segments.push(ScheduleSegment::Const { lambda: e4, loops: HOLD });
            targets.extend([h3, h4]);
        }
        let traj = run_lambda_process(m.sets3d(), &Point::new3(0.0, 1.0, 0.0), &Schedule::new(segments)?, HOLD)?;
        let heights =
            traj.samples.iter().map(|s| s.points.iter().map(Point::z).sum::<f64>() / s.points.len() as f64).collect();
        Ok((heights, targets, e3, e4))
    };
    match run() {
        Ok((heights, targets, e3, e4)) => {
            let worst = heights.iter().zip(&targets).map(|(h, t)| (h - t).abs()).fold(0.0, f64::max);
            let alternating = heights.len() == targets.len() && heights.windows(2).all(|w| w[0] * w[1] < 0.0);
            Outcome {
                pass: alternating && worst <= 0.05,
                summary: format!(
                    "eps {e3:.6} / {e4:.6} held {HOLD} loops each, end-of-hold heights {:?}, max deviation {worst:.2e} (<= 0.05)",
                    heights.iter().map(|h| format!("{h:+.4}")).collect::<Vec<_>>()
                ),
            }
        }
        Err(e) => Outcome { pass: false, summary: e.to_string() },
    }
}

fn projection_layer() -> Outcome {
    let reports = run_property_suite(0, None);
    let ours: Vec<_> = reports.iter().filter(|r| r.name.starts_with("projection.")).collect();
    let failed: Vec<&str> = ours.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let qp = ours.iter().find(|r| r.name == "projection.hull_vs_qp");
    Outcome {
        pass: failed.is_empty() && ours.len() == 17 && ours.iter().all(|r| r.samples >= 100),
        summary: format!(
            "{} projection reports over 4 set kinds x 1000 samples, hull vs QP max {:.2e} (<= 1e-7){}",
            ours.len(),
            qp.map(|r| r.max_error).unwrap_or(f64::NAN),
            if failed.is_empty() { String::new() } else { format!(", failed: {failed:?}") }
        ),
    }
}

fn plane_invariance() -> Outcome {
    let sys = example1_system();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let mut moved = 0usize;
    let mut checked = 0usize;
    let mut errors = Vec::new();
    for _ in 0..20 {
        // Heights outside [-1, 1] are clamped by the first projection; only
        // planes meeting the sets are invariant.
        let start = rand_point(&mut rng, 10.0).with_z(rng.gen_range(-1.0..=1.0));
        for eps in [0.25, 0.5, 0.75] {
            let traj = Schedule::constant(eps, 500).and_then(|s| run_lambda_process(&sys, &start, &s, 1));
            let cycle = solve_cycle(&sys, &start, eps, &CycleOptions::default());
            match (traj, cycle) {
                (Ok(t), Ok(c)) => {
                    for p in t.samples.iter().flat_map(|s| &s.points).chain(&c.iterates) {
                        checked += 1;
                        if p.z().to_bits() != start.z().to_bits() {
                            moved += 1;
                        }
                    }
                }
                (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
            }
        }
    }
    Outcome {
        pass: errors.is_empty() && moved == 0,
        summary: format!(
            "{checked} iterates from 20 starts x 3 eps, {moved} left their start plane{}",
            if errors.is_empty() { String::new() } else { format!(", errors: {errors:?}") }
        ),
    }
}

fn main() -> ExitCode {
    let (c2, c3) = uniqueness_and_reduction();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "least-squares set", least_squares_set()),
        (2, "uniqueness / start independence", c2),
        (3, "dimension reduction", c3),
        (4, "closed form vs iteration", closed_form_vs_iteration()),
        (5, "oscillation", oscillation()),
        (6, "monotonicity of eps(c)", epsilon_monotonicity()),
        (7, "lambda-process oscillation", lambda_oscillation()),
        (8, "projection layer", projection_layer()),
        (9, "Example 1 plane invariance", plane_invariance()),
    ];
    let mut all = true;
    for (n, name, o) in &results {
        all &= o.pass;
        println!("{} criterion {n} ({name}): {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
