use underrelax::counterexample::{point_a, point_b, Contact, CounterexampleModel, SweepEntry};
use underrelax::engine::{EpsilonCycle, Trajectory};
use underrelax::output::SvgPlot;
use underrelax::Point;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn xy(p: &Point) -> (f64, f64) {
    (p.x(), p.y())
}

fn unit_circle() -> Vec<(f64, f64)> {
    (0..72).map(|i| (i as f64 * std::f64::consts::TAU / 72.0).sin_cos()).map(|(s, c)| (c, s)).collect()
}

/// Trajectories in their start planes over the projected sets.
pub fn example1(runs: &[(f64, Trajectory, EpsilonCycle)]) -> String {
    let mut p = SvgPlot::new("Example 1: under-relaxed projections in the start plane", "x", "y").equal_aspect();
    p.polygon(&unit_circle(), "black", "#cccccc");
    for (q, name) in [(point_a(), "C1"), (point_b(), "C2")] {
        p.circle(xy(&q), 4.0, "black");
        p.label((q.x() + 0.1, q.y() + 0.1), name);
    }
    for (n, (eps, traj, cycle)) in runs.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        let mut pts = vec![xy(&traj.start)];
        pts.extend(traj.samples.iter().flat_map(|s| s.points.iter().map(xy)));
        p.polyline(&pts, color);
        let mut tri: Vec<(f64, f64)> = cycle.iterates.iter().map(xy).collect();
        tri.push(tri[0]);
        p.polyline(&tri, "black");
        p.label((traj.start.x(), traj.start.y()), &format!("eps={eps}, z={}", traj.start.z()));
    }
    p.render()
}

/// Heights against log10(eps); the contact-grid solves are drawn as dots.
pub fn height_vs_epsilon(entries: &[SweepEntry], witness: &[SweepEntry]) -> String {
    let mut p = SvgPlot::new("Cycle height against eps", "log10(eps)", "height");
    let curve = |es: &[SweepEntry]| {
        let mut v: Vec<(f64, f64)> =
            es.iter().filter_map(|e| e.outcome.as_ref().ok().map(|o| (e.epsilon.log10(), o.height))).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    p.polyline(&curve(entries), COLORS[0]);
    for q in curve(witness) {
        p.circle(q, 3.0, COLORS[1]);
    }
    p.polyline(&[(entries.iter().chain(witness).map(|e| e.epsilon.log10()).fold(0.0, f64::min), 0.0), (0.0, 0.0)], "gray");
    p.render()
}

/// Planar shadows of the cycles over the path of contact points.
pub fn gallery(model: &CounterexampleModel, entries: &[SweepEntry]) -> String {
    let mut p = SvgPlot::new("Planar cycles and the contact path", "x", "y").equal_aspect();
    let path: Vec<(f64, f64)> = (1..=model.k_count()).map(|k| xy(&model.v(k))).collect();
    p.polyline(&path, "black");
    p.circle(xy(&point_a()), 4.0, "black");
    p.circle(xy(&point_b()), 4.0, "black");
    for e in entries {
        if let Ok(o) = &e.outcome {
            let mut tri: Vec<(f64, f64)> = o.cycle.iterates.iter().map(xy).collect();
            tri.push(tri[0]);
            p.polyline(&tri, if o.height >= 0.0 { COLORS[0] } else { COLORS[1] });
        }
    }
    p.render()
}

/// eps(c) in path order.
pub fn epsilon_along_path(results: &[(Contact, EpsilonCycle)]) -> String {
    let mut p = SvgPlot::new("eps along the contact path", "k + s", "eps");
    let pts: Vec<(f64, f64)> =
        results.iter().map(|(c, cy)| (c.point().k as f64 + c.point().s, cy.epsilon)).collect();
    p.polyline(&pts, COLORS[0]);
    for q in &pts {
        p.circle(*q, 2.0, COLORS[0]);
    }
    p.render()
}

/// Mean height of each recorded loop.
pub fn trajectory_heights(traj: &Trajectory) -> String {
    let mut p = SvgPlot::new("Height along the trajectory", "loop", "mean z");
    let pts: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .filter(|s| s.points[0].dim() == 3)
        .map(|s| ((s.loop_index + 1) as f64, s.points.iter().map(Point::z).sum::<f64>() / s.points.len() as f64))
        .collect();
    p.polyline(&pts, COLORS[0]);
    p.render()
}
