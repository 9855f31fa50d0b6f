mod plots;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use underrelax::counterexample::{
    contact_grid, epsilon_sweep, witness_from_sweep, AngleRule, CounterexampleModel, PathPoint,
};
use underrelax::engine::{
    example1_system, least_squares_gradient, least_squares_objective, run_lambda_process, solve_cycle,
    solve_least_squares, CycleOptions, GridMode, LeastSquaresOptions, Schedule, SetSystem,
};
use underrelax::output::{
    contact_rows, cycle_rows, fmt_f64, sweep_rows, trajectory_rows, write_point_rows, write_sweep_rows,
};
use underrelax::verification::{run_property_suite, Mutation};
use underrelax::Point;

#[derive(Parser)]
#[command(name = "underrelax", version, about = "Under-relaxed cyclic projections and the oscillating counterexample")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trajectories of two segments and a cylinder, which stay in their start plane.
    Example1(Example1Args),
    /// eps-cycles of the counterexample; exits 0 only if the heights oscillate.
    CounterexampleSweep(SweepArgs),
    /// eps(c) and closed-form cycles at path points, or the inverse map.
    EpsilonOfContact(ContactArgs),
    /// Runs the process with a relaxation schedule.
    LambdaRun(LambdaArgs),
    /// Minimizes the sum of squared distances.
    LeastSquares(LeastSquaresArgs),
    /// Runs the seeded property suite; exits 0 only if every report passes.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Number of hull vertices.
    #[arg(long = "K", visible_alias = "k", default_value_t = CounterexampleModel::DEFAULT_K)]
    k: usize,
    /// `default` or a file of angles in radians.
    #[arg(long, default_value = "default")]
    angle_rule: String,
}

impl ModelArgs {
    fn build(&self) -> Result<CounterexampleModel> {
        let rule = if self.angle_rule == "default" {
            AngleRule::Default
        } else {
            let text = fs::read_to_string(&self.angle_rule)
                .with_context(|| format!("reading angle file {}", self.angle_rule))?;
            AngleRule::parse_custom(&text)?
        };
        Ok(CounterexampleModel::build(self.k, &rule)?)
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_loops: u64,
}

impl SolverArgs {
    fn options(&self) -> Result<CycleOptions> {
        if !(self.tol > 0.0) {
            bail!("--tol must be positive");
        }
        if self.max_loops == 0 {
            bail!("--max-loops must be positive");
        }
        Ok(CycleOptions { tol: self.tol, max_loops: self.max_loops, ..CycleOptions::default() })
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemKind {
    Example1,
    Counterexample,
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let c: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate {t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if c.len() != 3 {
        return Err(format!("expected x,y,z, got {} coordinates", c.len()));
    }
    Point::from_slice(&c).map_err(|e| e.to_string())
}

fn parse_contact(s: &str) -> std::result::Result<(usize, f64), String> {
    let (k, t) = s.split_once(':').ok_or("expected k:s")?;
    Ok((k.trim().parse().map_err(|e| format!("bad k: {e}"))?, t.trim().parse().map_err(|e| format!("bad s: {e}"))?))
}

#[derive(Args)]
struct Example1Args {
    #[arg(long = "epsilon", value_delimiter = ',', default_value = "0.5")]
    epsilons: Vec<f64>,
    /// Start point x,y,z; repeat for several trajectories.
    #[arg(long = "start", value_parser = parse_point, allow_hyphen_values = true, default_values = ["1.5,-1,0.5", "-1,3,-0.25"])]
    starts: Vec<Point>,
    #[arg(long, default_value_t = 200)]
    loops: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Explicit eps values. Without them, and without an eps range, only the
    /// contact grid is swept.
    #[arg(long = "epsilon", value_delimiter = ',')]
    epsilons: Vec<f64>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_steps: Option<usize>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,1,0")]
    start: Point,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Planar picture of the cycles.
    #[arg(long)]
    gallery_svg: Option<PathBuf>,
}

#[derive(Args)]
struct ContactArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Path point `k:s`; repeatable.
    #[arg(long = "contact", value_parser = parse_contact)]
    contacts: Vec<(usize, f64)>,
    /// Evenly spaced points per segment when no contact is given.
    #[arg(long, default_value_t = 4)]
    per_segment: usize,
    /// Inverts eps -> contact instead.
    #[arg(long = "epsilon", value_delimiter = ',')]
    epsilons: Vec<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long, value_enum, default_value = "counterexample")]
    system: SystemKind,
    #[command(flatten)]
    model: ModelArgs,
    /// Comma list of `L`, `const:L:N` or `harmonic:C:N` items.
    #[arg(long)]
    schedule: String,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,1,0")]
    start: Point,
    #[arg(long, default_value_t = 1)]
    record_every: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct LeastSquaresArgs {
    #[arg(long, value_enum, default_value = "counterexample")]
    system: SystemKind,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long = "start", value_parser = parse_point, allow_hyphen_values = true, default_values = ["3,-2,0.5"])]
    starts: Vec<Point>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_iterations: u64,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deliberately break a formula to show the suite catches it.
    #[arg(long)]
    mutate: Option<Mutation>,
    /// Also write the JSON-lines report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        bail!("epsilon must lie in (0, 1], got {eps}");
    }
    Ok(())
}

fn system_for(kind: SystemKind, model: &ModelArgs) -> Result<SetSystem> {
    Ok(match kind {
        SystemKind::Example1 => example1_system(),
        SystemKind::Counterexample => model.build()?.sets3d().clone(),
    })
}

fn cmd_example1(a: &Example1Args) -> Result<ExitCode> {
    if a.epsilons.is_empty() || a.starts.is_empty() {
        bail!("need at least one epsilon and one start");
    }
    let opts = a.solver.options()?;
    let system = example1_system();
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for &eps in &a.epsilons {
        check_epsilon(eps)?;
        for start in &a.starts {
            let traj = run_lambda_process(&system, start, &Schedule::constant(eps, a.loops)?, 1)?;
            let cycle = solve_cycle(&system, &traj.final_point, eps, &opts)?;
            let planar = traj.samples.iter().flat_map(|s| &s.points).all(|p| p.z() == start.z());
            println!(
                "eps={eps} start=({}, {}, {}) plane z={} kept={planar} cycle diameter={:.6e}",
                start.x(),
                start.y(),
                start.z(),
                start.z(),
                cycle.diameter()
            );
            rows.extend(trajectory_rows(&traj));
            rows.extend(cycle_rows(&cycle));
            runs.push((eps, traj, cycle));
        }
    }
    if let Some(p) = &a.out.out_csv {
        let mut buf = Vec::new();
        write_point_rows(&mut buf, &rows)?;
        write_file(p, &buf)?;
    }
    if let Some(p) = &a.out.out_svg {
        write_file(p, plots::example1(&runs).as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_epsilon(lo)?;
    check_epsilon(hi)?;
    if lo > hi || n == 0 {
        bail!("need eps-min <= eps-max and eps-steps >= 1");
    }
    if n == 1 {
        return Ok(vec![hi]);
    }
    Ok((0..n).map(|i| hi * (lo / hi).powf(i as f64 / (n - 1) as f64)).collect())
}

fn cmd_sweep(a: &SweepArgs) -> Result<ExitCode> {
    let model = a.model.build()?;
    let opts = a.solver.options()?;
    let mode = GridMode::Parallel;

    let k_max = model.k_count().saturating_sub(2);
    if k_max < 2 {
        warn!("K too small: K={} leaves {k_max} witness segment(s), no alternation possible", model.k_count());
    }
    let contacts: Vec<PathPoint> = contact_grid(&model, k_max)?;
    let contact_eps = contacts.iter().map(|c| model.epsilon_of_contact(c)).collect::<underrelax::Result<Vec<_>>>()?;
    let witness = witness_from_sweep(contacts, epsilon_sweep(&model, &contact_eps, &a.start, &opts, mode));

    let explicit = if !a.epsilons.is_empty() {
        a.epsilons.iter().try_for_each(|&e| check_epsilon(e))?;
        Some(a.epsilons.clone())
    } else if a.eps_min.is_some() || a.eps_max.is_some() || a.eps_steps.is_some() {
        let lo = a.eps_min.unwrap_or(1.01 * model.eps_min()?);
        Some(geometric_grid(lo, a.eps_max.unwrap_or(0.9), a.eps_steps.unwrap_or(20))?)
    } else {
        None
    };
    let entries = match &explicit {
        Some(grid) => epsilon_sweep(&model, grid, &a.start, &opts, mode),
        None => witness.sweep.clone(),
    };

    for e in &entries {
        match &e.outcome {
            Ok(o) => {
                let pred = o
                    .predicted
                    .map(|c| format!("{} k={} s={:.6} predicted height {:.9}", c.kind(), c.point().k, c.point().s, c.height()))
                    .unwrap_or_else(|| "below truncation reach".into());
                println!(
                    "eps={:.9} height={:.9} z_spread={:.1e} loops={} ({pred})",
                    e.epsilon, o.height, o.z_spread, o.cycle.loops
                );
            }
            Err(err) => println!("eps={:.9} failed: {err}", e.epsilon),
        }
    }
    println!(
        "witness: {} alternations over {} contacts, max | |height| - 0.5 | = {:.3e}, holds = {}",
        witness.alternations,
        witness.contacts.len(),
        witness.max_height_error,
        witness.holds
    );

    if let Some(p) = &a.out.out_csv {
        let mut buf = Vec::new();
        write_sweep_rows(&mut buf, &sweep_rows(&entries))?;
        write_file(p, &buf)?;
    }
    if let Some(p) = &a.out.out_svg {
        write_file(p, plots::height_vs_epsilon(&entries, &witness.sweep).as_bytes())?;
    }
    if let Some(p) = &a.gallery_svg {
        write_file(p, plots::gallery(&model, &entries).as_bytes())?;
    }
    Ok(if witness.holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_contact(a: &ContactArgs) -> Result<ExitCode> {
    let model = a.model.build()?;
    let mut results = Vec::new();
    if !a.epsilons.is_empty() {
        for &eps in &a.epsilons {
            check_epsilon(eps)?;
            results.push(model.cycle_for_epsilon(eps)?);
        }
    } else {
        let points: Vec<PathPoint> = if a.contacts.is_empty() {
            if a.per_segment == 0 {
                bail!("--per-segment must be positive");
            }
            let mut v = Vec::new();
            for k in 1..model.k_count() {
                for j in 0..a.per_segment {
                    v.push(model.path_point(k, j as f64 / a.per_segment as f64)?);
                }
            }
            v
        } else {
            a.contacts.iter().map(|&(k, s)| model.path_point(k, s)).collect::<underrelax::Result<_>>()?
        };
        for c in points {
            let cycle = model.cycle_from_contact(&c)?;
            let contact = model.invert_epsilon(cycle.epsilon).unwrap_or(underrelax::counterexample::Contact::Path(c));
            results.push((contact, cycle));
        }
    }
    for (c, cycle) in &results {
        let p = c.point();
        println!(
            "k={} s={:.6} c=({:.9}, {:.9}) eps={:.12} height={:.6} {}",
            p.k,
            p.s,
            p.point.x(),
            p.point.y(),
            cycle.epsilon,
            cycle.height(),
            c.kind()
        );
    }
    if let Some(path) = &a.out.out_csv {
        let mut buf = Vec::new();
        write_sweep_rows(&mut buf, &contact_rows(&results))?;
        write_file(path, &buf)?;
    }
    if let Some(path) = &a.out.out_svg {
        write_file(path, plots::epsilon_along_path(&results).as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lambda(a: &LambdaArgs) -> Result<ExitCode> {
    let system = system_for(a.system, &a.model)?;
    let schedule: Schedule = a.schedule.parse()?;
    let traj = run_lambda_process(&system, &a.start, &schedule, a.record_every)?;
    let f = traj.final_point;
    println!("{} loops, final point ({}, {}, {})", traj.loops, f.x(), f.y(), f.z());
    if let Some(p) = &a.out.out_csv {
        let mut buf = Vec::new();
        write_point_rows(&mut buf, &trajectory_rows(&traj))?;
        write_file(p, &buf)?;
    }
    if let Some(p) = &a.out.out_svg {
        write_file(p, plots::trajectory_heights(&traj).as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_least_squares(a: &LeastSquaresArgs) -> Result<ExitCode> {
    let system = system_for(a.system, &a.model)?;
    let opts = LeastSquaresOptions { tol: a.tol, max_iterations: a.max_iterations };
    let mut csv = String::from("start_x,start_y,start_z,x,y,z,objective,gradient_norm\n");
    for start in &a.starts {
        let u = solve_least_squares(&system, start, &opts)?;
        let f = least_squares_objective(&system, &u)?;
        let g = least_squares_gradient(&system, &u)?.norm();
        println!("start ({}, {}, {}) -> ({}, {}, {}), objective {f}, gradient norm {g:e}", start.x(), start.y(), start.z(), u.x(), u.y(), u.z());
        let fields: Vec<String> = start.coords().iter().chain(u.coords()).chain([f, g].iter()).map(|v| fmt_f64(*v)).collect();
        csv.push_str(&fields.join(","));
        csv.push('\n');
    }
    if let Some(p) = &a.out_csv {
        write_file(p, csv.as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let reports = run_property_suite(a.seed, a.mutate);
    let mut lines = String::new();
    for r in &reports {
        lines.push_str(&r.to_json_line());
        lines.push('\n');
    }
    print!("{lines}");
    if let Some(p) = &a.out {
        write_file(p, lines.as_bytes())?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    eprintln!("{} of {} reports passed", reports.len() - failed.len(), reports.len());
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Example1(a) => cmd_example1(a),
        Command::CounterexampleSweep(a) => cmd_sweep(a),
        Command::EpsilonOfContact(a) => cmd_contact(a),
        Command::LambdaRun(a) => cmd_lambda(a),
        Command::LeastSquares(a) => cmd_least_squares(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
