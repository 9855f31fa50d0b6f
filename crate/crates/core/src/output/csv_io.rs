use std::io::{Read, Write};

use crate::counterexample::{Contact, SweepEntry};
use crate::engine::{EpsilonCycle, Trajectory};
use crate::error::{Error, Result};
use crate::point::Point;

/// 17 significant digits, enough to round-trip every `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse { line, message: format!("bad number {field:?}") })
}

fn parse_opt_f64(field: &str, line: usize) -> Result<Option<f64>> {
    if field.trim().is_empty() { Ok(None) } else { parse_f64(field, line).map(Some) }
}

fn parse_int<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field.trim().parse().map_err(|_| Error::Parse { line, message: format!("bad integer {field:?}") })
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse { line, message: e.to_string() }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Iterate,
    Support,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Iterate => "iterate",
            Role::Support => "support",
        }
    }
}

/// One point of a cycle or trajectory. `z` is empty for planar data.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRow {
    pub epsilon: f64,
    pub loop_index: u64,
    pub i: usize,
    pub point: Point,
    pub role: Role,
    pub residual: f64,
}

const POINT_HEADER: [&str; 8] = ["epsilon", "loop", "i", "x", "y", "z", "role", "residual"];

/// Iterates `u_1..u_m`, then supports `w_1..w_m`, all tagged with the
/// cycle's loop count. `i` is 1-based.
pub fn cycle_rows(cycle: &EpsilonCycle) -> Vec<PointRow> {
    let tagged = |pts: &[Point], role| {
        pts.iter()
            .enumerate()
            .map(|(i, p)| PointRow {
                epsilon: cycle.epsilon,
                loop_index: cycle.loops,
                i: i + 1,
                point: *p,
                role,
                residual: cycle.residual,
            })
            .collect::<Vec<_>>()
    };
    let mut rows = tagged(&cycle.iterates, Role::Iterate);
    rows.extend(tagged(&cycle.support, Role::Support));
    rows
}

/// The start as loop 0, then each recorded loop numbered from 1. The
/// residual column holds the loop displacement.
pub fn trajectory_rows(traj: &Trajectory) -> Vec<PointRow> {
    let mut rows = vec![PointRow {
        epsilon: traj.samples.first().map(|s| s.lambda).unwrap_or(f64::NAN),
        loop_index: 0,
        i: 0,
        point: traj.start,
        role: Role::Iterate,
        residual: f64::NAN,
    }];
    for s in &traj.samples {
        for (i, p) in s.points.iter().enumerate() {
            rows.push(PointRow {
                epsilon: s.lambda,
                loop_index: s.loop_index + 1,
                i: i + 1,
                point: *p,
                role: Role::Iterate,
                residual: s.displacement,
            });
        }
    }
    rows
}

pub fn write_point_rows<W: Write>(out: W, rows: &[PointRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(POINT_HEADER).map_err(csv_err)?;
    for r in rows {
        let z = if r.point.dim() == 3 { fmt_f64(r.point.z()) } else { String::new() };
        w.write_record([
            fmt_f64(r.epsilon),
            r.loop_index.to_string(),
            r.i.to_string(),
            fmt_f64(r.point.x()),
            fmt_f64(r.point.y()),
            z,
            r.role.as_str().to_string(),
            fmt_f64(r.residual),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_point_rows<R: Read>(input: R) -> Result<Vec<PointRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(POINT_HEADER) {
        return Err(Error::Parse { line: 1, message: format!("unexpected header {header:?}") });
    }
    let mut rows = Vec::new();
    for (n, rec) in rd.records().enumerate() {
        let line = n + 2;
        let rec = rec.map_err(csv_err)?;
        let (x, y) = (parse_f64(&rec[3], line)?, parse_f64(&rec[4], line)?);
        let point = match parse_opt_f64(&rec[5], line)? {
            Some(z) => Point::new3(x, y, z),
            None => Point::new2(x, y),
        };
        let role = match &rec[6] {
            "iterate" => Role::Iterate,
            "support" => Role::Support,
            other => return Err(Error::Parse { line, message: format!("unknown role {other:?}") }),
        };
        rows.push(PointRow {
            epsilon: parse_f64(&rec[0], line)?,
            loop_index: parse_int(&rec[1], line)?,
            i: parse_int(&rec[2], line)?,
            point,
            role,
            residual: parse_f64(&rec[7], line)?,
        });
    }
    Ok(rows)
}

/// One grid point of an epsilon sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    /// `path`, `plateau`, or empty when eps is outside the model's reach.
    pub contact: String,
    pub k: Option<usize>,
    pub s: Option<f64>,
    pub height: Option<f64>,
    pub z_spread: Option<f64>,
    pub iterates: Vec<Point>,
    pub residual: Option<f64>,
    pub loops: Option<u64>,
    /// Solver error message, empty on success.
    pub error: String,
}

const SWEEP_HEADER: [&str; 18] = [
    "epsilon", "contact", "k", "s", "height", "z_spread", "u1_x", "u1_y", "u1_z", "u2_x", "u2_y", "u2_z", "u3_x",
    "u3_y", "u3_z", "residual", "loops", "error",
];

pub fn sweep_rows(entries: &[SweepEntry]) -> Vec<SweepRow> {
    entries
        .iter()
        .map(|e| match &e.outcome {
            Ok(o) => {
                let predicted = o.predicted.as_ref();
                SweepRow {
                    epsilon: e.epsilon,
                    contact: predicted.map(|c| c.kind().to_string()).unwrap_or_default(),
                    k: predicted.map(|c| c.point().k),
                    s: predicted.map(|c| c.point().s),
                    height: Some(o.height),
                    z_spread: Some(o.z_spread),
                    iterates: o.cycle.iterates.clone(),
                    residual: Some(o.cycle.residual),
                    loops: Some(o.cycle.loops),
                    error: String::new(),
                }
            }
            Err(err) => SweepRow {
                epsilon: e.epsilon,
                contact: String::new(),
                k: None,
                s: None,
                height: None,
                z_spread: None,
                iterates: Vec::new(),
                residual: None,
                loops: None,
                error: err.to_string(),
            },
        })
        .collect()
}

/// Rows for closed-form cycles, one per contact.
pub fn contact_rows(contacts: &[(Contact, EpsilonCycle)]) -> Vec<SweepRow> {
    contacts
        .iter()
        .map(|(c, cycle)| SweepRow {
            epsilon: cycle.epsilon,
            contact: c.kind().to_string(),
            k: Some(c.point().k),
            s: Some(c.point().s),
            height: Some(cycle.height()),
            z_spread: Some(cycle.z_spread()),
            iterates: cycle.iterates.clone(),
            residual: Some(cycle.residual),
            loops: Some(cycle.loops),
            error: String::new(),
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_sweep_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            fmt_f64(r.epsilon),
            r.contact.clone(),
            r.k.map(|k| k.to_string()).unwrap_or_default(),
            opt(r.s),
            opt(r.height),
            opt(r.z_spread),
        ];
        for i in 0..3 {
            let p = r.iterates.get(i);
            for c in 0..3 {
                rec.push(opt(p.filter(|p| c < p.dim()).map(|p| p[c])));
            }
        }
        rec.push(opt(r.residual));
        rec.push(r.loops.map(|l| l.to_string()).unwrap_or_default());
        rec.push(r.error.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_sweep_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::Parse { line: 1, message: format!("unexpected header {header:?}") });
    }
    let mut rows = Vec::new();
    for (n, rec) in rd.records().enumerate() {
        let line = n + 2;
        let rec = rec.map_err(csv_err)?;
        let mut iterates = Vec::new();
        for i in 0..3 {
            let c: Vec<Option<f64>> =
                (0..3).map(|j| parse_opt_f64(&rec[6 + 3 * i + j], line)).collect::<Result<_>>()?;
            match c[..] {
                [Some(x), Some(y), Some(z)] => iterates.push(Point::new3(x, y, z)),
                [Some(x), Some(y), None] => iterates.push(Point::new2(x, y)),
                _ => {}
            }
        }
        let k = if rec[2].is_empty() { None } else { Some(parse_int(&rec[2], line)?) };
        let loops = if rec[16].is_empty() { None } else { Some(parse_int(&rec[16], line)?) };
        rows.push(SweepRow {
            epsilon: parse_f64(&rec[0], line)?,
            contact: rec[1].to_string(),
            k,
            s: parse_opt_f64(&rec[3], line)?,
            height: parse_opt_f64(&rec[4], line)?,
            z_spread: parse_opt_f64(&rec[5], line)?,
            iterates,
            residual: parse_opt_f64(&rec[15], line)?,
            loops,
            error: rec[17].to_string(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{epsilon_sweep, AngleRule, CounterexampleModel};
    use crate::engine::{example1_system, run_lambda_process, solve_cycle, CycleOptions, GridMode, Schedule};

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn cycle_csv_round_trip() {
        let sys = example1_system();
        let c = solve_cycle(&sys, &Point::new3(1.0, -1.0, 0.5), 0.5, &CycleOptions::default()).unwrap();
        let rows = cycle_rows(&c);
        assert_eq!(rows.len(), 6);
        let mut buf = Vec::new();
        write_point_rows(&mut buf, &rows).unwrap();
        assert_eq!(read_point_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn trajectory_csv_round_trip_with_planar_points() {
        let sys = crate::engine::SetSystem::new(vec![
            crate::ConvexSet::point(Point::new2(0.0, 0.0)).unwrap(),
            crate::ConvexSet::point(Point::new2(1.0, 0.0)).unwrap(),
        ])
        .unwrap();
        let t = run_lambda_process(&sys, &Point::new2(3.0, 3.0), &Schedule::constant(0.5, 5).unwrap(), 1).unwrap();
        let rows = trajectory_rows(&t);
        let mut buf = Vec::new();
        write_point_rows(&mut buf, &rows).unwrap();
        let back = read_point_rows(&buf[..]).unwrap();
        // NaN residual on the start row compares unequal; check it separately.
        assert!(back[0].residual.is_nan());
        assert_eq!(back[1..], rows[1..]);
        assert_eq!(back[0].point, rows[0].point);
    }

    #[test]
    fn sweep_csv_round_trip_keeps_errors() {
        let m = CounterexampleModel::build(6, &AngleRule::Default).unwrap();
        let opts = CycleOptions { max_loops: 1, polish: false, ..CycleOptions::default() };
        let entries = epsilon_sweep(&m, &[0.9, 0.5], &Point::new3(5.0, 5.0, 5.0), &opts, GridMode::Parallel);
        let mut rows = sweep_rows(&entries);
        assert!(rows.iter().all(|r| !r.error.is_empty()));
        let good = epsilon_sweep(&m, &[0.5], &Point::new3(0.0, 1.0, 0.0), &CycleOptions::default(), GridMode::Parallel);
        rows.extend(sweep_rows(&good));
        let mut buf = Vec::new();
        write_sweep_rows(&mut buf, &rows).unwrap();
        assert_eq!(read_sweep_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_point_rows("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_sweep_rows("epsilon\n1\n".as_bytes()).is_err());
    }
}
