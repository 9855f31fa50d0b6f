//! Cyclic projections with a varying relaxation sequence.
//!
//! Schedules are given per loop: every step inside loop `k` uses `lambda_k`.

use std::str::FromStr;

use super::SetSystem;
use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleSegment {
    /// `loops` consecutive loops with the same relaxation.
    Const { lambda: f64, loops: u64 },
    /// `lambda_k = min(1, c / (k + 1))` with `k` counted from the start of the run.
    Harmonic { c: f64, loops: u64 },
}

/// A piecewise relaxation schedule.
///
/// Text form is a comma list of items: a bare number is one loop at that
/// relaxation, `const:L:N` is `N` loops at `L`, `harmonic:C:N` is `N` loops of
/// `min(1, C/(k+1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    segments: Vec<ScheduleSegment>,
}

impl Schedule {
    pub fn new(segments: Vec<ScheduleSegment>) -> Result<Self> {
        for s in &segments {
            match *s {
                ScheduleSegment::Const { lambda, .. } if !(lambda > 0.0 && lambda <= 1.0) => {
                    return Err(Error::InvalidArgument(format!("relaxation must lie in (0, 1], got {lambda}")));
                }
                ScheduleSegment::Harmonic { c, .. } if !(c > 0.0 && c.is_finite()) => {
                    return Err(Error::InvalidArgument(format!("harmonic constant must be positive, got {c}")));
                }
                _ => {}
            }
        }
        Ok(Self { segments })
    }

    pub fn constant(lambda: f64, loops: u64) -> Result<Self> {
        Self::new(vec![ScheduleSegment::Const { lambda, loops }])
    }

    pub fn segments(&self) -> &[ScheduleSegment] {
        &self.segments
    }

    pub fn total_loops(&self) -> u64 {
        self.segments
            .iter()
            .map(|s| match *s {
                ScheduleSegment::Const { loops, .. } | ScheduleSegment::Harmonic { loops, .. } => loops,
            })
            .sum()
    }

    /// Relaxation of each loop in order.
    pub fn per_loop(&self) -> impl Iterator<Item = f64> + '_ {
        let mut start = 0u64;
        self.segments.iter().flat_map(move |s| {
            let base = start;
            match *s {
                ScheduleSegment::Const { lambda, loops } => {
                    start += loops;
                    Box::new(std::iter::repeat(lambda).take(loops as usize)) as Box<dyn Iterator<Item = f64>>
                }
                ScheduleSegment::Harmonic { c, loops } => {
                    start += loops;
                    Box::new((base..base + loops).map(move |k| (c / (k + 1) as f64).min(1.0)))
                }
            }
        })
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |item: &str, why: String| Error::InvalidArgument(format!("bad schedule item `{item}`: {why}"));
        let mut segments = Vec::new();
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let parts: Vec<&str> = item.split(':').collect();
            let seg = match parts.as_slice() {
                [v] => ScheduleSegment::Const { lambda: v.parse().map_err(|e| bad(item, format!("{e}")))?, loops: 1 },
                ["const", l, n] => ScheduleSegment::Const {
                    lambda: l.parse().map_err(|e| bad(item, format!("{e}")))?,
                    loops: n.parse().map_err(|e| bad(item, format!("{e}")))?,
                },
                ["harmonic", c, n] => ScheduleSegment::Harmonic {
                    c: c.parse().map_err(|e| bad(item, format!("{e}")))?,
                    loops: n.parse().map_err(|e| bad(item, format!("{e}")))?,
                },
                _ => return Err(bad(item, "expected a number, const:L:N or harmonic:C:N".into())),
            };
            segments.push(seg);
        }
        if segments.is_empty() {
            return Err(Error::InvalidArgument("empty schedule".into()));
        }
        Schedule::new(segments)
    }
}

/// State at the end of one recorded loop.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopSample {
    /// Zero-based loop index.
    pub loop_index: u64,
    pub lambda: f64,
    /// Intra-loop iterates `u_{km+1}, ..., u_{km+m}`.
    pub points: Vec<Point>,
    /// Distance between the loop's last iterate and the previous loop's.
    pub displacement: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub start: Point,
    pub samples: Vec<LoopSample>,
    pub final_point: Point,
    pub loops: u64,
}

/// Runs `u_{n+1} = u_n + lambda_k (P_{i(n)}(u_n) - u_n)` over the schedule,
/// keeping every `record_every`-th loop plus the last one.
pub fn run_lambda_process(
    system: &SetSystem,
    start: &Point,
    schedule: &Schedule,
    record_every: u64,
) -> Result<Trajectory> {
    system.check_point(start)?;
    let record_every = record_every.max(1);
    let total = schedule.total_loops();
    let m = system.len();
    let mut cur = *start;
    let mut samples = Vec::new();
    let mut points = vec![cur; m];
    for (k, lambda) in schedule.per_loop().enumerate() {
        let k = k as u64;
        let before = cur;
        for (i, set) in system.sets().iter().enumerate() {
            let (w, _) = set.project_fast(&cur)?;
            cur = cur + (w - cur) * lambda;
            points[i] = cur;
        }
        if (k + 1) % record_every == 0 || k + 1 == total {
            samples.push(LoopSample { loop_index: k, lambda, points: points.clone(), displacement: cur.dist(&before) });
        }
    }
    Ok(Trajectory { start: *start, samples, final_point: cur, loops: total })
}
