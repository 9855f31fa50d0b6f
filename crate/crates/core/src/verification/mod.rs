//! Independent oracles and the seeded property suite.
//!
//! Every report owns its RNG stream, so reports can run concurrently and
//! still reproduce bit for bit from the seed.

mod oracles;
mod properties;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use oracles::{linear_cycle_oracle, project_simplex, qp_projection_oracle, QP_MAX_GENERATORS};

/// Worst cases kept per report.
const MAX_DETAILS: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
    pub details: Vec<String>,
}

impl OracleReport {
    pub fn new(name: &str, max_error: f64, tolerance: f64, samples: usize, details: Vec<String>) -> Self {
        // NaN never passes.
        let pass = max_error <= tolerance;
        Self { name: name.to_string(), max_error, tolerance, samples, pass, details }
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report fields are plain data")
    }
}

/// Deliberate defects used to show the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Flips the sign of the `beta / alpha` term in the contact relaxation.
    EpsilonFormula,
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epsilon-formula" => Ok(Mutation::EpsilonFormula),
            other => Err(Error::InvalidArgument(format!("unknown mutation {other:?}"))),
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::EpsilonFormula => f.write_str("epsilon-formula"),
        }
    }
}

type Task = fn(&mut ChaCha8Rng, Option<Mutation>) -> Vec<OracleReport>;

const TASKS: &[Task] = &[
    properties::projection_properties,
    properties::hull_vs_qp,
    properties::cycle_start_independence,
    properties::contraction_factor,
    properties::monotone_objective,
    properties::gradient_check,
    properties::linear_oracle_agreement,
    properties::formula_vs_iteration,
    properties::epsilon_monotonicity,
    properties::direction_limit,
    properties::omega_limit_report,
    properties::oscillation,
];

/// Runs every property check with the given seed.
///
/// Failures, including solver errors, end up in the reports. Report order
/// is fixed.
pub fn run_property_suite(seed: u64, mutation: Option<Mutation>) -> Vec<OracleReport> {
    TASKS
        .par_iter()
        .enumerate()
        .map(|(i, task)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            task(&mut rng, mutation)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Keeps the largest errors seen together with a description.
pub(crate) struct Worst {
    max: f64,
    cases: Vec<(f64, String)>,
    samples: usize,
}

impl Worst {
    pub(crate) fn new() -> Self {
        Self { max: 0.0, cases: Vec::new(), samples: 0 }
    }

    pub(crate) fn record(&mut self, err: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        // NaN propagates as a failure.
        if err.is_nan() || err > self.max {
            self.max = if err.is_nan() { f64::NAN } else { err };
        }
        let smallest = self.cases.last().map(|c| c.0).unwrap_or(f64::NEG_INFINITY);
        if self.cases.len() < MAX_DETAILS || err > smallest || err.is_nan() {
            self.cases.push((err, describe()));
            self.cases.sort_by(|a, b| b.0.total_cmp(&a.0));
            self.cases.truncate(MAX_DETAILS);
        }
    }

    /// Records a failure that has no numeric error.
    pub(crate) fn fail(&mut self, describe: String) {
        self.record(f64::INFINITY, || describe);
    }

    pub(crate) fn report(self, name: &str, tolerance: f64) -> OracleReport {
        let details = self.cases.into_iter().map(|(e, d)| format!("{e:.3e}: {d}")).collect();
        OracleReport::new(name, self.max, tolerance, self.samples, details)
    }
}
