pub mod convex_sets;
pub mod counterexample;
pub mod engine;
pub mod error;
pub mod output;
pub mod point;
pub mod verification;

pub use convex_sets::{verify_projection, ConvexSet, Face, ProjectionResult};
pub use error::{Error, Result};
pub use point::Point;
