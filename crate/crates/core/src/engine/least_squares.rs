use super::SetSystem;
use crate::error::{Error, Result};
use crate::point::Point;

/// `sum_i d(u, C_i)^2`.
pub fn least_squares_objective(system: &SetSystem, u: &Point) -> Result<f64> {
    system.check_point(u)?;
    let mut f = 0.0;
    for set in system.sets() {
        f += (*u - set.project_fast(u)?.0).norm_sq();
    }
    Ok(f)
}

/// Normalized objective `(1 / 2m) sum_i d(u, C_i)^2`.
pub fn least_squares_phi(system: &SetSystem, u: &Point) -> Result<f64> {
    Ok(least_squares_objective(system, u)? / (2.0 * system.len() as f64))
}

/// Gradient of the objective, `2 sum_i (u - P_i(u))`.
pub fn least_squares_gradient(system: &SetSystem, u: &Point) -> Result<Point> {
    system.check_point(u)?;
    let mut g = Point::zeros(system.dim());
    for set in system.sets() {
        g += (*u - set.project_fast(u)?.0) * 2.0;
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeastSquaresOptions {
    /// Stop when the gradient norm drops to this value.
    pub tol: f64,
    pub max_iterations: u64,
}

impl Default for LeastSquaresOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iterations: 1_000_000 }
    }
}

/// Gradient descent with step `1 / 2m`, which is the averaged-projections
/// map `u <- mean_i P_i(u)`.
pub fn solve_least_squares(system: &SetSystem, start: &Point, opts: &LeastSquaresOptions) -> Result<Point> {
    system.check_point(start)?;
    let m = system.len() as f64;
    let mut u = *start;
    let mut g = least_squares_gradient(system, &u)?;
    for _ in 0..opts.max_iterations {
        if g.norm() <= opts.tol {
            return Ok(u);
        }
        u = u - g * (1.0 / (2.0 * m));
        g = least_squares_gradient(system, &u)?;
    }
    if g.norm() <= opts.tol {
        return Ok(u);
    }
    Err(Error::LeastSquaresNotConverged { iterations: opts.max_iterations, gradient_norm: g.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::example1_system;

    #[test]
    fn example1_least_squares_point() {
        let sys = example1_system();
        let u = solve_least_squares(&sys, &Point::new3(0.4, -3.0, 0.25), &LeastSquaresOptions::default()).unwrap();
        assert!(u.dist(&Point::new3(0.0, 5.0 / 3.0, 0.25)) < 1e-10, "{u:?}");
        // Distances: sqrt(4 + 1/9) to each segment, 2/3 to the disc.
        let expected = 2.0 * (4.0 + 1.0 / 9.0) + 4.0 / 9.0;
        assert!((least_squares_objective(&sys, &u).unwrap() - expected).abs() < 1e-9);
        assert!((least_squares_phi(&sys, &u).unwrap() - expected / 6.0).abs() < 1e-9);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let sys = example1_system();
        let u = Point::new3(0.3, 2.5, 0.1);
        let g = least_squares_gradient(&sys, &u).unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let mut up = u;
            let mut dn = u;
            up.set(k, u[k] + h);
            dn.set(k, u[k] - h);
            let fd = (least_squares_objective(&sys, &up).unwrap() - least_squares_objective(&sys, &dn).unwrap()) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-6, "component {k}: {fd} vs {}", g[k]);
        }
    }
}
