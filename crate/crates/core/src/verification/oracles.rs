//! Reference solvers that share nothing with the production code paths
//! except point arithmetic.

use crate::error::{Error, Result};
use crate::point::Point;

pub const QP_MAX_GENERATORS: usize = 64;
const QP_MAX_ITERATIONS: usize = 500_000;
const QP_STATIONARITY: f64 = 1e-12;

/// Euclidean projection of `y` onto the probability simplex (sort based).
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut s = y.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, v) in s.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

fn combine(gens: &[Point], lambda: &[f64]) -> Point {
    let mut w = Point::zeros(gens[0].dim());
    for (g, l) in gens.iter().zip(lambda) {
        w += *g * *l;
    }
    w
}

/// Nearest point of `co{generators}` to `u`, from the weight-space problem
/// `min |sum_j l_j v_j - u|^2` over the simplex.
///
/// Accelerated projected gradient with constant step `1/L` and gradient-based
/// restarts, run until the gradient mapping is below `1e-12` (relative to the
/// problem scale) or the iteration cap.
pub fn qp_projection_oracle(generators: &[Point], u: &Point) -> Result<Point> {
    let n = generators.len();
    if n == 0 || n > QP_MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!("oracle handles 1..={QP_MAX_GENERATORS} generators, got {n}")));
    }
    if generators.iter().any(|g| g.dim() != u.dim()) {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: generators[0].dim() });
    }
    // Frobenius bound on the largest eigenvalue of 2 V^T V.
    let lip = 2.0 * generators.iter().map(Point::norm_sq).sum::<f64>().max(f64::MIN_POSITIVE);
    let scale = 1.0 + u.norm_sq() + generators.iter().map(Point::norm_sq).fold(0.0, f64::max);
    let grad = |lambda: &[f64]| -> Vec<f64> {
        let r = combine(generators, lambda) - *u;
        generators.iter().map(|g| 2.0 * g.dot(&r)).collect()
    };

    let mut x = vec![1.0 / n as f64; n];
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..QP_MAX_ITERATIONS {
        let g = grad(&y);
        let step: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| yi - gi / lip).collect();
        let x_new = project_simplex(&step);

        let gx = grad(&x_new);
        let probe: Vec<f64> = x_new.iter().zip(&gx).map(|(xi, gi)| xi - gi / lip).collect();
        let mapped = project_simplex(&probe);
        let stationarity = lip * x_new.iter().zip(&mapped).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if stationarity <= QP_STATIONARITY * scale {
            return Ok(combine(generators, &x_new));
        }

        // Restart when the momentum direction points uphill.
        let uphill: f64 = g.iter().zip(x_new.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
        let t_new = if uphill > 0.0 { 1.0 } else { 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt()) };
        let beta = if uphill > 0.0 { 0.0 } else { (t - 1.0) / t_new };
        y = x_new.iter().zip(&x).map(|(a, b)| a + beta * (a - b)).collect();
        x = x_new;
        t = t_new;
    }
    Ok(combine(generators, &x))
}

/// Solves `u_1 = (1-e) u_3 + e w_1`, `u_2 = (1-e) u_1 + e w_2`,
/// `u_3 = (1-e) u_2 + e w_3` by eliminating `u_1` and `u_2` into the last
/// equation, then substituting forward.
pub fn linear_cycle_oracle(w: &[Point; 3], eps: f64) -> Result<[Point; 3]> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("relaxation must lie in (0, 1], got {eps}")));
    }
    let q = 1.0 - eps;
    // u_3 (1 - q^3) = q^2 e w_1 + q e w_2 + e w_3
    let lhs = 1.0 - q * q * q;
    let u3 = (w[0] * (q * q * eps) + w[1] * (q * eps) + w[2] * eps) * (1.0 / lhs);
    let u1 = u3 * q + w[0] * eps;
    let u2 = u1 * q + w[1] * eps;
    Ok([u1, u2, u3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection_basics() {
        assert_eq!(project_simplex(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
        assert_eq!(project_simplex(&[5.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.0, 0.0, 0.0, 0.0]);
        assert!(p.iter().all(|v| (v - 0.25).abs() < 1e-16));
    }

    #[test]
    fn single_generator() {
        let g = [Point::new2(1.0, -2.0)];
        assert_eq!(qp_projection_oracle(&g, &Point::new2(7.0, 7.0)).unwrap(), g[0]);
    }

    #[test]
    fn bisector_gives_midpoint() {
        let g = [Point::new2(-1.0, 0.0), Point::new2(1.0, 0.0)];
        let w = qp_projection_oracle(&g, &Point::new2(0.0, 3.0)).unwrap();
        assert!(w.norm() < 1e-12, "{w:?}");
    }

    #[test]
    fn linear_oracle_at_one_and_constant_support() {
        let w = [Point::new2(1.0, 2.0), Point::new2(-1.0, 0.5), Point::new2(0.0, -3.0)];
        assert_eq!(linear_cycle_oracle(&w, 1.0).unwrap(), w);
        let p = Point::new3(0.3, -0.2, 0.9);
        for u in linear_cycle_oracle(&[p, p, p], 0.37).unwrap() {
            assert!(u.dist(&p) < 1e-15);
        }
        assert!(linear_cycle_oracle(&w, 0.0).is_err());
    }

    #[test]
    fn linear_oracle_half_relaxation() {
        // u_3 = [0.25 a + 0.5 b + v_1] / 1.75 for support (a, b, v_1).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, v1) = (Point::new2(-2.0, 2.0), Point::new2(2.0, 2.0), Point::new2(h, h));
        let u = linear_cycle_oracle(&[a, b, v1], 0.5).unwrap();
        let expected = (a * 0.25 + b * 0.5 + v1) * (1.0 / 1.75);
        assert!(u[2].dist(&expected) < 1e-15);
    }
}
