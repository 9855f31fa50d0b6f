use super::{check_epsilon, SetSystem};
use crate::error::{Error, Result};
use crate::point::Point;

/// `eps^2 - 3 eps + 3`, the normalizer of the three-set cycle formulas.
pub fn contraction_denominator(eps: f64) -> f64 {
    eps * eps - 3.0 * eps + 3.0
}

/// Recovers the unique cycle generated by a fixed support tuple.
///
/// Solving `u_i = (1 - eps) u_{i-1} + eps w_i` around the loop gives
/// `u_i = sum_j (1 - eps)^j w_{i-j} / sum_j (1 - eps)^j` for `j = 0..m-1`,
/// a convex combination, so nothing cancels even for tiny `eps`.
pub fn iterates_from_support(support: &[Point], eps: f64) -> Result<Vec<Point>> {
    check_epsilon(eps)?;
    let m = support.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty support".into()));
    }
    let dim = support[0].dim();
    if let Some(p) = support.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
    }
    let q = 1.0 - eps;
    let mut weights = Vec::with_capacity(m);
    let mut w = 1.0;
    for _ in 0..m {
        weights.push(w);
        w *= q;
    }
    let total: f64 = weights.iter().sum();
    Ok((0..m)
        .map(|i| {
            let mut acc = Point::zeros(dim);
            for (j, wt) in weights.iter().enumerate() {
                acc += support[(i + m - j) % m] * *wt;
            }
            acc * (1.0 / total)
        })
        .collect())
}

/// `w_i = P_i(u_{i-1})` for a candidate tuple of iterates.
pub fn support_of(system: &SetSystem, iterates: &[Point]) -> Result<Vec<Point>> {
    let m = system.len();
    if iterates.len() != m {
        return Err(Error::InvalidArgument(format!("expected {m} iterates, got {}", iterates.len())));
    }
    (0..m).map(|i| Ok(system.sets()[i].project_fast(&iterates[(i + m - 1) % m])?.0)).collect()
}
