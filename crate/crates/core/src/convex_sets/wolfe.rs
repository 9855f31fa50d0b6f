//! Wolfe's nearest-point algorithm for the convex hull of finitely many points.
//!
//! Works on the translated generators `y_j = v_j - u` and looks for the
//! minimum-norm point of `co{y_j}`. The major cycle adds the generator that
//! most violates the optimality certificate; the minor cycle moves to the
//! affine minimizer of the current corral, dropping generators whose weight
//! would turn negative. Termination is certificate based: the point `w` is
//! accepted once `max_j <v_j - w, u - w> <= tol`.

use crate::convex_sets::{Face, ProjectionResult};
use crate::error::{Error, Result};
use crate::point::Point;

/// A corral never holds more than `dim + 1` affinely independent generators.
const MAX_CORRAL: usize = 4;

/// Relative threshold below which a new corral column counts as affinely dependent.
const DEPENDENCE_RTOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug)]
struct Corral {
    idx: [usize; MAX_CORRAL],
    weight: [f64; MAX_CORRAL],
    len: usize,
}

impl Corral {
    fn single(j: usize) -> Self {
        let mut c = Corral { idx: [0; MAX_CORRAL], weight: [0.0; MAX_CORRAL], len: 1 };
        c.idx[0] = j;
        c.weight[0] = 1.0;
        c
    }

    fn contains(&self, j: usize) -> bool {
        self.idx[..self.len].contains(&j)
    }

    fn push(&mut self, j: usize, w: f64) {
        self.idx[self.len] = j;
        self.weight[self.len] = w;
        self.len += 1;
    }

    /// Drops members with non-positive weight, keeping relative order.
    fn compact(&mut self) {
        let mut k = 0;
        for i in 0..self.len {
            if self.weight[i] > 0.0 {
                self.idx[k] = self.idx[i];
                self.weight[k] = self.weight[i];
                k += 1;
            }
        }
        self.len = k;
    }

    fn point(&self, gens: &[Point]) -> Point {
        let mut w = Point::zeros(gens[0].dim());
        for i in 0..self.len {
            w += gens[self.idx[i]] * self.weight[i];
        }
        w
    }
}

/// Minimizes `|sum_i a_i y_i|` over affine weights (`sum a_i = 1`) of the corral.
///
/// Returns `None` when the corral is numerically affinely dependent.
fn affine_minimizer(ys: &[Point; MAX_CORRAL], len: usize) -> Option<[f64; MAX_CORRAL]> {
    let mut alpha = [0.0; MAX_CORRAL];
    if len == 1 {
        alpha[0] = 1.0;
        return Some(alpha);
    }
    let y0 = ys[0];
    let r = len - 1;
    // Modified Gram-Schmidt on the columns b_i = y_i - y_0.
    let mut q = [Point::zeros(y0.dim()); MAX_CORRAL - 1];
    let mut rmat = [[0.0f64; MAX_CORRAL - 1]; MAX_CORRAL - 1];
    let mut scale = 0.0f64;
    for i in 0..r {
        let mut b = ys[i + 1] - y0;
        scale = scale.max(b.norm());
        for k in 0..i {
            let c = q[k].dot(&b);
            rmat[k][i] = c;
            b = b - q[k] * c;
        }
        let nb = b.norm();
        if !(nb > DEPENDENCE_RTOL * scale) {
            return None;
        }
        rmat[i][i] = nb;
        q[i] = b * (1.0 / nb);
    }
    // R mu = -Q^T y0
    let mut rhs = [0.0f64; MAX_CORRAL - 1];
    for i in 0..r {
        rhs[i] = -q[i].dot(&y0);
    }
    let mut mu = [0.0f64; MAX_CORRAL - 1];
    for i in (0..r).rev() {
        let mut s = rhs[i];
        for k in i + 1..r {
            s -= rmat[i][k] * mu[k];
        }
        mu[i] = s / rmat[i][i];
    }
    let mut sum = 0.0;
    for i in 0..r {
        alpha[i + 1] = mu[i];
        sum += mu[i];
    }
    alpha[0] = 1.0 - sum;
    Some(alpha)
}

/// Largest certificate value `max_j <v_j - w, u - w>` and its maximizing index.
fn worst_generator(gens: &[Point], u: Point, w: Point) -> (usize, f64) {
    let n = u - w;
    let mut best = (0, f64::NEG_INFINITY);
    for (j, v) in gens.iter().enumerate() {
        let val = (*v - w).dot(&n);
        if val > best.1 {
            best = (j, val);
        }
    }
    best
}

/// Nearest point of `co{generators}` to `u`, certified to `tol`.
///
/// The solver keeps iterating past `tol` while it can still make progress, so
/// the returned certificate is usually at round-off level. Ties are broken by
/// generator order, which makes the result deterministic.
pub fn project_hull_nearest_point(generators: &[Point], u: Point, tol: f64) -> Result<ProjectionResult> {
    if generators.is_empty() {
        return Err(Error::InvalidSet("hull needs at least one generator".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let dim = generators[0].dim();
    if u.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: u.dim() });
    }
    let max_iter = 100 + 20 * generators.len();
    let stop = tol.min(1e-14 * (1.0 + u.norm_sq()));
    let scale = 1.0 + u.norm() + generators.iter().map(Point::norm).fold(0.0, f64::max);

    let start = generators
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (j, v)| {
            let d = (*v - u).norm_sq();
            if d < best.1 { (j, d) } else { best }
        })
        .0;
    let mut corral = Corral::single(start);
    let mut w = generators[start];

    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let (j, val) = worst_generator(generators, u, w);
        if val <= stop || corral.contains(j) || corral.len == (dim + 1).min(MAX_CORRAL) {
            break;
        }
        let before = corral;
        corral.push(j, 0.0);
        let mut progressed = true;
        // Minor cycle: at most `len` drops before the corral is a single point.
        loop {
            let mut ys = [Point::zeros(dim); MAX_CORRAL];
            for i in 0..corral.len {
                ys[i] = generators[corral.idx[i]] - u;
            }
            let Some(alpha) = affine_minimizer(&ys, corral.len) else {
                corral = before;
                progressed = false;
                break;
            };
            if alpha[..corral.len].iter().all(|&a| a > 0.0) {
                corral.weight[..corral.len].copy_from_slice(&alpha[..corral.len]);
                break;
            }
            // Every ratio is at most 1; start above so ties at 1 pick a real member.
            let mut theta = f64::INFINITY;
            let mut drop = 0;
            for i in 0..corral.len {
                if alpha[i] <= 0.0 {
                    let denom = corral.weight[i] - alpha[i];
                    let t = if denom > 0.0 { corral.weight[i] / denom } else { 0.0 };
                    if t < theta {
                        theta = t;
                        drop = i;
                    }
                }
            }
            for i in 0..corral.len {
                corral.weight[i] += theta * (alpha[i] - corral.weight[i]);
            }
            corral.weight[drop] = 0.0;
            corral.compact();
            if corral.len == 0 {
                corral = before;
                progressed = false;
                break;
            }
        }
        let next = corral.point(generators);
        let same_members = corral.len == before.len && corral.idx[..corral.len] == before.idx[..before.len];
        // Near-degenerate faces improve the distance by less than the rounding
        // error of |w - u|^2, so only a clear increase counts as failure.
        let d2 = (w - u).norm_sq();
        let slack = 1e-12 * d2 + 1e-14 * d2.sqrt() * scale;
        let worse = (next - u).norm_sq() > d2 + slack;
        if !progressed || same_members || worse {
            corral = before;
            break;
        }
        w = next;
    }
    // A full corral has positive weights on dim + 1 affinely independent
    // generators, so u lies in their simplex. Flat simplices make the affine
    // solve inaccurate, and u itself is the exact answer.
    let w = if corral.len == dim + 1 { u } else { corral.point(generators) };
    let violation = worst_generator(generators, u, w).1;
    if violation > tol {
        return Err(Error::HullNotConverged { iterations, violation });
    }
    let mut face = Face::default();
    let mut members = corral.idx;
    members[..corral.len].sort_unstable();
    for &j in &members[..corral.len] {
        face.push(j as u32);
    }
    Ok(ProjectionResult { point: w, certificate_violation: violation.max(0.0), face })
}
