//! `p`-norms, the metrics `d_p`, and finite-set metric computations.
//!
//! For `0 < p < 1` the metric is `‖x − y‖_p^p` (the `p`-th power restores
//! the triangle inequality). `p = ∞` is `f64::INFINITY`.

use crate::error::{Error, Result};
use crate::linalg::Vector;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

fn check_dims(x: &Vector, y: &Vector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim().to_string(),
            got: y.dim().to_string(),
        });
    }
    Ok(())
}

/// `(Σ|x_j|^p)^{1/p}`, or `max |x_j|` for `p = ∞`.
pub fn p_norm(x: &Vector, p: f64) -> Result<f64> {
    check_p(p)?;
    let abs = x.entries().iter().map(|z| z.norm());
    if p.is_infinite() {
        return Ok(abs.fold(0.0, f64::max));
    }
    // Scale by the max entry to avoid overflow and underflow.
    let m = x.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(m * abs.map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p))
}

/// `Σ|x_j|^p` (`p < ∞`), the quantity that is subadditive for `p ≤ 1`.
fn p_sum(x: &Vector, p: f64) -> f64 {
    x.entries().iter().map(|z| z.norm().powf(p)).sum()
}

/// `‖x − y‖_p` for `p ≥ 1`, `‖x − y‖_p^p` for `0 < p < 1`.
pub fn dp_metric(x: &Vector, y: &Vector, p: f64) -> Result<f64> {
    check_p(p)?;
    check_dims(x, y)?;
    let d = x - y;
    if p < 1.0 {
        Ok(p_sum(&d, p))
    } else {
        p_norm(&d, p)
    }
}

/// Nonempty finite subset of `Rⁿ` or `Cⁿ` with the metric `d_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePointSet {
    points: Vec<Vector>,
    p: f64,
}

impl FinitePointSet {
    pub fn new(points: Vec<Vector>, p: f64) -> Result<Self> {
        check_p(p)?;
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("point set must be nonempty".into()))?;
        if let Some(bad) = points.iter().find(|v| v.dim() != first.dim()) {
            return Err(Error::DimensionMismatch {
                expected: first.dim().to_string(),
                got: bad.dim().to_string(),
            });
        }
        Ok(FinitePointSet { points, p })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    fn same_space(&self, other: &FinitePointSet) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MetricMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim().to_string(),
                got: other.dim().to_string(),
            });
        }
        Ok(())
    }
}

/// `min_{a ∈ A} d(x, a)`.
pub fn dist_point_set(x: &Vector, a: &FinitePointSet) -> Result<f64> {
    a.points
        .iter()
        .map(|y| dp_metric(x, y, a.p))
        .try_fold(f64::INFINITY, |m, d| Ok(m.min(d?)))
}

/// Hausdorff distance `max(max_a dist(a, B), max_b dist(b, A))`.
///
/// This is the infimum of the `t` for which `A` and `B` are `t`-close; since
/// closeness uses strict inequalities, the sets are `t`-close for every `t`
/// above the returned value but not at it.
pub fn hausdorff(a: &FinitePointSet, b: &FinitePointSet) -> Result<f64> {
    a.same_space(b)?;
    let one_sided = |from: &FinitePointSet, to: &FinitePointSet| -> Result<f64> {
        from.points
            .iter()
            .map(|x| dist_point_set(x, to))
            .try_fold(0.0f64, |m, d| Ok(m.max(d?)))
    };
    Ok(one_sided(a, b)?.max(one_sided(b, a)?))
}

/// Every point of each set is within distance strictly less than `t` of
/// some point of the other.
pub fn t_close(a: &FinitePointSet, b: &FinitePointSet, t: f64) -> Result<bool> {
    a.same_space(b)?;
    let covered = |from: &FinitePointSet, to: &FinitePointSet| -> Result<bool> {
        for x in &from.points {
            if dist_point_set(x, to)? >= t {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(covered(a, b)? && covered(b, a)?)
}

/// Largest pairwise distance.
pub fn diameter(a: &FinitePointSet) -> f64 {
    let pts = &a.points;
    let mut best: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max(dp_metric(&pts[i], &pts[j], a.p).expect("validated set"));
        }
    }
    best
}

/// A path sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    points: Vec<Vector>,
    p: f64,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, points: Vec<Vector>, p: f64) -> Result<Self> {
        check_p(p)?;
        if times.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} points", times.len()),
                got: points.len().to_string(),
            });
        }
        if times.len() < 2 {
            return Err(Error::InvalidArgument("a sampled path needs at least two samples".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("sample times must be strictly increasing".into()));
        }
        if let Some(bad) = points.iter().find(|v| v.dim() != points[0].dim()) {
            return Err(Error::DimensionMismatch {
                expected: points[0].dim().to_string(),
                got: bad.dim().to_string(),
            });
        }
        Ok(SampledPath { times, points, p })
    }

    /// Samples `f` at `k + 1` equally spaced times on `[a, b]`.
    pub fn from_fn(f: impl Fn(f64) -> Vector, a: f64, b: f64, k: usize, p: f64) -> Result<Self> {
        let times: Vec<f64> = (0..=k).map(|j| a + (b - a) * j as f64 / k.max(1) as f64).collect();
        let points = times.iter().map(|&t| f(t)).collect();
        SampledPath::new(times, points, p)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    /// `Σ d(p(t_j), p(t_{j−1}))`, a lower bound for the length.
    pub fn partition_sum(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| dp_metric(&w[0], &w[1], self.p).expect("validated path"))
            .sum()
    }
}

/// Result of [`path_length`]: the partition sum and the number of dyadic
/// refinements performed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLength {
    pub length: f64,
    pub depth: usize,
}

const MAX_REFINEMENT_DEPTH: usize = 24;
/// Default refinement tolerance.
pub const PATH_TOL: f64 = 1e-8;

/// Partition sum of `path`; with a `sampler`, keeps inserting midpoints of
/// every interval until consecutive sums differ by at most `tol`.
pub fn path_length(
    path: &SampledPath,
    sampler: Option<&dyn Fn(f64) -> Vector>,
    tol: f64,
) -> Result<PathLength> {
    let Some(f) = sampler else {
        return Ok(PathLength {
            length: path.partition_sum(),
            depth: 0,
        });
    };
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("refinement tolerance must be positive, got {tol}")));
    }
    let mut current = path.clone();
    let mut sum = current.partition_sum();
    for depth in 1..=MAX_REFINEMENT_DEPTH {
        let mut times = Vec::with_capacity(2 * current.times.len());
        let mut points = Vec::with_capacity(2 * current.times.len());
        for j in 0..current.times.len() {
            times.push(current.times[j]);
            points.push(current.points[j].clone());
            if j + 1 < current.times.len() {
                let mid = 0.5 * (current.times[j] + current.times[j + 1]);
                times.push(mid);
                points.push(f(mid));
            }
        }
        current = SampledPath::new(times, points, path.p)?;
        let next = current.partition_sum();
        if (next - sum).abs() <= tol {
            return Ok(PathLength { length: next, depth });
        }
        sum = next;
    }
    Err(Error::DidNotConverge {
        what: "dyadic path-length refinement",
        residual: sum,
    })
}

/// `max_{i<j} d_ran(f(x_i), f(x_j)) / d_dom(x_i, x_j)`: a lower bound for
/// the Lipschitz constant of the sampled map.
pub fn lipschitz_estimate(samples: &[(Vector, Vector)], dom_p: f64, ran_p: f64) -> Result<f64> {
    check_p(dom_p)?;
    check_p(ran_p)?;
    if samples.len() < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mut best: f64 = 0.0;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let dx = dp_metric(&samples[i].0, &samples[j].0, dom_p)?;
            if dx == 0.0 {
                return Err(Error::DuplicatePoint(i, j));
            }
            best = best.max(dp_metric(&samples[i].1, &samples[j].1, ran_p)? / dx);
        }
    }
    Ok(best)
}

/// Finite-sample supremum metric `max_i d_p(f(x_i), g(x_i))` between two
/// maps sampled at the same points.
pub fn sup_metric(f_samples: &[Vector], g_samples: &[Vector], p: f64) -> Result<f64> {
    if f_samples.len() != g_samples.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} samples", f_samples.len()),
            got: g_samples.len().to_string(),
        });
    }
    f_samples
        .iter()
        .zip(g_samples)
        .map(|(a, b)| dp_metric(a, b, p))
        .try_fold(0.0f64, |m, d| Ok(m.max(d?)))
}
