use super::{lanczos_rkpw, RecurrenceCoefficients};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, graded_partition};
use crate::specdens::UnitMeasure;

const GRADING_LEVELS: usize = 40;
const MAX_NODES: usize = 1 << 14;

/// Point masses `w_j` at strictly increasing `k_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Sorts the points, merges coincident nodes and drops zero weights.
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        for &(k, w) in &pts {
            if !k.is_finite() || !(w >= 0.0) || !w.is_finite() {
                return Err(Error::QuadratureFailure(format!("invalid point mass {w} at {k}")));
            }
        }
        pts.retain(|p| p.1 > 0.0);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut nodes: Vec<f64> = Vec::with_capacity(pts.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pts.len());
        for (k, w) in pts {
            if nodes.last() == Some(&k) {
                *weights.last_mut().unwrap() += w;
            } else {
                nodes.push(k);
                weights.push(w);
            }
        }
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("discrete measure has no positive weights".into()));
        }
        Ok(DiscreteMeasure { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn mass(&self) -> f64 {
        let mut w = self.weights.clone();
        w.sort_by(f64::total_cmp);
        w.iter().sum()
    }

    /// Every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        DiscreteMeasure { nodes: self.nodes.clone(), weights: self.weights.iter().map(|w| w * c).collect() }
    }
}

/// Composite Gauss–Legendre rule for the continuous part of `m` on a uniform
/// partition of `[0, 1]` into `n_intervals` pieces, refined at the measure's
/// breakpoints and graded geometrically toward its singular points, merged
/// with the exact delta lines.
pub fn quadrature_discretize(m: &UnitMeasure, n_intervals: usize, nodes_per_interval: usize) -> Result<DiscreteMeasure> {
    if n_intervals == 0 || nodes_per_interval == 0 {
        return Err(Error::InvalidParameter("interval and node counts must be at least 1".into()));
    }
    let mut points: Vec<(f64, f64)> = m.lines().to_vec();
    if !m.is_purely_discrete() {
        let mut cuts: Vec<f64> = (1..n_intervals).map(|i| i as f64 / n_intervals as f64).collect();
        cuts.extend_from_slice(m.breakpoints());
        let partition = graded_partition(0.0, 1.0, &cuts, m.singular_points(), GRADING_LEVELS);
        let (gx, gw) = gauss_legendre(nodes_per_interval);
        for piece in partition.windows(2) {
            let (a, b) = (piece[0], piece[1]);
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in gx.iter().zip(&gw) {
                let k = c + h * x;
                let v = m.weight(k);
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::QuadratureFailure(format!("weight evaluates to {v} at k = {k}")));
                }
                points.push((k, w * h * v));
            }
        }
    }
    DiscreteMeasure::new(points)
}

/// First `n_max` coefficients of `m`, refining the quadrature until the
/// coefficients change by less than `1e-12` relative between doublings.
///
/// A purely discrete measure with `M < n_max` points yields `M` coefficients.
pub fn adaptive_recurrence(m: &UnitMeasure, n_max: usize) -> Result<RecurrenceCoefficients> {
    adaptive_recurrence_with(m, n_max, lanczos_rkpw)
}

/// [`adaptive_recurrence`] with a caller-chosen discrete solver.
pub fn adaptive_recurrence_with<F>(m: &UnitMeasure, n_max: usize, solve: F) -> Result<RecurrenceCoefficients>
where
    F: Fn(&DiscreteMeasure, usize) -> Result<RecurrenceCoefficients>,
{
    if m.is_purely_discrete() {
        let d = quadrature_discretize(m, 1, 1)?;
        let n = n_max.min(d.len());
        return solve(&d, n);
    }
    let n_intervals = 8;
    let mut per = 16.max(n_max.div_ceil(n_intervals) + 4);
    let mut prev = solve(&quadrature_discretize(m, n_intervals, per)?, n_max)?;
    loop {
        per *= 2;
        let d = quadrature_discretize(m, n_intervals, per)?;
        if d.len() > MAX_NODES {
            return Err(Error::NotConverged(format!(
                "recurrence coefficients not stable to 1e-12 with {} quadrature nodes",
                d.len()
            )));
        }
        let next = solve(&d, n_max)?;
        let change = next.max_rel_diff(&prev).max((next.beta[0] - prev.beta[0]).abs() / next.beta[0]);
        log::debug!("discretization with {} nodes: coefficient change {change:e}", d.len());
        if change < 1e-12 {
            return Ok(next);
        }
        prev = next;
    }
}
