use super::{lanczos_rkpw, DiscreteMeasure, RecurrenceCoefficients, Source};
use crate::error::{Error, Result};

/// Discretized Stieltjes procedure with orthonormal polynomials.
pub fn stieltjes(d: &DiscreteMeasure, n_max: usize) -> Result<RecurrenceCoefficients> {
    let m = d.len();
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if n_max > m {
        return Err(Error::InsufficientCoefficients { needed: n_max, available: m });
    }
    let mass = d.mass();
    let mut alpha = Vec::with_capacity(n_max);
    let mut beta = vec![mass];
    let mut q_prev = vec![0.0; m];
    let mut q = vec![1.0 / mass.sqrt(); m];
    let mut sqrt_beta = 0.0;
    for n in 0..n_max {
        let a: f64 = (0..m).map(|j| d.weights[j] * d.nodes[j] * q[j] * q[j]).sum();
        if !a.is_finite() {
            return Err(Error::Breakdown { n, reason: format!("alpha = {a}") });
        }
        alpha.push(a);
        if n + 1 == n_max {
            break;
        }
        let r: Vec<f64> = (0..m).map(|j| (d.nodes[j] - a) * q[j] - sqrt_beta * q_prev[j]).collect();
        let b: f64 = (0..m).map(|j| d.weights[j] * r[j] * r[j]).sum();
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Breakdown { n: n + 1, reason: format!("beta = {b}") });
        }
        beta.push(b);
        sqrt_beta = b.sqrt();
        q_prev = q;
        q = r.into_iter().map(|v| v / sqrt_beta).collect();
    }
    Ok(RecurrenceCoefficients { alpha, beta, source: Source::Stieltjes, energy_scale: 1.0 })
}

/// Stieltjes with a Lanczos cross-check: any coefficient that has lost more
/// than half of its digits relative to the Lanczos value is a breakdown.
pub fn stieltjes_checked(d: &DiscreteMeasure, n_max: usize) -> Result<RecurrenceCoefficients> {
    let s = stieltjes(d, n_max)?;
    let l = lanczos_rkpw(d, n_max)?;
    let limit = f64::EPSILON.sqrt();
    for n in 0..n_max {
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        if rel(s.alpha[n], l.alpha[n]) > limit || (n > 0 && rel(s.beta[n], l.beta[n]) > limit) {
            return Err(Error::Breakdown {
                n,
                reason: format!(
                    "Stieltjes drifted from Lanczos (alpha {} vs {}, beta {} vs {})",
                    s.alpha[n], l.alpha[n], s.beta[n], l.beta[n]
                ),
            });
        }
    }
    Ok(s)
}
