//! Recurrence coefficients of monic orthogonal polynomials
//! `k π_n = α_n π_n + β_n π_{n−1} + π_{n+1}` for measures on `[0, 1]`.

mod discretize;
mod lanczos;
mod logdisc;
mod moments;
mod stieltjes;

pub use discretize::{adaptive_recurrence, adaptive_recurrence_with, quadrature_discretize, DiscreteMeasure};
pub use lanczos::lanczos_rkpw;
pub use logdisc::{little_q_jacobi_chain, log_discretize, LogDiscretization};
pub use moments::moment_oracle;
pub use stieltjes::{stieltjes, stieltjes_checked};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    AnalyticJacobi,
    AnalyticLittleQJacobi,
    Stieltjes,
    Lanczos,
    MomentOracle,
}

/// `alpha[n] = α_n`, `beta[0]` = total mass of the measure (cm⁻²), `beta[n] = β_n`
/// for `n ≥ 1`. The support is measured in units of `energy_scale · ω_c`; that
/// product turns `α_n` and `√β_{n+1}` into chain energies.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoefficients {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub source: Source,
    pub energy_scale: f64,
}

impl RecurrenceCoefficients {
    pub fn n_max(&self) -> usize {
        self.alpha.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.beta[0]
    }

    pub fn with_total_mass(mut self, mass: f64) -> Self {
        self.beta[0] = mass;
        self
    }

    pub fn with_energy_scale(mut self, scale: f64) -> Self {
        self.energy_scale = scale;
        self
    }

    /// First `n` coefficients.
    pub fn truncated(mut self, n: usize) -> Self {
        self.alpha.truncate(n);
        self.beta.truncate(n);
        self
    }

    /// Largest relative deviation between the shared coefficients of two sets
    /// (`β_0` excluded).
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        let n = self.n_max().min(other.n_max());
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let a = (0..n).map(|i| rel(self.alpha[i], other.alpha[i]));
        let b = (1..n).map(|i| rel(self.beta[i], other.beta[i]));
        a.chain(b).fold(0.0, f64::max)
    }
}

/// Closed-form coefficients for the unit weight `k^s` on `[0, 1]`
/// (shifted Jacobi `P_n^{(0,s)}`), `β_0 = 1/(1+s)`.
pub fn jacobi_recurrence(s: f64, n_max: usize) -> Result<RecurrenceCoefficients> {
    if !(s > -1.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("Jacobi exponent must exceed -1, got {s}")));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let mut alpha = Vec::with_capacity(n_max);
    let mut beta = Vec::with_capacity(n_max);
    beta.push(1.0 / (1.0 + s));
    for n in 0..n_max {
        let nf = n as f64;
        alpha.push(if n == 0 {
            (1.0 + s) / (2.0 + s)
        } else {
            0.5 * (1.0 + s * s / ((s + 2.0 * nf) * (2.0 + s + 2.0 * nf)))
        });
        if n + 1 < n_max {
            let num = (1.0 + nf).powi(2) * (1.0 + s + nf).powi(2);
            let den = (s + 2.0 + 2.0 * nf).powi(2) * (3.0 + s + 2.0 * nf) * (1.0 + s + 2.0 * nf);
            beta.push(num / den);
        }
    }
    Ok(RecurrenceCoefficients { alpha, beta, source: Source::AnalyticJacobi, energy_scale: 1.0 })
}

pub(crate) fn check_positive(beta: &[f64]) -> Result<()> {
    for (n, b) in beta.iter().enumerate() {
        if !(*b > 0.0) || !b.is_finite() {
            return Err(Error::Breakdown { n, reason: format!("beta = {b}") });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::eigen_first_components;

    #[test]
    fn legendre_closed_form() {
        let rc = jacobi_recurrence(0.0, 40).unwrap();
        assert!(rc.alpha.iter().all(|&a| a == 0.5));
        assert!((rc.beta[1] - 1.0 / 12.0).abs() < 1e-16);
        for n in 1..40 {
            let nf = n as f64;
            let exact = nf * nf / (4.0 * (4.0 * nf * nf - 1.0));
            assert!((rc.beta[n] - exact).abs() < 1e-16, "n={n}");
        }
    }

    #[test]
    fn jacobi_asymptotes() {
        for s in [-0.5, 0.5, 1.0, 3.0] {
            let rc = jacobi_recurrence(s, 2000).unwrap();
            assert!((rc.alpha[1999] - 0.5).abs() < 1e-5);
            assert!((rc.beta[1999] - 1.0 / 16.0).abs() < 1e-5);
            assert!(rc.alpha.iter().all(|&a| a > 0.0 && a < 1.0));
            assert!(rc.beta[1..].iter().all(|&b| b > 0.0 && b <= 0.25));
        }
    }

    #[test]
    fn jacobi_rejects_bad_exponent() {
        assert!(matches!(jacobi_recurrence(-1.0, 5), Err(Error::InvalidParameter(_))));
        assert!(jacobi_recurrence(1.0, 0).is_err());
    }

    #[test]
    fn gauss_rule_from_legendre_recurrence() {
        // Golub–Welsch on the closed-form coefficients reproduces Gauss–Legendre on [0,1].
        let n = 12;
        let rc = jacobi_recurrence(0.0, n).unwrap();
        let off: Vec<f64> = rc.beta[1..].iter().map(|b| b.sqrt()).collect();
        let (x, z) = eigen_first_components(&rc.alpha, &off).unwrap();
        let (gx, gw) = crate::quadrature::gauss_legendre(n);
        for i in 0..n {
            assert!((x[i] - 0.5 * (gx[i] + 1.0)).abs() < 1e-14);
            assert!((z[i] * z[i] - 0.5 * gw[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobi_weight_moments() {
        // ∫ k^s π_1² dk must equal β_0 β_1 for π_1 = k − α_0.
        let s: f64 = 3.0;
        let rc = jacobi_recurrence(s, 3).unwrap();
        let a0 = rc.alpha[0];
        let m = |r: f64| 1.0 / (s + r + 1.0);
        let norm1 = m(2.0) - 2.0 * a0 * m(1.0) + a0 * a0 * m(0.0);
        assert!((norm1 - rc.beta[0] * rc.beta[1]).abs() < 1e-15);
        assert!((a0 - m(1.0) / m(0.0)).abs() < 1e-15);
    }
}
