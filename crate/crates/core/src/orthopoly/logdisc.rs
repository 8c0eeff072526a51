use std::f64::consts::PI;

use super::{check_positive, DiscreteMeasure, RecurrenceCoefficients, Source};
use crate::error::{Error, Result};

/// Logarithmic discretization of `J(ω) = α ω_c^{1−s} ω^s` into bins
/// `[ω_c Δ^{−(n+1)}, ω_c Δ^{−n}]`.
///
/// `gamma[n]²` follows the Wilson-chain convention
/// `γ_n² = (2πα/(1+s)) ω_c² (1−Δ^{−(1+s)}) Δ^{−n(1+s)}`, which is `2π` times the
/// mass of `J` in bin `n`; `zeta[n]` is the mean frequency of that bin.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDiscretization {
    pub delta: f64,
    pub s: f64,
    pub alpha: f64,
    pub omega_c: f64,
    pub gamma: Vec<f64>,
    pub zeta: Vec<f64>,
}

pub fn log_discretize(alpha: f64, s: f64, omega_c: f64, delta: f64, n_max: usize) -> Result<LogDiscretization> {
    if !(delta > 1.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("Delta must exceed 1, got {delta}")));
    }
    if !(s > -1.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent must exceed -1, got {s}")));
    }
    if !(alpha > 0.0) || !(omega_c > 0.0) || n_max == 0 {
        return Err(Error::InvalidParameter("alpha, omega_c and n_max must be positive".into()));
    }
    let g0 = 2.0 * PI * alpha / (1.0 + s) * omega_c * omega_c * (1.0 - delta.powf(-(1.0 + s)));
    let z0 = (s + 1.0) / (s + 2.0) * (1.0 - delta.powf(-(s + 2.0))) / (1.0 - delta.powf(-(s + 1.0))) * omega_c;
    let gamma = (0..n_max).map(|n| (g0 * delta.powf(-(n as f64) * (1.0 + s))).sqrt()).collect();
    let zeta = (0..n_max).map(|n| z0 * delta.powf(-(n as f64))).collect();
    Ok(LogDiscretization { delta, s, alpha, omega_c, gamma, zeta })
}

impl LogDiscretization {
    /// Energy prefactor `ζ_0` shared by every `ζ_n = ζ_0 Δ^{−n}`.
    pub fn zeta0(&self) -> f64 {
        self.zeta[0]
    }

    /// Points `ζ_n/ζ_0 = Δ^{−n}` with weights `γ_n²/2π` (bin masses of `J`).
    pub fn discrete_measure(&self) -> Result<DiscreteMeasure> {
        let z0 = self.zeta0();
        DiscreteMeasure::new(self.zeta.iter().zip(&self.gamma).map(|(z, g)| (z / z0, g * g / (2.0 * PI))))
    }

    /// `Σ_n γ_n²/2π` over the infinite sequence, i.e. `∫₀^{ω_c} J dω`.
    pub fn total_mass(&self) -> f64 {
        self.alpha * self.omega_c * self.omega_c / (1.0 + self.s)
    }
}

/// Closed-form recurrence of the log-discretized measure from the little
/// q-Jacobi polynomials `p_n(x; a, 1 | q)`, `q = Δ^{−1}`, `a = Δ^{−s}`:
/// `α_n = A_n + C_n`, `β_{n+1} = A_n C_{n+1}` on the nodes `q^m` with weights
/// `∝ q^{m(1+s)}`. Chain energies follow with prefactor `ζ_0`, stored as
/// `energy_scale = ζ_0/ω_c`; `β_0` is the bath mass.
pub fn little_q_jacobi_chain(log: &LogDiscretization, n_max: usize) -> Result<RecurrenceCoefficients> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let q = 1.0 / log.delta;
    let a = q.powf(log.s);
    let qp = |k: usize| q.powi(k as i32);
    let big_a = |n: usize| {
        let num = qp(n) * (1.0 - a * qp(n + 1)).powi(2);
        num / ((1.0 - a * qp(2 * n + 1)) * (1.0 - a * qp(2 * n + 2)))
    };
    let big_c = |n: usize| {
        if n == 0 {
            return 0.0;
        }
        a * qp(n) * (1.0 - qp(n)).powi(2) / ((1.0 - a * qp(2 * n)) * (1.0 - a * qp(2 * n + 1)))
    };
    let alpha: Vec<f64> = (0..n_max).map(|n| big_a(n) + big_c(n)).collect();
    let mut beta = vec![log.total_mass()];
    beta.extend((0..n_max - 1).map(|n| big_a(n) * big_c(n + 1)));
    check_positive(&beta)?;
    Ok(RecurrenceCoefficients { alpha, beta, source: Source::AnalyticLittleQJacobi, energy_scale: log.zeta0() / log.omega_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::lanczos_rkpw;

    #[test]
    fn first_terms() {
        let l = log_discretize(0.1, 1.0, 1.0, 2.0, 10).unwrap();
        assert!((l.gamma[0].powi(2) - 0.075 * PI).abs() < 1e-15);
        assert!((l.zeta[0] - 7.0 / 9.0).abs() < 1e-15);
        for n in 0..9 {
            assert!((l.gamma[n + 1].powi(2) / l.gamma[n].powi(2) - 0.25).abs() < 1e-14);
            assert!((l.zeta[n + 1] / l.zeta[n] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn couplings_sum_to_bath_mass() {
        let l = log_discretize(0.1, 1.0, 1000.0, 2.0, 200).unwrap();
        let sum: f64 = l.gamma.iter().map(|g| g * g).sum();
        assert!((sum - 2.0 * PI * 0.1 * 1e6 / 2.0).abs() / sum < 1e-14);
        assert!((l.discrete_measure().unwrap().mass() - l.total_mass()).abs() / sum < 1e-14);
    }

    #[test]
    fn mean_bin_frequency() {
        // α_0 ζ_0 is the mean frequency of the whole band, (s+1)/(s+2) ω_c
        for s in [0.0, 0.5, 1.0, 2.0] {
            let l = log_discretize(0.3, s, 100.0, 1.7, 300).unwrap();
            let rc = little_q_jacobi_chain(&l, 1).unwrap();
            assert!((rc.alpha[0] * rc.energy_scale * 100.0 - (s + 1.0) / (s + 2.0) * 100.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_delta() {
        assert!(log_discretize(0.1, 1.0, 1.0, 1.0, 5).is_err());
        assert!(log_discretize(0.1, -1.0, 1.0, 2.0, 5).is_err());
    }

    #[test]
    fn closed_form_matches_lanczos() {
        let l = log_discretize(0.1, 1.0, 1.0, 2.0, 201).unwrap();
        let exact = little_q_jacobi_chain(&l, 31).unwrap();
        let num = lanczos_rkpw(&l.discrete_measure().unwrap(), 31).unwrap();
        assert!(exact.max_rel_diff(&num) < 1e-8, "{}", exact.max_rel_diff(&num));
        assert!(exact.beta.iter().all(|&b| b > 0.0));
        let r = exact.alpha[30] / exact.alpha[29];
        assert!((r - 0.5).abs() < 1e-6);
    }
}
