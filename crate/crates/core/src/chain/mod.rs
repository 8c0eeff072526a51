//! Bath chains: site energies and hoppings from recurrence coefficients, their
//! asymptotics, and the lattice Hamiltonian of a dimer with two chains.

mod lattice;
mod terminal;

pub use lattice::{assemble_lattice, Bond, LatticeHamiltonian, LatticeSite, SiteKind, SystemSpec};
pub use terminal::{terminal_spectral_density, TerminalDensity};

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::orthopoly::{adaptive_recurrence, jacobi_recurrence, RecurrenceCoefficients, Source};
use crate::specdens::{Family, SpectralDensity, COUPLING_NORMALIZATION};

/// `H_B = Σ ε_n b_n†b_n + Σ t_n (b_n†b_{n+1} + h.c.)`, head coupled through `η`.
///
/// `t[n]` couples sites `n` and `n + 1`. It has one entry per site when the
/// measure supports more coefficients than sites (the last hopping leads into
/// the truncated remainder) and one fewer for a measure with only `length`
/// points.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainParams {
    pub eps: Vec<f64>,
    pub t: Vec<f64>,
    /// `√(∫J dω)`, cm⁻¹
    pub eta: f64,
    pub omega_c: f64,
    pub source: Source,
}

impl ChainParams {
    pub fn length(&self) -> usize {
        self.eps.len()
    }

    /// Coefficient of `V (b_0 + b_0†)` in the Hamiltonian, `η/√(4π)`.
    pub fn system_coupling(&self) -> f64 {
        self.eta / COUPLING_NORMALIZATION.sqrt()
    }

    /// Hopping between sites `n` and `n + 1` of the truncated chain.
    pub fn hopping(&self, n: usize) -> f64 {
        self.t[n]
    }

    /// CSV with columns `n,eps_cm1,t_cm1`; the last site has an empty `t` when
    /// the chain ends there.
    pub fn write_csv<W: Write>(&self, mut w: W, sig: usize) -> Result<()> {
        writeln!(w, "# eta_cm1 = {}", fmt_sig(self.eta, sig))?;
        writeln!(w, "# omega_c_cm1 = {}", fmt_sig(self.omega_c, sig))?;
        writeln!(w, "# source = {:?}", self.source)?;
        writeln!(w, "n,eps_cm1,t_cm1")?;
        for (n, e) in self.eps.iter().enumerate() {
            let t = self.t.get(n).map(|t| fmt_sig(*t, sig)).unwrap_or_default();
            writeln!(w, "{n},{},{t}", fmt_sig(*e, sig))?;
        }
        Ok(())
    }
}

/// `ε_n = ω_c s α_n`, `t_n = ω_c s √β_{n+1}`, `η = √β_0` with `s = rc.energy_scale`.
pub fn build_chain(rc: &RecurrenceCoefficients, omega_c: f64, length: usize) -> Result<ChainParams> {
    if length == 0 {
        return Err(Error::InvalidParameter("chain length must be at least 1".into()));
    }
    if !(omega_c > 0.0) {
        return Err(Error::InvalidParameter(format!("omega_c must be positive, got {omega_c}")));
    }
    let n = rc.n_max();
    if n < length {
        return Err(Error::InsufficientCoefficients { needed: length + 1, available: n });
    }
    crate::orthopoly::check_positive(&rc.beta[..n.min(length + 1)])?;
    let scale = omega_c * rc.energy_scale;
    let eps = rc.alpha[..length].iter().map(|a| scale * a).collect();
    let n_t = if n > length { length } else { length - 1 };
    let t = rc.beta[1..=n_t].iter().map(|b| scale * b.sqrt()).collect();
    Ok(ChainParams { eps, t, eta: rc.beta[0].sqrt(), omega_c, source: rc.source })
}

/// Chain of `length` sites for `j`: closed form for a bare power law, adaptive
/// quadrature plus Lanczos otherwise. A purely discrete density with fewer
/// lines than `length` gives a chain with one site per line.
pub fn chain_from_density(j: &SpectralDensity, length: usize) -> Result<ChainParams> {
    let wc = j.omega_c();
    let rc = match j.family() {
        Family::PowerLaw { s, .. } if j.lines().is_empty() => {
            let mass = j.total_mass()?;
            jacobi_recurrence(s, length + 1)?.with_total_mass(mass)
        }
        _ => {
            let m = j.to_unit_measure()?;
            adaptive_recurrence(&m, length + 1)?
        }
    };
    build_chain(&rc, wc, length.min(rc.n_max()))
}

/// Where the chain reaches its asymptote `ε → ω_c/2`, `t → ω_c/4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Asymptotics {
    pub n_star: usize,
    /// `max(|ε_n/ω_c − ½|, |t_n/ω_c − ¼|)` for every site with a hopping.
    pub residuals: Vec<f64>,
}

pub fn asymptote_convergence(c: &ChainParams, tol: f64) -> Result<Asymptotics> {
    let len = c.eps.len().min(c.t.len());
    if len < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 sites with hoppings, got {len}")));
    }
    let residuals: Vec<f64> = (0..len)
        .map(|n| (c.eps[n] / c.omega_c - 0.5).abs().max((c.t[n] / c.omega_c - 0.25).abs()))
        .collect();
    let tail = residuals.iter().rev().take_while(|&&r| r < tol).count();
    if tail == 0 {
        return Err(Error::NotConverged(format!(
            "residual {:e} at the last site exceeds {tol:e}",
            residuals[len - 1]
        )));
    }
    Ok(Asymptotics { n_star: len - tail, residuals })
}

/// Least-squares `p` in `r_n ∝ n^{−p}` over `n ∈ [from, to]`.
pub fn fit_decay_exponent(residuals: &[f64], from: usize, to: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = (from.max(1)..=to.min(residuals.len() - 1))
        .filter(|&n| residuals[n] > 0.0)
        .map(|n| ((n as f64).ln(), residuals[n].ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidParameter("not enough positive residuals to fit".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Band of the semi-infinite homogeneous chain, `Ω(q) = ½ω_c(1 − cos πq)`.
pub fn dispersion(q: f64, omega_c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("q = {q} outside [0, 1]")));
    }
    Ok(0.5 * omega_c * (1.0 - (PI * q).cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specdens::{discrete, overdamped_brownian, power_law, SpectralLine, UnitMeasure};

    #[test]
    fn flat_chain() {
        let rc = jacobi_recurrence(0.0, 11).unwrap();
        let c = build_chain(&rc, 1000.0, 10).unwrap();
        assert!(c.eps.iter().all(|&e| (e - 500.0).abs() < 1e-12));
        assert!((c.t[0] - 288.675_134_594_812_9).abs() < 1e-9);
        assert_eq!(c.t.len(), 10);
        assert!(matches!(build_chain(&rc, 1000.0, 12), Err(Error::InsufficientCoefficients { .. })));
    }

    #[test]
    fn ohmic_head_coupling() {
        let c = chain_from_density(&power_law(0.1, 1.0, 1000.0).unwrap(), 20).unwrap();
        assert!((c.eta - 223.606_797_749_979).abs() < 1e-9);
        assert!((c.system_coupling() - c.eta / (4.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn single_line_chain() {
        let j = discrete(vec![SpectralLine { omega: 180.0, weight: 50.0 }], 1000.0).unwrap();
        let c = chain_from_density(&j, 10).unwrap();
        assert_eq!(c.length(), 1);
        assert!((c.eps[0] - 180.0).abs() < 1e-12);
        assert!((c.eta - 50f64.sqrt()).abs() < 1e-12);
        assert!(c.t.is_empty());
    }

    #[test]
    fn chain_invariants_obo() {
        let j = overdamped_brownian(100.0, 53.0, 1060.0).unwrap();
        let c = chain_from_density(&j, 60).unwrap();
        assert!(c.eps.iter().all(|&e| e > 0.0 && e < c.omega_c));
        assert!(c.t.iter().all(|&t| t > 0.0 && t <= c.omega_c / 2.0));
        let mass = j.total_mass().unwrap();
        assert!((c.eta * c.eta - mass).abs() / mass < 1e-10);
        let a = asymptote_convergence(&c, 1e-2).unwrap();
        assert!(a.n_star < 60);
    }

    #[test]
    fn flat_residuals() {
        let c = build_chain(&jacobi_recurrence(0.0, 201).unwrap(), 1.0, 200).unwrap();
        let a = asymptote_convergence(&c, 1e-3).unwrap();
        assert!(a.n_star > 0 && a.n_star < 20, "{}", a.n_star);
        assert!(a.residuals.iter().zip(&c.eps).all(|(&r, &e)| r >= (e - 0.5).abs()));
    }

    #[test]
    fn cubic_residuals_decay_as_inverse_square() {
        let c = build_chain(&jacobi_recurrence(3.0, 202).unwrap(), 1.0, 201).unwrap();
        let a = asymptote_convergence(&c, 1e-2).unwrap();
        let p = fit_decay_exponent(&a.residuals, 20, 100).unwrap();
        assert!((p - 2.0).abs() < 0.1, "{p}");
    }

    #[test]
    fn band_gap_does_not_converge() {
        let m = UnitMeasure::new(|k| if (0.4..=0.6).contains(&k) { 0.0 } else { 1.0 }, vec![]).unwrap();
        let m = m.with_breakpoints([0.4, 0.6]);
        let rc = adaptive_recurrence(&m, 101).unwrap();
        let c = build_chain(&rc, 1.0, 100).unwrap();
        assert!(matches!(asymptote_convergence(&c, 1e-3), Err(Error::NotConverged(_))));
    }

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(0.0, 1000.0).unwrap(), 0.0);
        assert!((dispersion(1.0, 1000.0).unwrap() - 1000.0).abs() < 1e-12);
        assert!((dispersion(0.5, 1000.0).unwrap() - 500.0).abs() < 1e-12);
        assert!(matches!(dispersion(1.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_layout() {
        let c = build_chain(&jacobi_recurrence(0.0, 3).unwrap(), 1000.0, 2).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf, 6).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("n,eps_cm1,t_cm1\n0,500,288.675\n1,500,258.199\n"), "{text}");
    }
}
