use super::ChainParams;
use crate::error::{Error, Result};
use crate::tridiag::eigen_first_components;

/// Normal modes of the chain beyond site `n_cut` and their squared couplings
/// to that site.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminalDensity {
    pub omega: Vec<f64>,
    pub strength: Vec<f64>,
    pub omega_c: f64,
}

/// Diagonalizes sites `n_cut+1 .. n_cut+n_modes`, continuing with
/// `ε = ω_c/2`, `t = ω_c/4` past the stored coefficients.
pub fn terminal_spectral_density(c: &ChainParams, n_cut: usize, n_modes: usize) -> Result<TerminalDensity> {
    if n_cut >= c.length() {
        return Err(Error::Domain(format!("n_cut = {n_cut} beyond chain of length {}", c.length())));
    }
    if n_modes == 0 {
        return Err(Error::Domain("the tail needs at least one mode".into()));
    }
    let wc = c.omega_c;
    let eps = |n: usize| c.eps.get(n).copied().unwrap_or(0.5 * wc);
    let hop = |n: usize| c.t.get(n).copied().unwrap_or(0.25 * wc);
    let diag: Vec<f64> = (0..n_modes).map(|i| eps(n_cut + 1 + i)).collect();
    let off: Vec<f64> = (0..n_modes - 1).map(|i| hop(n_cut + 1 + i)).collect();
    let (omega, z) = eigen_first_components(&diag, &off)?;
    let g2 = hop(n_cut).powi(2);
    Ok(TerminalDensity { omega, strength: z.iter().map(|v| g2 * v * v).collect(), omega_c: wc })
}

impl TerminalDensity {
    /// Histogram density on `bins` equal bins over `[0, ω_c]`: `(centres, Σ strength / width)`.
    pub fn smoothed(&self, bins: usize) -> (Vec<f64>, Vec<f64>) {
        let width = self.omega_c / bins as f64;
        let mut rho = vec![0.0; bins];
        for (w, s) in self.omega.iter().zip(&self.strength) {
            let b = ((w / width).floor().max(0.0) as usize).min(bins - 1);
            rho[b] += s / width;
        }
        ((0..bins).map(|b| (b as f64 + 0.5) * width).collect(), rho)
    }

    /// `‖ρ − C f‖ / ‖ρ‖` for the histogram `ρ` against the best-fit semicircle
    /// `f(ω) = √(ω(ω_c − ω))`.
    pub fn semicircle_deviation(&self, bins: usize) -> f64 {
        let (x, rho) = self.smoothed(bins);
        let f: Vec<f64> = x.iter().map(|w| (w * (self.omega_c - w)).max(0.0).sqrt()).collect();
        let c = rho.iter().zip(&f).map(|(r, f)| r * f).sum::<f64>() / f.iter().map(|f| f * f).sum::<f64>();
        let num: f64 = rho.iter().zip(&f).map(|(r, f)| (r - c * f).powi(2)).sum();
        let den: f64 = rho.iter().map(|r| r * r).sum();
        (num / den).sqrt()
    }

    pub fn total_strength(&self) -> f64 {
        self.strength.iter().sum()
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W, sig: usize) -> Result<()> {
        use crate::format::fmt_sig;
        writeln!(w, "omega_cm1,strength")?;
        for (o, s) in self.omega.iter().zip(&self.strength) {
            writeln!(w, "{},{}", fmt_sig(*o, sig), fmt_sig(*s, sig))?;
        }
        Ok(())
    }
}
