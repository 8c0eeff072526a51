//! Cross-oracle checks: every engine against an independent reference.

use std::fmt;
use std::path::Path;

use super::config::RunConfig;
use crate::chain::{
    asymptote_convergence, assemble_lattice, build_chain, chain_from_density, fit_decay_exponent, terminal_spectral_density,
    ChainParams, LatticeHamiltonian, SystemSpec,
};
use crate::error::Result;
use crate::mps::{init_vacuum, tebd_evolve, EvolutionConfig, Trajectory};
use crate::oracle::{dense_build, dense_evolve, eigen_residual, rabi_analytic, DEFAULT_DENSE_CAP};
use crate::orthopoly::{
    adaptive_recurrence, jacobi_recurrence, lanczos_rkpw, little_q_jacobi_chain, log_discretize, moment_oracle,
    quadrature_discretize, stieltjes, RecurrenceCoefficients,
};
use crate::specdens::{overdamped_brownian, power_law, SpectralDensity};

/// Residual `max(|ε_n/ω_c − ½|, |t_n/ω_c − ¼|)` allowed at site 100.
pub const UNIVERSALITY_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// `[lo, hi]` for a ratio, `[−∞, hi]` for an error bound
    pub bounds: [f64; 2],
}

impl Check {
    fn below(name: impl Into<String>, measured: f64, tol: f64) -> Self {
        Check { name: name.into(), measured, bounds: [f64::NEG_INFINITY, tol] }
    }

    fn within(name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Check { name: name.into(), measured, bounds: [lo, hi] }
    }

    pub fn passed(&self) -> bool {
        self.measured >= self.bounds[0] && self.measured <= self.bounds[1]
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let range = if self.bounds[0] == f64::NEG_INFINITY {
            format!("<= {:.1e}", self.bounds[1])
        } else {
            format!("in [{}, {}]", self.bounds[0], self.bounds[1])
        };
        write!(f, "{verdict} {:<28} {:>11.3e} {range}", self.name, self.measured)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "{} checks, {} failed", self.checks.len(), self.failures())
    }
}

/// Largest relative difference of site energies and hoppings.
pub fn chain_rel_diff(a: &ChainParams, b: &ChainParams) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE);
    let e = a.eps.iter().zip(&b.eps).map(|(x, y)| rel(*x, *y));
    let t = a.t.iter().zip(&b.t).map(|(x, y)| rel(*x, *y));
    e.chain(t).fold(0.0, f64::max)
}

/// Closed-form Jacobi chain against adaptive quadrature plus Lanczos for
/// `J = ω^s` on `[0, ω_c]`, `n` sites.
pub fn analytic_vs_numeric(s: f64, omega_c: f64, n: usize) -> Result<f64> {
    let j = power_law(1.0, s, omega_c)?;
    let mass = j.total_mass()?;
    let exact = build_chain(&jacobi_recurrence(s, n + 1)?.with_total_mass(mass), omega_c, n)?;
    let numeric = build_chain(&adaptive_recurrence(&j.to_unit_measure()?, n + 1)?, omega_c, n)?;
    Ok(chain_rel_diff(&numeric, &exact))
}

fn coeff_rel_diff(a: &RecurrenceCoefficients, b: &RecurrenceCoefficients, n: usize) -> f64 {
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE);
    (0..n).map(|k| rel(a.alpha[k], b.alpha[k]).max(rel(a.beta[k], b.beta[k]))).fold(0.0, f64::max)
}

/// Little-q Jacobi closed form against Lanczos on the log-discretized
/// measure, first `n` coefficients.
pub fn little_q_vs_lanczos(s: f64, delta: f64, n: usize) -> Result<f64> {
    // enough bins that the truncated geometric tail cannot matter at `n`
    let log = log_discretize(1.0, s, 1.0, delta, n + 60)?;
    let closed = little_q_jacobi_chain(&log, n)?;
    let numeric = lanczos_rkpw(&log.discrete_measure()?, n)?;
    Ok(coeff_rel_diff(&closed, &numeric, n))
}

/// `ε_n`, `t_n` residual from `ω_c/2`, `ω_c/4` at the last site of an
/// `n`-site chain.
pub fn asymptote_residual(j: &SpectralDensity, n: usize) -> Result<f64> {
    let c = chain_from_density(j, n)?;
    let a = asymptote_convergence(&c, f64::INFINITY)?;
    Ok(*a.residuals.last().expect("nonempty"))
}

/// Fitted `p` in residual `∝ n^{−p}` for the Jacobi chain of exponent `s`.
pub fn jacobi_decay_exponent(s: f64, from: usize, to: usize) -> Result<f64> {
    let c = build_chain(&jacobi_recurrence(s, to + 2)?, 1.0, to + 1)?;
    let a = asymptote_convergence(&c, f64::INFINITY)?;
    fit_decay_exponent(&a.residuals, from, to)
}

/// Semicircle deviation of the tail beyond a Brownian-oscillator chain.
pub fn terminal_deviation(n_modes: usize) -> Result<f64> {
    let j = overdamped_brownian(100.0, 53.0, 1060.0)?;
    let c = chain_from_density(&j, 40)?;
    Ok(terminal_spectral_density(&c, 39, n_modes)?.semicircle_deviation(40))
}

/// Dimer with identical two-site chains of `density` at local dimension `d`.
pub fn tiny_lattice(j: &SpectralDensity, sys: &SystemSpec, sites: usize, d: usize) -> Result<LatticeHamiltonian> {
    let c = chain_from_density(j, sites)?;
    assemble_lattice(sys, &[c.clone(), c], d)
}

pub struct TrotterComparison {
    /// sup-norm error in `p1` at `dt`
    pub coarse: f64,
    /// same at `dt/2`
    pub fine: f64,
    pub coarse_run: Trajectory,
}

/// TEBD at `dt` and `dt/2` (unrestricted bond dimension) against dense propagation.
pub fn tebd_vs_dense(lat: &LatticeHamiltonian, dt: f64, t_final: f64, order: u8) -> Result<TrotterComparison> {
    let sys = dense_build(lat, DEFAULT_DENSE_CAP)?;
    let stride = ((0.01 / dt).round() as usize).max(1);
    let run = |dt: f64, stride: usize| -> Result<Trajectory> {
        let cfg = EvolutionConfig {
            dt,
            t_final,
            trotter_order: order,
            chi_max: 100_000,
            trunc_tol: 0.0,
            measure_stride: stride,
            ..Default::default()
        };
        Ok(tebd_evolve(lat, init_vacuum(lat, 1, cfg.chi_max, 0.0)?, &cfg)?.0)
    };
    let coarse = run(dt, stride)?;
    let fine = run(dt / 2.0, 2 * stride)?;
    let exact = dense_evolve(&sys, &sys.initial_state(1)?, &coarse.times)?;
    let sup = |tr: &Trajectory| tr.p1.iter().zip(&exact.p1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(TrotterComparison { coarse: sup(&coarse), fine: sup(&fine), coarse_run: coarse })
}

/// Decoupled dimer against the two-level formula.
pub fn rabi_deviation(sys: &SystemSpec, delta: f64, coupling: f64, dt: f64, t_final: f64) -> Result<f64> {
    let empty = ChainParams {
        eps: vec![500.0; 2],
        t: vec![250.0; 2],
        eta: 0.0,
        omega_c: 1000.0,
        source: crate::orthopoly::Source::Lanczos,
    };
    let lat = assemble_lattice(sys, &[empty.clone(), empty], 2)?;
    let cfg = EvolutionConfig { dt, t_final, measure_stride: ((0.002 / dt).round() as usize).max(1), ..Default::default() };
    let (tr, _) = tebd_evolve(&lat, init_vacuum(&lat, 1, 8, 0.0)?, &cfg)?;
    Ok(tr.times.iter().zip(&tr.p1).map(|(t, p)| (p - rabi_analytic(delta, coupling, *t)).abs()).fold(0.0, f64::max))
}

/// The whole suite for `cfg`. The engine checks use the configured density
/// and dimer on a lattice of two chain sites per bath at `d = 3`.
pub fn run_verify(cfg: &RunConfig, base: &Path) -> Result<Report> {
    let v = &cfg.verify;
    let mut checks = Vec::new();

    for s in [0.5, 1.0, 3.0] {
        let err = analytic_vs_numeric(s, 1000.0, v.n_coefficients)?;
        checks.push(Check::below(format!("analytic_vs_lanczos_s{s}"), err, v.coefficient_tol));
    }

    let [j, _] = cfg.densities(base)?;
    let m = j.to_unit_measure()?;
    let d = quadrature_discretize(&m, 8, 64)?;
    let n_st = 40.min(d.len());
    let diff = coeff_rel_diff(&stieltjes(&d, n_st)?, &lanczos_rkpw(&d, n_st)?, n_st);
    checks.push(Check::below("stieltjes_vs_lanczos", diff, 1e-8));
    let small = quadrature_discretize(&m, 1, 12)?;
    let diff = coeff_rel_diff(&moment_oracle(&small, 6)?, &lanczos_rkpw(&small, 6)?, 6);
    checks.push(Check::below("moments_vs_lanczos", diff, 1e-10));
    checks.push(Check::below("little_q_vs_lanczos", little_q_vs_lanczos(1.0, 2.0, 30)?, 1e-8));

    for (name, s) in [("flat", 0.0), ("s1", 1.0), ("s3", 3.0)] {
        let r = asymptote_residual(&power_law(1.0, s, 1000.0)?, 100)?;
        checks.push(Check::below(format!("asymptote_{name}"), r, UNIVERSALITY_TOL));
    }
    let r = asymptote_residual(&overdamped_brownian(100.0, 53.0, 1060.0)?, 100)?;
    checks.push(Check::below("asymptote_obo", r, UNIVERSALITY_TOL));
    for s in [1.0, 3.0] {
        checks.push(Check::within(format!("decay_exponent_s{s}"), jacobi_decay_exponent(s, 20, 100)?, 1.9, 2.1));
    }
    checks.push(Check::below("terminal_semicircle", terminal_deviation(2000)?, 0.05));

    let s = &cfg.system;
    let dimer = SystemSpec::dimer(s.eps1, s.eps2, s.j);
    checks.push(Check::below("rabi_decoupled", rabi_deviation(&dimer, s.eps1 - s.eps2, s.j, 1e-4, 0.2)?, 1e-6));

    let lat = tiny_lattice(&j, &dimer, 2, 3)?;
    let dense = dense_build(&lat, DEFAULT_DENSE_CAP)?;
    checks.push(Check::below("dense_eigen_residual", eigen_residual(&dense)?, 1e-10));
    let cmp = tebd_vs_dense(&lat, v.dt, v.t_final, 2)?;
    checks.push(Check::below("tebd_vs_dense", cmp.coarse, v.tebd_tol));
    checks.push(Check::within("trotter_order2_ratio", cmp.coarse / cmp.fine, v.order_ratio[0], v.order_ratio[1]));
    checks.push(Check::below("conservation_excess", cmp.coarse_run.conservation_excess(), 1e-8));
    checks.push(Check::below("norm_excess", cmp.coarse_run.norm_excess(), 1e-8));

    Ok(Report { checks })
}
