use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::{MappingConfig, MappingMethod, RunConfig};
use crate::chain::{
    asymptote_convergence, assemble_lattice, build_chain, chain_from_density, terminal_spectral_density, ChainParams,
    LatticeHamiltonian, SystemSpec,
};
use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::mps::{init_vacuum, reflection_time, tebd_evolve_with, Trajectory};
use crate::orthopoly::{
    adaptive_recurrence, adaptive_recurrence_with, jacobi_recurrence, lanczos_rkpw, little_q_jacobi_chain,
    log_discretize, quadrature_discretize, stieltjes_checked,
};
use crate::specdens::{szego_class_check, Family, SpectralDensity, SzegoVerdict};

/// Ordered `key = value` lines, written as TOML.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    entries: Vec<(String, String)>,
}

impl Summary {
    fn num(&mut self, key: impl Into<String>, v: f64, sig: usize) {
        let s = if v.is_finite() { fmt_sig(v, sig) } else { format!("\"{v}\"") };
        self.entries.push((key.into(), s));
    }

    fn int(&mut self, key: impl Into<String>, v: usize) {
        self.entries.push((key.into(), v.to_string()));
    }

    fn text(&mut self, key: impl Into<String>, v: &str) {
        self.entries.push((key.into(), format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))));
    }

    /// Raw right-hand side of `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for (k, v) in &self.entries {
            writeln!(w, "{k} = {v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Chain of `mapping.n_chain` sites for `j` with the configured method.
pub fn map_chain(j: &SpectralDensity, mapping: &MappingConfig) -> Result<ChainParams> {
    let n = mapping.n_chain;
    let wc = j.omega_c();
    let power_law = || match j.family() {
        Family::PowerLaw { alpha, s } if j.lines().is_empty() => Ok((alpha, s)),
        _ => Err(Error::config("mapping.method", "closed forms need a bare power-law density")),
    };
    let rc = match mapping.method {
        MappingMethod::Auto => return chain_from_density(j, n),
        MappingMethod::AnalyticJacobi => {
            let (_, s) = power_law()?;
            jacobi_recurrence(s, n + 1)?.with_total_mass(j.total_mass()?)
        }
        MappingMethod::LittleQ => {
            let (alpha, s) = power_law()?;
            let log = log_discretize(alpha, s, wc, mapping.log_delta, n + 1)?;
            little_q_jacobi_chain(&log, n + 1)?
        }
        MappingMethod::Lanczos | MappingMethod::Stieltjes => {
            let m = j.to_unit_measure()?;
            let stieltjes = mapping.method == MappingMethod::Stieltjes;
            if mapping.quad_intervals > 0 {
                let d = quadrature_discretize(&m, mapping.quad_intervals, mapping.quad_nodes)?;
                let n_max = (n + 1).min(d.len());
                if stieltjes {
                    stieltjes_checked(&d, n_max)?
                } else {
                    lanczos_rkpw(&d, n_max)?
                }
            } else if stieltjes {
                adaptive_recurrence_with(&m, n + 1, stieltjes_checked)?
            } else {
                adaptive_recurrence(&m, n + 1)?
            }
        }
    };
    build_chain(&rc, wc, n.min(rc.n_max()))
}

fn verdict_name(v: SzegoVerdict) -> &'static str {
    match v {
        SzegoVerdict::InClass => "in_class",
        SzegoVerdict::OutOfClass => "out_of_class",
        SzegoVerdict::Inconclusive => "inconclusive",
    }
}

fn describe_bath(sum: &mut Summary, suffix: &str, j: &SpectralDensity, c: &ChainParams, mapping: &MappingConfig, sig: usize) -> Result<()> {
    sum.text(format!("source{suffix}"), &format!("{:?}", c.source));
    sum.int(format!("n_chain{suffix}"), c.length());
    sum.num(format!("eta_cm1{suffix}"), c.eta, sig);
    sum.num(format!("system_coupling_cm1{suffix}"), c.system_coupling(), sig);
    sum.num(format!("omega_c_cm1{suffix}"), c.omega_c, sig);
    match j.reorganization_energy() {
        Ok(l) => sum.num(format!("lambda_cm1{suffix}"), l, sig),
        Err(Error::DivergentIntegral(_)) => sum.text(format!("lambda_cm1{suffix}"), "divergent"),
        Err(e) => return Err(e),
    }
    match asymptote_convergence(c, mapping.asymptote_tol) {
        Ok(a) => sum.int(format!("n_star{suffix}"), a.n_star),
        Err(Error::NotConverged(_)) | Err(Error::InvalidParameter(_)) => sum.text(format!("n_star{suffix}"), "not_reached"),
        Err(e) => return Err(e),
    }
    let verdict = szego_class_check(&j.to_unit_measure()?, 1e-3);
    sum.text(format!("szego{suffix}"), verdict_name(verdict));
    Ok(())
}

fn create(dir: &Path, name: String) -> Result<(PathBuf, BufWriter<File>)> {
    let p = dir.join(name);
    let f = File::create(&p).map_err(|e| Error::config("output.dir", format!("{}: {e}", p.display())))?;
    Ok((p, BufWriter::new(f)))
}

pub struct MapOutput {
    pub chains: [ChainParams; 2],
    pub summary: Summary,
    pub files: Vec<PathBuf>,
}

fn map_both(cfg: &RunConfig, base: &Path) -> Result<([SpectralDensity; 2], [ChainParams; 2], bool)> {
    let [j1, j2] = cfg.densities(base)?;
    let c1 = map_chain(&j1, &cfg.mapping)?;
    let shared = cfg.spectral_density_2.as_ref().is_none_or(|d| *d == cfg.spectral_density);
    let c2 = if shared { c1.clone() } else { map_chain(&j2, &cfg.mapping)? };
    Ok(([j1, j2], [c1, c2], shared))
}

fn mapping_summary(cfg: &RunConfig, js: &[SpectralDensity; 2], cs: &[ChainParams; 2], shared: bool) -> Result<Summary> {
    let sig = cfg.output.precision;
    let mut sum = Summary::default();
    sum.text("method", &format!("{:?}", cfg.mapping.method));
    describe_bath(&mut sum, "", &js[0], &cs[0], &cfg.mapping, sig)?;
    if !shared {
        describe_bath(&mut sum, "_2", &js[1], &cs[1], &cfg.mapping, sig)?;
    }
    Ok(sum)
}

/// Writes `stem.chain.csv` (and `stem.chain2.csv` for a distinct second
/// bath), `stem.summary`, and with `terminal_modes > 0` `stem.terminal.csv`.
pub fn run_map(cfg: &RunConfig, base: &Path, out_dir: &Path) -> Result<MapOutput> {
    std::fs::create_dir_all(out_dir)?;
    let sig = cfg.output.precision;
    let stem = &cfg.output.stem;
    let (js, cs, shared) = map_both(cfg, base)?;
    let mut files = Vec::new();
    let (p, mut w) = create(out_dir, format!("{stem}.chain.csv"))?;
    cs[0].write_csv(&mut w, sig)?;
    w.flush()?;
    files.push(p);
    if !shared {
        let (p, mut w) = create(out_dir, format!("{stem}.chain2.csv"))?;
        cs[1].write_csv(&mut w, sig)?;
        w.flush()?;
        files.push(p);
    }
    let mut summary = mapping_summary(cfg, &js, &cs, shared)?;
    if cfg.mapping.terminal_modes > 0 {
        let c = &cs[0];
        let n_cut = c.length().saturating_sub(1).min(c.t.len().saturating_sub(1));
        let td = terminal_spectral_density(c, n_cut, cfg.mapping.terminal_modes)?;
        summary.num("terminal_semicircle_deviation", td.semicircle_deviation(cfg.mapping.terminal_bins), sig);
        let (p, mut w) = create(out_dir, format!("{stem}.terminal.csv"))?;
        td.write_csv(&mut w, sig)?;
        w.flush()?;
        files.push(p);
    }
    let p = out_dir.join(format!("{stem}.summary"));
    summary.write(&p)?;
    files.push(p);
    Ok(MapOutput { chains: cs, summary, files })
}

/// The dimer with both chains, as `run_dynamics` builds it.
pub fn build_lattice(cfg: &RunConfig, base: &Path) -> Result<(LatticeHamiltonian, [ChainParams; 2])> {
    let (_, cs, _) = map_both(cfg, base)?;
    let s = &cfg.system;
    let lat = assemble_lattice(&SystemSpec::dimer(s.eps1, s.eps2, s.j), &cs, cfg.evolution.local_dim)?;
    Ok((lat, cs))
}

pub struct DynamicsOutput {
    pub trajectory: Trajectory,
    pub summary: Summary,
    pub files: Vec<PathBuf>,
}

/// Maps, evolves and writes `stem.trajectory.csv`, `stem.summary` and, when
/// occupations are recorded, `stem.occupations.csv`.
pub fn run_dynamics<F: FnMut(usize, usize)>(cfg: &RunConfig, base: &Path, out_dir: &Path, progress: F) -> Result<DynamicsOutput> {
    std::fs::create_dir_all(out_dir)?;
    let sig = cfg.output.precision;
    let stem = &cfg.output.stem;
    let (js, cs, shared) = map_both(cfg, base)?;
    let s = &cfg.system;
    let lat = assemble_lattice(&SystemSpec::dimer(s.eps1, s.eps2, s.j), &cs, cfg.evolution.local_dim)?;
    let ev = &cfg.evolution;
    let engine = ev.engine(cfg.seed);
    let t_back = reflection_time(&lat, cs[0].omega_c.max(cs[1].omega_c));
    if engine.t_final > t_back {
        log::warn!("t_final = {} ps exceeds the chain reflection time {t_back:.3} ps", engine.t_final);
    }
    let psi = init_vacuum(&lat, ev.excited_site, ev.chi_max, ev.trunc_tol)?;
    let (tr, _) = tebd_evolve_with(&lat, psi, &engine, progress)?;

    let mut files = Vec::new();
    let (p, mut w) = create(out_dir, format!("{stem}.trajectory.csv"))?;
    tr.write_csv(&mut w, sig)?;
    w.flush()?;
    files.push(p);
    if ev.record_occupations {
        let (p, mut w) = create(out_dir, format!("{stem}.occupations.csv"))?;
        tr.write_occupations_csv(&mut w, sig)?;
        w.flush()?;
        files.push(p);
    }

    let mut summary = mapping_summary(cfg, &js, &cs, shared)?;
    let last = tr.times.len() - 1;
    summary.int("local_dim", ev.local_dim);
    summary.int("chi_max", ev.chi_max);
    summary.num("dt_ps", ev.dt, sig);
    summary.num("t_final_ps", tr.times[last], sig);
    summary.num("reflection_time_ps", t_back, sig);
    summary.num("lifetime_fraction", ev.lifetime_fraction, sig);
    summary.num("coherence_lifetime_ps", tr.coherence_lifetime(ev.lifetime_fraction), sig);
    summary.num("p1_final", tr.p1[last], sig);
    summary.num("p2_final", tr.p2[last], sig);
    summary.num("discarded_weight", tr.discarded[last], sig);
    summary.num("conservation_excess", tr.conservation_excess(), sig);
    summary.num("norm_excess", tr.norm_excess(), sig);
    let p = out_dir.join(format!("{stem}.summary"));
    summary.write(&p)?;
    files.push(p);
    Ok(DynamicsOutput { trajectory: tr, summary, files })
}
