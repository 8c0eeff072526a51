use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mps::EvolutionConfig;
use crate::specdens::{self, SpectralDensity, SpectralLine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Map,
    Dynamics,
    Verify,
}

/// A whole run, read from TOML. See `configs/` for annotated examples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub seed: u64,
    pub spectral_density: DensityConfig,
    /// Bath of site 2; defaults to a copy of `spectral_density`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_density_2: Option<DensityConfig>,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub mapping: MappingConfig,
    #[serde(default)]
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityConfig {
    PowerLaw {
        alpha: f64,
        s: f64,
        omega_c: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        lines: Vec<SpectralLine>,
    },
    OverdampedBrownian {
        lambda: f64,
        gamma: f64,
        /// defaults to 20γ
        #[serde(default, skip_serializing_if = "Option::is_none")]
        omega_c: Option<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        lines: Vec<SpectralLine>,
    },
    AdolphsRenger {
        lambda: f64,
        s_h: f64,
        omega_h: f64,
        omega_1: f64,
        omega_2: f64,
        omega_c: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        lines: Vec<SpectralLine>,
    },
    /// Two-column text file (ω in cm⁻¹, J in cm⁻¹), relative to the config.
    Tabulated {
        file: PathBuf,
        omega_c: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        lines: Vec<SpectralLine>,
    },
    Discrete {
        omega_c: f64,
        lines: Vec<SpectralLine>,
    },
}

impl DensityConfig {
    /// `base` resolves relative table paths.
    pub fn build(&self, base: &Path) -> Result<SpectralDensity> {
        let (j, lines) = match self {
            DensityConfig::PowerLaw { alpha, s, omega_c, lines } => (specdens::power_law(*alpha, *s, *omega_c)?, lines),
            DensityConfig::OverdampedBrownian { lambda, gamma, omega_c, lines } => {
                let wc = omega_c.unwrap_or_else(|| specdens::default_obo_cutoff(*gamma));
                (specdens::overdamped_brownian(*lambda, *gamma, wc)?, lines)
            }
            DensityConfig::AdolphsRenger { lambda, s_h, omega_h, omega_1, omega_2, omega_c, lines } => {
                (specdens::adolphs_renger(*lambda, *s_h, *omega_h, *omega_1, *omega_2, *omega_c)?, lines)
            }
            DensityConfig::Tabulated { file, omega_c, lines } => {
                let path = if file.is_absolute() { file.clone() } else { base.join(file) };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::config("spectral_density.file", format!("{}: {e}", path.display())))?;
                let (w, v) = specdens::parse_table(&text)?;
                (specdens::tabulated(w, v, *omega_c)?, lines)
            }
            DensityConfig::Discrete { omega_c, lines } => return specdens::discrete(lines.clone(), *omega_c),
        };
        if lines.is_empty() {
            Ok(j)
        } else {
            j.with_lines(lines.iter().copied())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// electronic coupling, cm⁻¹
    #[serde(rename = "J")]
    pub j: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig { j: 100.0, eps1: 100.0, eps2: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingMethod {
    Auto,
    AnalyticJacobi,
    Stieltjes,
    Lanczos,
    LittleQ,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingConfig {
    #[serde(default = "default_method")]
    pub method: MappingMethod,
    #[serde(default = "default_n_chain")]
    pub n_chain: usize,
    /// Gauss–Legendre panels for `stieltjes`/`lanczos`; 0 picks the adaptive schedule.
    #[serde(default)]
    pub quad_intervals: usize,
    #[serde(default)]
    pub quad_nodes: usize,
    /// Λ of the logarithmic discretisation (`little_q`)
    #[serde(default = "default_log_delta")]
    pub log_delta: f64,
    /// residual threshold defining `n_star`
    #[serde(default = "default_asymptote_tol")]
    pub asymptote_tol: f64,
    /// tail modes for the terminal-density export; 0 skips it
    #[serde(default)]
    pub terminal_modes: usize,
    #[serde(default = "default_terminal_bins")]
    pub terminal_bins: usize,
}

fn default_method() -> MappingMethod {
    MappingMethod::Auto
}
fn default_n_chain() -> usize {
    100
}
fn default_log_delta() -> f64 {
    2.0
}
fn default_asymptote_tol() -> f64 {
    1e-2
}
fn default_terminal_bins() -> usize {
    40
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            method: default_method(),
            n_chain: default_n_chain(),
            quad_intervals: 0,
            quad_nodes: 0,
            log_delta: default_log_delta(),
            asymptote_tol: default_asymptote_tol(),
            terminal_modes: 0,
            terminal_bins: default_terminal_bins(),
        }
    }
}

/// `[evolution]`: the engine settings plus what the lattice and summary need.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionSection {
    pub dt: f64,
    pub t_final: f64,
    pub trotter_order: u8,
    pub chi_max: usize,
    pub trunc_tol: f64,
    pub measure_stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abort_discarded: Option<f64>,
    pub record_occupations: bool,
    /// bosonic levels per chain site
    pub local_dim: usize,
    pub excited_site: usize,
    /// envelope threshold of the coherence-lifetime estimate
    pub lifetime_fraction: f64,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        let e = EvolutionConfig::default();
        EvolutionSection {
            dt: 2e-3,
            t_final: e.t_final,
            trotter_order: e.trotter_order,
            chi_max: e.chi_max,
            trunc_tol: e.trunc_tol,
            measure_stride: 5,
            abort_discarded: None,
            record_occupations: false,
            local_dim: 11,
            excited_site: 1,
            lifetime_fraction: 0.1,
        }
    }
}

impl EvolutionSection {
    pub fn engine(&self, seed: u64) -> EvolutionConfig {
        EvolutionConfig {
            dt: self.dt,
            t_final: self.t_final,
            trotter_order: self.trotter_order,
            chi_max: self.chi_max,
            trunc_tol: self.trunc_tol,
            measure_stride: self.measure_stride,
            abort_discarded: self.abort_discarded,
            record_occupations: self.record_occupations,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub stem: String,
    /// significant digits in every CSV
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("out"), stem: "run".into(), precision: 12 }
    }
}

/// Settings of the cross-oracle suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// time step of the TEBD-vs-dense check, ps (halved for the order check)
    pub dt: f64,
    pub t_final: f64,
    pub tebd_tol: f64,
    pub order_ratio: [f64; 2],
    pub coefficient_tol: f64,
    pub n_coefficients: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dt: 1e-3,
            t_final: 0.5,
            tebd_tol: 1e-5,
            order_ratio: [3.0, 5.0],
            coefficient_tol: 1e-10,
            n_coefficients: 100,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(toml_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config("<serialize>", e.to_string()))
    }

    /// Reads `path`, applies `key=value` overrides (dotted keys, TOML values;
    /// bare words are taken as strings) and validates.
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("<file>", format!("{}: {e}", path.display())))?;
        let mut doc: toml::Table = text.parse().map_err(toml_error)?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: RunConfig = doc.try_into().map_err(toml_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.mapping;
        if m.n_chain == 0 {
            return Err(Error::config("mapping.n_chain", "must be at least 1"));
        }
        if !(m.log_delta > 1.0) {
            return Err(Error::config("mapping.log_delta", "must exceed 1"));
        }
        if (m.quad_intervals == 0) != (m.quad_nodes == 0) {
            return Err(Error::config("mapping.quad_nodes", "set both quad_intervals and quad_nodes, or neither"));
        }
        let e = &self.evolution;
        self.evolution.engine(self.seed).validate().map_err(|err| Error::config("evolution", err.to_string()))?;
        if e.local_dim < 2 {
            return Err(Error::config("evolution.local_dim", "must be at least 2"));
        }
        if !(e.excited_site == 1 || e.excited_site == 2) {
            return Err(Error::config("evolution.excited_site", "must be 1 or 2"));
        }
        if !(e.lifetime_fraction > 0.0 && e.lifetime_fraction < 1.0) {
            return Err(Error::config("evolution.lifetime_fraction", "must lie in (0, 1)"));
        }
        if !(1..=17).contains(&self.output.precision) {
            return Err(Error::config("output.precision", "must lie in 1..=17"));
        }
        if self.output.stem.is_empty() || self.output.stem.contains(['/', '\\']) {
            return Err(Error::config("output.stem", "must be a plain file name"));
        }
        let s = &self.system;
        if ![s.j, s.eps1, s.eps2].iter().all(|x| x.is_finite()) {
            return Err(Error::config("system", "energies must be finite"));
        }
        let v = &self.verify;
        if !(v.dt > 0.0 && v.t_final >= 2.0 * v.dt && v.order_ratio[0] < v.order_ratio[1]) {
            return Err(Error::config("verify", "need dt > 0, t_final >= 2 dt, order_ratio = [lo, hi]"));
        }
        Ok(())
    }

    pub fn densities(&self, base: &Path) -> Result<[SpectralDensity; 2]> {
        let j1 = self.spectral_density.build(base)?;
        let j2 = match &self.spectral_density_2 {
            Some(d) => d.build(base)?,
            None => j1.clone(),
        };
        Ok([j1, j2])
    }
}

fn toml_error<E: std::fmt::Display>(e: E) -> Error {
    let msg = e.to_string();
    // toml puts the span on the first lines and the message last
    let field = msg
        .lines()
        .find_map(|l| l.strip_prefix("TOML parse error at "))
        .unwrap_or("<toml>")
        .to_string();
    Error::config(field, msg.lines().last().unwrap_or_default().trim().to_string())
}

fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::config(spec, "override must look like key=value"))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = parse_value(raw);
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::config(key, "empty path segment"));
    }
    let mut table = doc;
    for p in &parts[..parts.len() - 1] {
        let entry = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::config(key, format!("`{p}` is not a table")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}
