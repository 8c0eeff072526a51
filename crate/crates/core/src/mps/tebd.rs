use std::collections::HashMap;

use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::state::{MpsState, Sweep};
use super::trajectory::Trajectory;
use crate::chain::{LatticeHamiltonian, SiteKind};
use crate::error::{Error, Result};
use crate::ops::{check_hermitian, identity, kron_lr, number, real};
use crate::specdens::CM_TO_RAD_PER_PS;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    /// ps
    pub dt: f64,
    /// ps
    pub t_final: f64,
    #[serde(default = "default_order")]
    pub trotter_order: u8,
    #[serde(default = "default_chi")]
    pub chi_max: usize,
    #[serde(default = "default_trunc_tol")]
    pub trunc_tol: f64,
    /// measure every this many steps
    #[serde(default = "default_stride")]
    pub measure_stride: usize,
    /// abort when one step discards more than this (squared norm)
    #[serde(default)]
    pub abort_discarded: Option<f64>,
    /// record ⟨b†b⟩ on every chain entry at each measurement
    #[serde(default)]
    pub record_occupations: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_order() -> u8 {
    2
}
fn default_chi() -> usize {
    30
}
fn default_trunc_tol() -> f64 {
    1e-10
}
fn default_stride() -> usize {
    10
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            dt: 1e-3,
            t_final: 1.0,
            trotter_order: 2,
            chi_max: 30,
            trunc_tol: 1e-10,
            measure_stride: 10,
            abort_discarded: None,
            record_occupations: false,
            seed: 0,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt) {
            return Err(Error::InvalidParameter(format!("t_final = {} is shorter than dt", self.t_final)));
        }
        if !(self.trotter_order == 1 || self.trotter_order == 2) {
            return Err(Error::InvalidParameter(format!("Trotter order must be 1 or 2, got {}", self.trotter_order)));
        }
        if self.chi_max == 0 || self.measure_stride == 0 {
            return Err(Error::InvalidParameter("chi_max and measure_stride must be at least 1".into()));
        }
        if !(self.trunc_tol >= 0.0) {
            return Err(Error::InvalidParameter("trunc_tol must be non-negative".into()));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }
}

/// Two-site propagators `exp(−i h_b τ)` for every bond, where `h_b` is the
/// bond term plus the on-site terms shared out between neighbouring bonds
/// (half each, or all of it for an entry with a single bond).
pub struct GateCache<'a> {
    lat: &'a LatticeHamiltonian,
    local: Vec<(Vec<f64>, Mat<C64>)>,
    cache: HashMap<(usize, u64), Mat<C64>>,
}

impl<'a> GateCache<'a> {
    pub fn new(lat: &'a LatticeHamiltonian) -> Result<Self> {
        let n = lat.len();
        let mut local = Vec::with_capacity(lat.bonds.len().max(1));
        if lat.bonds.is_empty() {
            check_hermitian(&lat.sites[0].onsite, "on-site term")?;
            local.push(eigh(&lat.sites[0].onsite)?);
        }
        for bond in &lat.bonds {
            let i = bond.left;
            if i + 1 >= n {
                return Err(Error::UnsupportedTopology(format!("bond {i} leaves the lattice")));
            }
            let (sl, sr) = (&lat.sites[i], &lat.sites[i + 1]);
            check_hermitian(&bond.op, &format!("bond {i}"))?;
            check_hermitian(&sl.onsite, &format!("on-site term {i}"))?;
            check_hermitian(&sr.onsite, &format!("on-site term {}", i + 1))?;
            let share = |site: usize| {
                let deg = lat.bonds.iter().filter(|b| b.left == site || b.left + 1 == site).count();
                1.0 / deg as f64
            };
            let scale = |m: &Mat<C64>, s: f64| Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)] * s);
            let h = &bond.op
                + kron_lr(&scale(&sl.onsite, share(i)), &identity(sr.local_dim))
                + kron_lr(&identity(sl.local_dim), &scale(&sr.onsite, share(i + 1)));
            local.push(eigh(&h)?);
        }
        Ok(GateCache { lat, local, cache: HashMap::new() })
    }

    /// `exp(−i h τ)` for bond index `k` (position in `lat.bonds`), τ in ps.
    pub fn gate(&mut self, k: usize, tau: f64) -> &Mat<C64> {
        let local = &self.local;
        self.cache.entry((k, tau.to_bits())).or_insert_with(|| {
            let (w, v) = &local[k];
            let n = w.len();
            let phase = Mat::from_fn(n, n, |i, j| {
                if i == j {
                    C64::from_polar(1.0, -w[i] * CM_TO_RAD_PER_PS * tau)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            v * phase * v.adjoint()
        })
    }

    pub fn lattice(&self) -> &LatticeHamiltonian {
        self.lat
    }
}

fn eigh(h: &Mat<C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let e = h.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Linalg(format!("eigendecomposition failed: {e:?}")))?;
    let w = e.S().column_vector().iter().map(|z| z.re).collect();
    Ok((w, e.U().to_owned()))
}

/// Time after which excitations emitted into the shorter chain return to the
/// system, `2N / v` with `v = 2 t_∞` the fastest group velocity (sites per ps).
pub fn reflection_time(lat: &LatticeHamiltonian, omega_c: f64) -> f64 {
    let sys = lat.system_index();
    let n = sys.min(lat.len() - 1 - sys) as f64;
    let v = 2.0 * 0.25 * omega_c * CM_TO_RAD_PER_PS;
    2.0 * n / v
}

struct Observer {
    proj1: Mat<C64>,
    proj2: Mat<C64>,
    coh: Mat<C64>,
}

impl Observer {
    fn new() -> Self {
        Observer {
            proj1: real(vec![vec![1.0, 0.0], vec![0.0, 0.0]]),
            proj2: real(vec![vec![0.0, 0.0], vec![0.0, 1.0]]),
            // |2⟩⟨1|, whose expectation is ρ_12
            coh: real(vec![vec![0.0, 0.0], vec![1.0, 0.0]]),
        }
    }

    fn record(&self, t: f64, psi: &mut MpsState, lat: &LatticeHamiltonian, cfg: &EvolutionConfig, out: &mut Trajectory) -> Result<()> {
        let sys = lat.system_index();
        let rho = psi.local_density(sys)?;
        let tr = |op: &Mat<C64>| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += op[(j, i)] * rho[(i, j)];
                }
            }
            acc
        };
        out.times.push(t);
        out.p1.push(tr(&self.proj1).re);
        out.p2.push(tr(&self.proj2).re);
        out.c12.push(tr(&self.coh));
        out.s_max.push(psi.max_bond_entropy());
        out.discarded.push(psi.discarded);
        out.norm2.push(psi.norm2());
        if cfg.record_occupations {
            let mut occ = Vec::with_capacity(lat.len());
            for (i, site) in lat.sites.iter().enumerate() {
                if site.kind == SiteKind::System {
                    occ.push(f64::NAN);
                } else {
                    occ.push(psi.measure_local(number(site.local_dim).as_ref(), i)?.re);
                }
            }
            out.occupations.push(occ);
        }
        Ok(())
    }
}

/// Second-order (`A(τ/2) B(τ) A(τ/2)`) or first-order (`A(τ) B(τ)`) Trotter
/// evolution, where `A`/`B` are the bonds with even/odd left index.
/// Consecutive `A` half steps are merged between measurements.
pub fn tebd_evolve(lat: &LatticeHamiltonian, psi: MpsState, cfg: &EvolutionConfig) -> Result<(Trajectory, MpsState)> {
    tebd_evolve_with(lat, psi, cfg, |_, _| {})
}

/// As [`tebd_evolve`], calling `progress(step, n_steps)` after every step.
pub fn tebd_evolve_with<F: FnMut(usize, usize)>(
    lat: &LatticeHamiltonian,
    mut psi: MpsState,
    cfg: &EvolutionConfig,
    mut progress: F,
) -> Result<(Trajectory, MpsState)> {
    cfg.validate()?;
    if psi.len() != lat.len() {
        return Err(Error::DimensionMismatch { expected: lat.len(), got: psi.len() });
    }
    psi.chi_max = cfg.chi_max;
    psi.trunc_tol = cfg.trunc_tol;
    let mut gates = GateCache::new(lat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let even: Vec<usize> = (0..lat.bonds.len()).filter(|&k| lat.bonds[k].left % 2 == 0).collect();
    let odd: Vec<usize> = (0..lat.bonds.len()).filter(|&k| lat.bonds[k].left % 2 == 1).collect();
    let n_steps = cfg.n_steps();
    let dt = cfg.dt;
    let obs = Observer::new();
    let mut traj = Trajectory::default();
    obs.record(0.0, &mut psi, lat, cfg, &mut traj)?;

    let mut direction = Sweep::Right;
    let mut layer = |psi: &mut MpsState, bonds: &[usize], tau: f64, gates: &mut GateCache, rng: &mut ChaCha8Rng| -> Result<f64> {
        if lat.bonds.is_empty() {
            let (w, v) = &gates.local[0];
            let n = w.len();
            let ph = Mat::from_fn(n, n, |i, j| {
                if i == j { C64::from_polar(1.0, -w[i] * CM_TO_RAD_PER_PS * tau) } else { C64::new(0.0, 0.0) }
            });
            let u = v * ph * v.adjoint();
            psi.apply_one_site(u.as_ref(), 0)?;
            return Ok(0.0);
        }
        let mut lost = 0.0;
        let order: Vec<usize> = match direction {
            Sweep::Right => bonds.to_vec(),
            Sweep::Left => bonds.iter().rev().copied().collect(),
        };
        for k in order {
            let i = lat.bonds[k].left;
            let g = gates.gate(k, tau).clone();
            lost += psi.apply_two_site(g.as_ref(), i, direction, rng)?;
        }
        direction = if direction == Sweep::Right { Sweep::Left } else { Sweep::Right };
        Ok(lost)
    };

    let mut pending_half = false;
    for step in 1..=n_steps {
        let mut lost = 0.0;
        if cfg.trotter_order == 2 {
            let lead = if pending_half { dt } else { dt / 2.0 };
            lost += layer(&mut psi, &even, lead, &mut gates, &mut rng)?;
            lost += layer(&mut psi, &odd, dt, &mut gates, &mut rng)?;
            pending_half = true;
        } else {
            lost += layer(&mut psi, &even, dt, &mut gates, &mut rng)?;
            lost += layer(&mut psi, &odd, dt, &mut gates, &mut rng)?;
        }
        let measure = step % cfg.measure_stride == 0 || step == n_steps;
        if measure && pending_half {
            lost += layer(&mut psi, &even, dt / 2.0, &mut gates, &mut rng)?;
            pending_half = false;
        }
        if let Some(limit) = cfg.abort_discarded {
            if lost > limit {
                return Err(Error::TruncationOverflow { step, weight: lost, threshold: limit });
            }
        }
        if measure {
            obs.record(step as f64 * dt, &mut psi, lat, cfg, &mut traj)?;
        }
        progress(step, n_steps);
    }
    Ok((traj, psi))
}

/// `Σ ⟨h_site⟩ + Σ ⟨h_bond⟩` in cm⁻¹.
pub fn energy_expectation(lat: &LatticeHamiltonian, psi: &mut MpsState) -> Result<f64> {
    if psi.len() != lat.len() {
        return Err(Error::DimensionMismatch { expected: lat.len(), got: psi.len() });
    }
    let mut e = 0.0;
    for (i, site) in lat.sites.iter().enumerate() {
        e += psi.measure_local(site.onsite.as_ref(), i)?.re;
    }
    for bond in &lat.bonds {
        e += psi.measure_bond(bond.op.as_ref(), bond.left)?.re;
    }
    Ok(e)
}
