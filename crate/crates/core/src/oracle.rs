//! Reference solutions: exact dense propagation of small lattices and
//! closed forms for the uncoupled dimer and a single dephasing mode.

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::chain::{LatticeHamiltonian, SiteKind};
use crate::error::{Error, Result};
use crate::mps::Trajectory;
use crate::specdens::CM_TO_RAD_PER_PS;

pub const DEFAULT_DENSE_CAP: usize = 20_000;

/// Full Hamiltonian (cm⁻¹) on the product basis, entry 0 fastest.
#[derive(Clone, Debug)]
pub struct DenseSystem {
    pub h: Mat<C64>,
    pub dims: Vec<usize>,
    pub system_index: usize,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in 1..dims.len() {
        s[i] = s[i - 1] * dims[i - 1];
    }
    s
}

pub fn dense_build(lat: &LatticeHamiltonian, cap: usize) -> Result<DenseSystem> {
    let dims = lat.dims();
    let dim = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    if dim > cap {
        return Err(Error::TooLarge { dim, cap });
    }
    let st = strides(&dims);
    let mut h = Mat::<C64>::zeros(dim, dim);
    for (i, site) in lat.sites.iter().enumerate() {
        let d = dims[i];
        for col in 0..dim {
            let s = (col / st[i]) % d;
            let base = col - s * st[i];
            for sp in 0..d {
                let v = site.onsite[(sp, s)];
                if v != C64::new(0.0, 0.0) {
                    h[(base + sp * st[i], col)] += v;
                }
            }
        }
    }
    for bond in &lat.bonds {
        let i = bond.left;
        let (d1, d2) = (dims[i], dims[i + 1]);
        for col in 0..dim {
            let s1 = (col / st[i]) % d1;
            let s2 = (col / st[i + 1]) % d2;
            let base = col - s1 * st[i] - s2 * st[i + 1];
            for p in 0..d1 * d2 {
                let v = bond.op[(p, s1 + d1 * s2)];
                if v != C64::new(0.0, 0.0) {
                    h[(base + (p % d1) * st[i] + (p / d1) * st[i + 1], col)] += v;
                }
            }
        }
    }
    Ok(DenseSystem { h, dims, system_index: lat.system_index() })
}

impl DenseSystem {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// Vacuum chains with the excitation on dimer site `excited_site`.
    pub fn initial_state(&self, excited_site: usize) -> Result<Vec<C64>> {
        if !(excited_site == 1 || excited_site == 2) {
            return Err(Error::Domain(format!("excited_site must be 1 or 2, got {excited_site}")));
        }
        let mut psi = vec![C64::new(0.0, 0.0); self.dim()];
        psi[(excited_site - 1) * strides(&self.dims)[self.system_index]] = C64::new(1.0, 0.0);
        Ok(psi)
    }

    /// Reduced 2×2 density matrix of the system entry.
    pub fn system_density(&self, psi: &[C64]) -> [[C64; 2]; 2] {
        let st = strides(&self.dims)[self.system_index];
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for (idx, amp) in psi.iter().enumerate() {
            if (idx / st) % 2 != 0 {
                continue;
            }
            let partner = psi[idx + st];
            rho[0][0] += amp.norm_sqr();
            rho[1][1] += partner.norm_sqr();
            rho[0][1] += amp * partner.conj();
        }
        rho[1][0] = rho[0][1].conj();
        rho
    }
}

/// `ψ(t) = V e^{−iΛt} V† ψ0` at every requested time (ps).
pub fn dense_evolve(sys: &DenseSystem, psi0: &[C64], times: &[f64]) -> Result<Trajectory> {
    if psi0.len() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), got: psi0.len() });
    }
    let eig = sys.h.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let v = eig.U();
    let w: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let psi = Mat::from_fn(sys.dim(), 1, |i, _| psi0[i]);
    let c = v.adjoint() * &psi;
    let mut traj = Trajectory::default();
    for &t in times {
        let ct = Mat::from_fn(c.nrows(), 1, |i, _| c[(i, 0)] * C64::from_polar(1.0, -w[i] * CM_TO_RAD_PER_PS * t));
        let psi_t = v * &ct;
        let amps: Vec<C64> = (0..sys.dim()).map(|i| psi_t[(i, 0)]).collect();
        let rho = sys.system_density(&amps);
        traj.times.push(t);
        traj.p1.push(rho[0][0].re);
        traj.p2.push(rho[1][1].re);
        traj.c12.push(rho[0][1]);
        traj.s_max.push(0.0);
        traj.discarded.push(0.0);
        traj.norm2.push(amps.iter().map(|a| a.norm_sqr()).sum());
    }
    Ok(traj)
}

/// Residual `max ‖Hv − λv‖ / ‖H‖_max` of the eigendecomposition used by [`dense_evolve`].
pub fn eigen_residual(sys: &DenseSystem) -> Result<f64> {
    let eig = sys.h.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Linalg(format!("{e:?}")))?;
    let v = eig.U();
    let hv = &sys.h * v;
    let mut worst = 0.0f64;
    let mut hmax = 0.0f64;
    for j in 0..sys.dim() {
        let lam = eig.S().column_vector()[j];
        for i in 0..sys.dim() {
            worst = worst.max((hv[(i, j)] - v[(i, j)] * lam).norm());
            hmax = hmax.max(sys.h[(i, j)].norm());
        }
    }
    Ok(worst / hmax.max(f64::MIN_POSITIVE))
}

/// Population of site 1 for an isolated dimer started on site 1:
/// `1 − 4J²/(Δ²+4J²) · sin²(½√(Δ²+4J²) t)`, energies in cm⁻¹, `t` in ps.
pub fn rabi_analytic(delta: f64, j: f64, t: f64) -> f64 {
    let omega2 = delta * delta + 4.0 * j * j;
    if omega2 == 0.0 {
        return 1.0;
    }
    let amp = 4.0 * j * j / omega2;
    1.0 - amp * (0.5 * omega2.sqrt() * CM_TO_RAD_PER_PS * t).sin().powi(2)
}

/// `|ρ_12(t)| / |ρ_12(0)|` for a two-level system with `H = ε₀ b†b + g V (b + b†)`,
/// `V = diag(v₁, v₂)`, `Δv = v₁ − v₂`, no tunnelling:
/// `exp[−(g Δv/ε₀)² (1 − cos ε₀t)]`.
pub fn single_mode_analytic(eps0: f64, g: f64, dv: f64, t: f64) -> f64 {
    let r = g * dv / eps0;
    (-(r * r) * (1.0 - (eps0 * CM_TO_RAD_PER_PS * t).cos())).exp()
}

/// Whether the lattice has any chain entries at all.
pub fn has_bath(lat: &LatticeHamiltonian) -> bool {
    lat.sites.iter().any(|s| s.kind != SiteKind::System)
}
