use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;
use rand_chacha::ChaCha8Rng;

use super::svd::truncated_svd;
use super::tensor::Tensor3;
use crate::chain::{LatticeHamiltonian, SiteKind};
use crate::error::{Error, Result};

/// Mixed-canonical matrix product state. Tensors left of `center` are left
/// isometries, those right of it right isometries; the norm lives in the
/// center tensor. Truncation never renormalises: the lost weight is tracked
/// in `discarded` and expectation values divide by the current norm.
#[derive(Clone, Debug)]
pub struct MpsState {
    pub tensors: Vec<Tensor3>,
    /// singular values of bond `i` (between entries `i` and `i+1`) from its
    /// most recent gate
    pub spectra: Vec<Vec<f64>>,
    pub center: usize,
    pub chi_max: usize,
    pub trunc_tol: f64,
    /// accumulated squared norm removed by truncations
    pub discarded: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// leave the center on the right site of the bond
    Right,
    /// leave the center on the left site
    Left,
}

/// Product state: vacuum on every boson, the excitation on dimer site
/// `excited_site` (1 or 2).
pub fn init_vacuum(lat: &LatticeHamiltonian, excited_site: usize, chi_max: usize, trunc_tol: f64) -> Result<MpsState> {
    if !(excited_site == 1 || excited_site == 2) {
        return Err(Error::Domain(format!("excited_site must be 1 or 2, got {excited_site}")));
    }
    let tensors = lat
        .sites
        .iter()
        .map(|site| {
            let mut t = Tensor3::zeros(1, site.local_dim, 1);
            let s = if site.kind == SiteKind::System { excited_site - 1 } else { 0 };
            t.set(0, s, 0, C64::new(1.0, 0.0));
            t
        })
        .collect::<Vec<_>>();
    let n = tensors.len();
    Ok(MpsState {
        tensors,
        spectra: vec![vec![1.0]; n.saturating_sub(1)],
        center: 0,
        chi_max: chi_max.max(1),
        trunc_tol,
        discarded: 0.0,
    })
}

impl MpsState {
    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.tensors[..self.len() - 1].iter().map(|t| t.dr).collect()
    }

    /// `⟨ψ|ψ⟩`, read off the center tensor.
    pub fn norm2(&self) -> f64 {
        self.tensors[self.center].norm2()
    }

    fn shift_right(&mut self) {
        let i = self.center;
        let a = &self.tensors[i];
        let (dl, d) = (a.dl, a.d);
        let qr = a.left_mat().qr();
        let q = qr.compute_thin_Q();
        let r = qr.thin_R().to_owned();
        self.tensors[i] = Tensor3::from_left_mat(q.as_ref(), dl, d);
        let next = &self.tensors[i + 1];
        let (d2, dr2) = (next.d, next.dr);
        let m = &r * next.right_mat();
        self.tensors[i + 1] = Tensor3::from_right_mat(m.as_ref(), d2, dr2);
        self.center = i + 1;
    }

    fn shift_left(&mut self) {
        let i = self.center;
        let a = &self.tensors[i];
        let (d, dr) = (a.d, a.dr);
        let qr = a.right_mat().adjoint().to_owned().qr();
        let q = qr.compute_thin_Q();
        let r = qr.thin_R().to_owned();
        self.tensors[i] = Tensor3::from_right_mat(q.adjoint().to_owned().as_ref(), d, dr);
        let prev = &self.tensors[i - 1];
        let (dl0, d0) = (prev.dl, prev.d);
        let m = prev.left_mat() * r.adjoint();
        self.tensors[i - 1] = Tensor3::from_left_mat(m.as_ref(), dl0, d0);
        self.center = i - 1;
    }

    /// Moves the orthogonality center by QR sweeps.
    pub fn move_center(&mut self, to: usize) -> Result<()> {
        if to >= self.len() {
            return Err(Error::Domain(format!("site {to} outside a chain of {}", self.len())));
        }
        while self.center < to {
            self.shift_right();
        }
        while self.center > to {
            self.shift_left();
        }
        Ok(())
    }

    /// Largest deviation from the isometry conditions over all non-center tensors.
    pub fn canonical_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, t) in self.tensors.iter().enumerate() {
            let gram = if i < self.center {
                t.left_mat().adjoint() * t.left_mat()
            } else if i > self.center {
                t.right_mat() * t.right_mat().adjoint()
            } else {
                continue;
            };
            for c in 0..gram.ncols() {
                for r in 0..gram.nrows() {
                    let target = if r == c { 1.0 } else { 0.0 };
                    worst = worst.max((gram[(r, c)] - C64::new(target, 0.0)).norm());
                }
            }
        }
        worst
    }

    /// Full state vector, entry 0 fastest. Only for small lattices.
    pub fn to_vector(&self) -> Vec<C64> {
        let mut acc: Mat<C64> = Mat::from_fn(1, 1, |_, _| C64::new(1.0, 0.0));
        // acc rows: combined physical index so far, cols: open bond
        for t in &self.tensors {
            let rows = acc.nrows();
            let mut next = Mat::<C64>::zeros(rows * t.d, t.dr);
            for s in 0..t.d {
                // acc · A[:, s, :]
                let slice = Mat::from_fn(t.dl, t.dr, |a, b| t.get(a, s, b));
                let block = &acc * &slice;
                for r in 0..rows {
                    for b in 0..t.dr {
                        next[(r + rows * s, b)] = block[(r, b)];
                    }
                }
            }
            acc = next;
        }
        (0..acc.nrows()).map(|r| acc[(r, 0)]).collect()
    }

    /// Reduced density matrix of one entry, normalised by `⟨ψ|ψ⟩`.
    pub fn local_density(&mut self, site: usize) -> Result<Mat<C64>> {
        self.move_center(site)?;
        let t = &self.tensors[site];
        let norm2 = t.norm2();
        let mut rho = Mat::<C64>::zeros(t.d, t.d);
        for b in 0..t.dr {
            for s in 0..t.d {
                for sp in 0..t.d {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..t.dl {
                        acc += t.get(a, s, b) * t.get(a, sp, b).conj();
                    }
                    rho[(s, sp)] += acc;
                }
            }
        }
        Ok(Mat::from_fn(t.d, t.d, |i, j| rho[(i, j)] / norm2))
    }

    /// `⟨ψ|O|ψ⟩/⟨ψ|ψ⟩` for an operator on one entry.
    pub fn measure_local(&mut self, op: MatRef<'_, C64>, site: usize) -> Result<C64> {
        if site >= self.len() {
            return Err(Error::Domain(format!("site {site} outside a chain of {}", self.len())));
        }
        let d = self.tensors[site].d;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.nrows() });
        }
        let rho = self.local_density(site)?;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += op[(j, i)] * rho[(i, j)];
            }
        }
        Ok(acc)
    }

    /// `−Σ p ln p` of the normalised squared singular values at `bond`.
    pub fn bond_entropy(&self, bond: usize) -> Result<f64> {
        let s = self.spectra.get(bond).ok_or_else(|| Error::Domain(format!("no bond {bond}")))?;
        let total: f64 = s.iter().map(|x| x * x).sum();
        Ok(s.iter()
            .map(|x| x * x / total)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln())
            .sum())
    }

    pub fn max_bond_entropy(&self) -> f64 {
        (0..self.spectra.len()).map(|b| self.bond_entropy(b).unwrap_or(0.0)).fold(0.0, f64::max)
    }

    /// Two-site block `Θ[(a + dl·s1), (s2 + d2·b)]` for bond `i`; the center
    /// must sit on `i` or `i + 1`.
    pub(crate) fn theta(&self, i: usize) -> Mat<C64> {
        self.tensors[i].left_mat() * self.tensors[i + 1].right_mat()
    }

    /// Applies a two-site gate (basis `s1 + d1·s2`) to bond `i` and truncates.
    pub fn apply_two_site(&mut self, gate: MatRef<'_, C64>, i: usize, sweep: Sweep, rng: &mut ChaCha8Rng) -> Result<f64> {
        if self.center != i && self.center != i + 1 {
            self.move_center(if self.center < i { i } else { i + 1 })?;
        }
        let (dl, d1) = (self.tensors[i].dl, self.tensors[i].d);
        let (d2, dr) = (self.tensors[i + 1].d, self.tensors[i + 1].dr);
        let theta = self.theta(i);
        // X[(s1 + d1 s2), (a + dl b)]
        let x = Mat::from_fn(d1 * d2, dl * dr, |p, c| theta[(c % dl + dl * (p % d1), p / d1 + d2 * (c / dl))]);
        let y = gate * &x;
        let theta = Mat::from_fn(dl * d1, d2 * dr, |r, c| y[((r / dl) + d1 * (c % d2), r % dl + dl * (c / d2))]);
        let svd = truncated_svd(theta.as_ref(), self.chi_max, self.trunc_tol, rng)?;
        let k = svd.s.len();
        match sweep {
            Sweep::Right => {
                self.tensors[i] = Tensor3::from_left_mat(svd.u.as_ref(), dl, d1);
                let sv = Mat::from_fn(k, d2 * dr, |r, c| svd.vh[(r, c)] * svd.s[r]);
                self.tensors[i + 1] = Tensor3::from_right_mat(sv.as_ref(), d2, dr);
                self.center = i + 1;
            }
            Sweep::Left => {
                let us = Mat::from_fn(dl * d1, k, |r, c| svd.u[(r, c)] * svd.s[c]);
                self.tensors[i] = Tensor3::from_left_mat(us.as_ref(), dl, d1);
                self.tensors[i + 1] = Tensor3::from_right_mat(svd.vh.as_ref(), d2, dr);
                self.center = i;
            }
        }
        self.spectra[i] = svd.s;
        self.discarded += svd.discarded;
        Ok(svd.discarded)
    }

    /// Applies a one-site unitary at `site`.
    pub fn apply_one_site(&mut self, u: MatRef<'_, C64>, site: usize) -> Result<()> {
        let t = &self.tensors[site];
        let (dl, d, dr) = (t.dl, t.d, t.dr);
        let mut out = Tensor3::zeros(dl, d, dr);
        for b in 0..dr {
            for a in 0..dl {
                for s in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for sp in 0..d {
                        acc += u[(s, sp)] * t.get(a, sp, b);
                    }
                    out.set(a, s, b, acc);
                }
            }
        }
        self.tensors[site] = out;
        Ok(())
    }

    /// `⟨ψ|h|ψ⟩/⟨ψ|ψ⟩` for a two-site operator on bond `i`.
    pub fn measure_bond(&mut self, op: MatRef<'_, C64>, i: usize) -> Result<C64> {
        if i + 1 >= self.len() {
            return Err(Error::Domain(format!("no bond {i}")));
        }
        let (d1, d2) = (self.tensors[i].d, self.tensors[i + 1].d);
        if op.nrows() != d1 * d2 {
            return Err(Error::DimensionMismatch { expected: d1 * d2, got: op.nrows() });
        }
        self.move_center(i)?;
        let dl = self.tensors[i].dl;
        let dr = self.tensors[i + 1].dr;
        let theta = self.theta(i);
        let x = Mat::from_fn(d1 * d2, dl * dr, |p, c| theta[(c % dl + dl * (p % d1), p / d1 + d2 * (c / dl))]);
        let y = op * &x;
        let mut acc = C64::new(0.0, 0.0);
        let mut norm = 0.0;
        for c in 0..x.ncols() {
            for p in 0..x.nrows() {
                acc += x[(p, c)].conj() * y[(p, c)];
                norm += x[(p, c)].norm_sqr();
            }
        }
        Ok(acc / norm)
    }
}

