//! Small dense operators. Two-site operators act on `p = s_left + d_left · s_right`.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub fn identity(d: usize) -> Mat<C64> {
    Mat::from_fn(d, d, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

/// Truncated bosonic `b`, `b|n⟩ = √n |n−1⟩`.
pub fn annihilation(d: usize) -> Mat<C64> {
    Mat::from_fn(d, d, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn number(d: usize) -> Mat<C64> {
    Mat::from_fn(d, d, |i, j| if i == j { C64::new(i as f64, 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn adjoint(a: &Mat<C64>) -> Mat<C64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

/// `A ⊗ B` with the left factor's index running fastest.
pub fn kron_lr(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (d1, d2) = (a.nrows(), b.nrows());
    Mat::from_fn(d1 * d2, d1 * d2, |r, c| a[(r % d1, c % d1)] * b[(r / d1, c / d1)])
}

pub fn real(m: Vec<Vec<f64>>) -> Mat<C64> {
    Mat::from_fn(m.len(), m.len(), |i, j| C64::new(m[i][j], 0.0))
}

pub fn max_abs_diff(a: &Mat<C64>, b: &Mat<C64>) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn check_hermitian(a: &Mat<C64>, what: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
    }
    let scale = (0..a.nrows()).flat_map(|i| (0..a.ncols()).map(move |j| (i, j))).fold(1.0f64, |m, (i, j)| m.max(a[(i, j)].norm()));
    if max_abs_diff(a, &adjoint(a)) > 1e-12 * scale {
        return Err(Error::NonHermitianTerm(what.to_string()));
    }
    Ok(())
}
