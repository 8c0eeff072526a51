//! Truncated SVD: exact (faer) for small blocks, randomized range finder
//! for large blocks with a bounded bond dimension.

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const OVERSAMPLE: usize = 10;
const POWER_ITERS: usize = 1;

#[derive(Debug)]
pub struct TruncatedSvd {
    /// `m × χ`
    pub u: Mat<C64>,
    pub s: Vec<f64>,
    /// `χ × n`
    pub vh: Mat<C64>,
    /// squared Frobenius norm of the input
    pub norm2: f64,
    /// squared norm removed by the truncation
    pub discarded: f64,
}

fn frob2(m: MatRef<'_, C64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for z in m.col(j).iter() {
            acc += z.norm_sqr();
        }
    }
    acc
}

/// Smallest `χ ≤ chi_max` whose tail weight is at most `trunc_tol · norm2`.
fn keep_count(s: &[f64], norm2: f64, chi_max: usize, trunc_tol: f64) -> usize {
    let mut tail = norm2 - s.iter().map(|x| x * x).sum::<f64>();
    tail = tail.max(0.0);
    let mut keep = s.len();
    while keep > 1 {
        let next = tail + s[keep - 1] * s[keep - 1];
        if next > trunc_tol * norm2 {
            break;
        }
        tail = next;
        keep -= 1;
    }
    keep.min(chi_max).max(1)
}

fn exact_svd(theta: MatRef<'_, C64>) -> Result<(Mat<C64>, Vec<f64>, Mat<C64>)> {
    let svd = theta.thin_svd().map_err(|e| Error::Linalg(format!("SVD failed: {e:?}")))?;
    let s: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((svd.U().to_owned(), s, svd.V().adjoint().to_owned()))
}

fn orthonormal_columns(y: &Mat<C64>) -> Mat<C64> {
    y.qr().compute_thin_Q()
}

/// Rank-`k` randomized factorization: `Θ ≈ Q (Q†Θ)`, then an exact SVD of the
/// small factor.
fn randomized_svd(theta: MatRef<'_, C64>, k: usize, rng: &mut ChaCha8Rng) -> Result<(Mat<C64>, Vec<f64>, Mat<C64>)> {
    let n = theta.ncols();
    let omega = Mat::from_fn(n, k, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let mut q = orthonormal_columns(&(theta * &omega));
    for _ in 0..POWER_ITERS {
        let z = orthonormal_columns(&(theta.adjoint() * &q));
        q = orthonormal_columns(&(theta * &z));
    }
    let b = q.adjoint() * theta;
    let (ub, s, vh) = exact_svd(b.as_ref())?;
    Ok((&q * &ub, s, vh))
}

pub fn truncated_svd(
    theta: MatRef<'_, C64>,
    chi_max: usize,
    trunc_tol: f64,
    rng: &mut ChaCha8Rng,
) -> Result<TruncatedSvd> {
    let norm2 = frob2(theta);
    if !norm2.is_finite() {
        return Err(Error::Linalg("non-finite two-site tensor".into()));
    }
    let small = theta.nrows().min(theta.ncols());
    let k = chi_max + OVERSAMPLE;
    let (u, s, vh) = if 2 * k >= small { exact_svd(theta)? } else { randomized_svd(theta, k, rng)? };
    let keep = keep_count(&s, norm2, chi_max, trunc_tol);
    let kept: f64 = s[..keep].iter().map(|x| x * x).sum();
    let discarded = (norm2 - kept).max(0.0).max(s[keep..].iter().map(|x| x * x).sum());
    Ok(TruncatedSvd {
        u: u.subcols(0, keep).to_owned(),
        s: s[..keep].to_vec(),
        vh: vh.subrows(0, keep).to_owned(),
        norm2,
        discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn low_rank(m: usize, n: usize, decay: f64) -> Mat<C64> {
        // Σ_r decay^r u_r v_r† with smooth deterministic factors
        let mut a = Mat::<C64>::zeros(m, n);
        for r in 0..m.min(n) {
            let w = decay.powi(r as i32);
            let u = Mat::from_fn(m, 1, |i, _| C64::new(((i * (r + 1)) as f64 * 0.37).sin(), ((i + r) as f64 * 0.11).cos()));
            let v = Mat::from_fn(1, n, |_, j| C64::new(((j * (r + 2)) as f64 * 0.23).cos(), ((j + 2 * r) as f64 * 0.07).sin()));
            a += &u * &v * faer::Scale(C64::new(w, 0.0));
        }
        a
    }

    #[test]
    fn exact_reconstruction_when_unrestricted() {
        let a = low_rank(12, 9, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = truncated_svd(a.as_ref(), 100, 0.0, &mut rng).unwrap();
        let diag = Mat::from_fn(t.s.len(), t.s.len(), |i, j| if i == j { C64::new(t.s[i], 0.0) } else { C64::new(0.0, 0.0) });
        let rec = &t.u * &diag * &t.vh;
        assert!(frob2((&rec - &a).as_ref()) < 1e-24 * t.norm2);
        assert!(t.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn truncation_accounts_discarded_weight() {
        let a = low_rank(30, 30, 0.3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = truncated_svd(a.as_ref(), 4, 0.0, &mut rng).unwrap();
        assert_eq!(t.s.len(), 4);
        let kept: f64 = t.s.iter().map(|x| x * x).sum();
        assert!((kept + t.discarded - t.norm2).abs() < 1e-12 * t.norm2);
        let t2 = truncated_svd(a.as_ref(), 30, 1e-6, &mut rng).unwrap();
        assert!(t2.discarded <= 1e-6 * t2.norm2);
        assert!(t2.s.len() < 30);
    }

    #[test]
    fn randomized_matches_exact_on_decaying_spectrum() {
        let a = low_rank(120, 120, 0.6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (_, s_exact, _) = exact_svd(a.as_ref()).unwrap();
        let t = truncated_svd(a.as_ref(), 20, 0.0, &mut rng).unwrap();
        for i in 0..20 {
            assert!((t.s[i] - s_exact[i]).abs() < 1e-10 * s_exact[0], "{i}");
        }
        let tail: f64 = s_exact[20..].iter().map(|x| x * x).sum();
        assert!((t.discarded - tail).abs() < 1e-10 * t.norm2);
    }
}
