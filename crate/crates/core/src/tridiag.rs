//! Symmetric tridiagonal eigenproblems, tracking only the first row of the
//! eigenvector matrix (enough for Gauss rules and spectral weights).

use crate::error::{Error, Result};

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off`, together with the first component of each
/// normalised eigenvector. Implicit QL with Wilkinson-type shifts.
pub fn eigen_first_components(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    if off.len() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, got: off.len() });
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NotConverged(format!("tridiagonal QL stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let (w, z) = eigen_first_components(&[1.0, 1.0], &[1.0]).unwrap();
        assert!((w[0] - 0.0).abs() < 1e-15 && (w[1] - 2.0).abs() < 1e-15);
        assert!((z[0] * z[0] - 0.5).abs() < 1e-15);
        assert!((z[1] * z[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uniform_chain_spectrum() {
        // tridiag(0, 1): eigenvalues 2cos(kπ/(n+1)), first components √(2/(n+1)) sin(kπ/(n+1))
        let n = 50;
        let (w, z) = eigen_first_components(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        for k in 1..=n {
            let th = k as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            let lam = 2.0 * th.cos();
            let j = n - k;
            assert!((w[j] - lam).abs() < 1e-13);
            let v = (2.0 / (n as f64 + 1.0)) * th.sin().powi(2);
            assert!((z[j] * z[j] - v).abs() < 1e-13);
        }
        assert!((z.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-13);
    }
}
