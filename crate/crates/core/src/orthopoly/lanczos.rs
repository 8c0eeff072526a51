use super::{check_positive, DiscreteMeasure, RecurrenceCoefficients, Source};
use crate::error::{Error, Result};

/// Rutishauser–Kahan–Pal–Walker reduction of `diag(k_j)` with starting vector
/// `√w_j` to Jacobi form, one plane rotation per node. `O(M²)`.
///
/// Nodes are absorbed in order of decreasing weight; for geometrically decaying
/// weights this keeps the tiny late coefficients accurate to full relative
/// precision, where ascending order loses about eight digits.
pub fn lanczos_rkpw(d: &DiscreteMeasure, n_max: usize) -> Result<RecurrenceCoefficients> {
    let m = d.len();
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if n_max > m {
        return Err(Error::InsufficientCoefficients { needed: n_max, available: m });
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| d.weights[b].total_cmp(&d.weights[a]));
    let nodes: Vec<f64> = order.iter().map(|&i| d.nodes[i]).collect();
    let weights: Vec<f64> = order.iter().map(|&i| d.weights[i]).collect();
    let mut p0 = nodes.clone();
    let mut p1 = vec![0.0; m];
    p1[0] = weights[0];
    for n in 1..m {
        let mut pn = weights[n];
        let xlam = nodes[n];
        let (mut gam, mut sig, mut t) = (1.0f64, 0.0f64, 0.0f64);
        for k in 0..=n {
            let rho = p1[k] + pn;
            let tmp = gam * rho;
            let tsig = sig;
            if rho <= 0.0 {
                gam = 1.0;
                sig = 0.0;
            } else {
                gam = p1[k] / rho;
                sig = pn / rho;
            }
            let tk = sig * (p0[k] - xlam) - gam * t;
            p0[k] -= tk - t;
            t = tk;
            pn = if sig <= 0.0 { tsig * p1[k] } else { t * t / sig };
            p1[k] = tmp;
        }
    }
    p0.truncate(n_max);
    p1.truncate(n_max);
    check_positive(&p1)?;
    Ok(RecurrenceCoefficients { alpha: p0, beta: p1, source: Source::Lanczos, energy_scale: 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::jacobi_recurrence;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn single_node() {
        let d = DiscreteMeasure::new([(0.3, 2.5)]).unwrap();
        let rc = lanczos_rkpw(&d, 1).unwrap();
        assert_eq!(rc.alpha, vec![0.3]);
        assert_eq!(rc.beta, vec![2.5]);
        assert!(matches!(lanczos_rkpw(&d, 2), Err(Error::InsufficientCoefficients { .. })));
    }

    #[test]
    fn gauss_rule_is_exact() {
        // an n-point Gauss rule carries the first n coefficients exactly
        let (x, w) = gauss_legendre(60);
        let d = DiscreteMeasure::new(x.iter().zip(&w).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))).unwrap();
        let rc = lanczos_rkpw(&d, 60).unwrap();
        let exact = jacobi_recurrence(0.0, 60).unwrap();
        assert!(rc.max_rel_diff(&exact) < 1e-12, "{}", rc.max_rel_diff(&exact));
    }

    #[test]
    fn two_points() {
        // w = (1, 1) at (0, 1): α_0 = 1/2, β_1 = 1/4, α_1 = 1/2
        let d = DiscreteMeasure::new([(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let rc = lanczos_rkpw(&d, 2).unwrap();
        assert!((rc.alpha[0] - 0.5).abs() < 1e-15 && (rc.alpha[1] - 0.5).abs() < 1e-15);
        assert!((rc.beta[0] - 2.0).abs() < 1e-15 && (rc.beta[1] - 0.25).abs() < 1e-15);
    }
}
