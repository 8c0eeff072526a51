use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{DiscreteMeasure, RecurrenceCoefficients, Source};
use crate::error::{Error, Result};

const MAX_ORDER: usize = 8;

/// Recurrence coefficients from Hankel determinants of the moments, in exact
/// rational arithmetic on the (exactly representable) nodes and weights.
///
/// A vanishing determinant means the measure has fewer points than requested;
/// the result is then truncated to the available coefficients.
pub fn moment_oracle(d: &DiscreteMeasure, n_small: usize) -> Result<RecurrenceCoefficients> {
    if n_small == 0 || n_small > MAX_ORDER {
        return Err(Error::InvalidParameter(format!("moment oracle supports 1..={MAX_ORDER} coefficients")));
    }
    let exact = |x: f64| BigRational::from_float(x).expect("finite");
    let nodes: Vec<BigRational> = d.nodes.iter().map(|&x| exact(x)).collect();
    let weights: Vec<BigRational> = d.weights.iter().map(|&x| exact(x)).collect();
    let mut mu = Vec::with_capacity(2 * n_small + 2);
    let mut powers = weights.clone();
    for _ in 0..2 * n_small + 2 {
        mu.push(powers.iter().fold(BigRational::zero(), |acc, p| acc + p));
        for (p, x) in powers.iter_mut().zip(&nodes) {
            *p = &*p * x;
        }
    }
    // d[n] = det(μ_{i+j})_{n×n}, dp[n] = same with the last column shifted by one
    let mut det = vec![BigRational::from_integer(BigInt::from(1))];
    let mut detp = vec![BigRational::zero()];
    for n in 1..=n_small + 1 {
        let h = |i: usize, j: usize| mu[i + j].clone();
        det.push(determinant((0..n).map(|i| (0..n).map(|j| h(i, j)).collect()).collect()));
        detp.push(determinant(
            (0..n).map(|i| (0..n).map(|j| if j + 1 == n { h(i, j + 1) } else { h(i, j) }).collect()).collect(),
        ));
    }
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for n in 0..n_small {
        if det[n + 1].is_zero() {
            break;
        }
        if det[n + 1] < BigRational::zero() {
            return Err(Error::Breakdown { n, reason: "negative Hankel determinant".into() });
        }
        let a = &detp[n + 1] / &det[n + 1] - &detp[n] / &det[n];
        let b = if n == 0 { mu[0].clone() } else { &det[n + 1] * &det[n - 1] / (&det[n] * &det[n]) };
        alpha.push(a.to_f64().unwrap_or(f64::NAN));
        beta.push(b.to_f64().unwrap_or(f64::NAN));
    }
    Ok(RecurrenceCoefficients { alpha, beta, source: Source::MomentOracle, energy_scale: 1.0 })
}

fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{lanczos_rkpw, quadrature_discretize, stieltjes};
    use crate::specdens::power_law;

    #[test]
    fn one_point_measure_stops_after_one() {
        let d = DiscreteMeasure::new([(0.25, 3.0)]).unwrap();
        let rc = moment_oracle(&d, 4).unwrap();
        assert_eq!(rc.alpha, vec![0.25]);
        assert_eq!(rc.beta, vec![3.0]);
    }

    #[test]
    fn three_points_exact() {
        // nodes 0, 1/2, 1 with unit weights: α_0 = 1/2, β_1 = 1/6, α_1 = 1/2, β_2 = 1/12
        let d = DiscreteMeasure::new([(0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]).unwrap();
        let rc = moment_oracle(&d, 3).unwrap();
        assert_eq!(rc.alpha, vec![0.5, 0.5, 0.5]);
        assert_eq!(rc.beta[1], 1.0 / 6.0);
        assert_eq!(rc.beta[2], 1.0 / 12.0);
    }

    #[test]
    fn three_way_agreement_cubic() {
        let m = power_law(1.0, 3.0, 1.0).unwrap().to_unit_measure().unwrap();
        let d = quadrature_discretize(&m, 2, 10).unwrap();
        let o = moment_oracle(&d, 7).unwrap();
        let s = stieltjes(&d, 7).unwrap();
        let l = lanczos_rkpw(&d, 7).unwrap();
        assert!(o.max_rel_diff(&s) < 1e-10);
        assert!(o.max_rel_diff(&l) < 1e-10);
    }
}
