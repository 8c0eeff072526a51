//! Gauss–Legendre rules and an adaptive Gauss–Kronrod integrator.

use crate::error::{Error, Result};

/// `n`-point Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        kron += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the total error
/// estimate falls below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mut pieces = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..4000 {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at floating point resolution
            let (v, _) = gk15(&f, lo, hi);
            pieces.push((lo, hi, v, 0.0));
            continue;
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    let total: f64 = pieces.iter().map(|p| p.2).sum();
    let err: f64 = pieces.iter().map(|p| p.3).sum();
    if err <= 1e3 * abs_tol.max(rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::QuadratureFailure(format!(
            "adaptive quadrature on [{a}, {b}] did not reach tolerance (estimate {total}, error {err:e})"
        )))
    }
}

/// Integrates over `[a, b]` after splitting at `breakpoints` and grading
/// geometrically toward each point in `singular` (and toward `a`).
pub fn integrate_graded<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    singular: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    let cuts = graded_partition(a, b, breakpoints, singular, 40);
    let mut pieces = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        pieces.push(integrate(&f, w[0], w[1], rel_tol, 0.0)?);
    }
    // sum smallest first
    pieces.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(pieces.iter().sum())
}

/// Sorted cut points of `[a, b]`: the endpoints, the interior `breakpoints`,
/// and `levels` geometric cuts on each side of every `singular` point.
pub fn graded_partition(a: f64, b: f64, breakpoints: &[f64], singular: &[f64], levels: usize) -> Vec<f64> {
    let mut cuts = vec![a, b];
    cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    cuts.extend(singular.iter().copied().filter(|&x| x > a && x < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let base = cuts.clone();
    for &p in singular {
        if p < a || p > b {
            continue;
        }
        // neighbours of p in the base partition
        let right = base.iter().copied().find(|&x| x > p);
        let left = base.iter().rev().copied().find(|&x| x < p);
        if let Some(r) = right {
            let h = r - p;
            for l in 1..=levels {
                cuts.push(p + h * 0.5f64.powi(l as i32));
            }
        }
        if let Some(l0) = left {
            let h = p - l0;
            for l in 1..=levels {
                cuts.push(p - h * 0.5f64.powi(l as i32));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-300);
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_rule_matches_tables() {
        let (x, w) = gauss_legendre(5);
        let x_ref = [0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];
        let w_ref = [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1];
        assert!((x[2] - x_ref[0]).abs() < 1e-15);
        assert!((x[3] - x_ref[1]).abs() < 1e-15);
        assert!((x[4] - x_ref[2]).abs() < 1e-15);
        assert!((w[2] - w_ref[0]).abs() < 1e-15);
        assert!((w[3] - w_ref[1]).abs() < 1e-15);
        assert!((w[4] - w_ref[2]).abs() < 1e-15);
        assert!((x[0] + x[4]).abs() < 1e-16);
    }

    #[test]
    fn rule_is_exact_for_polynomials() {
        for n in [1usize, 2, 7, 40, 120] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n as i32 - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn adaptive_integrates_log_singularity() {
        let v = integrate_graded(|x: f64| x.ln(), 0.0, 1.0, &[], &[0.0], 1e-12).unwrap();
        assert!((v + 1.0).abs() < 1e-10, "{v}");
        let v = integrate(|x: f64| 1.0 / (1.0 + x * x), 0.0, 1.0, 1e-14, 0.0).unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }
}
