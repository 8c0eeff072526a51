use std::io::Write;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::format::fmt_sig;

/// Observables recorded along an evolution; times in ps.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    /// `ρ_12 = ⟨1|ρ|2⟩`
    pub c12: Vec<C64>,
    pub s_max: Vec<f64>,
    /// cumulative discarded weight
    pub discarded: Vec<f64>,
    pub norm2: Vec<f64>,
    /// `⟨b†b⟩` per lattice entry (NaN on the system), when requested
    pub occupations: Vec<Vec<f64>>,
}

/// Times and heights of alternating local extrema of a sampled series.
fn extrema(t: &[f64], x: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for i in 1..x.len().saturating_sub(1) {
        let is_max = x[i] > x[i - 1] && x[i] >= x[i + 1];
        let is_min = x[i] < x[i - 1] && x[i] <= x[i + 1];
        if is_max || is_min {
            out.push((t[i], x[i]));
        }
    }
    out
}

/// Peak-to-trough swings between consecutive extrema, stamped with the time
/// of the later extremum.
pub fn swings(t: &[f64], x: &[f64]) -> Vec<(f64, f64)> {
    extrema(t, x).windows(2).map(|w| (w[1].0, (w[1].1 - w[0].1).abs())).collect()
}

/// Swings lasting longer than this multiple of the median swing are slow
/// drifts between two stray extrema, not half-periods.
const MAX_SWING_SPAN: f64 = 3.0;

/// Last time at which a swing of `x` still reaches `fraction` of the first
/// swing; 0 when the series never oscillates.
pub fn oscillation_lifetime(t: &[f64], x: &[f64], fraction: f64) -> f64 {
    let ex = extrema(t, x);
    let mut spans: Vec<f64> = ex.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let sw = swings(t, x);
    let Some(&(_, first)) = sw.first() else {
        return 0.0;
    };
    let (_, median, _) = spans.select_nth_unstable_by(sw.len() / 2, f64::total_cmp);
    let cap = MAX_SWING_SPAN * *median;
    ex.windows(2)
        .zip(&sw)
        .filter(|(w, s)| s.1 >= fraction * first && w[1].0 - w[0].0 <= cap)
        .map(|(_, s)| s.0)
        .fold(0.0, f64::max)
}

impl Trajectory {
    pub fn re_c12(&self) -> Vec<f64> {
        self.c12.iter().map(|z| z.re).collect()
    }

    /// Coherence lifetime from the swings of `Re ρ_12`.
    pub fn coherence_lifetime(&self, fraction: f64) -> f64 {
        oscillation_lifetime(&self.times, &self.re_c12(), fraction)
    }

    /// Number of maxima of `p1` whose swing into them is at least `min_swing`.
    pub fn population_periods(&self, min_swing: f64) -> usize {
        let ex = extrema(&self.times, &self.p1);
        ex.windows(2).filter(|w| w[1].1 > w[0].1 && w[1].1 - w[0].1 >= min_swing).count()
    }

    /// `p1` linearly interpolated at `t`.
    pub fn p1_at(&self, t: f64) -> f64 {
        let i = self.times.partition_point(|&x| x < t);
        if i == 0 {
            return self.p1[0];
        }
        if i >= self.times.len() {
            return *self.p1.last().expect("nonempty trajectory");
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        self.p1[i - 1] + (self.p1[i] - self.p1[i - 1]) * (t - t0) / (t1 - t0)
    }

    /// Largest `|p1 + p2 − 1|` beyond the discarded weight at that time.
    pub fn conservation_excess(&self) -> f64 {
        (0..self.times.len())
            .map(|i| (self.p1[i] + self.p2[i] - 1.0).abs() - self.discarded[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `1 − ‖ψ‖²` beyond the discarded weight.
    pub fn norm_excess(&self) -> f64 {
        (0..self.times.len())
            .map(|i| (1.0 - self.norm2[i]) - self.discarded[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn write_csv<W: Write>(&self, mut w: W, sig: usize) -> Result<()> {
        writeln!(w, "t_ps,p1,p2,re_c12,im_c12,S_max,discarded")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_sig(self.times[i], sig),
                fmt_sig(self.p1[i], sig),
                fmt_sig(self.p2[i], sig),
                fmt_sig(self.c12[i].re, sig),
                fmt_sig(self.c12[i].im, sig),
                fmt_sig(self.s_max[i], sig),
                fmt_sig(self.discarded[i], sig),
            )?;
        }
        Ok(())
    }

    /// Wide CSV: `t_ps` then one column per lattice entry.
    pub fn write_occupations_csv<W: Write>(&self, mut w: W, sig: usize) -> Result<()> {
        let n = self.occupations.first().map_or(0, |r| r.len());
        let cols: Vec<String> = (0..n).map(|i| format!("site{i}")).collect();
        writeln!(w, "t_ps,{}", cols.join(","))?;
        for (t, row) in self.times.iter().zip(&self.occupations) {
            let vals: Vec<String> = row.iter().map(|v| if v.is_nan() { String::new() } else { fmt_sig(*v, sig) }).collect();
            writeln!(w, "{},{}", fmt_sig(*t, sig), vals.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn damped_cosine_lifetime() {
        // swings decay as e^{-t/τ}; the first swing lands half a period in, so
        // the 10% crossing sits near that plus τ ln 10
        let t: Vec<f64> = (0..4000).map(|i| i as f64 * 1e-3).collect();
        let tau = 0.5;
        let x: Vec<f64> = t.iter().map(|&t| 0.3 * (-t / tau).exp() * (40.0 * t).cos() + 0.1).collect();
        let life = oscillation_lifetime(&t, &x, 0.1);
        let half_period = std::f64::consts::PI / 40.0;
        assert!((life - half_period - tau * 10f64.ln()).abs() < 0.05, "{life}");
    }

    #[test]
    fn slow_drift_between_stray_extrema_is_not_a_swing() {
        // oscillation gone by 0.5 ps, then a slow rise to a late bump at 1.6 ps
        let t: Vec<f64> = (0..=1800).map(|i| i as f64 * 1e-3).collect();
        let x: Vec<f64> = t
            .iter()
            .map(|&t| 0.4 * (-t / 0.08).exp() * (2.0 * std::f64::consts::PI * t / 0.15).cos() + 0.02 * (-((t - 1.6) / 0.3).powi(2)).exp())
            .collect();
        let life = oscillation_lifetime(&t, &x, 0.02);
        assert!(life < 0.5, "{life}");
    }

    #[test]
    fn flat_series_has_no_lifetime() {
        let t: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(oscillation_lifetime(&t, &vec![0.2; 100], 0.1), 0.0);
    }

    #[test]
    fn stationary_offset_does_not_fake_coherence() {
        // a monotone relaxation to a nonzero value carries no swings
        let t: Vec<f64> = (0..1000).map(|i| i as f64 * 1e-3).collect();
        let x: Vec<f64> = t.iter().map(|&t| 0.3 * (1.0 - (-5.0 * t).exp())).collect();
        assert_eq!(oscillation_lifetime(&t, &x, 0.1), 0.0);
    }
}
