//! Bath spectral densities and their rescaling to the unit interval.
//!
//! Energies are in cm⁻¹ throughout. A density is a continuous part `J_c(ω)`
//! on `[0, ω_c]` plus a list of delta lines `w_j δ(ω − ω_j)`. The normalisation
//! follows the `λ = (1/4π) ∫ J(ω)/ω dω` convention: the coefficient of
//! `V (a + a†)` for a single mode of weight `w` is `√(w / 4π)`, see
//! [`COUPLING_NORMALIZATION`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Angular frequency in rad/ps of one wavenumber (2π·c·100 cm/m·10⁻¹²).
pub const CM_TO_RAD_PER_PS: f64 = 2.0 * PI * 2.997_924_58e10 * 1e-12;

/// Ratio between a spectral weight and the squared coupling it produces.
///
/// A line `w δ(ω − ω₀)` corresponds to `g V (a + a†)` with `g² = w / 4π`,
/// so that `λ = Σ g²/ω` matches `(1/4π) ∫ J/ω dω`.
pub const COUPLING_NORMALIZATION: f64 = 4.0 * PI;

const NINE_FACTORIAL: f64 = 362_880.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    /// cm⁻¹
    pub omega: f64,
    /// cm⁻², contribution to `∫ J dω`
    pub weight: f64,
}

/// Which closed form (if any) generated a density.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    PowerLaw { alpha: f64, s: f64 },
    OverdampedBrownian { lambda: f64, gamma: f64 },
    AdolphsRenger { lambda: f64, s_h: f64, omega_h: f64, omega_1: f64, omega_2: f64 },
    Tabulated,
    Custom,
}

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Continuous {
    PowerLaw { alpha: f64, s: f64 },
    Obo { lambda: f64, gamma: f64 },
    AdolphsRenger { lambda: f64, s_h: f64, omega_h: f64, omega_1: f64, omega_2: f64 },
    Tabulated { omega: Vec<f64>, value: Vec<f64> },
    Custom(WeightFn),
    Zero,
}

#[derive(Clone)]
pub struct SpectralDensity {
    continuous: Continuous,
    lines: Vec<SpectralLine>,
    omega_c: f64,
    scale: f64,
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralDensity")
            .field("family", &self.family())
            .field("lines", &self.lines)
            .field("omega_c", &self.omega_c)
            .field("scale", &self.scale)
            .finish()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `J(ω) = α ω_c^{1−s} ω^s` on `[0, ω_c]`.
pub fn power_law(alpha: f64, s: f64, omega_c: f64) -> Result<SpectralDensity> {
    positive("alpha", alpha)?;
    positive("omega_c", omega_c)?;
    if !(s > -1.0) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("power-law exponent must exceed -1, got {s}")));
    }
    Ok(SpectralDensity::from_parts(Continuous::PowerLaw { alpha, s }, omega_c))
}

/// Overdamped Brownian oscillator `J(ω) = 8λγω / (ω² + γ²)`, cut off at `ω_c`.
pub fn overdamped_brownian(lambda: f64, gamma: f64, omega_c: f64) -> Result<SpectralDensity> {
    positive("lambda", lambda)?;
    positive("gamma", gamma)?;
    positive("omega_c", omega_c)?;
    Ok(SpectralDensity::from_parts(Continuous::Obo { lambda, gamma }, omega_c))
}

/// Default hard cutoff for the Brownian-oscillator family, `ω_c = 20γ`.
pub fn default_obo_cutoff(gamma: f64) -> f64 {
    20.0 * gamma
}

/// Two super-Ohmic components plus one undamped line at `ω_H` with
/// Huang–Rhys factor `S_H` (line weight `4π S_H ω_H²`).
pub fn adolphs_renger(
    lambda: f64,
    s_h: f64,
    omega_h: f64,
    omega_1: f64,
    omega_2: f64,
    omega_c: f64,
) -> Result<SpectralDensity> {
    positive("lambda", lambda)?;
    positive("omega_h", omega_h)?;
    positive("omega_1", omega_1)?;
    positive("omega_2", omega_2)?;
    positive("omega_c", omega_c)?;
    if !(s_h >= 0.0) || !s_h.is_finite() {
        return Err(Error::InvalidParameter(format!("S_H must be non-negative, got {s_h}")));
    }
    if omega_h >= omega_c {
        return Err(Error::InvalidParameter(format!(
            "omega_H = {omega_h} must lie below the cutoff {omega_c}"
        )));
    }
    let mut j = SpectralDensity::from_parts(
        Continuous::AdolphsRenger { lambda, s_h, omega_h, omega_1, omega_2 },
        omega_c,
    );
    if s_h > 0.0 {
        j.lines.push(SpectralLine { omega: omega_h, weight: 4.0 * PI * s_h * omega_h * omega_h });
    }
    Ok(j)
}

/// Piecewise-linear interpolation of samples `(ω_i, J_i)`, zero outside the
/// sampled range and above `ω_c`.
pub fn tabulated(omega: Vec<f64>, value: Vec<f64>, omega_c: f64) -> Result<SpectralDensity> {
    positive("omega_c", omega_c)?;
    if omega.len() != value.len() || omega.len() < 2 {
        return Err(Error::InvalidParameter("a table needs at least two (ω, J) rows".into()));
    }
    if omega.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("table frequencies must be strictly increasing".into()));
    }
    if omega[0] < 0.0 {
        return Err(Error::InvalidParameter("table frequencies must be non-negative".into()));
    }
    if let Some(v) = value.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("table values must be non-negative, got {v}")));
    }
    Ok(SpectralDensity::from_parts(Continuous::Tabulated { omega, value }, omega_c))
}

/// Parses a whitespace-separated two-column `(ω, J)` table. `#` starts a comment.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut omega = Vec::new();
    let mut value = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 2 {
            return Err(Error::config(
                format!("table line {}", lineno + 1),
                format!("expected two columns, found {}", cols.len()),
            ));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::config(format!("table line {}", lineno + 1), e.to_string()))
        };
        omega.push(parse(cols[0])?);
        value.push(parse(cols[1])?);
    }
    Ok((omega, value))
}

/// Arbitrary continuous density given as a closure of ω (cm⁻¹ → cm⁻¹).
pub fn custom<F>(f: F, omega_c: f64) -> Result<SpectralDensity>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    positive("omega_c", omega_c)?;
    Ok(SpectralDensity::from_parts(Continuous::Custom(Arc::new(f)), omega_c))
}

/// A density made of delta lines only.
pub fn discrete(lines: Vec<SpectralLine>, omega_c: f64) -> Result<SpectralDensity> {
    positive("omega_c", omega_c)?;
    SpectralDensity::from_parts(Continuous::Zero, omega_c).with_lines(lines)
}

impl SpectralDensity {
    fn from_parts(continuous: Continuous, omega_c: f64) -> Self {
        SpectralDensity { continuous, lines: Vec::new(), omega_c, scale: 1.0 }
    }

    /// Appends delta lines; each needs `ω_j ∈ (0, ω_c]` and `w_j > 0`.
    pub fn with_lines(mut self, lines: impl IntoIterator<Item = SpectralLine>) -> Result<Self> {
        for l in lines {
            if !(l.omega > 0.0 && l.omega <= self.omega_c) {
                return Err(Error::InvalidParameter(format!(
                    "line frequency {} outside (0, {}]",
                    l.omega, self.omega_c
                )));
            }
            positive("line weight", l.weight)?;
            self.lines.push(l);
        }
        Ok(self)
    }

    /// The same density multiplied by `c > 0` (continuous part and lines).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        positive("scale", c)?;
        let mut out = self.clone();
        out.scale *= c;
        for l in &mut out.lines {
            l.weight *= c;
        }
        Ok(out)
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn family(&self) -> Family {
        match &self.continuous {
            Continuous::PowerLaw { alpha, s } => Family::PowerLaw { alpha: *alpha, s: *s },
            Continuous::Obo { lambda, gamma } => Family::OverdampedBrownian { lambda: *lambda, gamma: *gamma },
            Continuous::AdolphsRenger { lambda, s_h, omega_h, omega_1, omega_2 } => Family::AdolphsRenger {
                lambda: *lambda,
                s_h: *s_h,
                omega_h: *omega_h,
                omega_1: *omega_1,
                omega_2: *omega_2,
            },
            Continuous::Tabulated { .. } => Family::Tabulated,
            Continuous::Custom(_) | Continuous::Zero => Family::Custom,
        }
    }

    /// Continuous part `J_c(ω)`, zero outside `[0, ω_c]`.
    pub fn eval(&self, omega: f64) -> f64 {
        if !(0.0..=self.omega_c).contains(&omega) {
            return 0.0;
        }
        let v = match &self.continuous {
            Continuous::PowerLaw { alpha, s } => alpha * self.omega_c.powf(1.0 - s) * omega.powf(*s),
            Continuous::Obo { lambda, gamma } => 8.0 * lambda * gamma * omega / (omega * omega + gamma * gamma),
            Continuous::AdolphsRenger { lambda, omega_1, omega_2, .. } => {
                let w5 = omega.powi(5);
                let num = 1000.0 * w5 * (-(omega / omega_1).sqrt()).exp()
                    + 4.3 * w5 * (-(omega / omega_2).sqrt()).exp();
                2.0 * PI * lambda * num / (NINE_FACTORIAL * (1000.0 * omega_1.powi(5) + 4.3 * omega_2.powi(5)))
            }
            Continuous::Tabulated { omega: xs, value } => interpolate(xs, value, omega),
            Continuous::Custom(f) => f(omega),
            Continuous::Zero => 0.0,
        };
        self.scale * v
    }

    /// Points (cm⁻¹) near which the continuous part is non-analytic or sharply
    /// varying; quadrature grades toward them.
    pub fn singular_points(&self) -> Vec<f64> {
        match &self.continuous {
            Continuous::PowerLaw { s, .. } if s.fract() == 0.0 && *s >= 0.0 => vec![],
            Continuous::Zero | Continuous::Tabulated { .. } => vec![],
            _ => vec![0.0],
        }
    }

    /// Kinks of the continuous part (table abscissae).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.continuous {
            Continuous::Tabulated { omega, .. } => {
                omega.iter().copied().filter(|&w| w > 0.0 && w < self.omega_c).collect()
            }
            _ => vec![],
        }
    }

    /// `∫₀^{ω_c} J_c(ω) dω` by adaptive quadrature.
    pub fn continuous_mass(&self) -> Result<f64> {
        if matches!(self.continuous, Continuous::Zero) {
            return Ok(0.0);
        }
        quadrature::integrate_graded(
            |w| self.eval(w),
            0.0,
            self.omega_c,
            &self.breakpoints(),
            &self.singular_points(),
            1e-13,
        )
    }

    /// `∫₀^{ω_c} J dω`, lines included.
    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.continuous_mass()? + self.lines.iter().map(|l| l.weight).sum::<f64>())
    }

    /// `λ = (1/4π) [∫₀^{ω_c} J_c(ω)/ω dω + Σ_j w_j/ω_j]`.
    pub fn reorganization_energy(&self) -> Result<f64> {
        let line_part: f64 = self.lines.iter().map(|l| l.weight / l.omega).sum();
        let cont = match &self.continuous {
            Continuous::Zero => 0.0,
            Continuous::PowerLaw { s, .. } if *s <= 0.0 => {
                return Err(Error::DivergentIntegral(format!(
                    "J(ω)/ω is not integrable at ω → 0 for exponent s = {s}"
                )))
            }
            _ => {
                let eps = self.omega_c * 1e-9;
                let (j1, j2) = (self.eval(eps), self.eval(0.1 * eps));
                if j1 > 0.0 && j2 > 0.0 && (j1 / j2).log10() < 0.05 {
                    return Err(Error::DivergentIntegral(
                        "J(ω) does not vanish as ω → 0, so J(ω)/ω is not integrable".into(),
                    ));
                }
                quadrature::integrate_graded(
                    |w| if w > 0.0 { self.eval(w) / w } else { 0.0 },
                    0.0,
                    self.omega_c,
                    &self.breakpoints(),
                    &[0.0],
                    1e-13,
                )?
            }
        };
        Ok((cont + line_part) / COUPLING_NORMALIZATION)
    }

    /// Rescales to `k = ω/ω_c ∈ [0, 1]`: `h²(k) = ω_c J_c(ω_c k)`, lines at
    /// `k_j = ω_j/ω_c` with unchanged weights.
    pub fn to_unit_measure(&self) -> Result<UnitMeasure> {
        let wc = self.omega_c;
        let this = self.clone();
        let weight: WeightFn = match self.continuous {
            Continuous::Zero => Arc::new(|_| 0.0),
            _ => Arc::new(move |k: f64| wc * this.eval(wc * k)),
        };
        UnitMeasure::with_hints(
            weight,
            self.lines.iter().map(|l| (l.omega / wc, l.weight)).collect(),
            self.singular_points().iter().map(|w| w / wc).collect(),
            self.breakpoints().iter().map(|w| w / wc).collect(),
            wc,
            matches!(self.continuous, Continuous::Zero),
        )
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = match xs.binary_search_by(|p| p.total_cmp(&x)) {
        Ok(i) => return ys[i],
        Err(i) => i,
    };
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// A positive measure on `[0, 1]`: continuous weight `h²(k)` plus point masses.
#[derive(Clone)]
pub struct UnitMeasure {
    weight: WeightFn,
    lines: Vec<(f64, f64)>,
    total_mass: f64,
    continuous_mass: f64,
    singular_points: Vec<f64>,
    breakpoints: Vec<f64>,
    omega_c: f64,
    purely_discrete: bool,
}

impl fmt::Debug for UnitMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitMeasure")
            .field("lines", &self.lines)
            .field("total_mass", &self.total_mass)
            .field("omega_c", &self.omega_c)
            .finish()
    }
}

impl UnitMeasure {
    /// Measure from an arbitrary weight on `[0, 1]` and `(k_j, w_j)` lines.
    pub fn new<F>(weight: F, lines: Vec<(f64, f64)>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::with_hints(Arc::new(weight), lines, vec![0.0], vec![], 1.0, false)
    }

    /// Point masses only.
    pub fn discrete(lines: Vec<(f64, f64)>) -> Result<Self> {
        Self::with_hints(Arc::new(|_| 0.0), lines, vec![], vec![], 1.0, true)
    }

    fn with_hints(
        weight: WeightFn,
        lines: Vec<(f64, f64)>,
        singular_points: Vec<f64>,
        breakpoints: Vec<f64>,
        omega_c: f64,
        purely_discrete: bool,
    ) -> Result<Self> {
        for &(k, w) in &lines {
            if !(k > 0.0 && k <= 1.0) {
                return Err(Error::InvalidParameter(format!("line position {k} outside (0, 1]")));
            }
            if !(w >= 0.0) {
                return Err(Error::InvalidParameter(format!("line weight {w} is negative")));
            }
        }
        let continuous_mass = if purely_discrete {
            0.0
        } else {
            let f = weight.clone();
            quadrature::integrate_graded(move |k| f(k), 0.0, 1.0, &breakpoints, &singular_points, 1e-13)?
        };
        let total_mass = continuous_mass + lines.iter().map(|l| l.1).sum::<f64>();
        if !(total_mass > 0.0) || !total_mass.is_finite() {
            return Err(Error::InvalidParameter(format!("measure mass must be positive, got {total_mass}")));
        }
        Ok(UnitMeasure {
            weight,
            lines,
            total_mass,
            continuous_mass,
            singular_points,
            breakpoints,
            omega_c,
            purely_discrete,
        })
    }

    pub fn weight(&self, k: f64) -> f64 {
        if (0.0..=1.0).contains(&k) {
            (self.weight)(k)
        } else {
            0.0
        }
    }

    pub fn lines(&self) -> &[(f64, f64)] {
        &self.lines
    }

    /// `∫₀¹ h² dk + Σ w_j`, equal to `∫₀^{ω_c} J dω`.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn continuous_mass(&self) -> f64 {
        self.continuous_mass
    }

    pub fn singular_points(&self) -> &[f64] {
        &self.singular_points
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Energy scale (cm⁻¹) that maps `k` back to frequency; 1 for bare measures.
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn is_purely_discrete(&self) -> bool {
        self.purely_discrete
    }

    /// Declares points where the weight has a kink or jump.
    pub fn with_breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(points);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    /// Declares extra points toward which quadrature should grade.
    pub fn with_singular_points(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.singular_points.extend(points);
        self.singular_points.sort_by(f64::total_cmp);
        self.singular_points.dedup();
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SzegoVerdict {
    InClass,
    OutOfClass,
    Inconclusive,
}

/// Numerical test of `∫₀¹ ln h²(k) / √(1 − (2k−1)²) dk > −∞`.
///
/// With `k = (1 − cos θ)/2` the integral becomes `½ ∫₀^π ln h² dθ`. Windows
/// around the endpoints and around isolated interior zeros are halved twelve
/// times; the verdict comes from how the partial integrals move over the last
/// three refinements. A zero of positive measure is reported immediately.
pub fn szego_class_check(m: &UnitMeasure, tol: f64) -> SzegoVerdict {
    const GRID: usize = 4096;
    const LEVELS: usize = 12;
    let kmap = |theta: f64| 0.5 * (1.0 - theta.cos());
    let h2 = |theta: f64| m.weight(kmap(theta));

    let dth = PI / GRID as f64;
    let zero: Vec<bool> = (0..GRID)
        .map(|i| {
            let v = h2((i as f64 + 0.5) * dth);
            !(v > 0.0) || !v.is_finite()
        })
        .collect();
    let mut centers = vec![0.0, PI];
    let mut i = 0;
    while i < GRID {
        if zero[i] {
            let start = i;
            while i < GRID && zero[i] {
                i += 1;
            }
            if i - start >= 2 {
                return SzegoVerdict::OutOfClass;
            }
            centers.push((start as f64 + 0.5) * dth);
        } else {
            i += 1;
        }
    }
    for &k in m.singular_points() {
        if k > 0.0 && k < 1.0 {
            centers.push((1.0 - 2.0 * k).acos());
        }
    }
    centers.sort_by(f64::total_cmp);
    centers.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut partial = Vec::with_capacity(LEVELS + 1);
    for level in 0..=LEVELS {
        let w = 0.05 * 0.5f64.powi(level as i32);
        let mut total = 0.0;
        let mut lo = 0.0;
        let mut bad = false;
        let mut spans = Vec::new();
        for &c in &centers {
            let (a, b) = ((c - w).max(0.0), (c + w).min(PI));
            if a > lo {
                spans.push((lo, a));
            }
            lo = lo.max(b);
        }
        if lo < PI {
            spans.push((lo, PI));
        }
        for (a, b) in spans {
            match quadrature::integrate(
                |t| {
                    let v = h2(t);
                    if v > 0.0 {
                        0.5 * v.ln()
                    } else {
                        f64::NEG_INFINITY
                    }
                },
                a,
                b,
                1e-10,
                1e-12,
            ) {
                Ok(v) => total += v,
                Err(_) => {
                    bad = true;
                    break;
                }
            }
        }
        if bad {
            return SzegoVerdict::OutOfClass;
        }
        partial.push(total);
    }
    let steps: Vec<f64> = partial.windows(2).map(|p| p[1] - p[0]).collect();
    let last = &steps[steps.len() - 3..];
    if last.iter().all(|d| d.abs() < tol) {
        return SzegoVerdict::InClass;
    }
    let decreasing_fast = last.iter().all(|d| *d < -tol);
    let r1 = last[1].abs() / last[0].abs();
    let r2 = last[2].abs() / last[1].abs();
    if decreasing_fast && r1 >= 0.9 && r2 >= 0.9 {
        return SzegoVerdict::OutOfClass;
    }
    let r = r1.max(r2);
    if r < 0.9 && last[2].abs() * r / (1.0 - r) < tol {
        return SzegoVerdict::InClass;
    }
    SzegoVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_power_law_is_constant() {
        let j = power_law(1.0, 0.0, 1.0).unwrap();
        for w in [0.0, 0.1, 0.5, 1.0] {
            assert_eq!(j.eval(w), 1.0);
        }
        assert!(j.lines().is_empty());
    }

    #[test]
    fn ohmic_power_law_value() {
        let j = power_law(0.1, 1.0, 1000.0).unwrap();
        assert!((j.eval(100.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn power_law_rejects_bad_exponent() {
        assert!(matches!(power_law(1.0, -1.5, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(power_law(0.0, 1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(power_law(1.0, -1.0, 1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn obo_peak_value() {
        let j = overdamped_brownian(100.0, 53.0, 1000.0).unwrap();
        assert!((j.eval(53.0) - 400.0).abs() < 1e-10);
        assert!(overdamped_brownian(100.0, 0.0, 1000.0).is_err());
        let narrow = overdamped_brownian(100.0, 1e-9, 1000.0).unwrap();
        assert!(narrow.eval(10.0) < 1e-7);
    }

    #[test]
    fn obo_reorganization_energy_matches_arctan() {
        let j = overdamped_brownian(100.0, 53.0, 1000.0).unwrap();
        let lam = j.reorganization_energy().unwrap();
        let exact = 100.0 * 2.0 / PI * (1000.0f64 / 53.0).atan();
        assert!((lam - exact).abs() / exact < 1e-10, "{lam} vs {exact}");
        assert!((lam - 96.6).abs() < 0.05);
    }

    #[test]
    fn obo_reorganization_tends_to_lambda() {
        let j = overdamped_brownian(100.0, 53.0, 1e7).unwrap();
        assert!((j.reorganization_energy().unwrap() - 100.0).abs() < 1e-2);
    }

    #[test]
    fn adolphs_renger_line() {
        let j = adolphs_renger(100.0, 0.22, 180.0, 0.5, 1.95, 1000.0).unwrap();
        assert_eq!(j.lines().len(), 1);
        assert_eq!(j.lines()[0].omega, 180.0);
        assert!((j.lines()[0].weight - 4.0 * PI * 0.22 * 180.0 * 180.0).abs() < 1e-9);
        let bare = adolphs_renger(100.0, 0.0, 180.0, 0.5, 1.95, 1000.0).unwrap();
        assert!(bare.lines().is_empty());
        assert!(adolphs_renger(100.0, 0.22, 1200.0, 0.5, 1.95, 1000.0).is_err());
    }

    #[test]
    fn single_line_reorganization() {
        let w = 4.0 * PI * 0.22 * 180.0 * 180.0;
        let j = discrete(vec![SpectralLine { omega: 180.0, weight: w }], 1000.0).unwrap();
        assert!((j.reorganization_energy().unwrap() - 39.6).abs() < 1e-10);
    }

    #[test]
    fn zero_density_has_zero_reorganization() {
        let j = custom(|_| 0.0, 100.0).unwrap();
        assert_eq!(j.reorganization_energy().unwrap(), 0.0);
    }

    #[test]
    fn divergent_reorganization_is_reported() {
        let j = power_law(0.5, 0.0, 10.0).unwrap();
        assert!(matches!(j.reorganization_energy(), Err(Error::DivergentIntegral(_))));
        let j = custom(|_| 1.0, 10.0).unwrap();
        assert!(matches!(j.reorganization_energy(), Err(Error::DivergentIntegral(_))));
    }

    #[test]
    fn unit_measure_of_flat_density() {
        let m = power_law(1.0, 0.0, 1.0).unwrap().to_unit_measure().unwrap();
        assert!((m.weight(0.3) - 1.0).abs() < 1e-15);
        assert!((m.total_mass() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn unit_measure_power_law_mass() {
        let (alpha, s, wc) = (0.1, 1.0, 1000.0);
        let m = power_law(alpha, s, wc).unwrap().to_unit_measure().unwrap();
        assert!((m.weight(0.5) - alpha * wc * wc * 0.5).abs() < 1e-9);
        let expected = alpha * wc * wc / (1.0 + s);
        assert!((m.total_mass() - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn unit_measure_line_position() {
        let j = discrete(vec![SpectralLine { omega: 50.0, weight: 3.0 }], 100.0).unwrap();
        let m = j.to_unit_measure().unwrap();
        assert_eq!(m.lines(), &[(0.5, 3.0)]);
        assert!(m.is_purely_discrete());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let j = tabulated(vec![10.0, 20.0, 40.0], vec![1.0, 3.0, 0.0], 100.0).unwrap();
        assert_eq!(j.eval(5.0), 0.0);
        assert!((j.eval(15.0) - 2.0).abs() < 1e-15);
        assert!((j.eval(30.0) - 1.5).abs() < 1e-15);
        assert_eq!(j.eval(50.0), 0.0);
        assert!((j.continuous_mass().unwrap() - (20.0 + 30.0)).abs() < 1e-10);
        let (x, y) = parse_table("# omega J\n10 1\n 20   3 \n\n40 0\n").unwrap();
        assert_eq!(x, vec![10.0, 20.0, 40.0]);
        assert_eq!(y, vec![1.0, 3.0, 0.0]);
        assert!(parse_table("1 2 3").is_err());
    }

    #[test]
    fn szego_verdicts() {
        let flat = UnitMeasure::new(|_| 1.0, vec![]).unwrap();
        assert_eq!(szego_class_check(&flat, 1e-3), SzegoVerdict::InClass);
        let cubic = power_law(1.0, 3.0, 1.0).unwrap().to_unit_measure().unwrap();
        assert_eq!(szego_class_check(&cubic, 1e-3), SzegoVerdict::InClass);
        let gap = UnitMeasure::new(|k| if (0.4..=0.6).contains(&k) { 0.0 } else { 1.0 }, vec![]).unwrap();
        assert_eq!(szego_class_check(&gap, 1e-3), SzegoVerdict::OutOfClass);
        let essential = UnitMeasure::new(|k: f64| (-1.0 / k).exp(), vec![]).unwrap();
        assert_eq!(szego_class_check(&essential, 1e-3), SzegoVerdict::OutOfClass);
    }
}
