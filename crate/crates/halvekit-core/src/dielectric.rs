//! Dielectric discharge analysis.
//!
//! Ingests sampled D-E hysteresis loops, extracts the discharge branch,
//! integrates the recoverable energy density `u = ∫ E dD`, and converts it
//! into a field-dependent effective permittivity via
//! `u = ½ ε_eff(E, f) ε0 E²`. Spectra of `ε_eff` against field amplitude are
//! tabulated per material and drive frequency and looked up by piecewise
//! linear interpolation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vacuum permittivity (F/m).
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// Errors from D-E loop handling and spectrum construction.
#[derive(Debug, Error)]
pub enum DielectricError {
    /// A curve needs at least three samples to carry a branch.
    #[error("D-E curve has {0} samples, need at least 3")]
    TooFewSamples(usize),
    /// Field or displacement was NaN or infinite.
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
    /// No usable descending-field path was found after the displacement peak.
    #[error("no discharge branch: fewer than 3 samples remain after extraction")]
    NoDischargeBranch,
    /// Energy integration requires monotone displacement along the branch.
    #[error("branch displacement is not monotone")]
    NonMonotoneBranch,
    /// Effective permittivity is undefined at zero field amplitude.
    #[error("field amplitude is not positive: {0} V/m")]
    ZeroField(f64),
    /// Spectrum construction was given curves for different materials.
    #[error("mixed materials in spectrum input: {0:?} vs {1:?}")]
    MixedMaterial(String, String),
    /// Spectrum construction was given curves at different frequencies.
    #[error("mixed frequencies in spectrum input: {0} Hz vs {1} Hz")]
    MixedFrequency(f64, f64),
    /// Two loops resolved to the same field amplitude.
    #[error("duplicate field amplitude {0} V/m in spectrum input")]
    DuplicateAmplitude(f64),
    /// Lookup needs a spectrum with at least two points.
    #[error("spectrum has {0} points, need at least 2 for lookup")]
    EmptySpectrum(usize),
    /// Spectrum points must be strictly increasing in field amplitude.
    #[error("spectrum amplitudes not strictly increasing at index {0}")]
    AmplitudeNotIncreasing(usize),
    /// Effective permittivity must be positive.
    #[error("non-positive effective permittivity {value} at index {index}")]
    NonPositivePermittivity { index: usize, value: f64 },
    /// Relative permittivity of a solid dielectric must be at least 1.
    #[error("relative permittivity {0} is below 1")]
    PermittivityBelowOne(f64),
}

/// One (field, displacement) sample of a D-E loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeSample {
    /// Electric field (V/m).
    pub field: f64,
    /// Electric displacement (C/m²).
    pub displacement: f64,
}

impl DeSample {
    pub fn new(field: f64, displacement: f64) -> Self {
        Self { field, displacement }
    }

    fn is_finite(&self) -> bool {
        self.field.is_finite() && self.displacement.is_finite()
    }
}

/// A sampled electric-displacement vs. electric-field loop for one dielectric
/// at one drive frequency. Samples are kept in acquisition order; ingest
/// never reorders them.
#[derive(Debug, Clone, PartialEq)]
pub struct DeCurve {
    samples: Vec<DeSample>,
    frequency_hz: f64,
    material: String,
}

impl DeCurve {
    /// Validates and wraps loop samples: at least 3 samples, all finite.
    pub fn new(
        samples: Vec<DeSample>,
        frequency_hz: f64,
        material: impl Into<String>,
    ) -> Result<Self, DielectricError> {
        if samples.len() < 3 {
            return Err(DielectricError::TooFewSamples(samples.len()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(DielectricError::NonFiniteSample(i));
        }
        Ok(Self {
            samples,
            frequency_hz,
            material: material.into(),
        })
    }

    pub fn samples(&self) -> &[DeSample] {
        &self.samples
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn material(&self) -> &str {
        &self.material
    }

    /// Largest electric field over the loop (V/m).
    pub fn field_amplitude(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.field)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Extracts the discharge branch of a loop: the sub-path from the point of
/// maximum displacement down to the smallest non-negative field reached on
/// the descending pass, with displacement made non-increasing by dropping
/// non-monotone jitter samples (never by sorting, which would fabricate
/// hysteresis area).
pub fn extract_discharge_branch(curve: &DeCurve) -> Result<DeCurve, DielectricError> {
    let samples = curve.samples();

    // Last index attaining the displacement maximum, so flat-topped loops
    // start their branch where the field begins to fall.
    let mut peak = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.displacement >= samples[peak].displacement {
            peak = i;
        }
    }

    // Walk forward from the peak, stopping before the field goes negative,
    // then cut at the smallest field reached on that stretch.
    let tail = &samples[peak..];
    let cut = tail
        .iter()
        .position(|s| s.field < 0.0)
        .unwrap_or(tail.len());
    let tail = &tail[..cut];
    if tail.is_empty() {
        return Err(DielectricError::NoDischargeBranch);
    }
    let mut end = 0;
    for (i, s) in tail.iter().enumerate() {
        if s.field < tail[end].field {
            end = i;
        }
    }

    let mut branch: Vec<DeSample> = Vec::with_capacity(end + 1);
    for s in &tail[..=end] {
        match branch.last() {
            Some(prev) if s.displacement > prev.displacement => {} // drop jitter
            _ => branch.push(*s),
        }
    }

    if branch.len() < 3 {
        return Err(DielectricError::NoDischargeBranch);
    }
    DeCurve::new(branch, curve.frequency_hz(), curve.material())
}

/// Recoverable energy density of a discharge branch (J/m³), as the
/// trapezoidal approximation of `∫ E dD` taken from the low-displacement end
/// to the high-displacement end.
///
/// Trapezoids (rather than a higher-order rule) because instrument output is
/// unevenly sampled.
pub fn energy_density(branch: &DeCurve) -> Result<f64, DielectricError> {
    let s = branch.samples();
    let increasing = s.windows(2).all(|w| w[1].displacement >= w[0].displacement);
    let decreasing = s.windows(2).all(|w| w[1].displacement <= w[0].displacement);
    if !increasing && !decreasing {
        return Err(DielectricError::NonMonotoneBranch);
    }

    let mut sum = 0.0;
    for w in s.windows(2) {
        sum += 0.5 * (w[0].field + w[1].field) * (w[1].displacement - w[0].displacement);
    }
    // Orient the integral from low D to high D.
    Ok(if decreasing && !increasing { -sum } else { sum })
}

/// Effective permittivity of a discharge branch together with the field
/// amplitude it applies to: `ε_eff = 2 u / (ε0 E²)` with `E` the largest
/// field on the branch.
pub fn effective_permittivity(branch: &DeCurve) -> Result<SpectrumPoint, DielectricError> {
    let e_amp = branch.field_amplitude();
    if e_amp <= 0.0 {
        return Err(DielectricError::ZeroField(e_amp));
    }
    let u = energy_density(branch)?;
    Ok(SpectrumPoint {
        field_amplitude: e_amp,
        eps_eff: 2.0 * u / (VACUUM_PERMITTIVITY * e_amp * e_amp),
    })
}

/// One tabulated point of an effective-permittivity spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    /// Field amplitude the permittivity was measured at (V/m).
    pub field_amplitude: f64,
    /// Effective permittivity (dimensionless).
    pub eps_eff: f64,
}

/// Result of a spectrum lookup. `clamped` is set when the requested field
/// fell outside the tabulated range and the endpoint value was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookupValue {
    pub eps_eff: f64,
    pub clamped: bool,
}

/// Effective permittivity tabulated against field amplitude at a fixed drive
/// frequency. Frequency is metadata only; there is no dispersion model.
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivitySpectrum {
    points: Vec<SpectrumPoint>,
    frequency_hz: f64,
    material: String,
}

impl PermittivitySpectrum {
    /// Validates and wraps spectrum points: amplitudes strictly increasing,
    /// permittivities positive.
    pub fn new(
        points: Vec<SpectrumPoint>,
        frequency_hz: f64,
        material: impl Into<String>,
    ) -> Result<Self, DielectricError> {
        for (i, p) in points.iter().enumerate() {
            if !(p.eps_eff > 0.0) || !p.eps_eff.is_finite() {
                return Err(DielectricError::NonPositivePermittivity {
                    index: i,
                    value: p.eps_eff,
                });
            }
            if !p.field_amplitude.is_finite() {
                return Err(DielectricError::NonFiniteSample(i));
            }
            if i > 0 && p.field_amplitude <= points[i - 1].field_amplitude {
                return Err(DielectricError::AmplitudeNotIncreasing(i));
            }
        }
        Ok(Self {
            points,
            frequency_hz,
            material: material.into(),
        })
    }

    /// Two-point spectrum with a constant permittivity over `[e_lo, e_hi]`,
    /// for driving the model with a field-independent dielectric.
    pub fn flat(
        eps: f64,
        e_lo: f64,
        e_hi: f64,
        frequency_hz: f64,
        material: impl Into<String>,
    ) -> Result<Self, DielectricError> {
        Self::new(
            vec![
                SpectrumPoint { field_amplitude: e_lo, eps_eff: eps },
                SpectrumPoint { field_amplitude: e_hi, eps_eff: eps },
            ],
            frequency_hz,
            material,
        )
    }

    pub fn points(&self) -> &[SpectrumPoint] {
        &self.points
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn material(&self) -> &str {
        &self.material
    }

    /// Piecewise-linear interpolation in field amplitude, clamped to the
    /// endpoint values outside the tabulated range.
    pub fn lookup(&self, field: f64) -> Result<LookupValue, DielectricError> {
        spectrum_lookup(self, field)
    }
}

/// See [`PermittivitySpectrum::lookup`].
pub fn spectrum_lookup(
    spec: &PermittivitySpectrum,
    field: f64,
) -> Result<LookupValue, DielectricError> {
    let pts = spec.points();
    if pts.len() < 2 {
        return Err(DielectricError::EmptySpectrum(pts.len()));
    }
    let first = pts[0];
    let last = pts[pts.len() - 1];
    if field <= first.field_amplitude {
        return Ok(LookupValue {
            eps_eff: first.eps_eff,
            clamped: field < first.field_amplitude,
        });
    }
    if field >= last.field_amplitude {
        return Ok(LookupValue {
            eps_eff: last.eps_eff,
            clamped: field > last.field_amplitude,
        });
    }
    // field is strictly inside the tabulated range here.
    let hi = pts.partition_point(|p| p.field_amplitude < field);
    let (a, b) = (pts[hi - 1], pts[hi]);
    if b.field_amplitude == field {
        // Exact at knots; a + t(b - a) with t = 1 can be off by an ulp.
        return Ok(LookupValue { eps_eff: b.eps_eff, clamped: false });
    }
    let t = (field - a.field_amplitude) / (b.field_amplitude - a.field_amplitude);
    Ok(LookupValue {
        eps_eff: a.eps_eff + t * (b.eps_eff - a.eps_eff),
        clamped: false,
    })
}

/// Builds a permittivity spectrum from a set of loops measured at increasing
/// field amplitudes on the same material and frequency. Each loop contributes
/// one point via its discharge branch.
pub fn build_spectrum(curves: &[DeCurve]) -> Result<PermittivitySpectrum, DielectricError> {
    let first = curves
        .first()
        .ok_or(DielectricError::EmptySpectrum(0))?;
    for c in &curves[1..] {
        if c.material() != first.material() {
            return Err(DielectricError::MixedMaterial(
                first.material().to_string(),
                c.material().to_string(),
            ));
        }
        if c.frequency_hz() != first.frequency_hz() {
            return Err(DielectricError::MixedFrequency(
                first.frequency_hz(),
                c.frequency_hz(),
            ));
        }
    }

    let mut points = Vec::with_capacity(curves.len());
    for curve in curves {
        let branch = extract_discharge_branch(curve)?;
        points.push(effective_permittivity(&branch)?);
    }
    points.sort_by(|a, b| a.field_amplitude.total_cmp(&b.field_amplitude));
    for w in points.windows(2) {
        if w[1].field_amplitude == w[0].field_amplitude {
            return Err(DielectricError::DuplicateAmplitude(w[0].field_amplitude));
        }
    }
    PermittivitySpectrum::new(points, first.frequency_hz(), first.material())
}

/// Relative permittivity of a linear solid dielectric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DielectricConstant {
    eps_r: f64,
}

impl DielectricConstant {
    pub fn new(eps_r: f64) -> Result<Self, DielectricError> {
        if !(eps_r >= 1.0) || !eps_r.is_finite() {
            return Err(DielectricError::PermittivityBelowOne(eps_r));
        }
        Ok(Self { eps_r })
    }

    pub fn value(&self) -> f64 {
        self.eps_r
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Linear-dielectric loop traced up then down: D = ε0·εr·E.
    fn linear_loop(eps_r: f64, e_max: f64, n: usize) -> DeCurve {
        let mut samples = Vec::new();
        for i in 0..=n {
            let e = e_max * i as f64 / n as f64;
            samples.push(DeSample::new(e, VACUUM_PERMITTIVITY * eps_r * e));
        }
        for i in (0..n).rev() {
            let e = e_max * i as f64 / n as f64;
            samples.push(DeSample::new(e, VACUUM_PERMITTIVITY * eps_r * e));
        }
        DeCurve::new(samples, 2.0, "linear").unwrap()
    }

    /// Descending branch of a saturating dielectric D = D_s·tanh(E/E_s).
    fn tanh_branch(d_s: f64, e_s: f64, e_max: f64, n: usize) -> DeCurve {
        let samples = (0..=n)
            .rev()
            .map(|i| {
                let e = e_max * i as f64 / n as f64;
                DeSample::new(e, d_s * (e / e_s).tanh())
            })
            .collect();
        DeCurve::new(samples, 2.0, "tanh").unwrap()
    }

    /// Analytic ∫ E dD for the tanh model from 0 to e_max:
    /// D_s·E_s·(x·tanh x − ln cosh x) with x = e_max/E_s.
    fn tanh_energy_exact(d_s: f64, e_s: f64, e_max: f64) -> f64 {
        let x = e_max / e_s;
        d_s * e_s * (x * x.tanh() - x.cosh().ln())
    }

    #[test]
    fn curve_requires_three_finite_samples() {
        let two = vec![DeSample::new(0.0, 0.0), DeSample::new(1.0, 1.0)];
        assert!(matches!(
            DeCurve::new(two, 2.0, "x"),
            Err(DielectricError::TooFewSamples(2))
        ));
        let bad = vec![
            DeSample::new(0.0, 0.0),
            DeSample::new(1.0, f64::NAN),
            DeSample::new(2.0, 1.0),
        ];
        assert!(matches!(
            DeCurve::new(bad, 2.0, "x"),
            Err(DielectricError::NonFiniteSample(1))
        ));
    }

    #[test]
    fn discharge_branch_of_linear_loop_is_descending_half() {
        let n = 100;
        let loop_ = linear_loop(3.3, 3e8, n);
        let branch = extract_discharge_branch(&loop_).unwrap();
        // 1:1 with the input descending samples (peak included).
        assert_eq!(branch.samples(), &loop_.samples()[n..]);
    }

    #[test]
    fn discharge_branch_of_rectangular_loop_ends_at_remanence() {
        let samples = vec![
            DeSample::new(0.0, -0.01),
            DeSample::new(1e7, -0.01),
            DeSample::new(2e7, 0.12),
            DeSample::new(3e7, 0.12),
            DeSample::new(2e7, 0.115),
            DeSample::new(1e7, 0.11),
            DeSample::new(0.0, 0.10),
            DeSample::new(-1e7, 0.09),
        ];
        let curve = DeCurve::new(samples.clone(), 2.0, "rect").unwrap();
        let branch = extract_discharge_branch(&curve).unwrap();
        // Oracle: manual index slice from (E_max, D_max) to (0, D_r).
        assert_eq!(branch.samples(), &samples[3..7]);
        assert_eq!(branch.samples().last().unwrap().displacement, 0.10);
    }

    #[test]
    fn discharge_branch_drops_non_monotone_jitter() {
        let samples = vec![
            DeSample::new(3e7, 0.12),
            DeSample::new(2.5e7, 0.118),
            DeSample::new(2e7, 0.119), // jitter above the running floor
            DeSample::new(1e7, 0.11),
            DeSample::new(0.0, 0.10),
        ];
        let curve = DeCurve::new(samples, 2.0, "jitter").unwrap();
        let branch = extract_discharge_branch(&curve).unwrap();
        assert_eq!(branch.samples().len(), 4);
        assert!(branch
            .samples()
            .windows(2)
            .all(|w| w[1].displacement <= w[0].displacement));
    }

    #[test]
    fn ascending_only_loop_has_no_discharge_branch() {
        let samples = (0..10)
            .map(|i| DeSample::new(i as f64, i as f64 * 1e-3))
            .collect();
        let curve = DeCurve::new(samples, 2.0, "ramp").unwrap();
        assert!(matches!(
            extract_discharge_branch(&curve),
            Err(DielectricError::NoDischargeBranch)
        ));
    }

    #[test]
    fn energy_density_of_linear_branch_matches_closed_form() {
        // u = ½·ε0·εr·E² for D = ε0·εr·E.
        let branch = extract_discharge_branch(&linear_loop(3.3, 3e8, 1000)).unwrap();
        let u = energy_density(&branch).unwrap();
        let exact = 0.5 * VACUUM_PERMITTIVITY * 3.3 * 3e8 * 3e8;
        assert_relative_eq!(u, exact, max_relative = 1e-6);
        assert_relative_eq!(exact, 1.315e6, max_relative = 1e-2);
    }

    #[test]
    fn energy_density_of_zero_field_branch_is_zero() {
        let samples = vec![
            DeSample::new(0.0, 0.03),
            DeSample::new(0.0, 0.02),
            DeSample::new(0.0, 0.01),
        ];
        let branch = DeCurve::new(samples, 2.0, "idle").unwrap();
        assert_eq!(energy_density(&branch).unwrap(), 0.0);
    }

    #[test]
    fn energy_density_rejects_non_monotone_displacement() {
        let samples = vec![
            DeSample::new(3e8, 0.1),
            DeSample::new(2e8, 0.12),
            DeSample::new(1e8, 0.08),
        ];
        let branch = DeCurve::new(samples, 2.0, "bad").unwrap();
        assert!(matches!(
            energy_density(&branch),
            Err(DielectricError::NonMonotoneBranch)
        ));
    }

    #[test]
    fn energy_density_matches_tanh_antiderivative() {
        let (d_s, e_s, e_max) = (0.08, 1.5e8, 3e8);
        let branch = tanh_branch(d_s, e_s, e_max, 4000);
        let u = energy_density(&branch).unwrap();
        assert_relative_eq!(u, tanh_energy_exact(d_s, e_s, e_max), max_relative = 1e-4);
    }

    #[test]
    fn energy_density_is_stable_under_refinement() {
        let (d_s, e_s, e_max) = (0.08, 1.5e8, 3e8);
        let exact = tanh_energy_exact(d_s, e_s, e_max);
        let coarse = energy_density(&tanh_branch(d_s, e_s, e_max, 500)).unwrap();
        let fine = energy_density(&tanh_branch(d_s, e_s, e_max, 1000)).unwrap();
        // Doubling the density moves the estimate by less than the coarse
        // trapezoid error itself.
        assert!((fine - coarse).abs() <= 1.25 * (coarse - exact).abs() + 1e-15);
        assert!((fine - exact).abs() < (coarse - exact).abs());
    }

    #[test]
    fn effective_permittivity_recovers_linear_constant() {
        for e_max in [1e7, 1e8, 3e8] {
            let branch = extract_discharge_branch(&linear_loop(3.3, e_max, 1000)).unwrap();
            let p = effective_permittivity(&branch).unwrap();
            assert_relative_eq!(p.eps_eff, 3.3, max_relative = 1e-6);
            assert_eq!(p.field_amplitude, e_max);
        }
    }

    #[test]
    fn effective_permittivity_matches_tanh_oracle() {
        let (d_s, e_s, e_max) = (0.08, 1.5e8, 2.5e8);
        let branch = tanh_branch(d_s, e_s, e_max, 4000);
        let p = effective_permittivity(&branch).unwrap();
        let expect =
            2.0 * tanh_energy_exact(d_s, e_s, e_max) / (VACUUM_PERMITTIVITY * e_max * e_max);
        assert_relative_eq!(p.eps_eff, expect, max_relative = 1e-4);
    }

    #[test]
    fn effective_permittivity_rejects_zero_field() {
        let samples = vec![
            DeSample::new(0.0, 0.03),
            DeSample::new(0.0, 0.02),
            DeSample::new(0.0, 0.01),
        ];
        let branch = DeCurve::new(samples, 2.0, "idle").unwrap();
        assert!(matches!(
            effective_permittivity(&branch),
            Err(DielectricError::ZeroField(_))
        ));
    }

    #[test]
    fn spectrum_from_linear_loops_is_flat() {
        let curves: Vec<_> = [1e8, 2e8, 3e8]
            .iter()
            .map(|&e| linear_loop(3.3, e, 400))
            .collect();
        let spec = build_spectrum(&curves).unwrap();
        assert_eq!(spec.points().len(), 3);
        for (p, e) in spec.points().iter().zip([1e8, 2e8, 3e8]) {
            assert_eq!(p.field_amplitude, e);
            assert_relative_eq!(p.eps_eff, 3.3, max_relative = 1e-6);
        }
    }

    #[test]
    fn spectrum_of_tanh_loops_decreases_with_amplitude() {
        let (d_s, e_s) = (0.08, 1.5e8);
        let curves: Vec<_> = (1..=10)
            .map(|i| tanh_branch(d_s, e_s, 3e7 * i as f64, 2000))
            .collect();
        let spec = build_spectrum(&curves).unwrap();
        assert!(spec
            .points()
            .windows(2)
            .all(|w| w[1].eps_eff < w[0].eps_eff));
    }

    #[test]
    fn spectrum_rejects_duplicates_and_mixtures() {
        let a = linear_loop(3.3, 1e8, 100);
        let b = linear_loop(3.3, 1e8, 150);
        assert!(matches!(
            build_spectrum(&[a.clone(), b]),
            Err(DielectricError::DuplicateAmplitude(_))
        ));

        let other = DeCurve::new(a.samples().to_vec(), 2.0, "other").unwrap();
        assert!(matches!(
            build_spectrum(&[a.clone(), other]),
            Err(DielectricError::MixedMaterial(_, _))
        ));
        let off_freq = DeCurve::new(a.samples().to_vec(), 50.0, "linear").unwrap();
        assert!(matches!(
            build_spectrum(&[a, off_freq]),
            Err(DielectricError::MixedFrequency(_, _))
        ));
    }

    #[test]
    fn lookup_interpolates_and_clamps() {
        let spec = PermittivitySpectrum::new(
            vec![
                SpectrumPoint { field_amplitude: 1e8, eps_eff: 30.0 },
                SpectrumPoint { field_amplitude: 2e8, eps_eff: 20.0 },
                SpectrumPoint { field_amplitude: 3e8, eps_eff: 12.0 },
            ],
            2.0,
            "terpolymer",
        )
        .unwrap();

        // Exact at a knot.
        let at_knot = spec.lookup(2e8).unwrap();
        assert_eq!(at_knot.eps_eff, 20.0);
        assert!(!at_knot.clamped);

        // Midpoint between (1e8, 30) and (2e8, 20).
        let mid = spec.lookup(1.5e8).unwrap();
        assert_relative_eq!(mid.eps_eff, 25.0, max_relative = 1e-12);
        assert!(!mid.clamped);

        // Beyond the last knot: endpoint value, clamp flag set.
        let beyond = spec.lookup(5e8).unwrap();
        assert_eq!(beyond.eps_eff, 12.0);
        assert!(beyond.clamped);
        let below = spec.lookup(1e7).unwrap();
        assert_eq!(below.eps_eff, 30.0);
        assert!(below.clamped);
    }

    #[test]
    fn lookup_requires_two_points() {
        let spec = PermittivitySpectrum::new(
            vec![SpectrumPoint { field_amplitude: 1e8, eps_eff: 30.0 }],
            2.0,
            "x",
        )
        .unwrap();
        assert!(matches!(
            spec.lookup(1e8),
            Err(DielectricError::EmptySpectrum(1))
        ));
    }

    #[test]
    fn spectrum_validation_rejects_bad_points() {
        let out_of_order = PermittivitySpectrum::new(
            vec![
                SpectrumPoint { field_amplitude: 2e8, eps_eff: 20.0 },
                SpectrumPoint { field_amplitude: 1e8, eps_eff: 30.0 },
            ],
            2.0,
            "x",
        );
        assert!(matches!(
            out_of_order,
            Err(DielectricError::AmplitudeNotIncreasing(1))
        ));

        let non_positive = PermittivitySpectrum::new(
            vec![
                SpectrumPoint { field_amplitude: 1e8, eps_eff: 30.0 },
                SpectrumPoint { field_amplitude: 2e8, eps_eff: 0.0 },
            ],
            2.0,
            "x",
        );
        assert!(matches!(
            non_positive,
            Err(DielectricError::NonPositivePermittivity { index: 1, .. })
        ));
    }

    #[test]
    fn terpolymer_endpoint_fixture_round_trips() {
        // Digitized endpoints: ~39.5 at 30 V/µm, ~10 at 300 V/µm.
        let spec = PermittivitySpectrum::new(
            vec![
                SpectrumPoint { field_amplitude: 3e7, eps_eff: 39.5 },
                SpectrumPoint { field_amplitude: 3e8, eps_eff: 10.0 },
            ],
            2.0,
            "terpolymer",
        )
        .unwrap();
        assert_eq!(spec.lookup(3e7).unwrap().eps_eff, 39.5);
        assert_eq!(spec.lookup(3e8).unwrap().eps_eff, 10.0);
    }

    #[test]
    fn dielectric_constant_requires_at_least_one() {
        assert!(DielectricConstant::new(3.3).is_ok());
        assert!(matches!(
            DielectricConstant::new(0.5),
            Err(DielectricError::PermittivityBelowOne(_))
        ));
    }
}
