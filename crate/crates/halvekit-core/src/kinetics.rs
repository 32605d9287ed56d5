//! Kinetic metrics from step-voltage displacement traces.
//!
//! A recorded contraction trace is smoothed with a Savitzky-Golay filter
//! (velocity and acceleration come from the fitted polynomials), the
//! actuation window from first motion to settling is detected, and peak
//! strain rate, specific power, and average specific power are computed over
//! that window. The module also reports the strain decline over a durability
//! cycle series.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::savgol::{SavitzkyGolay, SavitzkyGolayError};

/// Standard gravity (m/s²).
pub const STANDARD_GRAVITY: f64 = 9.81;

/// Default Savitzky-Golay frame length for contraction traces.
pub const DEFAULT_SG_WINDOW: usize = 17;

/// Default Savitzky-Golay polynomial order for contraction traces.
pub const DEFAULT_SG_ORDER: usize = 3;

/// Default cycle count averaged at each end of a durability series.
pub const DEFAULT_DURABILITY_WINDOW: usize = 10;

#[derive(Debug, Error)]
pub enum KineticsError {
    #[error("trace has {len} samples but needs at least {min}")]
    TraceTooShort { len: usize, min: usize },
    #[error("time stamps must be strictly increasing at index {0}")]
    TimeNotIncreasing(usize),
    #[error("non-finite {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("no motion detected: steady contraction {steady} m is below the noise floor {floor} m")]
    NoMotionDetected { steady: f64, floor: f64 },
    #[error("trace never settles into the +/-{band_percent}% band around the steady value")]
    DidNotSettle { band_percent: f64 },
    #[error("actuation window is degenerate: start {t_start} s is not before end {t_end} s")]
    DegenerateWindow { t_start: f64, t_end: f64 },
    #[error("durability series needs at least 2 cycles, got {0}")]
    EmptyInput(usize),
    #[error("durability baseline strain is zero")]
    ZeroBaseline,
    #[error(transparent)]
    Filter(#[from] SavitzkyGolayError),
}

/// Load and actuator metadata attached to a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    /// Hanging load mass (kg).
    pub load_mass_kg: f64,
    /// Actuator mass (kg).
    pub actuator_mass_kg: f64,
    /// Resting actuator length (m).
    pub actuator_length_m: f64,
    /// Step voltage applied at t = 0 (V).
    pub voltage_v: f64,
}

/// Time-stamped contraction samples from a step-voltage experiment.
///
/// Sampling must be uniform within 1% jitter; traces that are not are
/// linearly resampled to the median sample period on ingest, because the
/// smoothing filter assumes uniform spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementTrace {
    time_s: Vec<f64>,
    contraction_m: Vec<f64>,
    meta: TraceMeta,
    resampled: bool,
}

impl DisplacementTrace {
    pub fn new(
        time_s: Vec<f64>,
        contraction_m: Vec<f64>,
        meta: TraceMeta,
    ) -> Result<Self, KineticsError> {
        let n = time_s.len().min(contraction_m.len());
        if n < 3 {
            return Err(KineticsError::TraceTooShort { len: n, min: 3 });
        }
        for (i, &t) in time_s.iter().enumerate() {
            if !t.is_finite() {
                return Err(KineticsError::NonFinite { what: "time", index: i });
            }
            if i > 0 && t <= time_s[i - 1] {
                return Err(KineticsError::TimeNotIncreasing(i));
            }
        }
        if let Some(i) = contraction_m.iter().position(|c| !c.is_finite()) {
            return Err(KineticsError::NonFinite { what: "contraction", index: i });
        }
        for (name, value) in [
            ("load mass", meta.load_mass_kg),
            ("actuator mass", meta.actuator_mass_kg),
            ("actuator length", meta.actuator_length_m),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(KineticsError::NonPositive { name, value });
            }
        }

        let mut deltas: Vec<f64> = time_s.windows(2).map(|w| w[1] - w[0]).collect();
        deltas.sort_by(f64::total_cmp);
        let median_dt = deltas[deltas.len() / 2];
        let uniform = deltas
            .iter()
            .all(|&d| (d - median_dt).abs() <= 0.01 * median_dt);

        if uniform {
            return Ok(Self { time_s, contraction_m, meta, resampled: false });
        }

        // Linear resample onto a uniform grid at the median period.
        let t0 = time_s[0];
        let t_end = *time_s.last().unwrap();
        let steps = ((t_end - t0) / median_dt).round() as usize;
        let steps = steps.max(2);
        let mut new_time = Vec::with_capacity(steps + 1);
        let mut new_contraction = Vec::with_capacity(steps + 1);
        let mut j = 0;
        for k in 0..=steps {
            let t = (t0 + k as f64 * median_dt).min(t_end);
            while j + 1 < time_s.len() && time_s[j + 1] < t {
                j += 1;
            }
            let (ta, tb) = (time_s[j], time_s[(j + 1).min(time_s.len() - 1)]);
            let (ya, yb) = (
                contraction_m[j],
                contraction_m[(j + 1).min(contraction_m.len() - 1)],
            );
            let y = if tb > ta { ya + (yb - ya) * (t - ta) / (tb - ta) } else { ya };
            new_time.push(t);
            new_contraction.push(y);
        }
        Ok(Self {
            time_s: new_time,
            contraction_m: new_contraction,
            meta,
            resampled: true,
        })
    }

    pub fn time_s(&self) -> &[f64] {
        &self.time_s
    }

    pub fn contraction_m(&self) -> &[f64] {
        &self.contraction_m
    }

    pub fn meta(&self) -> &TraceMeta {
        &self.meta
    }

    /// Whether ingest had to resample onto a uniform grid.
    pub fn was_resampled(&self) -> bool {
        self.resampled
    }

    pub fn sample_period_s(&self) -> f64 {
        (self.time_s[self.time_s.len() - 1] - self.time_s[0]) / (self.time_s.len() - 1) as f64
    }
}

/// A smoothed trace with the analytic derivatives of the fitted local
/// polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedTrace {
    pub time_s: Vec<f64>,
    pub contraction_m: Vec<f64>,
    pub velocity_m_per_s: Vec<f64>,
    pub acceleration_m_per_s2: Vec<f64>,
    pub meta: TraceMeta,
}

/// Savitzky-Golay smoothing of a displacement trace. Velocity and
/// acceleration come from the first and second derivatives of the fitted
/// polynomials, not from finite differences of the smoothed series.
pub fn smooth(
    trace: &DisplacementTrace,
    window: usize,
    order: usize,
) -> Result<SmoothedTrace, KineticsError> {
    let sg = SavitzkyGolay::new(window, order)?;
    let dt = trace.sample_period_s();
    let [contraction, velocity, acceleration] =
        sg.smooth_with_derivatives(trace.contraction_m(), dt)?;
    Ok(SmoothedTrace {
        time_s: trace.time_s().to_vec(),
        contraction_m: contraction,
        velocity_m_per_s: velocity,
        acceleration_m_per_s2: acceleration,
        meta: *trace.meta(),
    })
}

/// Detection thresholds for the actuation window. The steady value is the
/// mean of the trailing `steady_tail_fraction` of the trace; motion starts
/// when the contraction first exceeds `start_fraction` of it and ends when
/// the trace enters and stays within `settle_fraction` of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    pub start_fraction: f64,
    pub settle_fraction: f64,
    pub steady_tail_fraction: f64,
    /// Contraction magnitudes below this are treated as no motion (m).
    pub noise_floor_m: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            start_fraction: 0.02,
            settle_fraction: 0.02,
            steady_tail_fraction: 0.10,
            noise_floor_m: 1e-6,
        }
    }
}

/// The actuation window of a smoothed trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuationWindow {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub start_index: usize,
    pub end_index: usize,
    /// Mean contraction over the trailing tail (m).
    pub steady_contraction_m: f64,
}

/// Finds the actuation window from first movement to settling.
pub fn actuation_window(
    trace: &SmoothedTrace,
    config: &WindowConfig,
) -> Result<ActuationWindow, KineticsError> {
    let y = &trace.contraction_m;
    let n = y.len();
    let tail = ((n as f64 * config.steady_tail_fraction).ceil() as usize).clamp(1, n);
    let steady = y[n - tail..].iter().sum::<f64>() / tail as f64;
    if steady.abs() < config.noise_floor_m {
        return Err(KineticsError::NoMotionDetected {
            steady,
            floor: config.noise_floor_m,
        });
    }

    // Normalize so extension traces (negative steady) work the same way.
    let u: Vec<f64> = y.iter().map(|v| v / steady).collect();

    let start_index = u
        .iter()
        .position(|&v| v > config.start_fraction)
        .ok_or(KineticsError::NoMotionDetected {
            steady,
            floor: config.noise_floor_m,
        })?;

    // Last sample outside the settle band; settling is the sample after it.
    let last_outside = u.iter().rposition(|&v| (v - 1.0).abs() > config.settle_fraction);
    let end_index = match last_outside {
        None => start_index, // already settled from the start
        Some(i) if i + 1 >= n => {
            return Err(KineticsError::DidNotSettle {
                band_percent: config.settle_fraction * 100.0,
            })
        }
        Some(i) => i + 1,
    };

    let (t_start_s, t_end_s) = (trace.time_s[start_index], trace.time_s[end_index]);
    if end_index <= start_index {
        return Err(KineticsError::DegenerateWindow { t_start: t_start_s, t_end: t_end_s });
    }
    Ok(ActuationWindow {
        t_start_s,
        t_end_s,
        start_index,
        end_index,
        steady_contraction_m: steady,
    })
}

/// Peak strain rate over the actuation window (%/s): the largest contraction
/// velocity divided by actuator length, times 100.
pub fn peak_strain_rate(trace: &SmoothedTrace, window: &ActuationWindow) -> f64 {
    let v_peak = trace.velocity_m_per_s[window.start_index..=window.end_index]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    v_peak / trace.meta.actuator_length_m * 100.0
}

/// Specific power series over the actuation window (s, W/kg):
/// `P = m_load·(a + g)·v / m_actuator`, the mechanical power delivered to
/// the hanging load per unit actuator mass.
pub fn specific_power_series(
    trace: &SmoothedTrace,
    window: &ActuationWindow,
) -> Vec<(f64, f64)> {
    let scale = trace.meta.load_mass_kg / trace.meta.actuator_mass_kg;
    (window.start_index..=window.end_index)
        .map(|i| {
            let p = scale
                * (trace.acceleration_m_per_s2[i] + STANDARD_GRAVITY)
                * trace.velocity_m_per_s[i];
            (trace.time_s[i], p)
        })
        .collect()
}

/// Largest value of the specific power series (W/kg).
pub fn peak_specific_power(series: &[(f64, f64)]) -> f64 {
    series.iter().map(|&(_, p)| p).fold(f64::NEG_INFINITY, f64::max)
}

/// Average specific power (W/kg): trapezoidal integral of the series over
/// the window divided by the window duration.
pub fn avg_specific_power(series: &[(f64, f64)], window: &ActuationWindow) -> f64 {
    let mut total = 0.0;
    for w in series.windows(2) {
        total += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    total / (window.t_end_s - window.t_start_s)
}

/// Summary metrics of one step-voltage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticReport {
    pub peak_strain_rate_pct_per_s: f64,
    pub peak_specific_power_w_per_kg: f64,
    pub avg_specific_power_w_per_kg: f64,
    pub t_start_s: f64,
    pub t_end_s: f64,
    /// Steady contraction divided by actuator length.
    pub steady_strain: f64,
}

/// Everything produced by the kinetics pipeline for one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticsOutput {
    pub report: KineticReport,
    pub smoothed: SmoothedTrace,
    /// (time, W/kg) over the actuation window.
    pub specific_power: Vec<(f64, f64)>,
}

/// Full pipeline: smooth, detect the actuation window, and compute the
/// kinetic metrics.
pub fn analyze(
    trace: &DisplacementTrace,
    sg_window: usize,
    sg_order: usize,
    config: &WindowConfig,
) -> Result<KineticsOutput, KineticsError> {
    let smoothed = smooth(trace, sg_window, sg_order)?;
    let window = actuation_window(&smoothed, config)?;
    let series = specific_power_series(&smoothed, &window);
    let report = KineticReport {
        peak_strain_rate_pct_per_s: peak_strain_rate(&smoothed, &window),
        peak_specific_power_w_per_kg: peak_specific_power(&series),
        avg_specific_power_w_per_kg: avg_specific_power(&series, &window),
        t_start_s: window.t_start_s,
        t_end_s: window.t_end_s,
        steady_strain: window.steady_contraction_m / trace.meta().actuator_length_m,
    };
    Ok(KineticsOutput { report, smoothed, specific_power: series })
}

/// Percent decline in steady actuation strain across a cycle series:
/// `100·(first − last)/first`, where first/last are means over the leading
/// and trailing `window` cycles (clamped to the series length, so a
/// single-window series of identical values reports zero).
pub fn durability_decline(strains: &[f64], window: usize) -> Result<f64, KineticsError> {
    if strains.len() < 2 {
        return Err(KineticsError::EmptyInput(strains.len()));
    }
    let w = window.clamp(1, strains.len());
    let first = strains[..w].iter().sum::<f64>() / w as f64;
    let last = strains[strains.len() - w..].iter().sum::<f64>() / w as f64;
    if first == 0.0 {
        return Err(KineticsError::ZeroBaseline);
    }
    Ok(100.0 * (first - last) / first)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
