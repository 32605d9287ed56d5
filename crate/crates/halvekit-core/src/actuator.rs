//! Quasi-static actuator model for zipping electrohydraulic pouches.
//!
//! The pouch is parametrized by the half-central angle `α` of the circular
//! arc formed by the unzipped film. The oil volume fixes the unzipped film
//! length at each angle, which yields the strain, while the electrostatic
//! zipping force follows
//!
//! `F = w·t·cos α/(1 − cos α)·ε0·ε_eff(E, f)·E²`
//!
//! with `E = V/t` across the solid dielectric. With a field-dependent
//! effective permittivity the same machinery predicts force/strain curves,
//! actuator energy density, and supply power budgets.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::dielectric::{
    DielectricConstant, DielectricError, PermittivitySpectrum, VACUUM_PERMITTIVITY,
};

/// Smallest half-central angle used by curve sweeps (rad). Below this the
/// force term diverges and the volume constraint is never satisfiable for
/// realistic fill fractions.
pub const DEFAULT_ALPHA_MIN: f64 = 1e-3;

/// Errors from geometry validation and model evaluation.
#[derive(Debug, Error)]
pub enum ActuatorError {
    #[error("{name} must be positive, got {value}")]
    NonPositiveDimension { name: &'static str, value: f64 },
    #[error("electrode length {le} m must be shorter than pouch length {lp} m")]
    ElectrodeTooLong { le: f64, lp: f64 },
    #[error("fill fraction must be in (0, 1], got {0}")]
    InvalidFillFraction(f64),
    #[error("actuator needs at least one pouch")]
    ZeroPouches,
    #[error("mass must be non-negative and finite, got {0}")]
    InvalidMass(f64),
    #[error("voltage must be non-negative, got {0}")]
    NegativeVoltage(f64),
    #[error("voltage must be positive, got {0}")]
    NonPositiveVoltage(f64),
    #[error("zip angle must lie in (0, pi/2], got {0} rad")]
    InvalidZipAngle(f64),
    #[error("zipped fraction must lie in [0, 1], got {0}")]
    InvalidZippedFraction(f64),
    #[error("pouch overfilled at alpha = {alpha} rad: unzipped length {unzipped} m exceeds pouch length {lp} m")]
    Overfilled { alpha: f64, unzipped: f64, lp: f64 },
    #[error("curve needs at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("strain values must be strictly increasing at index {0}")]
    StrainNotIncreasing(usize),
    #[error("force must be non-negative and finite at index {0}")]
    InvalidForce(usize),
    #[error("model curve force must be non-increasing in strain at index {0}")]
    ForceNotMonotone(usize),
    #[error("actuator mass must be positive for energy density, got {0} kg")]
    ZeroMass(f64),
    #[error("converter efficiency must be in (0, 1], got {0}")]
    InvalidEfficiency(f64),
    #[error("negative input {name}: {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("average supply power is zero; runtime is unbounded")]
    ZeroPower,
    #[error(transparent)]
    Dielectric(#[from] DielectricError),
}

fn require_positive(name: &'static str, value: f64) -> Result<(), ActuatorError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ActuatorError::NonPositiveDimension { name, value })
    }
}

/// Pouch and electrode dimensions plus fill and mass metadata.
///
/// `pouch_length` and `electrode_length` run along the loading axis;
/// `dielectric_thickness` is the per-side solid dielectric between electrode
/// and oil.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActuatorGeometry {
    pouch_width_m: f64,
    pouch_length_m: f64,
    electrode_length_m: f64,
    dielectric_thickness_m: f64,
    fill_fraction: f64,
    num_pouches: u32,
    actuator_mass_kg: f64,
}

impl ActuatorGeometry {
    pub fn new(
        pouch_width_m: f64,
        pouch_length_m: f64,
        electrode_length_m: f64,
        dielectric_thickness_m: f64,
        fill_fraction: f64,
        num_pouches: u32,
        actuator_mass_kg: f64,
    ) -> Result<Self, ActuatorError> {
        require_positive("pouch width", pouch_width_m)?;
        require_positive("pouch length", pouch_length_m)?;
        require_positive("electrode length", electrode_length_m)?;
        require_positive("dielectric thickness", dielectric_thickness_m)?;
        if electrode_length_m >= pouch_length_m {
            return Err(ActuatorError::ElectrodeTooLong {
                le: electrode_length_m,
                lp: pouch_length_m,
            });
        }
        if !(fill_fraction > 0.0 && fill_fraction <= 1.0) {
            return Err(ActuatorError::InvalidFillFraction(fill_fraction));
        }
        if num_pouches == 0 {
            return Err(ActuatorError::ZeroPouches);
        }
        if !(actuator_mass_kg >= 0.0) || !actuator_mass_kg.is_finite() {
            return Err(ActuatorError::InvalidMass(actuator_mass_kg));
        }
        Ok(Self {
            pouch_width_m,
            pouch_length_m,
            electrode_length_m,
            dielectric_thickness_m,
            fill_fraction,
            num_pouches,
            actuator_mass_kg,
        })
    }

    pub fn pouch_width_m(&self) -> f64 {
        self.pouch_width_m
    }

    pub fn pouch_length_m(&self) -> f64 {
        self.pouch_length_m
    }

    pub fn electrode_length_m(&self) -> f64 {
        self.electrode_length_m
    }

    pub fn dielectric_thickness_m(&self) -> f64 {
        self.dielectric_thickness_m
    }

    pub fn fill_fraction(&self) -> f64 {
        self.fill_fraction
    }

    pub fn num_pouches(&self) -> u32 {
        self.num_pouches
    }

    pub fn actuator_mass_kg(&self) -> f64 {
        self.actuator_mass_kg
    }
}

/// Voltage applied across one dielectric layer and the resulting field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveState {
    pub voltage_v: f64,
    pub field_v_per_m: f64,
}

impl DriveState {
    /// Builds the drive state with `E = V/t` exactly.
    pub fn new(voltage_v: f64, dielectric_thickness_m: f64) -> Result<Self, ActuatorError> {
        if !(voltage_v >= 0.0) || !voltage_v.is_finite() {
            return Err(ActuatorError::NegativeVoltage(voltage_v));
        }
        require_positive("dielectric thickness", dielectric_thickness_m)?;
        Ok(Self {
            voltage_v,
            field_v_per_m: voltage_v / dielectric_thickness_m,
        })
    }
}

/// Half-central angle of the unzipped film arc, in (0, π/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipAngle {
    rad: f64,
}

impl ZipAngle {
    pub fn new(rad: f64) -> Result<Self, ActuatorError> {
        if rad > 0.0 && rad <= FRAC_PI_2 {
            Ok(Self { rad })
        } else {
            Err(ActuatorError::InvalidZipAngle(rad))
        }
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }
}

/// Where a force/strain curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSource {
    Model,
    Measurement,
}

/// One (strain, force) sample of a force/strain curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceStrainPoint {
    /// Contraction as a fraction of resting length.
    pub strain: f64,
    /// Actuation force (N).
    pub force_n: f64,
}

/// Ordered (strain, force) samples with the voltage that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForceStrainCurve {
    points: Vec<ForceStrainPoint>,
    voltage_v: f64,
    source: CurveSource,
}

impl ForceStrainCurve {
    /// Model-generated curve: strictly increasing strain, non-negative and
    /// non-increasing force.
    pub fn model(points: Vec<ForceStrainPoint>, voltage_v: f64) -> Result<Self, ActuatorError> {
        Self::validated(points, voltage_v, CurveSource::Model)
    }

    /// Measured curve: strictly increasing strain, non-negative force.
    pub fn measurement(
        points: Vec<ForceStrainPoint>,
        voltage_v: f64,
    ) -> Result<Self, ActuatorError> {
        Self::validated(points, voltage_v, CurveSource::Measurement)
    }

    fn validated(
        points: Vec<ForceStrainPoint>,
        voltage_v: f64,
        source: CurveSource,
    ) -> Result<Self, ActuatorError> {
        for (i, p) in points.iter().enumerate() {
            if !(p.force_n >= 0.0) || !p.force_n.is_finite() || !p.strain.is_finite() {
                return Err(ActuatorError::InvalidForce(i));
            }
            if i > 0 {
                if p.strain <= points[i - 1].strain {
                    return Err(ActuatorError::StrainNotIncreasing(i));
                }
                if source == CurveSource::Model && p.force_n > points[i - 1].force_n {
                    return Err(ActuatorError::ForceNotMonotone(i));
                }
            }
        }
        Ok(Self { points, voltage_v, source })
    }

    pub fn points(&self) -> &[ForceStrainPoint] {
        &self.points
    }

    pub fn voltage_v(&self) -> f64 {
        self.voltage_v
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    pub fn max_force_n(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.force_n)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Strain coverage of the curve as (min, max).
    pub fn strain_range(&self) -> (f64, f64) {
        (
            self.points.first().map_or(f64::NAN, |p| p.strain),
            self.points.last().map_or(f64::NAN, |p| p.strain),
        )
    }

    /// Force at a strain by linear interpolation, clamped to the endpoint
    /// values outside the covered range.
    pub fn force_at_strain(&self, strain: f64) -> f64 {
        interp_force(&self.points, strain)
    }
}

pub(crate) fn interp_force(points: &[ForceStrainPoint], strain: f64) -> f64 {
    match points {
        [] => f64::NAN,
        [only] => only.force_n,
        _ => {
            let first = points[0];
            let last = points[points.len() - 1];
            if strain <= first.strain {
                return first.force_n;
            }
            if strain >= last.strain {
                return last.force_n;
            }
            let hi = points.partition_point(|p| p.strain < strain);
            let (a, b) = (points[hi - 1], points[hi]);
            let t = (strain - a.strain) / (b.strain - a.strain);
            a.force_n + t * (b.force_n - a.force_n)
        }
    }
}

// ---------------------------------------------------------------------------
// Electrical quantities
// ---------------------------------------------------------------------------

/// Parallel-plate capacitance of the zipped electrode region, summed over
/// pouches: `C = zipped_fraction·L_e·w·ε0·ε_r/t` per pouch.
pub fn capacitance(
    geom: &ActuatorGeometry,
    eps_r: DielectricConstant,
    zipped_fraction: f64,
) -> Result<f64, ActuatorError> {
    if !(0.0..=1.0).contains(&zipped_fraction) {
        return Err(ActuatorError::InvalidZippedFraction(zipped_fraction));
    }
    let area = zipped_fraction * geom.electrode_length_m() * geom.pouch_width_m();
    Ok(area * VACUUM_PERMITTIVITY * eps_r.value() / geom.dielectric_thickness_m()
        * f64::from(geom.num_pouches()))
}

/// Electrical energy stored on a capacitance: `½CV²`.
pub fn electrical_energy(capacitance_f: f64, voltage_v: f64) -> f64 {
    0.5 * capacitance_f * voltage_v * voltage_v
}

/// Factor by which the drive voltage can be reduced when swapping a
/// reference dielectric (thickness `t_ref`, constant `eps_ref`) for a new
/// one (thickness `t_new`, effective permittivity from `spec` at `e_new`)
/// while keeping the same electrical energy:
/// `sqrt(t_ref/(eps_ref·t_new)·ε_eff(E_new))`.
pub fn voltage_reduction_ratio(
    t_ref_m: f64,
    eps_ref: DielectricConstant,
    t_new_m: f64,
    spec: &PermittivitySpectrum,
    e_new_v_per_m: f64,
) -> Result<f64, ActuatorError> {
    require_positive("reference thickness", t_ref_m)?;
    require_positive("new thickness", t_new_m)?;
    let eps_eff = spec.lookup(e_new_v_per_m)?.eps_eff;
    Ok((t_ref_m / (eps_ref.value() * t_new_m) * eps_eff).sqrt())
}

// ---------------------------------------------------------------------------
// Zip geometry
// ---------------------------------------------------------------------------

/// Oil volume per pouch (m³): the fill fraction of the cylinder whose
/// circumference is the two free film lengths, `fill·w·(L_p − L_e)²/π`.
pub fn fill_volume(geom: &ActuatorGeometry) -> f64 {
    let free = geom.pouch_length_m() - geom.electrode_length_m();
    geom.fill_fraction() * geom.pouch_width_m() * free * free / PI
}

/// `2α − sin 2α`, switching to a series below 1e-2 rad to avoid catastrophic
/// cancellation.
fn arc_span(alpha: f64) -> f64 {
    if alpha < 1e-2 {
        let x = 2.0 * alpha;
        let x2 = x * x;
        x * x2 / 6.0 * (1.0 - x2 / 20.0 + x2 * x2 / 840.0)
    } else {
        2.0 * alpha - (2.0 * alpha).sin()
    }
}

/// `sin α / α`, stable near zero.
fn sinc(alpha: f64) -> f64 {
    if alpha.abs() < 1e-4 {
        let a2 = alpha * alpha;
        1.0 - a2 / 6.0 + a2 * a2 / 120.0
    } else {
        alpha.sin() / alpha
    }
}

/// State of one pouch at a given zip angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipState {
    /// Contraction as a fraction of the pouch length.
    pub strain: f64,
    /// Unzipped film length `l(α)` (m).
    pub unzipped_length_m: f64,
    /// Zipped electrode length, clamped to `[0, L_e]` (m).
    pub zipped_length_m: f64,
}

fn unzipped_length(fluid_volume_m3: f64, width_m: f64, alpha: f64) -> f64 {
    (4.0 * alpha * alpha * fluid_volume_m3 / (width_m * arc_span(alpha))).sqrt()
}

/// Raw-parameter zip state, shared with the system-identification path where
/// candidate geometries bypass [`ActuatorGeometry`] validation.
pub(crate) fn zip_state_raw(
    fluid_volume_m3: f64,
    width_m: f64,
    pouch_length_m: f64,
    electrode_length_m: f64,
    alpha: f64,
) -> Result<ZipState, ActuatorError> {
    let l = unzipped_length(fluid_volume_m3, width_m, alpha);
    if l > pouch_length_m {
        return Err(ActuatorError::Overfilled { alpha, unzipped: l, lp: pouch_length_m });
    }
    let z = (pouch_length_m - l).clamp(0.0, electrode_length_m);
    let actuated = z + l * sinc(alpha);
    Ok(ZipState {
        strain: (pouch_length_m - actuated) / pouch_length_m,
        unzipped_length_m: l,
        zipped_length_m: z,
    })
}

/// Solves the pouch geometry at a zip angle under the oil-volume constraint:
/// `l(α) = sqrt(4α²·V_fluid/(w·(2α − sin 2α)))`, `z = clamp(L_p − l, 0, L_e)`,
/// actuated length `L = z + l·sin α/α`, strain `(L_p − L)/L_p`.
pub fn zip_geometry(geom: &ActuatorGeometry, alpha: ZipAngle) -> Result<ZipState, ActuatorError> {
    zip_state_raw(
        fill_volume(geom),
        geom.pouch_width_m(),
        geom.pouch_length_m(),
        geom.electrode_length_m(),
        alpha.rad(),
    )
}

/// Smallest feasible zip angle at or above `alpha_min`: the angle where the
/// volume-constrained unzipped length just fits in the pouch. The unzipped
/// length decreases with α, so a bisection on `l(α) ≤ L_p` suffices.
pub fn min_feasible_alpha(geom: &ActuatorGeometry, alpha_min: f64) -> Result<f64, ActuatorError> {
    if !(alpha_min > 0.0 && alpha_min < FRAC_PI_2) {
        return Err(ActuatorError::InvalidZipAngle(alpha_min));
    }
    let v = fill_volume(geom);
    let w = geom.pouch_width_m();
    let lp = geom.pouch_length_m();
    if unzipped_length(v, w, alpha_min) <= lp {
        return Ok(alpha_min);
    }
    if unzipped_length(v, w, FRAC_PI_2) > lp {
        return Err(ActuatorError::Overfilled {
            alpha: FRAC_PI_2,
            unzipped: unzipped_length(v, w, FRAC_PI_2),
            lp,
        });
    }
    let (mut lo, mut hi) = (alpha_min, FRAC_PI_2); // lo infeasible, hi feasible
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if unzipped_length(v, w, mid) <= lp {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

// ---------------------------------------------------------------------------
// Force model
// ---------------------------------------------------------------------------

fn zipping_force(width_m: f64, thickness_m: f64, eps: f64, field: f64, alpha: f64) -> f64 {
    // cos(FRAC_PI_2) is ~6e-17 rather than zero; the fully-open endpoint
    // carries exactly zero force.
    let cos = if alpha >= FRAC_PI_2 { 0.0 } else { alpha.cos() };
    let ratio = cos / (1.0 - cos);
    width_m * thickness_m * ratio * VACUUM_PERMITTIVITY * eps * field * field
}

/// Zipping force at a drive voltage and angle with the field-dependent
/// effective permittivity taken from `spec` at `E = V/t`.
pub fn force_at(
    geom: &ActuatorGeometry,
    spec: &PermittivitySpectrum,
    voltage_v: f64,
    alpha: ZipAngle,
) -> Result<f64, ActuatorError> {
    if !(voltage_v > 0.0) || !voltage_v.is_finite() {
        return Err(ActuatorError::NonPositiveVoltage(voltage_v));
    }
    let drive = DriveState::new(voltage_v, geom.dielectric_thickness_m())?;
    let eps = spec.lookup(drive.field_v_per_m)?.eps_eff;
    Ok(zipping_force(
        geom.pouch_width_m(),
        geom.dielectric_thickness_m(),
        eps,
        drive.field_v_per_m,
        alpha.rad(),
    ))
}

/// Zipping force with a constant relative permittivity. Kept as a separate
/// arithmetic path from [`force_at`] so the two can be cross-checked.
pub fn force_at_const_eps(
    geom: &ActuatorGeometry,
    eps_r: DielectricConstant,
    voltage_v: f64,
    alpha: ZipAngle,
) -> Result<f64, ActuatorError> {
    if !(voltage_v > 0.0) || !voltage_v.is_finite() {
        return Err(ActuatorError::NonPositiveVoltage(voltage_v));
    }
    let drive = DriveState::new(voltage_v, geom.dielectric_thickness_m())?;
    Ok(zipping_force(
        geom.pouch_width_m(),
        geom.dielectric_thickness_m(),
        eps_r.value(),
        drive.field_v_per_m,
        alpha.rad(),
    ))
}

fn sweep_curve<F>(
    geom: &ActuatorGeometry,
    voltage_v: f64,
    n_points: usize,
    alpha_min: f64,
    force: F,
) -> Result<ForceStrainCurve, ActuatorError>
where
    F: Fn(ZipAngle) -> Result<f64, ActuatorError>,
{
    if n_points < 2 {
        return Err(ActuatorError::InsufficientPoints { needed: 2, got: n_points });
    }
    let alpha_lo = min_feasible_alpha(geom, alpha_min)?;
    let mut points: Vec<ForceStrainPoint> = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let alpha = alpha_lo + (FRAC_PI_2 - alpha_lo) * i as f64 / (n_points - 1) as f64;
        let alpha = ZipAngle::new(alpha.min(FRAC_PI_2))?;
        let state = zip_geometry(geom, alpha)?;
        let force_n = force(alpha)?;
        // Guard against degenerate duplicate strains at the sweep boundary.
        if points.last().is_some_and(|p| state.strain <= p.strain) {
            continue;
        }
        points.push(ForceStrainPoint { strain: state.strain, force_n });
    }
    ForceStrainCurve::model(points, voltage_v)
}

/// Parametric force/strain curve at one voltage: sweeps α from the smallest
/// feasible angle (at least `alpha_min`) up to π/2, pairing the strain from
/// [`zip_geometry`] with the force from [`force_at`]. Output is sorted by
/// strain with non-increasing force.
pub fn force_strain_curve(
    geom: &ActuatorGeometry,
    spec: &PermittivitySpectrum,
    voltage_v: f64,
    n_points: usize,
    alpha_min: f64,
) -> Result<ForceStrainCurve, ActuatorError> {
    sweep_curve(geom, voltage_v, n_points, alpha_min, |alpha| {
        force_at(geom, spec, voltage_v, alpha)
    })
}

/// Constant-permittivity counterpart of [`force_strain_curve`].
pub fn force_strain_curve_const_eps(
    geom: &ActuatorGeometry,
    eps_r: DielectricConstant,
    voltage_v: f64,
    n_points: usize,
    alpha_min: f64,
) -> Result<ForceStrainCurve, ActuatorError> {
    sweep_curve(geom, voltage_v, n_points, alpha_min, |alpha| {
        force_at_const_eps(geom, eps_r, voltage_v, alpha)
    })
}

/// Actuator energy density (J/kg): trapezoidal integral of force over the
/// contraction distance `x = strain·L_p·num_pouches`, divided by actuator
/// mass. Pouches act in mechanical series, so contraction adds while force
/// stays that of one pouch.
pub fn actuator_energy_density(
    curve: &ForceStrainCurve,
    geom: &ActuatorGeometry,
) -> Result<f64, ActuatorError> {
    if curve.points().len() < 2 {
        return Err(ActuatorError::InsufficientPoints {
            needed: 2,
            got: curve.points().len(),
        });
    }
    let mass = geom.actuator_mass_kg();
    if !(mass > 0.0) {
        return Err(ActuatorError::ZeroMass(mass));
    }
    let scale = geom.pouch_length_m() * f64::from(geom.num_pouches());
    let mut work = 0.0;
    for w in curve.points().windows(2) {
        let dx = (w[1].strain - w[0].strain) * scale;
        work += 0.5 * (w[0].force_n + w[1].force_n) * dx;
    }
    Ok(work / mass)
}

// ---------------------------------------------------------------------------
// Supply budget
// ---------------------------------------------------------------------------

/// Average electrical power drawn from the supply when cycling a capacitive
/// load with a bipolar square drive at `f` Hz: each cycle has two half-cycles
/// that each move `½CV²` through the converter, so the dynamic term is
/// `f·C·V²/efficiency` on top of the idle draw.
pub fn supply_power(
    capacitance_f: f64,
    voltage_v: f64,
    frequency_hz: f64,
    idle_power_w: f64,
    converter_efficiency: f64,
) -> Result<f64, ActuatorError> {
    for (name, value) in [
        ("capacitance", capacitance_f),
        ("voltage", voltage_v),
        ("frequency", frequency_hz),
        ("idle power", idle_power_w),
    ] {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(ActuatorError::NegativeInput { name, value });
        }
    }
    if !(converter_efficiency > 0.0 && converter_efficiency <= 1.0) {
        return Err(ActuatorError::InvalidEfficiency(converter_efficiency));
    }
    Ok(idle_power_w + frequency_hz * capacitance_f * voltage_v * voltage_v / converter_efficiency)
}

/// Average supply power and battery runtime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupplyBudget {
    pub average_power_w: f64,
    pub runtime_h: f64,
}

/// Combines [`supply_power`] with a battery capacity (Wh) to estimate
/// runtime in hours. Errors with [`ActuatorError::ZeroPower`] when the
/// average power is zero and runtime is therefore unbounded.
pub fn supply_budget(
    capacitance_f: f64,
    voltage_v: f64,
    frequency_hz: f64,
    idle_power_w: f64,
    converter_efficiency: f64,
    battery_energy_wh: f64,
) -> Result<SupplyBudget, ActuatorError> {
    if !(battery_energy_wh >= 0.0) || !battery_energy_wh.is_finite() {
        return Err(ActuatorError::NegativeInput {
            name: "battery energy",
            value: battery_energy_wh,
        });
    }
    let average_power_w = supply_power(
        capacitance_f,
        voltage_v,
        frequency_hz,
        idle_power_w,
        converter_efficiency,
    )?;
    if average_power_w == 0.0 {
        return Err(ActuatorError::ZeroPower);
    }
    Ok(SupplyBudget {
        average_power_w,
        runtime_h: battery_energy_wh / average_power_w,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
