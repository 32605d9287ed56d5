//! System identification for the force/strain model.
//!
//! Fits the analytical zipping model to measured force/strain data with a
//! box-constrained derivative-free search. Eight physical parameters
//! (`w, t, eps0, eps_r, V, alpha0, Le, Lp`) plus the half-central angles that
//! parametrize the fitted curve are normalized into the unit cube and clamped
//! there on every step. Restarts launch from seeded low-discrepancy points,
//! so identical `(data, box, seed)` triples yield bit-identical results.
//!
//! The module also evaluates a published closed-form force/strain
//! approximation `F(ε) = 2.81/sin(0.17(ε − 0.23)) − 2.86` (ε in percent,
//! valid on roughly [1, 10]%) and measures its deviation from a fitted curve.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actuator::{
    self, ActuatorError, ActuatorGeometry, ForceStrainCurve, ForceStrainPoint,
};
use crate::optim::{minimize_unit_box, NelderMeadOptions, NelderMeadResult, RestartPoints};

/// Canonical fit-parameter names, in vector order.
pub const PARAMETER_NAMES: [&str; 8] = ["w", "t", "eps0", "eps_r", "V", "alpha0", "Le", "Lp"];

/// Smallest half-central angle admitted during fitting (rad).
const ALPHA_FLOOR: f64 = 1e-3;

/// Lower edge of the closed-form validity window (% strain).
pub const CLOSED_FORM_MIN_STRAIN_PCT: f64 = 1.0;

/// Upper edge of the closed-form validity window (% strain).
pub const CLOSED_FORM_MAX_STRAIN_PCT: f64 = 10.0;

#[derive(Debug, Error)]
pub enum SysidError {
    #[error("measured curve has {0} points, need at least 4 to fit")]
    InsufficientData(usize),
    #[error("parameter box is missing {0:?}")]
    MissingParameter(&'static str),
    #[error("unknown parameter {0:?} in box")]
    UnknownParameter(String),
    #[error("parameter {0:?} appears more than once in box")]
    DuplicateParameter(String),
    #[error("parameter {name:?} has invalid bounds [{min}, {max}]")]
    InvalidBound { name: String, min: f64, max: f64 },
    #[error("parameter {name:?} initial value {initial} lies outside [{min}, {max}]")]
    InitialOutOfBounds { name: String, initial: f64, min: f64, max: f64 },
    #[error("need at least 2 curve knots, got {0}")]
    InvalidKnotCount(usize),
    #[error("no candidate inside the box produces a usable curve")]
    InfeasibleBox,
    #[error("strain {0}% is outside the closed form's validity window [{CLOSED_FORM_MIN_STRAIN_PCT}, {CLOSED_FORM_MAX_STRAIN_PCT}]%")]
    OutOfDomain(f64),
    #[error("fitted curve covers strains [{lo}, {hi}] but validation needs [0.01, 0.10]")]
    DomainMismatch { lo: f64, hi: f64 },
    #[error(transparent)]
    Actuator(#[from] ActuatorError),
}

/// Bounds and starting value for one fit parameter. Degenerate bounds
/// (`min == max`) pin the parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub initial: f64,
}

impl ParameterSpec {
    pub fn new(name: impl Into<String>, min: f64, max: f64, initial: f64) -> Self {
        Self { name: name.into(), min, max, initial }
    }

    fn pinned(&self) -> bool {
        self.min == self.max
    }
}

/// Boxes for the eight physical parameters plus the number of half-central
/// angle knots that parametrize the fitted curve. Normalized coordinates in
/// [0, 1] map affinely onto each parameter's bounds; knots map onto
/// `[alpha0, π/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterBox {
    specs: [ParameterSpec; 8],
    knot_count: usize,
}

impl ParameterBox {
    pub fn new(specs: Vec<ParameterSpec>, knot_count: usize) -> Result<Self, SysidError> {
        if knot_count < 2 {
            return Err(SysidError::InvalidKnotCount(knot_count));
        }
        let mut slots: [Option<ParameterSpec>; 8] = Default::default();
        for spec in specs {
            let idx = PARAMETER_NAMES
                .iter()
                .position(|n| *n == spec.name)
                .ok_or_else(|| SysidError::UnknownParameter(spec.name.clone()))?;
            if slots[idx].is_some() {
                return Err(SysidError::DuplicateParameter(spec.name));
            }
            if !(spec.min <= spec.max) || !spec.min.is_finite() || !spec.max.is_finite() {
                return Err(SysidError::InvalidBound {
                    name: spec.name,
                    min: spec.min,
                    max: spec.max,
                });
            }
            if !(spec.initial >= spec.min && spec.initial <= spec.max) {
                return Err(SysidError::InitialOutOfBounds {
                    name: spec.name,
                    initial: spec.initial,
                    min: spec.min,
                    max: spec.max,
                });
            }
            slots[idx] = Some(spec);
        }
        for (i, slot) in slots.iter().enumerate() {
            if slot.is_none() {
                return Err(SysidError::MissingParameter(PARAMETER_NAMES[i]));
            }
        }
        Ok(Self {
            specs: slots.map(Option::unwrap),
            knot_count,
        })
    }

    pub fn specs(&self) -> &[ParameterSpec; 8] {
        &self.specs
    }

    pub fn spec(&self, name: &str) -> Option<&ParameterSpec> {
        self.specs.iter().find(|s| s.name == name)
    }

    pub fn knot_count(&self) -> usize {
        self.knot_count
    }

    /// Physical value of parameter `idx` for a normalized coordinate,
    /// clamped into its bounds.
    pub fn denormalize(&self, idx: usize, u: f64) -> f64 {
        let s = &self.specs[idx];
        (s.min + u.clamp(0.0, 1.0) * (s.max - s.min)).clamp(s.min, s.max)
    }

    /// Normalized coordinate of a physical value; pinned parameters map to
    /// 0.5 by convention.
    pub fn normalize(&self, idx: usize, value: f64) -> f64 {
        let s = &self.specs[idx];
        if s.pinned() {
            0.5
        } else {
            ((value - s.min) / (s.max - s.min)).clamp(0.0, 1.0)
        }
    }
}

/// Fit machinery settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Independent optimizer starts (the first uses the box initials).
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iterations: usize,
    /// Stop a restart when the simplex objective spread falls below this (N²).
    pub objective_tolerance: f64,
    /// Oil fill fraction assumed by the candidate geometry.
    pub fill_fraction: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 5000,
            objective_tolerance: 1e-10,
            fill_fraction: 0.95,
        }
    }
}

/// Physical parameter values of a fit candidate or result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedParameters {
    pub width_m: f64,
    pub thickness_m: f64,
    pub eps0_f_per_m: f64,
    pub eps_r: f64,
    pub voltage_v: f64,
    pub alpha0_rad: f64,
    pub electrode_length_m: f64,
    pub pouch_length_m: f64,
    /// Half-central angle knots of the fitted curve (rad), ascending.
    pub knots_rad: Vec<f64>,
}

/// Bookkeeping from the optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerTrace {
    pub seed: u64,
    pub iterations: usize,
    pub evaluations: usize,
    pub final_objective: f64,
    /// Running best objective after each restart; non-increasing.
    pub best_objective_by_restart: Vec<f64>,
    /// False when the winning restart hit the iteration cap with the
    /// objective still above tolerance. Reported, not fatal.
    pub converged: bool,
}

/// Result of a force/strain fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub parameters: FittedParameters,
    pub residual_rmse_n: f64,
    pub fitted_curve: ForceStrainCurve,
    pub measured_energy_density_j_per_kg: Option<f64>,
    pub trace: OptimizerTrace,
}

/// Candidate parameter vector in physical units.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    w: f64,
    t: f64,
    eps0: f64,
    eps_r: f64,
    v: f64,
    alpha0: f64,
    le: f64,
    lp: f64,
}

impl Candidate {
    fn feasible(&self) -> bool {
        self.w > 0.0
            && self.t > 0.0
            && self.eps0 > 0.0
            && self.eps_r > 0.0
            && self.v > 0.0
            && self.le > 0.0
            && self.le < self.lp
            && [self.w, self.t, self.eps0, self.eps_r, self.v, self.alpha0, self.le, self.lp]
                .iter()
                .all(|v| v.is_finite())
    }
}

/// Evaluates the model curve of a candidate at its knot angles: one
/// (strain, force) point per feasible knot, sorted by strain.
fn candidate_points(
    c: &Candidate,
    knots_u: &[f64],
    fill_fraction: f64,
) -> Option<Vec<ForceStrainPoint>> {
    if !c.feasible() {
        return None;
    }
    let alpha_lo = c.alpha0.clamp(ALPHA_FLOOR, FRAC_PI_2 - 1e-9);
    let field = c.v / c.t;
    let free = c.lp - c.le;
    let fluid_volume = fill_fraction * c.w * free * free / PI;
    let amplitude = c.w * c.t * c.eps0 * c.eps_r * field * field;

    let mut points: Vec<ForceStrainPoint> = Vec::with_capacity(knots_u.len());
    for &u in knots_u {
        let alpha = (alpha_lo + u.clamp(0.0, 1.0) * (FRAC_PI_2 - alpha_lo)).min(FRAC_PI_2);
        let Ok(state) = actuator::zip_state_raw(fluid_volume, c.w, c.lp, c.le, alpha) else {
            continue; // volume does not fit at this angle
        };
        let cos = if alpha >= FRAC_PI_2 { 0.0 } else { alpha.cos() };
        let force_n = amplitude * cos / (1.0 - cos);
        if !force_n.is_finite() || force_n < 0.0 {
            continue;
        }
        points.push(ForceStrainPoint { strain: state.strain, force_n });
    }
    points.sort_by(|a, b| a.strain.total_cmp(&b.strain));
    points.dedup_by(|b, a| b.strain <= a.strain);
    if points.len() < 2 {
        None
    } else {
        Some(points)
    }
}

struct Workspace<'a> {
    boxes: &'a ParameterBox,
    data: Vec<(f64, f64)>,
    fill_fraction: f64,
    /// Indices (into the canonical 8) of parameters that are actually free.
    free: Vec<usize>,
}

impl<'a> Workspace<'a> {
    fn new(data: &ForceStrainCurve, boxes: &'a ParameterBox, fill_fraction: f64) -> Self {
        let free = (0..8).filter(|&i| !boxes.specs[i].pinned()).collect();
        Self {
            boxes,
            data: data.points().iter().map(|p| (p.strain, p.force_n)).collect(),
            fill_fraction,
            free,
        }
    }

    /// With every physical parameter pinned there is nothing to search;
    /// the knots stay on their initial grid and the single candidate is
    /// evaluated as-is.
    fn dim(&self) -> usize {
        if self.free.is_empty() {
            0
        } else {
            self.free.len() + self.boxes.knot_count
        }
    }

    fn even_knots(&self) -> Vec<f64> {
        let k = self.boxes.knot_count;
        (0..k).map(|i| i as f64 / (k - 1) as f64).collect()
    }

    fn initial(&self) -> Vec<f64> {
        let mut x: Vec<f64> = self
            .free
            .iter()
            .map(|&i| self.boxes.normalize(i, self.boxes.specs[i].initial))
            .collect();
        x.extend(self.even_knots());
        x
    }

    fn split(&self, x: &[f64]) -> (Candidate, Vec<f64>) {
        let mut values = [0.0; 8];
        for (i, spec) in self.boxes.specs.iter().enumerate() {
            values[i] = spec.min; // pinned value
        }
        for (pos, &i) in self.free.iter().enumerate() {
            values[i] = self.boxes.denormalize(i, x[pos]);
        }
        let knots = if x.len() > self.free.len() {
            x[self.free.len()..].to_vec()
        } else {
            self.even_knots()
        };
        let c = Candidate {
            w: values[0],
            t: values[1],
            eps0: values[2],
            eps_r: values[3],
            v: values[4],
            alpha0: values[5],
            le: values[6],
            lp: values[7],
        };
        (c, knots)
    }

    /// Sum of squared force residuals at the measured strains.
    fn objective(&self, x: &[f64]) -> f64 {
        let (candidate, knots) = self.split(x);
        match candidate_points(&candidate, &knots, self.fill_fraction) {
            None => f64::INFINITY,
            Some(points) => self
                .data
                .iter()
                .map(|&(s, f)| {
                    let r = actuator::interp_force(&points, s) - f;
                    r * r
                })
                .sum(),
        }
    }
}

/// Fits the analytical model to a measured force/strain curve.
///
/// Minimizes the sum of squared force residuals at the measured strains over
/// the normalized box, returning the best of `config.restarts` independent
/// starts (the first from the box initials, the rest from seeded
/// low-discrepancy points). Deterministic for identical
/// `(data, box, seed, config)`.
pub fn fit_force_strain(
    data: &ForceStrainCurve,
    boxes: &ParameterBox,
    seed: u64,
    config: &FitConfig,
) -> Result<FitResult, SysidError> {
    if data.points().len() < 4 {
        return Err(SysidError::InsufficientData(data.points().len()));
    }
    let ws = Workspace::new(data, boxes, config.fill_fraction);
    let dim = ws.dim();
    let options = NelderMeadOptions {
        max_iterations: config.max_iterations,
        objective_tolerance: config.objective_tolerance,
        ..NelderMeadOptions::default()
    };

    let runs: Vec<NelderMeadResult> = if dim == 0 {
        vec![minimize_unit_box(&|x: &[f64]| ws.objective(x), &[], &options)]
    } else {
        let generator = RestartPoints::new(dim, seed);
        let starts: Vec<Vec<f64>> = (0..config.restarts.max(1))
            .map(|k| if k == 0 { ws.initial() } else { generator.point(k) })
            .collect();
        starts
            .par_iter()
            .map(|x0| minimize_unit_box(&|x: &[f64]| ws.objective(x), x0, &options))
            .collect()
    };

    let mut best_idx = 0;
    let mut best_objective_by_restart = Vec::with_capacity(runs.len());
    for (i, run) in runs.iter().enumerate() {
        if run.objective < runs[best_idx].objective {
            best_idx = i;
        }
        best_objective_by_restart.push(runs[best_idx].objective);
    }
    let best = &runs[best_idx];
    let (candidate, knots_u) = ws.split(&best.x);
    let points =
        candidate_points(&candidate, &knots_u, config.fill_fraction).ok_or(SysidError::InfeasibleBox)?;
    if !best.objective.is_finite() {
        return Err(SysidError::InfeasibleBox);
    }
    let fitted_curve = ForceStrainCurve::model(points, candidate.v)?;

    let alpha_lo = candidate.alpha0.clamp(ALPHA_FLOOR, FRAC_PI_2 - 1e-9);
    let mut knots_rad: Vec<f64> = knots_u
        .iter()
        .map(|u| alpha_lo + u.clamp(0.0, 1.0) * (FRAC_PI_2 - alpha_lo))
        .collect();
    knots_rad.sort_by(f64::total_cmp);

    Ok(FitResult {
        parameters: FittedParameters {
            width_m: candidate.w,
            thickness_m: candidate.t,
            eps0_f_per_m: candidate.eps0,
            eps_r: candidate.eps_r,
            voltage_v: candidate.v,
            alpha0_rad: candidate.alpha0,
            electrode_length_m: candidate.le,
            pouch_length_m: candidate.lp,
            knots_rad,
        },
        residual_rmse_n: (best.objective / ws.data.len() as f64).sqrt(),
        fitted_curve,
        measured_energy_density_j_per_kg: None,
        trace: OptimizerTrace {
            seed,
            iterations: runs.iter().map(|r| r.iterations).sum(),
            evaluations: runs.iter().map(|r| r.evaluations).sum(),
            final_objective: best.objective,
            best_objective_by_restart,
            converged: best.converged || best.objective <= config.objective_tolerance,
        },
    })
}

/// Actuator energy density of the fitted curve (J/kg), delegating to the
/// model-side integrator.
pub fn energy_density_from_fit(
    result: &FitResult,
    geom: &ActuatorGeometry,
) -> Result<f64, SysidError> {
    Ok(actuator::actuator_energy_density(&result.fitted_curve, geom)?)
}

/// Evaluates the published closed-form force/strain approximation at a
/// strain in percent. Errors outside the validity window, which also guards
/// the pole of the sine at 0.23%.
pub fn closed_form_eval(strain_percent: f64) -> Result<f64, SysidError> {
    if !(CLOSED_FORM_MIN_STRAIN_PCT..=CLOSED_FORM_MAX_STRAIN_PCT).contains(&strain_percent) {
        return Err(SysidError::OutOfDomain(strain_percent));
    }
    Ok(2.81 / (0.17 * (strain_percent - 0.23)).sin() - 2.86)
}

/// Largest absolute deviation between the closed form and a fitted curve
/// over a 100-point grid on [1, 10]% strain. The curve must cover the whole
/// window.
pub fn closed_form_max_deviation(curve: &ForceStrainCurve) -> Result<f64, SysidError> {
    let (lo, hi) = curve.strain_range();
    if lo > CLOSED_FORM_MIN_STRAIN_PCT / 100.0 + 1e-12
        || hi < CLOSED_FORM_MAX_STRAIN_PCT / 100.0 - 1e-12
    {
        return Err(SysidError::DomainMismatch { lo, hi });
    }
    let mut max_dev = 0.0f64;
    for i in 0..100 {
        let pct = CLOSED_FORM_MIN_STRAIN_PCT
            + (CLOSED_FORM_MAX_STRAIN_PCT - CLOSED_FORM_MIN_STRAIN_PCT) * i as f64 / 99.0;
        let dev = (closed_form_eval(pct)? - curve.force_at_strain(pct / 100.0)).abs();
        max_dev = max_dev.max(dev);
    }
    Ok(max_dev)
}

/// See [`closed_form_max_deviation`]; takes the fitted curve from a result.
pub fn validate_closed_form(result: &FitResult) -> Result<f64, SysidError> {
    closed_form_max_deviation(&result.fitted_curve)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
