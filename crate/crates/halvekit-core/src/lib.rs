//! Modeling and characterization toolkit for zipping electrohydraulic
//! actuators (Peano-pouch geometry with a thin solid dielectric).
//!
//! The crate is organized around the measurement-to-model pipeline:
//!
//! - [`dielectric`] — D-E loop ingestion, discharge-branch extraction,
//!   energy-density integration, and field-dependent effective-permittivity
//!   spectra.
//! - [`actuator`] — quasi-static force/strain model, capacitance, electrical
//!   energy, voltage-reduction ratio, fill volume, actuator energy density,
//!   and supply power budgets.
//! - [`savgol`] / [`kinetics`] — Savitzky-Golay smoothing with analytic
//!   derivatives, actuation-window detection, peak strain rate, specific
//!   power, and durability metrics from displacement traces.
//! - [`sysid`] — box-constrained fitting of the analytical force/strain model
//!   to measurements and evaluation of a published closed-form approximation.
//! - [`io`] — the on-disk CSV/JSON formats shared with the command-line tool.
//!
//! All domain types are immutable values after construction and every
//! operation is a pure function, so the whole API is safe to drive from
//! concurrent workers.

// Validation guards are written `!(x > 0.0)` rather than `x <= 0.0` so that
// NaN inputs fail validation instead of slipping through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::inconsistent_digit_grouping)]

pub mod actuator;
pub mod dielectric;
pub mod io;
pub mod kinetics;
pub mod optim;
pub mod savgol;
pub mod sysid;

pub use actuator::{
    ActuatorError, ActuatorGeometry, CurveSource, DriveState, ForceStrainCurve, ForceStrainPoint,
    SupplyBudget, ZipAngle, ZipState,
};
pub use dielectric::{
    DeCurve, DeSample, DielectricConstant, DielectricError, LookupValue, PermittivitySpectrum,
    SpectrumPoint, VACUUM_PERMITTIVITY,
};
pub use kinetics::{
    DisplacementTrace, KineticReport, KineticsError, KineticsOutput, SmoothedTrace, WindowConfig,
};
pub use savgol::{SavitzkyGolay, SavitzkyGolayError};
pub use sysid::{FitConfig, FitResult, FittedParameters, OptimizerTrace, ParameterBox,
    ParameterSpec, SysidError};
