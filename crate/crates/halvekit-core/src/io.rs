//! On-disk formats: CSV tables with JSON sidecars.
//!
//! Everything on disk is in SI base units; display-unit conversions (V/µm,
//! %, W/kg) happen only in labeled report columns. Numeric output uses
//! Rust's shortest round-trip formatting, so re-reading a file reproduces
//! the exact values. Writers go through a temp-file-plus-rename so partial
//! output never lands under the final name.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use crate::actuator::{ActuatorError, ActuatorGeometry, ForceStrainCurve, ForceStrainPoint};
use crate::dielectric::{DeSample, PermittivitySpectrum, SpectrumPoint};
use crate::kinetics::TraceMeta;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: missing required column {column:?} in header {found:?}")]
    MissingColumn { path: String, column: &'static str, found: String },
    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: u64, message: String },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: file contains no data rows")]
    Empty { path: String },
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Writes bytes to `path` atomically (temp file in the same directory, then
/// rename).
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let wrap = |source| IoError::Write { path: display(path), source };
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(wrap)?;
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = dir.join(format!(".{file_name}.tmp"));
    {
        let mut f = fs::File::create(&tmp).map_err(wrap)?;
        f.write_all(contents).map_err(wrap)?;
        f.sync_all().map_err(wrap)?;
    }
    fs::rename(&tmp, path).map_err(wrap)
}

/// The JSON sidecar conventionally sits next to a CSV with the extension
/// swapped to `.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: display(path),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: display(path),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| IoError::Json {
        path: display(path),
        source,
    })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

// ---------------------------------------------------------------------------
// Generic numeric CSV
// ---------------------------------------------------------------------------

/// Reads a headered CSV and extracts the named columns, in order.
fn read_columns(
    path: &Path,
    columns: &[&'static str],
) -> Result<Vec<Vec<f64>>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut indices = Vec::with_capacity(columns.len());
    for column in columns {
        let idx = headers.iter().position(|h| h == *column).ok_or_else(|| {
            IoError::MissingColumn {
                path: display(path),
                column,
                found: headers.iter().collect::<Vec<_>>().join(","),
            }
        })?;
        indices.push(idx);
    }

    let mut out = vec![Vec::new(); columns.len()];
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or_default();
        for (slot, &idx) in indices.iter().enumerate() {
            let field = record.get(idx).ok_or_else(|| IoError::Malformed {
                path: display(path),
                line,
                message: format!("row has no column {}", columns[slot]),
            })?;
            let value: f64 = field.parse().map_err(|_| IoError::Malformed {
                path: display(path),
                line,
                message: format!("cannot parse {field:?} as a number in column {}", columns[slot]),
            })?;
            out[slot].push(value);
        }
    }
    if out[0].is_empty() {
        return Err(IoError::Empty { path: display(path) });
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> IoError {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(source) = e.into_kind() {
                IoError::Read { path: display(path), source }
            } else {
                unreachable!()
            }
        }
        _ => IoError::Malformed {
            path: display(path),
            line: e.position().map(|p| p.line()).unwrap_or_default(),
            message: e.to_string(),
        },
    }
}

fn format_csv(header: &str, rows: impl Iterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                text.push(',');
            }
            text.push_str(&format!("{v}"));
            first = false;
        }
        text.push('\n');
    }
    text.into_bytes()
}

/// Writes a labeled numeric table.
pub fn write_table(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), IoError> {
    write_atomic(path, &format_csv(header, rows))
}

// ---------------------------------------------------------------------------
// D-E loops and spectra
// ---------------------------------------------------------------------------

/// Material and frequency sidecar for a D-E loop or spectrum CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSidecar {
    pub material: String,
    pub frequency_hz: f64,
}

/// Reads a D-E loop CSV with header `E_V_per_m,D_C_per_m2`.
pub fn read_de_samples(path: &Path) -> Result<Vec<DeSample>, IoError> {
    let cols = read_columns(path, &["E_V_per_m", "D_C_per_m2"])?;
    Ok(cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(&field, &displacement)| DeSample { field, displacement })
        .collect())
}

/// Reads a spectrum CSV with header `E_V_per_m,eps_eff`.
pub fn read_spectrum_points(path: &Path) -> Result<Vec<SpectrumPoint>, IoError> {
    let cols = read_columns(path, &["E_V_per_m", "eps_eff"])?;
    Ok(cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(&field_amplitude, &eps_eff)| SpectrumPoint { field_amplitude, eps_eff })
        .collect())
}

/// Writes a spectrum CSV (`E_V_per_m,eps_eff`) and its JSON sidecar.
pub fn write_spectrum(path: &Path, spectrum: &PermittivitySpectrum) -> Result<(), IoError> {
    write_table(
        path,
        "E_V_per_m,eps_eff",
        spectrum
            .points()
            .iter()
            .map(|p| vec![p.field_amplitude, p.eps_eff]),
    )?;
    write_json(
        &sidecar_path(path),
        &LoopSidecar {
            material: spectrum.material().to_string(),
            frequency_hz: spectrum.frequency_hz(),
        },
    )
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

fn default_fill_fraction() -> f64 {
    0.95
}

fn default_num_pouches() -> u32 {
    1
}

/// Geometry JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryFile {
    pub w_m: f64,
    #[serde(rename = "Lp_m")]
    pub lp_m: f64,
    #[serde(rename = "Le_m")]
    pub le_m: f64,
    pub t_m: f64,
    #[serde(default = "default_fill_fraction")]
    pub fill_fraction: f64,
    #[serde(default = "default_num_pouches")]
    pub num_pouches: u32,
    pub mass_kg: f64,
}

impl GeometryFile {
    pub fn to_geometry(&self) -> Result<ActuatorGeometry, ActuatorError> {
        ActuatorGeometry::new(
            self.w_m,
            self.lp_m,
            self.le_m,
            self.t_m,
            self.fill_fraction,
            self.num_pouches,
            self.mass_kg,
        )
    }
}

// ---------------------------------------------------------------------------
// Force/strain curves
// ---------------------------------------------------------------------------

/// Sidecar written next to exported force/strain curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSidecar {
    #[serde(rename = "voltage_V")]
    pub voltage_v: f64,
    /// SHA-256 of the spectrum CSV the curve was generated from.
    pub spectrum_sha256: String,
    pub alpha_min_rad: f64,
    pub alpha_max_rad: f64,
}

/// Sidecar accompanying measured force/strain data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSidecar {
    #[serde(rename = "voltage_V")]
    pub voltage_v: f64,
    /// Optional path to the geometry JSON the measurement refers to.
    #[serde(default)]
    pub geometry: Option<String>,
}

/// Reads a force/strain CSV with header `strain,force_N`.
pub fn read_force_strain_points(path: &Path) -> Result<Vec<ForceStrainPoint>, IoError> {
    let cols = read_columns(path, &["strain", "force_N"])?;
    Ok(cols[0]
        .iter()
        .zip(&cols[1])
        .map(|(&strain, &force_n)| ForceStrainPoint { strain, force_n })
        .collect())
}

/// Writes a force/strain CSV (`strain,force_N`).
pub fn write_force_strain_csv(path: &Path, curve: &ForceStrainCurve) -> Result<(), IoError> {
    write_table(
        path,
        "strain,force_N",
        curve.points().iter().map(|p| vec![p.strain, p.force_n]),
    )
}

// ---------------------------------------------------------------------------
// Displacement traces
// ---------------------------------------------------------------------------

/// Trace sidecar schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSidecar {
    pub load_kg: f64,
    pub actuator_mass_kg: f64,
    pub actuator_length_m: f64,
    #[serde(rename = "voltage_V")]
    pub voltage_v: f64,
}

impl TraceSidecar {
    pub fn to_meta(&self) -> TraceMeta {
        TraceMeta {
            load_mass_kg: self.load_kg,
            actuator_mass_kg: self.actuator_mass_kg,
            actuator_length_m: self.actuator_length_m,
            voltage_v: self.voltage_v,
        }
    }
}

/// Reads a trace CSV with header `time_s,contraction_m`.
pub fn read_trace_samples(path: &Path) -> Result<(Vec<f64>, Vec<f64>), IoError> {
    let mut cols = read_columns(path, &["time_s", "contraction_m"])?;
    let contraction = cols.pop().unwrap();
    let time = cols.pop().unwrap();
    Ok((time, contraction))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::PermittivitySpectrum;

    #[test]
    fn de_loop_round_trip_and_missing_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("loop.csv");
        write_table(
            &path,
            "E_V_per_m,D_C_per_m2",
            [vec![0.0, 0.0], vec![1e8, 0.003], vec![2e8, 0.006]].into_iter(),
        )
        .unwrap();
        let samples = read_de_samples(&path).unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples[2].field, 2e8);
        assert_eq!(samples[2].displacement, 0.006);

        let bad = dir.path().join("bad.csv");
        write_atomic(&bad, b"E_V_per_m,D\n1,2\n").unwrap();
        let err = read_de_samples(&bad).unwrap_err();
        assert!(matches!(err, IoError::MissingColumn { column: "D_C_per_m2", .. }));
        assert!(err.to_string().contains("D_C_per_m2"));
    }

    #[test]
    fn malformed_number_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("loop.csv");
        write_atomic(&path, b"E_V_per_m,D_C_per_m2\n1,2\nx,3\n").unwrap();
        let err = read_de_samples(&path).unwrap_err();
        match err {
            IoError::Malformed { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn spectrum_round_trip_preserves_exact_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spectrum.csv");
        let spec = PermittivitySpectrum::new(
            vec![
                SpectrumPoint { field_amplitude: 3e7, eps_eff: 39.5 },
                SpectrumPoint { field_amplitude: 1.234_567_890_123e8, eps_eff: 17.25 },
                SpectrumPoint { field_amplitude: 3e8, eps_eff: 10.0 },
            ],
            2.0,
            "terpolymer",
        )
        .unwrap();
        write_spectrum(&path, &spec).unwrap();

        let points = read_spectrum_points(&path).unwrap();
        assert_eq!(points, spec.points());
        let sidecar: LoopSidecar = read_json(&sidecar_path(&path)).unwrap();
        assert_eq!(sidecar.material, "terpolymer");
        assert_eq!(sidecar.frequency_hz, 2.0);
    }

    #[test]
    fn geometry_defaults_apply() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("geom.json");
        write_atomic(
            &path,
            br#"{ "w_m": 0.06, "Lp_m": 0.017, "Le_m": 0.009, "t_m": 5e-6, "mass_kg": 0.002 }"#,
        )
        .unwrap();
        let file: GeometryFile = read_json(&path).unwrap();
        assert_eq!(file.fill_fraction, 0.95);
        assert_eq!(file.num_pouches, 1);
        let geom = file.to_geometry().unwrap();
        assert_eq!(geom.pouch_width_m(), 0.06);
    }

    #[test]
    fn trace_sidecar_maps_to_meta() {
        let sidecar = TraceSidecar {
            load_kg: 0.2,
            actuator_mass_kg: 0.002,
            actuator_length_m: 0.017,
            voltage_v: 1300.0,
        };
        let text = serde_json::to_string(&sidecar).unwrap();
        assert!(text.contains("voltage_V"));
        let meta = sidecar.to_meta();
        assert_eq!(meta.load_mass_kg, 0.2);
        assert_eq!(meta.voltage_v, 1300.0);
    }

    #[test]
    fn atomic_write_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("x.csv");
        write_atomic(&path, b"a,b\n1,2\n").unwrap();
        assert!(path.exists());
        let entries: Vec<_> = fs::read_dir(path.parent().unwrap())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        assert_eq!(entries, vec!["x.csv"]);
    }
}
