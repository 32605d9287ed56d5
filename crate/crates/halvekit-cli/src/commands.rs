//! The four pipeline commands. Each command ingests its inputs, runs the
//! corresponding core pipeline, writes plot-ready CSV/JSON outputs, and
//! always leaves a manifest in the output directory, also when it fails.

use std::path::{Path, PathBuf};

use serde_json::json;

use halvekit_core::actuator::{
    actuator_energy_density, force_strain_curve, ActuatorGeometry, ForceStrainCurve,
};
use halvekit_core::dielectric::{build_spectrum, DeCurve, PermittivitySpectrum};
use halvekit_core::io::{self, CurveSidecar, GeometryFile, LoopSidecar, MeasurementSidecar,
    TraceSidecar};
use halvekit_core::kinetics::{self, DisplacementTrace, WindowConfig};
use halvekit_core::sysid::{self, FitConfig, ParameterBox, ParameterSpec};

use crate::manifest::{hash_file, ManifestBuilder};
use crate::{CliError, FitArgs, KineticsArgs, PermittivityArgs, PredictArgs};

/// Runs `body`, then writes the manifest either way, reporting the first
/// error of body and manifest-write in that order.
fn with_manifest<F>(mut manifest: ManifestBuilder, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut ManifestBuilder) -> Result<(), CliError>,
{
    match body(&mut manifest) {
        Ok(()) => {
            manifest.finish(None).map_err(CliError::from)?;
            Ok(())
        }
        Err(err) => {
            // Best effort: the failure being reported wins over manifest
            // write problems.
            let _ = manifest.finish(Some(err.to_string()));
            Err(err)
        }
    }
}

fn sidecar_or_default(explicit: &Option<PathBuf>, data_path: &Path) -> PathBuf {
    explicit
        .clone()
        .unwrap_or_else(|| io::sidecar_path(data_path))
}

pub fn cmd_permittivity(args: &PermittivityArgs) -> Result<(), CliError> {
    let config = json!({
        "frequency_hz": args.frequency_hz,
        "material": args.material,
    });
    let manifest = ManifestBuilder::new(&args.out, config, None);
    with_manifest(manifest, |manifest| {
        let mut curves: Vec<DeCurve> = Vec::with_capacity(args.de_files.len());
        for path in &args.de_files {
            manifest.add_input(path)?;
            let samples = io::read_de_samples(path)?;
            let sidecar_file = io::sidecar_path(path);
            let sidecar: Option<LoopSidecar> = if sidecar_file.exists() {
                manifest.add_input(&sidecar_file)?;
                Some(io::read_json(&sidecar_file)?)
            } else {
                None
            };
            let material = args
                .material
                .clone()
                .or_else(|| sidecar.as_ref().map(|s| s.material.clone()))
                .ok_or_else(|| {
                    CliError::Ingest(format!(
                        "{}: no material given (use --material or a JSON sidecar)",
                        path.display()
                    ))
                })?;
            let frequency = args
                .frequency_hz
                .or(sidecar.as_ref().map(|s| s.frequency_hz))
                .ok_or_else(|| {
                    CliError::Ingest(format!(
                        "{}: no frequency given (use --frequency-hz or a JSON sidecar)",
                        path.display()
                    ))
                })?;
            curves.push(DeCurve::new(samples, frequency, material)?);
        }

        let spectrum = build_spectrum(&curves)?;
        let out_csv = args.out.join("spectrum.csv");
        io::write_spectrum(&out_csv, &spectrum)?;
        manifest.add_output(&out_csv)?;
        manifest.add_output(&io::sidecar_path(&out_csv))?;
        println!(
            "spectrum: {} points for {} at {} Hz -> {}",
            spectrum.points().len(),
            spectrum.material(),
            spectrum.frequency_hz(),
            out_csv.display()
        );
        Ok(())
    })
}

fn load_spectrum(
    path: &Path,
    manifest: &mut ManifestBuilder,
) -> Result<PermittivitySpectrum, CliError> {
    manifest.add_input(path)?;
    let points = io::read_spectrum_points(path)?;
    let sidecar_file = io::sidecar_path(path);
    let (material, frequency) = if sidecar_file.exists() {
        manifest.add_input(&sidecar_file)?;
        let sidecar: LoopSidecar = io::read_json(&sidecar_file)?;
        (sidecar.material, sidecar.frequency_hz)
    } else {
        manifest.warn(format!(
            "{}: no sidecar found; material/frequency metadata unavailable",
            path.display()
        ));
        ("unspecified".to_string(), 0.0)
    };
    Ok(PermittivitySpectrum::new(points, frequency, material)?)
}

pub fn cmd_predict(args: &PredictArgs) -> Result<(), CliError> {
    let config = json!({
        "voltages": args.voltages,
        "n_points": args.n_points,
        "alpha_min": args.alpha_min,
    });
    let manifest = ManifestBuilder::new(&args.out, config, None);
    with_manifest(manifest, |manifest| {
        manifest.add_input(&args.geometry)?;
        let geometry_file: GeometryFile = io::read_json(&args.geometry)?;
        let geom: ActuatorGeometry = geometry_file.to_geometry()?;
        let spectrum = load_spectrum(&args.spectrum, manifest)?;
        let spectrum_sha256 = hash_file(&args.spectrum)?;

        let mut density_rows: Vec<Vec<f64>> = Vec::with_capacity(args.voltages.len());
        for &voltage in &args.voltages {
            let field = voltage / geom.dielectric_thickness_m();
            if spectrum.lookup(field)?.clamped {
                manifest.warn(format!(
                    "voltage {voltage} V implies field {field} V/m outside the spectrum range; \
                     endpoint permittivity used"
                ));
            }
            let curve = force_strain_curve(&geom, &spectrum, voltage, args.n_points, args.alpha_min)?;
            let out_csv = args.out.join(format!("curve_{voltage}V.csv"));
            io::write_force_strain_csv(&out_csv, &curve)?;
            let (alpha_min_used, alpha_max) = (args.alpha_min, std::f64::consts::FRAC_PI_2);
            io::write_json(
                &io::sidecar_path(&out_csv),
                &CurveSidecar {
                    voltage_v: voltage,
                    spectrum_sha256: spectrum_sha256.clone(),
                    alpha_min_rad: alpha_min_used,
                    alpha_max_rad: alpha_max,
                },
            )?;
            manifest.add_output(&out_csv)?;
            manifest.add_output(&io::sidecar_path(&out_csv))?;

            let density = actuator_energy_density(&curve, &geom)?;
            density_rows.push(vec![field / 1e6, density]);
        }

        let density_csv = args.out.join("energy_density.csv");
        io::write_table(&density_csv, "E_V_per_um,u_J_per_kg", density_rows.into_iter())?;
        manifest.add_output(&density_csv)?;
        println!(
            "predicted {} curve(s) -> {}",
            args.voltages.len(),
            args.out.display()
        );
        Ok(())
    })
}

pub fn cmd_kinetics(args: &KineticsArgs) -> Result<(), CliError> {
    let config = json!({
        "window": args.window,
        "order": args.order,
        "noise_floor_m": args.noise_floor,
    });
    let manifest = ManifestBuilder::new(&args.out, config, None);
    with_manifest(manifest, |manifest| {
        manifest.add_input(&args.trace)?;
        let (time, contraction) = io::read_trace_samples(&args.trace)?;
        let sidecar_file = sidecar_or_default(&args.sidecar, &args.trace);
        manifest.add_input(&sidecar_file)?;
        let sidecar: TraceSidecar = io::read_json(&sidecar_file)?;

        let trace = DisplacementTrace::new(time, contraction, sidecar.to_meta())?;
        if trace.was_resampled() {
            manifest.warn("trace sampling exceeded 1% jitter; linearly resampled to the median period");
        }
        let window_config = WindowConfig {
            noise_floor_m: args.noise_floor,
            ..WindowConfig::default()
        };
        let out = kinetics::analyze(&trace, args.window, args.order, &window_config)?;

        let report_path = args.out.join("report.json");
        io::write_json(&report_path, &out.report)?;
        manifest.add_output(&report_path)?;

        let s = &out.smoothed;
        for (name, header, series) in [
            ("contraction.csv", "time_s,contraction_m", &s.contraction_m),
            ("velocity.csv", "time_s,velocity_m_per_s", &s.velocity_m_per_s),
            (
                "acceleration.csv",
                "time_s,acceleration_m_per_s2",
                &s.acceleration_m_per_s2,
            ),
        ] {
            let path = args.out.join(name);
            io::write_table(
                &path,
                header,
                s.time_s.iter().zip(series).map(|(&t, &v)| vec![t, v]),
            )?;
            manifest.add_output(&path)?;
        }
        let power_path = args.out.join("specific_power.csv");
        io::write_table(
            &power_path,
            "time_s,specific_power_W_per_kg",
            out.specific_power.iter().map(|&(t, p)| vec![t, p]),
        )?;
        manifest.add_output(&power_path)?;

        println!(
            "peak strain rate {:.1} %/s, peak {:.1} W/kg, average {:.1} W/kg -> {}",
            out.report.peak_strain_rate_pct_per_s,
            out.report.peak_specific_power_w_per_kg,
            out.report.avg_specific_power_w_per_kg,
            args.out.display()
        );
        Ok(())
    })
}

pub fn cmd_fit(args: &FitArgs) -> Result<(), CliError> {
    let config = json!({
        "seed": args.seed,
        "restarts": args.restarts,
        "knots": args.knots,
        "max_iterations": args.max_iterations,
    });
    let manifest = ManifestBuilder::new(&args.out, config, Some(args.seed));
    with_manifest(manifest, |manifest| {
        manifest.add_input(&args.measurements)?;
        let points = io::read_force_strain_points(&args.measurements)?;
        let sidecar_file = sidecar_or_default(&args.sidecar, &args.measurements);
        manifest.add_input(&sidecar_file)?;
        let sidecar: MeasurementSidecar = io::read_json(&sidecar_file)?;
        let data = ForceStrainCurve::measurement(points, sidecar.voltage_v)?;

        manifest.add_input(&args.parameter_box)?;
        let specs: Vec<ParameterSpec> = io::read_json(&args.parameter_box)?;
        let boxes = ParameterBox::new(specs, args.knots)?;

        let fit_config = FitConfig {
            restarts: args.restarts,
            max_iterations: args.max_iterations,
            ..FitConfig::default()
        };
        let mut result = sysid::fit_force_strain(&data, &boxes, args.seed, &fit_config)?;
        if !result.trace.converged {
            manifest.warn(format!(
                "optimizer hit the iteration cap with objective {:.3e} N^2; best-effort result emitted",
                result.trace.final_objective
            ));
        }

        // Optional geometry reference lets the fit report a measured energy
        // density alongside the curve.
        if let Some(geometry_ref) = &sidecar.geometry {
            let geometry_path = sidecar_file
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(geometry_ref);
            manifest.add_input(&geometry_path)?;
            let geometry_file: GeometryFile = io::read_json(&geometry_path)?;
            let geom = geometry_file.to_geometry()?;
            result.measured_energy_density_j_per_kg =
                Some(sysid::energy_density_from_fit(&result, &geom)?);
        }

        let fit_path = args.out.join("fit.json");
        io::write_json(&fit_path, &result)?;
        manifest.add_output(&fit_path)?;

        let overlay_path = args.out.join("overlay.csv");
        io::write_table(
            &overlay_path,
            "strain,measured_force_N,fitted_force_N",
            data.points().iter().map(|p| {
                vec![p.strain, p.force_n, result.fitted_curve.force_at_strain(p.strain)]
            }),
        )?;
        manifest.add_output(&overlay_path)?;

        println!(
            "fit rmse {:.4} N over {} points (seed {}) -> {}",
            result.residual_rmse_n,
            data.points().len(),
            args.seed,
            args.out.display()
        );
        Ok(())
    })
}
