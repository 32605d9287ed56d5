//! End-to-end tests driving the compiled `halvekit` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use halvekit_core::dielectric::VACUUM_PERMITTIVITY;

fn halvekit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halvekit"))
        .args(args)
        .current_dir(dir)
        .env("HALVEKIT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

/// Linear-dielectric loop traced up then down, D = ε0·εr·E.
fn write_linear_loop(path: &Path, eps_r: f64, e_max: f64, n: usize) {
    let mut text = String::from("E_V_per_m,D_C_per_m2\n");
    let mut push = |i: usize| {
        let e = e_max * i as f64 / n as f64;
        let d = VACUUM_PERMITTIVITY * eps_r * e;
        text.push_str(&format!("{e},{d}\n"));
    };
    for i in 0..=n {
        push(i);
    }
    for i in (0..n).rev() {
        push(i);
    }
    write(path, &text);
}

fn write_sidecar(path: &Path, material: &str, frequency_hz: f64) {
    write(
        path,
        &format!(r#"{{ "material": "{material}", "frequency_hz": {frequency_hz} }}"#),
    );
}

fn read_spectrum(path: &Path) -> Vec<(f64, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|line| {
            let mut it = line.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn permittivity_flat_spectrum_from_linear_loops() {
    let dir = tempfile::tempdir().unwrap();
    for (i, e_max) in [1e8, 2e8, 3e8].iter().enumerate() {
        let csv = dir.path().join(format!("loop{i}.csv"));
        write_linear_loop(&csv, 3.3, *e_max, 400);
        write_sidecar(&csv.with_extension("json"), "linear", 2.0);
    }
    let out = halvekit(
        &["permittivity", "loop0.csv", "loop1.csv", "loop2.csv", "--out", "run"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let points = read_spectrum(&dir.path().join("run/spectrum.csv"));
    assert_eq!(points.len(), 3);
    for (e, eps) in &points {
        assert!(*e > 0.0);
        assert!((eps - 3.3).abs() < 1e-6, "eps {eps}");
    }
    assert!(dir.path().join("run/manifest.json").exists());
    assert!(dir.path().join("run/spectrum.json").exists());
}

#[test]
fn permittivity_terpolymer_endpoint_fixture() {
    // Loops whose discharge energy reproduces the digitized endpoints
    // (~39.5 at 30 V/um, ~10 at 300 V/um).
    let dir = tempfile::tempdir().unwrap();
    let low = dir.path().join("low.csv");
    write_linear_loop(&low, 39.5, 3e7, 600);
    let high = dir.path().join("high.csv");
    write_linear_loop(&high, 10.0, 3e8, 600);
    let out = halvekit(
        &[
            "permittivity",
            "low.csv",
            "high.csv",
            "--material",
            "terpolymer",
            "--frequency-hz",
            "2",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let points = read_spectrum(&dir.path().join("run/spectrum.csv"));
    assert_eq!(points.len(), 2);
    assert_eq!(points[0].0, 3e7);
    assert!((points[0].1 - 39.5).abs() < 1e-3);
    assert_eq!(points[1].0, 3e8);
    assert!((points[1].1 - 10.0).abs() < 1e-3);
}

#[test]
fn permittivity_missing_header_names_the_column() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("bad.csv"),
        "E_V_per_m,displacement\n1e8,0.001\n2e8,0.002\n",
    );
    let out = halvekit(
        &["permittivity", "bad.csv", "--material", "x", "--frequency-hz", "2", "--out", "run"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr(&out).contains("D_C_per_m2"),
        "error does not name the column: {}",
        stderr(&out)
    );
}

fn write_geometry(path: &Path) {
    write(
        path,
        r#"{ "w_m": 0.06, "Lp_m": 0.017, "Le_m": 0.009, "t_m": 5e-6,
             "fill_fraction": 0.95, "num_pouches": 1, "mass_kg": 0.002 }"#,
    );
}

fn write_flat_spectrum(path: &Path, eps: f64) {
    write(path, &format!("E_V_per_m,eps_eff\n1e6,{eps}\n1e9,{eps}\n"));
    write_sidecar(&path.with_extension("json"), "flat", 2.0);
}

fn read_energy_density(path: &Path) -> Vec<(f64, f64)> {
    read_spectrum(path) // same two-column numeric layout
}

#[test]
fn predict_quadratic_energy_scaling_and_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    write_geometry(&dir.path().join("geom.json"));
    write_flat_spectrum(&dir.path().join("spectrum.csv"), 14.0);
    let args = [
        "predict",
        "--geometry",
        "geom.json",
        "--spectrum",
        "spectrum.csv",
        "--voltages",
        "550,1100",
        "--out",
        "run",
    ];
    let out = halvekit(&args, dir.path());
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let rows = read_energy_density(&dir.path().join("run/energy_density.csv"));
    assert_eq!(rows.len(), 2);
    let ratio = rows[1].1 / rows[0].1;
    assert!((ratio - 4.0).abs() < 1e-6, "energy ratio {ratio}");

    let curve = dir.path().join("run/curve_1100V.csv");
    assert!(curve.exists());
    let first = fs::read(&curve).unwrap();

    // Byte-identical on re-run.
    let rerun = halvekit(&args, dir.path());
    assert_eq!(exit_code(&rerun), 0);
    assert_eq!(first, fs::read(&curve).unwrap());
}

#[test]
fn predict_warns_when_field_leaves_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    write_geometry(&dir.path().join("geom.json"));
    // Spectrum ends at 1e8 V/m; 1100 V across 5 um is 2.2e8 V/m.
    write(
        &dir.path().join("spectrum.csv"),
        "E_V_per_m,eps_eff\n1e6,20\n1e8,15\n",
    );
    let out = halvekit(
        &[
            "predict",
            "--geometry",
            "geom.json",
            "--spectrum",
            "spectrum.csv",
            "--voltages",
            "1100",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let manifest = fs::read_to_string(dir.path().join("run/manifest.json")).unwrap();
    assert!(
        manifest.contains("outside the spectrum range"),
        "no clamp warning in manifest: {manifest}"
    );
    assert!(dir.path().join("run/curve_1100V.csv").exists());
}

fn write_trace<F: Fn(f64) -> f64>(path: &Path, f: F, dt: f64, n: usize) {
    let mut text = String::from("time_s,contraction_m\n");
    for i in 0..n {
        let t = i as f64 * dt;
        text.push_str(&format!("{t},{}\n", f(t)));
    }
    write(path, &text);
}

fn write_trace_sidecar(path: &Path) {
    write(
        path,
        r#"{ "load_kg": 0.2, "actuator_mass_kg": 0.002,
             "actuator_length_m": 0.017, "voltage_V": 1300 }"#,
    );
}

#[test]
fn kinetics_first_order_step_matches_analytic_settling() {
    let dir = tempfile::tempdir().unwrap();
    let tau = 0.05;
    write_trace(
        &dir.path().join("trace.csv"),
        |t| 1.2e-3 * (1.0 - (-t / tau).exp()),
        1e-3,
        1000,
    );
    write_trace_sidecar(&dir.path().join("trace.json"));
    let out = halvekit(&["kinetics", "--trace", "trace.csv", "--out", "run"], dir.path());
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/report.json")).unwrap())
            .unwrap();
    let t_end = report["t_end_s"].as_f64().unwrap();
    assert!(
        (t_end - 3.912 * tau).abs() <= 2e-3,
        "settling time {t_end} vs {}",
        3.912 * tau
    );
    let steady = report["steady_strain"].as_f64().unwrap();
    assert!((steady - 1.2e-3 / 0.017).abs() / steady < 0.02);
    for name in ["contraction.csv", "velocity.csv", "acceleration.csv", "specific_power.csv"] {
        assert!(dir.path().join("run").join(name).exists(), "{name} missing");
    }
}

#[test]
fn kinetics_constant_trace_exits_numerical_but_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    write_trace(&dir.path().join("trace.csv"), |_| 0.0, 1e-3, 500);
    write_trace_sidecar(&dir.path().join("trace.json"));
    let out = halvekit(&["kinetics", "--trace", "trace.csv", "--out", "run"], dir.path());
    assert_eq!(exit_code(&out), 3, "{}", stderr(&out));
    let manifest = fs::read_to_string(dir.path().join("run/manifest.json")).unwrap();
    assert!(manifest.contains("no motion detected"), "{manifest}");
}

#[test]
fn kinetics_cubic_trace_velocity_matches_analytic_derivative() {
    let dir = tempfile::tempdir().unwrap();
    let dt = 1e-3;
    // Cubic smoothstep contraction: exactly cubic over the whole trace, so
    // the order-3 filter is exact, and it settles with zero end slope.
    let (y_s, period) = (1.2e-3, 0.4);
    let poly = move |t: f64| {
        let x = t / period;
        y_s * (3.0 * x * x - 2.0 * x * x * x)
    };
    let d_poly = move |t: f64| {
        let x = t / period;
        y_s * (6.0 * x - 6.0 * x * x) / period
    };
    write_trace(&dir.path().join("trace.csv"), poly, dt, 401);
    write_trace_sidecar(&dir.path().join("trace.json"));
    let out = halvekit(&["kinetics", "--trace", "trace.csv", "--out", "run"], dir.path());
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(dir.path().join("run/velocity.csv")).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let mut it = line.split(',');
        let t: f64 = it.next().unwrap().parse().unwrap();
        let v: f64 = it.next().unwrap().parse().unwrap();
        assert!((v - d_poly(t)).abs() < 1e-8, "at {t}: {v} vs {}", d_poly(t));
        rows += 1;
    }
    assert_eq!(rows, 401);
}

fn write_fit_fixture(dir: &Path) {
    // Synthetic noiseless measurement sampled from the constant-permittivity
    // model (60 x 17 mm pouch, 9 mm electrode, 15 um, eps 3.3 at 8 kV).
    let geom = halvekit_core::actuator::ActuatorGeometry::new(
        0.06, 0.017, 0.009, 15e-6, 0.95, 1, 0.002,
    )
    .unwrap();
    let curve = halvekit_core::actuator::force_strain_curve_const_eps(
        &geom,
        halvekit_core::dielectric::DielectricConstant::new(3.3).unwrap(),
        8000.0,
        20,
        1e-3,
    )
    .unwrap();
    let mut text = String::from("strain,force_N\n");
    for p in curve.points() {
        text.push_str(&format!("{},{}\n", p.strain, p.force_n));
    }
    write(&dir.join("data.csv"), &text);
    write(
        &dir.join("data.json"),
        r#"{ "voltage_V": 8000, "geometry": "geom.json" }"#,
    );
    write(
        &dir.join("geom.json"),
        r#"{ "w_m": 0.06, "Lp_m": 0.017, "Le_m": 0.009, "t_m": 15e-6, "mass_kg": 0.002 }"#,
    );

    let eps0 = VACUUM_PERMITTIVITY;
    let boxes = serde_json::json!([
        { "name": "w", "min": 0.055, "max": 0.065, "initial": 0.058 },
        { "name": "t", "min": 13e-6, "max": 17e-6, "initial": 14e-6 },
        { "name": "eps0", "min": eps0 * 0.999, "max": eps0 * 1.001, "initial": eps0 },
        { "name": "eps_r", "min": 2.0, "max": 5.0, "initial": 2.6 },
        { "name": "V", "min": 7920.0, "max": 8080.0, "initial": 7960.0 },
        { "name": "alpha0", "min": 5e-3, "max": 0.4, "initial": 0.2 },
        { "name": "Le", "min": 0.007, "max": 0.011, "initial": 0.0095 },
        { "name": "Lp", "min": 0.015, "max": 0.019, "initial": 0.016 }
    ]);
    write(&dir.join("box.json"), &serde_json::to_string_pretty(&boxes).unwrap());
}

#[test]
fn fit_is_deterministic_and_recovers_noiseless_data() {
    let dir = tempfile::tempdir().unwrap();
    write_fit_fixture(dir.path());
    let args = [
        "fit",
        "--measurements",
        "data.csv",
        "--box",
        "box.json",
        "--seed",
        "42",
        "--out",
        "run1",
    ];
    let out = halvekit(&args, dir.path());
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let fit_json = fs::read(dir.path().join("run1/fit.json")).unwrap();
    let fit: serde_json::Value = serde_json::from_slice(&fit_json).unwrap();
    let rmse = fit["residual_rmse_n"].as_f64().unwrap();
    // The geometry reference in the sidecar yields a measured energy density.
    assert!(fit["measured_energy_density_j_per_kg"].as_f64().unwrap() > 0.0);
    let max_force: f64 = fs::read_to_string(dir.path().join("data.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(rmse < 1e-3 * max_force, "rmse {rmse} vs max force {max_force}");
    assert!(dir.path().join("run1/overlay.csv").exists());

    // Same seed into a second directory: byte-identical fit JSON.
    let mut args2: Vec<&str> = args.to_vec();
    let pos = args2.iter().position(|a| *a == "run1").unwrap();
    args2[pos] = "run2";
    let out2 = halvekit(&args2, dir.path());
    assert_eq!(exit_code(&out2), 0, "{}", stderr(&out2));
    let fit_json2 = fs::read(dir.path().join("run2/fit.json")).unwrap();
    assert_eq!(fit_json, fit_json2, "fit.json differs between identical seeds");
}

#[test]
fn fit_reports_non_convergence_in_manifest() {
    let dir = tempfile::tempdir().unwrap();
    write_fit_fixture(dir.path());
    // Starve the optimizer so the iteration cap is the binding constraint.
    let out = halvekit(
        &[
            "fit",
            "--measurements",
            "data.csv",
            "--box",
            "box.json",
            "--seed",
            "1",
            "--restarts",
            "2",
            "--max-iterations",
            "3",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let manifest = fs::read_to_string(dir.path().join("run/manifest.json")).unwrap();
    assert!(
        manifest.contains("iteration cap"),
        "no non-convergence warning: {manifest}"
    );
    assert!(dir.path().join("run/fit.json").exists());
}

#[test]
fn geometry_validation_exits_with_precondition_code() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("geom.json"),
        r#"{ "w_m": 0.06, "Lp_m": 0.017, "Le_m": 0.020, "t_m": 5e-6, "mass_kg": 0.002 }"#,
    );
    write_flat_spectrum(&dir.path().join("spectrum.csv"), 14.0);
    let out = halvekit(
        &[
            "predict",
            "--geometry",
            "geom.json",
            "--spectrum",
            "spectrum.csv",
            "--voltages",
            "1100",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 4, "{}", stderr(&out));
}

#[test]
fn output_paths_are_kept_clean() {
    // The output dir holds exactly the declared artifacts plus the manifest.
    let dir = tempfile::tempdir().unwrap();
    for (i, e_max) in [1e8, 2e8].iter().enumerate() {
        let csv = dir.path().join(format!("loop{i}.csv"));
        write_linear_loop(&csv, 3.3, *e_max, 100);
    }
    let out = halvekit(
        &[
            "permittivity",
            "loop0.csv",
            "loop1.csv",
            "--material",
            "linear",
            "--frequency-hz",
            "2",
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let mut names: Vec<String> = fs::read_dir(dir.path().join("run"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["manifest.json", "spectrum.csv", "spectrum.json"]);
}

#[test]
fn predict_inverse_field_spectrum_gives_linear_energy_density() {
    let dir = tempfile::tempdir().unwrap();
    write_geometry(&dir.path().join("geom.json"));
    // eps(E) = k/E with knots exactly at the evaluated fields.
    let t = 5e-6;
    let k = 39.5 * 3e7;
    let voltages: Vec<f64> = (1..=10).map(|i| 150.0 * i as f64).collect();
    let mut text = String::from("E_V_per_m,eps_eff\n");
    for v in &voltages {
        let e = v / t;
        text.push_str(&format!("{e},{}\n", k / e));
    }
    write(&dir.path().join("spectrum.csv"), &text);
    let voltage_list = voltages
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",");
    let out = halvekit(
        &[
            "predict",
            "--geometry",
            "geom.json",
            "--spectrum",
            "spectrum.csv",
            "--voltages",
            &voltage_list,
            "--out",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let rows = read_energy_density(&dir.path().join("run/energy_density.csv"));
    assert_eq!(rows.len(), 10);
    let x: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    assert!(r2 > 0.999, "R^2 {r2}");
}
