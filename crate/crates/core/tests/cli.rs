use std::process::{Command, Output};

use zeno_coupler::observables::zeno_sample;
use zeno_coupler::{compute_coefficients, CoherentInputs, CouplerParams};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zeno-coupler"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(table: &str, name: &str) -> Vec<String> {
    let mut lines = table.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

const FIG2: [&str; 10] = ["--k", "0.1", "--gamma-nl", "0.001", "--delta-k", "1e-4", "--alpha", "5", "--beta", "2"];

#[test]
fn coeffs_at_zero_length_is_identity() {
    let out = run(&["coeffs", "--k", "0.1", "--gamma-nl", "0.001", "--delta-k", "1e-4", "--z", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    assert_eq!(table.lines().count(), 2);
    let header: Vec<&str> = table.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2 + 24 + 1);
    let row: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
    for (name, cell) in header.iter().zip(&row) {
        if *name == "status" {
            assert_eq!(*cell, "ok");
            continue;
        }
        let v: f64 = cell.parse().unwrap();
        let expected = if matches!(*name, "f1_re" | "g2_re" | "h1_re") { 1.0 } else { 0.0 };
        assert_eq!(v, expected, "{name}");
    }
}

#[test]
fn coeffs_pass_library_values_through() {
    let out = run(&["coeffs", "--k", "0.1", "--gamma-nl", "0.001", "--delta-k", "1e-4", "--gamma-z", "0:0.1:11"]);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    let params = CouplerParams::real(0.1, 0.001, 1e-4).unwrap();
    let z = column(&table, "z");
    let h3 = column(&table, "h3_im");
    for (zs, hs) in z.iter().zip(&h3) {
        let z: f64 = zs.parse().unwrap();
        let c = compute_coefficients(&params, z).unwrap();
        let v: f64 = hs.parse().unwrap();
        assert!((v - c.h[2].im).abs() <= 1e-15, "{v} vs {}", c.h[2].im);
    }
}

#[test]
fn missing_flag_is_named() {
    let out = run(&["coeffs", "--k", "0.1", "--gamma-nl", "0.001", "--z", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--delta-k"));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["zeno", "--preset", "fig2", "--alpha", "abc"][..],
        &["zeno", "--preset", "fig9"],
        &["zeno", "--preset", "fig2", "--z", "5:1:3"],
        &["zeno", "--preset", "fig2", "--z", "1", "--gamma-z", "1"],
        &["oracle", "--preset", "fig2", "--cutoffs", "12/12"],
        &["coeffs", "--k", "0", "--gamma-nl", "0.001", "--delta-k", "0.1", "--z", "1"],
        &["nosuchcommand"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn resonance_exits_3() {
    let out = run(&["zeno", "--k", "0.1", "--gamma-nl", "0.001", "--delta-k", "0.2", "--alpha", "1", "--beta", "1", "--gamma", "1", "--z", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["coeffs", "--k", "0.1", "--gamma-nl", "0.001", "--delta-k", "-0.2", "--z", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn spontaneous_rows_are_null() {
    let mut args = vec!["zeno"];
    args.extend(FIG2);
    args.extend(["--gamma", "0", "--gamma-z", "0:0.1:21"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    assert!(column(&table, "delta_n_z").iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    assert!(column(&table, "classification").iter().all(|c| c == "Null"));
}

#[test]
fn seed_sign_flip_negates_the_zeno_column() {
    let plus = stdout(&run(&["zeno", "--preset", "fig2"]));
    let minus = stdout(&run(&["zeno", "--preset", "fig2", "--gamma", "-1"]));
    let p = column(&plus, "delta_n_z");
    let m = column(&minus, "delta_n_z");
    assert_eq!(p.len(), 101);
    for (a, b) in p.iter().zip(&m) {
        let (a, b): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
        assert_eq!(a, -b);
    }
    let classes = column(&plus, "classification");
    assert_eq!(classes[0], "Null");
    assert!(classes[1..].iter().all(|c| c == "Zeno"));
}

#[test]
fn zeno_matches_library_sample() {
    let out = run(&["zeno", "--preset", "fig2", "--gamma-z", "0.05"]);
    let table = stdout(&out);
    let v: f64 = column(&table, "delta_n_z")[0].parse().unwrap();
    let params = CouplerParams::real(0.1, 0.001, 1e-4).unwrap();
    let s = zeno_sample(&params, &CoherentInputs::real(5.0, 2.0, 1.0), 50.0, 1e-12).unwrap();
    assert_eq!(v, s.delta_n_z);
}

#[test]
fn sweep_presets() {
    let fig2 = stdout(&run(&["sweep", "--preset", "fig2"]));
    assert_eq!(fig2.lines().count(), 102);
    assert!(column(&fig2, "secondary_axis").iter().all(|a| a == "none"));

    let fig3 = stdout(&run(&["sweep", "--preset", "fig3"]));
    assert_eq!(fig3.lines().count(), 1 + 51 * 81);
    let classes = column(&fig3, "classification");
    assert!(classes.iter().any(|c| c == "Zeno"));
    assert!(classes.iter().any(|c| c == "AntiZeno"));

    let fig4 = stdout(&run(&["sweep", "--preset", "fig4"]));
    let classes = column(&fig4, "classification");
    let z = column(&fig4, "z_index");
    for (c, zi) in classes.iter().zip(&z) {
        if zi != "0" {
            assert_eq!(c, "Zeno");
        }
    }
}

#[test]
fn sweep_marks_degenerate_cells_in_place() {
    let out = run(&["sweep", "--preset", "fig2", "--gamma-z", "0:0.1:3", "--secondary", "delta_k=0.1:0.3:3"]);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    let status = column(&table, "status");
    assert_eq!(status.len(), 9);
    assert_eq!(&status[3..6], ["degenerate", "degenerate", "degenerate"]);
    assert_eq!(column(&table, "delta_n_z")[4], "NaN");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["sweep", "--preset", "fig3"]);
    let b = run(&["sweep", "--preset", "fig3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = run(&["zeno", "--preset", "fig2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&run(&["zeno", "--preset", "fig2"])));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# fig2 device with a flipped seed\npreset = fig2\ngamma = -1\nalpha = 3\ngamma_z = 0.05\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["zeno", "--config", cfg]));
    let explicit = stdout(&run(&["zeno", "--preset", "fig2", "--gamma", "-1", "--alpha", "3", "--gamma-z", "0.05"]));
    assert_eq!(from_file, explicit);
    // a flag beats the file, including across the two length flags
    let overridden = stdout(&run(&["zeno", "--config", cfg, "--alpha", "5", "--z", "50"]));
    let expected = stdout(&run(&["zeno", "--preset", "fig2", "--gamma", "-1", "--z", "50"]));
    assert_eq!(overridden, expected);

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "wavelength = 1\n").unwrap();
    let out = run(&["zeno", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wavelength"));
}

#[test]
fn complex_and_polar_inputs_agree() {
    let rect = stdout(&run(&["zeno", "--preset", "fig2", "--gamma", "0+1I", "--gamma-z", "0.05"]));
    let polar = stdout(&run(&["zeno", "--preset", "fig2", "--gamma", "1@1.5707963267948966", "--gamma-z", "0.05"]));
    let a: f64 = column(&rect, "delta_n_z")[0].parse().unwrap();
    let b: f64 = column(&polar, "delta_n_z")[0].parse().unwrap();
    assert!((a - b).abs() < 1e-15);
}

#[test]
fn oracle_zero_length_and_linear_limit() {
    let base = ["oracle", "--k", "0.1", "--delta-k", "1e-4", "--alpha", "1", "--beta", "0.5", "--gamma", "0.5"];
    let mut args = base.to_vec();
    args.extend(["--gamma-nl", "0.001", "--z", "0"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let table = stdout(&out);
    let get = |name: &str| column(&table, name)[0].parse::<f64>().unwrap();
    assert!((get("n_a") - 1.0).abs() < 1e-8);
    assert!((get("n_b1") - 0.25).abs() < 1e-8);
    assert!((get("n_b2") - 0.25).abs() < 1e-8);
    assert_eq!(get("norm_drift"), 0.0);
    assert_eq!(get("conservation_drift"), 0.0);

    let mut args = base.to_vec();
    args.extend(["--gamma-nl", "0", "--z", "5:50:4", "--tol", "1e-12"]);
    let table = stdout(&run(&args));
    for (zs, na) in column(&table, "z").iter().zip(column(&table, "n_a")) {
        let z: f64 = zs.parse().unwrap();
        let (s, c) = (0.1 * z).sin_cos();
        let expected = c * c + 0.25 * s * s;
        assert!((na.parse::<f64>().unwrap() - expected).abs() < 1e-8);
    }
}

#[test]
fn oracle_failures_exit_4() {
    let out = run(&["oracle", "--preset", "fig2", "--gamma-z", "0.05"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncation loss"));
}

#[test]
fn validate_exit_status() {
    let out = run(&["validate"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let table = stdout(&out);
    assert!(column(&table, "passed").iter().all(|p| p == "true"));
    let ratio: f64 = table
        .lines()
        .find(|l| l.starts_with("oracle_contraction_fixed_z,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((3.0..=5.0).contains(&ratio));

    let out = run(&["validate", "--inject", "gamma-linearity"]);
    assert_eq!(out.status.code(), Some(1));
    let table = stdout(&out);
    let failed: Vec<&str> = table.lines().filter(|l| l.ends_with(",false")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("gamma_linearity,"));
}

#[test]
fn help_documents_columns() {
    let out = run(&["zeno", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("z,gamma_z,n_b2,n_b2_uncoupled,delta_n_z,classification,status"));
}
