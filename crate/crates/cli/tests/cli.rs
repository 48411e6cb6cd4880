use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epr-geometry"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

/// Data rows of a CSV file written by the tool, header included.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn airy_example_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["airy-example"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["fields.csv", "chain.csv", "bh_metric.csv", "horizons.csv", "regions.csv", "reports.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let text = fs::read_to_string(dir.path().join("fields.csv")).unwrap();
    assert!(text.starts_with("# command = airy-example\n"));
    assert!(text.contains("# big_m = 0.1\n"));
    let rows = csv_rows(&dir.path().join("fields.csv"));
    assert_eq!(rows[0][..3], ["z", "r", "q"]);
    assert_eq!(rows.len(), 402);
    // Q = 4Mz at z = 0.5.
    let mid = rows.iter().find(|r| r[0] == "0.5").unwrap();
    assert!((num(&mid[2]) - 0.2).abs() < 1e-14);
    let reports = csv_rows(&dir.path().join("reports.csv"));
    assert!(reports[1..].iter().all(|r| r[10] == "true"));
}

#[test]
fn horizons_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["horizons"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("horizons.csv"));
    let found: Vec<f64> = rows[1..].iter().map(|r| num(&r[0])).collect();
    assert_eq!(found, vec![-5.0, 5.0]);
    for r in &rows[1..] {
        assert!(num(&r[2]) < 1e-10);
    }
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("center 10 "), "{stdout}");
}

#[test]
fn strict_coarse_grid_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["airy-example", "--grid-n", "5", "--strict"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let lax = run(&["airy-example", "--grid-n", "5"], dir.path());
    assert_eq!(lax.status.code(), Some(0));
}

#[test]
fn usage_and_parameter_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["airy-example", "--m", "0"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["airy-example", "--big-m", "0"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["verify", "--grid-n", "2"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["horizons", "--threshold", "1.5"], dir.path()).status.code(), Some(2));
}

#[test]
fn unwritable_output_dir_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&["horizons"], &blocker.join("sub"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("output directory"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# model\nM = 0.2\nC = 3\nformat = json\n").unwrap();
    let o = run(&["horizons", "--config", cfg.to_str().unwrap(), "--c-const", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("horizons.json")).unwrap()).unwrap();
    assert_eq!(doc["params"]["big_m"], "0.2");
    assert_eq!(doc["params"]["c_const"], "2");
    assert_eq!(doc["summary"]["horizons"]["locations"], serde_json::json!([-5.0, 5.0]));

    fs::write(&cfg, "M = 0.2\nbogus = 1\n").unwrap();
    assert_eq!(run(&["horizons", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
    fs::write(&cfg, "M == \n").unwrap();
    assert_eq!(run(&["horizons", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));
}

#[test]
fn static_example_singularities() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["static-example", "--c1", "2", "--c2", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("singularities.csv"));
    let u: Vec<f64> = rows[1..].iter().map(|r| num(&r[0])).collect();
    assert_eq!(u.len(), 2);
    assert!((u[0] - 7.0 * std::f64::consts::PI / 6.0).abs() < 1e-12);
    assert!((u[1] - 11.0 * std::f64::consts::PI / 6.0).abs() < 1e-12);
    let iv = csv_rows(&dir.path().join("valid_intervals.csv"));
    assert_eq!(iv.len(), 2);
    assert!(num(&iv[1][0]).abs() < 1e-12 && (num(&iv[1][1]) - std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn flat_static_metric() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["static-example", "--c1", "0", "--c2", "2", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("static-example.json")).unwrap()).unwrap();
    let table = doc["artifacts"].as_array().unwrap().iter().find(|a| a["name"] == "static").unwrap();
    let col = table["columns"].as_array().unwrap().iter().position(|c| c == "g11_derived").unwrap();
    for row in table["rows"].as_array().unwrap() {
        assert!((row[col].as_f64().unwrap() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn verify_reports_three_resolutions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--grid-n", "101", "--strict", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    let counts: std::collections::BTreeSet<u64> =
        doc["reports"].as_array().unwrap().iter().map(|r| r["grid"]["count"].as_u64().unwrap()).collect();
    assert!(counts.is_superset(&[101, 201, 401].into()));
    let order = doc["summary"]["sampled_airy_order"]["order"].as_f64().unwrap();
    assert!((order - 4.0).abs() < 0.3, "{order}");
    assert_eq!(doc["summary"]["analytic_airy_order"], "floor_reached");
}

#[test]
fn trajectories_conserve_u() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["trajectories", "--x1", "0.3", "--x2", "0.1", "--span", "5", "--plots"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("trajectory.csv"));
    for r in &rows[1..] {
        assert!((num(&r[3]) - 0.4).abs() < 1e-12);
        assert!((num(&r[4]) + num(&r[5])).abs() < 1e-12);
    }
    assert!(fs::read_to_string(dir.path().join("trajectory.svg")).unwrap().starts_with("<svg"));
}
