use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qwtopo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwtopo")).args(args).env_remove("QWTOPO_THREADS").output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run_ok(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qwtopo(&args);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    o
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SCAN: &str = r#"{
  "experiment": "scan",
  "scan": { "t": 5, "line": "theta2_double", "from_pi": 0.5, "to_pi": 1.5, "points": 20, "gauge": "reference" }
}"#;

const CASE1: &str = r#"{
  "experiment": "disorder",
  "seed": 2015,
  "disorder": { "theta_a_pi": 1.68, "theta_b_pi": 1.36, "t": 11, "n_configs": 50 }
}"#;

const EDGE: &str = r#"{
  "experiment": "edge",
  "seed": 13,
  "edge": { "theta_left_pi": 0.52, "theta_a_pi": 1.68, "theta_b_pi": 1.36, "p": [0.0, 0.5], "t": 13, "n_configs": 5 }
}"#;

#[test]
fn scan_writes_twenty_rows_and_a_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scan.json", SCAN);
    let out = dir.path().join("out");
    run_ok(&cfg, &out, &[]);
    let csv = fs::read_to_string(out.join("scan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta1_pi,theta2_pi,Q0,Qpi,residual,t"));
    assert_eq!(lines.count(), 20);
    let svg = fs::read_to_string(out.join("scan.svg")).unwrap();
    assert!(svg.contains(">Q0<") && svg.contains(">Qπ<"));
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn case_study_one_summary_has_eleven_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "case1.json", CASE1);
    let out = dir.path().join("out");
    run_ok(&cfg, &out, &[]);
    let csv = fs::read_to_string(out.join("disorder_summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,mean_half_r0,std_half_r0,n_configs,t"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.ends_with(",50,11")));
    let runs = fs::read_to_string(out.join("disorder_runs.csv")).unwrap();
    assert!(runs.starts_with("p,config,half_r0,t,seed\n"));
    assert_eq!(runs.lines().count(), 1 + 11 * 50);
}

#[test]
fn manifest_lists_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "edge.json", EDGE);
    let out = dir.path().join("out");
    run_ok(&cfg, &out, &[]);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 13);
    assert_eq!(manifest["experiment"], "edge");
    let listed: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    for name in ["edge.csv", "edge_summary.csv", "intensity_p0.csv", "intensity_p0.5.csv", "intensity_reference.csv"] {
        assert!(listed.contains(&name), "{name} missing from {listed:?}");
    }
    let mut on_disk: Vec<String> =
        fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    on_disk.retain(|n| n != "manifest.json");
    on_disk.sort();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(on_disk, sorted);
    let header = fs::read_to_string(out.join("intensity_p0.5.csv")).unwrap();
    assert!(header.starts_with("step,position,intensity\n"));
    assert!(fs::read_to_string(out.join("edge.csv")).unwrap().starts_with("p,config,P_loc,t\n"));
}

#[test]
fn out_of_range_p_is_a_config_error_at_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{ "experiment": "disorder", "disorder": { "theta_a_pi": 0.63, "theta_b_pi": 1.26, "p": 1.3, "t": 11 } }"#,
    );
    let o = qwtopo(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`disorder.p`"), "{}", stderr(&o));

    let cfg = write_config(
        dir.path(),
        "bad_list.json",
        r#"{ "experiment": "disorder", "disorder": { "theta_a_pi": 0.63, "theta_b_pi": 1.26, "p": [0.2, 1.3], "t": 11 } }"#,
    );
    let o = qwtopo(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`disorder.p[1]`"), "{}", stderr(&o));
}

#[test]
fn empty_sample_region_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "empty.json",
        r#"{ "experiment": "disorder", "disorder": { "theta_a_pi": 0.63, "theta_b_pi": 1.26, "t": 11, "sample_len": 0 } }"#,
    );
    let out = dir.path().join("out");
    let o = qwtopo(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid config at `disorder.sample_len`"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn unknown_fields_and_bad_types_report_paths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "extra.json", r#"{ "experiment": "scan", "scna": {} }"#);
    let o = qwtopo(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("scna"), "{}", stderr(&o));

    let cfg = write_config(
        dir.path(),
        "type.json",
        r#"{ "experiment": "scan", "scan": { "t": "five", "line": "pairs", "pairs_pi": [[0.1, 0.2]] } }"#,
    );
    let o = qwtopo(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`scan.t`"), "{}", stderr(&o));
}

#[test]
fn verify_reports_estimate_and_reduction_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "wrap.json",
        r#"{ "experiment": "disorder", "disorder": { "theta_a_pi": 3.1, "theta_b_pi": 1.26, "t": 11 } }"#,
    );
    let out_dir = dir.path().join("never");
    let o = qwtopo(&["verify", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("ok"), "{text}");
    assert!(text.contains("550 simulations"), "{text}");
    assert!(text.contains("disorder.theta_a_pi = 3.1") && text.contains("reduced to 1.1"), "{text}");
    assert!(!out_dir.exists());
    let written: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(written.len(), 1);
}

#[test]
fn runs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "case1.json", CASE1);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_ok(&cfg, &a, &["--threads", "1"]);
    run_ok(&cfg, &b, &["--threads", "4"]);
    for name in ["disorder_runs.csv", "disorder_summary.csv", "disorder_runs.svg", "disorder_summary.svg"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let hash = |d: &Path| {
        let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("manifest.json")).unwrap()).unwrap();
        (m["config_sha256"].clone(), m["files"].clone())
    };
    assert_eq!(hash(&a), hash(&b));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "edge.json", EDGE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_ok(&cfg, &a, &[]);
    run_ok(&cfg, &b, &["--seed", "14"]);
    let ea = fs::read_to_string(a.join("edge.csv")).unwrap();
    let eb = fs::read_to_string(b.join("edge.csv")).unwrap();
    assert_ne!(ea, eb);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(b.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 14);
}

#[test]
fn json_format_carries_the_same_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scan.json", SCAN);
    let (c, j) = (dir.path().join("csv"), dir.path().join("json"));
    run_ok(&cfg, &c, &[]);
    run_ok(&cfg, &j, &["--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(j.join("scan.json")).unwrap()).unwrap();
    let csv = fs::read_to_string(c.join("scan.csv")).unwrap();
    for (row, line) in rows.iter().zip(csv.lines().skip(1)) {
        let q0: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(row["Q0"].as_f64().unwrap(), q0);
    }
    assert_eq!(fs::read(c.join("scan.svg")).unwrap(), fs::read(j.join("scan.svg")).unwrap());
}

#[test]
fn replot_reproduces_run_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "edge.json", EDGE);
    run_ok(&cfg, &out, &[]);
    let pd = write_config(
        dir.path(),
        "pd.json",
        r#"{ "experiment": "phase-diagram", "phase_diagram": { "t": 20, "resolution": 8, "tolerance": 0.2 } }"#,
    );
    let out_pd = dir.path().join("pd");
    run_ok(&pd, &out_pd, &[]);
    for d in [&out, &out_pd] {
        let originals: Vec<(PathBuf, Vec<u8>)> = fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "svg"))
            .map(|p| {
                let bytes = fs::read(&p).unwrap();
                fs::remove_file(&p).unwrap();
                (p, bytes)
            })
            .collect();
        assert!(!originals.is_empty());
        let o = qwtopo(&["replot", d.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        for (p, bytes) in originals {
            assert_eq!(fs::read(&p).unwrap(), bytes, "{}", p.display());
        }
    }
}

#[test]
fn replot_of_summary_and_intensity_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("summary.csv"),
        "p,mean_half_r0,std_half_r0,n_configs,t\n0,-0.5,0,50,11\n1,0.5,0,50,11\n",
    )
    .unwrap();
    fs::write(dir.path().join("map.csv"), "step,position,intensity\n0,0,1\n1,-1,0.5\n1,1,0.5\n").unwrap();
    fs::write(dir.path().join("notes.csv"), "a,b\n1,2\n").unwrap();
    let o = qwtopo(&["replot", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = fs::read_to_string(dir.path().join("summary.svg")).unwrap();
    assert!(summary.contains("<circle") && summary.contains("<line"));
    let map = fs::read_to_string(dir.path().join("map.svg")).unwrap();
    assert!(map.contains("#08306b"));
    assert!(!dir.path().join("notes.svg").exists());
}

#[test]
fn replot_without_data_is_unknown_kind() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwtopo(&["replot", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no recognized data files"));

    let o = qwtopo(&["replot", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn emulate_and_mc_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let em = write_config(
        dir.path(),
        "em.json",
        r#"{ "experiment": "emulate", "emulate": { "theta1_pi": 0.3, "theta2_pi": 0.6, "t": 11 } }"#,
    );
    let out = dir.path().join("em");
    run_ok(&em, &out, &[]);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("emulation_summary.json")).unwrap()).unwrap();
    let ideal = summary["ideal"]["Q0"].as_f64().unwrap();
    let rec = summary["reconstructed"]["Q0"].as_f64().unwrap();
    assert!((ideal - rec).abs() < 1e-10);
    assert!(fs::read_to_string(out.join("emulation.csv"))
        .unwrap()
        .starts_with("j,magnitude,signed_amplitude,relation,delta_i\n"));

    let mc = write_config(
        dir.path(),
        "mc.json",
        r#"{ "experiment": "mc-errorbars", "mc_errorbars": { "theta1_pi": 0.3, "theta2_pi": 0.6, "t": 11, "observed": "em/emulation_intensity.csv", "n_sets": 40 } }"#,
    );
    let out_mc = dir.path().join("mc");
    run_ok(&mc, &out_mc, &[]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_mc.join("mc_summary.json")).unwrap()).unwrap();
    assert!(report["error_Q0"].as_f64().unwrap() >= 0.0);
    let sets = fs::read_to_string(out_mc.join("mc_sets.csv")).unwrap();
    assert_eq!(sets.lines().count(), 41);
    assert!(!out_mc.join("observed_intensity.csv").exists());
}

#[test]
fn mc_with_missing_observation_file_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mc = write_config(
        dir.path(),
        "mc.json",
        r#"{ "experiment": "mc-errorbars", "mc_errorbars": { "theta1_pi": 0.3, "theta2_pi": 0.6, "t": 11, "observed": "nope.csv", "n_sets": 4 } }"#,
    );
    let o = qwtopo(&["run", "--config", mc.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn threads_fall_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "scan.json", SCAN);
    let o = Command::new(env!("CARGO_BIN_EXE_qwtopo"))
        .args(["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()])
        .env("QWTOPO_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threads"));
}
