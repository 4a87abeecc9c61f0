use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn atomwall(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomwall"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

const CONFIG: &str = r#"{
  "schema_version": 1,
  "name": "probe",
  "species": { "path": "atom.json" },
  "kernel": { "kind": "oscillatory_image" },
  "initial": { "z_m": 1e-6, "vz_mps": -0.05 },
  "output": { "curve": { "z_min_m": 1e-8, "z_max_m": 1e-6, "n_points": 50, "spacing": "log" } }
}"#;

fn write_config(dir: &Path) {
    std::fs::create_dir_all(dir.join("cfg")).unwrap();
    std::fs::write(dir.join("cfg/probe.json"), CONFIG).unwrap();
    let species = atomwall::experiments::presets::species_file_json("rb85").unwrap();
    std::fs::write(dir.join("cfg/atom.json"), species).unwrap();
}

#[test]
fn preset_writes_outputs_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let o = atomwall(dir.path(), &["preset", "fig1", "--out", "out"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files: Vec<String> = stdout_json(&o)["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(files.len(), 4);
    for f in &files {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let potential = std::fs::read_to_string(dir.path().join("out/fig1_potential.csv")).unwrap();
    assert!(potential.starts_with("z_m,u_perp_J,u_par_J,u_sum_J\n"));
    let o = atomwall(dir.path(), &["replay", "out/fig1_manifest.json"]);
    assert!(o.status.success());
    assert!(stdout_json(&o).as_array().unwrap().iter().all(|c| c["matches"] == true));
}

#[test]
fn cli_preset_matches_library_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = atomwall(dir.path(), &["preset", "fig4-free", "--out", "cli", "--seedless"]);
    assert!(o.status.success());
    let (_, files) = atomwall::experiments::run_preset("fig4-free", &dir.path().join("lib")).unwrap();
    for f in files {
        let name = f.file_name().unwrap();
        assert_eq!(std::fs::read(&f).unwrap(), std::fs::read(dir.path().join("cli").join(name)).unwrap());
    }
}

#[test]
fn config_paths_resolve_next_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path());
    let o = atomwall(dir.path(), &["potential", "--config", "cfg/probe.json", "--out", "p"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("p/probe_potential.csv").is_file());
    assert!(dir.path().join("p/probe_vdw_reference.csv").is_file());
    let o = atomwall(dir.path(), &["trajectory", "--config", "cfg/probe.json", "--out", "t"]);
    assert!(o.status.success());
    let traj = std::fs::read_to_string(dir.path().join("t/probe_trajectory.csv")).unwrap();
    assert!(traj.lines().last().unwrap().starts_with("# outcome=adsorbed"));
    // The manifest is self-contained: it replays after the inputs are gone.
    std::fs::remove_dir_all(dir.path().join("cfg")).unwrap();
    let o = atomwall(dir.path(), &["replay", "t/probe_manifest.json"]);
    assert!(o.status.success());
}

#[test]
fn kernel_override_changes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = atomwall(dir.path(), &["report", "--preset", "fig1", "--out", "a"]);
    assert!(o.status.success());
    let o = atomwall(dir.path(), &["report", "--preset", "fig1", "--kernel", "ground_state_quadrature", "--out", "b"]);
    assert!(o.status.success());
    let read = |p: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.path().join(p)).unwrap()).unwrap() };
    assert_eq!(read("a/fig1_report.json")["no_barrier"], false);
    assert_eq!(read("b/fig1_report.json")["no_barrier"], true);

    let table = atomwall::experiments::presets::fig4_two_barrier_csv();
    std::fs::write(dir.path().join("table.csv"), table).unwrap();
    let o = atomwall(dir.path(), &["report", "--preset", "fig1", "--kernel", "tabulated=table.csv", "--out", "c"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read("c/fig1_report.json");
    assert!((rep["u_max_hbar_gamma0"].as_f64().unwrap() - 1.62).abs() < 0.01);
}

#[test]
fn sweep_accepts_values_and_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let o = atomwall(
        dir.path(),
        &["sweep", "--preset", "fig4-free", "--axis", "initial.vz_mps", "--values=-0.1,-0.2", "--range=-0.11:-0.13:3", "--out", "s"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("s/fig4-free_sweep.csv")).unwrap();
    let outcomes: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(outcomes, ["reflected", "adsorbed", "reflected", "reflected", "adsorbed"]);

    let o = atomwall(dir.path(), &["sweep", "--preset", "fig4-free", "--axis", "initial.vz_mps", "--out", "e"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("e/fig4-free_sweep.csv")).unwrap();
    assert_eq!(text, "index,value,outcome,z_min_m,t_event_s,energy_drift\n");
}

#[test]
fn failures_exit_with_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], i32, &str); 6] = [
        (&["potential", "--config", "missing.json"], 2, "io"),
        (&["sweep", "--preset", "fig1", "--axis", "initial.nope", "--values", "1"], 2, "config"),
        (&["report", "--preset", "fig1", "--kernel", "spline"], 2, "config"),
        (&["trajectory", "--preset", "fig1"], 2, "config"),
        (&["preset", "fig2"], 2, "usage"),
        (&["potential"], 2, "usage"),
    ];
    for (args, code, kind) in cases {
        let o = atomwall(dir.path(), args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        let err = stderr_json(&o);
        assert_eq!(err["kind"], kind, "{args:?}: {err}");
        assert!(err["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = CONFIG.replace("\"initial\"", "\"integrator\": { \"max_steps\": 3 },\n  \"initial\"");
    std::fs::create_dir_all(dir.path().join("cfg")).unwrap();
    std::fs::write(dir.path().join("cfg/probe.json"), cfg.replace("{ \"path\": \"atom.json\" }", "{ \"preset\": \"rb85\" }")).unwrap();
    let o = atomwall(dir.path(), &["trajectory", "--config", "cfg/probe.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["kind"], "integration");

    let o = atomwall(dir.path(), &["preset", "fig1", "--out", "m"]);
    assert!(o.status.success());
    let path = dir.path().join("m/fig1_manifest.json");
    let mut manifest: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    manifest["outputs"][0]["sha256"] = Value::String("0".repeat(64));
    std::fs::write(&path, manifest.to_string()).unwrap();
    let o = atomwall(dir.path(), &["replay", "m/fig1_manifest.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["kind"], "replay_mismatch");
}

#[test]
fn help_and_version_succeed() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["--help"][..], &["--version"], &["sweep", "--help"]] {
        let o = atomwall(dir.path(), args);
        assert!(o.status.success());
        assert!(!o.stdout.is_empty());
    }
}
