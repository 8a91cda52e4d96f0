//! End-to-end tests of the command-line surface: exit codes, fault
//! injection, output formats, environment overrides, and sweep determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ab-lab"))
}

fn tmp(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ab_lab_cli_{tag}_{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const BARENBLATT_RUN: &str = r#"
[law]
kind = "power-law"
gamma = 2.0

[grid]
extent = 12.0
cells = 128
boundary = "no-flux"

[initial]
kind = "barenblatt"
t0 = 1.0
c0 = 1.0

[run]
t_end = 2.0
snapshots = 5
warmup_fraction = 0.0
mask_threshold = 0.35
theorems = "LINF_NO_G_B1, LINF_SPECIAL, L1_NO_G"
"#;

#[test]
fn run_passes_all_bounds_with_exit_zero() {
    let dir = tmp("run0");
    let cfg = write(&dir, "scenario.cfg", BARENBLATT_RUN);
    let out_dir = dir.join("out");
    let output = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("verdict: PASS"), "{stdout}");
    // artifacts present
    assert!(out_dir.join("diagnostics.csv").exists());
    assert!(out_dir.join("summary.txt").exists());
    assert!(out_dir.join("bound_LINF_NO_G_B1.csv").exists());
    assert!(out_dir.join("bound_LINF_NO_G_B1.svg").exists());
    // snapshot files encode time in fixed-point microseconds
    assert!(out_dir.join("snapshot_t000001000000.csv").exists());
    assert!(out_dir.join("snapshot_t000002000000.csv").exists());
    let snap = fs::read_to_string(out_dir.join("snapshot_t000001000000.csv")).unwrap();
    assert!(snap.starts_with("cell_index,x,n,p,w\n"), "snapshot header: {}", &snap[..40]);
}

#[test]
fn fault_injection_flips_exit_code_to_two() {
    let dir = tmp("fault");
    let cfg = write(&dir, "scenario.cfg", BARENBLATT_RUN);
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--set", "checks.bound_scale=0.1", "--out"])
        .arg(dir.join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2), "A/10 must violate the L1 bound");
}

#[test]
fn invalid_config_exits_one_with_message() {
    let dir = tmp("bad");
    let cfg = write(&dir, "scenario.cfg", &BARENBLATT_RUN.replace("gamma = 2.0", "gamma = -1.0"));
    let output = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("law.gamma must be positive"), "{stderr}");
}

#[test]
fn unknown_key_suggestion_reaches_the_user() {
    let dir = tmp("typo");
    let cfg = write(&dir, "scenario.cfg", &BARENBLATT_RUN.replace("[law]", "[lawx]"));
    let output = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("lawx") && stderr.contains("`law`"), "{stderr}");
}

#[test]
fn env_var_overrides_output_dir() {
    let dir = tmp("env");
    let cfg = write(&dir, "scenario.cfg", BARENBLATT_RUN);
    let env_out = dir.join("env_out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .env("AB_LAB_OUTPUT", &env_out)
        .current_dir(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(env_out.join("diagnostics.csv").exists());
}

const SWEEP_BASE: &str = r#"
[law]
kind = "power-law"
gamma = 2.0

[growth]
kind = "linear"
rate = 5.0
p_max = 1.0

[grid]
extent = 8.0
cells = 64
boundary = "no-flux"

[initial]
kind = "bump"
radius = 1.5
height = 0.8

[run]
t_end = 0.3
snapshots = 4

[sweep]
parameter = "gamma"
values = "4, 8, 16"
parallelism = 1
"#;

#[test]
fn sweep_parallelism_does_not_change_outputs() {
    let dir = tmp("sweep");
    let cfg = write(&dir, "sweep.cfg", SWEEP_BASE);
    let serial = dir.join("serial");
    let parallel = dir.join("parallel");
    let s1 = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&serial)
        .status()
        .unwrap();
    let s2 = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--set", "sweep.parallelism=3", "--out"])
        .arg(&parallel)
        .status()
        .unwrap();
    assert_eq!(s1.code(), Some(0));
    assert_eq!(s2.code(), Some(0));
    let a = fs::read(serial.join("sweep_summary.csv")).unwrap();
    let b = fs::read(parallel.join("sweep_summary.csv")).unwrap();
    assert_eq!(a, b, "parallel sweep changed numeric output");
    // member diagnostics are byte-identical too
    let da = fs::read(serial.join("value_8").join("diagnostics.csv")).unwrap();
    let db = fs::read(parallel.join("value_8").join("diagnostics.csv")).unwrap();
    assert_eq!(da, db);
}

#[test]
fn cells_sweep_runs() {
    let dir = tmp("cells");
    let cfg = write(
        &dir,
        "sweep.cfg",
        &SWEEP_BASE
            .replace("parameter = \"gamma\"", "parameter = \"cells\"")
            .replace("values = \"4, 8, 16\"", "values = \"32, 64, 128\""),
    );
    let out = dir.join("out");
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(out.join("sweep_summary.csv")).unwrap();
    assert!(text.starts_with("cells,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn hele_shaw_reports_decreasing_residual() {
    let dir = tmp("hs");
    let cfg = write(&dir, "hs.cfg", SWEEP_BASE);
    let out = dir.join("out");
    let output = bin()
        .args(["hele-shaw", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let text = fs::read_to_string(out.join("hele_shaw_summary.csv")).unwrap();
    let mut r1: Vec<f64> = Vec::new();
    for line in text.lines().skip(1) {
        r1.push(line.split(',').nth(1).unwrap().parse().unwrap());
    }
    assert_eq!(r1.len(), 3);
    assert!(r1[0] > r1[1] && r1[1] > r1[2], "r1 not decreasing: {r1:?}");
}

#[test]
fn verify_weights_emits_tables_and_summary() {
    let dir = tmp("vw");
    let cfg = write(
        &dir,
        "law.cfg",
        r#"
[law]
kind = "dhv"
epsilon = 1.0
p_max = 1.0

[grid]
extent = 8.0
cells = 64

[initial]
kind = "bump"
radius = 1.0
height = 0.5

[run]
t_end = 0.1
"#,
    );
    let out = dir.join("out");
    let output = bin()
        .args(["verify-weights", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    for name in ["weights_l1.csv", "weights_linfty.csv", "weights_l2.csv"] {
        let text = fs::read_to_string(out.join(name)).unwrap();
        assert!(text.starts_with("p,h,h_prime,h_second,alpha,beta_residual,delta\n"));
        assert!(text.lines().count() > 200);
    }
    let summary = fs::read_to_string(out.join("weights_summary.json")).unwrap();
    assert!(summary.contains("\"alpha_tilde0_ratio\""));
    assert!(summary.contains("\"lemma_margin_lower\""));
    // DHV is L2-infeasible: beta2 = 2/eps > 0
    assert!(summary.contains("\"feasible\": false"), "{summary}");
}

#[test]
fn barenblatt_and_aronson_dumps() {
    let dir = tmp("oracle");
    let out = dir.join("bb");
    let output = bin()
        .args(["barenblatt", "--gamma", "2", "--dim", "1", "--cells", "128", "--extent", "12"])
        .args(["--times", "1,2"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(out.join("snapshot_t000001000000.csv").exists());
    assert!(out.join("snapshot_t000002000000.csv").exists());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("sharpness gap"), "{text}");

    let out = dir.join("ar");
    let output = bin()
        .args(["aronson", "--gamma", "2", "--cells", "512", "--t-end", "0.3", "--cap", "60"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(out.join("aronson_series.csv").exists());
    let fit = fs::read_to_string(out.join("aronson_fit.txt")).unwrap();
    assert!(fit.contains("blow-up detected"), "{fit}");
}

#[test]
fn report_regenerates_from_csv() {
    let dir = tmp("report");
    let cfg = write(&dir, "scenario.cfg", BARENBLATT_RUN);
    let out = dir.join("out");
    assert_eq!(
        bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap().code(),
        Some(0)
    );
    // delete the SVGs, regenerate them from the CSVs
    for entry in fs::read_dir(&out).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "svg") {
            fs::remove_file(p).unwrap();
        }
    }
    let output = bin().args(["report", "--dir"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(out.join("bound_LINF_NO_G_B1.svg").exists());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("PASS"), "{text}");
}

#[test]
fn help_and_unknown_subcommand() {
    let output = bin().arg("--help").output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    for sub in ["run", "sweep", "verify-weights", "barenblatt", "aronson", "hele-shaw", "report"] {
        assert!(text.contains(sub), "help is missing `{sub}`");
    }
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}
