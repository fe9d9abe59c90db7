use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dris(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dris"))
        .args(args)
        .output()
        .expect("spawn dris")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn switch_fom_cutoff() {
    let v = json(&dris(&[
        "switch", "fom", "--ron", "6.13", "--con", "18.5f", "--roff", "4300", "--coff", "19f",
    ]));
    let fc = v["cutoff_thz"].as_f64().unwrap();
    assert!((fc - 1.366).abs() < 1e-3, "{fc}");
    assert!((v["z_on_mag_ohm"].as_f64().unwrap() - 6.0997).abs() < 1e-3);
    assert!((v["z_off_mag_ohm"].as_f64().unwrap() - 59.827).abs() < 1e-2);
}

#[test]
fn switch_fom_accepts_units() {
    let a = dris(&[
        "switch", "fom", "--ron", "6.13ohm", "--coff", "0.019pF", "--freq", "0.14THz",
    ]);
    let b = dris(&[
        "switch", "fom", "--ron", "6.13", "--coff", "19fF", "--freq", "140",
    ]);
    assert_eq!(json(&a), json(&b));
}

#[test]
fn grating_modes_at_4mm() {
    let v = json(&dris(&[
        "grating", "modes", "--period", "4mm", "--freq", "150GHz",
    ]));
    let modes = v.as_array().unwrap();
    let propagating: Vec<i64> = modes
        .iter()
        .filter(|m| m["propagating"].as_bool().unwrap())
        .map(|m| m["n"].as_i64().unwrap())
        .collect();
    assert_eq!(propagating, [-1, 0, 1]);
    for m in modes {
        assert!(m.get("theta_deg").is_some());
    }
}

#[test]
fn grating_pattern_csv() {
    let out = dris(&[
        "grating",
        "pattern",
        "--period",
        "6mm",
        "--freq",
        "150GHz",
        "--aperture",
        "60mm",
        "--step",
        "0.5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == dband_ris::io::PATTERN_HEADER));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 361);
}

#[test]
fn fspl_one_meter() {
    let v = json(&dris(&["fspl", "--freq", "140GHz", "--dist", "1m"]));
    let loss = v["fspl_db"].as_f64().unwrap();
    assert!((loss - 75.4).abs() < 0.05, "{loss}");
}

#[test]
fn unitcell_metrics_pcm() {
    let path = fixture("pcm_tris_approx.csv");
    let v = json(&dris(&[
        "unitcell",
        "metrics",
        path.to_str().unwrap(),
        "--freq",
        "140GHz",
    ]));
    assert_eq!(v["kind"], "transmissive");
    assert!((v["states"][0]["insertion_loss_db"].as_f64().unwrap() - 0.69).abs() < 1e-9);
    assert!((v["phase_difference_deg"][0].as_f64().unwrap().abs() - 180.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(
        code(&dris(&[
            "fspl", "--freq", "140GHz", "--dist", "1m", "--bogus"
        ])),
        1
    );
    assert_eq!(code(&dris(&["nonsense"])), 1);
    assert_eq!(code(&dris(&["fspl", "--freq", "abc", "--dist", "1m"])), 1);
    assert_eq!(code(&dris(&[])), 1);
}

#[test]
fn help_and_version_exit_0() {
    for args in [
        &["--help"][..],
        &["--version"],
        &["switch", "fom", "--help"],
        &["grating", "pattern", "--help"],
    ] {
        let out = dris(args);
        assert_eq!(code(&out), 0, "{args:?}");
    }
    let help = String::from_utf8(dris(&["switch", "fom", "--help"]).stdout).unwrap();
    for flag in ["--ron", "--con", "--roff", "--coff", "--freq", "--z0"] {
        assert!(help.contains(flag), "{flag} undocumented");
    }
}

#[test]
fn domain_errors_exit_1() {
    let out = dris(&["fspl", "--freq", "140GHz", "--dist", "0"]);
    assert_eq!(code(&out), 1);
    let out = dris(&["switch", "fom", "--ron", "5000"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_table_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "schema_version = 1\nmode = \"transmit-collimate\"\nfreq_ghz = 140.0\n\n[array]\nnx = 4\nny = 4\npitch_mm = 1.0\n\n[cell]\ntable = \"missing.csv\"\n\n[target]\ntheta_deg = 0.0\n",
    )
    .unwrap();
    let out = dris(&[
        "run",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("cell.table"), "{stderr}");
    assert!(stderr.contains("line 11"), "{stderr}");
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out_dir = blocker.join("sub");
    let out = dris(&[
        "run",
        fixture("grating-6mm.toml").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn steer_scenario_peak_in_window() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&dris(&[
        "run",
        fixture("schottky-steer-30.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    let peak = v["metrics"]["peak_deg"].as_f64().unwrap();
    assert!((28.0..=32.0).contains(&peak), "{peak}");
    assert_eq!(v["scenario_hash"].as_str().unwrap().len(), 64);
    let summary: Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("schottky-steer-30_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary, v);
}

#[test]
fn gain_summary_for_pcm() {
    let v = json(&dris(&[
        "gain",
        fixture("pcm-tris-broadside.toml").to_str().unwrap(),
    ]));
    let g = v["details"]["target_gain_dbi"].as_f64().unwrap();
    let limit = v["details"]["aperture_limit_dbi"].as_f64().unwrap();
    assert!(g > 10.0 && g < limit, "{g} vs {limit}");
    assert_eq!(v["normalization"], "AbsoluteGainDbi");
}

#[test]
fn synthesize_pattern_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for scenario in ["schottky-steer-30.toml", "pcm-tris-broadside.toml"] {
        let s = fixture(scenario);
        let s = s.to_str().unwrap();
        let map = dir.path().join("map.csv");
        assert!(dris(&["synthesize", s, "--out", map.to_str().unwrap()])
            .status
            .success());
        let direct = dris(&["pattern", s]);
        let replay = dris(&["pattern", s, "--statemap", map.to_str().unwrap()]);
        assert!(direct.status.success() && replay.status.success());
        assert_eq!(direct.stdout, replay.stdout, "{scenario}");
    }
}

#[test]
fn corrupted_statemap_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.csv");
    std::fs::write(
        &map,
        "ix,iy,state,ideal_phase_deg,residual_deg\n0,0,000,0,0\n",
    )
    .unwrap();
    let out = dris(&[
        "pattern",
        fixture("schottky-steer-30.toml").to_str().unwrap(),
        "--statemap",
        map.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "3", "8"] {
        let out = dir.path().join(threads);
        let status = Command::new(env!("CARGO_BIN_EXE_dris"))
            .env("DRIS_THREADS", threads)
            .args([
                "run",
                fixture("pcm-tris-broadside.toml").to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(status.status.success());
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        runs.push((files, status.stdout));
    }
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

#[test]
fn bad_thread_env_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_dris"))
        .env("DRIS_THREADS", "zero")
        .args(["fspl", "--freq", "140", "--dist", "1m"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}
