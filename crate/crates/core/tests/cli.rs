use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gevrey-lab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

const SMALL: &str = "name = small
seed = 5
[model]
kind = navier-stokes
[grid]
n = 8
[time]
t_end = 0.05
dt = 0.01
log_cadence = 0.01
[initial]
kind = synthetic
beta = 1
[diagnostics]
checks = norms, radius, energy
[output]
dir = out
format = both
snapshots = true
";

#[test]
fn missing_config_and_bad_values_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["simulate"]);
    assert_eq!(code(&o), 2);

    fs::write(dir.path().join("bad.cfg"), SMALL.replace("n = 8", "n = 8\ndealias = 1.5")).unwrap();
    let o = lab(dir.path(), &["--config", "bad.cfg", "simulate"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dealias"));

    fs::write(dir.path().join("typo.cfg"), SMALL.replace("dt = 0.01", "dt = 0.01\nstep = 2")).unwrap();
    let o = lab(dir.path(), &["--config", "typo.cfg", "simulate"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("time.step"));
}

#[test]
fn unreadable_inputs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["--config", "nowhere.cfg", "simulate"]);
    assert_eq!(code(&o), 4);

    fs::write(dir.path().join("junk.bin"), b"not a snapshot").unwrap();
    let cfg = SMALL.replace("kind = synthetic\nbeta = 1", "kind = snapshot\npath = junk.bin");
    fs::write(dir.path().join("snap.cfg"), cfg).unwrap();
    let o = lab(dir.path(), &["--config", "snap.cfg", "simulate"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn simulate_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s.cfg"), SMALL).unwrap();
    let read_all = |sub: &str| {
        let mut files: Vec<_> = fs::read_dir(dir.path().join(sub))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        files
            .iter()
            .map(|p| (p.file_name().unwrap().to_owned(), fs::read(p).unwrap()))
            .collect::<Vec<_>>()
    };
    assert_eq!(code(&lab(dir.path(), &["--config", "s.cfg", "--out-dir", "a", "simulate"])), 0);
    assert_eq!(code(&lab(dir.path(), &["--config", "s.cfg", "--out-dir", "b", "--threads", "1", "simulate"])), 0);
    let (a, b) = (read_all("a"), read_all("b"));
    assert!(a.iter().any(|(n, _)| n.to_string_lossy() == "small_series.csv"));
    assert!(a.iter().any(|(n, _)| n.to_string_lossy().ends_with(".gvry")));
    assert_eq!(a, b);

    assert_eq!(code(&lab(dir.path(), &["--config", "s.cfg", "--out-dir", "c", "--seed", "6", "simulate"])), 0);
    let c = read_all("c");
    assert_ne!(a, c);
}

#[test]
fn oracle_stage_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "name = ch\n[model]\nkind = burgers\n[grid]\nn = 16\nbox_length = 20\n[time]\nt_start = 1\nt_end = 3\ndt = 0.01\nlog_cadence = 0.5\n[initial]\nkind = cole-hopf\n";
    fs::write(dir.path().join("o.cfg"), cfg).unwrap();
    let o = lab(dir.path(), &["--config", "o.cfg", "--quiet", "oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(dir.path().join("out/ch_oracle.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("time,"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn numerical_failure_leaves_a_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("z.cfg"), format!("{SMALL}[stability]\ndeltas = 0\n")).unwrap();
    let o = lab(dir.path(), &["--config", "z.cfg", "stability"]);
    assert_eq!(code(&o), 3);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/small_failure.json")).unwrap()).unwrap();
    assert_eq!(report["data"]["exit_code"], 3);
    assert_eq!(report["parameters"]["name"], "small");
}

#[test]
fn verify_subset_reports_each_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(dir.path(), &["verify", "--only", "1"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("PASS"));
}
