use std::path::Path;
use std::process::{Command, Output};

use cageflow::dataset::DatasetManifest;

fn cageflow(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cageflow")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn version_reports_semver_and_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = cageflow(&["--version"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), format!("cageflow {} (tensor format 1)", env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_errors_exit_1_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["bogus"][..], &["gen", "--count"], &["eval", "--prediction", "p"], &[]] {
        let o = cageflow(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn runtime_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = cageflow(&["decode", "--flow", "missing.tensor", "--plan", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = cageflow(&["gen", "--n", "4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be at least 8"));
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = cageflow(&["gen", "--count", "4", "--group", "sparse-proxy", "--seed", "7", "--out", out, "--verify"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |d: &str| std::fs::read_to_string(dir.path().join(d).join("manifest.json")).unwrap();
    assert_eq!(read("a"), read("b"));
    let m: DatasetManifest = serde_json::from_str(&read("a")).unwrap();
    assert_eq!(m.samples.len(), 4);
    for s in &m.samples {
        for f in s.files.values() {
            assert_eq!(std::fs::read(dir.path().join("a").join(&f.path)).unwrap(), std::fs::read(dir.path().join("b").join(&f.path)).unwrap());
        }
    }
    let o = cageflow(&["gen", "--count", "4", "--group", "sparse-proxy", "--seed", "8", "--out", "c"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(read("a"), read("c"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.json"), r#"{"n": 16, "count": 3, "groups": ["dense-proxy", "sparse-proxy"], "png": false}"#).unwrap();
    let o = cageflow(&["gen", "--config", "run.json", "--count", "2", "--out", "ds"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for g in ["dense-proxy", "sparse-proxy"] {
        let m: DatasetManifest = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ds").join(g).join("manifest.json")).unwrap()).unwrap();
        assert_eq!((m.n, m.samples.len()), (16, 2));
        assert!(m.samples.iter().all(|s| !s.files.contains_key("y_png")));
    }
    std::fs::write(dir.path().join("bad.json"), r#"{"n": 16, "colour": "red"}"#).unwrap();
    assert_eq!(cageflow(&["gen", "--config", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn eval_identical_maps_scores_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cageflow(&["gen", "--count", "1", "--seed", "3", "--out", "ds"], dir.path()).status.code(), Some(0));
    let y = "ds/samples/000000/y.tensor";
    let o = cageflow(&["eval", "--prediction", y, "--truth", y, "--case-id", "same", "--regime", "dense", "--out", "ev"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "case_id,regime,goal,mae,kl\nsame,Dense,G-centric,0.0,0.0\n");
    let x = "ds/samples/000000/x.tensor";
    let o = cageflow(&["eval", "--prediction", x, "--truth", y, "--input", x], dir.path());
    assert_eq!(o.status.code(), Some(2), "five-channel prediction");
    let o = cageflow(&["eval", "--prediction", y, "--truth", y, "--input", x], dir.path());
    assert!(stdout(&o).ends_with(",0.0,0.0\n"));
    let reports = cageflow::metrics::read_reports_csv(&dir.path().join("ev/report.csv")).unwrap();
    assert_eq!((reports[0].mae, reports[0].kl), (0.0, 0.0));
}

#[test]
fn decode_checks_the_plan() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cageflow(&["gen", "--count", "2", "--seed", "5", "--out", "ds"], dir.path()).status.code(), Some(0));
    let o = cageflow(&["decode", "--flow", "ds/samples/000000/y.tensor", "--plan", "ds/samples/000001/plan.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension mismatch"));

    let o = cageflow(&["decode", "--flow", "ds/samples/000000/y.tensor", "--plan", "ds/samples/000000/plan.json", "--out", "dec"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let decoded = cageflow::codec::format::read_raw_file(&dir.path().join("dec/decoded.tensor")).unwrap();
    let full = cageflow::codec::format::read_raw_file(&dir.path().join("ds/samples/000000/y_full.tensor")).unwrap();
    assert_eq!((decoded.header.height, decoded.header.width), (full.header.height, full.header.width));
    let sum = |t: &[f32]| t.iter().map(|&v| v as f64).sum::<f64>();
    assert!((sum(decoded.channel(0)) - sum(full.channel(0))).abs() < 1e-4);
}

#[test]
fn scenario_commands_chain() {
    let dir = tempfile::tempdir().unwrap();
    let o = cageflow(&["encode", "--seed", "4", "--n", "32", "--out", "enc"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["scenario.json", "plan.json", "x.tensor"] {
        assert!(dir.path().join("enc").join(f).exists());
    }
    for (cmd, out) in [("flow", "fl"), ("simulate", "sim")] {
        let o = cageflow(&[cmd, "--scenario", "enc/scenario.json", "--regime", "dense", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(dir.path().join(out).join("flow.png").exists());
    }
    assert!(std::fs::read_to_string(dir.path().join("sim/trajectories.jsonl")).unwrap().lines().count() > 0);
    let o = cageflow(&["render", "--tensor", "enc/x.tensor", "--out", "img"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read(dir.path().join("img/x.png")).unwrap().starts_with(b"\x89PNG"));
    let o = cageflow(&["render", "--tensor", "enc/x.tensor", "--channel", "9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
