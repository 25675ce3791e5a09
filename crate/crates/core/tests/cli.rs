use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ep_spectra::io::ModelConfig;
use ep_spectra::preset;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ep-spectra")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reproduce_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce", "fig1a-d", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for ext in ["csv", "ep.txt", "plot", "manifest.toml"] {
        assert!(dir.path().join(format!("fig1a-d.{ext}")).is_file(), "{ext}");
    }
    let csv = fs::read_to_string(dir.path().join("fig1a-d.csv")).unwrap();
    assert!(csv.lines().count() > 1001);
    assert!(csv.starts_with("a,E_1,E_2,G2_1,G2_2,r_1,r_2,"));
    let report: toml::Table = fs::read_to_string(dir.path().join("fig1a-d.ep.txt")).unwrap().parse().unwrap();
    let at: Vec<f64> =
        report["location"].as_array().unwrap().iter().map(|l| l["a_star"].as_float().unwrap()).collect();
    assert_eq!(at.len(), 2);
    assert!((at[0] + 0.1).abs() < 1e-6 && (at[1] - 0.1).abs() < 1e-6, "{at:?}");
    let plot = fs::read_to_string(dir.path().join("fig1a-d.plot")).unwrap();
    assert!(plot.contains("fig1a-d.csv"));
}

#[test]
fn reproduce_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(run(&["reproduce", "fig1a-d", "--out", path(d.path())]).status.code(), Some(0));
    }
    for f in ["fig1a-d.csv", "fig1a-d.manifest.toml", "fig1a-d.ep.txt"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn unknown_preset_lists_valid_ids() {
    let o = run(&["reproduce", "bogus-id"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fig7-4lev-complex"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["reproduce", "fig1a-d", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&["reproduce", "fig1a-d", "--points", "11", "--out", path(&blocker.join("sub"))]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_matching_a_preset_gives_the_same_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("custom.toml");
    fs::write(&cfg, ModelConfig::from_preset(&preset::<f64>("fig1e-h").unwrap()).to_toml()).unwrap();
    assert_eq!(run(&["reproduce", "fig1e-h", "--out", path(dir.path())]).status.code(), Some(0));
    let o = run(&["sweep", "--config", path(&cfg), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read(dir.path().join("fig1e-h.csv")).unwrap(), fs::read(dir.path().join("custom.csv")).unwrap());
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "n = 2\ntopology = \n").unwrap();
    let o = run(&["sweep", "--config", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let mut cfg = ModelConfig::from_preset(&preset::<f64>("fig1a-d").unwrap());
    cfg.sweep.min = 0.5;
    cfg.sweep.max = 0.5;
    fs::write(&bad, cfg.to_toml()).unwrap();
    assert_eq!(run(&["sweep", "--config", path(&bad)]).status.code(), Some(2));
}

#[test]
fn four_level_preset_has_sixteen_mixing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce", "fig7-4lev-complex", "--points", "101", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("fig7-4lev-complex.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(header.split(',').filter(|c| c.starts_with("b_")).count(), 16);
    assert!(header.contains("E_4") && !header.contains("E_5"));
}

#[test]
fn locate_ep_single_root() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["locate-ep", "--preset", "fig2e-h", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("exact-root")).unwrap();
    assert!(line.trim_start().starts_with("0.9") || line.trim_start().starts_with("0.8999999"), "{line}");
    assert!(line.contains("exceptional"), "{line}");
    assert!(dir.path().join("fig2e-h.ep.txt").is_file());
}

#[test]
fn locate_ep_gain_loss_window() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["locate-ep", "--preset", "fig3a-d", "--out", path(dir.path())]);
    let out = stdout(&o);
    assert_eq!(out.matches("exact-root").count(), 2, "{out}");
    assert!(out.contains("real spectrum for a in (-1, 1)"), "{out}");
}

#[test]
fn locate_ep_without_coupling_finds_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ModelConfig::from_preset(&preset::<f64>("fig1e-h").unwrap());
    cfg.omega_re = 0.0;
    cfg.omega_im = 0.0;
    let file = dir.path().join("uncoupled.toml");
    fs::write(&file, cfg.to_toml()).unwrap();
    let o = run(&["locate-ep", "--config", path(&file), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("none found in range"));
}

#[test]
fn presets_dump_round_trips() {
    let o = run(&["presets", "--dump", "fig6-3lev"]);
    assert_eq!(o.status.code(), Some(0));
    let back = ModelConfig::parse(&stdout(&o)).unwrap().sweep_config::<f64>().unwrap();
    assert_eq!(back.spec, preset::<f64>("fig6-3lev").unwrap().spec);
    let list = stdout(&run(&["presets"]));
    assert_eq!(list.lines().count(), 14);
    assert_eq!(run(&["info"]).status.code(), Some(0));
}

#[test]
fn grid_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "reproduce", "fig1a-d", "--points", "21", "--min", "-0.2", "--max", "0.2", "--no-refine", "--seedless",
        "--out", path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("fig1a-d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22);
    assert_eq!(run(&["reproduce", "fig1a-d", "--min", "0.3", "--max", "0.1"]).status.code(), Some(2));
}
