use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn histotex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_histotex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Writes a 20/class synthetic set of 32x32 images; returns the manifest.
fn synth(dir: &Path, per_class: &str) -> std::path::PathBuf {
    let o = histotex(&["synth", "--per-class", per_class, "--width", "32", "--height", "32", "--seed", "3", "--out", p(dir)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir.join("manifest.csv")
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&histotex(&["--help"])), 0);
    assert_eq!(code(&histotex(&["frobnicate"])), 1);
    assert_eq!(code(&histotex(&["run"])), 1);
    assert_eq!(code(&histotex(&["run", "--manifest", "m.csv", "--k", "1"])), 1);
    assert_eq!(code(&histotex(&["run", "--manifest", "m.csv", "--designs", "FS,XX,DT"])), 1);
}

#[test]
fn missing_manifest_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.csv");
    assert_eq!(code(&histotex(&["extract", "--manifest", p(&missing), "--out", p(dir.path())])), 2);
}

#[test]
fn extract_shape_rerun_and_corrupt_image() {
    let dir = TempDir::new().unwrap();
    let manifest = synth(&dir.path().join("data"), "20");
    assert_eq!(fs::read_to_string(&manifest).unwrap().lines().count(), 61);

    let out_a = dir.path().join("a");
    let o = histotex(&["extract", "--manifest", p(&manifest), "--size", "native", "--out", p(&out_a)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let features = fs::read(out_a.join("features.csv")).unwrap();
    let mut r = csv::Reader::from_reader(features.as_slice());
    let header = r.headers().unwrap().clone();
    assert_eq!(header.len(), 41);
    assert_eq!(&header[0], "path");
    assert_eq!(&header[2], "fos_mean");
    assert_eq!(r.records().count(), 60);

    let out_b = dir.path().join("b");
    histotex(&["extract", "--manifest", p(&manifest), "--size", "native", "--out", p(&out_b)]);
    assert_eq!(features, fs::read(out_b.join("features.csv")).unwrap());

    fs::write(dir.path().join("data/images/noise_004.png"), b"not a png").unwrap();
    let out_c = dir.path().join("c");
    let o = histotex(&["extract", "--manifest", p(&manifest), "--size", "native", "--out", p(&out_c)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("noise_004"));
    let text = fs::read_to_string(out_c.join("features.csv")).unwrap();
    assert_eq!(text.lines().count(), 60);

    let o = histotex(&["stats", "--features", p(&out_a.join("features.csv")), "--out", p(&out_a)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let sig = fs::read_to_string(out_a.join("significance.csv")).unwrap();
    assert_eq!(sig.lines().count(), 40);
    assert!(sig.starts_with("feature,H,p_raw,p_adj,significant"));
    let boxes = fs::read_to_string(out_a.join("boxplot.csv")).unwrap();
    assert_eq!(boxes.lines().count(), 1 + 39 * 3);
}

#[test]
fn stats_needs_three_classes() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("path,label");
    for k in 0..39 {
        text.push_str(&format!(",f{k}"));
    }
    text.push('\n');
    for i in 0..10 {
        text.push_str(&format!("x{i}.png,{}", if i % 2 == 0 { "a" } else { "b" }));
        for k in 0..39 {
            text.push_str(&format!(",{}", (i * k) % 7));
        }
        text.push('\n');
    }
    let f = dir.path().join("features.csv");
    fs::write(&f, text).unwrap();
    assert_eq!(code(&histotex(&["stats", "--features", p(&f), "--out", p(dir.path())])), 2);
}

#[test]
fn run_single_design_with_config_file() {
    let dir = TempDir::new().unwrap();
    let manifest = synth(&dir.path().join("data"), "5");
    let config = dir.path().join("run.conf");
    // the flag below overrides k; b and size come from the file
    fs::write(&config, "k = 3\nb = 2\nsize = native\nseed = 5\n").unwrap();
    let out = dir.path().join("out");
    let o = histotex(&[
        "run", "--manifest", p(&manifest), "--config", p(&config), "--k", "5",
        "--designs", "FS,DC,SVM-LK", "--out", p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(out.join("table3.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("\"FS,DC,SVM-LK\",ok,"));
    let json: serde_json::Value = serde_json::from_slice(&fs::read(out.join("table3.json")).unwrap()).unwrap();
    assert_eq!(json[0]["report"]["k"], 5);
    assert_eq!(json[0]["report"]["budget"], 2);
    let rates = fs::read_to_string(out.join("selection_rate.csv")).unwrap();
    assert_eq!(rates.lines().count(), 40);
    for fold in 0..5 {
        let h = fs::read_to_string(out.join(format!("histories/FS_DC_SVM-LK_fold{fold}.csv"))).unwrap();
        assert_eq!(h.lines().count(), 3);
    }
}
