use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use tempfile::TempDir;

use extoric::io::{read_binary_alists, read_qary_alist, write_qary_alist};
use extoric::Field;

fn extoric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extoric")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn build(dir: &Path, n: usize, m: u32, seed: u64) -> Output {
    let o = extoric(&[
        "build",
        "--n",
        &n.to_string(),
        "--m",
        &m.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    o
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_reports_length_dimension_and_rate() {
    let tmp = TempDir::new().unwrap();
    let o = build(&tmp.path().join("a"), 8, 9, 1);
    assert_eq!(stdout(&o), "length 1152\ndimension 18\nrate 1/64\n");
    let o = build(&tmp.path().join("b"), 24, 1, 1);
    assert!(stdout(&o).ends_with("rate 1/576\n"));
    let o = build(&tmp.path().join("c"), 12, 4, 1);
    assert!(stdout(&o).ends_with("rate 1/144\n"));
}

#[test]
fn generic_lift_from_skeleton_file_verifies() {
    let tmp = TempDir::new().unwrap();
    let skel = tmp.path().join("toric_n2.alist");
    assert!(extoric(&["skeleton", "--n", "2", "--out", path(&skel)]).status.success());
    let out = tmp.path().join("gen");
    let o = extoric(&["build", "--skeleton", path(&skel), "--m", "2", "--seed", "5", "--out", path(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("skeleton.alist").exists());
    let v = extoric(&["verify", path(&out)]);
    assert!(v.status.success(), "{}", stdout(&v));
}

#[test]
fn fresh_and_binary_bundles_verify() {
    let tmp = TempDir::new().unwrap();
    for m in [1, 3] {
        let dir = tmp.path().join(format!("m{m}"));
        build(&dir, 3, m, 2);
        let v = extoric(&["verify", path(&dir), "--json"]);
        assert!(v.status.success());
        let report: serde_json::Value = serde_json::from_str(&stdout(&v)).unwrap();
        let checks = report["checks"].as_array().unwrap();
        assert_eq!(checks.len(), 10);
        assert!(checks.iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn mutated_entry_is_rejected_by_name() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("b");
    build(&dir, 3, 2, 4);
    let field = Arc::new(Field::new(2).unwrap());
    let hx_path = dir.join("hx.alist");
    let mut hx = read_qary_alist(&fs::read_to_string(&hx_path).unwrap(), field).unwrap();
    let (j, v) = hx.row(0)[0];
    hx.set(0, j, if v == 1 { 2 } else { 1 });
    fs::write(&hx_path, write_qary_alist(&hx)).unwrap();
    let o = extoric(&["verify", path(&dir)]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("orthogonality") || err.contains("cycle"), "{err}");
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn distance_and_dimension_of_small_bundle() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("b");
    build(&dir, 2, 2, 7);
    for side in ["X", "Z"] {
        let o = extoric(&["distance", path(&dir), "--side", side]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "2");
    }
    let o = extoric(&["dimension", path(&dir)]);
    assert_eq!(stdout(&o), "rank H_X 3\nrank H_Z 3\nq-ary dimension 2\nqubit dimension 4\n");
}

#[test]
fn simulate_writes_csv_and_metadata() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("b");
    build(&dir, 4, 2, 1);
    let csv = tmp.path().join("out.csv");
    let o = extoric(&[
        "simulate", path(&dir), "--p-grid", "0.01,0.04", "--trials", "50", "--seed", "11", "--out", path(&csv),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "p,trials,wer,wer_lo,wer_hi,qer,x_word_errors,z_word_errors,nonconverged,seed,n,m,max_iters"
    );
    assert_eq!(text.lines().count(), 3);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["poly"], 7);
    assert_eq!(meta["code_seed"], 1);
    assert_eq!(meta["max_iters"], 100);
}

#[test]
fn binary_export_is_orthogonal_over_gf2() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("b");
    build(&dir, 3, 2, 6);
    let out = tmp.path().join("bin.alist");
    assert!(extoric(&["export", path(&dir), "--binary", "--out", path(&out)]).status.success());
    let blocks = read_binary_alists(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].cols(), 2 * 2 * 9);
    blocks[0].check_orthogonal(&blocks[1]).unwrap();
}

#[test]
fn bundles_and_csv_are_byte_stable() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    build(&a, 4, 3, 9);
    build(&b, 4, 3, 9);
    for f in ["hx.alist", "hz.alist", "meta.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let run = |name: &str| {
        let csv = tmp.path().join(name);
        let o = extoric(&["simulate", path(&a), "--p-grid", "0.03", "--trials", "40", "--seed", "2", "--out", path(&csv)]);
        assert!(o.status.success());
        fs::read(csv).unwrap()
    };
    assert_eq!(run("x.csv"), run("y.csv"));
}

#[test]
fn error_paths_have_distinct_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("missing");
    assert_eq!(extoric(&["verify", path(&missing)]).status.code(), Some(3));
    assert_eq!(extoric(&["build", "--m", "2", "--seed", "1"]).status.code(), Some(2));
    let o = extoric(&["build", "--n", "1", "--m", "2", "--seed", "1", "--out", path(&tmp.path().join("x"))]);
    assert_eq!(o.status.code(), Some(6));
    assert!(stderr(&o).contains("invalid parameter"));

    let dir = tmp.path().join("big");
    build(&dir, 8, 9, 1);
    let o = extoric(&["distance", path(&dir)]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("budget"));
    let csv = path(&tmp.path().join("s.csv")).to_string();
    let o = extoric(&["simulate", path(&dir), "--p-grid", "0.8", "--trials", "5", "--seed", "1", "--out", &csv]);
    assert_eq!(o.status.code(), Some(6));
    let o = extoric(&["simulate", path(&dir), "--p-grid", "0.1", "--trials", "0", "--seed", "1", "--out", &csv]);
    assert_eq!(o.status.code(), Some(6));
}
