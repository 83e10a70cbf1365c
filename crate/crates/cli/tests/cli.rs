use std::path::Path;
use std::process::{Command, Output};

fn tnim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnim")).args(args).output().expect("spawn tnim")
}

fn stdout(args: &[&str]) -> String {
    let out = tnim(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    tnim(args).status.code().unwrap()
}

#[test]
fn nim_subcommands() {
    assert_eq!(stdout(&["nim", "sum", "5", "3"]), "6\n");
    assert_eq!(stdout(&["nim", "outcome", "1", "2", "3"]), "P\n");
    assert_eq!(stdout(&["nim", "misere", "1", "1"]), "N\n");
    assert_eq!(stdout(&["nim", "misere", "1", "1", "1"]), "P\n");
    assert_eq!(stdout(&["--json", "nim", "sum", "8", "8"]), "{\"nim_sum\":0}\n");
}

#[test]
fn solve_and_ray() {
    let g = tnim_core::TreeSolver::new().grundy(&tnim_core::TreePosition::path(&[1, 2, 3])).unwrap();
    assert_eq!(stdout(&["solve", "--path", "1,2,3"]), format!("N {g}\n"));
    assert_eq!(stdout(&["solve", "--tripod", "1,1,1,1"]), "P 0\n");
    assert_eq!(stdout(&["ray", "complete", "--path", "3", "--attach", "0"]), "3\n");
}

#[test]
fn tree_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.json");
    std::fs::write(&f, r#"{"vertices":[{"id":0,"size":2},{"id":1,"size":3},{"id":2,"size":3}],"edges":[[0,1],[0,2]]}"#)
        .unwrap();
    let out = stdout(&["--json", "solve", "--tree", f.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["vertices"], 3);
    assert_eq!(v["total_coins"], 8);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["nim", "sum", "x", "1"]), 2);
    assert_eq!(code(&["solve", "--tripod", "1,2"]), 2);
    assert_eq!(code(&["solve", "--tree", "/nonexistent/tree.json"]), 2);
    assert_eq!(code(&["equiv", "--c1", "2", "--c2", "5", "--extent", "40"]), 1);
    assert_eq!(code(&["equiv", "--c1", "2", "--c2", "5", "--extent", "40", "--mode", "p-positions"]), 0);
    assert_eq!(code(&["dynsys", "d3-conjecture", "--n", "1", "--exhaustive"]), 1);
    assert_eq!(code(&["dynsys", "sweep-d1", "--n", "3"]), 0);
    assert_eq!(code(&["band", "--center", "2", "--vmax", "6", "--dim", "512"]), 0);
    assert_eq!(code(&["band", "--center", "2", "--vmax", "6", "--dim", "16"]), 1);
}

#[test]
fn undefined_dk_step_is_negative() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("state.txt");
    std::fs::write(&f, "0111\n0011\n").unwrap();
    let out = tnim(&["dynsys", "dk", "--k", "2", "--n", "1", "--state", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["undefined"]["step"], 0);
}

#[test]
fn array_outputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let bin = dir.path().join("a.tnim");
    stdout(&["array", "--center", "6", "--dim", "40", "--out", csv.to_str().unwrap()]);
    stdout(&["array", "--center", "6", "--dim", "40", "--out", bin.to_str().unwrap()]);
    let from_bin = tnim_core::tripod::read_tnim(&bin).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), tnim_core::tripod::to_csv(&from_bin));
    assert_eq!(stdout(&["array", "--center", "6", "--dim", "40"]), tnim_core::tripod::to_csv(&from_bin));
    assert_eq!(stdout(&["array", "--center", "6", "--dim", "40", "--layers"]), tnim_core::tripod::to_csv(&from_bin));
    assert_eq!(code(&["array", "--center", "6", "--dim", "4", "--out", "a.txt"]), 2);
}

#[test]
fn cache_is_keyed_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let first = stdout(&["--use-cache", "--cache-dir", c, "array", "--center", "3", "--dim", "24"]);
    let file = cache.join("c3-d24-v1.tnim");
    assert!(file.exists());
    let second = stdout(&["--use-cache", "--cache-dir", c, "array", "--center", "3", "--dim", "24"]);
    assert_eq!(first, second);

    // A damaged cache file is reported and replaced, never trusted.
    std::fs::write(&file, b"JUNK").unwrap();
    let out = tnim(&["--use-cache", "--cache-dir", c, "array", "--center", "3", "--dim", "24"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), first);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring cache file"));
    assert!(tnim_core::tripod::read_tnim(&file).is_ok());
}

#[test]
fn period_table_csv() {
    let t = stdout(&["period", "table", "--center", "2", "--rows", "0..=3", "--terms", "2000"]);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "0,1,verified_on_window");
    assert_eq!(lines[1], "1,2,verified_on_window");
    let single = stdout(&["--json", "period", "--center", "2", "--row", "7", "--terms", "2000"]);
    let v: serde_json::Value = serde_json::from_str(&single).unwrap();
    assert_eq!(v["period"], 8);
}

#[test]
fn empty_plot_window() {
    let svg = stdout(&["plot", "--kind", "band", "--center", "6", "--vmax", "22", "--rows", "5..5", "--cols", "0..10"]);
    assert!(svg.starts_with("<svg"));
    assert!(!svg.contains("<rect"));
    let pgm = tnim(&["plot", "--kind", "band", "--center", "6", "--vmax", "22", "--rows", "0..0", "--cols", "0..0", "--format", "pgm"]);
    assert_eq!(pgm.stdout, b"P5\n0 0\n255\n");
}

#[test]
fn plot_needs_its_parameters() {
    assert_eq!(code(&["plot", "--kind", "compare", "--c1", "2"]), 2);
    assert_eq!(code(&["plot", "--kind", "band", "--center", "2"]), 2);
}

fn run_bytes(args: &[&str], out: Option<&Path>) -> Vec<u8> {
    let o = tnim(args);
    assert!(o.status.code().unwrap() <= 1, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    match out {
        Some(p) => std::fs::read(p).unwrap(),
        None => o.stdout,
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cmp.svg");
    let svg_s = svg.to_str().unwrap();
    let cases: Vec<(Vec<&str>, Option<&Path>)> = vec![
        (vec!["array", "--center", "5", "--dim", "64"], None),
        (vec!["--json", "period", "table", "--center", "4", "--rows", "0..8", "--terms", "1000"], None),
        (vec!["shadow", "--tripod-center", "2", "--thresholds", "4,4,4", "--horizon", "6"], None),
        (vec!["equiv", "--c1", "2", "--c2", "5", "--extent", "64"], None),
        (vec!["dynsys", "d3-conjecture", "--n", "2", "--samples", "300", "--rng-seed", "7"], None),
        (vec!["plot", "--kind", "compare", "--c1", "2", "--c2", "5", "--out", svg_s], Some(svg.as_path())),
    ];
    for (args, out) in &cases {
        let a = run_bytes(args, *out);
        let b = run_bytes(args, *out);
        assert_eq!(a, b, "{args:?} differs between runs");
        let mut wide = vec!["--workers", "4"];
        wide.extend(args.iter());
        assert_eq!(a, run_bytes(&wide, *out), "{args:?} depends on the worker count");
    }
}
