use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pentalab"));
    c.env_remove("PENTALAB_SEED");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn condense_example() {
    let out = run(&["condense", data("matrix3.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["determinant"], "-3");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn closed_polygon_has_omega_27() {
    let out = run(&["invariants", data("conic_hexagon.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["report"]["omega_from_invariants"], serde_json::json!(["27", "27"]));
    assert_eq!(v["report"]["omega_from_monodromy"], serde_json::json!(["27", "27"]));
    assert_eq!(v["report"]["odd_n"], v["report"]["even_n"]);
}

#[test]
fn rectilinear_edges_profile() {
    let v = json(&run(&["invariants", data("rectilinear_edges.json").to_str().unwrap()]));
    let r = &v["report"];
    let zeros = |key: &str| r[key].as_array().unwrap()[1..6].iter().all(|t| t == "0");
    assert!(zeros("odd") && zeros("even"));
    assert_eq!(r["odd"][6], "2");
    assert_eq!(r["even"][6], "2");
    assert_eq!(r["odd_n"], "1");
    assert_eq!(r["degenerate"], true);
}

#[test]
fn twisted_polygon_omegas_agree() {
    let v = json(&run(&["invariants", data("twisted_pentagon.json").to_str().unwrap()]));
    assert_eq!(v["report"]["omega_agree"], true);
    assert_eq!(v["report"]["omega_from_invariants"], v["report"]["omega_from_monodromy"]);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    for cmd in ["invariants", "condense", "reconstruct"] {
        assert_eq!(run(&[cmd, bad.to_str().unwrap()]).status.code(), Some(2), "{cmd}");
    }
    assert_eq!(run(&["invariants", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["collapse", "--N", "2"]).status.code(), Some(2));
}

#[test]
fn degeneracy_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("deg.json");
    std::fs::write(&p, r#"{"n":3,"kind":"points","parity":1,"reps":[["1","0","0"],["0","1","0"],["1","1","0"]]}"#).unwrap();
    let out = run(&["invariants", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("label"));
}

#[test]
fn map_singularity_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    // x_3 x_4 = 1 puts a pole in the first involution
    std::fs::write(&p, r#"{"n":3,"x":["2","3","1/2","2","5","7"]}"#).unwrap();
    let rec = json(&run(&["reconstruct", p.to_str().unwrap()]));
    let poly = dir.path().join("p.json");
    std::fs::write(&poly, serde_json::to_string(&rec["report"]["polygon"]).unwrap()).unwrap();
    let out = run(&["iterate", poly.to_str().unwrap(), "--steps", "1", "--map", "alpha1"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 1"));
}

#[test]
fn iterate_swaps_and_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("svg");
    let out = run(&["iterate", data("twisted_pentagon.json").to_str().unwrap(), "--steps", "3", "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["swapped"] == true && r["coords_agree"] == true));
    for i in 0..4 {
        let text = std::fs::read_to_string(svg.join(format!("step_{i:03}.svg"))).unwrap();
        assert!(text.starts_with("<?xml") && text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<svg").count(), 1);
    }
}

#[test]
fn involution_twice_returns() {
    for map in ["alpha1", "alpha2"] {
        let v = json(&run(&["iterate", data("twisted_pentagon.json").to_str().unwrap(), "--steps", "2", "--map", map]));
        let rows = v["report"]["rows"].as_array().unwrap();
        assert_eq!(rows[0]["tuple"], rows[2]["tuple"]);
        assert_eq!(rows[0]["x"], rows[2]["x"]);
    }
}

#[test]
fn sweeps_pass() {
    let v = json(&run(&["vanishing", "--n-max", "25"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["rows"].as_array().unwrap().len(), (5..=25).step_by(2).map(|n| (n - 3) / 2).sum::<usize>());
    assert_eq!(v["config"]["scalar"], "complex");
    for n in ["5", "8"] {
        let out = run(&["independence", "--n", n, "--seed", "9"]);
        assert!(out.status.success());
    }
    let out = run(&["collapse", "--N", "4", "--seed", "2"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["report"]["result"]["collapse_step"], 6);
}

#[test]
fn env_seed_is_default() {
    let a = bin().args(["collapse", "--N", "3"]).env("PENTALAB_SEED", "17").output().unwrap();
    let b = run(&["collapse", "--N", "3", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["config"]["seed"], 17);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    let a = run(&["collapse", "--N", "3", "--seed", "5", "--output", f.to_str().unwrap()]);
    assert!(a.status.success() && a.stdout.is_empty());
    let b = run(&["collapse", "--N", "3", "--seed", "5"]);
    assert_eq!(std::fs::read(&f).unwrap(), b.stdout);
}

#[test]
fn runs_are_byte_identical() {
    let cmds: Vec<Vec<String>> = [
        vec!["collapse", "--N", "6", "--seed", "1"],
        vec!["independence", "--n", "7", "--seed", "3"],
        vec!["vanishing", "--n-max", "15"],
        vec!["condense", data("matrix3.json").to_str().unwrap()],
        vec!["reconstruct", data("coords5.json").to_str().unwrap()],
        vec!["invariants", data("twisted_pentagon.json").to_str().unwrap()],
        vec!["iterate", data("conic_hexagon.json").to_str().unwrap(), "--steps", "2"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    for c in &cmds {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{c:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{c:?}");
    }
}

#[test]
fn help_lists_exit_codes() {
    let out = run(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Exit status") && text.contains("pole"));
}
