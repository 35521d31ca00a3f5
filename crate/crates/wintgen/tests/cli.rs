use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wintgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wintgen")).args(args).env_remove("WINTGEN_JOBS").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const UNIT: &str = r#"{"n":4,"m":3,"k_tilde":0,"choi_lu":{"a":1,"b":1,"c":1,"mu":1}}"#;
const SMALL_GRID: &str = r#"{"grid":{"a":[0],"b":[0],"c":["1/2",1],"mu":[1,-2],"k_tilde":[0,-1]},"n_list":[4,5],"m_list":[3]}"#;

#[test]
fn compute_riemann_at_unit_point() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "m.json", UNIT);
    let out = wintgen(&["compute", "--model", model.to_str().unwrap(), "--tensor", "R"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    let rows = j["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["index"] == "1,2,2,1" && r["value"] == "1"));
    assert_eq!(j["summary"]["tau"], "32");
    assert_eq!(j["summary"]["ddvv_gap"], "0");
}

#[test]
fn vanishing_selectors_report_no_rows() {
    let dir = TempDir::new().unwrap();
    let umb = write(dir.path(), "u.json", r#"{"n":5,"m":3,"k_tilde":"1/2","choi_lu":{"a":1,"b":2,"c":0,"mu":0}}"#);
    let out = wintgen(&["compute", "--model", umb.to_str().unwrap(), "--tensor", "C"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["rows"].as_array().unwrap().is_empty());
    let hyper = write(dir.path(), "h.json", r#"{"n":4,"m":1,"k_tilde":0,"shape_operators":[[[1,2,0,0],[2,1,0,0],[0,0,3,0],[0,0,0,"1/2"]]]}"#);
    let out = wintgen(&["compute", "--model", hyper.to_str().unwrap(), "--tensor", "Rperp"]);
    assert!(json(&out)["rows"].as_array().unwrap().is_empty());
}

#[test]
fn csv_output_and_output_file() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "m.json", UNIT);
    let target = dir.path().join("r.csv");
    let out = wintgen(&["compute", "--model", model.to_str().unwrap(), "--out", "csv", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(target).unwrap();
    assert!(text.starts_with("index,value\n"));
    assert!(text.contains("\"1,2,2,1\",1\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tau: 32"));
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let broken = write(dir.path(), "b.json", r#"{"n":4,"m":3,"#);
    let model = write(dir.path(), "m.json", UNIT);
    let grid = write(dir.path(), "g.json", r#"{"n_list":[2]}"#);
    let m = model.to_str().unwrap();
    for args in [
        vec!["compute", "--model", broken.to_str().unwrap()],
        vec!["compute", "--model", "/nonexistent/model.json"],
        vec!["compute", "--model", m, "--tensor", "XYZ"],
        vec!["conditions", "--model", m, "--tol", "-1"],
        vec!["verify", "T99"],
        vec!["verify", "T9", "--grid", grid.to_str().unwrap()],
        vec!["sweep", "--bogus"],
    ] {
        assert_eq!(wintgen(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let grid = write(dir.path(), "g.json", SMALL_GRID);
    let g = grid.to_str().unwrap();
    let pass = wintgen(&["verify", "T9", "--grid", g]);
    assert_eq!(pass.status.code(), Some(0), "{}", String::from_utf8_lossy(&pass.stdout));
    // C·R ~ Q(g,R) holds at these non-umbilical points although it is claimed only for umbilical ones
    let fail = wintgen(&["verify", "T7", "--grid", g]);
    assert_eq!(fail.status.code(), Some(1));
    let j = json(&fail);
    assert!(!j["rows"].as_array().unwrap().is_empty());
}

#[test]
fn conditions_on_branch_model() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "t2.json", r#"{"n":4,"m":3,"k_tilde":-1,"choi_lu":{"a":0,"b":0,"c":1,"mu":1}}"#);
    let j = json(&wintgen(&["conditions", "--model", model.to_str().unwrap()]));
    let rows = j["rows"].as_array().unwrap();
    let rc: Vec<_> = rows.iter().filter(|r| r["left"] == "RC").collect();
    assert!(!rc.is_empty());
    assert!(rc.iter().all(|r| r["kind"] == "LeftZero" || r["kind"] == "BothZero"));
}

#[test]
fn runs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let grid = write(dir.path(), "g.json", SMALL_GRID);
    let g = grid.to_str().unwrap();
    let a = wintgen(&["sweep", "--grid", g, "--jobs", "2"]);
    let b = wintgen(&["sweep", "--grid", g, "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r1 = wintgen(&["ddvv", "--random", "50", "--n", "5", "--m", "3", "--seed", "3"]);
    let r2 = wintgen(&["ddvv", "--random", "50", "--n", "5", "--m", "3", "--seed", "3"]);
    assert_eq!(r1.status.code(), Some(0));
    assert_eq!(r1.stdout, r2.stdout);
    assert_eq!(json(&r1)["summary"]["negative_gaps"], "0");
}

#[test]
fn compute_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "m.json", r#"{"n":5,"m":3,"k_tilde":"-1/3","choi_lu":{"a":"1/2","b":-1,"c":2,"mu":"3/2"}}"#);
    let j = json(&wintgen(&["compute", "--model", model.to_str().unwrap(), "--tensor", "C"]));
    let rows = j["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    // the same components come back from an equivalent explicit-operator file
    let ops = r#"{"n":5,"m":3,"k_tilde":"-1/3","shape_operators":[
        [["1/2","3/2",0,0,0],["3/2","1/2",0,0,0],[0,0,"1/2",0,0],[0,0,0,"1/2",0],[0,0,0,0,"1/2"]],
        [["1/2",0,0,0,0],[0,"-5/2",0,0,0],[0,0,-1,0,0],[0,0,0,-1,0],[0,0,0,0,-1]],
        [[2,0,0,0,0],[0,2,0,0,0],[0,0,2,0,0],[0,0,0,2,0],[0,0,0,0,2]]]}"#;
    let explicit = write(dir.path(), "e.json", ops);
    let k = json(&wintgen(&["compute", "--model", explicit.to_str().unwrap(), "--tensor", "C"]));
    assert_eq!(j["rows"], k["rows"]);
    assert_eq!(j["summary"], k["summary"]);
}

#[test]
fn float_mode_agrees_with_exact_verdicts() {
    let dir = TempDir::new().unwrap();
    let model = write(dir.path(), "m.json", UNIT);
    let m = model.to_str().unwrap();
    let kinds = |out: Output| -> Vec<String> {
        json(&out)["rows"].as_array().unwrap().iter().map(|r| r["kind"].as_str().unwrap().to_string()).collect()
    };
    assert_eq!(kinds(wintgen(&["conditions", "--model", m])), kinds(wintgen(&["conditions", "--model", m, "--mode", "float"])));
}
