use std::path::PathBuf;
use std::process::{Command, Output};

use bounded_height::arith::rational::rat;
use bounded_height::field::io::load_field;
use bounded_height::field::quadratic_field;
use bounded_height::search::output::{parse_result, result_to_string, verify_result};

fn bhenum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhenum")).args(args).output().expect("spawn bhenum")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bhenum(&["compute", "quad:-1", "--bound", "2"])), 0);
    assert_eq!(code(&bhenum(&["compute", "quad:0", "--bound", "2"])), 2);
    assert_eq!(code(&bhenum(&["compute", "quad:12", "--bound", "2"])), 2);
    assert_eq!(code(&bhenum(&["compute", "quad:5", "--bound", "0.5"])), 2);
    assert_eq!(code(&bhenum(&["compute", "quad:5", "--bound", "2", "--tolerance", "3/2"])), 2);
    assert_eq!(code(&bhenum(&["compute", "quad:5", "--bound", "two"])), 2);
    assert_eq!(code(&bhenum(&["compute", "/nonexistent/field.json", "--bound", "2"])), 2);
    assert_eq!(code(&bhenum(&["bench", "quad:-1", "--bound", "2", "--methods", "zz"])), 2);
    assert_eq!(code(&bhenum(&["--threads", "0", "compute", "quad:-1", "--bound", "2"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("x6p2.json")).unwrap().replacen("-1492992", "-1492993", 1);
    std::fs::write(&bad, text).unwrap();
    let o = bhenum(&["field-verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(&bad, "{\"label\": ").unwrap();
    assert_eq!(code(&bhenum(&["compute", bad.to_str().unwrap(), "--bound", "2"])), 3);

    let o = bhenum(&["ps", "quad:2", "--bound", "20", "--ps-cap", "1000"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = bhenum(&["--threads", "1", "compute", "quad:5", "--bound", "30"]);
    let b = bhenum(&["compute", "quad:5", "--bound", "30"]);
    let c = bhenum(&["--threads", "3", "compute", "quad:5", "--bound", "30"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn result_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = bhenum(&["compute", "quad:-5", "--bound", "12", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("|L|"));
    let text = std::fs::read_to_string(&path).unwrap();
    let out = parse_result(&text).unwrap();
    assert_eq!(result_to_string(&out), text);
    verify_result(&out, &quadratic_field(-5).unwrap(), &rat(1, 1 << 20)).unwrap();
}

#[test]
fn csv_formats() {
    let o = bhenum(&["compute", "quad:-1", "--bound", "2", "--format", "csv"]);
    let s = String::from_utf8(o.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("list,height_mid,height_rad,c0,c1"));
    assert_eq!(lines.count(), 13);

    let o = bhenum(&["bench", "quad:-1", "--bound", "2", "--format", "csv"]);
    let s = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], "method,field,B,theta,elapsed_ms,search_space,found,ratio");
    assert!(rows[1].starts_with("a,quad:-1,2,1/100,"));
    assert!(rows[1].ends_with(",13,13,1"));
    assert!(rows[2].starts_with("ps,quad:-1,2,,"));
    assert!(rows[2].ends_with(",146,13,146/13"));
}

#[test]
fn field_info_writes_a_loadable_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let o = bhenum(&["field-info", "quad:-23", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let info: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(info["class_number"], 3);
    assert_eq!(info["signature"], serde_json::json!([0, 1]));
    let o = bhenum(&["field-verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(load_field(&path).unwrap().class_number(), 3);

    let o = bhenum(&["field-verify", &fixture("zeta13.json")]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok: zeta13"));
}

#[test]
fn units_and_ps_commands() {
    let o = bhenum(&["units", "quad:2", "--bound", "6"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["units"].as_array().unwrap().len(), 10);
    let o = bhenum(&["ps", "quad:-1", "--bound", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 13);
    assert_eq!(v["search_space"], "146");
}
