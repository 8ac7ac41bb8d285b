use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const P1: &str = r#""rays":[[-1],[1]],"max_cones":[[1],[2]],"distinguished":2"#;
const F1: &str = r#""rays":[[-1,1],[0,-1],[1,0],[0,1]],"max_cones":[[3,4],[4,1],[1,2],[2,3]],"distinguished":1"#;

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_toricmor"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("wait")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr(out: &Output) -> String {
    assert!(!out.status.success());
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn integrate_on_the_line() {
    let out = run_stdin(&["integrate"], &format!(r#"{{{P1},"genus":1,"degrees":[2],"exponents":[2,2]}}"#));
    assert_eq!(json(&out)["value"], "2");
}

#[test]
fn integrate_from_file_is_byte_identical() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{{P1},"genus":2,"degrees":[4],"exponents":[4,3]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let run = || Command::new(env!("CARGO_BIN_EXE_toricmor")).args(["integrate", "--verbose", path]).output().unwrap();
    let (a, b) = (run(), run());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["value"], "4");
    assert_eq!(v["pushforward"].as_array().unwrap().len(), 3);
    assert_eq!(v["fixed_points"].as_array().unwrap().len(), 2);
}

#[test]
fn chi_y_on_f1() {
    let out = run_stdin(&["chi-y"], &format!(r#"{{{F1},"genus":0,"degrees":[1,3]}}"#));
    assert_eq!(json(&out)["chi_y"], "28");
}

#[test]
fn check_vanishing_on_f1() {
    let doc = format!(r#"{{{F1},"genus":1,"degrees":[4,8],"exponents":[5,7,5,3],"ray_subset":[1,3]}}"#);
    let v = json(&run_stdin(&["check-vanishing"], &doc));
    assert_eq!(v["predicate"], true);
    assert_eq!(v["integral"], "0");
    assert_eq!(v["spans_cone"], false);
}

#[test]
fn degree_data_and_primitive_collections() {
    let doc = format!(r#"{{{F1},"genus":1,"degrees":[4,8]}}"#);
    let v = json(&run_stdin(&["degree-data"], &doc));
    assert_eq!(v["degrees"], serde_json::json!([4, 8, 4, 4]));
    assert_eq!(v["dim_v"], 20);
    let v = json(&run_stdin(&["primitive-collections"], &doc));
    assert_eq!(v["primitive_collections"], serde_json::json!([[1, 3], [2, 4]]));
}

#[test]
fn validate_reports_canonical_order() {
    let doc = r#"{"rays":[[1,0],[0,1],[-1,1],[0,-1]],"max_cones":[[1,2],[2,3],[3,4],[4,1]],"distinguished":1}"#;
    let v = json(&run_stdin(&["validate"], doc));
    assert_eq!(v["canonical_order"], serde_json::json!([3, 4, 1, 2]));
    assert_eq!(v["picard_rank"], 2);
}

#[test]
fn pushforward_with_direction_override() {
    let doc = format!(r#"{{{F1},"genus":1,"degrees":[3,6],"exponents":[4,6,2,2]}}"#);
    let a = json(&run_stdin(&["pushforward"], &doc));
    let b = json(&run_stdin(&["pushforward", "--direction", "3,-7"], &doc));
    assert_eq!(a["pushforward"], b["pushforward"]);
    assert_eq!(b["direction"], serde_json::json!([3, -7]));
    assert_eq!(a["cancellation"]["poles_cancelled"], true);
}

#[test]
fn diagnostics_name_the_module() {
    let bad_ray = r#"{"rays":[[-2],[1]],"max_cones":[[1],[2]],"distinguished":2}"#;
    assert!(stderr(&run_stdin(&["validate"], bad_ray)).contains("fan-core: ray 1 not primitive"));

    let low = format!(r#"{{{P1},"genus":2,"degrees":[3],"exponents":[1,1]}}"#);
    assert!(stderr(&run_stdin(&["integrate"], &low)).contains("moduli-numerics: d_rho <= 2g-1"));

    let off = format!(r#"{{{P1},"genus":1,"degrees":[2],"exponents":[2,1]}}"#);
    assert!(stderr(&run_stdin(&["integrate"], &off)).contains("jacobian-integration: degree mismatch"));

    let degenerate = format!(r#"{{{F1},"genus":0,"degrees":[1,3],"exponents":[1,1,1,1]}}"#);
    let err = stderr(&run_stdin(&["pushforward", "--direction", "1,0"], &degenerate));
    assert!(err.contains("localization-engine: direction pairing vanishes"), "{err}");

    assert!(stderr(&run_stdin(&["validate"], "{")).contains("document: schema error"));
}

#[test]
fn selftest_passes() {
    let out = Command::new(env!("CARGO_BIN_EXE_toricmor")).arg("selftest").output().unwrap();
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 30);
}
