use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcurve-lab")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = lab(args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("no report ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (json, code)
}

fn triangle(d: i64, signs: &str) -> String {
    format!("polygon = [[0, 0], [{d}, 0], [0, {d}]]\n[signs]\n{signs}\n")
}

#[test]
fn filling_on_degree_three_harnack() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t3.toml", &triangle(3, "harnack = [0, 0, 0]"));
    let (r, code) = report(&["filling", "--input", &input]);
    assert_eq!(code, 0);
    let f = &r["filling"];
    assert_eq!(f["components"], 2);
    assert_eq!(f["capped_euler"], 2);
    assert_eq!(f["capped_surface"], "sphere");
    assert_eq!(f["curve_type"], "type I");
    assert_eq!(f["maximal"], true);
    assert_eq!(r["surface"]["topology"], "RP²");
}

#[test]
fn enumerate_degree_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t2.toml", &triangle(2, "enumerate = true"));
    let (r, code) = report(&["enumerate", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(r["enumeration"]["runs"], 64);
    assert_eq!(r["enumeration"]["max_components"], 1);
}

#[test]
fn enumerate_cap_and_sampling() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t3.toml", &triangle(3, "enumerate = true"));
    assert_eq!(lab(&["enumerate", "--input", &input, "--cap", "8"]).status.code(), Some(2));
    let (a, code) = report(&["enumerate", "--input", &input, "--cap", "8", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(a["enumeration"]["runs"], 256);
    assert_eq!(a["enumeration"]["seed"], 3);
    let (b, _) = report(&["enumerate", "--input", &input, "--cap", "8", "--seed", "3"]);
    assert_eq!(a, b);
}

#[test]
fn surface_of_square_is_torus() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sq.toml", "polygon = [[0, 0], [2, 0], [2, 2], [0, 2]]\n[signs]\nenumerate = true\n");
    let (r, code) = report(&["surface", "--input", &input]);
    assert_eq!(code, 0);
    assert_eq!(r["surface"]["topology"], "torus");
    assert_eq!(r["surface"]["genus"], 1);
}

#[test]
fn harnack_with_type_flag() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t5.toml", &triangle(5, "enumerate = true"));
    let (r, code) = report(&["harnack", "--input", &input, "--type", "1,0,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["harnack"]["matches"], true);
    assert_eq!(r["harnack"]["predicted_components"], 7);
    assert_eq!(r["curve"]["components"], 7);
    assert_eq!(r["curve"]["nontrivial"], 1);
    assert!(r.get("timing_ms").is_none());
    let (timed, _) = report(&["harnack", "--input", &input, "--type", "1,0,0", "--timing"]);
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn curve_reports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t4.toml", &triangle(4, "harnack = [0, 1, 1]"));
    let a = lab(&["curve", "--input", &input]);
    let b = lab(&["curve", "--input", &input]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn render_writes_identical_svg() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "t5.toml", &triangle(5, "harnack = [1, 0, 0]"));
    let out_a = dir.path().join("a.svg");
    let out_b = dir.path().join("b.svg");
    for out in [&out_a, &out_b] {
        let status = lab(&["render", "--input", &input, "--out", out.to_str().unwrap()]).status;
        assert_eq!(status.code(), Some(0));
    }
    let a = fs::read_to_string(&out_a).unwrap();
    assert_eq!(a, fs::read_to_string(&out_b).unwrap());
    assert!(a.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert_eq!(a.matches("<path ").count(), 7);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let missing = "polygon = [[0, 0], [1, 0], [0, 1]]\n[signs.values]\n\"0,0\" = 1\n\"1,0\" = 1\n";
    let input = write(&dir, "missing.toml", missing);
    let out = lab(&["curve", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0,1)"));

    let out = lab(&["curve", "--input", &write(&dir, "enum.toml", &triangle(2, "enumerate = true"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(lab(&["curve", "--input", "/nonexistent/problem.toml"]).status.code(), Some(2));
    assert_eq!(lab(&["bogus", "--input", &input]).status.code(), Some(2));
    let t2 = write(&dir, "t2.toml", &triangle(2, "enumerate = true"));
    assert_eq!(lab(&["harnack", "--input", &t2, "--type", "2,0,0"]).status.code(), Some(2));
}

#[test]
fn explicit_triangulation_and_signs() {
    let dir = TempDir::new().unwrap();
    let text = "polygon = [[0, 0], [2, 0], [0, 2]]\ntriangulation = [[0, 1, 3], [1, 2, 4], [1, 4, 3], [3, 4, 5]]\n\
                [signs.values]\n\"0,0\" = 1\n\"0,1\" = -1\n\"0,2\" = 1\n\"1,0\" = 1\n\"1,1\" = -1\n\"2,0\" = 1\n";
    let (r, code) = report(&["filling", "--input", &write(&dir, "t2.toml", text)]);
    assert_eq!(code, 0);
    assert_eq!(r["curve"]["components"], 1);
    assert!(r["invariants"].as_array().unwrap().iter().all(|i| i["holds"] == true));
}
