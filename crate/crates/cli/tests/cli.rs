use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

use cluster_surface::golden::{ANNULUS, OCTAGON};
use cluster_surface::LaurentPoly;

fn job_from_golden(text: &str) -> Value {
    let g: Value = serde_json::from_str(text).unwrap();
    json!({"surface": g["surface"], "triangulation": g["triangulation"], "target": g["target"]})
}

fn golden_expansion(text: &str) -> LaurentPoly {
    let g: Value = serde_json::from_str(text).unwrap();
    g["expected"]["expansion"].as_str().unwrap().parse().unwrap()
}

fn clsurf(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clsurf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            input.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn expand(job: &Value, extra: &[&str]) -> Output {
    let mut args = vec!["expand"];
    args.extend_from_slice(extra);
    clsurf(&args, Some(&job.to_string()))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn octagon_expands_to_five_terms() {
    let o = expand(&job_from_golden(OCTAGON), &["--method", "tpath"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let x: LaurentPoly = stdout(&o).trim().parse().unwrap();
    assert_eq!(x.len(), 5);
    assert_eq!(x, golden_expansion(OCTAGON));
}

#[test]
fn job_files_are_read_from_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("octagon.json");
    std::fs::write(&path, job_from_golden(OCTAGON).to_string()).unwrap();
    let o = clsurf(&["expand", "--output", "paths", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 5);
    assert!(stdout(&o).contains("(t7-,t3-,t11)"));
}

#[test]
fn every_method_agrees_on_both_examples() {
    for text in [OCTAGON, ANNULUS] {
        let job = job_from_golden(text);
        let reference = stdout(&expand(&job, &["--method", "tpath"]));
        for m in ["recursive", "mutation-sequence", "mutant"] {
            let o = expand(&job, &["--method", m]);
            assert_eq!(o.status.code(), Some(0), "{m}: {}", stderr(&o));
            assert_eq!(stdout(&o), reference, "{m}");
        }
    }
    let x: LaurentPoly = stdout(&expand(&job_from_golden(ANNULUS), &["--method", "recursive"]))
        .trim()
        .parse()
        .unwrap();
    assert_eq!(x.len(), 11);
}

#[test]
fn targets_in_the_triangulation_need_the_flag() {
    let mut job = job_from_golden(OCTAGON);
    job["target"] = json!([1, 5]);
    let o = expand(&job, &["--target-in-t"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "x3\n");
    let o = expand(&job, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--target-in-t"));
}

#[test]
fn crossing_triangulation_is_an_input_error() {
    let job = json!({
        "surface": {"kind": "polygon", "m": 5},
        "triangulation": [[0, 2], [1, 3]],
        "target": [0, 3],
    });
    let o = expand(&job, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("t1 and t2 cross"), "{}", stderr(&o));
}

#[test]
fn malformed_input_is_an_input_error() {
    for bad in ["not json", "{\"surface\": {\"kind\": \"polygon\", \"m\": 3}}", "{}"] {
        let o = clsurf(&["expand"], Some(bad));
        assert_eq!(o.status.code(), Some(1), "{bad}");
    }
    let general = json!({"surface": {"kind": "general", "genus": 1, "boundaries": [1]}, "target": [0, 1]});
    assert_eq!(expand(&general, &[]).status.code(), Some(1));
    let o = expand(&job_from_golden(OCTAGON), &["--method", "recursive", "--output", "paths"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_output_reparses() {
    for method in ["tpath", "mutant"] {
        let o = expand(&job_from_golden(ANNULUS), &["--method", method, "--output", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let r = &doc["results"][0];
        let from_json = LaurentPoly::from_json(&r["expansion"]).unwrap();
        let from_text: LaurentPoly = r["text"].as_str().unwrap().parse().unwrap();
        assert_eq!(from_json, from_text);
        assert_eq!(from_json, golden_expansion(ANNULUS));
        let paths = r["paths"].as_array().unwrap();
        if method == "mutant" {
            assert!(paths.iter().all(|p| p["sign"].as_i64().unwrap().abs() == 1));
            assert!(LaurentPoly::from_json(&r["mutant_expansion"]).is_ok());
        } else {
            assert_eq!(paths.len(), 13);
        }
    }
}

#[test]
fn fraction_output_has_the_crossing_denominator() {
    let o = expand(&job_from_golden(OCTAGON), &["--output", "fraction"]);
    assert_eq!(stdout(&o).trim_end().rsplit(" / ").next(), Some("(x1*x3*x5)"));
}

#[test]
fn several_targets_give_one_line_each() {
    let mut job = job_from_golden(OCTAGON);
    job.as_object_mut().unwrap().remove("target");
    job["targets"] = json!([[2, 6], [0, 2], [2, 4]]);
    let o = expand(&job, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn check_passes_on_both_families_and_is_deterministic() {
    let runs = [
        vec!["check", "--family", "polygon", "--trials", "20", "--max-m", "9", "--seed", "7"],
        vec!["check", "--family", "annulus", "--trials", "50", "--seed", "7"],
    ];
    for args in &runs {
        let a = clsurf(args, None);
        assert_eq!(a.status.code(), Some(0), "{}{}", stdout(&a), stderr(&a));
        assert!(stdout(&a).contains("all checks passed"));
        let b = clsurf(args, None);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn check_report_as_json() {
    let o = clsurf(&["check", "--trials", "5", "--max-m", "7", "--format", "json", "--golden"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["ok"], json!(true));
    assert_eq!(r["checks"].as_array().unwrap().len(), 7);
    assert_eq!(r["golden"].as_array().unwrap().len(), 2);
    assert!(r["checks"][0]["millis"].is_number());
}

#[test]
fn tampered_golden_file_is_a_property_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut g: Value = serde_json::from_str(OCTAGON).unwrap();
    g["expected"]["expansion"] = json!("x3^-1*x7*x11");
    std::fs::write(&path, g.to_string()).unwrap();
    let o = clsurf(&["check", "--golden", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    let o = clsurf(&["check", "--golden", dir.path().join("missing.json").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_trials_without_golden_files_is_rejected() {
    assert_eq!(clsurf(&["check", "--trials", "0"], None).status.code(), Some(1));
}

#[test]
fn a_loop_crossed_twice_divides_only_once() {
    // The loop at out 1 crosses the loop t3 at out 0 twice.
    let job = json!({
        "surface": {"kind": "annulus", "outer": 2, "inner": 1},
        "triangulation": [
            {"from": ["out", 0], "to": ["in", 0], "winding": 0},
            {"from": ["in", 0], "to": ["out", 0], "winding": -1},
            {"from": ["out", 0], "to": ["out", 0], "winding": 0}
        ],
        "target": {"from": ["out", 1], "to": ["out", 1], "winding": 0}
    });
    let o = expand(&job, &["--output", "paths"]);
    assert!(stdout(&o).contains("(t5,t3,t5-)"));
    let o = expand(&job, &["--output", "fraction"]);
    assert!(stdout(&o).trim_end().ends_with("/ (x1*x2*x3)"), "{}", stdout(&o));
}
