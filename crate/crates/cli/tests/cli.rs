use std::io::Write;
use std::process::{Command, Output, Stdio};

use indpath_core::io::{parse_edge_list, parse_traced, write_edge_list};

fn indpath(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_indpath"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut sin = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            sin.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn halfgraph_pipeline_gives_four() {
    let gen = indpath(&["gen-fixture", "halfgraph", "--n", "10"], None);
    assert!(gen.status.success());
    let lip = indpath(&["oracle-lip", "--cap", "100"], Some(&stdout(&gen)));
    assert!(lip.status.success());
    assert_eq!(stdout(&lip).lines().next(), Some("4"));
}

#[test]
fn verify_lowerbound_ell1() {
    let o = indpath(&["verify-lowerbound", "--ell", "1"], None);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("vertices: 112\n"));
    assert!(s.ends_with("result: pass\n"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn crossing_matching_is_a_constellation() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.txt");
    std::fs::write(&f, "4 2\n1 3\n2 4\n").unwrap();
    let o = indpath(&["recognize", "--pattern", f.to_str().unwrap(), "--inductive"], None);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("constellation: yes\n"));
    assert!(s.contains("\"stars\""));
}

#[test]
fn interleaved_stars_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("h.txt");
    std::fs::write(&f, "6 4\n2 4\n2 6\n1 5\n3 5\n").unwrap();
    let o = indpath(&["recognize", "--pattern", f.to_str().unwrap(), "--inductive"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("constellation: no"));
}

#[test]
fn malformed_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "# header\n3 2\n1 2\n2 two\n").unwrap();
    let o = indpath(&["recognize", "--pattern", f.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(indpath(&["nope"], None).status.code(), Some(2));
    assert_eq!(indpath(&["verify-lowerbound"], None).status.code(), Some(2));
    assert_eq!(indpath(&["verify-lowerbound", "--ell", "9"], None).status.code(), Some(2));
    assert_eq!(indpath(&["gen-fixture", "halfgraph"], None).status.code(), Some(2));
}

#[test]
fn generated_graphs_round_trip() {
    let cases: [&[&str]; 5] = [
        &["gen-fixture", "path", "--n", "12"],
        &["gen-fixture", "random", "--n", "40", "--density", "0.2", "--seed", "7"],
        &["gen-fixture", "constellation", "--t", "3", "--r", "2", "--shape", "nested"],
        &["gen-fixture", "topminor", "--t", "4"],
        &["gen-lowerbound", "--ell", "2", "--traced"],
    ];
    for args in cases {
        let o = indpath(args, None);
        assert!(o.status.success(), "{args:?}");
        let text = stdout(&o);
        let g = parse_edge_list(&text).unwrap();
        assert_eq!(write_edge_list(&g), text, "{args:?}");
    }
    let traced = stdout(&indpath(&["gen-lowerbound", "--ell", "1", "--traced"], None));
    assert_eq!(parse_traced(&traced).unwrap().n(), 112);
}

#[test]
fn out_flag_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g1.txt");
    let o = indpath(&["gen-lowerbound", "--ell", "1", "--out", f.to_str().unwrap()], None);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let piped = stdout(&indpath(&["gen-lowerbound", "--ell", "1"], None));
    assert_eq!(std::fs::read_to_string(&f).unwrap(), piped);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let h = dir.path().join("h.txt");
    let gen = |seed: &str| stdout(&indpath(&["gen-fixture", "random", "--n", "200", "--density", "0.05", "--seed", seed], None));
    assert_eq!(gen("11"), gen("11"));
    assert_ne!(gen("11"), gen("12"));
    std::fs::write(&g, gen("11")).unwrap();
    std::fs::write(&h, stdout(&indpath(&["gen-fixture", "constellation", "--t", "2", "--r", "2"], None))).unwrap();
    let (gs, hs) = (g.to_str().unwrap(), h.to_str().unwrap());
    for args in [
        vec!["peel", "--graph", gs, "--pattern", hs, "--r", "2", "--toy"],
        vec!["find-pattern", "--graph", gs, "--pattern", hs, "--gap", "3"],
        vec!["oracle-lip", "--graph", hs],
        vec!["verify-lowerbound", "--ell", "2"],
    ] {
        let a = indpath(&args, None);
        let b = indpath(&args, None);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn peel_certificate_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let h = dir.path().join("h.txt");
    std::fs::write(&g, stdout(&indpath(&["gen-fixture", "halfgraph", "--n", "64"], None))).unwrap();
    std::fs::write(&h, "4 2\n1 3\n2 4\n").unwrap();
    let o = indpath(&["peel", "--graph", g.to_str().unwrap(), "--pattern", h.to_str().unwrap(), "--r", "1", "--toy"], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["valid"], true);
    let kind = v["kind"].as_str().unwrap();
    assert!(["P1", "P2", "P3"].contains(&kind));
    if kind == "P3" {
        assert_eq!(v["positions"].as_array().unwrap().len(), 4);
    } else {
        assert!(!v["vertices"].as_array().unwrap().is_empty());
    }
}

#[test]
fn peel_rejects_arity_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let h = dir.path().join("h.txt");
    std::fs::write(&g, stdout(&indpath(&["gen-fixture", "path", "--n", "20"], None))).unwrap();
    std::fs::write(&h, "4 2\n1 3\n2 4\n").unwrap();
    let o = indpath(&["peel", "--graph", g.to_str().unwrap(), "--pattern", h.to_str().unwrap(), "--r", "2", "--toy"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_bounds_small_grid() {
    let o = indpath(&["check-bounds", "--r", "1", "--t-max", "3", "--grid", "default"], None);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some(indpath_bounds::verify::TSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with("\tpass")));
    assert!(o.status.success());
}
