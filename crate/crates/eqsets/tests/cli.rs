use std::fs;
use std::path::Path;

use eqsets::cli::run;
use serde_json::Value;

fn eqsets(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eqsets").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn construct_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let (code, out, err) = eqsets(&[&["construct"], args].concat());
    assert_eq!(code, 0, "{args:?}: {err}");
    let path = dir.join(name);
    fs::write(&path, &out).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn prop17_example() {
    let (code, out, _) = eqsets(&["construct", "--family", "prop17", "--p", "1", "--d", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 5);
    assert_eq!(v["common_distance"], 4.0);
}

#[test]
fn every_family_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let families: [&[&str]; 9] = [
        &["--family", "petty"],
        &["--family", "petty", "--p", "1", "--d", "3"],
        &["--family", "linf", "--d", "5"],
        &["--family", "lp-basis", "--p", "1.5", "--d", "4", "--sign", "minus"],
        &["--family", "prop17", "--p", "1.2", "--d", "6"],
        &["--family", "prop20", "--p", "1.75"],
        &["--family", "prop20", "--p", "1.5", "--k1", "2", "--k2", "2"],
        &["--family", "fixed-linf", "--d", "3", "--oracle", "lp:4"],
        &["--family", "fixed-lp", "--p", "2", "--d", "3", "--eps", "0.1"],
    ];
    for (i, args) in families.iter().enumerate() {
        let file = construct_to(dir.path(), &format!("set{i}.json"), args);
        let (code, out, err) = eqsets(&["verify", "--space", &file, "--points", &file]);
        assert_eq!(code, 0, "{args:?}: {err}");
        let report: Value = serde_json::from_str(&out).unwrap();
        let built: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
        let (lambda, expect) = (report["lambda"].as_f64().unwrap(), built["common_distance"].as_f64().unwrap());
        assert!((lambda - expect).abs() <= 1e-10, "{args:?}: {lambda} vs {expect}");
    }
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["construct", "--family", "prop20", "--p", "1.6"][..],
        &["construct", "--family", "fixed-lp", "--p", "3", "--d", "4", "--eps", "0.2"],
        &["table", "--p-min", "1", "--p-max", "1.93", "--steps", "8"],
    ] {
        let first = eqsets(args);
        assert_eq!(first.0, 0);
        assert_eq!(first, eqsets(args));
    }
}

#[test]
fn canonical_linf_is_maximal() {
    let dir = tempfile::tempdir().unwrap();
    let points = construct_to(dir.path(), "canonical4.json", &["--family", "linf", "--d", "4"]);
    let space = dir.path().join("linf4.json");
    fs::write(&space, r#"{"type":"lp","p":"inf","d":4}"#).unwrap();
    let space = space.to_str().unwrap();
    for extra in [&[][..], &["--hint", "linf"]] {
        let (code, out, err) = eqsets(&[&["verify", "--space", space, "--points", &points, "--maximal"], extra].concat());
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_ne!(v["maximal"]["status"], "extension_found");
    }
}

#[test]
fn verify_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let space = dir.path().join("l2.json");
    fs::write(&space, r#"{"type":"lp","p":2,"d":3}"#).unwrap();
    let basis = dir.path().join("basis.json");
    fs::write(&basis, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
    let skew = dir.path().join("skew.json");
    fs::write(&skew, "[[1,0,0],[0,2,0],[0,0,1]]").unwrap();
    let (s, b, k) = (space.to_str().unwrap(), basis.to_str().unwrap(), skew.to_str().unwrap());

    assert_eq!(eqsets(&["verify", "--space", s, "--points", k]).0, 1);
    let (code, out, err) = eqsets(&["verify", "--space", s, "--points", b, "--maximal", "--hint", "basis"]);
    assert_eq!(code, 1);
    assert!(err.contains("not maximal"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["maximal"]["status"], "extension_found");
    assert_eq!(v["maximal"]["witnesses"].as_array().unwrap().len(), 2);
}

#[test]
fn invalid_input_exits_two_and_io_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"type":"lp","p":0.5,"d":2}"#).unwrap();
    let b = bad.to_str().unwrap();
    assert_eq!(eqsets(&["verify", "--space", b, "--points", b]).0, 2);
    assert_eq!(eqsets(&["construct", "--family", "linf"]).0, 2);
    assert_eq!(eqsets(&["construct", "--family", "linf", "--d", "3", "--frobnicate"]).0, 2);
    assert_eq!(eqsets(&["hadamard", "--order", "6"]).0, 2);
    assert_eq!(eqsets(&["construct", "--family", "fixed-linf", "--d", "3", "--oracle", "lp:2"]).0, 2);
    assert_eq!(eqsets(&["verify", "--space", "/nonexistent/s.json", "--points", b]).0, 3);
}

#[test]
fn extend_prints_point() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    fs::write(&pts, "[[0,0],[1,1]]").unwrap();
    let (code, out, _) = eqsets(&["extend", "--points", pts.to_str().unwrap(), "--lambda", "1"]);
    assert_eq!(code, 0);
    let q: Vec<f64> = serde_json::from_str(&out).unwrap();
    assert!(q == [1.0, 0.0] || q == [0.0, 1.0], "{q:?}");
}

#[test]
fn hadamard_rows_are_orthogonal() {
    for order in ["1", "2", "12", "20"] {
        let (code, out, _) = eqsets(&["hadamard", "--order", order]);
        assert_eq!(code, 0);
        let rows: Vec<Vec<i64>> = serde_json::from_str(&out).unwrap();
        let n = rows.len();
        for i in 0..n {
            for j in 0..n {
                let dot: i64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                assert_eq!(dot, if i == j { n as i64 } else { 0 });
            }
        }
    }
}

#[test]
fn table_matches_printed_rows() {
    let (code, out, _) = eqsets(&["table", "--p-min", "1", "--p-max", "1.93", "--steps", "8"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,regime,k1,k2,C,d0,cond12,cond13,cond14"));
    // (C, d₀) by range of p.
    let printed = |p: f64| {
        let bounds = [2.5, 3.0, 3.25, 3.5, 29.0 / 8.0, 3.75, 91.0 / 24.0];
        let values = [(5, 4), (8, 6), (12, 10), (16, 14), (24, 22), (32, 30), (40, 38), (48, 46)];
        values[bounds.iter().filter(|&&b| p > f64::log2(b)).count()]
    };
    let mut rows = 0;
    for l in lines {
        let f: Vec<&str> = l.split(',').collect();
        let p: f64 = f[0].parse().unwrap();
        assert_eq!((f[4].parse().unwrap(), f[5].parse().unwrap()), printed(p), "{l}");
        rows += 1;
    }
    assert_eq!(rows, 8);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let (code, out, _) = eqsets(&["hadamard", "--order", "2", "-o", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(fs::read_to_string(&path).unwrap(), "[[1,1],[1,-1]]\n");
}
