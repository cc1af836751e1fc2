use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn cohom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohom")).args(args).output().expect("spawn cohom")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let validator = jsonschema::validator_for(&schema(schema_name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{instance:#}");
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = cohom(&all);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn family_e_angle_triple() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "e.json", &["--family", "e", "--k", "1", "--phi", "0.5", "--space", "H:4"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_valid("subspace.schema.json", &v);

    let o = cohom(&["angle", "--subspace", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("(0.5, 1.5708, 1.5708)"), "{}", stdout(&o));

    let a = json(&cohom(&["angle", "--subspace", f.to_str().unwrap(), "--format", "json"]));
    assert_valid("angle.schema.json", &a);
    let phi: Vec<f64> = a["phi"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((phi[0] - 0.5).abs() < 1e-8);
    assert!((phi[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
}

#[test]
fn family_d_text_output() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "d.json", &["--family", "d", "--space", "H:3"]);
    let o = cohom(&["angle", "--subspace", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("(0, 0, 1.5708)"), "{}", stdout(&o));
}

#[test]
fn family_c_is_totally_real() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "c.json", &["--family", "c", "--k", "2", "--space", "H:3"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 2);
    let o = cohom(&["angle", "--subspace", f.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("(1.5708, 1.5708, 1.5708)"), "{}", stdout(&o));
}

#[test]
fn complex_line_has_zero_kahler_angle() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "line.json", &["--family", "complex", "--k", "1", "--space", "C:3"]);
    let o = cohom(&["angle", "--subspace", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "phi = 0, constant");
    let a = json(&cohom(&["angle", "--subspace", f.to_str().unwrap(), "--format", "json"]));
    assert_valid("angle.schema.json", &a);
}

#[test]
fn non_orthonormal_input_warns_and_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let clean = dir.path().join("clean.json");
    let skewed = dir.path().join("skewed.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(&clean, format!(r#"{{"algebra":"C","n":3,"basis":[[1,0,0,0],[0,{h},{h},0]]}}"#)).unwrap();
    std::fs::write(&skewed, r#"{"algebra":"C","n":3,"basis":[[3,0,0,0],[2,1,1,0]]}"#).unwrap();

    let a = cohom(&["angle", "--subspace", clean.to_str().unwrap()]);
    let b = cohom(&["angle", "--subspace", skewed.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert!(stderr(&a).is_empty());
    assert!(stderr(&b).contains("warning"), "{}", stderr(&b));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn inadmissible_constructions_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let out = out.to_str().unwrap();

    let o = cohom(&["construct", "--family", "d", "--space", "C:3", "-o", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('H'), "{}", stderr(&o));

    let o = cohom(&["construct", "--family", "e", "--k", "2", "--phi", "0.3", "--space", "H:4", "-o", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2k <= n-1"), "{}", stderr(&o));

    let o = cohom(&["construct", "--family", "zz", "--space", "H:4", "-o", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new(out).exists());
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("len.json", r#"{"algebra":"C","n":3,"basis":[[1,0,0]]}"#),
        ("dep.json", r#"{"algebra":"C","n":2,"basis":[[1,0],[2,0]]}"#),
        ("tag.json", r#"{"algebra":"X","n":2,"basis":[]}"#),
        ("extra.json", r#"{"algebra":"C","n":2,"basis":[],"note":1}"#),
        ("garbage.json", "not json"),
    ];
    for (name, text) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        for cmd in ["angle", "classify"] {
            let o = cohom(&[cmd, "--subspace", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {name}");
        }
    }
    let o = cohom(&["angle", "--subspace", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cohom(&[]).status.code(), Some(2));
    assert_eq!(cohom(&["moduli"]).status.code(), Some(2));
    assert_eq!(cohom(&["moduli", "--space", "O:3"]).status.code(), Some(2));
    assert_eq!(cohom(&["verify", "--suite", "other"]).status.code(), Some(2));
    assert_eq!(cohom(&["verify", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn moduli_tables() {
    let o = cohom(&["moduli", "--space", "H:2"]);
    assert!(stdout(&o).contains("non-totally-geodesic moduli: {2, 3}"), "{}", stdout(&o));

    let o = cohom(&["moduli", "--space", "C:4"]);
    assert!(stdout(&o).contains("{2, 3} ∪ ((0, π/2) × {2})"));

    for space in ["R:5", "C:4", "H:2", "H:3", "O:2"] {
        let v = json(&cohom(&["moduli", "--space", space, "--format", "json"]));
        assert_valid("moduli.schema.json", &v);
    }
}

#[test]
fn octonionic_codim_5_is_not_cohomogeneity_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("o5.json");
    let mut s = cohom::numerics::Sampler::new(11);
    let w = cohom::subspace::Subspace::from_orthonormal(s.frame(8, 5)).unwrap();
    let m = cohom::model::SolvableModel::parse("O:2").unwrap();
    cohom::io::SubspaceFile::new(&m, &w).write(&p).unwrap();

    let v = json(&cohom(&["classify", "--subspace", p.to_str().unwrap(), "--format", "json"]));
    assert_valid("record.schema.json", &v);
    assert_eq!(v["codim"], 5);
    assert_eq!(v["verdict"]["kind"], "not-cohomogeneity-one");
}

#[test]
fn classify_records_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("a.json", &["--family", "a", "--space", "H:3"]),
        ("b.json", &["--family", "b", "--space", "H:3"]),
        ("f.json", &["--family", "f", "--phi", "0.7", "--space", "H:3"]),
        ("real.json", &["--family", "real", "--k", "2", "--space", "C:4"]),
        ("kangle.json", &["--family", "kangle", "--phi", "1.0", "--space", "C:4"]),
        ("rr.json", &["--family", "real", "--k", "3", "--space", "R:5"]),
    ];
    for (name, args) in cases {
        let f = construct(dir.path(), name, args);
        let v = json(&cohom(&["classify", "--subspace", f.to_str().unwrap(), "--format", "json"]));
        assert_valid("record.schema.json", &v);
        let text = stdout(&cohom(&["classify", "--subspace", f.to_str().unwrap()]));
        assert!(text.contains(v["verdict"]["kind"].as_str().unwrap()), "{text}");
    }
}

#[test]
fn construct_classify_round_trip_is_byte_stable() {
    let run = |dir: &Path| {
        let f = construct(dir, "f.json", &["--family", "f", "--k", "1", "--phi", "0.3", "--space", "H:4"]);
        let file = std::fs::read(&f).unwrap();
        let rec = cohom(&["classify", "--subspace", f.to_str().unwrap(), "--format", "json", "--seed", "7"]);
        assert!(rec.status.success());
        (file, rec.stdout)
    };
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(d1.path()), run(d2.path()));
}

#[test]
fn verify_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = cohom(&["verify", "--suite", "paper", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("12 of 12 checks passed"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_valid("report.schema.json", &v);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(ids, sorted);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["samples"], 64);
}

#[test]
fn verify_filters_and_fails_cleanly() {
    let v = json(&cohom(&["verify", "--algebra", "O", "--format", "json"]));
    assert_valid("report.schema.json", &v);
    let n = v["checks"].as_array().unwrap().len();
    assert!(n > 0 && n < 12);

    let o = cohom(&["verify", "--only", "c01", "--threshold", "1e-300", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("report.schema.json", &v);
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["status"], "fail");
}

#[test]
fn octonionic_angle_reports_cayley_modulus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.json");
    let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..8).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    std::fs::write(&p, serde_json::json!({"algebra": "O", "n": 2, "basis": rows}).to_string()).unwrap();
    let a = json(&cohom(&["angle", "--subspace", p.to_str().unwrap(), "--format", "json"]));
    assert_valid("angle.schema.json", &a);
    assert!((a["tau"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(a["grassmannOrbitDim"], 12);
}
