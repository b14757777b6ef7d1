use std::path::{Path, PathBuf};
use std::process::Command;

use ttm_cli::document::{PolygonDocument, SpecDocument};
use ttm_cli::report::{ErrorKind, ReportDocument};
use ttm_cli::{run_command, EXIT_INVALID, EXIT_OK, EXIT_UNSUPPORTED};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn fixtures(suffix: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(suffix))
        .collect();
    v.sort();
    assert!(!v.is_empty());
    v
}

fn run(args: &[&str]) -> ttm_cli::Outcome {
    run_command(std::iter::once("ttm").chain(args.iter().copied()))
}

#[test]
fn spec_fixtures_round_trip() {
    for path in fixtures(".ttm") {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = SpecDocument::parse(&text).unwrap();
        let spec = doc.to_spec().unwrap();
        let back = SpecDocument::from_spec(&spec).unwrap();
        assert_eq!(back, doc, "{}", path.display());
        assert_eq!(SpecDocument::parse(&back.to_json()).unwrap(), doc);
    }
}

#[test]
fn polygon_fixtures_round_trip() {
    for path in fixtures(".poly.json") {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = PolygonDocument::parse(&text).unwrap();
        let back = PolygonDocument::from_polygon(&doc.to_polygon().unwrap());
        assert_eq!(back, doc, "{}", path.display());
        assert_eq!(PolygonDocument::parse(&back.to_json()).unwrap(), doc);
    }
}

#[test]
fn json_and_text_outputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for path in fixtures(".ttm") {
        let p = path.to_string_lossy().to_string();
        for cmd in [&["validate"][..], &["invariants"], &["cohomology", "--e2"], &["signature", "--verbose"], &["signature"]] {
            let mut v: Vec<String> = cmd.iter().map(|s| s.to_string()).collect();
            v.push(p.clone());
            invocations.push(v);
        }
    }
    for path in fixtures(".poly.json") {
        let p = path.to_string_lossy().to_string();
        invocations.push(vec!["delzant".into(), "check".into(), p.clone()]);
        let out = dir.path().join("out.ttm").to_string_lossy().to_string();
        invocations.push(vec!["delzant".into(), "convert".into(), p, "-o".into(), out]);
    }
    for args in invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = run(&args);
        let mut with_json = args.clone();
        with_json.push("--json");
        let json = run(&with_json);
        assert_eq!(text.code, json.code, "{args:?}");
        let parsed: ReportDocument = serde_json::from_str(&json.output).unwrap();
        assert_eq!(parsed, text.report, "{args:?}");
        assert_eq!(parsed.to_string(), text.output, "{args:?}");
    }
}

#[test]
fn cohomology_json_schema() {
    let path = fixtures_dir().join("cylinder.ttm");
    let out = run(&["cohomology", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    let c = &v["cohomology"];
    assert_eq!(c["H"][3], serde_json::json!({"rank": 1, "torsion": [2]}));
    assert_eq!(c["associated_graded"], serde_json::json!(true));
    assert!(c.get("e2").is_none());
}

#[test]
fn exit_codes() {
    let f = |name: &str| fixtures_dir().join(name).to_string_lossy().to_string();
    assert_eq!(run(&["signature", &f("one_corner_torus.ttm")]).code, EXIT_OK);
    assert_eq!(run(&["signature", &f("cornerless_genus1.ttm")]).code, EXIT_UNSUPPORTED);
    assert_eq!(run(&["signature", &f("cylinder.ttm")]).code, EXIT_UNSUPPORTED);
    assert_eq!(run(&["signature", &f("two_corner_torus.ttm")]).code, EXIT_INVALID);
    assert_eq!(run(&["delzant", "check", &f("weighted_triangle.poly.json")]).code, EXIT_INVALID);
    assert_eq!(run(&["cohomology", &f("no_such_file.ttm")]).code, EXIT_INVALID);
    let usage = run(&["frobnicate"]);
    assert_eq!(usage.code, EXIT_UNSUPPORTED);
    assert_eq!(usage.report.error.unwrap().kind, ErrorKind::Usage);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn invalid_data_is_reported_not_panicked() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().to_string()
    };
    let bad_corner = write(
        "bad_corner.ttm",
        r#"{"fiber_rank": 2, "base": {"family": "one_boundary", "genus": 0, "corners": 3},
            "monodromy": {"alpha": [], "beta": []}, "characteristic": [[1, 0], [0, 1], [-2, -1]]}"#,
    );
    let out = run(&["validate", &bad_corner]);
    assert_eq!(out.code, EXIT_INVALID);
    let findings = out.report.validation.unwrap().findings;
    assert!(findings.iter().any(|f| f.check == "corner" && f.location.contains("arcs 2 and 3")));

    let shape = write(
        "shape.ttm",
        r#"{"fiber_rank": 2, "base": {"family": "cylinder"}, "monodromy": {"loop": [[1, 0, 0], [0, 1, 0]]}, "characteristic": [[1, 0], [1, 0]]}"#,
    );
    let out = run(&["cohomology", &shape]);
    assert_eq!(out.code, EXIT_INVALID);
    let err = out.report.error.unwrap();
    assert_eq!(err.kind, ErrorKind::Parse);
    assert!(err.message.contains("monodromy.loop"), "{}", err.message);

    let missing = write("missing.ttm", "{\n  \"fiber_rank\": 2,\n  \"base\": {\"family\": \"cylinder\"},\n  \"monodromy\": {\"loop\": [[1, 0], [0, 1]]}\n}\n");
    let err = run(&["validate", &missing]).report.error.unwrap();
    assert!(err.message.contains("characteristic") && err.message.contains("line 5"), "{}", err.message);

    let unbounded = write("open.poly.json", r#"{"normals": [[1, 0], [0, 1], [1, 1]], "offsets": [0, 0, 1]}"#);
    let out = run(&["delzant", "check", &unbounded]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.report.error.unwrap().message.contains("unbounded"));
}

#[test]
fn converted_polygon_matches_spec_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["triangle", "square"] {
        let out = dir.path().join(format!("{name}.ttm"));
        let poly = fixtures_dir().join(format!("{name}.poly.json"));
        let r = run(&["delzant", "convert", poly.to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert_eq!(r.code, EXIT_OK);
        let converted = SpecDocument::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
        let fixture = SpecDocument::parse(&std::fs::read_to_string(fixtures_dir().join(format!("{name}.ttm"))).unwrap()).unwrap();
        assert_eq!(converted, fixture);
    }
}

#[test]
fn binary_prints_and_exits() {
    let path = fixtures_dir().join("one_corner_torus.ttm");
    let out = Command::new(env!("CARGO_BIN_EXE_ttm")).args(["signature", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("signature: -1"));
    let path = fixtures_dir().join("cornerless_genus1.ttm");
    let out = Command::new(env!("CARGO_BIN_EXE_ttm")).args(["signature", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("corner point"));
}
