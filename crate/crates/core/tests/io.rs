use std::collections::BTreeMap;
use std::path::PathBuf;

use afd_core::manifest::{load_manifest, parse_manifest, Command};
use afd_core::report::{emit_report, tensor_json, CheckOutcome, Format, ReportDocument};
use afd_core::run::{run_command, RunOptions};
use afd_core::tensor::Tensor;
use afd_core::Error;
use serde_json::json;

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../manifests/{name}.json"))
}

const PLANE: &str = r#""algebra": {"kind": "polynomial", "generators": ["x", "y"], "transcendence_basis": ["x", "y"]}"#;

#[test]
fn bundled_manifests_load() {
    let m = load_manifest(bundled("poly_metric")).unwrap();
    assert_eq!(m.dim(), 2);
    assert!(m.metric.is_some());
    let f = load_manifest(bundled("friedmann")).unwrap();
    assert_eq!(f.dim(), 4);
    assert!(f.stress_energy.is_some());
    let k = load_manifest(bundled("kerr_family")).unwrap();
    assert_eq!(k.algebra.context().constants(), ["m", "j"]);
    let e = load_manifest(bundled("elliptic_field")).unwrap();
    assert_eq!(e.dim(), 1);
}

#[test]
fn load_errors() {
    assert!(matches!(load_manifest("/nonexistent/m.json"), Err(Error::FileNotFound(_))));
    match parse_manifest("{\n  \"notes\": \"a\",\n  ,\n}") {
        Err(Error::ParseError { line, column, .. }) => assert_eq!((line, column), (3, 3)),
        other => panic!("{other:?}"),
    }
    let wide = format!(r#"{{{PLANE}, "metric": [["1", "0", "0"], ["0", "1", "0"]]}}"#);
    assert!(matches!(parse_manifest(&wide), Err(Error::ValidationError(_))));
    let typo = format!(r#"{{{PLANE}, "metrik": [["1"]]}}"#);
    assert!(matches!(parse_manifest(&typo), Err(Error::ValidationError(_))));
    let bad_expr = format!(r#"{{{PLANE}, "metric": [["1", "x +"], ["x", "1"]]}}"#);
    let err = parse_manifest(&bad_expr).unwrap_err();
    assert_eq!(err.code(), "syntax_error");
    assert!(err.to_string().starts_with("in metric[1][2]:"), "{err}");
    let unknown = format!(r#"{{{PLANE}, "checks": ["dim", "curl"]}}"#);
    assert!(matches!(parse_manifest(&unknown), Err(Error::ValidationError(_))));
    let clash = r#"{"algebra": {"kind": "polynomial", "generators": ["t"], "transcendence_basis": ["t"]}, "curves": {"c": {"t": "t"}}}"#;
    assert!(matches!(parse_manifest(clash), Err(Error::ValidationError(_))));
    let short_curve = format!(r#"{{{PLANE}, "curves": {{"c": {{"x": "t"}}}}}}"#);
    assert!(matches!(parse_manifest(&short_curve), Err(Error::ValidationError(_))));
}

#[test]
fn curves_pick_their_line() {
    let text = format!(r#"{{{PLANE}, "curves": {{"p": {{"x": "t", "y": "t^2"}}, "q": {{"x": "1/t", "y": "0"}}}}}}"#);
    let m = parse_manifest(&text).unwrap();
    assert!(m.curves["p"].line.is_formal_line());
    assert!(!m.curves["q"].line.is_formal_line());
}

#[test]
fn command_examples() {
    let f = load_manifest(bundled("friedmann")).unwrap();
    let r = run_command(&f, Command::Dim, &RunOptions::default());
    assert_eq!(r.to_json()["results"]["dim"], json!({ "dimension": "4" }));
    assert_eq!(r.exit_code(), 0);

    let mk = load_manifest(bundled("minkowski")).unwrap();
    let r = run_command(&mk, Command::Efe, &RunOptions::default());
    let v = r.to_json();
    assert_eq!(v["results"]["efe"]["pass"], true);
    assert_eq!(v["results"]["efe"]["residual"]["components"], json!([]));

    let e = load_manifest(bundled("euclidean")).unwrap();
    let r = run_command(&e, Command::Geodesic, &RunOptions::default());
    assert_eq!(r.to_json()["results"]["geodesic"]["curves"]["line"]["residual"], json!(["0", "0"]));
    assert_eq!(r.status(), "ok");

    let r = run_command(&e, Command::Check, &RunOptions { checks: Some(vec![Command::Dim]) });
    assert_eq!(r.results.keys().collect::<Vec<_>>(), ["algebraifold", "dim"]);
}

#[test]
fn missing_data_is_reported_not_skipped() {
    let m = parse_manifest(&format!("{{{PLANE}}}")).unwrap();
    for c in [Command::Christoffel, Command::Efe, Command::Geodesic, Command::Lie, Command::Bracket, Command::Pullback] {
        let r = run_command(&m, c, &RunOptions::default());
        let v = r.to_json();
        assert_eq!(v["results"][c.as_str()]["error"]["code"], "validation_error", "{c}");
        assert_eq!(r.exit_code(), 1);
    }
}

#[test]
fn math_failures_exit_two() {
    let text = format!(
        r#"{{{PLANE}, "metric": [["1", "0"], ["0", "1"]], "lambda": "x", "curves": {{"bent": {{"x": "t^2", "y": "0"}}}}}}"#
    );
    let m = parse_manifest(&text).unwrap();
    let r = run_command(&m, Command::Efe, &RunOptions::default());
    assert_eq!(r.to_json()["results"]["efe"]["error"]["code"], "non_constant_coupling");
    assert_eq!(r.exit_code(), 2);
    let r = run_command(&m, Command::Geodesic, &RunOptions::default());
    assert_eq!(r.to_json()["results"]["geodesic"]["curves"]["bent"]["residual"], json!(["2", "0"]));
    assert_eq!(r.exit_code(), 2);
    assert_eq!(r.status(), "fail");

    let conic = r#"{"algebra": {"kind": "field", "generators": ["x", "y"], "transcendence_basis": ["x"], "relations": ["y^2 - x^2 - 1"]}, "curves": {"c": {"x": "t", "y": "t"}}}"#;
    let m = parse_manifest(conic).unwrap();
    let r = run_command(&m, Command::Pullback, &RunOptions::default());
    assert_eq!(r.to_json()["results"]["pullback"]["error"]["code"], "relation_not_preserved");
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn emit_examples() {
    let m = load_manifest(bundled("poly_metric")).unwrap();
    let zero = Tensor::zero(&m.algebra, 1, 2);
    assert_eq!(tensor_json(&zero), json!({ "rank": [1, 2], "dimension": 2, "components": [] }));

    let mut g = Tensor::zero(&m.algebra, 0, 2);
    g.set(vec![0, 1], m.algebra.parse("x").unwrap()).unwrap();
    assert_eq!(
        tensor_json(&g)["components"],
        json!([{ "index": [1, 2], "value": "x" }])
    );

    let doc = ReportDocument {
        command: "dim".into(),
        inputs: json!(null),
        results: BTreeMap::from([("dim".to_string(), CheckOutcome::ok(json!({ "dimension": "2" })))]),
        warnings: vec![],
    };
    let text = emit_report(&doc, Format::Text);
    assert!(text.contains("results:\n  dim:\n    dimension: 2\n"), "{text}");
    let js = emit_report(&doc, Format::Json);
    let positions: Vec<usize> = ["\"command\"", "\"engine\"", "\"inputs\"", "\"results\"", "\"status\"", "\"warnings\""]
        .iter()
        .map(|k| js.find(k).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{js}");
    assert!(js.ends_with("}\n"));
}

#[test]
fn warnings_reach_the_report() {
    let quintic = r#"{"algebra": {"kind": "field", "generators": ["x", "y"], "transcendence_basis": ["x"], "relations": ["y^5 - x"]}}"#;
    let m = parse_manifest(quintic).unwrap();
    let r = run_command(&m, Command::Dim, &RunOptions::default());
    assert_eq!(r.warnings.len(), 1);
    assert_eq!(r.to_json()["warnings"].as_array().unwrap().len(), 1);
}
