use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn cosegal(args: &[&str], seed: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cosegal"));
    c.args(args).env_remove("COSEGAL_SEED");
    if let Some(s) = seed {
        c.env("COSEGAL_SEED", s);
    }
    c.output().unwrap()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let o = cosegal(args, None);
    let report = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
    (o.status.code().unwrap(), report, String::from_utf8_lossy(&o.stderr).into_owned())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn checks<'a>(report: &'a Value, theorem: &str) -> Vec<&'a Value> {
    report["checks"].as_array().unwrap().iter().filter(|c| c["theorem"] == theorem).collect()
}

#[test]
fn validate_strict_category_exits_zero_with_no_violations() {
    for f in ["arrow_finset.json", "dual_numbers_vectq.json"] {
        let (code, r, _) = run(&["validate", "--input", p(&fixture(f))]);
        assert_eq!(code, 0, "{}", f);
        assert_eq!(r["data"]["violations"], serde_json::json!([]));
        assert_eq!(checks(&r, "strict-category-axioms")[0]["ok"], true);
    }
}

#[test]
fn validate_reports_violations_with_exit_two() {
    let (code, r, err) = run(&["validate", "--input", p(&fixture("not_category_vectq.json"))]);
    assert_eq!(code, 2);
    let v = r["data"]["violations"].as_array().unwrap();
    assert!(v.iter().any(|x| x["kind"] == "left-unit" && x["location"] == "A.A"));
    assert!(err.contains("failed: theorem: strict-category-axioms"));
}

#[test]
fn unitalize_then_check_unital_pipeline_over_sampled_inputs() {
    let dir = tempfile::tempdir().unwrap();
    for (backend, seed) in [("finset", "1"), ("vectq", "2"), ("chq", "3"), ("vectq", "11")] {
        let sample = dir.path().join(format!("in-{}-{}.json", backend, seed));
        let unital = dir.path().join(format!("out-{}-{}.json", backend, seed));
        let o = cosegal(
            &["sample", "--kind", "pointed", "--backend", backend, "--objects", "2", "--dim", "1", "--output", p(&sample)],
            Some(seed),
        );
        assert_eq!(o.status.code(), Some(0));
        let (code, r, _) = run(&["unitalize", "--input", p(&sample), "--output", p(&unital)]);
        assert_eq!(code, 0, "{} {}", backend, seed);
        assert!(r["data"]["trace"]["rounds"].as_array().unwrap().len() <= 64);
        let (code, r, _) = run(&["check-unital", "--input", p(&unital)]);
        assert_eq!(code, 0, "{} {}", backend, seed);
        let flags = checks(&r, "unitalization-preserves-(A,B)");
        assert_eq!(flags.len(), 4);
        assert!(flags.iter().all(|c| c["ok"] == true));
    }
}

#[test]
fn check_unital_fails_on_a_non_unital_input() {
    let (code, r, _) = run(&["check-unital", "--input", p(&fixture("kobject_vectq.json"))]);
    assert_eq!(code, 4, "{}", r);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert_eq!(run(&["gamma", "--input", p(&fixture("kobject_vectq.json")), "--output", p(&g)]).0, 0);
    let (code, r, _) = run(&["check-unital", "--input", p(&g)]);
    assert_eq!(code, 2);
    assert_eq!(checks(&r, "unit-points-present")[0]["ok"], false);
}

#[test]
fn cosegal_check_on_gamma_output_lists_failing_chains() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("gamma.json");
    let (code, r, _) = run(&["gamma", "--input", p(&fixture("kobject_vectq.json")), "--output", p(&g)]);
    assert_eq!(code, 0);
    assert!(checks(&r, "gamma-keeps-(A,B)").iter().all(|c| c["ok"] == true));
    let (code, r, err) = run(&["cosegal-check", "--input", p(&g)]);
    assert_eq!(code, 2);
    let failures = r["data"]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    for c in r["data"]["chains"].as_array().unwrap() {
        assert!(c["chain"].as_str().unwrap().split('.').count() >= 3);
        assert_eq!(c["check"], "weak-equivalence");
        assert_eq!(c["witness-dims"].as_array().unwrap().len(), 2);
    }
    assert!(err.contains("cosegal-condition"));
}

#[test]
fn cosegal_check_passes_on_a_strict_category() {
    let (code, r, _) = run(&["cosegal-check", "--input", p(&fixture("dual_numbers_vectq.json"))]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["failures"], serde_json::json!([]));
}

#[test]
fn k_inject_routes_agree() {
    for f in ["kobject_vectq.json", "arrow_finset.json", "pointed_chq.json"] {
        let (code, r, _) = run(&["k-inject", "--input", p(&fixture(f))]);
        assert!(code == 0 || code == 2);
        assert_eq!(checks(&r, "k-injectivity-routes-agree")[0]["ok"], true, "{}", f);
    }
    assert_eq!(run(&["k-inject", "--input", p(&fixture("arrow_finset.json"))]).0, 0);
}

#[test]
fn roundtrip_every_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for f in fixtures() {
        let out = dir.path().join("canonical.json");
        let (code, r, _) = run(&["roundtrip", "--input", p(&f), "--output", p(&out)]);
        assert_eq!(code, 0, "{}", f.display());
        assert_eq!(checks(&r, "roundtrip-decode-encode-decode")[0]["ok"], true);
        let (code, r, _) = run(&["roundtrip", "--input", p(&out)]);
        assert_eq!(code, 0);
        assert_eq!(r["data"]["canonical"], true, "{}", f.display());
    }
}

#[test]
fn unreduced_rational_is_canonicalized_and_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let (code, r, _) = run(&["roundtrip", "--input", p(&fixture("not_category_vectq.json")), "--output", p(&out)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["canonical"], false);
    let w = r["warnings"].as_array().unwrap();
    assert!(w.iter().any(|x| x.as_str().unwrap().contains("\"2/4\"") && x.as_str().unwrap().contains("1/2")));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"1/2\"") && !text.contains("2/4"));
}

#[test]
fn truncated_file_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("trunc.json");
    let full = std::fs::read_to_string(fixture("arrow_finset.json")).unwrap();
    std::fs::write(&bad, &full[..200]).unwrap();
    for cmd in ["roundtrip", "validate"] {
        let (code, r, err) = run(&[cmd, "--input", p(&bad)]);
        assert_eq!(code, 3);
        assert_eq!(r["error"]["kind"], "parse");
        assert!(r["error"]["location"]["line"].as_u64().unwrap() > 1);
        assert!(r["error"]["location"]["column"].as_u64().is_some());
        assert!(err.contains("line"));
    }
}

#[test]
fn corrupted_document_reports_schema_location() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("\"A.A\": {\"vectq\": 2}", "\"A.A\": {\"vectq\": \"two\"}", "$.homs[\"A.A\"].vectq"),
        ("[\"1\"], [\"0\"]", "[\"1\"], [\"x\"]", "$.ids.A.matrix[1][0]"),
        ("\"backend\": \"vectq\"", "\"backend\": \"vectr\"", "$.backend"),
        ("\"A.A.A\":", "\"A.Q.A\":", "$.comp[\"A.Q.A\"]"),
    ];
    let base = std::fs::read_to_string(fixture("dual_numbers_vectq.json")).unwrap();
    for (from, to, loc) in cases {
        assert!(base.contains(from), "{}", from);
        let f = dir.path().join("bad.json");
        std::fs::write(&f, base.replace(from, to)).unwrap();
        let (code, r, _) = run(&["roundtrip", "--input", p(&f)]);
        assert_eq!(code, 4, "{}", to);
        assert_eq!(r["error"]["location"]["pointer"], loc);
    }
}

#[test]
fn exit_five_when_unitalization_does_not_stabilize() {
    let (code, r, _) = run(&["unitalize", "--input", p(&fixture("pointed_vectq.json")), "--cap", "1"]);
    assert_eq!(code, 5);
    assert_eq!(r["error"]["kind"], "unstabilized");
}

#[test]
fn exit_six_on_io_failures() {
    let (code, r, _) = run(&["validate", "--input", "/nonexistent/in.json"]);
    assert_eq!(code, 6);
    assert_eq!(r["error"]["kind"], "io");
    let (code, _, _) = run(&["gamma", "--input", p(&fixture("kobject_vectq.json")), "--output", "/nonexistent/dir/out.json"]);
    assert_eq!(code, 6);
}

#[test]
fn exit_seven_when_a_precondition_fails() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    assert_eq!(run(&["gamma", "--input", p(&fixture("kobject_vectq.json")), "--output", p(&g)]).0, 0);
    let (code, r, _) = run(&["unitalize", "--input", p(&g)]);
    assert_eq!(code, 7);
    assert_eq!(r["error"]["kind"], "precondition");
    let (code, _, _) = run(&["cosegalify", "--input", p(&fixture("pointed_vectq.json"))]);
    assert_eq!(code, 7);
}

#[test]
fn exit_sixty_four_on_usage_errors() {
    let f = fixture("arrow_finset.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", "--bogus"],
        vec!["frobnicate"],
        vec!["validate", "--input", p(&f), "--backend", "vectq"],
        vec!["validate", "--input", p(&f), "--backend", "nonsense"],
        vec!["validate", "--input", p(&f), "--input", p(&f)],
        vec!["tensor", "--input", p(&f)],
        vec!["yoneda", "--input", p(&f)],
        vec!["yoneda", "--input", p(&f), "--object", "Z"],
        vec!["validate", "--input", p(&f), "--format", "xml"],
    ];
    for args in cases {
        assert_eq!(run(&args).0, 64, "{:?}", args);
    }
    let pv = fixture("pointed_vectq.json");
    assert_eq!(run(&["validate", "--input", p(&pv), "--truncation", "9"]).0, 64);
    assert_eq!(run(&["validate", "--input", p(&pv), "--truncation", "0"]).0, 64);
    assert_eq!(cosegal(&["sample", "--kind", "pointed"], Some("minus one")).status.code(), Some(64));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cosegal(&["--help"], None).status.code(), Some(0));
    assert_eq!(cosegal(&["--version"], None).status.code(), Some(0));
}

#[test]
fn lowering_the_truncation_restricts_the_input() {
    let (code, r, _) = run(&["validate", "--input", p(&fixture("pointed_chq.json")), "--truncation", "2"]);
    assert_eq!(code, 0, "{}", r);
    let (code, r, _) = run(&["cosegal-check", "--input", p(&fixture("kobject_vectq.json")), "--truncation", "2"]);
    assert_eq!(code, 0);
    assert!(r["data"]["chains"].as_array().unwrap().iter().all(|c| c["chain"].as_str().unwrap().len() == 5));
}

#[test]
fn reports_and_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let f = fixture("pointed_finset.json");
    let o1 = cosegal(&["unitalize", "--input", p(&f), "--output", p(&a)], None);
    let o2 = cosegal(&["unitalize", "--input", p(&f), "--output", p(&b)], None);
    assert_eq!(o1.stdout, o2.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let s1 = cosegal(&["sample", "--kind", "kobject"], Some("42"));
    let s2 = cosegal(&["sample", "--kind", "kobject"], Some("42"));
    let s3 = cosegal(&["sample", "--kind", "kobject"], Some("43"));
    assert_eq!(s1.stdout, s2.stdout);
    assert_ne!(s1.stdout, s3.stdout);
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "no temporary files remain");
}

#[test]
fn text_format_lists_theorems() {
    let o = cosegal(&["validate", "--input", p(&fixture("arrow_finset.json")), "--format", "text"], None);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s, "validate: ok\nPASS theorem: strict-category-axioms {\"violations\":[]}\n");
}

#[test]
fn constructions_on_strict_categories() {
    let arrow = fixture("arrow_finset.json");
    let dual = fixture("dual_numbers_vectq.json");
    let (code, r, _) = run(&["realize", "--input", p(&arrow)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["result"]["type"], "strict-category");
    assert_eq!(r["data"]["stable_at_truncation"], true);
    let (code, r, _) = run(&["point", "--input", p(&arrow)]);
    assert_eq!(code, 0);
    assert!(r["data"]["result"]["units"].is_object());
    let (code, r, _) = run(&["tensor", "--input", p(&dual), "--input", p(&dual)]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["result"]["values"]["A×A.A×A"]["vectq"], 4);
    assert_eq!(run(&["tensor", "--input", p(&dual), "--input", p(&arrow)]).0, 4);
}

#[test]
fn yoneda_and_distributor_check() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.json");
    let (code, r, _) = run(&["yoneda", "--input", p(&fixture("dual_numbers_vectq.json")), "--output", p(&y)]);
    assert_eq!(code, 0);
    assert_eq!(checks(&r, "yoneda-inherits-cosegal")[0]["ok"], true);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&y).unwrap()).unwrap();
    assert_eq!(doc["split"], serde_json::json!([["A"], ["*"]]));
    assert_eq!(run(&["distributor-check", "--input", p(&y)]).0, 0);
    let (code, r, _) = run(&["yoneda", "--input", p(&fixture("arrow_finset.json")), "--object", "B"]);
    assert_eq!(code, 0, "{}", r);

    // listing `*` first makes the nonzero chains run from Y into X
    let mut flipped = doc.clone();
    flipped["objects"] = serde_json::json!(["*", "A"]);
    flipped["split"] = serde_json::json!([["*"], ["A"]]);
    let text = serde_json::to_string(&flipped).unwrap();
    let f = dir.path().join("flipped.json");
    std::fs::write(&f, text).unwrap();
    let (code, r, _) = run(&["distributor-check", "--input", p(&f)]);
    assert_eq!(code, 2, "{}", r);
    assert!(!checks(&r, "distributor-vanishes-from-Y-to-X")[0]["detail"]["chains"].as_array().unwrap().is_empty());
}

#[test]
fn distributor_check_with_explicit_restrictions() {
    let dir = tempfile::tempdir().unwrap();
    let y = dir.path().join("y.json");
    assert_eq!(run(&["yoneda", "--input", p(&fixture("dual_numbers_vectq.json")), "--output", p(&y)]).0, 0);
    let unit = dir.path().join("unit.json");
    std::fs::write(
        &unit,
        r#"{"type": "strict-category", "backend": "vectq", "objects": ["*"], "truncation": 3,
            "homs": {"*.*": {"vectq": 1}}, "comp": {"*.*.*": {"matrix": [["1"]]}}, "ids": {"*": {"matrix": [["1"]]}}}"#,
    )
    .unwrap();
    let f = fixture("dual_numbers_vectq.json");
    let (code, r, _) = run(&["distributor-check", "--input", p(&y), "--input", p(&f), "--input", p(&unit)]);
    assert_eq!(code, 0, "{}", r);
    let (code, _, _) = run(&["distributor-check", "--input", p(&f)]);
    assert_eq!(code, 4);
}

#[test]
fn transfer_and_cosegalify() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let (code, r, _) = run(&["transfer", "--input", p(&fixture("cylinder_chq.json")), "--output", p(&t)]);
    assert_eq!(code, 0, "{}", r);
    assert_eq!(checks(&r, "transfer-counit-is-easy-weak-equivalence")[0]["ok"], true);
    let (code, r, _) = run(&["cosegalify", "--input", p(&t)]);
    assert_eq!(code, 0, "{}", r);
    let (code, r, _) = run(&["cosegalify", "--input", p(&fixture("two_constant_chq.json"))]);
    assert_eq!(code, 0, "{}", r);
    assert_eq!(checks(&r, "cosegalification-preserves-realization")[0]["ok"], true);
    assert_eq!(run(&["transfer", "--input", p(&fixture("arrow_finset.json"))]).0, 4);
}

#[test]
fn nat_object_is_exact_on_finite_sets() {
    let (code, r, _) = run(&["nat-object", "--input", p(&fixture("transformations_monoid.json"))]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["object"], serde_json::json!({ "finset": ["e"] }));
    assert_eq!(checks(&r, "nat-object-is-axiom-exact")[0]["detail"]["enumerated"], 3);
    assert_eq!(run(&["nat-object", "--input", p(&fixture("transformations_finset.json"))]).0, 0);
}

#[test]
fn psi_fundamental_factorization() {
    for f in ["psi_vectq.json", "psi_chq.json"] {
        let (code, r, _) = run(&["psi", "--input", p(&fixture(f))]);
        assert_eq!(code, 0, "{}", f);
        assert_eq!(checks(&r, "fundamental-factorization")[0]["ok"], true);
        assert_eq!(checks(&r, "psi-ell-iso-at-degree-one")[0]["ok"], true);
    }
    assert_eq!(run(&["psi", "--input", p(&fixture("psi_vectq.json")), "--truncation", "1"]).0, 64);
}
