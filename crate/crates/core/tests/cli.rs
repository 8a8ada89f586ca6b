use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Retrieve, Uri};
use serde_json::Value;

use mec_core::code::{generator_matrix, CodeSpec, CodeSpecJson, GenMatrix, Provenance};
use mec_core::curve::{make_curve, Point};
use mec_core::field::make_field;
use mec_core::group::{index2_subgroups, GroupTable};
use mec_core::places::Divisor;

struct SchemaDir;

impl Retrieve for SchemaDir {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.as_str().rsplit('/').next().unwrap_or_default().to_string();
        let text = std::fs::read_to_string(schema_dir().join(name))?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_valid(schema: &str, v: &Value) {
    let s: Value = serde_json::from_str(&std::fs::read_to_string(schema_dir().join(schema)).unwrap()).unwrap();
    let validator = jsonschema::options().with_retriever(SchemaDir).build(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{v:#}");
}

fn mec(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mec")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, String::from_utf8(out.stderr).unwrap())
}

const GF289: [&str; 6] = ["--p", "17", "--a", "2", "--modulus", "3,16,1"];

#[test]
fn bound_output() {
    let (code, v, _) = mec(&["bound", "--q", "289", "--k", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], 162);
    assert_eq!(v["citation"], "Table 1 row 4");
    assert_valid("bound.schema.json", &v);
    let (code, _, err) = mec(&["bound", "--q", "121", "--k", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("289"));
}

#[test]
fn curve_and_place_commands() {
    let mut args = vec!["curve", "info"];
    args.extend(GF289);
    args.extend(["--coeffs", "0,0,0,0,1"]);
    let (code, v, _) = mec(&args);
    assert_eq!(code, 0);
    assert_eq!(v["N"], 324);
    assert_eq!(v["structure"], serde_json::json!([18, 18]));
    assert_valid("curve_info.schema.json", &v);

    for method in ["avoid", "trace"] {
        let mut args = vec!["place", "deg3"];
        args.extend(GF289);
        args.extend(["--coeffs", "0,0,0,0,1", "--method", method, "--seed", "5"]);
        let (code, v, _) = mec(&args);
        assert_eq!(code, 0, "{method}");
        assert_eq!(v["sum"], "O");
        assert_eq!(v["place"]["degree"], 3);
        assert_valid("place.schema.json", &v);
        if method == "avoid" {
            assert_eq!(v["place"]["witness_b"], serde_json::json!([1, 1]));
        }
    }

    let (code, v, _) = mec(&["curve", "search", "--p", "7", "--a", "1", "--target-n", "13", "--strategy", "exhaustive"]);
    assert_eq!(code, 0);
    assert_valid("curve_search.schema.json", &v);
    let (code, _, _) = mec(&["curve", "search", "--p", "7", "--a", "1", "--target-n", "14"]);
    assert_eq!(code, 1);
}

#[test]
fn construct_verify_audit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("c.json");
    let spec_s = spec.to_str().unwrap();
    let mut args = vec!["code", "construct"];
    args.extend(GF289);
    args.extend(["--k", "4", "-o", spec_s]);
    let (code, v, err) = mec(&args);
    assert_eq!(code, 0, "{err}");
    assert_valid("construct.schema.json", &v);

    let j: Value = serde_json::from_str(&std::fs::read_to_string(&spec).unwrap()).unwrap();
    assert_valid("code_spec.schema.json", &j);
    let csv = std::fs::read_to_string(spec.with_extension("csv")).unwrap();
    let header: Value = serde_json::from_str(csv.lines().next().unwrap().trim_start_matches('#').trim()).unwrap();
    assert_valid("matrix_header.schema.json", &header);

    // the CSV re-parses to the matrix rebuilt from the spec
    let parsed: CodeSpecJson = serde_json::from_value(j).unwrap();
    let s = CodeSpec::from_json(&parsed).unwrap();
    let (_, m) = GenMatrix::from_csv(s.curve.field(), &csv).unwrap();
    assert_eq!(m, generator_matrix(&s).unwrap());

    let mut verdicts = Vec::new();
    for mode in ["combinatorial", "sampled:20000"] {
        let (code, v, err) = mec(&["code", "verify", "-i", spec_s, "--mode", mode]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(v["verdict"], "MDS");
        assert_eq!(v["d"], 159);
        assert_valid("verdict.schema.json", &v);
        verdicts.push(v);
    }
    let (_, again, _) = mec(&["code", "verify", "-i", spec_s, "--mode", "sampled:20000", "--threads", "1"]);
    assert_eq!(again, verdicts[1]);

    let (code, v, _) = mec(&["code", "audit", "-i", spec_s]);
    assert_eq!(code, 0);
    assert_valid("audit.schema.json", &v);
    assert_eq!(v["half_length"], true);
    assert_eq!(v["nonrational_place"], true);
    assert_eq!(v["predicts_not_mds"], false);
}

#[test]
fn not_mds_exits_with_two_and_a_witness() {
    let f = make_field(17, 2, Some(vec![3, 16, 1])).unwrap();
    let e = make_curve(&f, [0, 0, 0, 0, 1].map(|v| f.from_int(v))).unwrap();
    let t = GroupTable::from_curve(&e).unwrap();
    let h = index2_subgroups(&t)[0];
    // H without O, since O carries G
    let d: Vec<Point> =
        t.enumeration().iter().filter(|p| !p.is_inf() && h.contains(&t, t.code(p).unwrap())).cloned().collect();
    let spec = CodeSpec::new(e.clone(), d, Divisor::point(Point::Inf, 4), Provenance::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, serde_json::to_string(&spec.to_json()).unwrap()).unwrap();
    let (code, v, _) = mec(&["code", "verify", "-i", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "NotMDS");
    assert_eq!(v["witness"]["positions"].as_array().unwrap().len(), 4);
    assert_valid("verdict.schema.json", &v);
    let (code, v, _) = mec(&["code", "audit", "-i", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    // n = N/2 - 1, outside the hypotheses of the necessity conditions
    assert_eq!(v["half_length"], false);
    assert_eq!(v["predicts_not_mds"], false);

    let (code, _, err) = mec(&["code", "verify", "-i", path.to_str().unwrap(), "--mode", "bogus"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown mode"));
}

#[test]
fn usage_errors_are_nonzero() {
    let (code, _, _) = mec(&["code"]);
    assert_ne!(code, 0);
    let (code, _, _) = mec(&["bound", "--q", "289"]);
    assert_eq!(code, 1);
}
