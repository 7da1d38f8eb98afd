use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use helixlab::document::{Int, KroneckerSpec, Scalar, SurfaceSpec, VectorSpec};
use helixlab::ProblemDocument;
use helixlab_core::Rational;
use proptest::prelude::*;
use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("report is json")
    }
}

fn helixlab(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_helixlab")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn on_example(cmd: &[&str], name: &str) -> Run {
    let path = example(name);
    let mut args = cmd.to_vec();
    args.extend(["--input", path.to_str().unwrap()]);
    helixlab(&args)
}

fn write_doc(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("doc.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn theorem_on_worked_example() {
    let run = on_example(&["theorem"], "p2-worked.json");
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = run.json();
    assert_eq!(r["applies"], "plus-type-given-ev-stability");
    assert_eq!((r["h"].as_i64(), r["m"].as_i64(), r["n"].as_i64()), (Some(3), Some(2), Some(5)));
    assert_eq!(r["m_prime"].as_i64(), Some(-2));
    assert_eq!(r["dim_n"].as_i64(), Some(2));
    assert_eq!(r["shape"], "r");
    assert_eq!(r["ev_hint"], true);
    assert_eq!(r["mu_v"], "2");
    assert_eq!(r["mu_limits"]["plus_infinity"]["b"], "3/2");
    assert!(r["assumption"].is_string());
}

#[test]
fn theorem_exit_codes() {
    let run = on_example(&["theorem"], "p2-boundary.json");
    assert_eq!(run.code, 1);
    let r = run.json();
    assert_eq!(r["applies"], "none");
    assert_eq!(r["conditions"]["cond1"]["holds"], false);
    // min over F = {O(H)} is 3
    assert_eq!(r["conditions"]["cond1"]["detail"], "mu(v) = 6 < min mu(F_j) = 3 fails");

    let run = on_example(&["theorem"], "blowup1-minus.json");
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["applies"], "minus-type");
    assert_eq!(run.json()["shape"], "e");
    assert!(run.json()["assumption"].is_null());

    // h = 1 for (O, O(E)): no Kronecker space to compare with
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        &dir,
        r#"{"surface": {"kind": "blowup", "k": 1},
            "vectors": {"O": {"r": 1, "c1": [0, 0], "s": 0}, "O(E)": {"r": 1, "c1": [0, 1], "s": -1},
                        "O(H)": {"r": 1, "c1": [1, 0], "s": 1}, "O(2H)": {"r": 1, "c1": [2, 0], "s": 4},
                        "v": {"r": 2, "c1": [1, 0], "s": 1}},
            "collection": ["O", "O(E)", "O(H)", "O(2H)"], "candidate": "v"}"#,
    );
    let run = helixlab(&["theorem", "--input", path.to_str().unwrap()]);
    assert_eq!(run.code, 5, "{}", run.stderr);
}

#[test]
fn chi_renders_rank_zero_slopes() {
    let run = on_example(&["chi"], "blowup1-torsion.json");
    assert_eq!(run.code, 0);
    let r = run.json();
    assert_eq!(r["w"]["slope"], "undefined (rank 0), d=1");
    assert_eq!(r["w"]["nu"], "undefined (rank 0), d=1");
    assert_eq!(r["chi"].as_i64(), Some(1));
    assert_eq!(r["chi_reverse"].as_i64(), Some(0));
    assert_eq!(r["pair_type"], "hom");
}

#[test]
fn chi_on_the_plane() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        &dir,
        r#"{"surface": {"kind": "projective-plane"},
            "vectors": {"O": {"r": 1, "c1": [0], "s": 0}, "O(H)": {"r": 1, "c1": [1], "s": 1}},
            "pair": ["O", "O(H)"]}"#,
    );
    let r = helixlab(&["chi", "--input", path.to_str().unwrap()]).json();
    assert_eq!((r["chi"].as_i64(), r["chi_minus"].as_i64()), (Some(3), Some(3)));
    assert_eq!(r["w"]["slope"], "3");
    assert_eq!(r["w"]["chi_self"].as_i64(), Some(1));
    assert_eq!(r["numerically_exceptional_pair"], true);
}

#[test]
fn parity_violation_names_the_vector() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        &dir,
        r#"{"surface": {"kind": "projective-plane"},
            "vectors": {"a": {"r": 1, "c1": [0], "s": 0}, "bad": {"r": 2, "c1": [1], "s": 0}},
            "pair": ["a", "bad"]}"#,
    );
    let run = helixlab(&["chi", "--input", path.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("'bad'"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
}

#[test]
fn non_exceptional_pair_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    // reversed: chi(O, O(H)) = 3
    let path = write_doc(
        &dir,
        r#"{"surface": {"kind": "projective-plane"},
            "vectors": {"O": {"r": 1, "c1": [0], "s": 0}, "O(H)": {"r": 1, "c1": [1], "s": 1}},
            "pair": ["O(H)", "O"]}"#,
    );
    let p = path.to_str().unwrap();
    assert_eq!(helixlab(&["system", "--input", p]).code, 3);
    // chi only reports
    let run = helixlab(&["chi", "--input", p]);
    assert_eq!(run.code, 0);
    assert_eq!(run.json()["numerically_exceptional_pair"], false);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(&dir, r#"{"surface": {"kind": "projective-plane"}, "vectorz": {}}"#);
    assert_eq!(helixlab(&["chi", "--input", p.to_str().unwrap()]).code, 2);
    let p = write_doc(&dir, r#"{"surface": {"kind": "blowup"}, "pair": ["a", "b"]}"#);
    assert_eq!(helixlab(&["chi", "--input", p.to_str().unwrap()]).code, 2);
    assert_eq!(helixlab(&["chi", "--input", "/nonexistent/doc.json"]).code, 2);
    assert_eq!(helixlab(&["frobnicate"]).code, 2);
    assert_eq!(helixlab(&["kron", "check"]).code, 2);
}

#[test]
fn system_window_flags() {
    let run = on_example(&["system", "--lo", "-3", "--hi", "4"], "p2-worked.json");
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = run.json();
    assert_eq!(r["window"], serde_json::json!([-3, 4]));
    assert_eq!(r["members"].as_array().unwrap().len(), 8);
    assert_eq!(r["type"], "plus");
    let ranks: Vec<i64> = r["members"].as_array().unwrap().iter().map(|m| m["rank"].as_i64().unwrap()).collect();
    // E_{-3}, ..., E_4 with E_1 = O(-H), E_2 = O
    assert_eq!(ranks, [34, 13, 5, 2, 1, 1, 2, 5]);

    let run = on_example(&["system", "--lo", "1"], "p2-worked.json");
    assert_eq!(run.code, 2);

    // h = 1 has no limits
    let run = on_example(&["system"], "blowup1-torsion.json");
    assert_eq!(run.code, 0);
    assert!(run.json()["mu_limits"].is_null());
}

#[test]
fn kron_check_examples() {
    let r = on_example(&["kron", "check"], "kron-322-f2.json").json();
    assert_eq!(r["verdict"]["tag"], "stable");
    assert_eq!(r["verdict"]["certified"], true);
    assert!(r["verdict"]["witness"].is_null());

    let r = on_example(&["kron", "check"], "kron-rational.json").json();
    assert_eq!(r["verdict"]["tag"], "unstable");
    assert_eq!(r["verdict"]["certified"], true);
    assert_eq!(r["verdict"]["witness"]["basis"], serde_json::json!([[1, -1]]));
    assert_eq!(r["verdict"]["primes"], serde_json::json!([3, 5]));
    assert_eq!(r["module"]["matrices"][2][0][0], "-1/2");
}

#[test]
fn kron_census_and_budget() {
    let run = on_example(&["kron", "census", "--jobs", "3"], "kron-322-f2.json");
    assert_eq!(run.code, 0);
    let c = &run.json()["counts"];
    assert_eq!(c["total"].as_u64(), Some(4096));
    assert_eq!(
        c["stable"].as_u64().unwrap() + c["strictly_semistable"].as_u64().unwrap() + c["unstable"].as_u64().unwrap(),
        4096
    );
    let run = on_example(&["kron", "census", "--budget", "100"], "kron-322-f2.json");
    assert_eq!(run.code, 4);
    let run = on_example(&["kron", "census"], "kron-rational.json");
    assert_eq!(run.code, 2);
}

#[test]
fn kron_random_round_trips_through_check() {
    let run = on_example(&["kron", "random", "--seed", "11"], "kron-322-f2.json");
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, on_example(&["kron", "random", "--seed", "11"], "kron-322-f2.json").stdout);
    let doc = ProblemDocument::parse(&run.stdout).unwrap();
    let spec = doc.kronecker.as_ref().unwrap();
    assert_eq!(spec.seed, Some(11));
    // the drawn matrices and the seed describe the same module
    assert_eq!(spec.module(None).unwrap(), spec.module(Some(11)).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(&dir, &run.stdout);
    assert_eq!(helixlab(&["kron", "check", "--input", path.to_str().unwrap()]).code, 0);
    assert_ne!(run.stdout, on_example(&["kron", "random", "--seed", "12"], "kron-322-f2.json").stdout);
    assert_eq!(on_example(&["kron", "random"], "kron-322-f2.json").code, 2);
}

#[test]
fn output_is_byte_identical_across_runs_and_sinks() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, name) in
        [("theorem", "p2-worked.json"), ("system", "blowup1-minus.json"), ("chi", "blowup1-torsion.json")]
    {
        let out = dir.path().join(format!("{cmd}.json"));
        let first = on_example(&[cmd], name);
        let input = example(name);
        let code = helixlab::main_with_args([
            "helixlab",
            cmd,
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, first.code);
        assert_eq!(std::fs::read_to_string(&out).unwrap(), first.stdout);
        assert_eq!(on_example(&[cmd], name).stdout, first.stdout);
        assert!(first.stdout.ends_with("}\n"));
    }
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..6).prop_map(|(a, b)| Scalar(Rational::new(a.into(), b.into())))
}

fn document() -> impl Strategy<Value = ProblemDocument> {
    let surface = prop_oneof![
        Just(SurfaceSpec { kind: "projective-plane".into(), k: None }),
        Just(SurfaceSpec { kind: "quadric".into(), k: None }),
        (1u32..=8).prop_map(|k| SurfaceSpec { kind: "blowup".into(), k: Some(k) }),
    ];
    let big = prop_oneof![any::<i64>().prop_map(|x| Int(x.into())), any::<i128>().prop_map(|x| Int(x.into()))];
    let vector =
        (big.clone(), proptest::collection::vec(big.clone(), 1..4), big).prop_map(|(r, c1, s)| VectorSpec { r, c1, s });
    let vectors = proptest::collection::btree_map("[A-Za-z(),-]{1,6}", vector, 0..4);
    let kron =
        (3usize..5, 1usize..3, 1usize..3, proptest::option::of(any::<u64>())).prop_flat_map(|(h, m, n, seed)| {
            proptest::collection::vec(proptest::collection::vec(proptest::collection::vec(scalar(), m), n), h).prop_map(
                move |mats| KroneckerSpec {
                    h,
                    m,
                    n,
                    field: "Q".into(),
                    matrices: Some(mats),
                    seed,
                    primes: Some(vec![7, 11]),
                },
            )
        });
    (
        proptest::option::of(surface),
        vectors,
        proptest::option::of(proptest::collection::vec("[a-z]{1,3}", 2)),
        proptest::option::of(kron),
    )
        .prop_map(|(surface, vectors, pair, kronecker): (_, BTreeMap<_, _>, _, _)| {
            let names: Vec<String> = vectors.keys().cloned().collect();
            ProblemDocument {
                surface,
                candidate: names.first().cloned(),
                collection: (!names.is_empty()).then_some(names),
                vectors,
                pair,
                kronecker,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn documents_round_trip(doc in document()) {
        let text = doc.to_canonical_string();
        let back = ProblemDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_canonical_string(), text);
    }
}

#[test]
fn schema_keys_match_the_document_types() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/problem-document.schema.json"))
            .unwrap(),
    )
    .unwrap();
    let keys = |v: &Value| v.as_object().unwrap().keys().cloned().collect::<Vec<_>>();
    let full = ProblemDocument {
        surface: Some(SurfaceSpec { kind: "blowup".into(), k: Some(1) }),
        vectors: [("v".to_string(), VectorSpec { r: Int::from(1), c1: vec![Int::from(0)], s: Int::from(0) })].into(),
        pair: Some(vec!["v".into(), "v".into()]),
        collection: Some(vec!["v".into()]),
        candidate: Some("v".into()),
        kronecker: Some(KroneckerSpec {
            h: 3,
            m: 1,
            n: 1,
            field: "F2".into(),
            matrices: Some(vec![vec![vec![Scalar(Rational::from_integer(1.into()))]]; 3]),
            seed: Some(1),
            primes: Some(vec![2, 3]),
        }),
    };
    let doc = serde_json::to_value(&full).unwrap();
    assert_eq!(keys(&schema["properties"]), keys(&doc));
    assert_eq!(keys(&schema["properties"]["surface"]["properties"]), keys(&doc["surface"]));
    assert_eq!(keys(&schema["$defs"]["vector"]["properties"]), keys(&doc["vectors"]["v"]));
    assert_eq!(keys(&schema["$defs"]["kronecker"]["properties"]), keys(&doc["kronecker"]));
}
