use std::io::Write;
use std::process::{Command, Output};

use bsurf_cli::report::Report;
use bsurf_core::gl2::commutant;
use bsurf_core::modring::{Modulus, ResidueMatrix};
use proptest::prelude::*;
use serde_json::Value;

fn bsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsurf")).args(args).env_remove("BSURF_CAP").output().unwrap()
}

fn scenario(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

/// Runs with `--json`, returning exit code and parsed output.
fn json(args: &[&str], body: Option<&str>) -> (i32, Value) {
    let file = body.map(scenario);
    let mut all: Vec<&str> = vec!["--json"];
    all.extend_from_slice(args);
    if let Some(f) = &file {
        all.push(f.path().to_str().unwrap());
    }
    let out = bsurf(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let code = out.status.code().unwrap();
    if text.is_empty() {
        return (code, Value::Null);
    }
    let parsed = Report::from_json(&text).expect("output round-trips through the schema");
    assert_eq!(Report::from_json(&parsed.to_json()).unwrap(), parsed);
    (code, serde_json::from_str(&text).unwrap())
}

fn table(args: &[&str], body: &str) -> (i32, String) {
    let f = scenario(body);
    let mut all = args.to_vec();
    all.push(f.path().to_str().unwrap());
    let out = bsurf(&all);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn commutant_of_identity_is_everything() {
    let (code, v) = json(&["commutant"], Some(r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 0], [0, 1]]}"#));
    assert_eq!(code, 0);
    assert_eq!(v["order"], 6561);
    assert_eq!(v["mu"], Value::Null);
}

#[test]
fn commutant_is_deterministic_and_matches_library() {
    let body = r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]]}"#;
    let (c1, t1) = table(&["commutant"], body);
    let (c2, t2) = table(&["commutant"], body);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(t1, t2);
    let m = Modulus::new(9).unwrap();
    let lib = commutant(&ResidueMatrix::new(m, [1, 3, 0, 1]), 3, 2).unwrap();
    let (_, v) = json(&["commutant"], Some(body));
    let shape: Vec<u64> = serde_json::from_value(v["shape"].clone()).unwrap();
    assert_eq!(shape, lib.shape.factors());
    assert_eq!(v["mu"], 1);
}

#[test]
fn schema_errors_exit_2() {
    for body in [
        r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0]]}"#,
        r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 0.5]]}"#,
        r#"{"version": 7, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]]}"#,
        r#"{"version": 1, "command": "lattice"}"#,
        "not json",
    ] {
        assert_eq!(table(&["commutant"], body).0, 2, "{body}");
    }
    let out = bsurf(&["commutant", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precondition_errors_exit_3() {
    // Not a prime power.
    let (code, _) = table(&["commutant"], r#"{"version": 1, "command": "commutant", "modulus": 6, "matrix": [[1, 0], [0, 2]]}"#);
    assert_eq!(code, 3);
    // Singular generator.
    let (code, _) = table(
        &["end-invariants"],
        r#"{"version": 1, "command": "end-invariants", "modulus": 6, "generators": [[[2, 0], [0, 1]]]}"#,
    );
    assert_eq!(code, 3);
}

fn end(body: &str) -> (i32, Value) {
    json(&["end-invariants"], Some(body))
}

#[test]
fn end_invariants_examples() {
    let (code, v) = end(r#"{"version": 1, "command": "end-invariants", "modulus": 6, "generators": []}"#);
    assert_eq!(code, 0);
    assert_eq!((v["n"].as_u64(), v["n1"].as_u64(), v["n2"].as_u64()), (Some(6), Some(6), Some(6)));
    assert_eq!(v["agree"], true);

    let gl2 = r#"{"version": 1, "command": "end-invariants", "modulus": 5,
                  "generators": [[[2, 0], [0, 1]], [[1, 1], [0, 1]], [[0, -1], [1, 0]]]}"#;
    let (code, v) = end(gl2);
    assert_eq!(code, 0);
    assert_eq!((v["n1"].as_u64(), v["n2"].as_u64()), (Some(1), Some(1)));
    // Brute force: only the 5 scalars commute with GL2(F_5).
    let m = Modulus::new(5).unwrap();
    let gens = [[2, 0, 0, 1], [1, 1, 0, 1], [0, -1, 1, 0]].map(|e| ResidueMatrix::new(m, e));
    let brute = (0..625u64)
        .map(|e| ResidueMatrix::from_residues(m, [e % 5, e / 5 % 5, e / 25 % 5, e / 125]))
        .filter(|f| gens.iter().all(|g| g.commutes_with(f)))
        .count();
    assert_eq!(brute, 5);

    // Borel-abelian family at level 25: [[x, y], [0, x + 5y]].
    let (code, v) = end(
        r#"{"version": 1, "command": "end-invariants", "modulus": 25, "generators": [[[1, 1], [0, 6]], [[2, 0], [0, 2]]]}"#,
    );
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    assert_eq!(v["n1"], v["scan_n1"]);
}

/// The divisor scan disagrees with the commutant on this abelian group, so
/// the command reports DISAGREE and exits 4.
#[test]
fn end_invariants_disagreement_exits_4() {
    let body = r#"{"version": 1, "command": "end-invariants", "modulus": 9, "generators": [[[5, 0], [3, 5]], [[1, 6], [0, 4]]]}"#;
    let (code, text) = table(&["end-invariants"], body);
    assert_eq!(code, 4);
    assert!(text.contains("DISAGREE"));
}

#[test]
fn brauer_bound_examples() {
    let (code, v) = json(
        &["brauer-bound"],
        Some(r#"{"version": 1, "command": "brauer-bound", "modulus": 1, "d": 1, "period": 1, "surface": "abelian-torsor"}"#),
    );
    assert_eq!(code, 0);
    assert_eq!(v["bound"], "1");
    assert_eq!(v["status"], "exact");

    let body = r#"{"version": 1, "command": "brauer-bound", "modulus": 4, "d": 2, "period": 2, "surface": "abelian-torsor"}"#;
    let (code, text) = table(&["brauer-bound"], body);
    assert_eq!(code, 0);
    assert!(text.contains("upper bound only"));
    assert!(text.contains("factor gcd(d,n)"));
    let (_, v) = json(&["brauer-bound"], Some(body));
    let product: u64 = v["factors"].as_array().unwrap().iter().map(|f| f["value"].as_str().unwrap().parse::<u64>().unwrap()).product();
    assert_eq!(v["bound"].as_str().unwrap().parse::<u64>().unwrap(), product);
    assert!(v["hom_quotient_order"].as_u64().unwrap() <= product);
}

#[test]
fn brauer_over_q_preset() {
    let (code, v) = json(&["brauer-bound", "--over-q", "163"], None);
    assert_eq!(code, 0);
    let cube = (8u64 * 163).pow(3);
    assert_eq!(v["bound"].as_str().unwrap(), cube.to_string());
    let (_, v) = json(&["brauer-bound", "--over-q", "1"], None);
    assert_eq!(v["bound"], "512");
}

#[test]
fn twisted_random_scenario_depends_only_on_seed() {
    let body = r#"{"version": 1, "command": "brauer-bound", "modulus": 6, "d": 2, "period": 1, "surface": "abelian-torsor",
                   "random": {"twisted": true}}"#;
    let (c1, a) = json(&["brauer-bound", "--seed", "9"], Some(body));
    let (c2, b) = json(&["brauer-bound", "--seed", "9"], Some(body));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(a["twisted"], true);
    assert!(a["kernel_n1"].is_u64());
}

#[test]
fn hom_invariants_with_explicit_pairs() {
    // Identity on both sides, Φ = diag(2, 1) mod 4.
    let body = r#"{"version": 1, "command": "hom-invariants", "modulus": 4, "d": 2,
                   "pairs": [{"source": [[1, 0], [0, 1]], "target": [[1, 0], [0, 1]]}]}"#;
    let (code, v) = json(&["hom-invariants"], Some(body));
    assert_eq!(code, 0);
    assert_eq!(v["invariant_homs"], serde_json::json!([4, 4, 4, 4]));
    assert_eq!(v["transcendental_order"], 64);
    assert_eq!(v["divisibility"]["kind"], "rational");
    // Not equivariant: the target does not preserve the kernel of Φ.
    let body = r#"{"version": 1, "command": "hom-invariants", "modulus": 4, "d": 2,
                   "pairs": [{"source": [[0, 1], [1, 0]], "target": [[0, 1], [1, 0]]}]}"#;
    assert_eq!(table(&["hom-invariants"], body).0, 3);
}

#[test]
fn enumerate_abelian_examples() {
    let (code, v) = json(&["enumerate-abelian", "--ell", "3", "--s", "1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["max_order"], 8);
    let (code, v) = json(&["enumerate-abelian", "--ell", "5", "--s", "1"], None);
    assert_eq!(code, 0);
    assert_eq!(v["max_order"], 24);
    let (code, _) = json(&["enumerate-abelian", "--ell", "7", "--s", "2"], None);
    assert_eq!(code, 3);
}

#[test]
fn classify_and_cap() {
    let body = r#"{"version": 1, "command": "classify-abelian", "modulus": 5, "generators": [[[2, 0], [0, 3]]]}"#;
    let (code, v) = json(&["classify-abelian"], Some(body));
    assert_eq!(code, 0);
    assert_eq!(v["family"], "split-cartan");
    let f = scenario(body);
    let out = Command::new(env!("CARGO_BIN_EXE_bsurf"))
        .args(["classify-abelian", f.path().to_str().unwrap()])
        .env("BSURF_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lattice_examples() {
    let (_, v) = json(&["lattice", "--family-d", "3"], None);
    assert_eq!(v["determinant"], 6);
    let (_, v) = json(&["lattice", "--kummer"], None);
    assert_eq!(v["determinant"], 64);
    assert_eq!(v["even"], true);
    assert_eq!((v["positive"].as_u64(), v["negative"].as_u64()), (Some(0), Some(16)));
    let (_, v) = json(&["lattice", "--lambda-prod"], None);
    assert_eq!(v["rank"], 18);
    assert_eq!(bsurf(&["lattice"]).status.code(), Some(2));
}

#[test]
fn h1_examples() {
    let (code, v) = json(&["h1-bound"], Some(r#"{"version": 1, "command": "h1-bound", "rank": 2, "generators": []}"#));
    assert_eq!(code, 0);
    assert_eq!(v["h1_order"], 1);
    let (_, v) = json(&["h1-bound"], Some(r#"{"version": 1, "command": "h1-bound", "rank": 1, "generators": [[[-1]]]}"#));
    assert_eq!(v["h1_order"], 2);
    let (code, _) = json(&["h1-bound"], Some(r#"{"version": 1, "command": "h1-bound", "rank": 2, "generators": [[[1, 0]]]}"#));
    assert_eq!(code, 2);
}

#[test]
fn finite_gl2r_examples() {
    let body = r#"{"version": 1, "command": "finite-gl2r", "d": 2, "generators": [[[0, -1], [1, 0]]]}"#;
    let (code, v) = json(&["finite-gl2r"], Some(body));
    assert_eq!(code, 0);
    assert_eq!(v["group"], "C4");
}

fn signed_permutation(r: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (Just((0..r).collect::<Vec<usize>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), r)).prop_map(
        move |(perm, signs)| {
            (0..r)
                .map(|i| (0..r).map(|j| if perm[i] == j { if signs[i] { -1 } else { 1 } } else { 0 }).collect())
                .collect()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn h1_divides_group_order_power(gens in (1usize..=3).prop_flat_map(|r| proptest::collection::vec(signed_permutation(r), 1..=2))) {
        let body = serde_json::json!({"version": 1, "command": "h1-bound", "rank": gens[0].len(), "generators": gens});
        let (code, v) = json(&["h1-bound"], Some(&body.to_string()));
        prop_assert_eq!(code, 0);
        let h1 = v["h1_order"].as_u64().unwrap();
        let bound = v["divides"].as_u64().unwrap();
        prop_assert_eq!(bound % h1, 0);
    }
}
