mod common;

use common::{check_golden, data, golden_cases, run};
use matgame::{parse_matrix, render_matrix, GameMatrix, MatrixFormat};
use proptest::prelude::*;
use serde_json::Value;

#[test]
fn golden_files() {
    for (args, file, code) in golden_cases() {
        check_golden(&args, file, code).unwrap();
    }
}

#[test]
fn json_input_matches_csv_input() {
    let a = run(&["solve", "--input", data("a12.json").to_str().unwrap()]);
    let b = run(&["solve", "--input", data("a12.csv").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn numbers_have_seventeen_digits() {
    let r = run(&["solve", "--input", data("rps.csv").to_str().unwrap()]);
    assert!(r.stdout.contains("\"tolerance\":1.0000000000000000e-8"), "{}", r.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let r = run(&["oracle", "--input", data("rps.csv").to_str().unwrap(), "--output", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["row_support"], serde_json::json!([0, 1, 2]));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["solve", "--bogus"],
        vec!["solve"],
        vec!["verify", "--claim", "SkewZeroCor3"],
        vec!["verify", "--ensemble", "Skew", "--size", "3"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.stderr.contains("Usage"), "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "1,2\n3\n").unwrap();
    let big = dir.path().join("big.csv");
    std::fs::write(&big, "1,2,3,4,5,6\n".repeat(6)).unwrap();
    let rect = dir.path().join("rect.csv");
    std::fs::write(&rect, "1,2,3\n4,5,6\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve", "--input", "/nonexistent/matrix.csv"],
        vec!["solve", "--input", ragged.to_str().unwrap()],
        vec!["solve", "--input", ragged.to_str().unwrap(), "--format", "xml"],
        vec!["oracle", "--input", big.to_str().unwrap()],
        vec!["verify", "--claim", "NoSuchClaim", "--input", rect.to_str().unwrap()],
        vec!["verify", "--ensemble", "Skew", "--size", "3", "--cols", "4", "--trials", "1", "--seed", "1"],
        vec!["verify", "--ensemble", "Nope", "--size", "3", "--trials", "1", "--seed", "1"],
    ];
    for args in cases {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stderr.starts_with("error:"), "{args:?}: {}", r.stderr);
    }
}

#[test]
fn skew_ensemble_verify_holds() {
    let r = run(&["verify", "--claim", "SkewZeroCor3", "--ensemble", "Skew", "--size", "5", "--trials", "100", "--seed", "7"]);
    assert_eq!(r.code, 0);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["summary"]["holds"], 100);
    assert_eq!(v["reports"].as_array().unwrap().len(), 100);
}

#[test]
fn verify_all_claims_on_rps_reports_gordan_violation() {
    let r = run(&["verify", "--input", data("rps.csv").to_str().unwrap(), "--lambda", "0"]);
    assert_eq!(r.code, 1);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    let violated: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"] == "Violated")
        .map(|r| r["claim_id"].as_str().unwrap())
        .collect();
    assert_eq!(violated, vec!["GordanTheorem3"]);
}

const CLAIMS: [&str; 8] = [
    "DiagonalTheorem1",
    "SkewZeroCor3",
    "SharedOptimaCor4",
    "NegTransposeThm2",
    "EigenspaceLemma5",
    "GordanTheorem3",
    "PositiveDominatedThm4",
    "ShiftedEigenThm4General",
];
const FAMILIES: [&str; 4] = ["Diagonal", "Skew", "Positive", "General"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exit_code_tracks_verdicts(claim in 0usize..8, family in 0usize..4, size in 1usize..5, seed in 0u64..1000) {
        let size = size.to_string();
        let seed = seed.to_string();
        let r = run(&[
            "verify", "--claim", CLAIMS[claim], "--ensemble", FAMILIES[family],
            "--size", &size, "--trials", "3", "--seed", &seed, "--lambda", "0",
        ]);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        let reports = v["reports"].as_array().unwrap();
        let violated = reports.iter().filter(|r| r["verdict"] == "Violated").count();
        prop_assert_eq!(v["summary"]["violated"].as_u64().unwrap() as usize, violated);
        prop_assert_eq!(r.code, if violated > 0 { 1 } else { 0 });
    }
}

fn matrix_strategy() -> impl Strategy<Value = GameMatrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(m, n)| {
        prop::collection::vec(
            prop_oneof![-1e6f64..1e6, -1.0f64..1.0, (-1000i32..1000).prop_map(f64::from)],
            m * n,
        )
        .prop_map(move |e| GameMatrix::new(m, n, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parse_render_round_trip(a in matrix_strategy()) {
        for format in [MatrixFormat::Csv, MatrixFormat::Json] {
            let back = parse_matrix(&render_matrix(&a, format), format).unwrap();
            prop_assert_eq!(&back, &a);
        }
    }
}
