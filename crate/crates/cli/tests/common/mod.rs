#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::Value;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("matgame").chain(args.iter().copied());
    let code = matgame_cli::run_cli(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Structural equality with numbers compared to an absolute tolerance.
pub fn json_close(a: &Value, b: &Value, tol: f64, path: &str) -> Result<(), String> {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= tol {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Value::Array(xs), Value::Array(ys)) => {
            if xs.len() != ys.len() {
                return Err(format!("{path}: length {} vs {}", xs.len(), ys.len()));
            }
            for (k, (x, y)) in xs.iter().zip(ys).enumerate() {
                json_close(x, y, tol, &format!("{path}[{k}]"))?;
            }
            Ok(())
        }
        (Value::Object(xs), Value::Object(ys)) => {
            let kx: Vec<_> = xs.keys().collect();
            let ky: Vec<_> = ys.keys().collect();
            if kx != ky {
                return Err(format!("{path}: keys {kx:?} vs {ky:?}"));
            }
            for (k, x) in xs {
                json_close(x, &ys[k], tol, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} vs {b}")),
    }
}

/// The golden cases: (arguments, golden file, expected exit code).
pub fn golden_cases() -> Vec<(Vec<String>, &'static str, i32)> {
    let rps = data("rps.csv").display().to_string();
    let a12 = data("a12.csv").display().to_string();
    let mut cases = Vec::new();
    for (m, path) in [("rps", &rps), ("a12", &a12)] {
        let p = path.clone();
        cases.push((vec!["solve".into(), "--input".into(), p.clone()], leak(format!("solve_{m}.json")), 0));
        cases.push((vec!["oracle".into(), "--input".into(), p.clone()], leak(format!("oracle_{m}.json")), 0));
        cases.push((
            vec!["analyze".into(), "--input".into(), p, "--lambda".into(), "0".into(), "--lambda".into(), "1".into()],
            leak(format!("analyze_{m}.json")),
            0,
        ));
    }
    cases.push((
        vec!["verify".into(), "--claim".into(), "SkewZeroCor3".into(), "--input".into(), rps],
        "verify_rps.json",
        0,
    ));
    cases.push((
        vec!["verify".into(), "--claim".into(), "PositiveDominatedThm4".into(), "--input".into(), a12],
        "verify_a12.json",
        1,
    ));
    cases
}

fn leak(s: String) -> &'static str {
    Box::leak(s.into_boxed_str())
}

/// Runs one golden case, returning a description of the first mismatch.
pub fn check_golden(args: &[String], file: &str, code: i32) -> Result<(), String> {
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let r = run(&argv);
    if r.code != code {
        return Err(format!("{file}: exit {} (expected {code}), stderr {}", r.code, r.stderr));
    }
    let got: Value = serde_json::from_str(&r.stdout).map_err(|e| format!("{file}: {e}"))?;
    let text = std::fs::read_to_string(golden(file)).map_err(|e| format!("{file}: {e}"))?;
    let want: Value = serde_json::from_str(&text).unwrap();
    json_close(&got, &want, 1e-9, file)
}
