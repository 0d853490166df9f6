//! Matrix text formats and the fixed-precision JSON writer used for every report.

use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(MatrixFormat::Csv),
            "json" => Ok(MatrixFormat::Json),
            other => Err(Error::Parse(format!("unknown matrix format {other:?}"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<f64>>,
}

pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<GameMatrix> {
    match format {
        MatrixFormat::Csv => parse_csv(text),
        MatrixFormat::Json => parse_json(text),
    }
}

fn parse_csv(text: &str) -> Result<GameMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let row = tokens
            .iter()
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("line {}: cannot parse {t:?} as a number", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse(format!(
                    "line {}: ragged row with {} entries, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    GameMatrix::from_rows(&rows)
}

fn parse_json(text: &str) -> Result<GameMatrix> {
    if text.trim().is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let doc: MatrixDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid matrix JSON: {e}")))?;
    if doc.entries.len() != doc.rows {
        return Err(Error::Parse(format!(
            "declared {} rows but found {}",
            doc.rows,
            doc.entries.len()
        )));
    }
    if let Some((i, r)) = doc.entries.iter().enumerate().find(|(_, r)| r.len() != doc.cols) {
        return Err(Error::Parse(format!(
            "declared {} columns but row {i} has {}",
            doc.cols,
            r.len()
        )));
    }
    GameMatrix::from_rows(&doc.entries)
}

pub fn render_matrix(a: &GameMatrix, format: MatrixFormat) -> String {
    match format {
        MatrixFormat::Csv => {
            let mut out = String::new();
            for i in 0..a.rows() {
                let line: Vec<String> = a.row(i).iter().map(|v| format!("{v:?}")).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        MatrixFormat::Json => {
            let doc = MatrixDoc {
                rows: a.rows(),
                cols: a.cols(),
                entries: a.to_rows(),
            };
            let mut s = to_json(&doc);
            s.push('\n');
            s
        }
    }
}

/// Compact JSON whose floats are always written with 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` with [`SeventeenDigits`]; non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_variants() {
        let a = parse_matrix("0,-1,1\n1,0,-1\n-1,1,0", MatrixFormat::Csv).unwrap();
        assert_eq!(a.to_rows()[0], vec![0.0, -1.0, 1.0]);
        let b = parse_matrix("1 2\n3   4\n\n", MatrixFormat::Csv).unwrap();
        assert_eq!(b.to_rows(), vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let c = parse_matrix(" 1.5e-3 ,\t2\n3,4", MatrixFormat::Csv).unwrap();
        assert_eq!(c.get(0, 0), 1.5e-3);
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(parse_matrix("1,2\n3", MatrixFormat::Csv), Err(Error::Parse(_))));
        assert!(parse_matrix("1,x", MatrixFormat::Csv).is_err());
        assert!(parse_matrix("1,,2", MatrixFormat::Csv).is_err());
        assert!(parse_matrix("  \n", MatrixFormat::Csv).is_err());
        assert!(parse_matrix("1,inf", MatrixFormat::Csv).is_err());
    }

    #[test]
    fn json_errors() {
        let ok = r#"{"rows":2,"cols":1,"entries":[[1],[2]]}"#;
        assert_eq!(parse_matrix(ok, MatrixFormat::Json).unwrap().rows(), 2);
        let bad_rows = r#"{"rows":3,"cols":1,"entries":[[1],[2]]}"#;
        assert!(parse_matrix(bad_rows, MatrixFormat::Json).is_err());
        let bad_cols = r#"{"rows":2,"cols":2,"entries":[[1,2],[2]]}"#;
        assert!(parse_matrix(bad_cols, MatrixFormat::Json).is_err());
        assert!(parse_matrix("", MatrixFormat::Json).is_err());
        assert!(parse_matrix("[1,2]", MatrixFormat::Json).is_err());
    }

    #[test]
    fn seventeen_digit_numbers() {
        assert_eq!(to_json(&[1.0 / 3.0]), "[3.3333333333333331e-1]");
        assert_eq!(to_json(&0.0), "0.0000000000000000e0");
        assert_eq!(to_json(&f64::NAN), "null");
        let a = GameMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert_eq!(
            render_matrix(&a, MatrixFormat::Json),
            "{\"rows\":1,\"cols\":2,\"entries\":[[1.0000000000000000e0,2.0000000000000000e0]]}\n"
        );
    }
}
