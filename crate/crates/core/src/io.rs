//! File formats: hex matrix files, code-spec JSON, and decode reports.
//!
//! Matrix files are plain text, one line per code position (row), symbols
//! written as lowercase hex and separated by whitespace, one column per
//! interleaved word. Parse errors carry 1-based line numbers.

use crate::collab::{Counters, DecodeStatus};
use crate::field::{FieldSpec, FieldSpecJson, TowerSpec};
use crate::gabidulin::{GabError, GabidulinCode};
use crate::linalg::Matrix;
use crate::rs::{CodeError, Flavor, GRSCode, IRSCode};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("matrix file is empty")]
    Empty,
    #[error("invalid code spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Gab(#[from] GabError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Writes a matrix as lowercase hex, one row per line.
pub fn write_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| format!("{:x}", x.value())).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a hex matrix file over the given field; every line must carry the
/// same number of columns.
pub fn read_matrix(field: &FieldSpec, text: &str) -> Result<Matrix, IoError> {
    let mut rows: Vec<Vec<crate::field::FieldElement>> = Vec::new();
    let mut cols = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let v = u32::from_str_radix(tok, 16).map_err(|_| IoError::Format {
                line: line_no,
                msg: format!("invalid hex symbol '{tok}'"),
            })?;
            let el = field.element(v).map_err(|_| IoError::Format {
                line: line_no,
                msg: format!("symbol {v} out of range for a field of size {}", field.size()),
            })?;
            row.push(el);
        }
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(IoError::Format {
                    line: line_no,
                    msg: format!("expected {c} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(Matrix::from_rows(rows))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RsSpecJson {
    pub field: FieldSpecJson,
    pub n: usize,
    pub k: usize,
    pub flavor: String,
    #[serde(default)]
    pub shorten: usize,
    pub l: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GabSpecJson {
    pub q: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub g: Vec<u32>,
    #[serde(default = "default_l")]
    pub l: usize,
}

fn default_l() -> usize {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeSpecJson {
    Gabidulin(GabSpecJson),
    Rs(RsSpecJson),
}

pub enum LoadedCode {
    Irs(IRSCode),
    Gabidulin(GabidulinCode, usize),
}

pub fn parse_code_spec(text: &str) -> Result<LoadedCode, IoError> {
    let spec: CodeSpecJson =
        serde_json::from_str(text).map_err(|e| IoError::Spec(e.to_string()))?;
    match spec {
        CodeSpecJson::Rs(rs) => {
            let field = Arc::new(FieldSpec::from_json(&rs.field)?);
            let code = match rs.flavor.as_str() {
                "rs_star" | "rs" => GRSCode::make_rs_star(Arc::clone(&field), rs.k + rs.shorten)?
                    .shorten(rs.shorten)?,
                "shortened_rs_star" => {
                    GRSCode::make_rs_star(Arc::clone(&field), rs.k + rs.shorten)?
                        .shorten(rs.shorten)?
                }
                other => return Err(IoError::Spec(format!("unknown flavor '{other}'"))),
            };
            if code.n() != rs.n || code.k() != rs.k {
                return Err(IoError::Spec(format!(
                    "declared ({}, {}) but construction gives ({}, {})",
                    rs.n,
                    rs.k,
                    code.n(),
                    code.k()
                )));
            }
            Ok(LoadedCode::Irs(IRSCode::new(code, rs.l)?))
        }
        CodeSpecJson::Gabidulin(gab) => {
            let tower = Arc::new(TowerSpec::new(gab.q, gab.m)?);
            let ext = tower.ext();
            let g = gab
                .g
                .iter()
                .map(|&v| {
                    ext.element(v).map_err(|_| {
                        IoError::Spec(format!("generator entry {v} outside GF({})", ext.size()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let code = GabidulinCode::new(tower, gab.n, gab.k, g)?;
            Ok(LoadedCode::Gabidulin(code, gab.l))
        }
    }
}

pub fn rs_spec_json(code: &IRSCode) -> RsSpecJson {
    let inner = code.inner();
    RsSpecJson {
        field: inner.field().to_json(),
        n: inner.n(),
        k: inner.k(),
        flavor: inner.flavor().as_str().to_string(),
        shorten: match inner.flavor() {
            Flavor::ShortenedRsStar => inner.field().size() as usize - inner.n(),
            _ => 0,
        },
        l: code.l(),
    }
}

/// JSON report emitted by the decode subcommand.
#[derive(Debug, Serialize, Deserialize)]
pub struct DecodeReport {
    pub status: String,
    pub f_star: usize,
    pub positions: Vec<usize>,
    pub counters: ReportCounters,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportCounters {
    pub mul: u64,
    pub add: u64,
    pub syndrome_rows: u64,
}

pub fn decode_report(
    status: DecodeStatus,
    f_star: usize,
    positions: Vec<usize>,
    counters: Counters,
) -> DecodeReport {
    DecodeReport {
        status: match status {
            DecodeStatus::Success => "success".to_string(),
            DecodeStatus::DetectedFailure(_) => "detected_failure".to_string(),
        },
        f_star,
        positions,
        counters: ReportCounters {
            mul: counters.mul(),
            add: counters.add(),
            syndrome_rows: counters.syndrome_rows,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let f = FieldSpec::gf(256).unwrap();
        let m = Matrix::from_fn(4, 3, |i, j| f.element((i * 16 + j * 11) as u32).unwrap());
        let text = write_matrix(&m);
        let back = read_matrix(&f, &text).unwrap();
        assert_eq!(m.iter().collect::<Vec<_>>(), back.iter().collect::<Vec<_>>());
    }

    #[test]
    fn matrix_errors_carry_line_numbers() {
        let f = FieldSpec::gf(16).unwrap();
        let err = read_matrix(&f, "1 2\nzz 3\n").unwrap_err();
        assert!(matches!(err, IoError::Format { line: 2, .. }), "{err}");
        let err = read_matrix(&f, "1 2\n3\n").unwrap_err();
        assert!(matches!(err, IoError::Format { line: 2, .. }));
        // out-of-range symbol for the field
        let err = read_matrix(&f, "1 ff\n").unwrap_err();
        assert!(matches!(err, IoError::Format { line: 1, .. }));
        assert!(matches!(read_matrix(&f, "\n\n").unwrap_err(), IoError::Empty));
    }

    #[test]
    fn rs_spec_round_trip() {
        let f = Arc::new(FieldSpec::gf(256).unwrap());
        let code = GRSCode::make_rs_star(f, 240).unwrap().shorten(52).unwrap();
        let irs = IRSCode::new(code, 16).unwrap();
        let json = serde_json::to_string(&CodeSpecJson::Rs(rs_spec_json(&irs))).unwrap();
        match parse_code_spec(&json).unwrap() {
            LoadedCode::Irs(c) => {
                assert_eq!((c.inner().n(), c.inner().k(), c.l()), (204, 188, 16));
                assert_eq!(c.inner().d(), 17);
            }
            _ => panic!("expected RS code"),
        }
    }

    #[test]
    fn gab_spec_parses() {
        let json = r#"{"q": 2, "m": 4, "n": 4, "k": 1, "g": [1, 2, 4, 8], "l": 3}"#;
        match parse_code_spec(json).unwrap() {
            LoadedCode::Gabidulin(c, l) => {
                assert_eq!((c.n(), c.k(), c.d(), l), (4, 1, 4, 3));
            }
            _ => panic!("expected Gabidulin code"),
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(parse_code_spec("{").is_err());
        assert!(parse_code_spec(r#"{"q": 2, "m": 4, "n": 4, "k": 1, "g": [1, 2, 2, 8]}"#).is_err());
        let json = r#"{"field": {"p": 5, "e": 1, "modulus": [0, 1], "alpha": 2},
                       "n": 5, "k": 3, "flavor": "rs_star", "shorten": 0, "l": 2}"#;
        assert!(parse_code_spec(json).is_ok());
        let json = r#"{"field": {"p": 5, "e": 1, "modulus": [0, 1], "alpha": 2},
                       "n": 4, "k": 3, "flavor": "rs_star", "shorten": 0, "l": 2}"#;
        assert!(parse_code_spec(json).is_err());
    }
}
