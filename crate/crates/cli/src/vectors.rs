//! Test-vector files: one `<hexA> <hexB> <hexExpected>` triple per line.
//! Blank lines and lines starting with `#` are skipped.

use std::path::Path;

use sike_ffm::mpcore::MpUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VectorError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    pub line: usize,
    pub a: MpUint,
    pub b: MpUint,
    pub expected: MpUint,
}

pub fn parse(text: &str) -> Result<Vec<Vector>, VectorError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        let [a, b, e] = fields[..] else {
            return Err(VectorError::Parse {
                line,
                msg: format!("expected 3 hex fields, found {}", fields.len()),
            });
        };
        let hex = |v: &str| {
            MpUint::from_hex(v).map_err(|err| VectorError::Parse {
                line,
                msg: err.to_string(),
            })
        };
        out.push(Vector {
            line,
            a: hex(a)?,
            b: hex(b)?,
            expected: hex(e)?,
        });
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<Vector>, VectorError> {
    let text = std::fs::read_to_string(path).map_err(|source| VectorError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}
