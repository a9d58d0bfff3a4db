//! Text forms of words and LLR vectors.
//!
//! Binary words are strings of `0`/`1` with component 0 first. LLR vectors
//! are CSV rows of decimal floats; blank lines and lines starting with `#`
//! are skipped.

use crate::error::{Error, Result};

pub fn word_to_string(word: &[u8]) -> String {
    word.iter()
        .map(|&b| if b & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn word_from_str(s: &str) -> Result<Vec<u8>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse {
                line: 1,
                msg: format!("{other:?} is not a binary digit"),
            }),
        })
        .collect()
}

pub fn llr_to_csv_row(llr: &[f64]) -> String {
    llr.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// Every LLR row in `text`.
pub fn parse_llr_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| !v.is_nan())
                    .ok_or_else(|| Error::Parse {
                        line: i + 1,
                        msg: format!("{field:?} is not a number"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}
