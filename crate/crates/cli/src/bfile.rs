//! b-file interchange: one `index value` pair per line, indices contiguous
//! from 1. Lines starting with `#` and blank lines are skipped on input and
//! never written.

use std::io::{self, BufRead, Write};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BFileError {
    #[error("read error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn write_bfile<W: Write + ?Sized>(terms: &[BigInt], out: &mut W) -> io::Result<()> {
    for (i, v) in terms.iter().enumerate() {
        writeln!(out, "{} {}", i + 1, v)?;
    }
    Ok(())
}

pub fn read_bfile<R: BufRead>(input: R) -> Result<Vec<BigInt>, BFileError> {
    let mut terms = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| BFileError::Parse {
            line: lineno,
            message,
        };
        let mut fields = trimmed.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected \"index value\", got {trimmed:?}")));
        };
        let index: usize = index
            .parse()
            .map_err(|_| parse_err(format!("bad index {index:?}")))?;
        let value: BigInt = value
            .parse()
            .map_err(|_| parse_err(format!("bad value {value:?}")))?;
        let expected = terms.len() + 1;
        if index != expected {
            return Err(parse_err(format!("expected index {expected}, got {index}")));
        }
        terms.push(value);
    }
    Ok(terms)
}
