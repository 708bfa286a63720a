//! The matrix file format.
//!
//! ```text
//! field rational          (or: field gf <p>)
//! size <n>
//! <n rows of n whitespace-separated scalar tokens>
//! ```
//!
//! Scalar tokens follow the field's syntax: `int` or `int/uint` over the
//! rationals, a nonnegative integer over GF(p). Blank lines are ignored.

use std::fmt;

use hadamat::{FieldError, FieldSpec, Matrix, Scalar};
use num::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    MissingHeader,
    BadHeader(String),
    BadSize(String),
    /// Fewer or more data lines than the size header promises.
    RowCount { expected: usize, got: usize },
    RowLength { row: usize, expected: usize, got: usize },
    Scalar { row: usize, col: usize, source: FieldError },
    BadFieldFlag(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::MissingHeader => write!(f, "missing field/size header"),
            FormatError::BadHeader(line) => write!(f, "bad field header {line:?}"),
            FormatError::BadSize(line) => write!(f, "bad size line {line:?}"),
            FormatError::RowCount { expected, got } => {
                write!(f, "expected {expected} rows, got {got}")
            }
            FormatError::RowLength { row, expected, got } => {
                write!(f, "row {row} has {got} tokens, expected {expected}")
            }
            FormatError::Scalar { row, col, source } => {
                write!(f, "entry ({row}, {col}): {source}")
            }
            FormatError::BadFieldFlag(flag) => {
                write!(f, "bad field {flag:?}, expected \"rational\" or \"gf:<p>\"")
            }
        }
    }
}

impl std::error::Error for FormatError {}

/// Parses the `--field` flag syntax: `rational` or `gf:<p>`.
pub fn parse_field_flag(flag: &str) -> Result<FieldSpec, FormatError> {
    if flag == "rational" {
        return Ok(FieldSpec::rational());
    }
    if let Some(p_text) = flag.strip_prefix("gf:") {
        let p: BigUint = p_text
            .parse()
            .map_err(|_| FormatError::BadFieldFlag(flag.to_string()))?;
        return FieldSpec::prime_field(p).map_err(|_| FormatError::BadFieldFlag(flag.to_string()));
    }
    Err(FormatError::BadFieldFlag(flag.to_string()))
}

fn parse_field_header(line: &str) -> Result<FieldSpec, FormatError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    match tokens.as_slice() {
        ["field", "rational"] => Ok(FieldSpec::rational()),
        ["field", "gf", p_text] => {
            let p: BigUint = p_text
                .parse()
                .map_err(|_| FormatError::BadHeader(line.to_string()))?;
            FieldSpec::prime_field(p).map_err(|_| FormatError::BadHeader(line.to_string()))
        }
        _ => Err(FormatError::BadHeader(line.to_string())),
    }
}

pub fn parse_matrix_file(text: &str) -> Result<Matrix, FormatError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let field_line = lines.next().ok_or(FormatError::MissingHeader)?;
    let field = parse_field_header(field_line)?;

    let size_line = lines.next().ok_or(FormatError::MissingHeader)?;
    let n = match size_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["size", n_text] => n_text
            .parse::<usize>()
            .map_err(|_| FormatError::BadSize(size_line.to_string()))?,
        _ => return Err(FormatError::BadSize(size_line.to_string())),
    };
    if n == 0 {
        return Err(FormatError::BadSize(size_line.to_string()));
    }

    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for (row_idx, line) in lines.by_ref().take(n).enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(FormatError::RowLength {
                row: row_idx + 1,
                expected: n,
                got: tokens.len(),
            });
        }
        let mut row = Vec::with_capacity(n);
        for (col_idx, token) in tokens.iter().enumerate() {
            let scalar = field.parse_scalar(token).map_err(|source| FormatError::Scalar {
                row: row_idx + 1,
                col: col_idx + 1,
                source,
            })?;
            row.push(scalar);
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(FormatError::RowCount {
            expected: n,
            got: rows.len(),
        });
    }
    if lines.next().is_some() {
        return Err(FormatError::RowCount {
            expected: n,
            got: n + 1,
        });
    }
    Ok(Matrix::from_rows(&field, rows).expect("rows validated above"))
}

/// Renders the matrix in the file format, byte-deterministically.
pub fn render_matrix_file(m: &Matrix) -> String {
    let header = match m.field() {
        FieldSpec::Rational => "field rational".to_string(),
        FieldSpec::PrimeField(p) => format!("field gf {p}"),
    };
    let mut out = format!("{header}\nsize {}\n", m.rows());
    for r in 0..m.rows() {
        let tokens: Vec<String> = m.row(r).iter().map(Scalar::render).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}
