//! Matrix Market reader and writer (coordinate matrices, array vectors).

use std::fmt::Write as _;

use symkrylov::{Scalar, SparseMatrix, SymmetryClass};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MmError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("matrix is {rows}×{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("line {line}: index ({row}, {col}) out of range for {n}×{n}")]
    IndexOutOfRange {
        line: usize,
        row: usize,
        col: usize,
        n: usize,
    },
    #[error("line {line}: diagonal entry in a skew-symmetric file")]
    SkewDiagonal { line: usize },
    #[error("line {line}: non-real diagonal entry in a hermitian file")]
    HermitianDiagonal { line: usize },
    #[error("line {line}: entry above the diagonal in a {qualifier} file")]
    UpperTriangle {
        line: usize,
        qualifier: &'static str,
    },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, MmError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qualifier {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

impl Qualifier {
    pub fn name(self) -> &'static str {
        match self {
            Qualifier::General => "general",
            Qualifier::Symmetric => "symmetric",
            Qualifier::SkewSymmetric => "skew-symmetric",
            Qualifier::Hermitian => "hermitian",
        }
    }

    /// Solver class implied by the qualifier. General files carry none;
    /// complex skew-symmetric data matches no solver class.
    pub fn class(self, field: Field) -> Option<SymmetryClass> {
        match (self, field) {
            (Qualifier::General, _) => None,
            (Qualifier::Symmetric, _) => Some(SymmetryClass::ComplexSymmetric),
            (Qualifier::SkewSymmetric, Field::Real) => Some(SymmetryClass::SkewSymmetric),
            (Qualifier::SkewSymmetric, Field::Complex) => None,
            (Qualifier::Hermitian, _) => Some(SymmetryClass::Hermitian),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub matrix: SparseMatrix,
    pub field: Field,
    pub qualifier: Qualifier,
}

impl MatrixFile {
    pub fn class(&self) -> Option<SymmetryClass> {
        self.qualifier.class(self.field)
    }
}

/// Data lines with their 1-based line numbers; comments and blanks dropped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

fn header(text: &str, format: &str) -> Result<(Field, Qualifier)> {
    let first = text.lines().next().unwrap_or("");
    let tokens: Vec<String> = first
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(MmError::Header(first.to_string()));
    }
    if tokens[2] != format {
        return Err(MmError::Header(format!(
            "expected {format} format, got {}",
            tokens[2]
        )));
    }
    let field = match tokens[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(MmError::Header(format!("unsupported field {other}"))),
    };
    let qualifier = match tokens[4].as_str() {
        "general" => Qualifier::General,
        "symmetric" => Qualifier::Symmetric,
        "skew-symmetric" => Qualifier::SkewSymmetric,
        "hermitian" => Qualifier::Hermitian,
        other => return Err(MmError::Header(format!("unsupported qualifier {other}"))),
    };
    Ok((field, qualifier))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| MmError::Syntax {
            line,
            msg: format!("bad or missing {what}"),
        })
}

fn parse_value<'a>(
    toks: &mut impl Iterator<Item = &'a str>,
    field: Field,
    line: usize,
) -> Result<Scalar> {
    let re = parse_num(toks.next(), line, "real part")?;
    let im = match field {
        Field::Real => 0.0,
        Field::Complex => parse_num(toks.next(), line, "imaginary part")?,
    };
    if toks.next().is_some() {
        return Err(MmError::Syntax {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok(Scalar::new(re, im))
}

/// Parses a coordinate file, expanding the stored triangle of symmetric,
/// skew-symmetric and hermitian files.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile> {
    let (field, qualifier) = header(text, "coordinate")?;
    let mut lines = data_lines(text);
    let (size_line, size) = lines
        .next()
        .ok_or_else(|| MmError::Header("missing size line".into()))?;
    let mut st = size.split_whitespace();
    let rows: usize = parse_num(st.next(), size_line, "row count")?;
    let cols: usize = parse_num(st.next(), size_line, "column count")?;
    let nnz: usize = parse_num(st.next(), size_line, "entry count")?;
    if rows != cols {
        return Err(MmError::NotSquare { rows, cols });
    }
    let n = rows;

    let mut triplets = Vec::with_capacity(2 * nnz);
    let mut found = 0;
    for (line, l) in lines {
        found += 1;
        let mut toks = l.split_whitespace();
        let row: usize = parse_num(toks.next(), line, "row index")?;
        let col: usize = parse_num(toks.next(), line, "column index")?;
        let v = parse_value(&mut toks, field, line)?;
        if row == 0 || col == 0 || row > n || col > n {
            return Err(MmError::IndexOutOfRange { line, row, col, n });
        }
        let (i, j) = (row - 1, col - 1);
        if qualifier != Qualifier::General && i < j {
            return Err(MmError::UpperTriangle {
                line,
                qualifier: qualifier.name(),
            });
        }
        triplets.push((i, j, v));
        match qualifier {
            Qualifier::General => {}
            Qualifier::Symmetric if i != j => triplets.push((j, i, v)),
            Qualifier::Symmetric => {}
            Qualifier::SkewSymmetric if i == j => return Err(MmError::SkewDiagonal { line }),
            Qualifier::SkewSymmetric => triplets.push((j, i, Scalar::new(0.0 - v.re, 0.0 - v.im))),
            Qualifier::Hermitian if i == j && v.im != 0.0 => {
                return Err(MmError::HermitianDiagonal { line })
            }
            Qualifier::Hermitian if i != j => triplets.push((j, i, Scalar::new(v.re, 0.0 - v.im))),
            Qualifier::Hermitian => {}
        }
    }
    if found != nnz {
        return Err(MmError::EntryCount {
            expected: nnz,
            found,
        });
    }
    let matrix = SparseMatrix::from_triplets(n, &triplets).expect("indices checked above");
    Ok(MatrixFile {
        matrix,
        field,
        qualifier,
    })
}

/// Matrix plus the class its qualifier implies (`None` for general files).
pub fn parse_matrix_market(text: &str) -> Result<(SparseMatrix, Option<SymmetryClass>)> {
    let f = parse_matrix_file(text)?;
    let class = f.class();
    Ok((f.matrix, class))
}

/// Parses an `n × 1` array file.
pub fn parse_vector(text: &str) -> Result<Vec<Scalar>> {
    let (field, qualifier) = header(text, "array")?;
    if qualifier != Qualifier::General {
        return Err(MmError::Header("vectors must be general".into()));
    }
    let mut lines = data_lines(text);
    let (size_line, size) = lines
        .next()
        .ok_or_else(|| MmError::Header("missing size line".into()))?;
    let mut st = size.split_whitespace();
    let rows: usize = parse_num(st.next(), size_line, "row count")?;
    let cols: usize = parse_num(st.next(), size_line, "column count")?;
    if cols != 1 {
        return Err(MmError::Syntax {
            line: size_line,
            msg: format!("expected one column, got {cols}"),
        });
    }
    let mut out = Vec::with_capacity(rows);
    for (line, l) in lines {
        out.push(parse_value(&mut l.split_whitespace(), field, line)?);
    }
    if out.len() != rows {
        return Err(MmError::EntryCount {
            expected: rows,
            found: out.len(),
        });
    }
    Ok(out)
}

fn is_exact(a: &SparseMatrix, q: Qualifier) -> bool {
    a.triplets().all(|(i, j, v)| {
        let t = a.get(j, i);
        match q {
            Qualifier::General => true,
            Qualifier::Symmetric => t == v,
            Qualifier::SkewSymmetric => i != j && t == -v,
            Qualifier::Hermitian => t == v.conj(),
        }
    })
}

fn push_value(out: &mut String, v: Scalar, field: Field) {
    match field {
        Field::Real => write!(out, " {:e}", v.re),
        Field::Complex => write!(out, " {:e} {:e}", v.re, v.im),
    }
    .expect("writing to a String cannot fail");
}

/// Writes `a` in coordinate format. The qualifier follows `class` when `a`
/// has that structure exactly and falls back to `general` otherwise;
/// skew Hermitian matrices are always written as general. Values use
/// shortest round-trip formatting.
pub fn write_matrix_market(a: &SparseMatrix, class: Option<SymmetryClass>) -> String {
    let field = if a.is_real() {
        Field::Real
    } else {
        Field::Complex
    };
    let wanted = match class {
        Some(SymmetryClass::ComplexSymmetric) => Qualifier::Symmetric,
        Some(SymmetryClass::SkewSymmetric) if field == Field::Real => Qualifier::SkewSymmetric,
        Some(SymmetryClass::Hermitian) => Qualifier::Hermitian,
        _ => Qualifier::General,
    };
    let qualifier = if is_exact(a, wanted) {
        wanted
    } else {
        Qualifier::General
    };
    let entries: Vec<_> = a
        .triplets()
        .filter(|&(i, j, _)| qualifier == Qualifier::General || i >= j)
        .collect();
    let field_name = match field {
        Field::Real => "real",
        Field::Complex => "complex",
    };
    let mut out = format!(
        "%%MatrixMarket matrix coordinate {field_name} {}\n",
        qualifier.name()
    );
    let n = a.dim();
    writeln!(out, "{n} {n} {}", entries.len()).unwrap();
    for (i, j, v) in entries {
        write!(out, "{} {}", i + 1, j + 1).unwrap();
        push_value(&mut out, v, field);
        out.push('\n');
    }
    out
}

pub fn write_vector(b: &[Scalar]) -> String {
    let field = if b.iter().all(|v| v.im == 0.0) {
        Field::Real
    } else {
        Field::Complex
    };
    let name = if field == Field::Real {
        "real"
    } else {
        "complex"
    };
    let mut out = format!(
        "%%MatrixMarket matrix array {name} general\n{} 1\n",
        b.len()
    );
    for &v in b {
        let mut line = String::new();
        push_value(&mut line, v, field);
        out.push_str(line.trim_start());
        out.push('\n');
    }
    out
}
