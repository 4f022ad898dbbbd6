//! LIBSVM text format: one example per line, `label idx:val idx:val …` with 1-based,
//! strictly increasing feature indices. Text after `#` is a comment. Files ending in
//! `.gz` are read and written gzip-compressed.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use apcg_core::SparseColMatrix;
use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{CliError, Result};

/// Summary of a loaded dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub name: String,
    /// Examples.
    pub n: usize,
    /// Features.
    pub d: usize,
    pub nnz: usize,
    /// `nnz/(n·d)`.
    pub sparsity: f64,
}

impl DatasetMeta {
    pub fn new(name: impl Into<String>, a: &SparseColMatrix) -> Result<Self> {
        if a.nnz() == 0 {
            return Err(CliError::Config("dataset has no nonzero entries".into()));
        }
        Ok(Self {
            name: name.into(),
            n: a.ncols(),
            d: a.nrows(),
            nnz: a.nnz(),
            sparsity: a.density(),
        })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Label and `(row, value)` entries of one example.
type Example = (f64, Vec<(usize, f64)>);

fn parse_line(line_no: usize, text: &str) -> Result<Option<Example>> {
    let body = text.split('#').next().unwrap_or("");
    let mut tokens = body.split_whitespace();
    let Some(label_tok) = tokens.next() else {
        return Ok(None);
    };
    let label = match label_tok.parse::<f64>() {
        Ok(v) if v == 1.0 || v == -1.0 => v,
        _ => {
            return Err(CliError::Label {
                line: line_no,
                label: label_tok.into(),
            })
        }
    };
    let mut feats: Vec<(usize, f64)> = Vec::new();
    for tok in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, format!("expected index:value, got '{tok}'")))?;
        let idx: usize = idx.parse().ok().filter(|&i| i >= 1).ok_or_else(|| {
            parse_err(
                line_no,
                format!("feature index must be a positive integer, got '{idx}'"),
            )
        })?;
        let val: f64 = val
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| {
                parse_err(
                    line_no,
                    format!("feature value must be a finite number, got '{val}'"),
                )
            })?;
        if let Some(&(prev, _)) = feats.last() {
            if idx == prev + 1 {
                return Err(parse_err(line_no, format!("duplicate feature index {idx}")));
            }
            if idx < prev + 1 {
                return Err(parse_err(
                    line_no,
                    format!("feature index {idx} follows {}", prev + 1),
                ));
            }
        }
        feats.push((idx - 1, val));
    }
    Ok(Some((label, feats)))
}

/// Parses LIBSVM text. Columns of the matrix are the examples; the row count is the
/// largest feature index. Explicit zero values are dropped.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<(SparseColMatrix, Vec<f64>)> {
    let mut columns = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for (k, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CliError::io(format!("line {}", k + 1), e))?;
        if let Some((label, feats)) = parse_line(k + 1, &line)? {
            if let Some(&(r, _)) = feats.last() {
                rows = rows.max(r + 1);
            }
            labels.push(label);
            columns.push(feats);
        }
    }
    let a = SparseColMatrix::from_columns(rows, &columns)?;
    Ok((a, labels))
}

/// Writes LIBSVM text that [`parse_libsvm`] reads back bit for bit.
pub fn write_libsvm<W: Write>(mut w: W, a: &SparseColMatrix, labels: &[f64]) -> Result<()> {
    if labels.len() != a.ncols() {
        return Err(CliError::Config(format!(
            "{} labels for {} examples",
            labels.len(),
            a.ncols()
        )));
    }
    let io = |e| CliError::io("<output>", e);
    for (c, &label) in labels.iter().enumerate() {
        let tag = if label == 1.0 {
            "+1"
        } else if label == -1.0 {
            "-1"
        } else {
            return Err(CliError::Label {
                line: c + 1,
                label: label.to_string(),
            });
        };
        w.write_all(tag.as_bytes()).map_err(io)?;
        let (rows, vals) = a.col(c);
        for (r, v) in rows.iter().zip(vals) {
            write!(w, " {}:{v:?}", r + 1).map_err(io)?;
        }
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

fn is_gz(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("gz"))
}

/// File name without directories and without `.gz` and format extensions.
pub fn dataset_name(path: &Path) -> String {
    let mut p = path.to_path_buf();
    if is_gz(&p) {
        p.set_extension("");
    }
    p.file_stem()
        .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned())
}

pub fn load_libsvm(path: &Path) -> Result<(SparseColMatrix, Vec<f64>, DatasetMeta)> {
    let shown = path.display().to_string();
    let file = File::open(path).map_err(|e| CliError::io(&shown, e))?;
    let reader: Box<dyn Read> = if is_gz(path) {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    let (a, b) = parse_libsvm(BufReader::new(reader)).map_err(|e| match e {
        CliError::Io { source, .. } => CliError::io(&shown, source),
        other => other,
    })?;
    let meta = DatasetMeta::new(dataset_name(path), &a)?;
    Ok((a, b, meta))
}

pub fn save_libsvm(path: &Path, a: &SparseColMatrix, labels: &[f64]) -> Result<()> {
    let shown = path.display().to_string();
    let file = File::create(path).map_err(|e| CliError::io(&shown, e))?;
    let result = if is_gz(path) {
        let mut enc = GzEncoder::new(BufWriter::new(file), Compression::default());
        write_libsvm(&mut enc, a, labels)
            .and_then(|_| enc.finish().map(drop).map_err(|e| CliError::io(&shown, e)))
    } else {
        write_libsvm(BufWriter::new(file), a, labels)
    };
    result.map_err(|e| match e {
        CliError::Io { source, .. } => CliError::io(&shown, source),
        other => other,
    })
}
