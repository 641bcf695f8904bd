//! Plain-text matrix and edge-list formats shared by every file the crate
//! reads or writes.
//!
//! Matrix files start with a `rows cols` header line followed by one
//! whitespace-separated row per line. Edge lists hold one `src<TAB>dst` pair
//! per line; `#` starts a comment.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Reads a dense matrix in the `rows cols` + rows format.
pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let reader = open(path)?;
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing `rows cols` header"))?;
    let header = header.map_err(|e| Error::io(path, e))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(path, hline, format!("bad header `{}`", header.trim())))?;
    if dims.len() != 2 {
        return Err(parse_err(path, hline, "header must be `rows cols`"));
    }
    let (rows, cols) = (dims[0], dims[1]);

    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0usize;
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if seen == rows {
            return Err(Error::RowCountMismatch {
                what: "matrix file",
                expected: rows,
                found: rows + 1,
            });
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(path, lineno, format!("not a number: `{tok}`")))?;
            data.push(v);
        }
        if data.len() - before != cols {
            return Err(parse_err(
                path,
                lineno,
                format!("expected {cols} values, found {}", data.len() - before),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::RowCountMismatch {
            what: "matrix file",
            expected: rows,
            found: seen,
        });
    }
    Ok(Array2::from_shape_vec((rows, cols), data).expect("shape checked while parsing"))
}

/// Writes a matrix using the shortest round-tripping float representation, so
/// identical inputs always produce identical bytes.
pub fn write_matrix(path: &Path, m: ArrayView2<'_, f64>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_matrix_to(&mut w, m).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_matrix_to<W: Write>(w: &mut W, m: ArrayView2<'_, f64>) -> std::io::Result<()> {
    writeln!(w, "{} {}", m.nrows(), m.ncols())?;
    let mut line = String::new();
    for row in m.rows() {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v}"));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Edge list as read from disk, with the line number of every edge.
#[derive(Debug, Clone)]
pub struct RawEdges {
    pub edges: Vec<(usize, usize)>,
    pub lines: Vec<usize>,
    /// Original string ids when the file used non-integer node names.
    pub names: Option<Vec<String>>,
}

/// Reads a `src<TAB>dst` edge list.
///
/// Integer ids are taken as-is. If any token is not an integer, every id is
/// remapped to a dense index in order of first appearance and the original
/// names are returned.
pub fn read_edge_list(path: &Path) -> Result<RawEdges> {
    let reader = open(path)?;
    let mut tokens: Vec<(String, String, usize)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let body = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => tokens.push((a.to_string(), b.to_string(), lineno)),
            _ => {
                return Err(parse_err(
                    path,
                    lineno,
                    "expected exactly two fields `src<TAB>dst`",
                ))
            }
        }
    }

    let numeric = tokens
        .iter()
        .all(|(a, b, _)| a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok());
    let mut edges = Vec::with_capacity(tokens.len());
    let mut lines = Vec::with_capacity(tokens.len());
    if numeric {
        for (a, b, l) in &tokens {
            edges.push((a.parse().unwrap(), b.parse().unwrap()));
            lines.push(*l);
        }
        return Ok(RawEdges {
            edges,
            lines,
            names: None,
        });
    }

    let mut ids = std::collections::HashMap::new();
    let mut names = Vec::new();
    let mut intern = |s: &str| -> usize {
        *ids.entry(s.to_string()).or_insert_with(|| {
            names.push(s.to_string());
            names.len() - 1
        })
    };
    for (a, b, l) in &tokens {
        let (u, v) = (intern(a), intern(b));
        edges.push((u, v));
        lines.push(*l);
    }
    Ok(RawEdges {
        edges,
        lines,
        names: Some(names),
    })
}
