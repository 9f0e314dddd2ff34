//! Plain-text formats for matrices, factor pairs and graphs.
//!
//! Every format is line oriented. Anything after a `#` is a comment and blank
//! lines are ignored. Line numbers and indices in files are 1-based.
//!
//! ```text
//! # matrix: header "m n", then m rows of n numbers
//! 2 2
//! 1 -1
//! -1 1
//! ```
//!
//! Numbers are written with the shortest decimal form that parses back to the
//! same `f64`, so `parse_matrix(&serialize_matrix(&m)) == m` bit for bit.

use std::fmt::Write as _;

use crate::community::BipartiteGraph;
use crate::error::{Error, ParseErrorKind, Result};
use crate::matrix::{DenseMatrix, RankOneFactors};
use crate::reductions::Graph;

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line {
                number: k + 1,
                tokens,
            })
        })
        .collect()
}

fn eof_line(text: &str) -> usize {
    text.lines().count() + 1
}

fn err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn parse_header<const N: usize>(lines: &[Line<'_>], shape: &str) -> Result<[usize; N]> {
    let first = lines.first().ok_or_else(|| {
        err(
            1,
            ParseErrorKind::Header(format!("missing '{shape}' header")),
        )
    })?;
    if first.tokens.len() != N {
        return Err(err(
            first.number,
            ParseErrorKind::Header(format!(
                "expected '{shape}', got '{}'",
                first.tokens.join(" ")
            )),
        ));
    }
    let mut out = [0usize; N];
    for (slot, tok) in out.iter_mut().zip(&first.tokens) {
        *slot = tok.parse().map_err(|_| {
            err(
                first.number,
                ParseErrorKind::Header(format!("'{tok}' is not a non-negative integer")),
            )
        })?;
    }
    Ok(out)
}

fn parse_number(line: usize, tok: &str) -> Result<f64> {
    let x: f64 = tok
        .parse()
        .map_err(|_| err(line, ParseErrorKind::Token(tok.to_string())))?;
    if !x.is_finite() {
        return Err(err(line, ParseErrorKind::NonFinite(tok.to_string())));
    }
    Ok(x)
}

fn parse_row(line: &Line<'_>, row: usize, expected: usize) -> Result<Vec<f64>> {
    let values = line
        .tokens
        .iter()
        .map(|t| parse_number(line.number, t))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != expected {
        return Err(err(
            line.number,
            ParseErrorKind::RowLength {
                row,
                found: values.len(),
                expected,
            },
        ));
    }
    Ok(values)
}

fn parse_index(line: usize, tok: &str, bound: usize, what: &str) -> Result<usize> {
    let i: usize = tok
        .parse()
        .map_err(|_| err(line, ParseErrorKind::Token(tok.to_string())))?;
    if i == 0 || i > bound {
        return Err(err(
            line,
            ParseErrorKind::Record(format!("{what} index {i} outside 1..={bound}")),
        ));
    }
    Ok(i - 1)
}

/// Parses the `m n` + rows matrix format.
pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let lines = content_lines(text);
    let [m, n] = parse_header::<2>(&lines, "m n")?;
    if m == 0 || n == 0 {
        return Err(err(
            lines[0].number,
            ParseErrorKind::Header(format!("dimensions must be positive, got {m} {n}")),
        ));
    }
    let body = &lines[1..];
    let mut data = Vec::with_capacity(m * n);
    for (k, line) in body.iter().enumerate() {
        if k == m {
            return Err(err(
                line.number,
                ParseErrorKind::RowCount {
                    expected: m,
                    found: body.len(),
                },
            ));
        }
        data.extend(parse_row(line, k + 1, n)?);
    }
    if body.len() < m {
        return Err(err(
            eof_line(text),
            ParseErrorKind::RowCount {
                expected: m,
                found: body.len(),
            },
        ));
    }
    DenseMatrix::new(m, n, data)
}

fn write_row(out: &mut String, xs: &[f64]) {
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{x}").unwrap();
    }
    out.push('\n');
}

pub fn serialize_matrix(m: &DenseMatrix) -> String {
    serialize_matrix_with_comments(m, &[])
}

/// Serializes `m`, preceded by one `# ` line per comment.
pub fn serialize_matrix_with_comments(m: &DenseMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
    for i in 0..m.rows() {
        write_row(&mut out, m.row(i));
    }
    out
}

/// Parses a factor pair: header `m n`, one line with `u`, one line with `v`.
pub fn parse_factors(text: &str) -> Result<RankOneFactors> {
    let lines = content_lines(text);
    let [m, n] = parse_header::<2>(&lines, "m n")?;
    if m == 0 || n == 0 {
        return Err(err(
            lines[0].number,
            ParseErrorKind::Header(format!("dimensions must be positive, got {m} {n}")),
        ));
    }
    if lines.len() != 3 {
        let line = lines.get(3).map_or(eof_line(text), |l| l.number);
        return Err(err(
            line,
            ParseErrorKind::RowCount {
                expected: 2,
                found: lines.len() - 1,
            },
        ));
    }
    let u = parse_row(&lines[1], 1, m)?;
    let v = parse_row(&lines[2], 2, n)?;
    RankOneFactors::new(u, v)
}

pub fn serialize_factors(f: &RankOneFactors) -> String {
    let mut out = format!("{} {}\n", f.m(), f.n());
    write_row(&mut out, f.u());
    write_row(&mut out, f.v());
    out
}

/// Parses a graph: header `nv ne`, then `ne` lines `i j` (1-based vertices).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let lines = content_lines(text);
    let [nv, ne] = parse_header::<2>(&lines, "nv ne")?;
    let body = &lines[1..];
    if body.len() != ne {
        let line = body.get(ne).map_or(eof_line(text), |l| l.number);
        return Err(err(
            line,
            ParseErrorKind::RowCount {
                expected: ne,
                found: body.len(),
            },
        ));
    }
    let mut edges = Vec::with_capacity(ne);
    for line in body {
        if line.tokens.len() != 2 {
            return Err(err(
                line.number,
                ParseErrorKind::Record(format!("expected 'i j', got '{}'", line.tokens.join(" "))),
            ));
        }
        let i = parse_index(line.number, line.tokens[0], nv, "vertex")?;
        let j = parse_index(line.number, line.tokens[1], nv, "vertex")?;
        edges.push((i, j));
    }
    Graph::new(nv, edges)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.num_vertices(), g.num_edges());
    for &(i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}

/// Parses a bipartite graph: header `m n e`, then `e` lines `i j`.
pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let lines = content_lines(text);
    let [m, n, e] = parse_header::<3>(&lines, "m n e")?;
    let body = &lines[1..];
    if body.len() != e {
        let line = body.get(e).map_or(eof_line(text), |l| l.number);
        return Err(err(
            line,
            ParseErrorKind::RowCount {
                expected: e,
                found: body.len(),
            },
        ));
    }
    let mut edges = Vec::with_capacity(e);
    for line in body {
        if line.tokens.len() != 2 {
            return Err(err(
                line.number,
                ParseErrorKind::Record(format!("expected 'i j', got '{}'", line.tokens.join(" "))),
            ));
        }
        let i = parse_index(line.number, line.tokens[0], m, "left vertex")?;
        let j = parse_index(line.number, line.tokens[1], n, "right vertex")?;
        edges.push((i, j));
    }
    BipartiteGraph::new(m, n, edges)
}

/// Accepts either the bipartite edge-list format or a biadjacency matrix file.
pub fn parse_bipartite_or_matrix(text: &str) -> Result<BipartiteGraph> {
    let lines = content_lines(text);
    match lines.first() {
        Some(l) if l.tokens.len() == 3 => parse_bipartite(text),
        _ => {
            let m = crate::matrix::BinaryMatrix::new(parse_matrix(text)?)?;
            Ok(BipartiteGraph::from_biadjacency(&m))
        }
    }
}

pub fn serialize_bipartite(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {} {}\n", g.left_size(), g.right_size(), g.num_edges());
    for &(i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}
