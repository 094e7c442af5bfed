//! Line-oriented instance files.
//!
//! ```text
//! graph <n>                 matroid <r> <n> <p>       bpm <t1> <t2> <s> <p>
//! e <u> <v>                 <n residues>  (r lines)   Q1
//! ...                                                 <t1 residues> (r lines)
//!                                                     Q2
//!                                                     <r residues>  (t2 lines)
//!                                                     e <u> <v>     (a<i>, b<i>, s<i>)
//! ```
//!
//! `#` starts a comment; blank lines are ignored. Residues may be negative
//! and are reduced modulo `p`.

use std::fmt::Write;

use algmatch::field::PrimeField;
use algmatch::graph::Graph;
use algmatch::linalg::Matrix;
use algmatch::pathmatch::{PathMatchingInstance, VertexKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let body = l.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().or_else(|_| err(line, format!("bad {what} '{tok}'")))
}

fn header<'a>(
    ls: &'a [(usize, Vec<&'a str>)],
    keyword: &str,
    arity: usize,
) -> Result<(usize, &'a [&'a str]), ParseError> {
    let Some((line, toks)) = ls.first() else {
        return err(1, format!("missing '{keyword}' header"));
    };
    if toks[0] != keyword || toks.len() != arity + 1 {
        return err(*line, format!("expected '{keyword}' header with {arity} fields"));
    }
    Ok((*line, &toks[1..]))
}

fn field(line: usize, tok: &str) -> Result<PrimeField, ParseError> {
    let p: u64 = number(line, tok, "prime")?;
    PrimeField::new(p).or_else(|e| err(line, e.to_string()))
}

fn residue_row(line: usize, toks: &[&str], len: usize) -> Result<Vec<i64>, ParseError> {
    if toks.len() != len {
        return err(line, format!("expected {len} entries, found {}", toks.len()));
    }
    toks.iter().map(|t| number(line, t, "residue")).collect()
}

fn matrix_rows(f: PrimeField, rows: &[(usize, Vec<&str>)], cols: usize) -> Result<Matrix, ParseError> {
    let mut m = Matrix::zeros(f, rows.len(), cols);
    for (i, (line, toks)) in rows.iter().enumerate() {
        for (j, v) in residue_row(*line, toks, cols)?.into_iter().enumerate() {
            m.set(i, j, f.from_i64(v));
        }
    }
    Ok(m)
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let ls = lines(text);
    let (line, h) = header(&ls, "graph", 1)?;
    let n: usize = number(line, h[0], "vertex count")?;
    let mut edges = Vec::new();
    for (line, toks) in &ls[1..] {
        if toks[0] != "e" || toks.len() != 3 {
            return err(*line, "expected 'e <u> <v>'");
        }
        let u: usize = number(*line, toks[1], "vertex")?;
        let v: usize = number(*line, toks[2], "vertex")?;
        if u >= n || v >= n {
            return err(*line, format!("vertex out of range for {n} vertices"));
        }
        if u == v {
            return err(*line, "self-loop");
        }
        edges.push((u, v));
    }
    Ok(Graph::new(n, edges))
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        writeln!(s, "e {u} {v}").unwrap();
    }
    s
}

/// An `r × n` matrix whose columns are the matroid elements.
pub fn parse_matroid(text: &str) -> Result<Matrix, ParseError> {
    let ls = lines(text);
    let (line, h) = header(&ls, "matroid", 3)?;
    let r: usize = number(line, h[0], "rank")?;
    let n: usize = number(line, h[1], "element count")?;
    let f = field(line, h[2])?;
    if ls.len() - 1 != r {
        return err(line, format!("expected {r} matrix rows, found {}", ls.len() - 1));
    }
    matrix_rows(f, &ls[1..], n)
}

pub fn write_matroid(m: &Matrix) -> String {
    let mut s = format!("matroid {} {} {}\n", m.rows(), m.cols(), m.field().modulus());
    write_rows(&mut s, m);
    s
}

fn write_rows(s: &mut String, m: &Matrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.value().to_string()).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
}

/// Vertex name in bpm files: `a<i>` for `T1`, `b<i>` for `T2`, `s<i>` for
/// `S`.
pub fn vertex_name(inst: &PathMatchingInstance, v: usize) -> String {
    match inst.kind(v) {
        VertexKind::T1(i) => format!("a{i}"),
        VertexKind::T2(i) => format!("b{i}"),
        VertexKind::S(i) => format!("s{i}"),
    }
}

fn vertex_id(line: usize, tok: &str, t: usize, s: usize) -> Result<usize, ParseError> {
    let (side, idx) = tok.split_at(tok.len().min(1));
    let i: usize = number(line, idx, "vertex index")?;
    let (limit, base) = match side {
        "a" => (t, 0),
        "b" => (t, t),
        "s" => (s, 2 * t),
        _ => return err(line, format!("vertex '{tok}' must start with a, b or s")),
    };
    if i >= limit {
        return err(line, format!("vertex '{tok}' out of range"));
    }
    Ok(base + i)
}

pub fn parse_bpm(text: &str) -> Result<PathMatchingInstance, ParseError> {
    let ls = lines(text);
    let (line, h) = header(&ls, "bpm", 4)?;
    let t1: usize = number(line, h[0], "T1 size")?;
    let t2: usize = number(line, h[1], "T2 size")?;
    let s: usize = number(line, h[2], "S size")?;
    let f = field(line, h[3])?;
    if t1 != t2 {
        return err(line, format!("terminal sides must have equal size, got {t1} and {t2}"));
    }
    let t = t1;
    let find = |kw: &str| ls.iter().position(|(_, toks)| toks.len() == 1 && toks[0] == kw);
    let (Some(q1_at), Some(q2_at)) = (find("Q1"), find("Q2")) else {
        return err(line, "missing Q1 or Q2 section");
    };
    if q1_at != 1 || q2_at < q1_at {
        return err(ls[q1_at].0, "Q1 section must directly follow the header, then Q2");
    }
    let q1_rows = &ls[q1_at + 1..q2_at];
    let r = q1_rows.len();
    if ls.len() < q2_at + 1 + t {
        return err(ls[q2_at].0, format!("Q2 needs {t} rows"));
    }
    let q2_rows = &ls[q2_at + 1..q2_at + 1 + t];
    let q1 = matrix_rows(f, q1_rows, t)?;
    let q2 = matrix_rows(f, q2_rows, r)?;
    let mut edges = Vec::new();
    for (line, toks) in &ls[q2_at + 1 + t..] {
        if toks[0] != "e" || toks.len() != 3 {
            return err(*line, "expected 'e <u> <v>'");
        }
        edges.push((vertex_id(*line, toks[1], t, s)?, vertex_id(*line, toks[2], t, s)?));
    }
    PathMatchingInstance::new(q1, q2, s, edges).or_else(|e| err(line, e.to_string()))
}

pub fn write_bpm(inst: &PathMatchingInstance) -> String {
    let t = inst.t();
    let mut s = format!("bpm {t} {t} {} {}\nQ1\n", inst.s(), inst.field().modulus());
    write_rows(&mut s, inst.q1());
    s.push_str("Q2\n");
    write_rows(&mut s, inst.q2());
    for &(u, v) in inst.edges() {
        writeln!(s, "e {} {}", vertex_name(inst, u), vertex_name(inst, v)).unwrap();
    }
    s
}
