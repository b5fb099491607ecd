//! DIMACS `.col` and graph6 reading and writing.
//!
//! DIMACS is 1-based: `p edge n m` followed by `e u v` lines, where `e v v`
//! encodes a loop. graph6 carries simple graphs only.

use std::fmt::Write as _;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Dimacs,
    Graph6,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dimacs" | "col" | "dimacs-col" => Ok(Format::Dimacs),
            "graph6" | "g6" => Ok(Format::Graph6),
            other => Err(Error::input(format!("unknown graph format '{other}'"))),
        }
    }
}

pub fn parse_graph(bytes: &[u8], format: Format) -> Result<Graph> {
    match format {
        Format::Dimacs => parse_dimacs(bytes),
        Format::Graph6 => parse_graph6(bytes),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Dimacs => Ok(write_dimacs(g).into_bytes()),
        Format::Graph6 => write_graph6(g).map(String::into_bytes),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_dimacs(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(1, format!("not UTF-8: {e}")))?;
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line_no, "duplicate problem line"));
                }
                let kind = fields
                    .next()
                    .ok_or_else(|| parse_err(line_no, "missing problem kind"))?;
                if kind != "edge" && kind != "col" {
                    return Err(parse_err(
                        line_no,
                        format!("unsupported problem kind '{kind}'"),
                    ));
                }
                let count = parse_number(fields.next(), line_no, "vertex count")?;
                // the declared edge count is informational; files often repeat edges
                parse_number(fields.next(), line_no, "edge count")?;
                if fields.next().is_some() {
                    return Err(parse_err(line_no, "trailing fields on problem line"));
                }
                if count == 0 {
                    return Err(parse_err(line_no, "graph needs at least one vertex"));
                }
                n = Some(count);
            }
            Some("e") => {
                let count = n.ok_or_else(|| parse_err(line_no, "edge before problem line"))?;
                let u = parse_number(fields.next(), line_no, "edge endpoint")?;
                let v = parse_number(fields.next(), line_no, "edge endpoint")?;
                if fields.next().is_some() {
                    return Err(parse_err(line_no, "trailing fields on edge line"));
                }
                for w in [u, v] {
                    if w == 0 || w > count {
                        return Err(parse_err(
                            line_no,
                            format!("vertex {w} outside 1..={count}"),
                        ));
                    }
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => return Err(parse_err(line_no, format!("unknown line type '{other}'"))),
            None => unreachable!("blank lines skipped"),
        }
    }
    let n = n.ok_or_else(|| parse_err(text.lines().count().max(1), "missing problem line"))?;
    Graph::from_edges(n, edges)
}

fn parse_number(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let field = field.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{field}'")))
}

fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

const GRAPH6_HEADER: &str = ">>graph6<<";

fn parse_graph6(bytes: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(1, format!("not UTF-8: {e}")))?;
    let body = text.trim_end_matches(['\n', '\r']);
    let body = body.strip_prefix(GRAPH6_HEADER).unwrap_or(body).as_bytes();
    if let Some(&b) = body.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(parse_err(
            1,
            format!("byte {b} outside the graph6 range 63..=126"),
        ));
    }
    let data: Vec<u8> = body.iter().map(|b| b - 63).collect();
    let (n, rest) = match data.as_slice() {
        [] => return Err(parse_err(1, "empty graph6 string")),
        [63, 63, r @ ..] => (read_size(r, 6)?, &r[6..]),
        [63, r @ ..] => (read_size(r, 3)?, &r[3..]),
        [x, r @ ..] => (*x as usize, r),
    };
    if n == 0 {
        return Err(parse_err(1, "graph needs at least one vertex"));
    }
    let bits = n * (n - 1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() != expected {
        return Err(parse_err(
            1,
            format!(
                "expected {expected} data bytes for {n} vertices, found {}",
                rest.len()
            ),
        ));
    }
    let bit = |k: usize| (rest[k / 6] >> (5 - k % 6)) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges)
}

fn read_size(r: &[u8], digits: usize) -> Result<usize> {
    if r.len() < digits {
        return Err(parse_err(1, "truncated graph6 size field"));
    }
    Ok(r[..digits]
        .iter()
        .fold(0usize, |acc, &d| (acc << 6) | d as usize))
}

fn write_graph6(g: &Graph) -> Result<String> {
    if g.has_loops() {
        return Err(Error::Unsupported("graph6 cannot encode loops".into()));
    }
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.push(63);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    } else {
        out.extend([63, 63]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (6 - filled));
    }
    let mut s: String = out.into_iter().map(|b| (b + 63) as char).collect();
    s.push('\n');
    Ok(s)
}
