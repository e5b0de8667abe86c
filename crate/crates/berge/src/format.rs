//! Text host files, JSON certificates and JSON-lines traces.
//!
//! A host file starts with `n r m` followed by `m` lines of `r` vertex ids.
//! Everything after `#` on a line is a comment; blank lines are skipped.

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::Context;
use berge_core::{BergeCycle, BergePath, Hypergraph};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().or_else(|_| fail(line, format!("expected a non-negative integer, found {tok:?}")))
        })
        .collect()
}

pub fn parse_host(text: &str) -> Result<Hypergraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((header_line, header)) = lines.next() else {
        return fail(1, "missing header \"n r m\"");
    };
    let (n, r, m) = match numbers(header_line, header)?[..] {
        [n, r, m] => (n, r, m),
        _ => return fail(header_line, "header must be \"n r m\""),
    };
    if r < 2 {
        return fail(header_line, format!("uniformity must be at least 2, got {r}"));
    }
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashMap::with_capacity(m);
    let mut last_line = header_line;
    for (line, body) in lines {
        last_line = line;
        if edges.len() == m {
            return fail(line, format!("more than the {m} declared edges"));
        }
        let mut edge = numbers(line, body)?;
        if edge.len() != r {
            return fail(line, format!("edge has {} vertices, expected {r}", edge.len()));
        }
        if let Some(&v) = edge.iter().find(|&&v| v >= n) {
            return fail(line, format!("vertex {v} out of range 0..{n}"));
        }
        edge.sort_unstable();
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return fail(line, "edge repeats a vertex");
        }
        if let Some(first) = seen.insert(edge.clone(), line) {
            return fail(line, format!("duplicate edge (first on line {first})"));
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return fail(last_line, format!("declared {m} edges, found {}", edges.len()));
    }
    Hypergraph::new(n, r, edges).or_else(|e| fail(header_line, e.to_string()))
}

pub fn serialize_host(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.n(), h.r(), h.edge_count());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_host(path: &Path) -> anyhow::Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read host file {}", path.display()))?;
    parse_host(&text).with_context(|| format!("malformed host file {}", path.display()))
}

/// `{"vertices": [...], "edge_ids": [...], "cycle": bool}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Certificate {
    pub vertices: Vec<usize>,
    pub edge_ids: Vec<usize>,
    pub cycle: bool,
}

impl From<&BergeCycle> for Certificate {
    fn from(c: &BergeCycle) -> Self {
        Self {
            vertices: c.vertices.clone(),
            edge_ids: c.edge_ids.clone(),
            cycle: true,
        }
    }
}

impl From<&BergePath> for Certificate {
    fn from(p: &BergePath) -> Self {
        Self {
            vertices: p.vertices.clone(),
            edge_ids: p.edge_ids.clone(),
            cycle: false,
        }
    }
}

/// One compact JSON document per line.
pub fn json_lines<T: Serialize>(items: impl IntoIterator<Item = T>) -> anyhow::Result<String> {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(&item)?);
        out.push('\n');
    }
    Ok(out)
}
