//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//!
//! Vertices are 1-indexed. Blank lines and lines starting with `#` are
//! ignored; a trailing `# ...` on a data line is a comment too.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CoreError, Result};
use crate::ordered::{OrderedGraph, TracedGraph};

fn parse_err(line: usize, msg: impl Into<String>) -> CoreError {
    CoreError::Parse { line, msg: msg.into() }
}

fn parse_pair(line_no: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let a = it.next().ok_or_else(|| parse_err(line_no, "expected two integers"))?;
    let b = it.next().ok_or_else(|| parse_err(line_no, "expected two integers"))?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "expected exactly two integers"));
    }
    let a = a
        .parse::<usize>()
        .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {a:?}")))?;
    let b = b
        .parse::<usize>()
        .map_err(|_| parse_err(line_no, format!("not a non-negative integer: {b:?}")))?;
    Ok((a, b))
}

/// Parses an ordered graph. Errors carry the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<OrderedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (a, b) = parse_pair(line_no, body)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(parse_err(line_no, format!("vertex out of range 1..={n} in edge ({a}, {b})")));
                }
                if a == b {
                    return Err(parse_err(line_no, format!("self-loop at {a}")));
                }
                if a > b {
                    return Err(parse_err(line_no, format!("edge ({a}, {b}) must be written with u < v")));
                }
                if !seen.insert((a, b)) {
                    return Err(parse_err(line_no, format!("duplicate edge ({a}, {b})")));
                }
                edges.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing header line \"n m\""))?;
    if edges.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!("header announces {m} edges but {} were given", edges.len()),
        ));
    }
    OrderedGraph::from_edges(n, edges)
}

/// Parses a traced graph; every consecutive pair must be listed.
pub fn parse_traced(text: &str) -> Result<TracedGraph> {
    TracedGraph::new(parse_edge_list(text)?)
}

pub fn read_edge_list(path: &Path) -> Result<OrderedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn read_traced(path: &Path) -> Result<TracedGraph> {
    parse_traced(&std::fs::read_to_string(path)?)
}

/// Serialises in the format accepted by [`parse_edge_list`].
pub fn write_edge_list(g: &OrderedGraph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = OrderedGraph::from_edges(4, [(1, 2), (2, 3), (1, 4)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\n\n3 2\n1 2 # path\n2 3\n").unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn errors_have_line_numbers() {
        let err = parse_edge_list("3 2\n1 2\n1 x\n").unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 3, .. }), "{err}");
        let err = parse_edge_list("3 1\n1 4\n").unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 2, .. }), "{err}");
        let err = parse_edge_list("3 2\n1 2\n").unwrap_err();
        assert!(matches!(err, CoreError::Parse { .. }), "{err}");
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 2\n1 2\n1 2\n").is_err());
    }

    #[test]
    fn traced_loader_checks_path_edges() {
        assert!(parse_traced("3 2\n1 2\n2 3\n").is_ok());
        assert!(matches!(parse_traced("3 2\n1 2\n1 3\n"), Err(CoreError::NotTraced(2, 3))));
    }
}
