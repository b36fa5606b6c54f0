//! Text formats: the edge-list graph format and certificate JSON.
//!
//! Edge-list format: first line `n m`, then exactly `m` lines `u v` with
//! ASCII decimal endpoints. Parsers report the 1-based line number of the
//! first problem and never repair input.

use crate::graph::{CoverCertificate, Graph, HamiltonCycle};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A malformed edge-list file, with the offending 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct EdgeListError {
    pub line: usize,
    pub message: String,
}

fn bad(line: usize, message: impl Into<String>) -> EdgeListError {
    EdgeListError {
        line,
        message: message.into(),
    }
}

/// Parses the edge-list text format into a graph.
pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty input"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .ok_or_else(|| bad(1, "missing vertex count"))?
        .parse()
        .map_err(|_| bad(1, "vertex count is not a number"))?;
    let m: usize = it
        .next()
        .ok_or_else(|| bad(1, "missing edge count"))?
        .parse()
        .map_err(|_| bad(1, "edge count is not a number"))?;
    if it.next().is_some() {
        return Err(bad(1, "trailing tokens after header"));
    }

    let mut edges: Vec<(u32, u32, usize)> = Vec::with_capacity(m);
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            if edges.len() == m {
                continue; // tolerate blank lines after the last edge
            }
            return Err(bad(line, "blank line inside edge list"));
        }
        if edges.len() == m {
            return Err(bad(line, "more edge lines than declared"));
        }
        let mut tok = raw.split_whitespace();
        let u: u32 = tok
            .next()
            .ok_or_else(|| bad(line, "missing first endpoint"))?
            .parse()
            .map_err(|_| bad(line, "first endpoint is not a number"))?;
        let v: u32 = match tok.next() {
            Some(t) => t
                .parse()
                .map_err(|_| bad(line, "second endpoint is not a number"))?,
            None => return Err(bad(line, "missing second endpoint")),
        };
        if tok.next().is_some() {
            return Err(bad(line, "trailing tokens after edge"));
        }
        if u == v {
            return Err(bad(line, format!("self-loop at vertex {u}")));
        }
        if u as usize >= n || v as usize >= n {
            return Err(bad(line, format!("endpoint out of range in edge {u} {v}")));
        }
        edges.push((u.min(v), u.max(v), line));
    }
    if edges.len() != m {
        return Err(bad(
            edges.len() + 2,
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
            return Err(bad(
                w[1].2,
                format!("duplicate edge {} {}", w[1].0, w[1].1),
            ));
        }
    }
    Ok(Graph::from_edges_unchecked(
        n,
        edges.into_iter().map(|(u, v, _)| (u, v)).collect(),
    ))
}

/// Serialises a graph in the edge-list text format.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    n: usize,
    graph_hash: String,
    cycles: Vec<Vec<u32>>,
}

/// Certificate JSON: `{"n": ..., "graph_hash": "...", "cycles": [[...], ...]}`.
pub fn certificate_to_json(cert: &CoverCertificate) -> String {
    let file = CertificateFile {
        n: cert.n,
        graph_hash: cert.graph_hash.clone(),
        cycles: cert.cycles.iter().map(|c| c.order.clone()).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("certificate serialises");
    s.push('\n');
    s
}

/// Parses certificate JSON. The optimality target is not stored in the file;
/// [`crate::graph::verify_cover`] recomputes it from the graph.
pub fn certificate_from_json(text: &str) -> Result<CoverCertificate, serde_json::Error> {
    let file: CertificateFile = serde_json::from_str(text)?;
    Ok(CoverCertificate {
        n: file.n,
        graph_hash: file.graph_hash,
        cycles: file.cycles.into_iter().map(HamiltonCycle::new).collect(),
        target_count: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_hash, make_certificate, standard};

    #[test]
    fn edge_list_roundtrip() {
        let g = standard::cycle(5);
        let text = write_edge_list(&g);
        assert_eq!(text.lines().next(), Some("5 5"));
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_edge_list("").unwrap_err().line, 1);
        assert_eq!(parse_edge_list("3\n").unwrap_err().line, 1);
        // Bad token on an edge line.
        let err = parse_edge_list("3 2\n0 1\n1 x\n").unwrap_err();
        assert_eq!(err.line, 3);
        // Too few edges: reported at the line where the next edge should be.
        let err = parse_edge_list("3 2\n0 1\n").unwrap_err();
        assert_eq!(err.line, 3);
        // Out of range.
        let err = parse_edge_list("3 1\n0 7\n").unwrap_err();
        assert_eq!(err.line, 2);
        // Duplicate in reversed order: second occurrence is flagged.
        let err = parse_edge_list("3 2\n0 1\n1 0\n").unwrap_err();
        assert_eq!(err.line, 3);
        // Self-loop.
        let err = parse_edge_list("3 1\n2 2\n").unwrap_err();
        assert_eq!(err.line, 2);
        // Extra edges.
        let err = parse_edge_list("3 1\n0 1\n1 2\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn certificate_json_roundtrip() {
        let g = standard::cycle(4);
        let cert = make_certificate(&g, vec![crate::graph::HamiltonCycle::new(vec![0, 1, 2, 3])]);
        let json = certificate_to_json(&cert);
        let back = certificate_from_json(&json).unwrap();
        assert_eq!(back.n, 4);
        assert_eq!(back.graph_hash, graph_hash(&g));
        assert_eq!(back.cycles, cert.cycles);
        // Keys appear in the pinned order.
        let n_pos = json.find("\"n\"").unwrap();
        let h_pos = json.find("\"graph_hash\"").unwrap();
        let c_pos = json.find("\"cycles\"").unwrap();
        assert!(n_pos < h_pos && h_pos < c_pos);
    }
}
