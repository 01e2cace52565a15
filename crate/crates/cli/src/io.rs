//! Graph JSON documents and `#`-commented CSV tables.

use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use voter_qsd::graph::Vertex;
use voter_qsd::Graph;

use crate::CliError;

/// `{"n_vertices": int, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n_vertices: usize,
    pub edges: Vec<[Vertex; 2]>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            n_vertices: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, CliError> {
        let edges: Vec<(Vertex, Vertex)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Ok(Graph::from_edges(self.n_vertices, &edges)?)
    }
}

pub fn parse_graph(json: &str) -> Result<Graph, CliError> {
    serde_json::from_str::<GraphDocument>(json)?.to_graph()
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphDocument::from_graph(g)).expect("graph documents serialize")
}

/// Metadata written next to a QSD table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QsdMetadata {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
    pub solver: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary_gap: Option<f64>,
}

/// A CSV table: `#` comment lines, one header line, then rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Parses what [`Display`](fmt::Display) writes.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut t = Table::default();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            if let Some(c) = line.strip_prefix('#') {
                t.comments.push(c.trim_start().to_string());
            } else {
                t.header = line.split(',').map(str::to_string).collect();
                break;
            }
        }
        if t.header.is_empty() {
            return Err(CliError::Validation("table has no header".into()));
        }
        for line in lines.filter(|l| !l.is_empty()) {
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != t.header.len() {
                return Err(CliError::Validation(format!("ragged row: {line}")));
            }
            t.rows.push(row);
        }
        Ok(t)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(out, "{}", r.join(","))?;
        }
        f.write_str(&out)
    }
}

/// Shortest round-trip formatting, so equal values give equal bytes.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use voter_qsd::graph::make_complete;

    #[test]
    fn graph_round_trip() {
        let g = make_complete(4).unwrap();
        let back = parse_graph(&graph_to_json(&g)).unwrap();
        assert_eq!(back, g);
        let doc: GraphDocument = serde_json::from_str(r#"{"n_vertices":3,"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(doc.to_graph().unwrap().edge_count(), 2);
    }

    #[test]
    fn invalid_documents() {
        assert!(parse_graph(r#"{"n_vertices":4,"edges":[[0,1],[2,3]]}"#).is_err());
        assert!(parse_graph(r#"{"n_vertices":2,"edges":[[0,0]]}"#).is_err());
        assert!(parse_graph(r#"{"edges":[]}"#).is_err());
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(&["k", "h", "mass"]);
        t.comment("lambda=0.5");
        t.push(vec!["1".into(), "0".into(), num(0.25)]);
        let text = t.to_string();
        assert!(text.starts_with("# lambda=0.5\nk,h,mass\n"));
        assert_eq!(Table::parse(&text).unwrap(), t);
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
