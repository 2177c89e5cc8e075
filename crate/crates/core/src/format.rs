//! Graph JSON documents and graded-root exports (DOT, canonical JSON).

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{PlumbingGraph, Vertex};
use crate::root::{d_invariant, GradedRoot};

pub const GRAPH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: i64,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: u32,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<i64>,
}

impl GraphDocument {
    /// Vertices sorted by id, edges as sorted `[min, max]` pairs.
    pub fn from_graph(graph: &PlumbingGraph, center: Option<i64>) -> Self {
        let mut vertices: Vec<VertexEntry> = graph
            .vertices()
            .iter()
            .map(|v| VertexEntry {
                id: v.id,
                weight: v.weight,
            })
            .collect();
        vertices.sort_by_key(|v| v.id);
        let mut edges: Vec<[i64; 2]> = graph
            .edge_ids()
            .into_iter()
            .map(|(a, b)| [a.min(b), a.max(b)])
            .collect();
        edges.sort_unstable();
        Self {
            format_version: GRAPH_FORMAT_VERSION,
            vertices,
            edges,
            center,
        }
    }

    pub fn to_graph(&self) -> Result<PlumbingGraph> {
        if self.format_version != GRAPH_FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id,
                weight: v.weight,
            })
            .collect();
        let edges = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = PlumbingGraph::new(vertices, edges)?;
        if let Some(c) = self.center {
            if graph.index_of(c).is_none() {
                return Err(Error::Format(format!("center {c} is not a vertex")));
            }
        }
        Ok(graph)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Lowest-terms `p/q`, or `p` when the denominator is one.
pub fn rational_string(q: &BigRational) -> String {
    q.to_string()
}

/// Canonical JSON form of a graded root, for fixture comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootJson {
    pub d: String,
    pub leaf_count: usize,
    /// Leaf gradings, sorted numerically.
    pub leaves: Vec<String>,
    pub shift: String,
    pub tree: String,
    pub truncated: bool,
}

impl RootJson {
    pub fn new(root: &GradedRoot) -> Self {
        let mut gradings = root.leaf_gradings();
        gradings.sort();
        Self {
            d: rational_string(&d_invariant(root)),
            leaf_count: root.leaf_count(),
            leaves: gradings.iter().map(rational_string).collect(),
            shift: rational_string(&root.shift),
            tree: root.tree.canonical_form(),
            truncated: root.tree.truncated(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// DOT drawing with one node per vertex of the graded root (one per integer
/// level on every branch), labelled by grading, plus the infinite stem.
pub fn root_to_dot(root: &GradedRoot) -> String {
    let tree = &root.tree;
    let nodes = tree.nodes();
    let parents = tree.parents();
    let mut out = String::from("digraph graded_root {\n  rankdir=BT;\n  node [shape=circle];\n");
    // Vertex naming: "n{node}_{level}".
    let declare = |out: &mut String, node: usize, level: i64| {
        let _ = writeln!(
            out,
            "  n{node}_{level} [label=\"{}\"];",
            rational_string(&root.grading(level))
        );
    };
    for (i, n) in nodes.iter().enumerate() {
        let top = if i == tree.root() {
            n.level
        } else {
            nodes[parents[i]].level
        };
        let last = if i == tree.root() {
            top
        } else {
            (top - 1).max(n.level)
        };
        for level in n.level..=last {
            declare(&mut out, i, level);
        }
        for level in n.level..last {
            let _ = writeln!(out, "  n{i}_{level} -> n{i}_{};", level + 1);
        }
        if i != tree.root() {
            let _ = writeln!(out, "  n{i}_{last} -> n{}_{top};", parents[i]);
        }
    }
    let r = tree.root();
    let rl = nodes[r].level;
    let _ = writeln!(
        out,
        "  stem [shape=none, label=\"...\"];\n  n{r}_{rl} -> stem;"
    );
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::{graded_root, tau_sequence_auto};
    use crate::seifert::brieskorn_graph;

    #[test]
    fn graph_round_trip() {
        let g = brieskorn_graph(2, 3, 13).unwrap();
        let doc = GraphDocument::from_graph(&g, Some(0));
        let text = doc.to_json();
        let back = GraphDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let g2 = back.to_graph().unwrap();
        assert_eq!(GraphDocument::from_graph(&g2, Some(0)), doc);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_version = r#"{"format_version":2,"vertices":[{"id":0,"weight":-1}],"edges":[]}"#;
        assert!(GraphDocument::from_json(bad_version)
            .unwrap()
            .to_graph()
            .is_err());
        let cycle = r#"{"format_version":1,"vertices":[{"id":0,"weight":-2},{"id":1,"weight":-2},{"id":2,"weight":-2}],"edges":[[0,1],[1,2],[2,0]]}"#;
        assert!(GraphDocument::from_json(cycle).unwrap().to_graph().is_err());
        let dup = r#"{"format_version":1,"vertices":[{"id":0,"weight":-2},{"id":0,"weight":-2}],"edges":[[0,0]]}"#;
        assert!(GraphDocument::from_json(dup).unwrap().to_graph().is_err());
        assert!(GraphDocument::from_json(r#"{"format_version":1}"#).is_err());
    }

    #[test]
    fn root_exports() {
        let g = brieskorn_graph(2, 5, 7).unwrap();
        let tau = tau_sequence_auto(&g, 0, 1 << 16).unwrap();
        let root = graded_root(&tau, &g).unwrap();
        let json = RootJson::new(&root);
        assert_eq!(json.leaves, vec!["0", "0", "0"]);
        assert_eq!(json.d, "0");
        let dot = root_to_dot(&root);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("label=\"0\"").count(), 3);
        assert!(dot.contains("stem"));
    }
}
