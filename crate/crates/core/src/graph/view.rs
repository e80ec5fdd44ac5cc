use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{GenealogyGraph, GraphError, NodeIndex};
use crate::ingest::Level;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewNode {
    pub id: String,
    pub name: String,
    /// Distinct direct supervisees in the full graph.
    pub child_count: usize,
    /// The node has supervisees but its children are not shown yet.
    pub expandable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewEdge {
    pub supervisor_id: String,
    pub supervisee_id: String,
    pub level: Level,
    pub year: i32,
}

/// The visible part of a genealogy tree: the root, its descendants down to
/// a fixed depth, and the children of every explicitly expanded node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeView {
    pub root: String,
    pub nodes: Vec<ViewNode>,
    pub edges: Vec<ViewEdge>,
}

impl GenealogyGraph {
    /// Render the view rooted at `id`.
    ///
    /// Nodes within `depth` levels of the root are opened, as is every
    /// expanded node once it becomes visible. Every id in `expanded` must end
    /// up visible. A node reachable by several visible parents is rendered
    /// once with one edge per parent. Children appear by earliest supervision
    /// year, then id.
    pub fn subtree_view(
        &self,
        id: &str,
        depth: usize,
        expanded: &BTreeSet<String>,
    ) -> Result<TreeView, GraphError> {
        let root = self.require(id)?;
        let wanted: BTreeSet<NodeIndex> = expanded
            .iter()
            .map(|e| self.index_of(e).ok_or_else(|| GraphError::InvalidExpansion(e.clone())))
            .collect::<Result<_, _>>()?;

        let mut level = vec![usize::MAX; self.node_count()];
        let mut opened = vec![false; self.node_count()];
        let mut order = vec![root];
        level[root] = 0;
        let mut edges = Vec::new();
        let mut cursor = 0;
        while cursor < order.len() {
            let node = order[cursor];
            cursor += 1;
            if level[node] >= depth && !wanted.contains(&node) {
                continue;
            }
            opened[node] = true;
            let mut out: Vec<_> = self.out_edges[node]
                .iter()
                .map(|&e| (&self.edges[e], self.endpoints[e].1))
                .collect();
            out.sort_by(|(a, ai), (b, bi)| {
                self.first_year(node, *ai)
                    .cmp(&self.first_year(node, *bi))
                    .then_with(|| ai.cmp(bi))
                    .then_with(|| a.level.cmp(&b.level))
            });
            for (edge, child) in out {
                if level[child] == usize::MAX {
                    level[child] = level[node] + 1;
                    order.push(child);
                }
                edges.push(ViewEdge {
                    supervisor_id: edge.supervisor_id.clone(),
                    supervisee_id: edge.supervisee_id.clone(),
                    level: edge.level,
                    year: edge.year,
                });
            }
        }

        if let Some(&hidden) = wanted.iter().find(|&&w| level[w] == usize::MAX) {
            return Err(GraphError::InvalidExpansion(self.id(hidden).to_owned()));
        }

        let nodes = order
            .iter()
            .map(|&ix| ViewNode {
                id: self.id(ix).to_owned(),
                name: self.meta(ix).name.clone(),
                child_count: self.children(ix).len(),
                expandable: !opened[ix] && !self.children(ix).is_empty(),
            })
            .collect();
        Ok(TreeView {
            root: self.id(root).to_owned(),
            nodes,
            edges,
        })
    }

    fn first_year(&self, parent: NodeIndex, child: NodeIndex) -> i32 {
        self.out_edges[parent]
            .iter()
            .filter(|&&e| self.endpoints[e].1 == child)
            .map(|&e| self.edges[e].year)
            .min()
            .unwrap_or(i32::MAX)
    }
}

/// Graphviz rendering of a view. PhD edges are blue, MSc edges orange;
/// each edge also carries a `level` attribute.
pub fn to_dot(view: &TreeView) -> String {
    let mut out = String::from("digraph genealogy {\n  rankdir=TB;\n  node [shape=box];\n");
    for node in &view.nodes {
        let _ = write!(out, "  \"{}\" [label=\"{}\"", dot_escape(&node.id), dot_escape(&node.name));
        if node.expandable {
            let _ = write!(out, ", style=dashed, tooltip=\"{} supervisees\"", node.child_count);
        }
        out.push_str("];\n");
    }
    for edge in &view.edges {
        let color = match edge.level {
            Level::Phd => "blue",
            Level::Msc => "orange",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [level={}, label=\"{} {}\", color={}];",
            dot_escape(&edge.supervisor_id),
            dot_escape(&edge.supervisee_id),
            edge.level,
            edge.level,
            edge.year,
            color
        );
    }
    out.push_str("}\n");
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}
