//! The immutable genealogy graph.
//!
//! Nodes are researchers (indexed in id order), edges are resolved
//! supervisions. Construction breaks any directed cycle so every traversal
//! downstream can assume a DAG.

mod build;
mod traverse;
mod view;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{DegreeLevel, ResearcherRecord};
use crate::linkage::SupervisionEdge;

pub use build::{build_graph, CycleReport, RemovedEdge};
pub use view::{to_dot, TreeView, ViewEdge, ViewNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {supervisor_id} -> {supervisee_id} references unknown researcher {missing:?}")]
    UnknownEndpoint {
        supervisor_id: String,
        supervisee_id: String,
        missing: String,
    },
    #[error("unknown researcher {0:?}")]
    UnknownResearcher(String),
    #[error("node {0:?} cannot be expanded: it is not part of the current view")]
    InvalidExpansion(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub level: DegreeLevel,
    pub year: i32,
    pub institution: Option<String>,
    pub thesis_title: Option<String>,
    pub supervisor_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeMeta {
    pub id: String,
    pub name: String,
    pub institution: Option<String>,
    pub areas: Vec<String>,
    pub degrees: Vec<DegreeSummary>,
}

impl From<&ResearcherRecord> for NodeMeta {
    fn from(record: &ResearcherRecord) -> Self {
        NodeMeta {
            id: record.id.clone(),
            name: record.full_name.clone(),
            institution: record.institution.clone(),
            areas: record.areas.clone(),
            degrees: record
                .degrees
                .iter()
                .map(|d| DegreeSummary {
                    level: d.level,
                    year: d.year,
                    institution: d.institution.clone(),
                    thesis_title: d.thesis_title.clone(),
                    supervisor_name: d.supervisor_name.clone(),
                })
                .collect(),
        }
    }
}

/// Position of a researcher in the graph. Indices follow id order.
pub type NodeIndex = usize;

#[derive(Debug, Clone)]
pub struct GenealogyGraph {
    nodes: Vec<NodeMeta>,
    edges: Vec<SupervisionEdge>,
    // Edge endpoints as node indices, parallel to `edges`.
    endpoints: Vec<(NodeIndex, NodeIndex)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    children: Vec<Vec<NodeIndex>>,
    parents: Vec<Vec<NodeIndex>>,
    heights: Vec<usize>,
}

impl PartialEq for GenealogyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Eq for GenealogyGraph {}

impl GenealogyGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[NodeMeta] {
        &self.nodes
    }

    /// All edges in `(supervisor_id, supervisee_id, level)` order.
    pub fn edges(&self) -> &[SupervisionEdge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<NodeIndex> {
        self.nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok()
    }

    pub fn require(&self, id: &str) -> Result<NodeIndex, GraphError> {
        self.index_of(id)
            .ok_or_else(|| GraphError::UnknownResearcher(id.to_owned()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index_of(id).is_some()
    }

    pub fn id(&self, ix: NodeIndex) -> &str {
        &self.nodes[ix].id
    }

    pub fn meta(&self, ix: NodeIndex) -> &NodeMeta {
        &self.nodes[ix]
    }

    pub fn node(&self, id: &str) -> Option<&NodeMeta> {
        self.index_of(id).map(|ix| &self.nodes[ix])
    }

    /// Outgoing supervision edges of a node, sorted by supervisee then level.
    pub fn out_edges(&self, ix: NodeIndex) -> impl Iterator<Item = &SupervisionEdge> + '_ {
        self.out_edges[ix].iter().map(|&e| &self.edges[e])
    }

    /// Incoming supervision edges of a node, sorted by supervisor then level.
    pub fn in_edges(&self, ix: NodeIndex) -> impl Iterator<Item = &SupervisionEdge> + '_ {
        self.in_edges[ix].iter().map(|&e| &self.edges[e])
    }

    pub fn out_degree(&self, ix: NodeIndex) -> usize {
        self.out_edges[ix].len()
    }

    /// Distinct direct supervisees, ascending.
    pub fn children(&self, ix: NodeIndex) -> &[NodeIndex] {
        &self.children[ix]
    }

    /// Distinct direct supervisors, ascending.
    pub fn parents(&self, ix: NodeIndex) -> &[NodeIndex] {
        &self.parents[ix]
    }

    /// Edges on the longest directed path starting at `ix`.
    pub fn height(&self, ix: NodeIndex) -> usize {
        self.heights[ix]
    }
}
