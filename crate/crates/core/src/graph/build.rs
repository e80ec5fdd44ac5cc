use serde::{Deserialize, Serialize};

use super::{GenealogyGraph, GraphError, NodeIndex, NodeMeta};
use crate::ingest::Corpus;
use crate::linkage::{sort_edges, SupervisionEdge};

/// An edge dropped to break a cycle, with the cycle it closed written as a
/// node sequence whose first and last ids coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedEdge {
    #[serde(flatten)]
    pub edge: SupervisionEdge,
    pub cycle: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub removed: Vec<RemovedEdge>,
}

impl CycleReport {
    pub fn len(&self) -> usize {
        self.removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.removed.is_empty()
    }
}

/// Build the graph from a corpus and resolved edges.
///
/// While a directed cycle remains, the edge with the latest year on the
/// first cycle found is removed; year ties go to the largest
/// `(supervisor_id, supervisee_id, level)` key. Cycle search visits nodes and
/// edges in id order, so the removals are deterministic.
pub fn build_graph(
    corpus: &Corpus,
    edges: &[SupervisionEdge],
) -> Result<(GenealogyGraph, CycleReport), GraphError> {
    let nodes: Vec<NodeMeta> = corpus.iter().map(NodeMeta::from).collect();
    let index_of = |id: &str| nodes.binary_search_by(|n| n.id.as_str().cmp(id)).ok();

    let mut edges = edges.to_vec();
    sort_edges(&mut edges);
    let mut endpoints = Vec::with_capacity(edges.len());
    for edge in &edges {
        let lookup = |id: &str| {
            index_of(id).ok_or_else(|| GraphError::UnknownEndpoint {
                supervisor_id: edge.supervisor_id.clone(),
                supervisee_id: edge.supervisee_id.clone(),
                missing: id.to_owned(),
            })
        };
        endpoints.push((lookup(&edge.supervisor_id)?, lookup(&edge.supervisee_id)?));
    }

    let mut active = vec![true; edges.len()];
    let mut report = CycleReport::default();
    while let Some(cycle) = find_cycle(nodes.len(), &endpoints, &active) {
        let victim = *cycle
            .iter()
            .max_by(|&&a, &&b| {
                let (ea, eb) = (&edges[a], &edges[b]);
                ea.year.cmp(&eb.year).then_with(|| ea.key().cmp(&eb.key()))
            })
            .expect("cycles have at least one edge");
        active[victim] = false;
        let mut path: Vec<String> = cycle
            .iter()
            .map(|&e| nodes[endpoints[e].0].id.clone())
            .collect();
        path.push(path[0].clone());
        log::info!(
            "breaking cycle {} by removing {} -> {} ({})",
            path.join(" -> "),
            edges[victim].supervisor_id,
            edges[victim].supervisee_id,
            edges[victim].year
        );
        report.removed.push(RemovedEdge {
            edge: edges[victim].clone(),
            cycle: path,
        });
    }

    let kept: Vec<(SupervisionEdge, (NodeIndex, NodeIndex))> = edges
        .into_iter()
        .zip(endpoints)
        .zip(active)
        .filter_map(|(pair, keep)| keep.then_some(pair))
        .collect();
    let (edges, endpoints) = kept.into_iter().unzip();
    Ok((assemble(nodes, edges, endpoints), report))
}

/// Find one directed cycle among active edges, returned as edge indices in
/// path order. Depth-first from each unvisited node in index order.
fn find_cycle(
    node_count: usize,
    endpoints: &[(NodeIndex, NodeIndex)],
    active: &[bool],
) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unseen,
        OnStack,
        Done,
    }

    let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (e, &(from, _)) in endpoints.iter().enumerate() {
        if active[e] {
            out[from].push(e);
        }
    }

    let mut mark = vec![Mark::Unseen; node_count];
    let mut entered_by: Vec<Option<usize>> = vec![None; node_count];
    for start in 0..node_count {
        if mark[start] != Mark::Unseen {
            continue;
        }
        let mut stack: Vec<(NodeIndex, usize)> = vec![(start, 0)];
        mark[start] = Mark::OnStack;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&e) = out[node].get(*next) {
                *next += 1;
                let target = endpoints[e].1;
                match mark[target] {
                    Mark::Unseen => {
                        mark[target] = Mark::OnStack;
                        entered_by[target] = Some(e);
                        stack.push((target, 0));
                    }
                    Mark::OnStack => {
                        let mut cycle = vec![e];
                        let mut cursor = node;
                        while cursor != target {
                            let back = entered_by[cursor].expect("on-stack node has a parent edge");
                            cycle.push(back);
                            cursor = endpoints[back].0;
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// Assemble adjacency and heights. `edges` must be sorted and acyclic.
pub(super) fn assemble(
    nodes: Vec<NodeMeta>,
    edges: Vec<SupervisionEdge>,
    endpoints: Vec<(NodeIndex, NodeIndex)>,
) -> GenealogyGraph {
    let n = nodes.len();
    let mut out_edges = vec![Vec::new(); n];
    let mut in_edges = vec![Vec::new(); n];
    for (e, &(from, to)) in endpoints.iter().enumerate() {
        out_edges[from].push(e);
        in_edges[to].push(e);
    }
    // Edges are sorted by (supervisor, supervisee, level), so out lists are
    // already ordered; in lists are filled in supervisor order as well.
    let distinct = |list: &Vec<usize>, pick: fn(&(NodeIndex, NodeIndex)) -> NodeIndex| {
        let mut v: Vec<NodeIndex> = list.iter().map(|&e| pick(&endpoints[e])).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let children: Vec<Vec<NodeIndex>> = out_edges.iter().map(|l| distinct(l, |p| p.1)).collect();
    let parents: Vec<Vec<NodeIndex>> = in_edges.iter().map(|l| distinct(l, |p| p.0)).collect();

    // Heights via Kahn's algorithm on the reversed graph (leaves first).
    let mut heights = vec![0usize; n];
    let mut pending: Vec<usize> = children.iter().map(Vec::len).collect();
    let mut ready: Vec<NodeIndex> = (0..n).filter(|&v| pending[v] == 0).collect();
    let mut processed = 0;
    while let Some(v) = ready.pop() {
        processed += 1;
        for &p in &parents[v] {
            heights[p] = heights[p].max(heights[v] + 1);
            pending[p] -= 1;
            if pending[p] == 0 {
                ready.push(p);
            }
        }
    }
    assert_eq!(processed, n, "graph assembled from cyclic edges");

    GenealogyGraph {
        nodes,
        edges,
        endpoints,
        out_edges,
        in_edges,
        children,
        parents,
        heights,
    }
}
