//! Brute-force reference implementations of every traversal and metric,
//! computed straight from a raw edge list. Nothing here calls into the
//! graph's own traversal code; the graph is only used as the thing checked.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use scitree_core::graph::{build_graph, GenealogyGraph};
use scitree_core::ingest::{Corpus, Level, ResearcherRecord};
use scitree_core::linkage::{Direction, SupervisionEdge};
use scitree_core::metrics;

/// A DAG over `ids`, with edges `(supervisor, supervisee, level, year)`.
#[derive(Debug, Clone)]
pub struct RawDag {
    pub ids: Vec<String>,
    pub edges: Vec<(usize, usize, Level, i32)>,
}

/// Random DAG of at most `max_nodes` nodes. Nodes are created in a hidden
/// topological order and labelled with a shuffled set of ids, so id order
/// and edge direction are unrelated.
pub fn random_dag(rng: &mut impl Rng, max_nodes: usize) -> RawDag {
    let n = rng.gen_range(1..=max_nodes);
    let mut labels: Vec<String> = (0..n).map(|i| format!("N{i:02}")).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    for child in 1..n {
        let parents = match rng.gen_range(0..10) {
            0..=1 => 0,
            2..=7 => 1,
            8 => 2,
            _ => 3,
        };
        let mut chosen = BTreeSet::new();
        for _ in 0..parents {
            chosen.insert(rng.gen_range(0..child));
        }
        for parent in chosen {
            let level = if rng.gen_bool(0.5) { Level::Phd } else { Level::Msc };
            let year = rng.gen_range(1950..2020);
            edges.push((parent, child, level, year));
            if rng.gen_bool(0.08) {
                let other = match level {
                    Level::Phd => Level::Msc,
                    Level::Msc => Level::Phd,
                };
                edges.push((parent, child, other, year + rng.gen_range(0..5)));
            }
        }
    }
    // Re-express everything in terms of label order so index == id rank.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    let mut rank = vec![0; n];
    for (r, &node) in order.iter().enumerate() {
        rank[node] = r;
    }
    let ids = order.iter().map(|&node| labels[node].clone()).collect();
    let edges = edges
        .into_iter()
        .map(|(a, b, l, y)| (rank[a], rank[b], l, y))
        .collect();
    RawDag { ids, edges }
}

impl RawDag {
    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn graph(&self) -> GenealogyGraph {
        let corpus = Corpus::new(
            self.ids
                .iter()
                .map(|id| ResearcherRecord::new(id.clone(), format!("Researcher {id}")))
                .collect(),
        )
        .unwrap();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b, level, year)| {
                SupervisionEdge::new(
                    self.ids[a].clone(),
                    self.ids[b].clone(),
                    level,
                    year,
                    Direction::SuperviseeDeclared,
                )
            })
            .collect();
        let (graph, cycles) = build_graph(&corpus, &edges).unwrap();
        assert!(cycles.is_empty(), "random DAG must be acyclic");
        graph
    }

    fn adjacent(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.n()]; self.n()];
        for &(a, b, _, _) in &self.edges {
            m[a][b] = true;
        }
        m
    }

    /// Floyd–Warshall transitive closure.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let mut reach = self.adjacent();
        let n = self.n();
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    /// Every directed path (as node sequences, including the trivial one)
    /// starting at `v`.
    pub fn all_paths_from(&self, v: usize) -> Vec<Vec<usize>> {
        let adj = self.adjacent();
        let mut out = Vec::new();
        let mut stack = vec![vec![v]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            for next in 0..self.n() {
                if adj[last][next] {
                    let mut longer = path.clone();
                    longer.push(next);
                    stack.push(longer);
                }
            }
            out.push(path);
        }
        out
    }

    pub fn supervisors(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn grandparents(&self, v: usize) -> BTreeSet<usize> {
        self.supervisors(v)
            .into_iter()
            .flat_map(|p| self.supervisors(p))
            .collect()
    }

    pub fn supervisees(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub descendants: BTreeSet<String>,
    pub ancestors: Vec<Vec<String>>,
    pub deepest_path: Vec<String>,
    pub width: usize,
    pub fertility: usize,
    pub depth: usize,
    pub descendancy: usize,
    pub genealogical_index: usize,
    pub relationships: usize,
    pub cousins: usize,
    pub timeline: BTreeMap<i32, (usize, usize)>,
    pub avg: (u64, u64),
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Compute every expected value for node `v` by brute force.
pub fn expected(dag: &RawDag, closure: &[Vec<bool>], paths: &[Vec<Vec<usize>>], v: usize) -> Expected {
    let n = dag.n();
    let name = |i: usize| dag.ids[i].clone();

    let desc: Vec<usize> = (0..n).filter(|&u| closure[v][u]).collect();

    // Ancestors: for every u, the lengths of all paths from u ending at v.
    let mut by_len: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for u in 0..n {
        if u == v || !closure[u][v] {
            continue;
        }
        for path in &paths[u] {
            if *path.last().unwrap() == v {
                by_len.entry(path.len() - 1).or_default().insert(u);
            }
        }
    }
    let max_len = by_len.keys().next_back().copied().unwrap_or(0);
    let ancestors = (1..=max_len)
        .map(|k| {
            let mut g: Vec<String> = by_len.get(&k).into_iter().flatten().map(|&u| name(u)).collect();
            g.sort();
            g
        })
        .collect();

    let paths = &paths[v];
    let depth = paths.iter().map(|p| p.len() - 1).max().unwrap();
    let deepest_path = paths
        .iter()
        .filter(|p| p.len() - 1 == depth)
        .map(|p| p.iter().map(|&i| name(i)).collect::<Vec<_>>())
        .min()
        .unwrap();

    let children = dag.supervisees(v);
    let width = children.len();
    let fertility = children.iter().filter(|&&c| !dag.supervisees(c).is_empty()).count();

    let child_desc: Vec<usize> = children
        .iter()
        .map(|&c| (0..n).filter(|&u| closure[c][u]).count())
        .collect();
    let genealogical_index = (0..=width)
        .rev()
        .find(|&g| child_desc.iter().filter(|&&d| d >= g).count() >= g)
        .unwrap();

    let in_scope = |u: usize| u == v || closure[v][u];
    let relationships = dag
        .edges
        .iter()
        .filter(|&&(a, b, _, _)| in_scope(a) && closure[v][b])
        .count();

    let my_sup = dag.supervisors(v);
    let my_gp = dag.grandparents(v);
    let cousins = (0..n)
        .filter(|&c| c != v)
        .filter(|&c| !dag.grandparents(c).is_disjoint(&my_gp))
        .filter(|&c| dag.supervisors(c).is_disjoint(&my_sup))
        .count();

    let mut timeline: BTreeMap<i32, (usize, usize)> = BTreeMap::new();
    for &(a, _, level, year) in &dag.edges {
        if a == v {
            let slot = timeline.entry(year).or_default();
            match level {
                Level::Msc => slot.0 += 1,
                Level::Phd => slot.1 += 1,
            }
        }
    }
    let avg = match (timeline.keys().next(), timeline.keys().next_back()) {
        (Some(&first), Some(&last)) if width > 0 => {
            let span = ((last - first).max(1)) as u64;
            let g = gcd(width as u64, span);
            (width as u64 / g, span / g)
        }
        _ => (0, 1),
    };

    Expected {
        descendants: desc.iter().map(|&u| name(u)).collect(),
        ancestors,
        deepest_path,
        width,
        fertility,
        depth,
        descendancy: desc.len(),
        genealogical_index,
        relationships,
        cousins,
        timeline,
        avg,
    }
}

/// What the implementation reports for node `id`, in the oracle's shape.
pub fn actual(graph: &GenealogyGraph, id: &str) -> Expected {
    let report = metrics::metrics_report(graph, id).unwrap();
    assert_eq!(metrics::width(graph, id).unwrap(), report.width);
    assert_eq!(metrics::fecundity(graph, id).unwrap(), report.fecundity);
    assert_eq!(metrics::fertility(graph, id).unwrap(), report.fertility);
    assert_eq!(metrics::depth(graph, id).unwrap(), report.depth);
    assert_eq!(metrics::generations(graph, id).unwrap(), report.depth);
    assert_eq!(metrics::descendancy(graph, id).unwrap(), report.descendancy);
    assert_eq!(metrics::genealogical_index(graph, id).unwrap(), report.genealogical_index);
    assert_eq!(metrics::relationships(graph, id).unwrap(), report.relationships);
    assert_eq!(metrics::cousins(graph, id).unwrap(), report.cousins);
    assert_eq!(
        metrics::avg_supervisions_per_year(graph, id).unwrap(),
        report.avg_supervisions_per_year
    );
    assert_eq!(metrics::supervisions_by_year(graph, id).unwrap(), report.timeline);
    assert_eq!(graph.deepest_path(id).unwrap(), report.deepest_path);
    assert_eq!(report.width, report.fecundity);

    Expected {
        descendants: graph.descendants(id).unwrap(),
        ancestors: graph.ancestors(id).unwrap(),
        deepest_path: report.deepest_path,
        width: report.width,
        fertility: report.fertility,
        depth: report.depth,
        descendancy: report.descendancy,
        genealogical_index: report.genealogical_index,
        relationships: report.relationships,
        cousins: report.cousins,
        timeline: report
            .timeline
            .0
            .iter()
            .map(|(&y, c)| (y, (c.msc, c.phd)))
            .collect(),
        avg: (
            report.avg_supervisions_per_year.numerator(),
            report.avg_supervisions_per_year.denominator(),
        ),
    }
}

/// Compare implementation and oracle on every node of `dag`.
pub fn check_against_oracle(dag: &RawDag) -> Result<(), String> {
    let graph = dag.graph();
    let closure = dag.closure();
    let paths: Vec<_> = (0..dag.n()).map(|v| dag.all_paths_from(v)).collect();
    for v in 0..dag.n() {
        let id = &dag.ids[v];
        let want = expected(dag, &closure, &paths, v);
        let got = actual(&graph, id);
        if want != got {
            return Err(format!("node {id} of {dag:?}\n want {want:?}\n  got {got:?}"));
        }
    }
    Ok(())
}

/// Metric invariants on every node of `dag`.
pub fn check_invariants(dag: &RawDag) -> Result<(), String> {
    let graph = dag.graph();
    for (v, id) in dag.ids.iter().enumerate() {
        let r = metrics::metrics_report(&graph, id).unwrap();
        let out_degree = dag.edges.iter().filter(|e| e.0 == v).count();
        let checks = [
            ("fertility <= width", r.fertility <= r.width),
            ("width <= descendancy", r.width <= r.descendancy),
            ("g <= width", r.genealogical_index <= r.width),
            ("depth = 0 <=> width = 0", (r.depth == 0) == (r.width == 0)),
            ("relationships >= descendancy", r.relationships >= r.descendancy),
            ("timeline total = out-degree", r.timeline.total() == out_degree),
            ("id not among descendants", !graph.descendants(id).unwrap().contains(id)),
            (
                "path length = depth",
                r.deepest_path.len() == r.depth + 1,
            ),
            (
                "avg uses timeline bounds",
                r.first_supervision_year == r.timeline.first_year()
                    && r.last_supervision_year == r.timeline.last_year(),
            ),
        ];
        for (what, ok) in checks {
            if !ok {
                return Err(format!("{what} fails at {id}: {r:?}"));
            }
        }
        for pair in r.deepest_path.windows(2) {
            let (a, b) = (graph.index_of(&pair[0]).unwrap(), graph.index_of(&pair[1]).unwrap());
            if !graph.children(a).contains(&b) {
                return Err(format!("deepest path step {pair:?} is not an edge"));
            }
        }
        for d in graph.descendants(id).unwrap() {
            if !graph.ancestors(&d).unwrap().iter().flatten().any(|a| a == id) {
                return Err(format!("{d} descends from {id} but {id} is not its ancestor"));
            }
        }
    }
    Ok(())
}
