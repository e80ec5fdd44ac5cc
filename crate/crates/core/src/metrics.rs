//! Genealogy metrics for a single researcher.
//!
//! Counts over people (width, fertility, descendancy, cousins) use distinct
//! researchers; counts over supervisions (relationships, the yearly
//! timeline) use edges, so an MSc and a PhD of the same person count twice
//! there.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{GenealogyGraph, GraphError, NodeIndex};
use crate::ingest::Level;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearCount {
    pub msc: usize,
    pub phd: usize,
}

impl YearCount {
    pub fn total(&self) -> usize {
        self.msc + self.phd
    }
}

/// Concluded supervisions per year, split by level.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YearlyCounts(pub BTreeMap<i32, YearCount>);

impl YearlyCounts {
    pub fn total(&self) -> usize {
        self.0.values().map(YearCount::total).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }
}

/// Exact supervisions-per-year rate, displayed with one decimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupervisionRate(pub Ratio<u64>);

impl SupervisionRate {
    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    /// One decimal place, halves rounded away from zero.
    pub fn display(&self) -> String {
        let (n, d) = (self.numerator() as u128, self.denominator() as u128);
        let tenths = (20 * n + d) / (2 * d);
        format!("{}.{}", tenths / 10, tenths % 10)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }
}

impl fmt::Display for SupervisionRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[derive(Serialize, Deserialize)]
struct RateRepr {
    numerator: u64,
    denominator: u64,
    display: String,
}

impl Serialize for SupervisionRate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RateRepr {
            numerator: self.numerator(),
            denominator: self.denominator(),
            display: self.display(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SupervisionRate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RateRepr::deserialize(deserializer)?;
        if repr.denominator == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(SupervisionRate(Ratio::new(repr.numerator, repr.denominator)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub researcher_id: String,
    pub width: usize,
    pub fecundity: usize,
    pub fertility: usize,
    pub depth: usize,
    pub descendancy: usize,
    pub genealogical_index: usize,
    pub relationships: usize,
    pub cousins: usize,
    pub avg_supervisions_per_year: SupervisionRate,
    pub first_supervision_year: Option<i32>,
    pub last_supervision_year: Option<i32>,
    pub deepest_path: Vec<String>,
    pub timeline: YearlyCounts,
}

/// Distinct direct supervisees (a.k.a. fecundity).
pub fn width(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(graph.children(graph.require(id)?).len())
}

pub fn fecundity(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    width(graph, id)
}

/// Direct supervisees who supervised at least one person themselves.
pub fn fertility(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(fertility_at(graph, graph.require(id)?))
}

fn fertility_at(graph: &GenealogyGraph, ix: NodeIndex) -> usize {
    graph
        .children(ix)
        .iter()
        .filter(|&&c| !graph.children(c).is_empty())
        .count()
}

/// Edges on the longest supervision chain starting at `id` (a.k.a.
/// generations).
pub fn depth(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(graph.height(graph.require(id)?))
}

pub fn generations(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    depth(graph, id)
}

pub fn descendancy(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(graph.descendant_indices(graph.require(id)?).len())
}

/// Largest `g` such that at least `g` direct supervisees each have at least
/// `g` descendants.
pub fn genealogical_index(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(genealogical_index_at(graph, graph.require(id)?))
}

fn genealogical_index_at(graph: &GenealogyGraph, ix: NodeIndex) -> usize {
    let mut counts: Vec<usize> = graph
        .children(ix)
        .iter()
        .map(|&c| graph.descendant_indices(c).len())
        .collect();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts
        .iter()
        .enumerate()
        .take_while(|&(rank, &count)| count > rank)
        .count()
}

/// Supervision edges inside the descendancy of `id`, its own out-edges
/// included.
pub fn relationships(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    let ix = graph.require(id)?;
    Ok(relationships_with(graph, ix, &graph.descendant_indices(ix)))
}

fn relationships_with(graph: &GenealogyGraph, ix: NodeIndex, descendants: &[NodeIndex]) -> usize {
    // Every out-edge of a member of {ix} ∪ descendants ends inside the
    // descendancy, so counting out-degrees is exact.
    std::iter::once(ix)
        .chain(descendants.iter().copied())
        .map(|v| graph.out_degree(v))
        .sum()
}

/// Researchers sharing a grandparent with `id` but none of its supervisors.
pub fn cousins(graph: &GenealogyGraph, id: &str) -> Result<usize, GraphError> {
    Ok(cousins_at(graph, graph.require(id)?))
}

fn cousins_at(graph: &GenealogyGraph, ix: NodeIndex) -> usize {
    let supervisors = graph.parents(ix);
    let mut candidates: Vec<NodeIndex> = supervisors
        .iter()
        .flat_map(|&p| graph.parents(p))
        .flat_map(|&gp| graph.children(gp))
        .flat_map(|&aunt| graph.children(aunt))
        .copied()
        .filter(|&c| c != ix)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter(|&c| graph.parents(c).iter().all(|p| supervisors.binary_search(p).is_err()))
        .count()
}

pub fn supervisions_by_year(graph: &GenealogyGraph, id: &str) -> Result<YearlyCounts, GraphError> {
    Ok(timeline_at(graph, graph.require(id)?))
}

fn timeline_at(graph: &GenealogyGraph, ix: NodeIndex) -> YearlyCounts {
    let mut years: BTreeMap<i32, YearCount> = BTreeMap::new();
    for edge in graph.out_edges(ix) {
        let slot = years.entry(edge.year).or_default();
        match edge.level {
            Level::Msc => slot.msc += 1,
            Level::Phd => slot.phd += 1,
        }
    }
    YearlyCounts(years)
}

/// Width divided by the span between first and last supervision year, the
/// span taken as at least one year.
pub fn avg_supervisions_per_year(
    graph: &GenealogyGraph,
    id: &str,
) -> Result<SupervisionRate, GraphError> {
    let ix = graph.require(id)?;
    Ok(rate(graph.children(ix).len(), &timeline_at(graph, ix)))
}

/// The rate for a given width and year span.
pub fn supervision_rate(width: usize, first_year: i32, last_year: i32) -> SupervisionRate {
    let span = (last_year - first_year).max(1) as u64;
    SupervisionRate(Ratio::new(width as u64, span))
}

fn rate(width: usize, timeline: &YearlyCounts) -> SupervisionRate {
    match (timeline.first_year(), timeline.last_year()) {
        (Some(first), Some(last)) if width > 0 => supervision_rate(width, first, last),
        _ => SupervisionRate(Ratio::from_integer(0)),
    }
}

pub fn metrics_report(graph: &GenealogyGraph, id: &str) -> Result<MetricsReport, GraphError> {
    let ix = graph.require(id)?;
    let descendants = graph.descendant_indices(ix);
    let width = graph.children(ix).len();
    let timeline = timeline_at(graph, ix);
    Ok(MetricsReport {
        researcher_id: graph.id(ix).to_owned(),
        width,
        fecundity: width,
        fertility: fertility_at(graph, ix),
        depth: graph.height(ix),
        descendancy: descendants.len(),
        genealogical_index: genealogical_index_at(graph, ix),
        relationships: relationships_with(graph, ix, &descendants),
        cousins: cousins_at(graph, ix),
        avg_supervisions_per_year: rate(width, &timeline),
        first_supervision_year: timeline.first_year(),
        last_supervision_year: timeline.last_year(),
        deepest_path: graph
            .deepest_path_indices(ix)
            .into_iter()
            .map(|v| graph.id(v).to_owned())
            .collect(),
        timeline,
    })
}
