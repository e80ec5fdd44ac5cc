use scitree_core::graph::GraphError;
use scitree_core::ingest::{DegreeEntry, Level, SupervisionEntry};
use scitree_core::Repository;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Counts {
    /// Distinct researchers supervised.
    pub supervisees: usize,
    /// Supervision edges out of this researcher (MSc and PhD counted apart).
    pub supervision_edges: usize,
    pub supervisors: usize,
}

#[derive(Debug, Serialize)]
pub struct Relation {
    pub id: String,
    pub name: String,
    pub level: Level,
    pub year: i32,
}

/// Everything the curriculum tab shows for one researcher.
#[derive(Debug, Serialize)]
pub struct ResearcherDetail {
    pub id: String,
    pub name: String,
    pub citation_names: Vec<String>,
    pub institution: Option<String>,
    pub areas: Vec<String>,
    pub degrees: Vec<DegreeEntry>,
    pub supervisions_declared: Vec<SupervisionEntry>,
    pub resume: Option<String>,
    pub counts: Counts,
    pub supervisors: Vec<Relation>,
    pub supervisees: Vec<Relation>,
}

impl ResearcherDetail {
    pub fn build(repo: &Repository, id: &str) -> Result<Self, GraphError> {
        let graph = &repo.graph;
        let ix = graph.require(id)?;
        let record = repo
            .corpus
            .get(id)
            .ok_or_else(|| GraphError::UnknownResearcher(id.to_owned()))?;
        let relation = |other: &str, level, year| Relation {
            id: other.to_owned(),
            name: graph.node(other).map(|m| m.name.clone()).unwrap_or_default(),
            level,
            year,
        };
        Ok(ResearcherDetail {
            id: record.id.clone(),
            name: record.full_name.clone(),
            citation_names: record.citation_names.clone(),
            institution: record.institution.clone(),
            areas: record.areas.clone(),
            degrees: record.degrees.clone(),
            supervisions_declared: record.supervisions_given.clone(),
            resume: record.resume.clone(),
            counts: Counts {
                supervisees: graph.children(ix).len(),
                supervision_edges: graph.out_degree(ix),
                supervisors: graph.parents(ix).len(),
            },
            supervisors: graph
                .in_edges(ix)
                .map(|e| relation(&e.supervisor_id, e.level, e.year))
                .collect(),
            supervisees: graph
                .out_edges(ix)
                .map(|e| relation(&e.supervisee_id, e.level, e.year))
                .collect(),
        })
    }
}
