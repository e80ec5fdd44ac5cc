//! Academic genealogy engine.
//!
//! Pipeline: curricula are parsed into [`ingest::ResearcherRecord`]s,
//! [`linkage`] turns their declared supervisions into resolved edges,
//! [`graph`] assembles an acyclic genealogy graph, and [`metrics`] computes
//! per-researcher genealogy indicators over it. [`repository`] persists the
//! result and [`search`] answers name queries.

pub mod graph;
pub mod ingest;
pub mod linkage;
pub mod metrics;
pub mod repository;
pub mod search;

pub use graph::{build_graph, GenealogyGraph, GraphError, TreeView};
pub use ingest::{load_corpus, Corpus, ResearcherRecord};
pub use metrics::{metrics_report, MetricsReport};
pub use repository::{load_repository, save_repository, Repository};
