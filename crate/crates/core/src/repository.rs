//! On-disk repository: the built graph together with the records it came
//! from and the linkage/cycle reports.
//!
//! Layout (one directory):
//!
//! ```text
//! manifest.json        format version and counts
//! records.jsonl        one curriculum per line, sorted by id
//! edges.jsonl          graph edges, canonical order
//! removed_edges.jsonl  edges dropped to break cycles
//! link_report.json     claim resolution report
//! claims.jsonl         extracted claims (informational, not read back)
//! ```
//!
//! Every file is written deterministically so the same corpus always yields
//! byte-identical repositories.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_graph, CycleReport, GenealogyGraph, GraphError, RemovedEdge};
use crate::ingest::{parse_curriculum, to_jsonl_row, Corpus, DocumentFormat};
use crate::linkage::{link_corpus, LinkReport, SupervisionClaim, SupervisionEdge};

pub const FORMAT_VERSION: &str = "v1";

const MANIFEST: &str = "manifest.json";
const RECORDS: &str = "records.jsonl";
const EDGES: &str = "edges.jsonl";
const REMOVED_EDGES: &str = "removed_edges.jsonl";
const LINK_REPORT: &str = "link_report.json";
const CLAIMS: &str = "claims.jsonl";

#[derive(Debug, Error)]
pub enum RepositoryError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corrupt repository: {0}")]
    CorruptRepository(String),
    #[error("repository format {found:?} is not supported (expected {FORMAT_VERSION:?})")]
    VersionMismatch { found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub records: usize,
    pub edges: usize,
    pub removed_edges: usize,
    pub claims: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: String,
    pub counts: Counts,
}

/// The built, immutable state served by queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repository {
    pub corpus: Corpus,
    pub graph: GenealogyGraph,
    pub claims: Vec<SupervisionClaim>,
    pub link_report: LinkReport,
    pub cycle_report: CycleReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub records: usize,
    pub edges: usize,
    pub ambiguous: usize,
    pub unmatched: usize,
    pub cycles: usize,
}

impl std::fmt::Display for BuildSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "records={} edges={} ambiguous={} unmatched={} cycles={}",
            self.records, self.edges, self.ambiguous, self.unmatched, self.cycles
        )
    }
}

impl Repository {
    /// Run linkage and graph construction over a loaded corpus.
    pub fn build(corpus: Corpus) -> Result<Self, GraphError> {
        let (claims, edges, link_report) = link_corpus(&corpus);
        let (graph, cycle_report) = build_graph(&corpus, &edges)?;
        Ok(Repository {
            corpus,
            graph,
            claims,
            link_report,
            cycle_report,
        })
    }

    pub fn summary(&self) -> BuildSummary {
        BuildSummary {
            records: self.corpus.len(),
            edges: self.graph.edge_count(),
            ambiguous: self.link_report.ambiguous_count(),
            unmatched: self.link_report.unmatched_count(),
            cycles: self.cycle_report.len(),
        }
    }

    fn manifest(&self) -> Manifest {
        Manifest {
            format_version: FORMAT_VERSION.to_owned(),
            counts: Counts {
                records: self.corpus.len(),
                edges: self.graph.edge_count(),
                removed_edges: self.cycle_report.len(),
                claims: self.claims.len(),
            },
        }
    }
}

pub fn save_repository(repo: &Repository, path: &Path) -> Result<(), RepositoryError> {
    fs::create_dir_all(path).map_err(|source| RepositoryError::Io {
        path: path.to_owned(),
        source,
    })?;
    let records: Vec<String> = repo.corpus.iter().map(to_jsonl_row).collect();
    write_file(path, RECORDS, lines(records))?;
    write_file(path, EDGES, jsonl(repo.graph.edges()))?;
    write_file(path, REMOVED_EDGES, jsonl(&repo.cycle_report.removed))?;
    write_file(path, CLAIMS, jsonl(&repo.claims))?;
    write_file(path, LINK_REPORT, pretty(&repo.link_report))?;
    write_file(path, MANIFEST, pretty(&repo.manifest()))?;
    Ok(())
}

pub fn load_repository(path: &Path) -> Result<Repository, RepositoryError> {
    let manifest: Manifest = serde_json::from_str(&read_file(path, MANIFEST)?)
        .map_err(|e| corrupt(MANIFEST, e))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(RepositoryError::VersionMismatch {
            found: manifest.format_version,
        });
    }

    let records = read_file(path, RECORDS)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| parse_curriculum(line.as_bytes(), DocumentFormat::JsonlRow))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| corrupt(RECORDS, e))?;
    let corpus = Corpus::new(records).map_err(|e| corrupt(RECORDS, e))?;
    let edges: Vec<SupervisionEdge> = read_jsonl(path, EDGES)?;
    let removed: Vec<RemovedEdge> = read_jsonl(path, REMOVED_EDGES)?;
    let link_report: LinkReport = serde_json::from_str(&read_file(path, LINK_REPORT)?)
        .map_err(|e| corrupt(LINK_REPORT, e))?;

    let counts = &manifest.counts;
    if (counts.records, counts.edges, counts.removed_edges)
        != (corpus.len(), edges.len(), removed.len())
    {
        return Err(RepositoryError::CorruptRepository(format!(
            "manifest counts {counts:?} do not match file contents"
        )));
    }

    let (graph, cycles) = build_graph(&corpus, &edges).map_err(|e| corrupt(EDGES, e))?;
    if !cycles.is_empty() {
        return Err(RepositoryError::CorruptRepository(format!(
            "{EDGES} contains a cycle"
        )));
    }
    let claims = crate::linkage::extract_all_claims(&corpus);
    Ok(Repository {
        corpus,
        graph,
        claims,
        link_report,
        cycle_report: CycleReport { removed },
    })
}

fn corrupt(file: &str, err: impl std::fmt::Display) -> RepositoryError {
    RepositoryError::CorruptRepository(format!("{file}: {err}"))
}

fn lines(rows: Vec<String>) -> String {
    rows.into_iter().map(|r| r + "\n").collect()
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    lines(
        items
            .iter()
            .map(|i| serde_json::to_string(i).expect("serializable"))
            .collect(),
    )
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn write_file(dir: &Path, name: &str, contents: String) -> Result<(), RepositoryError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| RepositoryError::Io { path, source })
}

fn read_file(dir: &Path, name: &str) -> Result<String, RepositoryError> {
    let path = dir.join(name);
    match fs::read_to_string(&path) {
        Ok(s) => Ok(s),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Err(RepositoryError::CorruptRepository(
            format!("missing {name} in {}", dir.display()),
        )),
        Err(source) => Err(RepositoryError::Io { path, source }),
    }
}

fn read_jsonl<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Vec<T>, RepositoryError> {
    read_file(dir, name)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| corrupt(name, e)))
        .collect()
}
