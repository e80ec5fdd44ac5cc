//! Researcher search over a built repository.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeIndex;
use crate::ingest::{fold_text, normalize_name};
use crate::repository::Repository;

pub const MIN_QUERY_CHARS: usize = 2;
pub const MAX_PAGE_SIZE: usize = 100;
pub const DEFAULT_PAGE_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("name query must have at least {MIN_QUERY_CHARS} characters")]
    QueryTooShort,
    #[error("bad pagination: {0}")]
    BadPagination(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub name: String,
    pub institution: Option<String>,
    pub area: Option<String>,
    pub page: usize,
    pub page_size: usize,
}

impl SearchQuery {
    pub fn new(name: impl Into<String>) -> Self {
        SearchQuery {
            name: name.into(),
            institution: None,
            area: None,
            page: 1,
            page_size: DEFAULT_PAGE_SIZE,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.name.trim().chars().count() < MIN_QUERY_CHARS || fold_text(&self.name).is_empty() {
            return Err(SearchError::QueryTooShort);
        }
        if self.page == 0 {
            return Err(SearchError::BadPagination("page starts at 1".into()));
        }
        if self.page_size == 0 || self.page_size > MAX_PAGE_SIZE {
            return Err(SearchError::BadPagination(format!(
                "page_size must be between 1 and {MAX_PAGE_SIZE}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub id: String,
    pub name: String,
    pub institution: Option<String>,
    pub width: usize,
    pub descendancy: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub total_matches: usize,
    pub page: usize,
    pub page_size: usize,
    pub items: Vec<SearchHit>,
}

struct Entry {
    ix: NodeIndex,
    name_keys: Vec<String>,
    institution: Option<String>,
    areas: Vec<String>,
    hit: SearchHit,
}

/// Precomputed match keys and ranking values for every researcher.
pub struct SearchIndex {
    // Sorted by descendancy descending, then name, then id.
    entries: Vec<Entry>,
}

impl SearchIndex {
    pub fn new(repo: &Repository) -> Self {
        let graph = &repo.graph;
        let mut entries: Vec<Entry> = repo
            .corpus
            .iter()
            .map(|record| {
                let ix = graph.index_of(&record.id).expect("graph holds every record");
                let mut name_keys = Vec::new();
                for name in std::iter::once(&record.full_name).chain(&record.citation_names) {
                    if let Ok(n) = normalize_name(name) {
                        name_keys.push(n.into_string());
                    }
                    name_keys.push(fold_text(name));
                }
                name_keys.sort();
                name_keys.dedup();
                let areas = record
                    .areas
                    .iter()
                    .chain(record.degrees.iter().flat_map(|d| &d.areas))
                    .map(|a| fold_text(a))
                    .collect();
                Entry {
                    ix,
                    name_keys,
                    institution: record.institution.as_deref().map(fold_text),
                    areas,
                    hit: SearchHit {
                        id: record.id.clone(),
                        name: record.full_name.clone(),
                        institution: record.institution.clone(),
                        width: graph.children(ix).len(),
                        descendancy: graph.descendant_indices(ix).len(),
                    },
                }
            })
            .collect();
        entries.sort_by(|a, b| {
            b.hit
                .descendancy
                .cmp(&a.hit.descendancy)
                .then_with(|| a.hit.name.cmp(&b.hit.name))
                .then_with(|| a.hit.id.cmp(&b.hit.id))
        });
        SearchIndex { entries }
    }

    /// Case- and diacritic-insensitive substring search on names; the
    /// institution and area filters must both hold when given.
    pub fn search(&self, query: &SearchQuery) -> Result<SearchResult, SearchError> {
        let matched = self.matching(query)?;
        let start = (query.page - 1).saturating_mul(query.page_size);
        let items = matched
            .iter()
            .skip(start)
            .take(query.page_size)
            .map(|e| e.hit.clone())
            .collect();
        Ok(SearchResult {
            total_matches: matched.len(),
            page: query.page,
            page_size: query.page_size,
            items,
        })
    }

    /// Graph indices of every match, in ranking order, ignoring pagination.
    pub fn matching_indices(&self, query: &SearchQuery) -> Result<Vec<NodeIndex>, SearchError> {
        Ok(self.matching(query)?.iter().map(|e| e.ix).collect())
    }

    fn matching(&self, query: &SearchQuery) -> Result<Vec<&Entry>, SearchError> {
        query.validate()?;
        let mut fragments = vec![fold_text(&query.name)];
        if let Ok(n) = normalize_name(&query.name) {
            fragments.push(n.into_string());
        }
        let institution = query.institution.as_deref().map(fold_text).filter(|s| !s.is_empty());
        let area = query.area.as_deref().map(fold_text).filter(|s| !s.is_empty());

        Ok(self
            .entries
            .iter()
            .filter(|e| {
                fragments
                    .iter()
                    .any(|f| e.name_keys.iter().any(|k| k.contains(f.as_str())))
            })
            .filter(|e| match &institution {
                None => true,
                Some(want) => e.institution.as_deref().is_some_and(|i| i.contains(want.as_str())),
            })
            .filter(|e| match &area {
                None => true,
                Some(want) => e.areas.iter().any(|a| a.contains(want.as_str())),
            })
            .collect())
    }
}
