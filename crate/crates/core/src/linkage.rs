//! Resolution of supervision claims into supervisor → supervisee edges.
//!
//! Every curriculum contributes claims from two directions: the supervisions
//! a researcher declares having given, and the supervisor named in each of
//! their own MSc/PhD degrees. A claim resolves only when its counterpart
//! name maps to exactly one researcher; everything else lands in the
//! [`LinkReport`]. Edges declared from both sides are merged.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::{normalize_name, Corpus, Level, NormalizedName, ResearcherRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Direction {
    /// Asserted by the supervisor's own curriculum.
    SupervisorDeclared,
    /// Asserted by the supervisee's degree record.
    SuperviseeDeclared,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SupervisionClaim {
    pub declaring_record_id: String,
    pub counterpart_name: NormalizedName,
    pub direction: Direction,
    pub level: Level,
    pub year: i32,
}

/// The identity of an edge after merging: one edge per triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub supervisor_id: String,
    pub supervisee_id: String,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupervisionEdge {
    pub supervisor_id: String,
    pub supervisee_id: String,
    pub level: Level,
    pub year: i32,
    pub provenance: BTreeSet<Direction>,
}

impl SupervisionEdge {
    pub fn new(
        supervisor_id: impl Into<String>,
        supervisee_id: impl Into<String>,
        level: Level,
        year: i32,
        direction: Direction,
    ) -> Self {
        SupervisionEdge {
            supervisor_id: supervisor_id.into(),
            supervisee_id: supervisee_id.into(),
            level,
            year,
            provenance: BTreeSet::from([direction]),
        }
    }

    pub fn key(&self) -> EdgeKey {
        EdgeKey {
            supervisor_id: self.supervisor_id.clone(),
            supervisee_id: self.supervisee_id.clone(),
            level: self.level,
        }
    }

    fn sort_key(&self) -> (&str, &str, Level, i32, &BTreeSet<Direction>) {
        (
            &self.supervisor_id,
            &self.supervisee_id,
            self.level,
            self.year,
            &self.provenance,
        )
    }
}

/// Sort edges into the canonical `(supervisor, supervisee, level)` order.
pub fn sort_edges(edges: &mut [SupervisionEdge]) {
    edges.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Normalized name → ids of every researcher carrying that name, either as
/// full name or as a citation variant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameIndex {
    entries: BTreeMap<NormalizedName, Vec<String>>,
}

impl NameIndex {
    pub fn candidates(&self, name: &NormalizedName) -> &[String] {
        self.entries.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NormalizedName, &[String])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

pub fn build_name_index(corpus: &Corpus) -> NameIndex {
    let mut entries: BTreeMap<NormalizedName, Vec<String>> = BTreeMap::new();
    for record in corpus {
        let names = std::iter::once(&record.full_name).chain(&record.citation_names);
        for name in names {
            if let Ok(key) = normalize_name(name) {
                entries.entry(key).or_default().push(record.id.clone());
            }
        }
    }
    for ids in entries.values_mut() {
        ids.sort();
        ids.dedup();
    }
    NameIndex { entries }
}

/// All claims a single curriculum makes. Names that normalize to nothing
/// cannot be matched and produce no claim.
pub fn extract_claims(record: &ResearcherRecord) -> Vec<SupervisionClaim> {
    let from_degrees = record.degrees.iter().filter_map(|degree| {
        let level = degree.level.supervision_level()?;
        let counterpart_name = normalize_name(&degree.supervisor_name).ok()?;
        Some(SupervisionClaim {
            declaring_record_id: record.id.clone(),
            counterpart_name,
            direction: Direction::SuperviseeDeclared,
            level,
            year: degree.year,
        })
    });
    let from_supervisions = record.supervisions_given.iter().filter_map(|supervision| {
        let counterpart_name = normalize_name(&supervision.supervisee_name).ok()?;
        Some(SupervisionClaim {
            declaring_record_id: record.id.clone(),
            counterpart_name,
            direction: Direction::SupervisorDeclared,
            level: supervision.level,
            year: supervision.year,
        })
    });
    from_degrees.chain(from_supervisions).collect()
}

/// Claims of every record in the corpus, in canonical order.
pub fn extract_all_claims(corpus: &Corpus) -> Vec<SupervisionClaim> {
    let mut claims: Vec<_> = corpus.iter().flat_map(extract_claims).collect();
    claims.sort();
    claims
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousClaim {
    pub claim: SupervisionClaim,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnmatchedReason {
    NoCandidate,
    SelfReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnmatchedClaim {
    pub claim: SupervisionClaim,
    pub reason: UnmatchedReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearConflict {
    #[serde(flatten)]
    pub key: EdgeKey,
    pub supervisor_declared_years: Vec<i32>,
    pub supervisee_declared_years: Vec<i32>,
    pub resolved_year: i32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkReport {
    pub total_claims: usize,
    pub resolved_count: usize,
    pub ambiguous_claims: Vec<AmbiguousClaim>,
    pub unmatched_claims: Vec<UnmatchedClaim>,
    pub year_conflicts: Vec<YearConflict>,
}

impl LinkReport {
    pub fn ambiguous_count(&self) -> usize {
        self.ambiguous_claims.len()
    }

    pub fn unmatched_count(&self) -> usize {
        self.unmatched_claims.len()
    }
}

/// Resolve claims against the name index and merge the resulting edges.
///
/// Edge orientation follows the claim direction; a claim that would point a
/// researcher at themself is unmatched. Output edges are merged and sorted
/// by `(supervisor_id, supervisee_id, level)`.
pub fn resolve_claims(
    claims: &[SupervisionClaim],
    index: &NameIndex,
    corpus: &Corpus,
) -> (Vec<SupervisionEdge>, LinkReport) {
    let mut report = LinkReport {
        total_claims: claims.len(),
        ..LinkReport::default()
    };
    let mut edges = Vec::new();

    for claim in claims {
        let candidates = index.candidates(&claim.counterpart_name);
        match candidates {
            [] => report.unmatched_claims.push(UnmatchedClaim {
                claim: claim.clone(),
                reason: UnmatchedReason::NoCandidate,
            }),
            [counterpart] if *counterpart == claim.declaring_record_id => {
                report.unmatched_claims.push(UnmatchedClaim {
                    claim: claim.clone(),
                    reason: UnmatchedReason::SelfReference,
                })
            }
            [counterpart] => {
                debug_assert!(corpus.contains(counterpart));
                let declaring = claim.declaring_record_id.clone();
                let (supervisor, supervisee) = match claim.direction {
                    Direction::SupervisorDeclared => (declaring, counterpart.clone()),
                    Direction::SuperviseeDeclared => (counterpart.clone(), declaring),
                };
                report.resolved_count += 1;
                edges.push(SupervisionEdge::new(
                    supervisor,
                    supervisee,
                    claim.level,
                    claim.year,
                    claim.direction,
                ));
            }
            many => report.ambiguous_claims.push(AmbiguousClaim {
                claim: claim.clone(),
                candidates: many.to_vec(),
            }),
        }
    }

    report
        .ambiguous_claims
        .sort_by(|a, b| a.claim.cmp(&b.claim));
    report
        .unmatched_claims
        .sort_by(|a, b| a.claim.cmp(&b.claim));

    let (merged, conflicts) = merge_edges(edges);
    report.year_conflicts = conflicts;
    (merged, report)
}

/// Merge edges sharing `(supervisor_id, supervisee_id, level)`.
///
/// Provenance sets are unioned. When the years disagree, the earliest year
/// carried by a supervisee-declared edge wins (falling back to the earliest
/// year overall) and the disagreement is reported.
pub fn merge_edges(edges: Vec<SupervisionEdge>) -> (Vec<SupervisionEdge>, Vec<YearConflict>) {
    let mut groups: BTreeMap<EdgeKey, Vec<SupervisionEdge>> = BTreeMap::new();
    for edge in edges {
        groups.entry(edge.key()).or_default().push(edge);
    }

    let mut merged = Vec::with_capacity(groups.len());
    let mut conflicts = Vec::new();
    for (key, group) in groups {
        let mut supervisee_years = BTreeSet::new();
        let mut supervisor_years = BTreeSet::new();
        let mut provenance = BTreeSet::new();
        for edge in &group {
            if edge.provenance.contains(&Direction::SuperviseeDeclared) {
                supervisee_years.insert(edge.year);
            } else {
                supervisor_years.insert(edge.year);
            }
            provenance.extend(edge.provenance.iter().copied());
        }
        let year = supervisee_years
            .first()
            .or_else(|| supervisor_years.first())
            .copied()
            .expect("group is non-empty");
        let distinct: BTreeSet<i32> = supervisee_years.union(&supervisor_years).copied().collect();
        if distinct.len() > 1 {
            conflicts.push(YearConflict {
                key: key.clone(),
                supervisor_declared_years: supervisor_years.into_iter().collect(),
                supervisee_declared_years: supervisee_years.into_iter().collect(),
                resolved_year: year,
            });
        }
        merged.push(SupervisionEdge {
            supervisor_id: key.supervisor_id,
            supervisee_id: key.supervisee_id,
            level: key.level,
            year,
            provenance,
        });
    }
    (merged, conflicts)
}

/// Run the whole linkage stage over a corpus.
pub fn link_corpus(corpus: &Corpus) -> (Vec<SupervisionClaim>, Vec<SupervisionEdge>, LinkReport) {
    let index = build_name_index(corpus);
    let claims = extract_all_claims(corpus);
    let (edges, report) = resolve_claims(&claims, &index, corpus);
    (claims, edges, report)
}
