//! Curriculum ingestion: parsing XML and JSON-lines documents into
//! [`ResearcherRecord`]s, name normalization and corpus loading.

mod corpus;
mod jsonl;
mod name;
mod xml;

use std::fmt;
use std::str::FromStr;

use chrono::Datelike;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use corpus::{load_corpus, Corpus, CorpusError, LoadFailure, LoadReport};
pub use jsonl::to_jsonl_row;
pub use name::{fold_text, normalize_name, NameError, NormalizedName};
pub use xml::to_xml;

/// Earliest accepted degree or supervision year.
pub const MIN_YEAR: i32 = 1900;

/// Latest accepted year: the current calendar year plus one.
pub fn max_year() -> i32 {
    chrono::Utc::now().year() + 1
}

/// Level of a supervision (and therefore of a supervision edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Level {
    Msc,
    Phd,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Msc => "MSC",
            Level::Phd => "PHD",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "MSC" => Ok(Level::Msc),
            "PHD" => Ok(Level::Phd),
            other => Err(format!("unknown supervision level {other:?}")),
        }
    }
}

/// Level of an academic degree. `Other` degrees (e.g. undergraduate) never
/// produce supervision claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DegreeLevel {
    Msc,
    Phd,
    Other,
}

impl DegreeLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            DegreeLevel::Msc => "MSC",
            DegreeLevel::Phd => "PHD",
            DegreeLevel::Other => "OTHER",
        }
    }

    /// The supervision level this degree implies, if any.
    pub fn supervision_level(self) -> Option<Level> {
        match self {
            DegreeLevel::Msc => Some(Level::Msc),
            DegreeLevel::Phd => Some(Level::Phd),
            DegreeLevel::Other => None,
        }
    }
}

impl FromStr for DegreeLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "MSC" => Ok(DegreeLevel::Msc),
            "PHD" => Ok(DegreeLevel::Phd),
            "OTHER" => Ok(DegreeLevel::Other),
            other => Err(format!("unknown degree level {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub level: DegreeLevel,
    pub year: i32,
    #[serde(rename = "thesis", default, skip_serializing_if = "Option::is_none")]
    pub thesis_title: Option<String>,
    /// Raw supervisor name; empty when the curriculum names nobody.
    #[serde(rename = "supervisor", default)]
    pub supervisor_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub institution: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub areas: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupervisionEntry {
    pub level: Level,
    pub year: i32,
    #[serde(rename = "supervisee")]
    pub supervisee_name: String,
}

/// One parsed curriculum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherRecord {
    pub id: String,
    #[serde(rename = "name")]
    pub full_name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub citation_names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub institution: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub areas: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeEntry>,
    #[serde(rename = "supervisions", default, skip_serializing_if = "Vec::is_empty")]
    pub supervisions_given: Vec<SupervisionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resume: Option<String>,
}

impl ResearcherRecord {
    /// A record carrying only identity, with every list empty.
    pub fn new(id: impl Into<String>, full_name: impl Into<String>) -> Self {
        ResearcherRecord {
            id: id.into(),
            full_name: full_name.into(),
            citation_names: Vec::new(),
            institution: None,
            areas: Vec::new(),
            degrees: Vec::new(),
            supervisions_given: Vec::new(),
            resume: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentFormat {
    Xml,
    JsonlRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("missing required field `{0}`")]
    MissingRequiredField(String),
    #[error("invalid year {value:?} in `{field}`")]
    InvalidYear { field: String, value: String },
}

/// Parse one curriculum document.
pub fn parse_curriculum(
    document: &[u8],
    format: DocumentFormat,
) -> Result<ResearcherRecord, ParseError> {
    match format {
        DocumentFormat::Xml => xml::parse(document),
        DocumentFormat::JsonlRow => jsonl::parse_row(document),
    }
}

// Helpers shared by both format parsers.

fn trimmed(value: Option<&str>) -> Option<String> {
    value.map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned)
}

fn required(value: Option<&str>, field: &str) -> Result<String, ParseError> {
    trimmed(value).ok_or_else(|| ParseError::MissingRequiredField(field.to_owned()))
}

fn split_citation_names(raw: &str) -> Vec<String> {
    raw.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

fn parse_year(raw: &str, field: &str) -> Result<i32, ParseError> {
    let invalid = || ParseError::InvalidYear {
        field: field.to_owned(),
        value: raw.to_owned(),
    };
    let year: i32 = raw.trim().parse().map_err(|_| invalid())?;
    if (MIN_YEAR..=max_year()).contains(&year) {
        Ok(year)
    } else {
        Err(invalid())
    }
}

fn parse_level<T: FromStr<Err = String>>(raw: Option<&str>, field: &str) -> Result<T, ParseError> {
    let raw = required(raw, field)?;
    raw.to_ascii_uppercase()
        .parse()
        .map_err(ParseError::MalformedDocument)
}
