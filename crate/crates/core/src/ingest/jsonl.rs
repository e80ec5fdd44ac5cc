use serde::Deserialize;
use serde_json::Value;

use super::{
    parse_level, parse_year, required, split_citation_names, trimmed, DegreeEntry, ParseError,
    ResearcherRecord, SupervisionEntry,
};

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    name: Option<String>,
    #[serde(default)]
    citation_names: Option<CitationNames>,
    institution: Option<String>,
    #[serde(default)]
    areas: Vec<String>,
    #[serde(default)]
    degrees: Vec<RawDegree>,
    #[serde(default)]
    supervisions: Vec<RawSupervision>,
    resume: Option<String>,
}

/// Either a list of variants or a single `;`-separated string, as in XML.
#[derive(Deserialize)]
#[serde(untagged)]
enum CitationNames {
    List(Vec<String>),
    Joined(String),
}

#[derive(Deserialize)]
struct RawDegree {
    level: Option<String>,
    year: Option<Value>,
    thesis: Option<String>,
    supervisor: Option<String>,
    institution: Option<String>,
    #[serde(default)]
    areas: Vec<String>,
}

#[derive(Deserialize)]
struct RawSupervision {
    level: Option<String>,
    year: Option<Value>,
    supervisee: Option<String>,
}

pub(super) fn parse_row(document: &[u8]) -> Result<ResearcherRecord, ParseError> {
    let raw: RawRecord = serde_json::from_slice(document)
        .map_err(|e| ParseError::MalformedDocument(e.to_string()))?;

    let citation_names = match raw.citation_names {
        None => Vec::new(),
        Some(CitationNames::Joined(s)) => split_citation_names(&s),
        Some(CitationNames::List(list)) => list
            .iter()
            .filter_map(|s| trimmed(Some(s)))
            .collect(),
    };

    let degrees = raw
        .degrees
        .into_iter()
        .map(|d| {
            Ok(DegreeEntry {
                level: parse_level(d.level.as_deref(), "degree/level")?,
                year: json_year(d.year, "degree/year")?,
                thesis_title: trimmed(d.thesis.as_deref()),
                supervisor_name: trimmed(d.supervisor.as_deref()).unwrap_or_default(),
                institution: trimmed(d.institution.as_deref()),
                areas: trim_list(&d.areas),
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;

    let supervisions_given = raw
        .supervisions
        .into_iter()
        .map(|s| {
            Ok(SupervisionEntry {
                level: parse_level(s.level.as_deref(), "supervision/level")?,
                year: json_year(s.year, "supervision/year")?,
                supervisee_name: required(s.supervisee.as_deref(), "supervision/supervisee")?,
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;

    Ok(ResearcherRecord {
        id: required(raw.id.as_deref(), "id")?,
        full_name: required(raw.name.as_deref(), "name")?,
        citation_names,
        institution: trimmed(raw.institution.as_deref()),
        areas: trim_list(&raw.areas),
        degrees,
        supervisions_given,
        resume: trimmed(raw.resume.as_deref()),
    })
}

fn trim_list(items: &[String]) -> Vec<String> {
    items.iter().filter_map(|s| trimmed(Some(s))).collect()
}

fn json_year(value: Option<Value>, field: &str) -> Result<i32, ParseError> {
    match value {
        None | Some(Value::Null) => Err(ParseError::MissingRequiredField(field.to_owned())),
        Some(Value::String(s)) => parse_year(&s, field),
        Some(Value::Number(n)) if n.is_i64() || n.is_u64() => parse_year(&n.to_string(), field),
        Some(other) => Err(ParseError::InvalidYear {
            field: field.to_owned(),
            value: other.to_string(),
        }),
    }
}

/// Serialize a record as one JSON-lines row (no trailing newline).
pub fn to_jsonl_row(record: &ResearcherRecord) -> String {
    serde_json::to_string(record).expect("record serialization is infallible")
}
