use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_curriculum, DocumentFormat, ResearcherRecord};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("duplicate researcher id {id:?} in {first} and {second}")]
    DuplicateId {
        id: String,
        first: String,
        second: String,
    },
    #[error("corpus contains no valid curriculum records")]
    EmptyCorpus,
}

/// A validated set of records, sorted by id with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<ResearcherRecord>,
}

impl Corpus {
    /// Build a corpus from in-memory records. Sources are reported by input
    /// position when ids collide.
    pub fn new(records: Vec<ResearcherRecord>) -> Result<Self, CorpusError> {
        let sourced = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| (r, format!("record #{i}")))
            .collect();
        Self::from_sourced(sourced)
    }

    fn from_sourced(mut sourced: Vec<(ResearcherRecord, String)>) -> Result<Self, CorpusError> {
        if sourced.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        sourced.sort_by(|a, b| a.0.id.cmp(&b.0.id).then_with(|| a.1.cmp(&b.1)));
        if let Some(pair) = sourced.windows(2).find(|w| w[0].0.id == w[1].0.id) {
            return Err(CorpusError::DuplicateId {
                id: pair[0].0.id.clone(),
                first: pair[0].1.clone(),
                second: pair[1].1.clone(),
            });
        }
        Ok(Corpus {
            records: sourced.into_iter().map(|(r, _)| r).collect(),
        })
    }

    pub fn records(&self) -> &[ResearcherRecord] {
        &self.records
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ResearcherRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ResearcherRecord> {
        self.records
            .binary_search_by(|r| r.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_some()
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a ResearcherRecord;
    type IntoIter = std::slice::Iter<'a, ResearcherRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadFailure {
    /// File name relative to the corpus root, with `:line` for JSON-lines rows.
    pub source: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub files_read: usize,
    pub records_loaded: usize,
    pub failures: Vec<LoadFailure>,
    /// Files ignored because their extension is neither `.xml` nor `.jsonl`.
    pub skipped: Vec<String>,
}

/// Load every curriculum under `path`.
///
/// `path` may be a directory (each `.xml` file holds one record, each
/// `.jsonl`/`.ndjson` file one record per non-blank line) or a single such
/// file. Per-document parse failures go to the [`LoadReport`]; only a
/// duplicate id or an empty result aborts the load.
pub fn load_corpus(path: &Path) -> Result<(Corpus, LoadReport), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    };
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut files = fs::read_dir(path)
            .map_err(io_err)?
            .map(|entry| entry.map(|e| e.path()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(io_err)?;
        files.retain(|p| p.is_file());
        files.sort();
        files
    } else if path.is_file() {
        vec![path.to_owned()]
    } else {
        return Err(io_err(io::Error::new(
            io::ErrorKind::NotFound,
            "no such file or directory",
        )));
    };

    let mut report = LoadReport::default();
    let mut sourced = Vec::new();
    for file in &files {
        let label = file
            .strip_prefix(path)
            .ok()
            .filter(|p| !p.as_os_str().is_empty())
            .or_else(|| file.file_name().map(Path::new))
            .unwrap_or(file)
            .display()
            .to_string();
        let format = match file.extension().and_then(|e| e.to_str()) {
            Some("xml") => DocumentFormat::Xml,
            Some("jsonl") | Some("ndjson") => DocumentFormat::JsonlRow,
            _ => {
                report.skipped.push(label);
                continue;
            }
        };
        let bytes = match fs::read(file) {
            Ok(bytes) => bytes,
            Err(e) => {
                report.failures.push(LoadFailure {
                    source: label,
                    error: e.to_string(),
                });
                continue;
            }
        };
        report.files_read += 1;
        match format {
            DocumentFormat::Xml => match parse_curriculum(&bytes, format) {
                Ok(record) => sourced.push((record, label)),
                Err(e) => report.failures.push(LoadFailure {
                    source: label,
                    error: e.to_string(),
                }),
            },
            DocumentFormat::JsonlRow => {
                for (n, line) in bytes.split(|b| *b == b'\n').enumerate() {
                    if line.iter().all(u8::is_ascii_whitespace) {
                        continue;
                    }
                    let source = format!("{label}:{}", n + 1);
                    match parse_curriculum(line, format) {
                        Ok(record) => sourced.push((record, source)),
                        Err(e) => report.failures.push(LoadFailure {
                            source,
                            error: e.to_string(),
                        }),
                    }
                }
            }
        }
    }

    for failure in &report.failures {
        log::warn!("skipping {}: {}", failure.source, failure.error);
    }
    report.records_loaded = sourced.len();
    let corpus = Corpus::from_sourced(sourced)?;
    Ok((corpus, report))
}
