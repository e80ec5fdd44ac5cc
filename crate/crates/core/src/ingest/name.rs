//! Deterministic name normalization used as the matching key for linkage
//! and search.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("name {raw:?} is empty after normalization")]
    EmptyName { raw: String },
}

/// A researcher name reduced to its canonical matching form: uppercase,
/// no diacritics, no periods, single-spaced, given names first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NormalizedName(String);

impl NormalizedName {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for NormalizedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Normalize a raw name.
///
/// Steps, in order: uppercase, canonical decomposition with combining marks
/// removed, periods dropped, `LAST, FIRST` reordered to `FIRST LAST` when the
/// name holds exactly one comma, whitespace runs collapsed to one space.
pub fn normalize_name(raw: &str) -> Result<NormalizedName, NameError> {
    let folded = fold(raw);
    let reordered = match folded.matches(',').count() {
        1 => {
            let (last, first) = folded.split_once(',').expect("one comma");
            format!("{first} {last}")
        }
        _ => folded,
    };
    let canonical = collapse_whitespace(&reordered);
    if canonical.is_empty() {
        return Err(NameError::EmptyName { raw: raw.to_owned() });
    }
    Ok(NormalizedName(canonical))
}

/// Case- and diacritic-insensitive folding without any reordering. Used for
/// free-text filters (institution, area) and search fragments.
pub fn fold_text(raw: &str) -> String {
    collapse_whitespace(&fold(raw))
}

fn fold(raw: &str) -> String {
    // Uppercasing can itself produce combining marks (e.g. U+01F0), so it
    // runs before decomposition.
    let upper: String = raw.chars().flat_map(char::to_uppercase).collect();
    upper
        .nfd()
        .filter(|c| !is_combining_mark(*c) && *c != '.')
        .flat_map(char::to_uppercase)
        .collect()
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
