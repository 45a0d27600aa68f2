//! Documents, corpora, and the ingestion/cleanup layer.
//!
//! A [`Document`] is one tagged text unit (an abstract or a presentation
//! transcript); a [`Corpus`] is an ordered collection of them with unique
//! ids. Ingestion reads `documents.jsonl` or WebVTT subtitle files and
//! cleanup removes LaTeX markup left over in scraped abstracts.

mod jsonl;
mod latex;
mod vtt;

pub use jsonl::{ingest_jsonl, write_jsonl};
pub use latex::{strip_latex_artifacts, StrippedText};
pub use vtt::parse_vtt;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate document id '{id}' (line {line})")]
    DuplicateId { id: String, line: usize },
    #[error("document id must be nonempty")]
    EmptyId,
    #[error("corpus label must be nonempty")]
    EmptyLabel,
    #[error("year {0} outside supported range 1900..=2100")]
    YearOutOfRange(i32),
    #[error("missing WEBVTT header")]
    MissingVttHeader,
    #[error("cue {cue}: unparseable timing line '{line}'")]
    BadTimingLine { cue: usize, line: String },
    #[error("input is not valid UTF-8: {0}")]
    InvalidUtf8(#[from] std::str::Utf8Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Review outcome of the paper a document belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Oral,
    Spotlight,
    Poster,
    Reject,
    Withdrawn,
    Unknown,
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Track::Oral => "oral",
            Track::Spotlight => "spotlight",
            Track::Poster => "poster",
            Track::Reject => "reject",
            Track::Withdrawn => "withdrawn",
            Track::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Track {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oral" => Ok(Track::Oral),
            "spotlight" => Ok(Track::Spotlight),
            "poster" => Ok(Track::Poster),
            "reject" => Ok(Track::Reject),
            "withdrawn" => Ok(Track::Withdrawn),
            "unknown" => Ok(Track::Unknown),
            other => Err(format!("unknown track '{other}'")),
        }
    }
}

/// Whether the text is a paper abstract or a talk transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Abstract,
    Transcript,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Abstract => "abstract",
            Kind::Transcript => "transcript",
        })
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abstract" => Ok(Kind::Abstract),
            "transcript" => Ok(Kind::Transcript),
            other => Err(format!("unknown kind '{other}'")),
        }
    }
}

/// One tagged text unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub venue: String,
    pub year: i32,
    pub track: Track,
    pub kind: Kind,
    pub text: String,
}

impl Document {
    /// Validates the id and year invariants.
    pub fn new(
        id: impl Into<String>,
        venue: impl Into<String>,
        year: i32,
        track: Track,
        kind: Kind,
        text: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let doc = Document {
            id: id.into(),
            venue: venue.into(),
            year,
            track,
            kind,
            text: text.into(),
        };
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::EmptyId);
        }
        if !(1900..=2100).contains(&self.year) {
            return Err(CorpusError::YearOutOfRange(self.year));
        }
        Ok(())
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    label: String,
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(label: impl Into<String>, documents: Vec<Document>) -> Result<Self, CorpusError> {
        let label = label.into();
        if label.is_empty() {
            return Err(CorpusError::EmptyLabel);
        }
        let mut seen = BTreeSet::new();
        for (i, doc) in documents.iter().enumerate() {
            doc.validate()?;
            if !seen.insert(doc.id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    id: doc.id.clone(),
                    line: i + 1,
                });
            }
        }
        Ok(Corpus { label, documents })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Returns the documents matching every set dimension of `filter`,
    /// order preserved, under a label extended with the filter description.
    pub fn select(&self, filter: &CorpusFilter) -> Corpus {
        let documents = self
            .documents
            .iter()
            .filter(|d| filter.matches(d))
            .cloned()
            .collect();
        let label = if filter.is_empty() {
            self.label.clone()
        } else {
            format!("{}[{}]", self.label, filter)
        };
        // Uniqueness survives filtering, so construction cannot fail.
        Corpus { label, documents }
    }

    /// Keeps only documents whose id is in `ids`, order preserved.
    pub fn retain_ids(&self, ids: &BTreeSet<String>) -> Corpus {
        let documents = self
            .documents
            .iter()
            .filter(|d| ids.contains(&d.id))
            .cloned()
            .collect();
        Corpus {
            label: self.label.clone(),
            documents,
        }
    }
}

/// Conjunction of optional dimension filters; an empty filter selects
/// everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFilter {
    pub venues: Option<BTreeSet<String>>,
    pub years: Option<BTreeSet<i32>>,
    pub tracks: Option<BTreeSet<Track>>,
    pub kinds: Option<BTreeSet<Kind>>,
}

impl CorpusFilter {
    pub fn is_empty(&self) -> bool {
        self.venues.is_none() && self.years.is_none() && self.tracks.is_none() && self.kinds.is_none()
    }

    pub fn matches(&self, doc: &Document) -> bool {
        if let Some(venues) = &self.venues {
            if !venues.contains(&doc.venue) {
                return false;
            }
        }
        if let Some(years) = &self.years {
            if !years.contains(&doc.year) {
                return false;
            }
        }
        if let Some(tracks) = &self.tracks {
            if !tracks.contains(&doc.track) {
                return false;
            }
        }
        if let Some(kinds) = &self.kinds {
            if !kinds.contains(&doc.kind) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for CorpusFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(venues) = &self.venues {
            parts.push(format!(
                "venues={}",
                venues.iter().cloned().collect::<Vec<_>>().join("|")
            ));
        }
        if let Some(years) = &self.years {
            parts.push(format!(
                "years={}",
                years.iter().map(|y| y.to_string()).collect::<Vec<_>>().join("|")
            ));
        }
        if let Some(tracks) = &self.tracks {
            parts.push(format!(
                "tracks={}",
                tracks.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("|")
            ));
        }
        if let Some(kinds) = &self.kinds {
            parts.push(format!(
                "kinds={}",
                kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("|")
            ));
        }
        f.write_str(&parts.join(" "))
    }
}
