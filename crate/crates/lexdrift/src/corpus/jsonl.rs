//! JSONL corpus ingestion: one document object per line.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read, Write};

use serde::Deserialize;

use super::{Corpus, CorpusError, Document, Kind, Track};

#[derive(Deserialize)]
struct RawDocument {
    id: Option<String>,
    venue: Option<String>,
    year: Option<i32>,
    track: Option<String>,
    kind: Option<String>,
    text: Option<String>,
}

/// Reads a corpus from JSONL, one document object per line. Blank lines are
/// skipped. Errors carry the 1-based line number of the offending record;
/// a duplicate id aborts ingestion rather than silently overwriting.
pub fn ingest_jsonl<R: Read>(reader: R, label: &str) -> Result<Corpus, CorpusError> {
    let reader = BufReader::new(reader);
    let mut documents = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawDocument =
            serde_json::from_str(&line).map_err(|e| CorpusError::MalformedLine {
                line: line_no,
                message: format!("invalid JSON: {e}"),
            })?;
        let doc = raw_to_document(raw, line_no)?;
        if !seen.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId {
                id: doc.id,
                line: line_no,
            });
        }
        documents.push(doc);
    }

    Corpus::new(label, documents)
}

fn raw_to_document(raw: RawDocument, line: usize) -> Result<Document, CorpusError> {
    let missing = |field: &str| CorpusError::MalformedLine {
        line,
        message: format!("missing field {field}"),
    };
    let id = raw.id.ok_or_else(|| missing("id"))?;
    let venue = raw.venue.ok_or_else(|| missing("venue"))?;
    let year = raw.year.ok_or_else(|| missing("year"))?;
    let track = raw.track.ok_or_else(|| missing("track"))?;
    let kind = raw.kind.ok_or_else(|| missing("kind"))?;
    let text = raw.text.ok_or_else(|| missing("text"))?;

    let track: Track = track.parse().map_err(|e| CorpusError::MalformedLine {
        line,
        message: e,
    })?;
    let kind: Kind = kind.parse().map_err(|e| CorpusError::MalformedLine {
        line,
        message: e,
    })?;

    if id.is_empty() {
        return Err(CorpusError::MalformedLine {
            line,
            message: "empty id".to_string(),
        });
    }
    if !(1900..=2100).contains(&year) {
        return Err(CorpusError::MalformedLine {
            line,
            message: format!("year {year} outside supported range 1900..=2100"),
        });
    }

    Ok(Document {
        id,
        venue,
        year,
        track,
        kind,
        text,
    })
}

/// Writes a corpus as JSONL in document order. `ingest_jsonl` on the output
/// reproduces the corpus exactly.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> Result<(), CorpusError> {
    for doc in corpus.documents() {
        serde_json::to_writer(&mut writer, doc).map_err(std::io::Error::other)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
