//! LLM revision of a corpus and per-word frequency change rates.
//!
//! The simulation sends each document to a chat-completion endpoint with a
//! fixed revision prompt and collects the responses as the revised twin
//! corpus. Every response is cached on disk keyed by the request content, so
//! a finished run never touches the network again: with a warm cache the
//! whole module is a pure function of its inputs.

mod cache;
mod client;
mod rates;

pub use rates::{change_rates, ChangeRates};

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Document};

/// Environment variable holding the bearer token for the endpoint.
pub const API_KEY_ENV: &str = "LEXDRIFT_API_KEY";

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("authentication failed (HTTP {status})")]
    Auth { status: u16 },
    #[error("cached-only run but no cache entry for document '{id}'")]
    CacheMiss { id: String },
    #[error("cache entry {path} is corrupt: {message}")]
    CorruptCache { path: String, message: String },
    #[error("line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How the per-request seed is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedMode {
    /// Seed = the document's 0-based position in the input corpus.
    DocumentIndex,
    /// One fixed seed for every document.
    Fixed(u64),
}

/// Endpoint, sampling, and retry parameters for one simulation run.
///
/// The defaults reproduce the reference protocol: model
/// `gpt-3.5-turbo-0125`, prompt "Revise the following sentences",
/// temperature 1, top_p 0.9, seed = document index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub endpoint_url: String,
    pub model_name: String,
    pub prompt: String,
    pub temperature: f64,
    pub top_p: f64,
    pub seed_mode: SeedMode,
    pub max_attempts: u32,
    pub concurrency_limit: usize,
    /// Directory for the response cache, one file per request digest.
    pub cache_dir: PathBuf,
    /// Serve everything from the cache; a miss is an error, and the network
    /// is never touched.
    pub cached_only: bool,
    /// First retry delay; later retries double it.
    pub retry_base_ms: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            endpoint_url: "https://api.openai.com/v1/chat/completions".to_string(),
            model_name: "gpt-3.5-turbo-0125".to_string(),
            prompt: "Revise the following sentences".to_string(),
            temperature: 1.0,
            top_p: 0.9,
            seed_mode: SeedMode::DocumentIndex,
            max_attempts: 3,
            concurrency_limit: 4,
            cache_dir: PathBuf::from("sim_cache"),
            cached_only: false,
            retry_base_ms: 250,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(SimError::InvalidConfig(format!(
                "top_p must be in (0, 1], got {}",
                self.top_p
            )));
        }
        if self.max_attempts < 1 {
            return Err(SimError::InvalidConfig("max_attempts must be >= 1".into()));
        }
        if self.concurrency_limit < 1 {
            return Err(SimError::InvalidConfig(
                "concurrency_limit must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome for one document of a simulation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum DocStatus {
    Ok,
    Failed(String),
}

impl DocStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, DocStatus::Ok)
    }
}

/// A corpus and its LLM-revised twin.
///
/// `revised` holds exactly the documents whose status is ok, in original
/// order; failed documents stay in `original` but have no revised twin.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPair {
    pub original: Corpus,
    pub revised: Corpus,
    /// One (document id, status) per original document, in corpus order.
    pub statuses: Vec<(String, DocStatus)>,
}

impl SimulationPair {
    /// Both corpora restricted to documents that were revised successfully,
    /// so their totals stay comparable when counting frequencies.
    pub fn aligned(&self) -> (Corpus, Corpus) {
        let ok_ids: BTreeSet<String> = self
            .statuses
            .iter()
            .filter(|(_, s)| s.is_ok())
            .map(|(id, _)| id.clone())
            .collect();
        (self.original.retain_ids(&ok_ids), self.revised.clone())
    }

    pub fn failed(&self) -> impl Iterator<Item = (&str, &str)> {
        self.statuses.iter().filter_map(|(id, s)| match s {
            DocStatus::Failed(reason) => Some((id.as_str(), reason.as_str())),
            DocStatus::Ok => None,
        })
    }
}

/// Revises every document of `corpus` through the configured endpoint.
///
/// One request per document, prompt prepended to the text, seed per
/// `config.seed_mode`. Responses are served from the on-disk cache when
/// present. A document that still fails after `max_attempts` is marked
/// failed and the run continues; an authentication failure aborts the whole
/// run.
pub fn revise_corpus(corpus: &Corpus, config: &SimulationConfig) -> Result<SimulationPair, SimError> {
    config.validate()?;
    let outcomes = client::run(corpus, config)?;

    let mut statuses = Vec::with_capacity(corpus.len());
    let mut revised_docs = Vec::new();
    for (doc, outcome) in corpus.documents().iter().zip(outcomes) {
        match outcome {
            Ok(text) => {
                statuses.push((doc.id.clone(), DocStatus::Ok));
                revised_docs.push(Document {
                    text,
                    ..doc.clone()
                });
            }
            Err(reason) => statuses.push((doc.id.clone(), DocStatus::Failed(reason))),
        }
    }

    let revised = Corpus::new(format!("{}-revised", corpus.label()), revised_docs)
        .expect("revised ids are a subset of a valid corpus");
    Ok(SimulationPair {
        original: corpus.clone(),
        revised,
        statuses,
    })
}
