//! Request fan-out against the chat-completion endpoint.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde_json::json;

use super::cache::{self, CacheEntry, CachedResponse};
use super::{SimError, SimulationConfig, SeedMode, API_KEY_ENV};
use crate::corpus::Corpus;

struct Job {
    index: usize,
    id: String,
    key: String,
    body: serde_json::Value,
}

enum Outcome {
    Revised(String),
    Failed(String),
    Auth(u16),
}

/// Runs the simulation for every document, returning one outcome per
/// document in corpus order: the revised text, or the failure reason.
pub fn run(corpus: &Corpus, config: &SimulationConfig) -> Result<Vec<Result<String, String>>, SimError> {
    let mut outcomes: Vec<Option<Result<String, String>>> = vec![None; corpus.len()];
    let mut pending: VecDeque<Job> = VecDeque::new();

    for (index, doc) in corpus.documents().iter().enumerate() {
        let seed = match config.seed_mode {
            SeedMode::DocumentIndex => index as u64,
            SeedMode::Fixed(s) => s,
        };
        let key = cache::request_key(&config.model_name, &config.prompt, seed, &doc.text);
        if let Some(entry) = cache::load(&config.cache_dir, &key)? {
            outcomes[index] = Some(Ok(entry.response.content));
            continue;
        }
        if config.cached_only {
            return Err(SimError::CacheMiss { id: doc.id.clone() });
        }
        let body = json!({
            "model": config.model_name,
            "messages": [{
                "role": "user",
                "content": format!("{}\n\n{}", config.prompt, doc.text),
            }],
            "temperature": config.temperature,
            "top_p": config.top_p,
            "seed": seed,
        });
        pending.push_back(Job {
            index,
            id: doc.id.clone(),
            key,
            body,
        });
    }

    if !pending.is_empty() {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .no_proxy()
            .build()
            .map_err(|e| SimError::Io(std::io::Error::other(e)))?;
        let api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());

        let workers = config.concurrency_limit.min(pending.len());
        let queue = Mutex::new(pending);
        let results: Mutex<Vec<(usize, Outcome)>> = Mutex::new(Vec::new());
        let abort = AtomicBool::new(false);

        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    if abort.load(Ordering::SeqCst) {
                        return;
                    }
                    let job = match queue.lock().unwrap().pop_front() {
                        Some(job) => job,
                        None => return,
                    };
                    let outcome = request_with_retries(&client, config, api_key.as_deref(), &job);
                    if matches!(outcome, Outcome::Auth(_)) {
                        abort.store(true, Ordering::SeqCst);
                    }
                    results.lock().unwrap().push((job.index, outcome));
                });
            }
        });

        for (index, outcome) in results.into_inner().unwrap() {
            match outcome {
                Outcome::Revised(text) => outcomes[index] = Some(Ok(text)),
                Outcome::Failed(reason) => outcomes[index] = Some(Err(reason)),
                Outcome::Auth(status) => return Err(SimError::Auth { status }),
            }
        }
    }

    // Every slot is filled unless a worker aborted mid-queue, and the auth
    // path above already returned.
    Ok(outcomes
        .into_iter()
        .map(|o| o.expect("every document has an outcome"))
        .collect())
}

fn request_with_retries(
    client: &reqwest::blocking::Client,
    config: &SimulationConfig,
    api_key: Option<&str>,
    job: &Job,
) -> Outcome {
    let mut last_reason = String::new();
    for attempt in 1..=config.max_attempts {
        if attempt > 1 {
            let exp = (attempt - 2).min(12);
            let delay = config.retry_base_ms.saturating_mul(1 << exp).min(10_000);
            std::thread::sleep(Duration::from_millis(delay));
        }

        let mut request = client.post(&config.endpoint_url).json(&job.body);
        if let Some(key) = api_key {
            request = request.bearer_auth(key);
        }
        let response = match request.send() {
            Ok(r) => r,
            Err(e) => {
                last_reason = format!("transport error: {e}");
                continue;
            }
        };

        let status = response.status();
        if status.as_u16() == 401 || status.as_u16() == 403 {
            return Outcome::Auth(status.as_u16());
        }
        if status.as_u16() == 429 || status.is_server_error() {
            last_reason = format!("HTTP {}", status.as_u16());
            continue;
        }
        if !status.is_success() {
            return Outcome::Failed(format!("HTTP {} (document '{}')", status.as_u16(), job.id));
        }

        let body: serde_json::Value = match response.json() {
            Ok(v) => v,
            Err(e) => return Outcome::Failed(format!("malformed response body: {e}")),
        };
        let content = body
            .pointer("/choices/0/message/content")
            .and_then(|v| v.as_str());
        let Some(content) = content else {
            return Outcome::Failed("malformed response body: no message content".to_string());
        };
        if content.trim().is_empty() {
            return Outcome::Failed("empty response".to_string());
        }

        let entry = CacheEntry {
            request: job.body.clone(),
            response: CachedResponse {
                content: content.to_string(),
            },
        };
        if let Err(e) = cache::store(&config.cache_dir, &job.key, &entry) {
            return Outcome::Failed(format!("cache write failed: {e}"));
        }
        return Outcome::Revised(content.to_string());
    }
    Outcome::Failed(format!(
        "{last_reason} after {} attempts",
        config.max_attempts
    ))
}
