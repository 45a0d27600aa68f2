//! Support shared by the behavior and acceptance suites: a local
//! chat-completions stub, synthetic corpora, and binary-driving helpers.

#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lexdrift::EXAMPLE_WORDS;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lexdrift"))
}

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Runs the binary in `dir` with a pinned SOURCE_DATE_EPOCH so manifests
/// are reproducible.
pub fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("spawn lexdrift")
}

pub fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[track_caller]
pub fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout(output),
        stderr(output)
    );
}

// Synthetic corpora: zipf-weighted filler words plus the example words at
// mid-table weights. Letter-only filler names survive the default token
// rules, which strip digits.

pub const FILLERS: usize = 400;
pub const DOCS_PER_YEAR: usize = 150;
pub const TOKENS_PER_DOC: usize = 80;

pub fn filler(i: usize) -> String {
    format!(
        "x{}{}",
        (b'a' + (i / 26) as u8) as char,
        (b'a' + (i % 26) as u8) as char
    )
}

pub fn vocabulary() -> (Vec<String>, Vec<f64>) {
    let mut words: Vec<String> = (0..FILLERS).map(filler).collect();
    let mut weights: Vec<f64> = (0..FILLERS).map(|i| 1.0 / (i + 1) as f64).collect();
    for (k, word) in EXAMPLE_WORDS.iter().enumerate() {
        words.push(word.to_string());
        weights.push(1.0 / (10 + 4 * k) as f64);
    }
    (words, weights)
}

/// One JSONL corpus; `boost` scales the example-word weights.
pub fn synth_corpus(year: i32, seed: u64, boost: f64) -> String {
    let (words, mut weights) = vocabulary();
    for w in &mut weights[FILLERS..] {
        *w *= boost;
    }
    let dist = WeightedIndex::new(&weights).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for d in 0..DOCS_PER_YEAR {
        let text: Vec<&str> = (0..TOKENS_PER_DOC)
            .map(|_| words[dist.sample(&mut rng)].as_str())
            .collect();
        let doc = serde_json::json!({
            "id": format!("y{year}-{d:03}"),
            "venue": "SynthConf",
            "year": year,
            "track": "poster",
            "kind": "abstract",
            "text": text.join(" "),
        });
        out.push_str(&doc.to_string());
        out.push('\n');
    }
    out
}

/// Deterministic revision transform: every 10th token becomes an example
/// word, cycling through the set corpus-wide.
pub fn revised_corpus(original_jsonl: &str) -> String {
    let mut counter = 0usize;
    let mut out = String::new();
    for line in original_jsonl.lines() {
        let mut doc: serde_json::Value = serde_json::from_str(line).unwrap();
        let mut tokens: Vec<String> = doc["text"]
            .as_str()
            .unwrap()
            .split_whitespace()
            .map(str::to_string)
            .collect();
        for i in (9..tokens.len()).step_by(10) {
            tokens[i] = EXAMPLE_WORDS[counter % EXAMPLE_WORDS.len()].to_string();
            counter += 1;
        }
        doc["text"] = serde_json::Value::String(tokens.join(" "));
        out.push_str(&doc.to_string());
        out.push('\n');
    }
    out
}

/// Per-document variant of the transform, usable inside a stub where the
/// corpus-wide arrival order is not deterministic.
pub fn revise_text(text: &str) -> String {
    let mut tokens: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    for (k, i) in (9..tokens.len()).step_by(10).enumerate() {
        tokens[i] = EXAMPLE_WORDS[k % EXAMPLE_WORDS.len()].to_string();
    }
    tokens.join(" ")
}

// Minimal chat-completions stub: one thread, Connection: close per request.

pub struct Stub {
    pub url: String,
    pub hits: Arc<AtomicUsize>,
    pub bodies: Arc<Mutex<Vec<serde_json::Value>>>,
}

impl Stub {
    pub fn bodies(&self) -> Vec<serde_json::Value> {
        self.bodies.lock().unwrap().clone()
    }
}

pub fn spawn_stub<F>(behavior: F) -> Stub
where
    F: Fn(usize, &serde_json::Value) -> (u16, String) + Send + 'static,
{
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let hits = Arc::new(AtomicUsize::new(0));
    let bodies = Arc::new(Mutex::new(Vec::new()));
    let thread_hits = Arc::clone(&hits);
    let thread_bodies = Arc::clone(&bodies);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let Some(body) = read_request(&mut stream) else { continue };
            let ordinal = thread_hits.fetch_add(1, Ordering::SeqCst);
            thread_bodies.lock().unwrap().push(body.clone());
            let (status, payload) = behavior(ordinal, &body);
            let reason = if status == 200 { "OK" } else { "Error" };
            let response = format!(
                "HTTP/1.1 {status} {reason}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{payload}",
                payload.len()
            );
            let _ = stream.write_all(response.as_bytes());
        }
    });
    Stub { url, hits, bodies }
}

fn read_request(stream: &mut std::net::TcpStream) -> Option<serde_json::Value> {
    stream
        .set_read_timeout(Some(std::time::Duration::from_secs(5)))
        .ok()?;
    let mut raw = Vec::new();
    let mut buf = [0u8; 4096];
    let header_end = loop {
        match raw.windows(4).position(|w| w == b"\r\n\r\n") {
            Some(pos) => break pos + 4,
            None => {
                let n = stream.read(&mut buf).ok()?;
                if n == 0 {
                    return None;
                }
                raw.extend_from_slice(&buf[..n]);
            }
        }
    };
    let headers = String::from_utf8_lossy(&raw[..header_end]).into_owned();
    let length: usize = headers
        .lines()
        .find_map(|l| {
            let (name, value) = l.split_once(':')?;
            name.eq_ignore_ascii_case("content-length")
                .then(|| value.trim().parse().ok())?
        })
        .unwrap_or(0);
    while raw.len() < header_end + length {
        let n = stream.read(&mut buf).ok()?;
        if n == 0 {
            return None;
        }
        raw.extend_from_slice(&buf[..n]);
    }
    serde_json::from_slice(&raw[header_end..header_end + length]).ok()
}

pub fn ok_body(content: &str) -> String {
    serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": content}}]
    })
    .to_string()
}

/// The document text carried in a request body, after the prompt.
pub fn request_text(body: &serde_json::Value) -> String {
    body["messages"][0]["content"]
        .as_str()
        .unwrap()
        .split_once("\n\n")
        .unwrap()
        .1
        .to_string()
}
