//! WebVTT subtitle extraction.
//!
//! Conference talk subtitles arrive as rolling captions: cue k+1 often
//! repeats cue k's full payload and extends it by a few words. The parser
//! collapses that duplication so the transcript counts each word once.

use super::CorpusError;

/// Extracts transcript text from a WebVTT byte stream.
///
/// Cue payloads are whitespace-normalized and concatenated in order. When a
/// payload begins with the previous cue's payload (at a word boundary), only
/// the new suffix is appended. NOTE, STYLE, and REGION blocks are skipped.
pub fn parse_vtt(source: &[u8]) -> Result<String, CorpusError> {
    let text = std::str::from_utf8(source)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut lines = text.lines();
    match lines.next() {
        Some(first) if is_header(first) => {}
        _ => return Err(CorpusError::MissingVttHeader),
    }

    let mut transcript = String::new();
    let mut prev_payload = String::new();
    let mut cue_index = 0usize;
    let mut lines = lines.peekable();

    while let Some(line) = lines.next() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with("NOTE") || trimmed == "STYLE" || trimmed == "REGION" {
            skip_block(&mut lines);
            continue;
        }

        // A cue is an optional identifier line followed by a timing line.
        let timing_line = if trimmed.contains("-->") {
            trimmed.to_string()
        } else {
            match lines.peek() {
                Some(next) if next.contains("-->") => lines.next().unwrap().trim().to_string(),
                _ => {
                    // Stray non-cue block; not part of any transcript.
                    skip_block(&mut lines);
                    continue;
                }
            }
        };

        cue_index += 1;
        if !timing_line_is_valid(&timing_line) {
            return Err(CorpusError::BadTimingLine {
                cue: cue_index,
                line: timing_line,
            });
        }

        let mut payload_lines = Vec::new();
        for payload in lines.by_ref() {
            if payload.trim().is_empty() {
                break;
            }
            payload_lines.push(payload);
        }
        let payload = normalize_ws(&payload_lines.join(" "));
        if payload.is_empty() {
            continue;
        }

        let addition = match overlap_suffix(&prev_payload, &payload) {
            Some(suffix) => suffix.to_string(),
            None => payload.clone(),
        };
        if !addition.is_empty() {
            if !transcript.is_empty() {
                transcript.push(' ');
            }
            transcript.push_str(&addition);
        }
        prev_payload = payload;
    }

    Ok(transcript)
}

fn is_header(line: &str) -> bool {
    let line = line.trim_end();
    line == "WEBVTT" || line.starts_with("WEBVTT ") || line.starts_with("WEBVTT\t")
}

fn skip_block<'a, I: Iterator<Item = &'a str>>(lines: &mut std::iter::Peekable<I>) {
    for line in lines.by_ref() {
        if line.trim().is_empty() {
            break;
        }
    }
}

/// If `current` begins with `prev` at a word boundary, returns the trimmed
/// remainder (possibly empty for a pure repeat).
fn overlap_suffix<'a>(prev: &str, current: &'a str) -> Option<&'a str> {
    if prev.is_empty() || !current.starts_with(prev) {
        return None;
    }
    let rest = &current[prev.len()..];
    if rest.is_empty() {
        return Some("");
    }
    rest.strip_prefix(' ')
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Timing lines read "HH:MM:SS.mmm --> HH:MM:SS.mmm", optionally followed by
/// cue settings. Hours may be omitted.
fn timing_line_is_valid(line: &str) -> bool {
    let Some((start, rest)) = line.split_once("-->") else {
        return false;
    };
    let end = rest.trim().split_whitespace().next().unwrap_or("");
    timestamp_is_valid(start.trim()) && timestamp_is_valid(end)
}

fn timestamp_is_valid(ts: &str) -> bool {
    let Some((clock, millis)) = ts.rsplit_once('.') else {
        return false;
    };
    if millis.len() != 3 || !millis.bytes().all(|b| b.is_ascii_digit()) {
        return false;
    }
    let parts: Vec<&str> = clock.split(':').collect();
    let (hours, minutes, seconds) = match parts.as_slice() {
        [h, m, s] => (Some(*h), *m, *s),
        [m, s] => (None, *m, *s),
        _ => return false,
    };
    if let Some(h) = hours {
        if h.len() < 2 || !h.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
    }
    let two_digit = |p: &str| p.len() == 2 && p.bytes().all(|b| b.is_ascii_digit());
    if !two_digit(minutes) || !two_digit(seconds) {
        return false;
    }
    minutes.parse::<u8>().unwrap() < 60 && seconds.parse::<u8>().unwrap() < 60
}
