//! Removal of LaTeX markup left behind in scraped abstracts.
//!
//! Only a whitelist is handled: italic/bold wrappers are unwrapped to their
//! inner text and citation commands are deleted outright. Everything else
//! passes through untouched, and structurally broken markup never corrupts
//! the text: the original string comes back with a warning instead.

const UNWRAP: [&str; 3] = ["textit", "emph", "textbf"];
const DELETE: [&str; 3] = ["cite", "citep", "citet"];

/// Result of [`strip_latex_artifacts`]: cleaned text plus any warnings about
/// markup that could not be processed safely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrippedText {
    pub text: String,
    pub warnings: Vec<String>,
}

/// Strips whitelisted LaTeX commands from `text`.
///
/// `\textit{x}`, `\emph{x}`, `\textbf{x}` become `x`; `\cite{...}`,
/// `\citep{...}`, `\citet{...}` are deleted (surrounding whitespace is kept
/// as-is). An unterminated brace group on a handled command returns the
/// input unchanged with a warning.
pub fn strip_latex_artifacts(text: &str) -> StrippedText {
    // A deletion can splice its neighbors into a fresh handled token
    // ("\tex\cite{a}tit{x}" becomes "\textit{x}"), so run to a fixpoint.
    // Each changing pass strictly shrinks the text, which bounds the loop.
    let mut current = text.to_string();
    loop {
        let pass = strip_once(&current);
        if !pass.warnings.is_empty() {
            return StrippedText {
                text: text.to_string(),
                warnings: pass.warnings,
            };
        }
        if pass.text == current {
            return pass;
        }
        current = pass.text;
    }
}

fn strip_once(text: &str) -> StrippedText {
    let mut out = String::with_capacity(text.len());
    let bytes = text.as_bytes();
    let mut i = 0;

    while i < bytes.len() {
        if bytes[i] != b'\\' {
            let next = next_backslash(bytes, i);
            out.push_str(&text[i..next]);
            i = next;
            continue;
        }

        let name_start = i + 1;
        let mut name_end = name_start;
        while name_end < bytes.len() && bytes[name_end].is_ascii_alphabetic() {
            name_end += 1;
        }
        let name = &text[name_start..name_end];
        let unwrap = UNWRAP.contains(&name);
        let delete = DELETE.contains(&name);
        if !unwrap && !delete {
            out.push('\\');
            i = name_start;
            continue;
        }

        if name_end >= bytes.len() || bytes[name_end] != b'{' {
            // Braceless command token: nothing to unwrap or delete but the
            // token itself must not survive.
            i = name_end;
            continue;
        }

        let Some(close) = matching_brace(bytes, name_end) else {
            return StrippedText {
                text: text.to_string(),
                warnings: vec![format!(
                    "unbalanced braces after \\{name} at byte {i}; text left unchanged"
                )],
            };
        };

        if unwrap {
            // Re-scan the inner text so nested commands are handled too.
            i = name_end + 1;
            let inner = &text[i..close];
            let stripped = strip_latex_artifacts(inner);
            if !stripped.warnings.is_empty() {
                return StrippedText {
                    text: text.to_string(),
                    warnings: stripped.warnings,
                };
            }
            out.push_str(&stripped.text);
            i = close + 1;
        } else {
            i = close + 1;
        }
    }

    StrippedText {
        text: out,
        warnings: Vec::new(),
    }
}

fn next_backslash(bytes: &[u8], from: usize) -> usize {
    bytes[from..]
        .iter()
        .position(|&b| b == b'\\')
        .map(|p| from + p)
        .unwrap_or(bytes.len())
}

/// Index of the brace closing the group opened at `open`, honoring nesting.
fn matching_brace(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (offset, &b) in bytes[open..].iter().enumerate() {
        match b {
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + offset);
                }
            }
            _ => {}
        }
    }
    None
}
