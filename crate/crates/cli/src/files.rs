//! Presentation and sequence files.
//!
//! ```text
//! # comment
//! gens: x1 x2
//! class: x1
//! class: x2
//! class: x2^-1 x1^-1
//! ```
//!
//! One `class:` line per class, relators separated by `;`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use peiffer::{Alphabet, ColoredPresentation, IdentitySequence, SequenceError, Word};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("no `class:` lines")]
    NoClasses,
    #[error(transparent)]
    Presentation(#[from] SequenceError),
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_presentation(text: &str) -> Result<ColoredPresentation, FileError> {
    let mut alphabet: Option<Arc<Alphabet>> = None;
    let mut classes: Vec<Vec<Word>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: String| FileError::Syntax { line: line_no, msg };
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(format!("expected `gens:` or `class:`, found `{line}`")))?;
        match key.trim() {
            "gens" => {
                if alphabet.is_some() {
                    return Err(syntax("second `gens:` line".into()));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                alphabet = Some(Alphabet::new(names).map_err(|e| syntax(e.to_string()))?);
            }
            "class" => {
                let a = alphabet
                    .as_ref()
                    .ok_or_else(|| syntax("`class:` before `gens:`".into()))?;
                let mut class = Vec::new();
                for rel in rest.split(';') {
                    let rel = rel.trim();
                    if rel.is_empty() {
                        return Err(syntax("empty relator".into()));
                    }
                    let w = Word::parse(rel, a).map_err(|e| syntax(format!("`{rel}`: {e}")))?;
                    if w.is_empty() {
                        return Err(syntax(format!("relator `{rel}` reduces to the identity")));
                    }
                    class.push(w);
                }
                classes.push(class);
            }
            other => return Err(syntax(format!("unknown key `{other}`"))),
        }
    }
    let alphabet = alphabet.ok_or(FileError::Syntax {
        line: 1,
        msg: "missing `gens:` line".into(),
    })?;
    if classes.is_empty() {
        return Err(FileError::NoClasses);
    }
    Ok(ColoredPresentation::new(alphabet, classes)?)
}

pub fn parse_presentation_file(path: &Path) -> Result<ColoredPresentation, FileError> {
    parse_presentation(&read(path)?)
}

pub fn parse_sequence_file(
    path: &Path,
    presentation: &Arc<ColoredPresentation>,
) -> Result<IdentitySequence, FileError> {
    Ok(IdentitySequence::parse(&read(path)?, presentation)?)
}
