//! Extraction of a grid from raw model output.

use serde::{Deserialize, Serialize};

use crate::grid::{Difficulty, Grid};

#[derive(Debug, Clone, PartialEq)]
pub enum Completion {
    Parsed(Grid),
    ParseFailure(String),
}

impl Completion {
    pub fn grid(&self) -> Option<&Grid> {
        match self {
            Completion::Parsed(g) => Some(g),
            Completion::ParseFailure(_) => None,
        }
    }
}

/// Serialized as `{"grid": "..."}` or `{"failure": "..."}`; grids keep
/// one decimal so the text is lossless for both difficulties.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum CompletionRepr {
    Grid(String),
    Failure(String),
}

impl Serialize for Completion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Completion::Parsed(g) => CompletionRepr::Grid(g.render(Difficulty::Hard)),
            Completion::ParseFailure(r) => CompletionRepr::Failure(r.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Completion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match CompletionRepr::deserialize(deserializer)? {
            CompletionRepr::Grid(text) => Completion::Parsed(
                Grid::parse(&text, Difficulty::Hard).map_err(serde::de::Error::custom)?,
            ),
            CompletionRepr::Failure(r) => Completion::ParseFailure(r),
        })
    }
}

fn is_numeric_token(tok: &str) -> bool {
    let body = tok.strip_prefix('-').unwrap_or(tok);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    digits(int) && frac.is_none_or(digits)
}

fn is_grid_line(line: &str) -> bool {
    let mut tokens = line.split_whitespace().peekable();
    tokens.peek().is_some()
        && tokens
            .all(|t| (t.len() == 1 && t.as_bytes()[0].is_ascii_alphabetic()) || is_numeric_token(t))
}

/// Parses the last contiguous block of grid-shaped lines in `raw` with the
/// strict parser for `difficulty`. Never fails; problems become `ParseFailure`.
pub fn parse_completion(raw: &str, difficulty: Difficulty) -> Completion {
    let lines: Vec<&str> = raw.lines().collect();
    let Some(end) = lines.iter().rposition(|l| is_grid_line(l)) else {
        return Completion::ParseFailure("no grid-shaped lines found".into());
    };
    let start = lines[..end]
        .iter()
        .rposition(|l| !is_grid_line(l))
        .map_or(0, |p| p + 1);
    match Grid::parse(&lines[start..=end].join("\n"), difficulty) {
        Ok(g) => Completion::Parsed(g),
        Err(e) => Completion::ParseFailure(e.to_string()),
    }
}
