//! Located diagnostics shared by the Turtle and SWRL parsers.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// 1-based line and column (columns count Unicode scalar values).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub const START: Position = Position { line: 1, column: 1 };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub snippet: String,
}

pub const MAX_SNIPPET: usize = 80;

impl ParseDiagnostic {
    pub fn new(severity: Severity, pos: Position, message: impl Into<String>, source: &str) -> Self {
        Self {
            severity,
            line: pos.line,
            column: pos.column,
            message: message.into(),
            snippet: snippet_at(source, pos.line),
        }
    }

    pub fn error(pos: Position, message: impl Into<String>, source: &str) -> Self {
        Self::new(Severity::Error, pos, message, source)
    }

    pub fn warning(pos: Position, message: impl Into<String>, source: &str) -> Self {
        Self::new(Severity::Warning, pos, message, source)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}:{}: {}: {}", self.line, self.column, self.severity, self.message)
    }
}

fn snippet_at(source: &str, line: usize) -> String {
    let text = source.lines().nth(line.saturating_sub(1)).unwrap_or("").trim();
    text.chars().take(MAX_SNIPPET).collect()
}

/// Position of the last character of `source`, or the start for empty input.
pub fn last_position(source: &str) -> Position {
    let mut pos = Position::START;
    let mut last = Position::START;
    for c in source.chars() {
        last = pos;
        if c == '\n' {
            pos.line += 1;
            pos.column = 1;
        } else {
            pos.column += 1;
        }
    }
    last
}

/// Result of a parser run: a value when accepted, `None` when rejected.
///
/// A parse is rejected exactly when at least one diagnostic is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome<T> {
    pub value: Option<T>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl<T> ParseOutcome<T> {
    pub fn from_parts(value: T, diagnostics: Vec<ParseDiagnostic>) -> Self {
        let rejected = diagnostics.iter().any(ParseDiagnostic::is_error);
        Self { value: if rejected { None } else { Some(value) }, diagnostics }
    }

    pub fn rejected(diagnostics: Vec<ParseDiagnostic>) -> Self {
        debug_assert!(diagnostics.iter().any(ParseDiagnostic::is_error));
        Self { value: None, diagnostics }
    }

    pub fn is_rejected(&self) -> bool {
        self.value.is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.is_error())
    }

    pub fn into_result(self) -> Result<T, Vec<ParseDiagnostic>> {
        match self.value {
            Some(v) => Ok(v),
            None => Err(self.diagnostics),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_position_tracks_lines() {
        assert_eq!(last_position("ab\ncd"), Position { line: 2, column: 2 });
        assert_eq!(last_position("ab\n"), Position { line: 1, column: 3 });
        assert_eq!(last_position(""), Position::START);
    }

    #[test]
    fn snippet_is_bounded() {
        let long = "x".repeat(200);
        let d = ParseDiagnostic::error(Position::START, "bad", &long);
        assert_eq!(d.snippet.chars().count(), MAX_SNIPPET);
        assert_eq!(d.render("f.ttl"), "f.ttl:1:1: error: bad");
    }
}
