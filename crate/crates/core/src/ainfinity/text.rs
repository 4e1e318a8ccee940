//! Shared helpers for the line-oriented structure files.

use thiserror::Error;

use crate::exact::{parse_rational, Rat};
use crate::novikov::NovikovElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A whitespace-separated token and its 1-based column.
#[derive(Debug, Clone, Copy)]
pub struct Token<'a> {
    pub column: usize,
    pub text: &'a str,
}

pub struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    pub fn token(&self, k: usize, what: &str) -> Result<Token<'a>, ParseError> {
        self.tokens.get(k).copied().ok_or_else(|| {
            let column = self.tokens.last().map(|t| t.column + t.text.len()).unwrap_or(1);
            self.error(column, format!("missing {what}"))
        })
    }

    /// Value of a `key=value` token, searched from position `from` on.
    pub fn field(&self, from: usize, key: &str) -> Result<Token<'a>, ParseError> {
        for t in self.tokens.iter().skip(from) {
            if let Some(v) = t.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
                return Ok(Token {
                    column: t.column + key.len() + 1,
                    text: v,
                });
            }
        }
        let column = self.tokens.last().map(|t| t.column + t.text.len()).unwrap_or(1);
        Err(self.error(column, format!("missing `{key}=`")))
    }

    pub fn optional_field(&self, from: usize, key: &str) -> Option<Token<'a>> {
        self.field(from, key).ok()
    }

    /// Checks that every token from `from` on is one of the given keys.
    pub fn only_fields(&self, from: usize, keys: &[&str]) -> Result<(), ParseError> {
        for t in self.tokens.iter().skip(from) {
            let key = t.text.split('=').next().unwrap_or("");
            if !t.text.contains('=') || !keys.contains(&key) {
                return Err(self.error(t.column, format!("unexpected `{}`", t.text)));
            }
        }
        Ok(())
    }
}

/// Splits text into non-empty, non-comment lines of tokens.
pub fn lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in content.char_indices() {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        column: s + 1,
                        text: &content[s..i],
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                column: s + 1,
                text: &content[s..],
            });
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: n + 1,
                tokens,
            });
        }
    }
    out
}

pub fn rational(line: &Line, t: Token) -> Result<Rat, ParseError> {
    parse_rational(t.text).map_err(|e| line.error(t.column, e.to_string()))
}

pub fn novikov(line: &Line, t: Token) -> Result<NovikovElement, ParseError> {
    t.text
        .parse()
        .map_err(|e: crate::novikov::NovikovParseError| line.error(t.column, e.to_string()))
}

pub fn integer(line: &Line, t: Token) -> Result<usize, ParseError> {
    t.text
        .parse()
        .map_err(|_| line.error(t.column, format!("expected a non-negative integer, got `{}`", t.text)))
}

/// Comma-separated names; the empty string gives an empty list.
pub fn names<'a>(t: Token<'a>) -> Vec<&'a str> {
    if t.text.is_empty() {
        Vec::new()
    } else {
        t.text.split(',').collect()
    }
}
