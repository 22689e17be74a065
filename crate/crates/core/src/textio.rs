//! Whitespace-token line reader shared by the text formats. `#` starts a
//! comment; blank lines are skipped; positions are 1-based.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub(crate) text: &'a str,
    pub(crate) line: usize,
    pub(crate) column: usize,
}

impl Token<'_> {
    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    pub(crate) fn number(&self) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found `{}`", self.text)))
    }

    pub(crate) fn parse<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }

    /// Requires the token to be exactly `keyword`.
    pub(crate) fn expect(&self, keyword: &str) -> Result<(), ParseError> {
        if self.text == keyword {
            Ok(())
        } else {
            Err(self.error(format!("expected `{keyword}`, found `{}`", self.text)))
        }
    }
}

pub(crate) struct Lines<'a> {
    lines: Vec<Vec<Token<'a>>>,
    pub(crate) pos: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (byte, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(byte),
                    (true, Some(s)) => {
                        toks.push(Token {
                            text: &content[s..byte],
                            line: i + 1,
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            if !toks.is_empty() {
                lines.push(toks);
            }
        }
        Lines { lines, pos: 0, last_line }
    }

    pub(crate) fn peek(&self) -> Option<&[Token<'a>]> {
        self.lines.get(self.pos).map(Vec::as_slice)
    }

    pub(crate) fn next(&mut self, what: &str) -> Result<Vec<Token<'a>>, ParseError> {
        match self.lines.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l.clone())
            }
            None => Err(ParseError {
                line: self.last_line,
                column: 1,
                message: format!("unexpected end of input, expected {what}"),
            }),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(l) => Err(l[0].error(format!("unexpected `{}`", l[0].text))),
        }
    }
}

