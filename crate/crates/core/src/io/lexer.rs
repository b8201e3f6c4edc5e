use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Rg1,
    Nt1,
    Chain1,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Rg1 => "rg1",
            Format::Nt1 => "nt1",
            Format::Chain1 => "chain1",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    /// 1-based character column.
    pub col: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Line<'a> {
    pub number: usize,
    /// The line with its comment removed.
    pub body: &'a str,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    pub fn error(&self, tok: usize, message: impl Into<String>) -> ParseError {
        match self.tokens.get(tok) {
            Some(t) => ParseError::new(self.number, t.col, message, t.text),
            None => ParseError::new(self.number, self.body.chars().count() + 1, message, ""),
        }
    }

    /// Byte offset of token `tok` within the body.
    pub fn offset_of(&self, tok: usize) -> usize {
        self.tokens[tok].text.as_ptr() as usize - self.body.as_ptr() as usize
    }

    /// Character column of a byte offset into the body.
    pub fn column_of(&self, byte: usize) -> usize {
        self.body[..byte].chars().count() + 1
    }
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

fn tokenize(body: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &body[s..i],
                    col: body[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    tokens
}

pub(crate) fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '~' | ':'))
}

/// Nonempty lines after the `format` header, which must name `expected`.
pub(crate) fn lines(text: &str, expected: Format) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    let mut header = false;
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let tokens = tokenize(body);
        if tokens.is_empty() {
            continue;
        }
        let line = Line {
            number: i + 1,
            body,
            tokens,
        };
        if !header {
            if line.tokens[0].text != "format" {
                return Err(line.error(0, format!("expected `format {expected}` header")));
            }
            match line.tokens.get(1).map(|t| t.text) {
                Some(f) if f == expected.name() => {}
                Some(_) => return Err(line.error(1, format!("expected format `{expected}`"))),
                None => return Err(line.error(1, "missing format name")),
            }
            if line.tokens.len() > 2 {
                return Err(line.error(2, "unexpected token after format name"));
            }
            header = true;
            continue;
        }
        out.push(line);
    }
    if !header {
        return Err(ParseError::new(1, 1, format!("missing `format {expected}` header"), ""));
    }
    Ok(out)
}

/// Reads the `format` header without parsing the rest.
pub fn detect_format(text: &str) -> Result<Format, ParseError> {
    for (i, raw) in text.lines().enumerate() {
        let tokens = tokenize(strip_comment(raw));
        if tokens.is_empty() {
            continue;
        }
        let line = Line {
            number: i + 1,
            body: strip_comment(raw),
            tokens,
        };
        if line.tokens[0].text != "format" {
            return Err(line.error(0, "expected `format` header"));
        }
        return match line.tokens.get(1).map(|t| t.text) {
            Some("rg1") => Ok(Format::Rg1),
            Some("nt1") => Ok(Format::Nt1),
            Some("chain1") => Ok(Format::Chain1),
            Some(_) => Err(line.error(1, "unknown format")),
            None => Err(line.error(1, "missing format name")),
        };
    }
    Err(ParseError::new(1, 1, "empty input", ""))
}

/// Splits `key=value` tokens, starting at token `from`, rejecting unknown
/// and repeated keys.
pub(crate) fn keyvals<'a>(
    line: &Line<'a>,
    from: usize,
    allowed: &[&str],
) -> Result<HashMap<&'a str, (usize, &'a str)>, ParseError> {
    let mut out = HashMap::new();
    for (i, tok) in line.tokens.iter().enumerate().skip(from) {
        let Some((k, v)) = tok.text.split_once('=') else {
            return Err(line.error(i, "expected key=value"));
        };
        if !allowed.contains(&k) {
            return Err(line.error(i, format!("unknown key `{k}`")));
        }
        if out.insert(k, (i, v)).is_some() {
            return Err(line.error(i, format!("key `{k}` given twice")));
        }
    }
    Ok(out)
}

pub(crate) fn parse_num<T: std::str::FromStr>(line: &Line, tok: usize, v: &str, what: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| line.error(tok, format!("invalid {what} `{v}`")))
}

pub(crate) fn expect_id<'a>(line: &Line<'a>, tok: usize, what: &str) -> Result<&'a str, ParseError> {
    match line.tokens.get(tok) {
        Some(t) if is_id(t.text) => Ok(t.text),
        Some(_) => Err(line.error(tok, format!("invalid {what} id"))),
        None => Err(line.error(tok, format!("missing {what} id"))),
    }
}

/// Attaches a line number to a semantic error, using the line where its
/// subject first appears.
pub(crate) fn locate(err: Error, where_: &HashMap<String, (usize, usize)>) -> Error {
    if let Error::Parse(_) = err {
        return err;
    }
    let (line, col) = err.subject().and_then(|s| where_.get(s).copied()).unwrap_or((1, 1));
    let token = err.subject().unwrap_or("").to_string();
    Error::Parse(ParseError::new(line, col, err.to_string(), token))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_comments() {
        let text = "# leading comment\n\nformat rg1 # trailing\nvertex a genus=0 # c\n";
        let ls = lines(text, Format::Rg1).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].number, 4);
        assert_eq!(ls[0].tokens[1], Token { text: "a", col: 8 });
        assert_eq!(detect_format(text).unwrap(), Format::Rg1);
    }

    #[test]
    fn header_errors() {
        assert_eq!(lines("format nt1\n", Format::Rg1).unwrap_err().line, 1);
        assert_eq!(lines("\nvertex a\n", Format::Rg1).unwrap_err().line, 2);
        assert!(lines("", Format::Rg1).is_err());
        assert!(detect_format("format xyz").is_err());
    }

    #[test]
    fn ids() {
        assert!(is_id("a~b.3"));
        assert!(is_id("rel:a_2"));
        assert!(!is_id("a-b"));
        assert!(!is_id(""));
    }
}
