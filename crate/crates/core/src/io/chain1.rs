use std::collections::HashSet;
use std::fmt::Write;

use super::lexer::{is_id, lines, Format, Line};
use crate::error::{ParseError, Result};
use crate::graph::{NamedChain, NtGraph, OneChain};

/// Parses `[±][k*]id (± [k*]id)*`, returning each id with its column.
fn parse_body<'a>(line: &Line<'a>, start: usize) -> Result<Vec<(&'a str, i64, usize)>, ParseError> {
    let body = line.body;
    let bytes = body.as_bytes();
    let mut pos = start;
    let mut terms = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && (bytes[*pos] as char).is_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| {
        let end = body[pos..].find(char::is_whitespace).map_or(body.len(), |i| pos + i);
        ParseError::new(line.number, line.column_of(pos), msg, &body[pos..end])
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        let mut sign = 1;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1;
                pos += 1
            }
            _ if !terms.is_empty() => return Err(err(pos, "expected `+` or `-` between terms")),
            _ => {}
        }
        skip_ws(&mut pos);
        let tok_start = pos;
        while pos < bytes.len() && !(bytes[pos] as char).is_whitespace() && !matches!(bytes[pos], b'+' | b'-') {
            pos += 1;
        }
        let tok = &body[tok_start..pos];
        if tok.is_empty() {
            return Err(err(tok_start.min(body.len()), "expected an edge or arrow id"));
        }
        let (k, id, id_start) = match tok.split_once('*') {
            Some((k, id)) => {
                let k: i64 = k.parse().map_err(|_| err(tok_start, "invalid coefficient"))?;
                (k, id, tok_start + tok.len() - id.len())
            }
            None => (1, tok, tok_start),
        };
        if !is_id(id) {
            return Err(err(id_start, "invalid edge or arrow id"));
        }
        terms.push((id, sign * k, line.column_of(id_start)));
    }
    Ok(terms)
}

fn parse(text: &str, nt: Option<&NtGraph>) -> Result<Vec<NamedChain>> {
    let mut out = Vec::new();
    let mut names = HashSet::new();
    for line in lines(text, Format::Chain1)? {
        if line.tokens[0].text != "chain" {
            return Err(line.error(0, format!("unknown keyword `{}`", line.tokens[0].text)).into());
        }
        if line.tokens.len() < 2 {
            return Err(line.error(1, "missing chain name").into());
        }
        let start = line.offset_of(1);
        let name_len = line.body[start..].find(|c: char| !is_id(&c.to_string())).unwrap_or(line.body.len() - start);
        let name = &line.body[start..start + name_len];
        if name.is_empty() {
            return Err(line.error(1, "invalid chain id").into());
        }
        let after_name = start + name_len;
        let rest = &line.body[after_name..];
        let Some(eq) = rest.find('=').filter(|&i| rest[..i].trim().is_empty()) else {
            let at = after_name + (rest.len() - rest.trim_start().len());
            let tok = rest.split_whitespace().next().unwrap_or("");
            return Err(ParseError::new(line.number, line.column_of(at), "expected `=`", tok).into());
        };
        if !names.insert(name) {
            return Err(line.error(1, format!("duplicate chain `{name}`")).into());
        }
        let mut chain = OneChain::zero();
        for (id, k, col) in parse_body(&line, after_name + eq + 1)? {
            if let Some(nt) = nt {
                if nt.cell(id).is_none() {
                    return Err(ParseError::new(line.number, col, format!("unknown edge or arrow `{id}`"), id).into());
                }
            }
            chain.add(id, k);
        }
        out.push(NamedChain::new(name, chain));
    }
    Ok(out)
}

/// Parses a `chain1` file, checking every id against `nt` when given.
///
/// ```text
/// format chain1
/// chain s6 = -d_l + p1 + d_r
/// chain t = 2*p1 - p2
/// ```
pub fn parse_chains(text: &str, nt: Option<&NtGraph>) -> Result<Vec<NamedChain>> {
    parse(text, nt)
}

pub fn serialize_chains(chains: &[NamedChain]) -> String {
    let mut out = String::from("format chain1\n");
    for c in chains {
        write!(out, "chain {} =", c.name).unwrap();
        for (i, (id, k)) in c.chain.terms().enumerate() {
            let sign = if k < 0 { "-" } else { "+" };
            if i == 0 {
                out.push(' ');
                if k < 0 {
                    out.push('-');
                }
            } else {
                write!(out, " {sign} ").unwrap();
            }
            if k.abs() != 1 {
                write!(out, "{}*", k.abs()).unwrap();
            }
            out.push_str(id);
        }
        out.push('\n');
    }
    out
}
