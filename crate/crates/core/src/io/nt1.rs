use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;

use super::lexer::{expect_id, is_id, keyvals, lines, locate, parse_num, Format, Line};
use crate::error::{Error, ParseError, Result};
use crate::graph::{ArrowSpec, EdgeSpec, NtGraph, OrbitTag, PieceSpec};

fn orbit_tag(line: &Line, kv: &HashMap<&str, (usize, &str)>) -> Result<Option<OrbitTag>, ParseError> {
    match (kv.get("orbit"), kv.get("index")) {
        (None, None) => Ok(None),
        (Some(&(oi, o)), Some(&(ii, idx))) => {
            if !is_id(o) {
                return Err(line.error(oi, "invalid orbit id"));
            }
            Ok(Some(OrbitTag {
                orbit: o.to_string(),
                index: parse_num(line, ii, idx, "orbit index")?,
            }))
        }
        (Some(&(i, _)), None) => Err(line.error(i, "orbit= needs index=")),
        (None, Some(&(i, _))) => Err(line.error(i, "index= needs orbit=")),
    }
}

fn screw(line: &Line, kv: &HashMap<&str, (usize, &str)>) -> Result<BigInt, ParseError> {
    let Some(&(i, s)) = kv.get("screw") else {
        return Err(line.error(line.tokens.len(), "missing screw="));
    };
    let v: BigInt = parse_num(line, i, s, "screw weight")?;
    if v <= BigInt::from(0) {
        return Err(line.error(i, "screw weight must be positive"));
    }
    Ok(v)
}

/// Parses an `nt1` Nielsen–Thurston graph:
///
/// ```text
/// format nt1
/// vertex <id> genus=<int> [orbit=<id> index=<int>]
/// edge <id> <vertex> <vertex> screw=<int> [orbit=<id> index=<int>]
/// arrow <id> <vertex> screw=<int> [orbit=<id> index=<int>]
/// ```
pub fn parse_ntgraph(text: &str) -> Result<NtGraph> {
    let mut pieces = Vec::new();
    let mut edges = Vec::new();
    let mut arrows = Vec::new();
    let mut declared: HashMap<String, (usize, usize)> = HashMap::new();
    let mut refs: Vec<(String, (usize, usize))> = Vec::new();

    for line in lines(text, Format::Nt1)? {
        let kw = line.tokens[0].text;
        let id = match kw {
            "vertex" | "edge" | "arrow" => expect_id(&line, 1, kw)?,
            _ => return Err(line.error(0, format!("unknown keyword `{kw}`")).into()),
        };
        if declared.insert(id.to_string(), (line.number, line.tokens[1].col)).is_some() {
            return Err(line.error(1, format!("duplicate id `{id}`")).into());
        }
        match kw {
            "vertex" => {
                let kv = keyvals(&line, 2, &["genus", "orbit", "index"])?;
                let Some(&(gi, g)) = kv.get("genus") else {
                    return Err(line.error(line.tokens.len(), "missing genus=").into());
                };
                pieces.push(PieceSpec {
                    id: id.to_string(),
                    genus: parse_num(&line, gi, g, "genus")?,
                    orbit: orbit_tag(&line, &kv)?,
                });
            }
            "edge" => {
                let a = expect_id(&line, 2, "vertex")?;
                let b = expect_id(&line, 3, "vertex")?;
                let kv = keyvals(&line, 4, &["screw", "orbit", "index"])?;
                refs.push((a.to_string(), (line.number, line.tokens[2].col)));
                refs.push((b.to_string(), (line.number, line.tokens[3].col)));
                edges.push(EdgeSpec {
                    id: id.to_string(),
                    src: a.to_string(),
                    dst: b.to_string(),
                    screw: screw(&line, &kv)?,
                    orbit: orbit_tag(&line, &kv)?,
                });
            }
            _ => {
                let p = expect_id(&line, 2, "vertex")?;
                let kv = keyvals(&line, 3, &["screw", "orbit", "index"])?;
                refs.push((p.to_string(), (line.number, line.tokens[2].col)));
                arrows.push(ArrowSpec {
                    id: id.to_string(),
                    piece: p.to_string(),
                    screw: screw(&line, &kv)?,
                    orbit: orbit_tag(&line, &kv)?,
                });
            }
        }
    }
    if pieces.is_empty() {
        return Err(ParseError::new(1, 1, "no vertices declared", "").into());
    }
    let mut where_ = declared;
    for (id, pos) in refs {
        where_.entry(id).or_insert(pos);
    }
    NtGraph::new(pieces, edges, arrows).map_err(|e: Error| locate(e, &where_))
}

fn write_orbit(out: &mut String, tag: &Option<OrbitTag>) {
    if let Some(t) = tag {
        write!(out, " orbit={} index={}", t.orbit, t.index).unwrap();
    }
}

pub fn serialize_ntgraph(g: &NtGraph) -> String {
    let mut out = String::from("format nt1\n");
    for p in g.pieces() {
        write!(out, "vertex {} genus={}", p.id, p.genus).unwrap();
        write_orbit(&mut out, &p.orbit);
        out.push('\n');
    }
    for e in g.edges() {
        let (a, b) = (&g.pieces()[e.src].id, &g.pieces()[e.dst].id);
        write!(out, "edge {} {a} {b} screw={}", e.id, e.screw).unwrap();
        write_orbit(&mut out, &e.orbit);
        out.push('\n');
    }
    for a in g.arrows() {
        write!(out, "arrow {} {} screw={}", a.id, g.pieces()[a.piece].id, a.screw).unwrap();
        write_orbit(&mut out, &a.orbit);
        out.push('\n');
    }
    out
}
