use std::collections::HashMap;
use std::fmt::Write;

use super::lexer::{expect_id, keyvals, lines, locate, parse_num, Format};
use crate::error::{ParseError, Result};
use crate::graph::{ResolutionGraph, Vertex};

/// Parses an `rg1` resolution graph:
///
/// ```text
/// format rg1
/// vertex <id> genus=<int> [euler=<int>] [mult=<int>]
/// edge <id> <id>
/// arrow <id> <vertex> [mult=<int>]
/// ```
pub fn parse_resolution(text: &str) -> Result<ResolutionGraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut arrows = Vec::new();
    let mut declared: HashMap<String, (usize, usize)> = HashMap::new();
    let mut refs: Vec<(String, (usize, usize))> = Vec::new();

    for line in lines(text, Format::Rg1)? {
        let kw = line.tokens[0].text;
        match kw {
            "vertex" => {
                let id = expect_id(&line, 1, "vertex")?;
                let kv = keyvals(&line, 2, &["genus", "euler", "mult"])?;
                let Some(&(gi, g)) = kv.get("genus") else {
                    return Err(line.error(line.tokens.len(), "missing genus=").into());
                };
                let genus = parse_num(&line, gi, g, "genus")?;
                let euler = kv.get("euler").map(|&(i, v)| parse_num(&line, i, v, "euler number")).transpose()?;
                let mult = kv.get("mult").map(|&(i, v)| parse_num(&line, i, v, "multiplicity")).transpose()?;
                if declared.insert(id.to_string(), (line.number, line.tokens[1].col)).is_some() {
                    return Err(line.error(1, format!("duplicate id `{id}`")).into());
                }
                vertices.push(Vertex {
                    id: id.to_string(),
                    genus,
                    euler,
                    mult,
                });
            }
            "edge" => {
                let a = expect_id(&line, 1, "vertex")?;
                let b = expect_id(&line, 2, "vertex")?;
                if line.tokens.len() > 3 {
                    return Err(line.error(3, "unexpected token").into());
                }
                refs.push((a.to_string(), (line.number, line.tokens[1].col)));
                refs.push((b.to_string(), (line.number, line.tokens[2].col)));
                edges.push((a.to_string(), b.to_string()));
            }
            "arrow" => {
                let id = expect_id(&line, 1, "arrow")?;
                let v = expect_id(&line, 2, "vertex")?;
                let kv = keyvals(&line, 3, &["mult"])?;
                let mult = kv.get("mult").map(|&(i, m)| parse_num(&line, i, m, "multiplicity")).transpose()?.unwrap_or(1);
                if declared.insert(id.to_string(), (line.number, line.tokens[1].col)).is_some() {
                    return Err(line.error(1, format!("duplicate id `{id}`")).into());
                }
                refs.push((v.to_string(), (line.number, line.tokens[2].col)));
                arrows.push((id.to_string(), v.to_string(), mult));
            }
            _ => return Err(line.error(0, format!("unknown keyword `{kw}`")).into()),
        }
    }
    if vertices.is_empty() {
        return Err(ParseError::new(1, 1, "no vertices declared", "").into());
    }
    let mut where_ = declared;
    for (id, pos) in refs {
        where_.entry(id).or_insert(pos);
    }
    ResolutionGraph::new(vertices, edges, arrows).map_err(|e| locate(e, &where_))
}

/// Canonical `rg1` text: vertices, then edges, then arrows, in declaration
/// order.
pub fn serialize_resolution(g: &ResolutionGraph) -> String {
    let mut out = String::from("format rg1\n");
    for v in g.vertices() {
        write!(out, "vertex {} genus={}", v.id, v.genus).unwrap();
        if let Some(e) = v.euler {
            write!(out, " euler={e}").unwrap();
        }
        if let Some(m) = v.mult {
            write!(out, " mult={m}").unwrap();
        }
        out.push('\n');
    }
    for e in g.edges() {
        writeln!(out, "edge {} {}", g.vertex(e.a).id, g.vertex(e.b).id).unwrap();
    }
    for a in g.arrows() {
        write!(out, "arrow {} {}", a.id, g.vertex(a.vertex).id).unwrap();
        if a.mult != 1 {
            write!(out, " mult={}", a.mult).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const CUSP: &str = "format rg1\n# the (2,3) cusp\nvertex v1 genus=0 euler=-3\nvertex v2 genus=0 euler=-2\nvertex v3 genus=0 euler=-1\nedge v1 v3\nedge v2 v3\narrow c v3\n";

    #[test]
    fn cusp() {
        let g = parse_resolution(CUSP).unwrap();
        assert_eq!(g.vertices().len(), 3);
        assert_eq!(g.arrows()[0].mult, 1);
        let again = serialize_resolution(&g);
        assert_eq!(parse_resolution(&again).unwrap(), g);
        assert_eq!(serialize_resolution(&parse_resolution(&again).unwrap()), again);
    }

    fn err_line(text: &str) -> usize {
        match parse_resolution(text).unwrap_err() {
            Error::Parse(p) => p.line,
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn dangling_edge() {
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1\nedge a b\n"), 3);
    }

    #[test]
    fn errors_have_lines() {
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1\nvertex a genus=0 mult=1\n"), 3);
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1\nnode b\n"), 3);
        assert_eq!(err_line("format rg1\nvertex a genus=x mult=1\n"), 2);
        assert_eq!(err_line("format rg1\nvertex a mult=1\n"), 2);
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1\nvertex b genus=0 euler=-1\nedge a b\n"), 2);
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1\nvertex b genus=0 mult=1\n"), 3);
        assert_eq!(err_line("format rg1\nvertex a genus=0 mult=1 mult=2\n"), 2);
    }

    #[test]
    fn forward_references() {
        let g = parse_resolution("format rg1\nedge a b\narrow p b mult=2\nvertex a genus=1 mult=2\nvertex b genus=0 mult=2\n").unwrap();
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.arrows()[0].mult, 2);
    }
}
