use std::fmt::Write;

use crate::graph::{NtGraph, ResolutionGraph};

fn sorted_by_key<T, K: Ord>(items: impl Iterator<Item = T>, key: impl Fn(&T) -> K) -> Vec<T> {
    let mut v: Vec<T> = items.collect();
    v.sort_by_key(|x| key(x));
    v
}

/// DOT rendering of a resolution graph, labelled `id:g=<genus>[,m=<mult>]`.
/// `mults` overrides the decorations when given.
pub fn resolution_to_dot(g: &ResolutionGraph, mults: Option<&[u64]>) -> String {
    let mut out = String::from("graph resolution {\n");
    let order = sorted_by_key(0..g.vertices().len(), |&i| g.vertex(i).id.clone());
    for i in order {
        let v = g.vertex(i);
        write!(out, "  \"{}\" [label=\"{}:g={}", v.id, v.id, v.genus).unwrap();
        if let Some(m) = mults.map(|m| m[i]).or(v.mult) {
            write!(out, ",m={m}").unwrap();
        }
        out.push_str("\"];\n");
    }
    for a in sorted_by_key(g.arrows().iter(), |a| a.id.clone()) {
        writeln!(out, "  \"{}\" [shape=point, label=\"\"];", a.id).unwrap();
    }
    let edges = sorted_by_key(g.edges().iter(), |e| {
        let (a, b) = (&g.vertex(e.a).id, &g.vertex(e.b).id);
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    });
    for e in edges {
        let (a, b) = (&g.vertex(e.a).id, &g.vertex(e.b).id);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        writeln!(out, "  \"{a}\" -- \"{b}\";").unwrap();
    }
    for a in sorted_by_key(g.arrows().iter(), |a| a.id.clone()) {
        writeln!(out, "  \"{}\" -- \"{}\" [dir=forward];", g.vertex(a.vertex).id, a.id).unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a Nielsen–Thurston graph with `s=<screw>` edge labels.
pub fn nt_to_dot(g: &NtGraph) -> String {
    let mut out = String::from("graph nielsen_thurston {\n");
    for p in sorted_by_key(g.pieces().iter(), |p| p.id.clone()) {
        writeln!(out, "  \"{}\" [label=\"{}:g={}\"];", p.id, p.id, p.genus).unwrap();
    }
    for a in sorted_by_key(g.arrows().iter(), |a| a.id.clone()) {
        writeln!(out, "  \"{}\" [shape=point, label=\"\"];", a.id).unwrap();
    }
    for e in sorted_by_key(g.edges().iter(), |e| e.id.clone()) {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [id=\"{}\", label=\"s={}\"];",
            g.pieces()[e.src].id,
            g.pieces()[e.dst].id,
            e.id,
            e.screw
        )
        .unwrap();
    }
    for a in sorted_by_key(g.arrows().iter(), |a| a.id.clone()) {
        writeln!(
            out,
            "  \"{}\" -- \"{}\" [dir=forward, label=\"s={}\"];",
            g.pieces()[a.piece].id,
            a.id,
            a.screw
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_ntgraph, parse_resolution};

    #[test]
    fn resolution_dot_is_sorted() {
        let g = parse_resolution("format rg1\nvertex z genus=0 mult=2\nvertex a genus=1 mult=2\nedge z a\narrow p z mult=2\n").unwrap();
        assert_eq!(
            resolution_to_dot(&g, None),
            "graph resolution {\n  \"a\" [label=\"a:g=1,m=2\"];\n  \"z\" [label=\"z:g=0,m=2\"];\n  \"p\" [shape=point, label=\"\"];\n  \"a\" -- \"z\";\n  \"z\" -- \"p\" [dir=forward];\n}\n"
        );
    }

    #[test]
    fn nt_dot_labels() {
        let g = parse_ntgraph("format nt1\nvertex v genus=0\nedge L v v screw=1\narrow a1 v screw=4\n").unwrap();
        let dot = nt_to_dot(&g);
        assert!(dot.contains("\"v\" [label=\"v:g=0\"];"));
        assert!(dot.contains("\"v\" -- \"v\" [id=\"L\", label=\"s=1\"];"));
        assert!(dot.contains("label=\"s=4\""));
        assert_eq!(dot, nt_to_dot(&g));
    }
}
