//! The semistable reduction graph Γ_ss built from a resolution graph.
//!
//! Over a node `v` the fibre has `d_v` components, permuted cyclically by the
//! monodromy. Dead branches are absorbed into their node's pieces, and every
//! bamboo with gcd `d_b` contributes one cyclic orbit of `d_b` annuli.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::graph::{
    ArrowSpec, BambooEnd, BambooKind, Decomposition, EdgeSpec, NtGraph, OrbitTag, PieceSpec, ResolutionGraph,
};
use crate::screw::ScrewAssignment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceData {
    pub node: String,
    pub d_v: u64,
    /// Euler characteristic of one component.
    pub chi: i64,
    /// Boundary curves of one component.
    pub r: u64,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semistable {
    pub pieces: Vec<PieceData>,
    pub graph: NtGraph,
}

/// Id of the `j`-th member of an orbit of size `n` named `base`.
fn member_id(base: &str, n: u64, j: u64) -> (String, Option<OrbitTag>) {
    if n == 1 {
        (base.to_string(), None)
    } else {
        (
            format!("{base}.{j}"),
            Some(OrbitTag {
                orbit: base.to_string(),
                index: j,
            }),
        )
    }
}

/// Number of fibre components over `v`: the gcd of `m_v` with every
/// neighbouring multiplicity, arrowheads included.
pub fn component_count(graph: &ResolutionGraph, mults: &[u64], v: usize) -> u64 {
    let adj = graph.adjacency();
    let neighbours = adj[v].iter().map(|&(_, w)| mults[w]);
    let arrows = graph.arrows_at(v).map(|a| graph.arrows()[a].mult);
    neighbours.chain(arrows).fold(mults[v], |g, m| g.gcd(&m))
}

/// Per-node piece data.
pub fn piece_data(
    graph: &ResolutionGraph,
    dec: &Decomposition,
    mults: &[u64],
    screws: &ScrewAssignment,
) -> Result<Vec<PieceData>> {
    dec.nodes
        .iter()
        .map(|&v| {
            let id = &graph.vertex(v).id;
            let bad = |reason: String| Error::InconsistentPiece {
                node: id.clone(),
                reason,
            };
            let d_v = component_count(graph, mults, v);
            let chi_total: i64 = std::iter::once(v)
                .chain(dec.dead_branches_at(v).flat_map(|db| db.vertices.iter().copied()))
                .map(|u| mults[u] as i64 * graph.class_of(u).chi)
                .sum();
            if chi_total % d_v as i64 != 0 {
                return Err(bad(format!("Euler characteristic {chi_total} is not divisible by {d_v}")));
            }
            let mut ends = 0u64;
            for b in &dec.bamboos {
                let entry = screws.get(&b.id).expect("screw entry for every bamboo");
                let at_start = (b.start == v) as u64;
                let at_end = matches!(b.end, BambooEnd::Node(w) if w == v) as u64;
                let hits = at_start + at_end;
                if hits > 0 && !entry.d.is_multiple_of(d_v) {
                    return Err(bad(format!("bamboo `{}` has gcd {} not divisible by {d_v}", b.id, entry.d)));
                }
                ends += hits * entry.d;
            }
            let r = ends / d_v;
            let chi = chi_total / d_v as i64;
            let twice_genus = 2 - chi - r as i64;
            if r == 0 || twice_genus < 0 || twice_genus % 2 != 0 {
                return Err(bad(format!("χ = {chi} with {r} boundary curves gives no surface")));
            }
            Ok(PieceData {
                node: id.clone(),
                d_v,
                chi,
                r,
                genus: (twice_genus / 2) as u64,
            })
        })
        .collect()
}

/// Builds Γ_ss with its cyclic action. Piece ids are node ids, suffixed
/// `.j` when the node carries several components; annuli take their
/// bamboo's id the same way.
pub fn build_ntgraph(
    graph: &ResolutionGraph,
    dec: &Decomposition,
    mults: &[u64],
    screws: &ScrewAssignment,
) -> Result<Semistable> {
    let data = piece_data(graph, dec, mults, screws)?;
    let d_of = |v: usize| {
        let pos = dec.nodes.iter().position(|&n| n == v).expect("bamboo ends at a node");
        data[pos].d_v
    };
    let piece_name = |v: usize, j: u64| {
        let d = d_of(v);
        member_id(&graph.vertex(v).id, d, j % d).0
    };

    let mut pieces = Vec::new();
    for (&v, pd) in dec.nodes.iter().zip(&data) {
        for j in 0..pd.d_v {
            let (id, orbit) = member_id(&graph.vertex(v).id, pd.d_v, j);
            pieces.push(PieceSpec {
                id,
                genus: pd.genus,
                orbit,
            });
        }
    }

    let mut edges = Vec::new();
    let mut arrows = Vec::new();
    for b in &dec.bamboos {
        let entry = screws.get(&b.id).expect("screw entry for every bamboo");
        if b.kind() == BambooKind::Loop && d_of(b.start) > 1 {
            return Err(Error::AmbiguousLoopAttachment {
                bamboo: b.id.clone(),
                components: d_of(b.start),
            });
        }
        for j in 0..entry.d {
            let (id, orbit) = member_id(&b.id, entry.d, j);
            match b.end {
                BambooEnd::Node(w) => edges.push(EdgeSpec {
                    id,
                    src: piece_name(b.start, j),
                    dst: piece_name(w, j),
                    screw: entry.s.clone(),
                    orbit,
                }),
                BambooEnd::Arrow(_) => arrows.push(ArrowSpec {
                    id,
                    piece: piece_name(b.start, j),
                    screw: entry.s.clone(),
                    orbit,
                }),
            }
        }
    }

    let nt = NtGraph::new(pieces, edges, arrows).map_err(|e| match e {
        Error::Disconnected(p) => Error::DisconnectedSemistable(p),
        other => other,
    })?;
    Ok(Semistable { pieces: data, graph: nt })
}
