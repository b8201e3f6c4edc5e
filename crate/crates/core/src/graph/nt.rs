use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Position of an element in a cyclic orbit of the finite-order automorphism;
/// the automorphism sends index `j` to `j + 1` modulo the orbit size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitTag {
    pub orbit: String,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub id: String,
    pub genus: u64,
    pub orbit: Option<OrbitTag>,
}

/// An annulus core curve. Its reference orientation runs `src → dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtEdge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub screw: BigInt,
    pub orbit: Option<OrbitTag>,
}

/// A boundary annulus, oriented from its piece towards the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtArrow {
    pub id: String,
    pub piece: usize,
    pub screw: BigInt,
    pub orbit: Option<OrbitTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Edge(usize),
    Arrow(usize),
}

/// Nielsen–Thurston graph: periodic pieces joined by screw-weighted annuli,
/// together with the cyclic action permuting them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtGraph {
    pieces: Vec<Piece>,
    edges: Vec<NtEdge>,
    arrows: Vec<NtArrow>,
    piece_index: HashMap<String, usize>,
    cell_index: HashMap<String, Cell>,
}

/// Orbit sizes of one kind of element, keyed by orbit name.
pub type OrbitSizes = BTreeMap<String, u64>;

pub struct PieceSpec {
    pub id: String,
    pub genus: u64,
    pub orbit: Option<OrbitTag>,
}

pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub screw: BigInt,
    pub orbit: Option<OrbitTag>,
}

pub struct ArrowSpec {
    pub id: String,
    pub piece: String,
    pub screw: BigInt,
    pub orbit: Option<OrbitTag>,
}

impl NtGraph {
    pub fn new(pieces: Vec<PieceSpec>, edges: Vec<EdgeSpec>, arrows: Vec<ArrowSpec>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut seen = HashSet::new();
        let mut piece_index = HashMap::new();
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                if !seen.insert(p.id.clone()) {
                    return Err(Error::DuplicateId(p.id));
                }
                piece_index.insert(p.id.clone(), i);
                Ok(Piece {
                    id: p.id,
                    genus: p.genus,
                    orbit: p.orbit,
                })
            })
            .collect::<Result<_>>()?;
        let lookup = |id: &str| piece_index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()));
        let positive = |id: &str, s: &BigInt| {
            if s.is_positive() {
                Ok(())
            } else {
                Err(Error::InvalidValue {
                    id: id.to_string(),
                    reason: format!("screw weight {s} is not positive"),
                })
            }
        };
        let mut cell_index = HashMap::new();
        let mut edge_vec = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if !seen.insert(e.id.clone()) {
                return Err(Error::DuplicateId(e.id));
            }
            positive(&e.id, &e.screw)?;
            cell_index.insert(e.id.clone(), Cell::Edge(i));
            edge_vec.push(NtEdge {
                src: lookup(&e.src)?,
                dst: lookup(&e.dst)?,
                id: e.id,
                screw: e.screw,
                orbit: e.orbit,
            });
        }
        let mut arrow_vec = Vec::with_capacity(arrows.len());
        for (i, a) in arrows.into_iter().enumerate() {
            if !seen.insert(a.id.clone()) {
                return Err(Error::DuplicateId(a.id));
            }
            positive(&a.id, &a.screw)?;
            cell_index.insert(a.id.clone(), Cell::Arrow(i));
            arrow_vec.push(NtArrow {
                piece: lookup(&a.piece)?,
                id: a.id,
                screw: a.screw,
                orbit: a.orbit,
            });
        }
        let g = NtGraph {
            pieces,
            edges: edge_vec,
            arrows: arrow_vec,
            piece_index,
            cell_index,
        };
        g.check_orbits()?;
        g.check_connected()?;
        Ok(g)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn edges(&self) -> &[NtEdge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[NtArrow] {
        &self.arrows
    }

    pub fn piece_index(&self, id: &str) -> Option<usize> {
        self.piece_index.get(id).copied()
    }

    pub fn cell(&self, id: &str) -> Option<Cell> {
        self.cell_index.get(id).copied()
    }

    pub fn screw_of(&self, cell: Cell) -> &BigInt {
        match cell {
            Cell::Edge(i) => &self.edges[i].screw,
            Cell::Arrow(i) => &self.arrows[i].screw,
        }
    }

    pub fn cell_id(&self, cell: Cell) -> &str {
        match cell {
            Cell::Edge(i) => &self.edges[i].id,
            Cell::Arrow(i) => &self.arrows[i].id,
        }
    }

    /// Edges then arrows, in declaration order: the row order of incidence
    /// matrices.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.edges.len()).map(Cell::Edge).chain((0..self.arrows.len()).map(Cell::Arrow))
    }

    /// First Betti number `|E| − |V| + 1` of the (connected) graph.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.pieces.len()
    }

    /// `(edge index, far piece)` for every edge end at each piece.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.pieces.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src].push((i, e.dst));
            adj[e.dst].push((i, e.src));
        }
        adj
    }

    fn check_connected(&self) -> Result<()> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.pieces.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(p) = queue.pop_front() {
            for &(_, q) in &adj[p] {
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(Error::Disconnected(self.pieces[i].id.clone())),
            None => Ok(()),
        }
    }

    fn check_orbits(&self) -> Result<()> {
        let piece_orbits = collect_orbits(self.pieces.iter().map(|p| p.orbit.as_ref()))?;
        let edge_orbits = collect_orbits(self.edges.iter().map(|e| e.orbit.as_ref()))?;
        let arrow_orbits = collect_orbits(self.arrows.iter().map(|a| a.orbit.as_ref()))?;

        let orbit_err = |orbit: &str, reason: String| Error::InvalidOrbit {
            orbit: orbit.to_string(),
            reason,
        };
        for (name, members) in &edge_orbits {
            let n = members.len();
            for (j, &e) in members.iter().enumerate() {
                let next = members[(j + 1) % n];
                let (a, b) = (&self.edges[e], &self.edges[next]);
                if a.screw != b.screw {
                    return Err(orbit_err(name, "screw weight varies along the orbit".into()));
                }
                let mapped = (self.image_in(&piece_orbits, a.src), self.image_in(&piece_orbits, a.dst));
                if mapped != (b.src, b.dst) {
                    return Err(orbit_err(
                        name,
                        format!("edge `{}` is not mapped onto `{}` with its endpoints", a.id, b.id),
                    ));
                }
            }
        }
        for (name, members) in &arrow_orbits {
            let n = members.len();
            for (j, &a) in members.iter().enumerate() {
                let next = members[(j + 1) % n];
                let (x, y) = (&self.arrows[a], &self.arrows[next]);
                if x.screw != y.screw {
                    return Err(orbit_err(name, "screw weight varies along the orbit".into()));
                }
                if self.image_in(&piece_orbits, x.piece) != y.piece {
                    return Err(orbit_err(
                        name,
                        format!("arrow `{}` is not mapped onto `{}` with its piece", x.id, y.id),
                    ));
                }
            }
        }
        // unorbited edges/arrows are fixed, so their endpoints must be fixed too
        for e in self.edges.iter().filter(|e| e.orbit.is_none()) {
            for p in [e.src, e.dst] {
                if self.image_in(&piece_orbits, p) != p {
                    return Err(orbit_err(
                        &e.id,
                        format!("fixed edge meets piece `{}` which is moved", self.pieces[p].id),
                    ));
                }
            }
        }
        for a in self.arrows.iter().filter(|a| a.orbit.is_none()) {
            if self.image_in(&piece_orbits, a.piece) != a.piece {
                return Err(orbit_err(
                    &a.id,
                    format!("fixed arrow sits on piece `{}` which is moved", self.pieces[a.piece].id),
                ));
            }
        }
        Ok(())
    }

    fn image_in(&self, piece_orbits: &BTreeMap<String, Vec<usize>>, p: usize) -> usize {
        match &self.pieces[p].orbit {
            None => p,
            Some(tag) => {
                let members = &piece_orbits[&tag.orbit];
                members[(tag.index as usize + 1) % members.len()]
            }
        }
    }

    /// Image of a piece under the automorphism.
    pub fn piece_image(&self, p: usize) -> usize {
        let orbits = collect_orbits(self.pieces.iter().map(|p| p.orbit.as_ref())).expect("validated at construction");
        self.image_in(&orbits, p)
    }

    /// Sizes of all piece orbits; unorbited pieces are singleton orbits named
    /// after themselves.
    pub fn piece_orbit_sizes(&self) -> OrbitSizes {
        orbit_sizes(self.pieces.iter().map(|p| (&p.id, p.orbit.as_ref())))
    }

    pub fn edge_orbit_sizes(&self) -> OrbitSizes {
        orbit_sizes(self.edges.iter().map(|e| (&e.id, e.orbit.as_ref())))
    }

    pub fn arrow_orbit_sizes(&self) -> OrbitSizes {
        orbit_sizes(self.arrows.iter().map(|a| (&a.id, a.orbit.as_ref())))
    }

    /// Order of the automorphism: lcm of all orbit sizes.
    pub fn action_order(&self) -> BigInt {
        self.piece_orbit_sizes()
            .values()
            .chain(self.edge_orbit_sizes().values())
            .chain(self.arrow_orbit_sizes().values())
            .fold(BigInt::one(), |acc, &n| acc.lcm(&BigInt::from(n)))
    }

    /// Orbit key of a piece (the orbit name, or its own id when fixed).
    pub fn piece_orbit_key(&self, p: usize) -> &str {
        self.pieces[p].orbit.as_ref().map_or(&self.pieces[p].id, |t| &t.orbit)
    }

    pub fn edge_orbit_key(&self, e: usize) -> &str {
        self.edges[e].orbit.as_ref().map_or(&self.edges[e].id, |t| &t.orbit)
    }

    pub fn arrow_orbit_key(&self, a: usize) -> &str {
        self.arrows[a].orbit.as_ref().map_or(&self.arrows[a].id, |t| &t.orbit)
    }

    /// Quotient by the automorphism: one vertex per piece orbit, one edge per
    /// edge orbit, one stub per arrow orbit.
    pub fn quotient(&self) -> Quotient {
        let vertices: Vec<String> = self.piece_orbit_sizes().into_keys().collect();
        let mut edges = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            edges
                .entry(self.edge_orbit_key(i).to_string())
                .or_insert_with(|| (self.piece_orbit_key(e.src).to_string(), self.piece_orbit_key(e.dst).to_string()));
        }
        let mut arrows = BTreeMap::new();
        for (i, a) in self.arrows.iter().enumerate() {
            arrows
                .entry(self.arrow_orbit_key(i).to_string())
                .or_insert_with(|| self.piece_orbit_key(a.piece).to_string());
        }
        Quotient { vertices, edges, arrows }
    }

    pub fn is_quotient_tree(&self) -> bool {
        self.quotient().is_tree()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub vertices: Vec<String>,
    /// edge orbit → (source piece orbit, target piece orbit)
    pub edges: BTreeMap<String, (String, String)>,
    /// arrow orbit → piece orbit
    pub arrows: BTreeMap<String, String>,
}

impl Quotient {
    /// The quotient of a connected graph is connected, so it is a tree iff it
    /// has one edge fewer than vertices; loops count as cycles.
    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len()
    }
}

fn collect_orbits<'a>(tags: impl Iterator<Item = Option<&'a OrbitTag>>) -> Result<BTreeMap<String, Vec<usize>>> {
    let mut by_orbit: BTreeMap<String, BTreeMap<u64, usize>> = BTreeMap::new();
    for (i, tag) in tags.enumerate() {
        if let Some(t) = tag {
            if by_orbit.entry(t.orbit.clone()).or_default().insert(t.index, i).is_some() {
                return Err(Error::InvalidOrbit {
                    orbit: t.orbit.clone(),
                    reason: format!("index {} used twice", t.index),
                });
            }
        }
    }
    by_orbit
        .into_iter()
        .map(|(name, members)| {
            let n = members.len() as u64;
            if members.keys().copied().ne(0..n) {
                return Err(Error::InvalidOrbit {
                    orbit: name,
                    reason: format!("indices must be exactly 0..{n}"),
                });
            }
            Ok((name, members.into_values().collect()))
        })
        .collect()
}

fn orbit_sizes<'a>(items: impl Iterator<Item = (&'a String, Option<&'a OrbitTag>)>) -> OrbitSizes {
    let mut sizes = OrbitSizes::new();
    for (id, tag) in items {
        let key = tag.map_or(id, |t| &t.orbit);
        *sizes.entry(key.clone()).or_insert(0) += 1;
    }
    sizes
}
