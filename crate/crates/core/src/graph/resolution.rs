use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u64,
    pub euler: Option<i64>,
    pub mult: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub vertex: usize,
    pub mult: u64,
}

/// Decorated dual graph of the total transform: vertices are divisor
/// components, arrowheads are branches of the strict transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexClass {
    pub valency: u64,
    pub chi: i64,
    pub is_node: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BambooKind {
    Interior,
    Boundary,
    Loop,
}

impl BambooKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BambooKind::Interior => "interior",
            BambooKind::Boundary => "boundary",
            BambooKind::Loop => "loop",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BambooEnd {
    Node(usize),
    Arrow(usize),
}

/// Maximal chain of genus-0, valency-2 vertices between two nodes, or
/// between a node and an arrowhead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bamboo {
    pub id: String,
    pub start: usize,
    pub interior: Vec<usize>,
    pub end: BambooEnd,
    pub edges: Vec<usize>,
}

impl Bamboo {
    pub fn kind(&self) -> BambooKind {
        match self.end {
            BambooEnd::Arrow(_) => BambooKind::Boundary,
            BambooEnd::Node(w) if w == self.start => BambooKind::Loop,
            BambooEnd::Node(_) => BambooKind::Interior,
        }
    }

    /// Multiplicities `m_0, …, m_k` along the bamboo, the arrowhead's
    /// multiplicity closing a boundary bamboo.
    pub fn multiplicities(&self, graph: &ResolutionGraph, mults: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.interior.len() + 2);
        out.push(mults[self.start]);
        out.extend(self.interior.iter().map(|&v| mults[v]));
        out.push(match self.end {
            BambooEnd::Node(w) => mults[w],
            BambooEnd::Arrow(a) => graph.arrows[a].mult,
        });
        out
    }
}

/// Chain hanging off a node, ending in a leaf, with no node and no arrowhead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeadBranch {
    pub node: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub nodes: Vec<usize>,
    pub bamboos: Vec<Bamboo>,
    pub dead_branches: Vec<DeadBranch>,
}

impl Decomposition {
    pub fn dead_branches_at(&self, node: usize) -> impl Iterator<Item = &DeadBranch> {
        self.dead_branches.iter().filter(move |d| d.node == node)
    }
}

impl ResolutionGraph {
    /// Builds and validates a graph. Edges are given as vertex-id pairs and
    /// arrows as `(id, vertex id, multiplicity)`.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(String, String)>, arrows: Vec<(String, String, u64)>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.id.clone()));
            }
            if v.mult == Some(0) {
                return Err(Error::InvalidValue {
                    id: v.id.clone(),
                    reason: "multiplicity must be positive".into(),
                });
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()));
        let edges = edges
            .iter()
            .map(|(a, b)| Ok(Edge { a: lookup(a)?, b: lookup(b)? }))
            .collect::<Result<Vec<_>>>()?;
        let mut arrow_ids = HashSet::new();
        let arrows = arrows
            .into_iter()
            .map(|(id, v, mult)| {
                if index.contains_key(&id) || !arrow_ids.insert(id.clone()) {
                    return Err(Error::DuplicateId(id));
                }
                if mult == 0 {
                    return Err(Error::InvalidValue {
                        id,
                        reason: "arrow multiplicity must be positive".into(),
                    });
                }
                Ok(Arrow { vertex: lookup(&v)?, id, mult })
            })
            .collect::<Result<Vec<_>>>()?;

        let all_euler = vertices.iter().all(|v| v.euler.is_some());
        let all_mult = vertices.iter().all(|v| v.mult.is_some());
        if !all_euler && !all_mult {
            // blame the first vertex missing the decoration that some vertex carries
            let kind = if vertices.iter().any(|v| v.euler.is_some()) { "euler" } else { "mult" };
            let culprit = vertices
                .iter()
                .find(|v| if kind == "euler" { v.euler.is_none() } else { v.mult.is_none() })
                .unwrap_or(&vertices[0]);
            return Err(Error::MissingDecoration {
                vertex: culprit.id.clone(),
                kind: if vertices.iter().all(|v| v.euler.is_none() && v.mult.is_none()) {
                    "euler or mult"
                } else {
                    kind
                },
            });
        }

        let g = ResolutionGraph {
            vertices,
            edges,
            arrows,
            index,
        };
        g.check_connected()?;
        Ok(g)
    }

    fn check_connected(&self) -> Result<()> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(Error::Disconnected(self.vertices[i].id.clone())),
            None => Ok(()),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn has_euler(&self) -> bool {
        self.vertices.iter().all(|v| v.euler.is_some())
    }

    pub fn has_mult(&self) -> bool {
        self.vertices.iter().all(|v| v.mult.is_some())
    }

    /// Per vertex: `(edge index, far endpoint)` for every edge end at it;
    /// a loop shows up twice.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((i, e.b));
            adj[e.b].push((i, e.a));
        }
        adj
    }

    pub fn arrows_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.vertex == v).map(|(i, _)| i)
    }

    pub fn valency(&self, v: usize) -> u64 {
        let edge_ends: usize = self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum();
        (edge_ends + self.arrows_at(v).count()) as u64
    }

    pub fn class_of(&self, v: usize) -> VertexClass {
        let valency = self.valency(v);
        let chi = 2 - 2 * self.vertices[v].genus as i64 - valency as i64;
        VertexClass {
            valency,
            chi,
            is_node: chi < 0,
        }
    }

    pub fn classify(&self) -> BTreeMap<String, VertexClass> {
        (0..self.vertices.len()).map(|v| (self.vertices[v].id.clone(), self.class_of(v))).collect()
    }

    /// Node indices, ordered by vertex id.
    pub fn nodes(&self) -> Vec<usize> {
        let mut nodes: Vec<usize> = (0..self.vertices.len()).filter(|&v| self.class_of(v).is_node).collect();
        nodes.sort_by(|&a, &b| self.vertices[a].id.cmp(&self.vertices[b].id));
        nodes
    }

    /// Splits the edges into bamboos and dead branches.
    ///
    /// Nodes are visited in id order and their incident edges in declaration
    /// order, so an interior bamboo runs from its lexicographically smaller
    /// node. Interior bamboo ids are `v~w`, repeated pairs get `~2`, `~3`, …;
    /// a boundary bamboo takes the id of its arrowhead.
    pub fn decompose(&self) -> Result<Decomposition> {
        let nodes = self.nodes();
        if nodes.is_empty() {
            return Err(Error::NoNode);
        }
        let is_node: Vec<bool> = (0..self.vertices.len()).map(|v| self.class_of(v).is_node).collect();
        let adj = self.adjacency();
        let mut used_edge = vec![false; self.edges.len()];
        let mut used_ids: HashSet<String> = self.index.keys().cloned().collect();
        used_ids.extend(self.arrows.iter().map(|a| a.id.clone()));
        let mut bamboos = Vec::new();
        let mut dead_branches = Vec::new();

        for &v in &nodes {
            for a in self.arrows_at(v) {
                bamboos.push(Bamboo {
                    id: self.arrows[a].id.clone(),
                    start: v,
                    interior: vec![],
                    end: BambooEnd::Arrow(a),
                    edges: vec![],
                });
            }
            for &(first_edge, first_far) in &adj[v] {
                if used_edge[first_edge] {
                    continue;
                }
                used_edge[first_edge] = true;
                let mut edges = vec![first_edge];
                let mut interior = Vec::new();
                let mut cur = first_far;
                let mut via = first_edge;
                let end = loop {
                    if is_node[cur] {
                        break Some(BambooEnd::Node(cur));
                    }
                    interior.push(cur);
                    if let Some(a) = self.arrows_at(cur).next() {
                        break Some(BambooEnd::Arrow(a));
                    }
                    let next = adj[cur].iter().find(|&&(e, _)| e != via && !used_edge[e]);
                    match next {
                        None => break None,
                        Some(&(e, w)) => {
                            used_edge[e] = true;
                            edges.push(e);
                            via = e;
                            cur = w;
                        }
                    }
                };
                match end {
                    None => dead_branches.push(DeadBranch {
                        node: v,
                        vertices: interior,
                        edges,
                    }),
                    Some(end) => {
                        let id = match end {
                            BambooEnd::Arrow(a) => self.arrows[a].id.clone(),
                            BambooEnd::Node(w) => {
                                let base = format!("{}~{}", self.vertices[v].id, self.vertices[w].id);
                                let mut id = base.clone();
                                let mut k = 2;
                                while used_ids.contains(&id) {
                                    id = format!("{base}~{k}");
                                    k += 1;
                                }
                                id
                            }
                        };
                        used_ids.insert(id.clone());
                        bamboos.push(Bamboo {
                            id,
                            start: v,
                            interior,
                            end,
                            edges,
                        });
                    }
                }
            }
        }
        // every edge must be accounted for; leftovers mean a component with no node
        if let Some(e) = used_edge.iter().position(|u| !u) {
            return Err(Error::InvalidValue {
                id: self.vertices[self.edges[e].a].id.clone(),
                reason: "edge is not reachable from any node along a chain".into(),
            });
        }
        Ok(Decomposition {
            nodes,
            bamboos,
            dead_branches,
        })
    }

    /// Returns a copy with the given multiplicities written into the `mult`
    /// decorations.
    pub fn with_multiplicities(&self, mults: &[u64]) -> ResolutionGraph {
        let mut g = self.clone();
        for (v, &m) in g.vertices.iter_mut().zip(mults) {
            v.mult = Some(m);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: &str, genus: u64, mult: u64) -> Vertex {
        Vertex {
            id: id.into(),
            genus,
            euler: None,
            mult: Some(mult),
        }
    }

    fn e(a: &str, b: &str) -> (String, String) {
        (a.into(), b.into())
    }

    /// A'Campo double (7,6)-cusp.
    fn acampo() -> ResolutionGraph {
        let mut vs = vec![v("u", 0, 12), v("a", 0, 78), v("b", 0, 78)];
        let chain = [65, 52, 39, 26, 13];
        let mut es = vec![e("u", "a"), e("u", "b")];
        for side in ["a", "b"] {
            let mut prev = side.to_string();
            for (k, m) in chain.iter().enumerate() {
                let id = format!("{side}{}", k + 1);
                vs.push(v(&id, 0, *m));
                es.push(e(&prev, &id));
                prev = id;
            }
        }
        let arrows = vec![("d_l".into(), "a".into(), 1), ("d_r".into(), "b".into(), 1)];
        ResolutionGraph::new(vs, es, arrows).unwrap()
    }

    #[test]
    fn classify_acampo_node() {
        let g = acampo();
        let c = g.classify();
        assert_eq!(
            c["a"],
            VertexClass {
                valency: 3,
                chi: -1,
                is_node: true
            }
        );
        assert!(!c["u"].is_node);
        assert_eq!(c["a5"].chi, 1);
    }

    #[test]
    fn small_classes() {
        let g = ResolutionGraph::new(vec![v("x", 0, 1)], vec![], vec![("p".into(), "x".into(), 1)]).unwrap();
        assert_eq!(
            g.class_of(0),
            VertexClass {
                valency: 1,
                chi: 1,
                is_node: false
            }
        );
        let g = ResolutionGraph::new(vec![v("x", 1, 1)], vec![], vec![("p".into(), "x".into(), 1)]).unwrap();
        assert_eq!(g.class_of(0).chi, -1);
        assert!(g.class_of(0).is_node);
    }

    #[test]
    fn loops_count_twice() {
        let g = ResolutionGraph::new(vec![v("x", 0, 1)], vec![e("x", "x")], vec![("p".into(), "x".into(), 1)]).unwrap();
        assert_eq!(g.class_of(0).valency, 3);
        let d = g.decompose().unwrap();
        assert_eq!(d.bamboos.len(), 2);
        assert_eq!(d.bamboos[1].kind(), BambooKind::Loop);
        assert_eq!(d.bamboos[1].id, "x~x");
    }

    #[test]
    fn acampo_bamboos() {
        let g = acampo();
        let d = g.decompose().unwrap();
        let mults: Vec<u64> = g.vertices().iter().map(|v| v.mult.unwrap()).collect();
        let mut found: Vec<(BambooKind, Vec<u64>)> =
            d.bamboos.iter().map(|b| (b.kind(), b.multiplicities(&g, &mults))).collect();
        found.sort();
        assert_eq!(
            found,
            vec![
                (BambooKind::Interior, vec![78, 12, 78]),
                (BambooKind::Boundary, vec![78, 1]),
                (BambooKind::Boundary, vec![78, 1]),
            ]
        );
        assert_eq!(d.dead_branches.len(), 2);
        for db in &d.dead_branches {
            let ms: Vec<u64> = db.vertices.iter().map(|&v| mults[v]).collect();
            assert_eq!(ms, vec![65, 52, 39, 26, 13]);
        }
        let central = d.bamboos.iter().find(|b| b.kind() == BambooKind::Interior).unwrap();
        assert_eq!(central.id, "a~b");
    }

    #[test]
    fn no_node_rejected() {
        let g = ResolutionGraph::new(
            vec![v("x", 0, 1), v("y", 0, 1)],
            vec![e("x", "y")],
            vec![("p".into(), "y".into(), 1)],
        )
        .unwrap();
        assert_eq!(g.decompose(), Err(Error::NoNode));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            ResolutionGraph::new(vec![v("x", 0, 1)], vec![e("x", "y")], vec![]),
            Err(Error::UnknownVertex("y".into()))
        );
        assert_eq!(
            ResolutionGraph::new(vec![v("x", 0, 1), v("x", 0, 1)], vec![], vec![]),
            Err(Error::DuplicateId("x".into()))
        );
        assert_eq!(
            ResolutionGraph::new(vec![v("x", 0, 1), v("y", 0, 1)], vec![], vec![]),
            Err(Error::Disconnected("y".into()))
        );
        let mut w = v("y", 0, 1);
        w.mult = None;
        assert!(matches!(
            ResolutionGraph::new(vec![v("x", 0, 1), w], vec![e("x", "y")], vec![]),
            Err(Error::MissingDecoration { .. })
        ));
    }
}
