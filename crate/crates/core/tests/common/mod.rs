#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use qform_core::graph::{NamedChain, Vertex};
use qform_core::graph::{ArrowSpec, EdgeSpec, NtGraph, PieceSpec, ResolutionGraph};
use qform_core::io;
use qform_core::linalg::IntMatrix;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn resolution(name: &str) -> ResolutionGraph {
    io::parse_resolution(&read_data(name)).unwrap()
}

pub fn ntgraph(name: &str) -> NtGraph {
    io::parse_ntgraph(&read_data(name)).unwrap()
}

pub fn chains(name: &str, nt: &NtGraph) -> Vec<NamedChain> {
    io::parse_chains(&read_data(name), Some(nt)).unwrap()
}

/// A golden fixture: graph file, chain file, and its expected Gram matrix.
pub struct Golden {
    pub name: &'static str,
    pub graph: &'static str,
    pub basis: &'static str,
    pub matrix: Vec<Vec<i64>>,
}

pub fn goldens() -> Vec<Golden> {
    vec![
        Golden {
            name: "acampo1",
            graph: "acampo1.rg1",
            basis: "acampo1.chain1",
            matrix: vec![
                vec![2, -1, 0, 0, 0, 1],
                vec![-1, 2, -1, 0, 0, 0],
                vec![0, -1, 2, -1, 0, 0],
                vec![0, 0, -1, 2, -1, 0],
                vec![0, 0, 0, -1, 2, 0],
                vec![1, 0, 0, 0, 0, 3],
            ],
        },
        Golden {
            name: "acampo2",
            graph: "acampo2.rg1",
            basis: "acampo2.chain1",
            matrix: vec![vec![42, -21, 0, 21], vec![-21, 46, -21, 2], vec![0, -21, 42, 0], vec![21, 2, 0, 43]],
        },
        Golden {
            name: "decomp",
            graph: "decomp.rg1",
            basis: "decomp.chain1",
            matrix: vec![
                vec![2, 0, 1, 0, 0],
                vec![0, 2, 0, 0, 1],
                vec![1, 0, 11, -7, 0],
                vec![0, 0, -7, 14, -7],
                vec![0, 1, 0, -7, 11],
            ],
        },
        Golden {
            name: "sss_left",
            graph: "sss_left.rg1",
            basis: "sss_left.chain1",
            matrix: vec![
                vec![52, 0, 26, 0, 0, 0, -26, 0, 13, 0],
                vec![0, 182, -91, 0, 0, 0, 0, 0, 0, 0],
                vec![26, -91, 222, -91, -14, 0, -13, 0, -7, -7],
                vec![0, 0, -91, 182, 0, 0, 0, 0, -91, 0],
                vec![0, 0, -14, 0, 28, 0, 0, 0, 7, 14],
                vec![0, 0, 0, 0, 0, 156, -78, 0, 0, 0],
                vec![-26, 0, -13, 0, 0, -78, 182, -78, -13, 0],
                vec![0, 0, 0, 0, 0, 0, -78, 156, -78, 0],
                vec![13, 0, -7, -91, 7, 0, -13, -78, 231, -42],
                vec![0, 0, -7, 0, 14, 0, 0, 0, -42, 98],
            ],
        },
        Golden {
            name: "sss_right",
            graph: "sss_right.rg1",
            basis: "sss_right.chain1",
            matrix: vec![
                vec![40, 0, 26, 0, 0, 0, -20, 7, 0, 0],
                vec![0, 182, -91, 0, 0, 0, 0, 0, 0, 0],
                vec![26, -91, 222, -91, -14, 0, -13, -7, -7, 0],
                vec![0, 0, -91, 182, 0, 0, 0, -91, 0, 0],
                vec![0, 0, -14, 0, 40, 0, 0, 7, 20, 0],
                vec![0, 0, 0, 0, 0, 156, -78, 0, 0, 0],
                vec![-20, 0, -13, 0, 0, -78, 140, -49, 0, 0],
                vec![7, 0, -7, -91, 7, 0, -49, 189, -42, 0],
                vec![0, 0, -7, 0, 20, 0, 0, -42, 140, -78],
                vec![0, 0, 0, 0, 0, 0, 0, 0, -78, 156],
            ],
        },
        Golden {
            name: "superisolated",
            graph: "superisolated.nt1",
            basis: "superisolated_nt.chain1",
            matrix: vec![vec![2, 0, 1], vec![0, 1, 0], vec![1, 0, 2]],
        },
        Golden {
            name: "dbm_5_11",
            graph: "dbm_5_11.nt1",
            basis: "dbm_5_11_nt.chain1",
            matrix: dbm_matrix(5, 11),
        },
        Golden {
            name: "dbm_3_13",
            graph: "dbm_3_13.nt1",
            basis: "dbm_3_13_nt.chain1",
            matrix: dbm_matrix(3, 13),
        },
    ]
}

/// The parametric Du Bois-Michel matrix evaluated at `(a, b)`.
pub fn dbm_matrix(a: i64, b: i64) -> Vec<Vec<i64>> {
    let p2 = (a + 28) * (b + 20);
    let p1 = a + b + 48;
    vec![
        vec![22 * p2, -11 * p2, 0, 11 * p2],
        vec![-11 * p2, 46 * p2 - 280 * p1, -11 * p2, 12 * p2 - 140 * p1],
        vec![0, -11 * p2, 22 * p2, 0],
        vec![11 * p2, 12 * p2 - 140 * p1, 0, 23 * p2 - 70 * p1],
    ]
}

pub fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

/// Determinant by Laplace expansion along the first row, memoised on the
/// set of remaining columns.
pub fn cofactor_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut memo = std::collections::HashMap::new();
    fn go(rows: &[Vec<i64>], row: usize, cols: u32, memo: &mut std::collections::HashMap<u32, BigInt>) -> BigInt {
        if row == rows.len() {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        let mut sign = 1i64;
        for c in 0..rows.len() {
            if cols & (1 << c) == 0 {
                continue;
            }
            let x = rows[row][c];
            if x != 0 {
                total += BigInt::from(x * sign) * go(rows, row + 1, cols & !(1 << c), memo);
            }
            sign = -sign;
        }
        memo.insert(cols, total.clone());
        total
    }
    go(rows, 0, (1u32 << n) - 1, &mut memo)
}

/// Product of random elementary integer matrices, so `det = ±1`.
pub fn random_unimodular(n: usize, rng: &mut StdRng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            u[(0, 0)] = BigInt::from(-1);
        }
        return u;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                let k = BigInt::from(rng.gen_range(-3i64..=3));
                for r in 0..n {
                    let add = &u[(r, j)] * &k;
                    u[(r, i)] += add;
                }
            }
            1 => {
                for r in 0..n {
                    let t = u[(r, i)].clone();
                    u[(r, i)] = u[(r, j)].clone();
                    u[(r, j)] = t;
                }
            }
            _ => {
                for r in 0..n {
                    u[(r, i)] = -&u[(r, i)];
                }
            }
        }
    }
    u
}

/// Graph surgery that keeps the germ: blowing up a point of the total
/// transform. `euler` values are kept consistent with the multiplicities.
#[derive(Debug, Clone)]
pub struct Plumbing {
    pub vertices: Vec<(String, u64, i64)>,
    pub edges: Vec<(usize, usize)>,
    pub arrows: Vec<(String, usize, u64)>,
    fresh: usize,
}

impl Plumbing {
    pub fn from_graph(g: &ResolutionGraph) -> Self {
        Plumbing {
            vertices: g.vertices().iter().map(|v| (v.id.clone(), v.genus, v.euler.unwrap())).collect(),
            edges: g.edges().iter().map(|e| (e.a, e.b)).collect(),
            arrows: g.arrows().iter().map(|a| (a.id.clone(), a.vertex, a.mult)).collect(),
            fresh: 0,
        }
    }

    fn new_vertex(&mut self) -> usize {
        self.fresh += 1;
        self.vertices.push((format!("z{}", self.fresh), 0, -1));
        self.vertices.len() - 1
    }

    fn valency(&self, v: usize) -> usize {
        let e: usize = self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum();
        e + self.arrows.iter().filter(|a| a.1 == v).count()
    }

    fn chi(&self, v: usize) -> i64 {
        2 - 2 * self.vertices[v].1 as i64 - self.valency(v) as i64
    }

    /// Blows up a smooth point of the divisor on a node or on a leaf.
    pub fn blow_up_free(&mut self, v: usize) -> bool {
        if self.chi(v) == 0 && self.vertices[v].1 == 0 {
            return false;
        }
        self.vertices[v].2 -= 1;
        let w = self.new_vertex();
        self.edges.push((v, w));
        true
    }

    /// Blows up the intersection point of two divisors.
    pub fn blow_up_edge(&mut self, e: usize) {
        let (a, b) = self.edges[e];
        self.vertices[a].2 -= 1;
        self.vertices[b].2 -= 1;
        let w = self.new_vertex();
        self.edges[e] = (a, w);
        self.edges.push((w, b));
    }

    /// Blows up the point where a branch of the strict transform meets
    /// the divisor.
    pub fn blow_up_arrow(&mut self, k: usize) {
        let v = self.arrows[k].1;
        self.vertices[v].2 -= 1;
        let w = self.new_vertex();
        self.edges.push((v, w));
        self.arrows[k].1 = w;
    }

    pub fn random_blow_up(&mut self, rng: &mut StdRng) {
        loop {
            match rng.gen_range(0..3) {
                0 => {
                    let v = rng.gen_range(0..self.vertices.len());
                    if self.blow_up_free(v) {
                        return;
                    }
                }
                1 if !self.edges.is_empty() => {
                    let e = rng.gen_range(0..self.edges.len());
                    self.blow_up_edge(e);
                    return;
                }
                2 if !self.arrows.is_empty() => {
                    let k = rng.gen_range(0..self.arrows.len());
                    self.blow_up_arrow(k);
                    return;
                }
                _ => {}
            }
        }
    }

    pub fn build(&self) -> ResolutionGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|(id, g, e)| Vertex {
                id: id.clone(),
                genus: *g,
                euler: Some(*e),
                mult: None,
            })
            .collect();
        let id = |i: usize| self.vertices[i].0.clone();
        let edges = self.edges.iter().map(|&(a, b)| (id(a), id(b))).collect();
        let arrows = self.arrows.iter().map(|(n, v, m)| (n.clone(), id(*v), *m)).collect();
        ResolutionGraph::new(vertices, edges, arrows).unwrap()
    }
}

/// Resolution fixtures with Euler numbers, usable as blow-up seeds.
pub const SEEDS: &[&str] = &[
    "cusp.rg1",
    "acampo1.rg1",
    "acampo2.rg1",
    "decomp.rg1",
    "sss_left.rg1",
    "sss_right.rg1",
    "superisolated.rg1",
    "dbm_5_11.rg1",
];

pub fn random_blow_ups(seed: &str, count: usize, rng: &mut StdRng) -> ResolutionGraph {
    let mut p = Plumbing::from_graph(&resolution(seed));
    for _ in 0..count {
        p.random_blow_up(rng);
    }
    p.build()
}

/// A connected NT graph without orbit data: `n` pieces, the given edge
/// endpoints and arrows at the listed pieces, screws drawn from `rng`.
pub fn plain_ntgraph(n: usize, edges: &[(usize, usize)], arrows: &[usize], rng: &mut StdRng) -> Option<NtGraph> {
    let pieces = (0..n)
        .map(|i| PieceSpec {
            id: format!("p{i}"),
            genus: rng.gen_range(0..3),
            orbit: None,
        })
        .collect();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| EdgeSpec {
            id: format!("e{i}"),
            src: format!("p{a}"),
            dst: format!("p{b}"),
            screw: BigInt::from(rng.gen_range(1..50)),
            orbit: None,
        })
        .collect();
    let arrows = arrows
        .iter()
        .enumerate()
        .map(|(i, &p)| ArrowSpec {
            id: format!("a{i}"),
            piece: format!("p{p}"),
            screw: BigInt::from(rng.gen_range(1..50)),
            orbit: None,
        })
        .collect();
    NtGraph::new(pieces, edges, arrows).ok()
}

pub fn shuffled<T: Clone>(v: &[T], rng: &mut StdRng) -> Vec<T> {
    let mut out = v.to_vec();
    out.shuffle(rng);
    out
}
