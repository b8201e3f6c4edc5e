//! Homology bases of Γ_ss, the Gram matrix `Q̃ = Bᵀ·diag(s)·B` and its
//! congruence invariants.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Cell, NamedChain, NtGraph, OneChain};
use crate::linalg::{self, IntMatrix};

/// Named chains together with their incidence matrix (rows are the cells of
/// the graph, edges first, columns are the chains).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBasis {
    pub chains: Vec<NamedChain>,
    pub absolute: Vec<bool>,
    pub incidence: IntMatrix,
}

impl ChainBasis {
    /// Checks that every chain is a relative cycle on `nt` and that the
    /// chains are linearly independent.
    pub fn new(nt: &NtGraph, chains: Vec<NamedChain>) -> Result<Self> {
        let cells: Vec<Cell> = nt.cells().collect();
        let row_of: BTreeMap<&str, usize> = cells.iter().enumerate().map(|(i, &c)| (nt.cell_id(c), i)).collect();
        let mut incidence = IntMatrix::zeros(cells.len(), chains.len());
        let mut absolute = Vec::with_capacity(chains.len());
        for (j, nc) in chains.iter().enumerate() {
            let bd = nc.chain.piece_boundary(nt)?;
            if let Some(p) = bd.iter().position(|&b| b != 0) {
                return Err(Error::NotARelativeCycle {
                    chain: nc.name.clone(),
                    piece: nt.pieces()[p].id.clone(),
                });
            }
            absolute.push(nc.chain.is_absolute_cycle(nt)?);
            for (id, k) in nc.chain.terms() {
                incidence[(row_of[id], j)] = BigInt::from(k);
            }
        }
        if linalg::rank(&incidence) < chains.len() {
            return Err(Error::DependentBasis);
        }
        Ok(ChainBasis {
            chains,
            absolute,
            incidence,
        })
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.chains.iter().map(|c| c.name.clone()).collect()
    }

    pub fn absolute_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.absolute[i]).collect()
    }
}

/// Spanning-tree basis: BFS from the least piece id visiting edges in id
/// order, one fundamental cycle `cyc:<edge>` per non-tree edge, then
/// `rel:<arrow>` = −a₀ + path + a for every arrow after the least one.
pub fn default_basis(nt: &NtGraph) -> ChainBasis {
    let n = nt.pieces().len();
    let root = (0..n).min_by(|&a, &b| nt.pieces()[a].id.cmp(&nt.pieces()[b].id)).expect("nonempty graph");
    let mut adj = nt.adjacency();
    for list in &mut adj {
        list.sort_by(|x, y| nt.edges()[x.0].id.cmp(&nt.edges()[y.0].id));
    }
    // path[p] is the tree chain from the root to p
    let mut path: Vec<Option<OneChain>> = vec![None; n];
    let mut tree_edge = vec![false; nt.edges().len()];
    path[root] = Some(OneChain::zero());
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        for &(e, q) in &adj[p] {
            if path[q].is_some() {
                continue;
            }
            let edge = &nt.edges()[e];
            let mut c = path[p].clone().expect("visited");
            c.add(&edge.id, if edge.src == p { 1 } else { -1 });
            path[q] = Some(c);
            tree_edge[e] = true;
            queue.push_back(q);
        }
    }
    let path: Vec<OneChain> = path.into_iter().map(|c| c.expect("graph is connected")).collect();

    let mut chains = Vec::new();
    let mut non_tree: Vec<usize> = (0..nt.edges().len()).filter(|&e| !tree_edge[e]).collect();
    non_tree.sort_by(|&a, &b| nt.edges()[a].id.cmp(&nt.edges()[b].id));
    for e in non_tree {
        let edge = &nt.edges()[e];
        let mut c = path[edge.src].clone();
        c.add(&edge.id, 1);
        c.scaled_add(&path[edge.dst], -1);
        chains.push(NamedChain::new(format!("cyc:{}", edge.id), c));
    }
    let mut arrows: Vec<usize> = (0..nt.arrows().len()).collect();
    arrows.sort_by(|&a, &b| nt.arrows()[a].id.cmp(&nt.arrows()[b].id));
    if let Some((&a0, rest)) = arrows.split_first() {
        let first = &nt.arrows()[a0];
        for &a in rest {
            let arrow = &nt.arrows()[a];
            let mut c = OneChain::zero();
            c.add(&first.id, -1);
            c.scaled_add(&path[arrow.piece], 1);
            c.scaled_add(&path[first.piece], -1);
            c.add(&arrow.id, 1);
            chains.push(NamedChain::new(format!("rel:{}", arrow.id), c));
        }
    }
    ChainBasis::new(nt, chains).expect("spanning-tree chains are independent relative cycles")
}

/// Symmetric integer form with its invariants computed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramForm {
    pub names: Vec<String>,
    pub absolute: Vec<bool>,
    pub matrix: IntMatrix,
    pub det: BigInt,
    pub rank: usize,
    pub snf: Vec<BigInt>,
    pub positive_definite: bool,
    pub even: bool,
    pub absolute_block: IntMatrix,
    pub absolute_det: BigInt,
    pub absolute_snf: Vec<BigInt>,
    pub even_absolute: bool,
}

impl GramForm {
    /// Wraps a symmetric matrix; `absolute` flags the rows belonging to
    /// absolute cycles.
    pub fn from_matrix(names: Vec<String>, absolute: Vec<bool>, matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_symmetric() || names.len() != matrix.nrows() || absolute.len() != names.len() {
            return Err(Error::NotSymmetric);
        }
        let idx: Vec<usize> = (0..names.len()).filter(|&i| absolute[i]).collect();
        let absolute_block = matrix.principal_submatrix(&idx);
        Ok(GramForm {
            det: linalg::det(&matrix),
            rank: linalg::rank(&matrix),
            snf: linalg::smith_diagonal(&matrix),
            positive_definite: linalg::is_positive_definite(&matrix),
            even: is_even(&matrix),
            absolute_det: linalg::det(&absolute_block),
            absolute_snf: linalg::smith_diagonal(&absolute_block),
            even_absolute: is_even(&absolute_block),
            absolute_block,
            names,
            absolute,
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// The form restricted to the absolute cycles.
    pub fn absolute_form(&self) -> GramForm {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.absolute[i]).collect();
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        GramForm::from_matrix(names, vec![true; idx.len()], self.absolute_block.clone()).expect("principal block of a symmetric matrix")
    }
}

/// All diagonal entries even.
pub fn is_even(m: &IntMatrix) -> bool {
    m.diagonal().iter().all(|x| (x % 2u32).is_zero())
}

/// `Q̃ = Bᵀ·diag(s)·B`.
pub fn gram(nt: &NtGraph, basis: &ChainBasis) -> Result<GramForm> {
    let b = &basis.incidence;
    let screws: Vec<&BigInt> = nt.cells().map(|c| nt.screw_of(c)).collect();
    let k = basis.len();
    let mut q = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v: BigInt = (0..b.nrows())
                .filter(|&r| !b[(r, i)].is_zero() && !b[(r, j)].is_zero())
                .map(|r| screws[r] * &b[(r, i)] * &b[(r, j)])
                .sum();
            q[(i, j)] = v.clone();
            q[(j, i)] = v;
        }
    }
    GramForm::from_matrix(basis.names(), basis.absolute.clone(), q)
}

/// `N(v) = Σ s_C·b_C(v)·C`, keyed by curve id.
pub fn nilpotent_image(nt: &NtGraph, chain: &OneChain) -> Result<BTreeMap<String, BigInt>> {
    Ok(chain
        .resolve(nt)?
        .into_iter()
        .map(|(cell, k)| (nt.cell_id(cell).to_string(), nt.screw_of(cell) * k))
        .collect())
}

/// Squarefree part of `|n|` (zero for zero), or `None` if factoring gave up.
pub fn squarefree_part(n: &BigInt) -> Option<BigUint> {
    let m = n.magnitude().clone();
    if m.is_zero() || m.is_one() {
        return Some(m);
    }
    let (factors, rest) = num_prime::nt_funcs::factors(m, None);
    if rest.is_some() {
        return None;
    }
    Some(factors.into_iter().filter(|(_, e)| e % 2 == 1).map(|(p, _)| p).product())
}

/// Whether `a·b` is a perfect square, i.e. `a ≡ b` modulo squares of
/// nonzero rationals (zero only matches zero).
pub fn same_mod_squares(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let p = a * b;
    if p.sign() == Sign::Minus {
        return false;
    }
    let r = p.sqrt();
    &r * &r == p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant {
    pub key: &'static str,
    pub left: String,
    pub right: String,
    pub differs: bool,
}

/// Invariant-level comparison of two forms. Never claims equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareReport {
    pub invariants: Vec<Invariant>,
}

impl CompareReport {
    pub fn distinguished_by(&self) -> Vec<&'static str> {
        self.invariants.iter().filter(|i| i.differs).map(|i| i.key).collect()
    }

    pub fn verdict(&self) -> String {
        let keys = self.distinguished_by();
        if keys.is_empty() {
            "not_distinguished".to_string()
        } else {
            format!("distinguished_by: [{}]", keys.join(", "))
        }
    }
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn squarefree_label(n: &BigInt) -> String {
    let sign = if n.is_negative() { "-" } else { "" };
    squarefree_part(n).map_or_else(|| "?".to_string(), |s| format!("{sign}{s}"))
}

pub fn compare(a: &GramForm, b: &GramForm) -> CompareReport {
    let mut inv = Vec::new();
    let mut push = |key, left: String, right: String, differs| {
        inv.push(Invariant {
            key,
            left,
            right,
            differs,
        })
    };
    push("rank", a.rank.to_string(), b.rank.to_string(), a.rank != b.rank);
    push("det", a.det.to_string(), b.det.to_string(), a.det != b.det);
    push(
        "det_mod_squares",
        squarefree_label(&a.det),
        squarefree_label(&b.det),
        !same_mod_squares(&a.det, &b.det),
    );
    push("snf", join(&a.snf), join(&b.snf), a.snf != b.snf);
    push("even", a.even.to_string(), b.even.to_string(), a.even != b.even);
    push(
        "positive_definite",
        a.positive_definite.to_string(),
        b.positive_definite.to_string(),
        a.positive_definite != b.positive_definite,
    );
    let (ra, rb) = (a.absolute_block.nrows(), b.absolute_block.nrows());
    push("absolute_rank", ra.to_string(), rb.to_string(), ra != rb);
    push(
        "absolute_det",
        a.absolute_det.to_string(),
        b.absolute_det.to_string(),
        a.absolute_det != b.absolute_det,
    );
    push(
        "absolute_det_mod_squares",
        squarefree_label(&a.absolute_det),
        squarefree_label(&b.absolute_det),
        !same_mod_squares(&a.absolute_det, &b.absolute_det),
    );
    push(
        "absolute_snf",
        join(&a.absolute_snf),
        join(&b.absolute_snf),
        a.absolute_snf != b.absolute_snf,
    );
    push(
        "even_absolute",
        a.even_absolute.to_string(),
        b.even_absolute.to_string(),
        a.even_absolute != b.even_absolute,
    );
    CompareReport { invariants: inv }
}
