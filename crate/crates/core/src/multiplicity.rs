//! Multiplicity system of the total transform from Euler numbers.
//!
//! For every vertex `v`: `m_v·(E_v·E_v) + Σ_w m_w·(E_v·E_w) + a_v = 0`,
//! where `a_v` sums the multiplicities of arrowheads at `v`. The system has a
//! unique solution because the intersection matrix is negative definite.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;
use crate::linalg::{self, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    /// Vertex order follows the graph's declaration order.
    pub matrix: IntMatrix,
    pub arrow_load: Vec<BigInt>,
}

/// Diagonal `e_v + 2·(loops at v)`, off-diagonal the number of edges joining
/// the two vertices.
pub fn intersection_matrix(graph: &ResolutionGraph) -> Result<IntersectionMatrix> {
    let n = graph.vertices().len();
    let mut matrix = IntMatrix::zeros(n, n);
    for (i, v) in graph.vertices().iter().enumerate() {
        let e = v.euler.ok_or_else(|| Error::MissingEuler(v.id.clone()))?;
        matrix[(i, i)] = BigInt::from(e);
    }
    for e in graph.edges() {
        if e.is_loop() {
            matrix[(e.a, e.a)] += 2;
        } else {
            matrix[(e.a, e.b)] += 1;
            matrix[(e.b, e.a)] += 1;
        }
    }
    let mut arrow_load = vec![BigInt::zero(); n];
    for a in graph.arrows() {
        arrow_load[a.vertex] += a.mult;
    }
    Ok(IntersectionMatrix { matrix, arrow_load })
}

pub fn is_negative_definite(m: &IntMatrix) -> bool {
    linalg::is_negative_definite(m)
}

/// Solves `M·m = −a` exactly and checks that every entry is a positive
/// integer. Supplied `mult` decorations must agree with the solution.
pub fn solve_multiplicities(graph: &ResolutionGraph) -> Result<Vec<u64>> {
    let im = intersection_matrix(graph)?;
    if !is_negative_definite(&im.matrix) {
        return Err(Error::NotNegativeDefinite);
    }
    let rhs: Vec<BigInt> = im.arrow_load.iter().map(|a| -a).collect();
    let sol = linalg::solve(&im.matrix, &rhs).ok_or(Error::NotNegativeDefinite)?;
    let mut out = Vec::with_capacity(sol.len());
    for (v, x) in graph.vertices().iter().zip(&sol) {
        if !x.is_integer() {
            return Err(Error::NonIntegralSolution {
                vertex: v.id.clone(),
                value: x.to_string(),
            });
        }
        if !x.is_positive() {
            return Err(Error::NonPositiveSolution {
                vertex: v.id.clone(),
                value: x.to_string(),
            });
        }
        let m = x.to_integer().to_u64().ok_or_else(|| Error::Overflow(x.to_string()))?;
        if let Some(given) = v.mult {
            if given != m {
                return Err(Error::DecorationMismatch {
                    vertex: v.id.clone(),
                    given,
                    solved: m.to_string(),
                });
            }
        }
        out.push(m);
    }
    debug_assert!(residual_vanishes(&im, &out));
    Ok(out)
}

/// Multiplicities of a graph: solved from Euler numbers when present,
/// otherwise read from the `mult` decorations.
pub fn multiplicities(graph: &ResolutionGraph) -> Result<Vec<u64>> {
    if graph.has_euler() {
        solve_multiplicities(graph)
    } else {
        graph
            .vertices()
            .iter()
            .map(|v| v.mult.ok_or_else(|| Error::MissingMultiplicity(v.id.clone())))
            .collect()
    }
}

/// `M·m + a = 0` exactly.
pub fn residual_vanishes(im: &IntersectionMatrix, mults: &[u64]) -> bool {
    let n = mults.len();
    (0..n).all(|i| {
        let row: BigInt = (0..n).map(|j| &im.matrix[(i, j)] * BigInt::from(mults[j])).sum();
        (row + &im.arrow_load[i]).is_zero()
    })
}
