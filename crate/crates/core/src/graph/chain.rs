use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::nt::{Cell, NtGraph};

/// Integer 1-chain on a Nielsen–Thurston graph, relative to each edge's
/// reference orientation. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OneChain {
    coeffs: BTreeMap<String, i64>,
}

impl OneChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut c = Self::zero();
        for (id, k) in terms {
            c.add(id, k);
        }
        c
    }

    pub fn add(&mut self, id: &str, k: i64) {
        let entry = self.coeffs.entry(id.to_string()).or_insert(0);
        *entry += k;
        if *entry == 0 {
            self.coeffs.remove(id);
        }
    }

    pub fn coeff(&self, id: &str) -> i64 {
        self.coeffs.get(id).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.coeffs.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn scaled_add(&mut self, other: &OneChain, k: i64) {
        for (id, c) in other.terms() {
            self.add(id, k * c);
        }
    }

    /// Net coefficient per cell of `nt`; fails on ids the graph lacks.
    pub fn resolve(&self, nt: &NtGraph) -> Result<Vec<(Cell, i64)>> {
        self.terms()
            .map(|(id, k)| nt.cell(id).map(|c| (c, k)).ok_or_else(|| Error::UnknownEdge(id.to_string())))
            .collect()
    }

    /// Boundary at the pieces (arrowhead ends are not recorded).
    pub fn piece_boundary(&self, nt: &NtGraph) -> Result<Vec<i64>> {
        let mut bd = vec![0i64; nt.pieces().len()];
        for (cell, k) in self.resolve(nt)? {
            match cell {
                Cell::Edge(i) => {
                    let e = &nt.edges()[i];
                    bd[e.dst] += k;
                    bd[e.src] -= k;
                }
                Cell::Arrow(i) => bd[nt.arrows()[i].piece] -= k,
            }
        }
        Ok(bd)
    }

    /// Zero boundary at every piece: a class in H₁(Γ, arrowheads).
    pub fn is_relative_cycle(&self, nt: &NtGraph) -> Result<bool> {
        Ok(self.piece_boundary(nt)?.iter().all(|&b| b == 0))
    }

    /// A relative cycle that avoids the arrows: a class in H₁(Γ).
    pub fn is_absolute_cycle(&self, nt: &NtGraph) -> Result<bool> {
        let touches_arrow = self.resolve(nt)?.iter().any(|(c, _)| matches!(c, Cell::Arrow(_)));
        Ok(!touches_arrow && self.is_relative_cycle(nt)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedChain {
    pub name: String,
    pub chain: OneChain,
}

impl NamedChain {
    pub fn new(name: impl Into<String>, chain: OneChain) -> Self {
        NamedChain {
            name: name.into(),
            chain,
        }
    }
}
