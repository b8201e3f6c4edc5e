//! Screw numbers from the twist formula.
//!
//! For a bamboo with multiplicities `m_0, …, m_k` and `d = gcd(m_i, m_{i+1})`,
//! the screw number of the monodromy is `d²·Σ 1/(m_i·m_{i+1})` and the
//! integer edge weight of its `e`-th power is `(e/d)` times that.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{BambooKind, Decomposition, ResolutionGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrewEntry {
    pub bamboo: String,
    pub kind: BambooKind,
    pub d: u64,
    pub scn: BigRational,
    pub s: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrewAssignment {
    pub e: BigInt,
    pub entries: Vec<ScrewEntry>,
}

impl ScrewAssignment {
    pub fn get(&self, bamboo: &str) -> Option<&ScrewEntry> {
        self.entries.iter().find(|s| s.bamboo == bamboo)
    }
}

/// `e = lcm` of the node multiplicities.
pub fn exponent_e(graph: &ResolutionGraph, mults: &[u64]) -> Result<BigInt> {
    let nodes = graph.nodes();
    if nodes.is_empty() {
        return Err(Error::NoNode);
    }
    Ok(nodes.iter().fold(BigInt::one(), |acc, &v| acc.lcm(&BigInt::from(mults[v]))))
}

/// The common gcd of consecutive multiplicities, if it is constant.
pub fn bamboo_gcd(mults: &[u64]) -> Option<u64> {
    let mut gcds = mults.windows(2).map(|w| w[0].gcd(&w[1]));
    let d = gcds.next()?;
    gcds.all(|g| g == d).then_some(d)
}

/// Screw number and integer weight of one bamboo.
pub fn screw_of_bamboo(id: &str, kind: BambooKind, mults: &[u64], e: &BigInt) -> Result<ScrewEntry> {
    if mults.len() < 2 || mults.contains(&0) {
        return Err(Error::InvalidValue {
            id: id.to_string(),
            reason: "bamboo needs at least two positive multiplicities".into(),
        });
    }
    let d = bamboo_gcd(mults).ok_or_else(|| Error::NonConstantGcd { bamboo: id.to_string() })?;
    let sum: BigRational = mults
        .windows(2)
        .map(|w| BigRational::new(BigInt::one(), BigInt::from(w[0]) * BigInt::from(w[1])))
        .sum();
    let dd = BigInt::from(d);
    let scn = BigRational::from_integer(&dd * &dd) * &sum;
    let weight = BigRational::from_integer(e.clone()) * BigRational::from_integer(dd.clone()) * &sum;
    if !weight.is_integer() || !weight.is_positive() {
        return Err(Error::NonIntegralScrew {
            bamboo: id.to_string(),
            value: weight.to_string(),
        });
    }
    Ok(ScrewEntry {
        bamboo: id.to_string(),
        kind,
        d,
        scn,
        s: weight.to_integer(),
    })
}

/// Screw data for every bamboo of the decomposition.
pub fn compute_screws(graph: &ResolutionGraph, dec: &Decomposition, mults: &[u64]) -> Result<ScrewAssignment> {
    let e = exponent_e(graph, mults)?;
    let entries = dec
        .bamboos
        .iter()
        .map(|b| screw_of_bamboo(&b.id, b.kind(), &b.multiplicities(graph, mults), &e))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScrewAssignment { e, entries })
}
