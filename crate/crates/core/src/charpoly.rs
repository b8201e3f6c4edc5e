//! Characteristic polynomials as products of `(t^n − 1)^k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{NtGraph, ResolutionGraph};

/// `∏ (t^n − 1)^{k_n}`, stored without zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FactoredCyclo(BTreeMap<u64, i64>);

impl FactoredCyclo {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut f = Self::one();
        for (n, k) in factors {
            f.mul_factor(n, k);
        }
        f
    }

    /// Multiplies by `(t^n − 1)^k`.
    pub fn mul_factor(&mut self, n: u64, k: i64) {
        assert!(n > 0, "cyclotomic factor t^0 - 1 vanishes");
        let e = self.0.entry(n).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&n);
        }
    }

    pub fn mul(&self, other: &FactoredCyclo) -> FactoredCyclo {
        let mut out = self.clone();
        for (&n, &k) in &other.0 {
            out.mul_factor(n, k);
        }
        out
    }

    pub fn exponent(&self, n: u64) -> i64 {
        self.0.get(&n).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&n, &k)| (n, k))
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(&n, &k)| n as i64 * k).sum()
    }

    /// Integer coefficients, constant term first, or `None` when the
    /// quotient is not a polynomial.
    pub fn expand(&self) -> Option<Vec<BigInt>> {
        let mut num = vec![BigInt::one()];
        let mut den = vec![BigInt::one()];
        for (&n, &k) in &self.0 {
            let target = if k > 0 { &mut num } else { &mut den };
            for _ in 0..k.unsigned_abs() {
                *target = mul_binomial(target, n as usize);
            }
        }
        exact_div(&num, &den)
    }
}

impl fmt::Display for FactoredCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let num = self.0.iter().filter(|(_, &k)| k > 0);
        let den = self.0.iter().filter(|(_, &k)| k < 0);
        let parts: Vec<String> = num.chain(den).map(|(n, k)| format!("(t^{n}-1)^{k}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Multiplies `p` by `t^n − 1`.
fn mul_binomial(p: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + n];
    for (i, c) in p.iter().enumerate() {
        out[i + n] += c;
        out[i] -= c;
    }
    out
}

/// Exact polynomial division of monic-up-to-sign polynomials (constant term
/// first).
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let lead = den.last()?;
    if num.len() < den.len() {
        return num.iter().all(Zero::is_zero).then(|| vec![BigInt::zero()]);
    }
    let mut rem = num.to_vec();
    let mut q = vec![BigInt::zero(); num.len() - den.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + den.len() - 1];
        let (c, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(q)
}

/// Characteristic polynomial of the monodromy on H₁(F) for a graph whose
/// vertices all have genus zero.
pub fn delta(graph: &ResolutionGraph, mults: &[u64]) -> Result<FactoredCyclo> {
    if let Some(v) = graph.vertices().iter().find(|v| v.genus > 0) {
        return Err(Error::NonRationalVertex(v.id.clone()));
    }
    let d = graph.arrows().iter().map(|a| a.mult).reduce(|a, b| a.gcd(&b)).ok_or(Error::NoArrowheads)?;
    let mut f = FactoredCyclo::from_factors([(d, 1)]);
    for (v, &m) in mults.iter().enumerate().take(graph.vertices().len()) {
        let chi = graph.class_of(v).chi;
        if chi != 0 {
            f.mul_factor(m, -chi);
        }
    }
    if f.expand().is_none() {
        return Err(Error::NonPolynomial(f.to_string()));
    }
    Ok(f)
}

pub fn milnor_number(graph: &ResolutionGraph, mults: &[u64]) -> Result<u64> {
    let d = delta(graph, mults)?.degree();
    u64::try_from(d).map_err(|_| Error::NonPolynomial(format!("negative degree {d}")))
}

/// Characteristic polynomial of the induced action on H₁(Γ_ss), from the
/// permutation action on pieces and edges.
pub fn delta2(nt: &NtGraph) -> Result<FactoredCyclo> {
    let mut f = FactoredCyclo::from_factors([(1, 1)]);
    for n in nt.edge_orbit_sizes().into_values() {
        f.mul_factor(n, 1);
    }
    for n in nt.piece_orbit_sizes().into_values() {
        f.mul_factor(n, -1);
    }
    if f.expand().is_none() || f.degree() != nt.betti_number() as i64 {
        return Err(Error::NonPolynomialDelta2(f.to_string()));
    }
    Ok(f)
}

/// Number of size-2 Jordan blocks of the monodromy: `b₁(Γ_ss)`.
pub fn jordan_block_count(nt: &NtGraph) -> usize {
    nt.betti_number()
}

/// Formats coefficients, highest degree first, as `t^2 + t + 1`.
pub fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let a = c.abs();
        let mono = match deg {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{deg}"),
        };
        if mono.is_empty() || !a.is_one() {
            out.push_str(&a.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
