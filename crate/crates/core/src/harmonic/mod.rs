//! Weight-2 harmonic cocycles on the quotient graph, Hecke operators and the
//! eigencocycle of an elliptic curve.

mod coeff;
mod hecke;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{kernel, rank, RatMat};
use crate::tree::{ArithmeticGroup, Edge, QuotientGraph};

pub use coeff::CoeffModule;
pub use hecke::{apply, atkin_lehner_eigenvalue, atkin_lehner_matrix, eigencocycle, hecke_cosets, hecke_matrix, HeckeData};

/// Values of a weight-2 cocycle on the edge representatives of a quotient
/// graph. The value on any other edge is read off through its glue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub values: Vec<BigRational>,
}

impl Cocycle {
    pub fn zero(n: usize) -> Cocycle {
        Cocycle { values: vec![BigRational::zero(); n] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, t: &BigRational) -> Cocycle {
        Cocycle { values: self.values.iter().map(|v| v * t).collect() }
    }

    /// Integral multiple with coprime entries and positive first nonzero entry.
    pub fn primitive(&self) -> Cocycle {
        let Some(first) = self.values.iter().find(|v| !v.is_zero()) else {
            return self.clone();
        };
        let den = self.values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = self.values.iter().map(|v| (v * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let sign = if first.is_negative() { -BigInt::one() } else { BigInt::one() };
        Cocycle { values: ints.into_iter().map(|v| BigRational::from_integer(v / &g * &sign)).collect() }
    }

    /// Value on an arbitrary edge of the tree.
    pub fn value_on(&self, q: &QuotientGraph, g: &ArithmeticGroup, e: &Edge) -> Result<BigRational> {
        let glue = q.reduce_edge(g, e)?;
        let v = &self.values[glue.rep];
        Ok(if glue.sign == 1 { v.clone() } else { -v })
    }

    /// `<c, c> = sum w_e c(e)^2` over oriented edge classes, `w_e` the
    /// stabilizer order. Each representative accounts for itself and its
    /// reverse.
    pub fn pairing(&self, q: &QuotientGraph) -> BigRational {
        let s: BigRational = self
            .values
            .iter()
            .zip(&q.edge_stab)
            .map(|(v, &w)| v * v * BigRational::from_integer(BigInt::from(w)))
            .sum();
        s * BigRational::from_integer(BigInt::from(2))
    }

    /// Whether the sum over the `p + 1` edges leaving each vertex vanishes.
    pub fn is_harmonic(&self, q: &QuotientGraph) -> bool {
        harmonic_constraints(q).iter().all(|row| row.iter().zip(&self.values).map(|(a, b)| a * b).sum::<BigRational>().is_zero())
    }
}

/// One row per vertex representative: the sum over its star.
pub fn harmonic_constraints(q: &QuotientGraph) -> RatMat {
    q.vertex_star
        .iter()
        .map(|star| {
            let mut row = vec![BigRational::zero(); q.edges.len()];
            for glue in star {
                row[glue.rep] += BigRational::from_integer(BigInt::from(glue.sign));
            }
            row
        })
        .collect()
}

/// A basis of the harmonic cocycles of weight `k`; only `k = 2` is computed.
pub fn cocycle_space(q: &QuotientGraph, k: u32) -> Result<Vec<Cocycle>> {
    let cm = CoeffModule::new(k)?;
    if cm.k != 2 {
        return Err(Error::UnsupportedWeight(k));
    }
    let basis = kernel(&harmonic_constraints(q), q.edges.len());
    Ok(basis.into_iter().map(|values| Cocycle { values }).collect())
}

/// First Betti number of the quotient graph.
pub fn betti_number(q: &QuotientGraph) -> usize {
    q.edges.len() + 1 - q.vertices.len()
}

/// Rank of the vertex constraints, for comparison with the Euler
/// characteristic.
pub fn constraint_rank(q: &QuotientGraph) -> usize {
    rank(&harmonic_constraints(q), q.edges.len())
}

/// Coordinates of `c` in `basis`, assuming it lies in the span.
pub fn coordinates(basis: &[Cocycle], c: &Cocycle) -> Option<Vec<BigRational>> {
    // rows of the augmented system B^T x = c
    let n = basis.len();
    let m = c.values.len();
    let rows: RatMat = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = basis.iter().map(|b| b.values[i].clone()).collect();
            r.push(-c.values[i].clone());
            r
        })
        .collect();
    let ker = kernel(&rows, n + 1);
    let v = ker.into_iter().find(|v| !v[n].is_zero())?;
    let t = v[n].clone();
    Some(v[..n].iter().map(|x| x / &t).collect())
}
