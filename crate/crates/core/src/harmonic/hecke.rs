use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::Cocycle;
use crate::error::{Error, Result};
use crate::lattice::{kernel, rat, RatMat};
use crate::padic::is_prime;
use crate::quaternion::Quat;
use crate::tree::{ArithmeticGroup, QuotientGraph};

/// A Hecke operator at a good prime: representatives of the `l + 1` left
/// `Gamma`-cosets of norm-`l` elements of `R`, and its matrix on edge
/// representatives.
#[derive(Clone, Debug)]
pub struct HeckeData {
    pub l: u64,
    pub cosets: Vec<Quat>,
    pub matrix: RatMat,
}

/// Elements `alpha_0, ..., alpha_l` of `R` of norm `l` with `Gamma alpha Gamma`
/// the disjoint union of the `Gamma alpha_i`.
pub fn hecke_cosets(g: &ArithmeticGroup, l: u64) -> Result<Vec<Quat>> {
    let o = &g.order;
    let p = o.p;
    if !is_prime(l) || l == p || o.alg().disc % l == 0 || o.level % l == 0 {
        return Err(Error::BadHeckePrime(l));
    }
    let inv_l = rat(l as i64).recip();
    let mut reps: Vec<Quat> = Vec::new();
    for j in 0..8u32 {
        let pj = BigInt::from(p).pow(j);
        let m = BigInt::from(l) * &pj * &pj;
        let s = BigRational::new(1.into(), pj);
        for x in o.order.norm_form_enumerate(&m) {
            let a = x.scale(&s);
            if reps.iter().any(|b| o.contains_r(&b.mul(&a.conj()).scale(&inv_l))) {
                continue;
            }
            reps.push(a);
            if reps.len() == l as usize + 1 {
                return Ok(reps);
            }
        }
    }
    Err(Error::CountMismatch { found: reps.len(), expected: l as usize + 1 })
}

/// `M[k][i]`: the coefficient of `c(r_i)` in `(sum_j c|x_j)(r_k)`, where
/// `(c|x)(e) = c(x e)`.
fn action_matrix(q: &QuotientGraph, g: &ArithmeticGroup, xs: &[Quat]) -> Result<RatMat> {
    let n = q.edges.len();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for (k, e) in q.edges.iter().enumerate() {
        for x in xs {
            let glue = q.reduce_edge(g, &g.act_edge(x, e)?)?;
            m[k][glue.rep] += rat(glue.sign as i64);
        }
    }
    Ok(m)
}

pub fn hecke_matrix(q: &QuotientGraph, g: &ArithmeticGroup, l: u64) -> Result<HeckeData> {
    let cosets = hecke_cosets(g, l)?;
    let matrix = action_matrix(q, g, &cosets)?;
    Ok(HeckeData { l, cosets, matrix })
}

/// The involution `c -> c(w e)` for the stored element `w` of norm `p`.
pub fn atkin_lehner_matrix(q: &QuotientGraph, g: &ArithmeticGroup) -> Result<RatMat> {
    action_matrix(q, g, std::slice::from_ref(&q.atkin_lehner))
}

impl HeckeData {
    pub fn apply(&self, c: &Cocycle) -> Cocycle {
        Cocycle { values: apply(&self.matrix, c) }
    }
}

pub fn apply(m: &RatMat, c: &Cocycle) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(&c.values).map(|(a, b)| a * b).sum()).collect()
}

/// The common eigenline of `T_l = a_l` for the good primes `l <= bound`
/// inside the harmonic cocycles, as a primitive integral cocycle.
pub fn eigencocycle(q: &QuotientGraph, g: &ArithmeticGroup, a: &BTreeMap<u64, i64>, bound: u64) -> Result<Cocycle> {
    let n = q.edges.len();
    let level = g.order.alg().disc * g.order.level * g.order.p;
    let mut rows = super::harmonic_constraints(q);
    let mut used = 0;
    for l in (2..=bound).filter(|&l| is_prime(l) && level % l != 0) {
        let al = *a.get(&l).ok_or_else(|| Error::EigenspaceNotFound(format!("no a_{l} supplied")))?;
        let h = hecke_matrix(q, g, l)?;
        for (k, mut row) in h.matrix.into_iter().enumerate() {
            row[k] -= rat(al);
            rows.push(row);
        }
        used += 1;
    }
    let ker = kernel(&rows, n);
    match ker.len() {
        0 => Err(Error::EigenspaceNotFound(format!("no common eigenvector for {used} Hecke operators"))),
        1 => Ok(Cocycle { values: ker.into_iter().next().unwrap() }.primitive()),
        d => Err(Error::EigenspaceNotLine(d)),
    }
}

/// `lambda` with `c(w e) = lambda c(e)` for an eigencocycle `c`.
pub fn atkin_lehner_eigenvalue(q: &QuotientGraph, g: &ArithmeticGroup, c: &Cocycle) -> Result<BigRational> {
    let w = apply(&atkin_lehner_matrix(q, g)?, c);
    let (k, v) = c.values.iter().enumerate().find(|(_, v)| !v.is_zero()).ok_or_else(|| Error::Invariant("zero cocycle".into()))?;
    let lambda = &w[k] / v;
    if c.values.iter().zip(&w).any(|(x, y)| &(x * &lambda) != y) {
        return Err(Error::Invariant("not an Atkin-Lehner eigenvector".into()));
    }
    Ok(lambda)
}
