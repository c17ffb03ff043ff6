use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Polynomials of degree at most `k - 2` (coefficient vectors, constant term
/// first) and their duals, with the weight-`k` action of `GL_2(Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoeffModule {
    pub k: u32,
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(a: &[BigRational], n: u32) -> Vec<BigRational> {
    let mut acc = vec![BigRational::one()];
    for _ in 0..n {
        acc = poly_mul(&acc, a);
    }
    acc
}

impl CoeffModule {
    pub fn new(k: u32) -> Result<CoeffModule> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::UnsupportedWeight(k));
        }
        Ok(CoeffModule { k })
    }

    pub fn dim(&self) -> usize {
        (self.k - 1) as usize
    }

    /// `P . beta = (cx + d)^{k-2} det(beta)^{-(k-2)/2} P((ax + b)/(cx + d))`.
    pub fn act_right(&self, poly: &[BigRational], beta: &[BigRational; 4]) -> Vec<BigRational> {
        let n = self.k - 2;
        let [a, b, c, d] = beta;
        let num = [b.clone(), a.clone()];
        let den = [d.clone(), c.clone()];
        let mut out = vec![BigRational::zero(); self.dim()];
        for (i, coef) in poly.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = poly_mul(&poly_pow(&num, i as u32), &poly_pow(&den, n - i as u32));
            for (j, t) in term.into_iter().enumerate() {
                out[j] += coef * t;
            }
        }
        let det = a * d - b * c;
        let s = num_traits::pow(det, (n / 2) as usize);
        out.into_iter().map(|x| x / &s).collect()
    }

    /// `(beta . mu)(P) = mu(P . beta)`, with `mu` given by its values on the
    /// monomials.
    pub fn act_left_dual(&self, mu: &[BigRational], beta: &[BigRational; 4]) -> Vec<BigRational> {
        (0..self.dim())
            .map(|i| {
                let mut e = vec![BigRational::zero(); self.dim()];
                e[i] = BigRational::one();
                self.act_right(&e, beta).iter().zip(mu).map(|(x, y)| x * y).sum()
            })
            .collect()
    }

    /// The binomial-weighted pairing on monomials, `<x^i, x^j>` nonzero only
    /// for `i + j = k - 2`. Only used as a structural placeholder for `k > 2`.
    pub fn monomial_weight(&self, i: usize) -> BigRational {
        let n = (self.k - 2) as usize;
        let s = if i % 2 == 0 { 1 } else { -1 };
        BigRational::new(BigInt::from(s), binomial(BigInt::from(n), BigInt::from(i)))
    }
}
