use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::harmonic::Cocycle;
use crate::padic::{Mat2, Padic};
use crate::tree::{ArithmeticGroup, QuotientGraph};

/// Truncated power series over `Z_p`, constant term first.
pub(crate) fn mul_trunc(a: &[Padic], b: &[Padic], deg: usize) -> Vec<Padic> {
    let prime = a[0].prime().clone();
    let prec = a.iter().chain(b).map(Padic::prec).min().unwrap();
    let mut out = vec![Padic::zero(&prime, prec); deg + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Taylor coefficients at `u = 0` of `(a u + b) / (c u + d)`, which must have
/// no pole on the closed unit disc.
pub(crate) fn mobius_series(m: &Mat2, deg: usize) -> Result<Vec<Padic>> {
    if m.c.val_or_prec() <= m.d.val_or_prec() {
        return Err(Error::Invariant("chart has a pole on the unit disc".into()));
    }
    let inv_d = m.d.inv()?;
    let ratio = m.c.mul(&inv_d).neg();
    let mut out = vec![m.b.mul(&inv_d)];
    let mut term = m.det().mul(&inv_d).mul(&inv_d);
    for _ in 1..=deg {
        out.push(term.clone());
        term = term.mul(&ratio);
    }
    Ok(out)
}

/// The moments `int_{U(e)} u^r d mu` for `r <= degree`, where `u` is the
/// coordinate of the chart `Z_p -> U(e)` of each oriented edge class.
#[derive(Clone, Debug)]
pub struct Moments {
    pub degree: usize,
    pub prec: i64,
    /// `values[k][s][r]` for representative `k` (`s = 0`) or its reverse (`s = 1`).
    pub values: Vec<[Vec<Padic>; 2]>,
    pub charts: Vec<[Mat2; 2]>,
    pub iterations: usize,
}

struct Link {
    target: (usize, usize),
    /// `coef[j][r]`: coefficient of `u^r` in `L(u)^j`.
    coef: Vec<Vec<Padic>>,
}

impl Moments {
    /// Solve the refinement relations
    /// `m_e(j) = sum over children e' of int_{U(e')} (chart_e^{-1} x)^j d mu`
    /// by fixed-point iteration; the constant terms are the cocycle values
    /// and every higher term is contracted by at least one power of `p`.
    pub fn compute(q: &QuotientGraph, g: &ArithmeticGroup, c: &Cocycle, prec: i64, degree: usize) -> Result<Moments> {
        let prime = g.prime().clone();
        let t = &g.tree;
        let n = q.edges.len();
        let charts: Vec<[Mat2; 2]> = q
            .edges
            .iter()
            .map(|e| Ok([g.chart(&t.edge_chart(e))?, g.chart(&t.edge_chart(&e.reverse()))?]))
            .collect::<Result<_>>()?;
        let mut links: Vec<[Vec<Link>; 2]> = Vec::with_capacity(n);
        for k in 0..n {
            let mut sides: [Vec<Link>; 2] = [Vec::new(), Vec::new()];
            for s in 0..2 {
                let inv = charts[k][s].inv()?;
                for glue in &q.children[k][s] {
                    let side = if glue.sign == 1 { 0 } else { 1 };
                    let l = inv.mul(&g.iota(&glue.gamma.conj())?).mul(&charts[glue.rep][side]);
                    let series = mobius_series(&l, degree)?;
                    let mut coef = Vec::with_capacity(degree + 1);
                    let mut pow = vec![Padic::one(&prime, prec)];
                    pow.resize(degree + 1, Padic::zero(&prime, prec));
                    for _ in 0..=degree {
                        coef.push(pow.clone());
                        pow = mul_trunc(&pow, &series, degree);
                    }
                    sides[s].push(Link { target: (glue.rep, side), coef });
                }
            }
            links.push(sides);
        }

        let exact = |v: &BigRational| Padic::from_rational(&prime, v, prec);
        let mut values: Vec<[Vec<Padic>; 2]> = (0..n)
            .map(|k| {
                let init = |sign: BigRational| -> Result<Vec<Padic>> {
                    let mut v = vec![exact(&(sign * &c.values[k]))?];
                    v.resize(degree + 1, Padic::zero(&prime, prec));
                    Ok(v)
                };
                Ok([init(BigRational::from_integer(1.into()))?, init(BigRational::from_integer((-1).into()))?])
            })
            .collect::<Result<_>>()?;

        // total masses must already be additive
        for k in 0..n {
            for s in 0..2 {
                let mut sum = Padic::zero(&prime, prec);
                for link in &links[k][s] {
                    sum = sum.add(&values[link.target.0][link.target.1][0]);
                }
                if !sum.approx_eq(&values[k][s][0]) {
                    return Err(Error::Invariant(format!("cocycle is not harmonic at edge {k}")));
                }
            }
        }

        let max_iter = 2 * prec as usize + degree + 10;
        let mut iterations = 0;
        loop {
            iterations += 1;
            let mut next = values.clone();
            for k in 0..n {
                for s in 0..2 {
                    for j in 1..=degree {
                        let mut acc = Padic::zero(&prime, prec);
                        for link in &links[k][s] {
                            let src = &values[link.target.0][link.target.1];
                            for (cf, m) in link.coef[j].iter().zip(src) {
                                if !cf.is_zero() && !m.is_zero() {
                                    acc = acc.add(&cf.mul(m));
                                }
                            }
                        }
                        next[k][s][j] = acc.with_prec(prec);
                    }
                }
            }
            let done = next.iter().zip(&values).all(|(a, b)| (0..2).all(|s| a[s].iter().zip(&b[s]).all(|(x, y)| x.approx_eq(y))));
            values = next;
            if done {
                break;
            }
            if iterations > max_iter {
                return Err(Error::PrecisionExhausted("moment iteration did not settle".into()));
            }
        }
        Ok(Moments { degree, prec, values, charts, iterations })
    }

    pub fn of(&self, rep: usize, sign: i8) -> &[Padic] {
        &self.values[rep][if sign == 1 { 0 } else { 1 }]
    }

    pub fn chart_of(&self, rep: usize, sign: i8) -> &Mat2 {
        &self.charts[rep][if sign == 1 { 0 } else { 1 }]
    }
}
