//! Partial and full anticyclotomic p-adic L-functions of weight 2 at the
//! centre, their derivative in `s`, and the sign of the functional
//! equation.

mod sign;

use std::sync::Arc;

use num_rational::BigRational;

use crate::classfield::Character;
use crate::embeddings::{fixed_points, EmbeddingSystem, GDomain};
use crate::error::{Error, Result};
use crate::measure::{LinearRatio, Measure, Moments, Piece};
use crate::padic::{BranchedLog, Mat2, Padic, QuadExt, QuadPadic};

pub use sign::{sign, SignReport};

/// `sum_j c_j zeta_m^j`, kept as coefficients so that characters whose
/// values are not in `Q_p` need no extension.
#[derive(Clone, Debug)]
pub struct ChiSum {
    pub m: u32,
    pub coeffs: Vec<QuadPadic>,
}

impl ChiSum {
    pub fn combine(chi: &Character, terms: &[QuadPadic]) -> ChiSum {
        let m = chi.m.max(1);
        let ext = terms[0].ext();
        let prec = terms.iter().map(QuadPadic::prec).min().unwrap();
        let mut coeffs = vec![QuadPadic::zero(ext, prec); m as usize];
        for (i, t) in terms.iter().enumerate() {
            let j = (chi.exps[i] % m) as usize;
            coeffs[j] = coeffs[j].add(t);
        }
        ChiSum { m, coeffs }
    }

    /// The value in `K_p`, when `mu_m` lies in `Q_p`.
    pub fn eval(&self) -> Option<QuadPadic> {
        let ext = self.coeffs[0].ext();
        let prec = self.coeffs[0].prec();
        let zeta = crate::classfield::RootOfUnity::new(self.m, 1).to_padic(ext.prime(), prec)?;
        let mut acc = QuadPadic::zero(ext, prec);
        let mut pow = Padic::one(ext.prime(), prec);
        for c in &self.coeffs {
            acc = acc.add(&c.mul_padic(&pow));
            pow = pow.mul(&zeta);
        }
        Some(acc)
    }

    pub fn scale(&self, x: &QuadPadic) -> ChiSum {
        ChiSum { m: self.m, coeffs: self.coeffs.iter().map(|c| c.mul(x)).collect() }
    }

    /// Least valuation of `self - other` coefficientwise, in units of the
    /// uniformizer of `K_p`. A difference that is zero to its precision
    /// counts as agreement to that precision only.
    pub fn distance(&self, other: &ChiSum) -> i64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let d = a.sub(b);
                match d.vale() {
                    Some(v) => v,
                    None if d.prec() >= crate::padic::EXACT => i64::MAX / 4,
                    None => d.ext().e() * d.prec(),
                }
            })
            .min()
            .unwrap_or(i64::MAX / 4)
    }
}

/// The data attached to `Psi_i` for each `i` in `Delta`.
#[derive(Clone, Debug)]
pub struct Partial {
    pub domain: GDomain,
    pub z: QuadPadic,
    pub zbar: QuadPadic,
}

/// The partial L-values at the centre of one embedding.
#[derive(Clone, Debug)]
pub struct CentralValue {
    /// Sum of the cocycle over the edges of the fundamental domain.
    pub exact: BigRational,
    pub numeric: QuadPadic,
}

/// Derivative at the centre by the two routes.
#[derive(Clone, Debug)]
pub struct Derivative {
    /// `sum chi(sigma_i) int_G log g d mu_{f, Psi_i}` over the fundamental domain.
    pub route_a: ChiSum,
    /// `2 sum chi(sigma_i) int_{zbar_i}^{z_i} f(z) dz`.
    pub route_b: ChiSum,
    /// `-(1/kappa) sum chi(sigma_i) int_{zbar_i}^{z_i} f(z) dz`, which is what
    /// the fundamental-domain integral equals when the measure is invariant
    /// under the uniformizer.
    pub route_b_corrected: ChiSum,
    pub kappa: usize,
}

impl Derivative {
    /// Valuations of `A - B` and `A - B'` in units of the uniformizer.
    pub fn agreement(&self) -> (i64, i64) {
        (self.route_a.distance(&self.route_b), self.route_a.distance(&self.route_b_corrected))
    }
}

/// An eigencocycle's measure, its moments and an embedding system, ready to
/// integrate.
pub struct LFunction<'a> {
    pub m: Measure<'a>,
    pub mom: &'a Moments,
    pub sys: &'a EmbeddingSystem,
    pub ext: Arc<QuadExt>,
    pub log: BranchedLog,
    pub partials: Vec<Partial>,
}

impl<'a> LFunction<'a> {
    pub fn new(m: Measure<'a>, mom: &'a Moments, sys: &'a EmbeddingSystem, log: BranchedLog) -> Result<LFunction<'a>> {
        let ext = QuadExt::ramified(m.g.prime(), sys.field.disc)?;
        let partials = (0..sys.orbit.len())
            .map(|i| {
                let emb = sys.psi(i);
                let domain = GDomain::new(&sys.field, m.g, emb)?;
                let (z, zbar) = fixed_points(m.g, emb, &ext, sys.field.disc)?;
                Ok(Partial { domain, z, zbar })
            })
            .collect::<Result<_>>()?;
        Ok(LFunction { m, mom, sys, ext, log, partials })
    }

    fn charts(&self, pieces: Vec<Piece>) -> Result<Vec<(Piece, Mat2)>> {
        pieces.into_iter().map(|p| Ok((p.clone(), self.m.chart(self.mom, &p)?))).collect()
    }

    /// `L_p(E/K, Psi_i, 1)`: the measure of the fundamental domain, as the
    /// exact edge sum and through the moments.
    pub fn partial_at_center(&self, i: usize) -> Result<CentralValue> {
        let d = &self.partials[i].domain;
        let exact = d.mass(&self.m)?;
        let pieces = self.charts(d.pieces(&self.m)?)?;
        let one = QuadPadic::one(&self.ext, self.mom.prec);
        let numeric = self.m.integrate_series(self.mom, &pieces, |_, _| Ok(vec![one.clone()]))?;
        Ok(CentralValue { exact, numeric })
    }

    pub fn route_a(&self, i: usize) -> Result<QuadPadic> {
        let pt = &self.partials[i];
        pt.domain.log_integral(&self.m, self.mom, &pt.z, &pt.zbar, &self.log)
    }

    /// `int_{zbar}^{z} f(z) dz`.
    pub fn coleman(&self, i: usize) -> Result<QuadPadic> {
        let pt = &self.partials[i];
        self.m.coleman_integral(self.mom, &pt.zbar, &pt.z, &self.log)
    }

    pub fn derivative(&self, chi: &Character) -> Result<Derivative> {
        let n = self.partials.len();
        let a: Vec<QuadPadic> = (0..n).map(|i| self.route_a(i)).collect::<Result<_>>()?;
        let b: Vec<QuadPadic> = (0..n).map(|i| self.coleman(i)).collect::<Result<_>>()?;
        let kappa = self.partials[0].domain.kappa;
        let b_sum = ChiSum::combine(chi, &b);
        let two = QuadPadic::from_int(&self.ext, 2, crate::padic::EXACT);
        let minus_inv_kappa = QuadPadic::from_padic(&self.ext, Padic::from_ratio(self.ext.prime(), -1, kappa as i64, self.mom.prec)?);
        Ok(Derivative {
            route_a: ChiSum::combine(chi, &a),
            route_b: b_sum.scale(&two),
            route_b_corrected: b_sum.scale(&minus_inv_kappa),
            kappa,
        })
    }

    /// `int_F exp(h log g) d mu_{f, Psi_i}`, the partial L-function at
    /// `s = 1 + h`.
    pub fn partial_series(&self, i: usize, h: &Padic) -> Result<QuadPadic> {
        let pt = &self.partials[i];
        let (z1, z2) = (&pt.zbar, &pt.z);
        let e = self.ext.e();
        let pieces = self.m.adaptive(self.mom, pt.domain.pieces(&self.m)?, 60, |chart| {
            Ok(LinearRatio::on_chart(chart, z1, z2)?.slope() >= e)
        })?;
        let hq = QuadPadic::from_padic(&self.ext, h.clone());
        let deg = self.mom.degree;
        self.m.integrate_series(self.mom, &pieces, |_, chart| {
            let lr = LinearRatio::on_chart(chart, z1, z2)?;
            let c0 = hq.mul(&self.log.log_quad(&lr.g0)?).exp()?;
            let tail: Vec<QuadPadic> = lr.log_tail(deg).iter().map(|t| t.mul(&hq)).collect();
            Ok(series_exp(&c0, &tail, self.mom.prec))
        })
    }

    /// `L_p(E/K, chi, s)` at `s = 1 + h` for each `h`.
    pub fn series(&self, chi: &Character, hs: &[Padic]) -> Result<Vec<ChiSum>> {
        hs.iter()
            .map(|h| {
                let terms: Vec<QuadPadic> = (0..self.partials.len()).map(|i| self.partial_series(i, h)).collect::<Result<_>>()?;
                Ok(ChiSum::combine(chi, &terms))
            })
            .collect()
    }

    /// `(L(1 + h) - L(1 - h)) / 2h` for `h = p^t`.
    pub fn central_difference(&self, chi: &Character, t: i64) -> Result<ChiSum> {
        let prime = self.ext.prime();
        let h = Padic::from_bigint(prime, &prime.pow(t), self.mom.prec + t);
        let vals = self.series(chi, &[h.clone(), h.neg()])?;
        let inv = QuadPadic::from_padic(&self.ext, h.mul_int(2).inv()?);
        Ok(ChiSum {
            m: vals[0].m,
            coeffs: vals[0].coeffs.iter().zip(&vals[1].coeffs).map(|(a, b)| a.sub(b).mul(&inv)).collect(),
        })
    }

    /// Fail with `RouteDisagreement` unless the corrected routes agree to
    /// `prec - slack` uniformizer digits.
    pub fn certify(&self, d: &Derivative, slack: i64) -> Result<i64> {
        let (_, corrected) = d.agreement();
        let need = self.ext.e() * self.mom.prec - slack;
        if corrected < need {
            return Err(Error::RouteDisagreement(format!("agreement to {corrected} digits, need {need}")));
        }
        Ok(corrected)
    }
}

/// Coefficients of `c0 exp(sum_{k >= 1} tail[k-1] u^k)` up to the length
/// of `tail`.
fn series_exp(c0: &QuadPadic, tail: &[QuadPadic], prec: i64) -> Vec<QuadPadic> {
    let ext = c0.ext();
    let mut e = vec![QuadPadic::one(ext, prec)];
    for k in 1..=tail.len() {
        let mut acc = QuadPadic::zero(ext, prec);
        for j in 1..=k {
            acc = acc.add(&tail[j - 1].mul_int(j as i64).mul(&e[k - j]));
        }
        e.push(acc.div_int(k as i64));
    }
    e.into_iter().map(|x| x.mul(c0)).collect()
}

#[cfg(test)]
mod tests;
