use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{LocalCurve, LocalPoint, TateCurve};
use crate::classfield::Character;
use crate::curve::EllipticCurve;
use crate::embeddings::root_of_disc;
use crate::error::{Error, Result};
use crate::lfunction::{ChiSum, LFunction};
use crate::padic::{Padic, QuadExt, QuadPadic};

/// `r + s sqrt(D)` in `K = Q(sqrt D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElt {
    pub r: BigRational,
    pub s: BigRational,
}

impl KElt {
    pub fn rational(r: BigRational) -> KElt {
        KElt { r, s: BigRational::zero() }
    }

    pub fn add(&self, o: &KElt) -> KElt {
        KElt { r: &self.r + &o.r, s: &self.s + &o.s }
    }

    pub fn mul(&self, o: &KElt, d: i64) -> KElt {
        let d = BigRational::from_integer(d.into());
        KElt { r: &self.r * &o.r + d * &self.s * &o.s, s: &self.r * &o.s + &self.s * &o.r }
    }

    pub fn scale(&self, c: &BigRational) -> KElt {
        KElt { r: &self.r * c, s: &self.s * c }
    }

    pub fn conj(&self) -> KElt {
        KElt { r: self.r.clone(), s: -&self.s }
    }

    pub fn localize(&self, root_d: &QuadPadic, prec: i64) -> Result<QuadPadic> {
        let prime = root_d.prime();
        let r = Padic::from_rational(prime, &self.r, prec)?;
        let s = Padic::from_rational(prime, &self.s, prec)?;
        Ok(root_d.mul_padic(&s).add_padic(&r))
    }
}

/// A point of `E(K)` on the given model, known exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoint {
    pub d: i64,
    pub x: KElt,
    pub y: KElt,
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl KPoint {
    /// The image in `E(K)` of a point `(x, y)` on the short model of the
    /// twist `y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3`.
    pub fn from_twist(curve: &EllipticCurve, d: i64, x: BigRational, y: BigRational) -> Result<KPoint> {
        let tw = curve.twist_short(d);
        if !tw.is_on(&Some((x.clone(), y.clone()))) {
            return Err(Error::Config(format!("({x}, {y}) is not on the twist by {d}")));
        }
        let dq = BigRational::from_integer(d.into());
        // short model of E: X = x/d, Y = y sqrt(d) / d^2
        let xs = &x / &dq;
        let ys = KElt { r: BigRational::zero(), s: &y / (&dq * &dq) };
        let x0 = (&xs - rat(&curve.b2()) * BigRational::from_integer(3.into())) / BigRational::from_integer(36.into());
        let xe = KElt::rational(x0.clone());
        let half = BigRational::new(1.into(), 2.into());
        let lin = rat(&curve.a[0]) * &x0 + rat(&curve.a[2]);
        let ye = ys.scale(&BigRational::new(1.into(), 108.into())).add(&KElt::rational(-lin)).scale(&half);
        let pt = KPoint { d, x: xe, y: ye };
        if !pt.is_on(curve) {
            return Err(Error::Invariant("twist map left the curve".into()));
        }
        Ok(pt)
    }

    pub fn is_on(&self, curve: &EllipticCurve) -> bool {
        let d = self.d;
        let c = |i: usize| KElt::rational(rat(&curve.a[i]));
        let (x, y) = (&self.x, &self.y);
        let lhs = y.mul(y, d).add(&c(0).mul(x, d).mul(y, d)).add(&c(2).mul(y, d));
        let rhs = x.mul(x, d).mul(x, d).add(&c(1).mul(x, d).mul(x, d)).add(&c(3).mul(x, d)).add(&c(4));
        lhs == rhs
    }

    pub fn conj(&self) -> KPoint {
        KPoint { d: self.d, x: self.x.conj(), y: self.y.conj() }
    }

    pub fn localize(&self, ext: &Arc<QuadExt>, prec: i64) -> Result<LocalPoint> {
        let root = root_of_disc(ext, self.d)?;
        Ok(Some((self.x.localize(&root, prec)?, self.y.localize(&root, prec)?)))
    }
}

/// The point side of the formula: `log_E(y_chi) - log_E(ybar_chi)` from a
/// Galois orbit of points.
#[derive(Clone, Debug)]
pub struct PointSide {
    pub points: Vec<KPoint>,
    pub logs: Vec<QuadPadic>,
    pub conj_logs: Vec<QuadPadic>,
    pub combination: ChiSum,
}

/// `sum_sigma chi^{-1}(sigma) (log_E(P^sigma) - log_E(Pbar^sigma))`. A
/// single point stands for the whole orbit only when `chi` is trivial.
pub fn point_combination(t: &TateCurve, lc: &LocalCurve, points: &[KPoint], chi: &Character) -> Result<PointSide> {
    let n = chi.exps.len();
    let weights = if points.len() == n {
        chi.conj()
    } else if chi.is_trivial() && !points.is_empty() {
        Character::trivial(points.len())
    } else {
        return Err(Error::OrbitIncomplete(format!("{} points for a character on {} classes", points.len(), n)));
    };
    let mut logs = Vec::new();
    let mut conj_logs = Vec::new();
    let mut diffs = Vec::new();
    for pt in points {
        if !pt.is_on(&t.curve) {
            return Err(Error::Config("supplied point is not on the curve".into()));
        }
        let a = t.log_e(lc, &pt.localize(&lc.ext, t.prec + super::GUARD)?)?;
        let b = t.log_e(lc, &pt.conj().localize(&lc.ext, t.prec + super::GUARD)?)?;
        diffs.push(a.sub(&b));
        logs.push(a);
        conj_logs.push(b);
    }
    let combination = ChiSum::combine(&weights, &diffs);
    Ok(PointSide { points: points.to_vec(), logs, conj_logs, combination })
}

/// `log_q` of the multiplicative integrals of `(t - z_i)/(t - zbar_i)` over
/// `P^1(Q_p)`, one for each `Psi_i`, and their `chi^{-1}`-combination.
pub fn mult_integral_to_point(lf: &LFunction, chi: &Character, t: &TateCurve) -> Result<(Vec<QuadPadic>, ChiSum)> {
    let mut values = Vec::new();
    let mut logs = Vec::new();
    for pt in &lf.partials {
        let j = lf.m.mult_integral(lf.mom, lf.m.whole_line(), &pt.z, &pt.zbar)?;
        logs.push(t.log.log_quad(&j)?);
        values.push(j);
    }
    Ok((values, ChiSum::combine(&chi.conj(), &logs)))
}

/// The multiplicative integral `J` for one embedding and its translate
/// `J_w` by the Atkin-Lehner element, with the identity
/// `J J_w = J^(1 + a_p)`.
#[derive(Clone, Debug)]
pub struct NormIdentity {
    pub j: QuadPadic,
    pub j_w: QuadPadic,
    /// Uniformizer digits to which `J J_w` and `J^(1 + a_p)` agree.
    pub agreement: i64,
    /// `N(J) = q^k u` with `u` a unit; `(k, v(u - 1))`.
    pub norm_exponent: Option<(i64, i64)>,
}

fn mobius(m: &crate::padic::Mat2, z: &QuadPadic) -> Result<QuadPadic> {
    let ext = z.ext();
    let l = |x: &Padic| QuadPadic::from_padic(ext, x.clone());
    l(&m.a).mul(z).add(&l(&m.b)).div(&l(&m.c).mul(z).add(&l(&m.d)))
}

pub fn norm_identity(lf: &LFunction, i: usize, t: &TateCurve) -> Result<NormIdentity> {
    let pt = &lf.partials[i];
    let w = lf.m.g.iota(&lf.m.q.atkin_lehner)?;
    let j = lf.m.mult_integral(lf.mom, lf.m.whole_line(), &pt.z, &pt.zbar)?;
    let (wz, wzbar) = (mobius(&w, &pt.z)?, mobius(&w, &pt.zbar)?);
    let j_w = lf.m.mult_integral(lf.mom, lf.m.whole_line(), &wz, &wzbar)?;
    let lhs = j.mul(&j_w);
    let rhs = j.pow(1 + t.a_p as i64)?;
    let diff = lhs.sub(&rhs);
    let agreement = match diff.vale() {
        Some(v) => v,
        None if diff.prec() >= crate::padic::EXACT => i64::MAX / 4,
        None => diff.ext().e() * diff.prec(),
    };
    let norm = j.norm();
    let norm_exponent = match (norm.valuation(), t.q.valuation()) {
        (Some(vn), Some(vq)) if vn % vq == 0 => {
            let k = vn / vq;
            let u = norm.div(&t.q.pow(k)?)?;
            Some((k, u.sub(&Padic::one(u.prime(), u.prec())).val_or_prec()))
        }
        _ => None,
    };
    Ok(NormIdentity { j, j_w, agreement, norm_exponent })
}
