//! Tate uniformization at a prime of multiplicative reduction, the
//! logarithm of `E` normalized by `log_q(q) = 0`, the point side of the
//! exceptional-zero formula, and rational recognition.

mod formal;
mod points;
mod recognize;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::curve::EllipticCurve;
use crate::error::{Error, Result};
use crate::padic::{BranchedLog, Padic, Prime};

pub use formal::{formal_log_coefficients, LocalCurve, LocalPoint};
pub use points::{
    mult_integral_to_point, norm_identity, point_combination, KElt, KPoint, NormIdentity, PointSide,
};
pub use recognize::{rational_recognize, recognize_quad};

/// Extra digits carried through the period and point computations.
pub const GUARD: i64 = 12;

#[derive(Clone, Debug)]
pub struct TateCurve {
    pub curve: EllipticCurve,
    pub prime: Prime,
    pub prec: i64,
    pub q: Padic,
    pub split: bool,
    pub a_p: i8,
    /// `u^2` for the scaling `omega_q = u omega_E` between the Tate curve
    /// and the given model.
    pub u_sq: Padic,
    /// `u` itself, which lies in `Q_p` exactly when the reduction is split.
    pub u: Option<Padic>,
    pub log: BranchedLog,
}

fn sigma(n: u64, k: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(k)).sum()
}

/// Number of terms `n` of a `q`-expansion needed before `n v(q)` passes `prec`.
fn terms(vq: i64, prec: i64) -> u64 {
    (prec / vq.max(1) + 2) as u64
}

/// `E_4(q)` and `E_6(q)`.
pub fn eisenstein(q: &Padic, prec: i64) -> Result<(Padic, Padic)> {
    let prime = q.prime();
    let n = terms(q.valuation().unwrap_or(prec), prec);
    let mut e4 = Padic::one(prime, prec);
    let mut e6 = Padic::one(prime, prec);
    let mut qn = Padic::one(prime, prec);
    for k in 1..=n {
        qn = qn.mul(q);
        e4 = e4.add(&qn.mul_bigint(&(sigma(k, 3) * 240)));
        e6 = e6.sub(&qn.mul_bigint(&(sigma(k, 5) * 504)));
    }
    Ok((e4, e6))
}

/// `prod_{n >= 1} (1 - q^n)^24`.
fn eta_power(q: &Padic, prec: i64) -> Result<Padic> {
    let prime = q.prime();
    let n = terms(q.valuation().unwrap_or(prec), prec);
    let one = Padic::one(prime, prec);
    let mut prod = one.clone();
    let mut qn = one.clone();
    for _ in 1..=n {
        qn = qn.mul(q);
        prod = prod.mul(&one.sub(&qn));
    }
    prod.pow(24)
}

/// `j(q) = E_4(q)^3 / (q prod (1 - q^n)^24)`.
pub fn j_of_q(q: &Padic, prec: i64) -> Result<Padic> {
    let (e4, _) = eisenstein(q, prec)?;
    e4.pow(3)?.div(&q.mul(&eta_power(q, prec)?))
}

/// Whether the tangent cone at the singular point of the reduction mod `p`
/// splits over `F_p`.
pub fn tangent_cone_splits(curve: &EllipticCurve, p: u64) -> Result<bool> {
    let r = |x: &BigInt| x.mod_floor_u64(p);
    let [a1, a2, a3, a4, a6] = [0, 1, 2, 3, 4].map(|i| r(&curve.a[i]));
    let m = |x: u64| x % p;
    for x in 0..p {
        for y in 0..p {
            let lhs = m(y * y + a1 * x % p * y + a3 * y);
            let rhs = m(x * x % p * x + a2 * x % p * x + a4 * x + a6);
            let fy = m(2 * y + a1 * x + a3);
            let fx = m(3 * x * x + 2 * a2 * x + a4 + (p - a1) * y);
            if lhs == rhs && fy == 0 && fx == 0 {
                // translate the node to the origin: a2 becomes a2 + 3x
                let a2t = m(a2 + 3 * x);
                let split = if p == 2 {
                    a2t == 0
                } else {
                    let disc = m(a1 * a1 + 4 * a2t) as i64;
                    crate::padic::legendre(disc, p) == 1
                };
                return Ok(split);
            }
        }
    }
    Err(Error::NotMultiplicative(p))
}

trait ModU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let r = self % BigInt::from(p);
        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
        r.to_u64().unwrap()
    }
}

/// The Tate period of `E` at `p` and the constants relating the Tate curve
/// to the given model.
pub fn tate_period(curve: &EllipticCurve, p: u64, prec: i64) -> Result<TateCurve> {
    let prime = Prime::new(p);
    let disc = curve.disc();
    let c4 = curve.c4();
    if disc.is_zero() || prime.valuation_int(&disc).unwrap_or(0) == 0 || prime.valuation_int(&c4) != Some(0) {
        return Err(Error::NotMultiplicative(p));
    }
    let wp = prec + GUARD;
    let jinv = Padic::from_rational(&prime, &BigRational::new(disc.clone(), &c4 * &c4 * &c4), wp)?;
    let vj = jinv.valuation().ok_or(Error::NotMultiplicative(p))?;
    let mut q = jinv.clone();
    // each pass fixes another v(q) digits
    for _ in 0..(wp / vj + 2) {
        let (e4, _) = eisenstein(&q, wp)?;
        let h = eta_power(&q, wp)?.div(&e4.pow(3)?)?;
        q = jinv.div(&h)?;
    }
    let (e4, e6) = eisenstein(&q, wp)?;
    let c4q = e4;
    let c6q = e6.neg();
    let c6 = Padic::from_bigint(&prime, &curve.c6(), wp);
    let c4p = Padic::from_bigint(&prime, &c4, wp);
    let u_sq = c6.mul(&c4q).div(&c6q.mul(&c4p))?;
    let u = u_sq.sqrt();
    let split = u.is_some();
    let log = BranchedLog::killing(&q)?;
    Ok(TateCurve { curve: curve.clone(), prime, prec, q, split, a_p: if split { 1 } else { -1 }, u_sq, u, log })
}

impl TateCurve {
    /// `log_q(u)` for `Phi_Tate(u) = P`, computed as `u` times the formal
    /// logarithm of `m P` divided by `m`, where `m P` reduces to the origin.
    pub fn log_e(&self, lc: &LocalCurve, p: &LocalPoint) -> Result<crate::padic::QuadPadic> {
        let u = self
            .u
            .as_ref()
            .ok_or_else(|| Error::Unsupported("non-split reduction: log_E takes values in the unramified twist".into()))?;
        Ok(lc.log(p, self.prec)?.mul_padic(u))
    }
}

#[cfg(test)]
mod tests;
