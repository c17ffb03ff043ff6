//! Logarithm and exponential on `Q_p` and its quadratic extensions.
//!
//! On principal units both are computed from their power series; the
//! truncation point is chosen from the valuation of the argument so that the
//! neglected tail lies below the target precision. Precision lost to the
//! divisions by `n` and `n!` is tracked by the ball arithmetic itself.

use std::sync::Arc;

use super::qp::{Padic, Prime, EXACT};
use super::quad::{ExtKind, QuadExt, QuadPadic};
use crate::error::{Error, Result};

/// Minimal ring interface shared by `Padic` and `QuadPadic` for the series.
pub trait SeriesRing: Clone {
    fn prime_ref(&self) -> &Prime;
    /// Ramification index over `Q_p`.
    fn ram(&self) -> i64;
    /// Valuation times the ramification index.
    fn vale_opt(&self) -> Option<i64>;
    fn abs_prec(&self) -> i64;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over_int(&self, n: i64) -> Self;
    fn unit_like(&self, prec: i64) -> Self;
    fn zero_like(&self, prec: i64) -> Self;
    fn cut(&self, prec: i64) -> Self;
    fn negated(&self) -> Self;
}

impl SeriesRing for Padic {
    fn prime_ref(&self) -> &Prime {
        self.prime()
    }
    fn ram(&self) -> i64 {
        1
    }
    fn vale_opt(&self) -> Option<i64> {
        self.valuation()
    }
    fn abs_prec(&self) -> i64 {
        self.prec()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn over_int(&self, n: i64) -> Self {
        self.div_int(n)
    }
    fn unit_like(&self, prec: i64) -> Self {
        Padic::one(self.prime(), prec)
    }
    fn zero_like(&self, prec: i64) -> Self {
        Padic::zero(self.prime(), prec)
    }
    fn cut(&self, prec: i64) -> Self {
        self.with_prec(prec)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

impl SeriesRing for QuadPadic {
    fn prime_ref(&self) -> &Prime {
        self.prime()
    }
    fn ram(&self) -> i64 {
        self.ext().e()
    }
    fn vale_opt(&self) -> Option<i64> {
        self.vale()
    }
    fn abs_prec(&self) -> i64 {
        self.prec()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn over_int(&self, n: i64) -> Self {
        self.div_int(n)
    }
    fn unit_like(&self, prec: i64) -> Self {
        QuadPadic::one(self.ext(), prec)
    }
    fn zero_like(&self, prec: i64) -> Self {
        QuadPadic::zero(self.ext(), prec)
    }
    fn cut(&self, prec: i64) -> Self {
        self.with_prec(prec)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
}

fn ilog(p: u64, n: u64) -> i64 {
    let mut k = 0;
    let mut x = n;
    while x >= p {
        x /= p;
        k += 1;
    }
    k
}

/// `log(1 + y)` for `v(y) > 0`, to absolute precision at most `target`.
pub fn log1p<R: SeriesRing>(y: &R, target: i64) -> Result<R> {
    let target = target.min(y.abs_prec());
    let e = y.ram();
    let v = match y.vale_opt() {
        None => return Ok(y.zero_like(target)),
        Some(v) => v,
    };
    if v <= 0 {
        return Err(Error::OutsideConvergenceDomain("log of a non-principal unit".into()));
    }
    let p = y.prime_ref().p();
    // term n has valuation n*v/e - v_p(n); stop once every later term is below
    // the target precision
    let mut sum = y.clone();
    let mut power = y.clone();
    let mut n: u64 = 1;
    loop {
        n += 1;
        let bound = (n as i64) * v - e * ilog(p, n);
        let slope_ok = (n as f64) * (v as f64) * (p as f64).ln() >= e as f64;
        if bound >= e * target && slope_ok {
            break;
        }
        if n > 200_000 {
            return Err(Error::PrecisionExhausted("log series".into()));
        }
        power = power.times(y);
        let mut term = power.over_int(n as i64);
        if n % 2 == 0 {
            term = term.negated();
        }
        sum = sum.plus(&term);
    }
    Ok(sum.cut(target))
}

/// `exp(x)` for `v(x) > 1/(p-1)`, to absolute precision at most `target`.
pub fn exp<R: SeriesRing>(x: &R, target: i64) -> Result<R> {
    let target = target.min(x.abs_prec());
    let e = x.ram();
    let p = x.prime_ref().p() as i64;
    let v = match x.vale_opt() {
        None => return Ok(x.unit_like(target)),
        Some(v) => v,
    };
    // v/e > 1/(p-1)
    if v * (p - 1) <= e {
        return Err(Error::OutsideConvergenceDomain(format!("valuation {v}/{e} for p = {p}")));
    }
    let mut sum = x.unit_like(EXACT).plus(x);
    let mut term = x.clone();
    let mut n: i64 = 1;
    loop {
        n += 1;
        // v(x^n/n!) >= n (v/e - 1/(p-1))
        let lower = (n * (v * (p - 1) - e)) as f64 / ((e * (p - 1)) as f64);
        if lower >= target as f64 + 1.0 {
            break;
        }
        if n > 200_000 {
            return Err(Error::PrecisionExhausted("exp series".into()));
        }
        term = term.times(x).over_int(n);
        sum = sum.plus(&term);
    }
    Ok(sum.cut(target))
}

/// Logarithm with `log(p) = 0` on `Q_p^x`.
pub fn log_iwasawa(x: &Padic) -> Result<Padic> {
    let v = x.valuation().ok_or(Error::DivisionByIndistinguishableZero)?;
    let u = x.shift(-v);
    let p = x.p();
    let target = u.prec();
    let k = if p == 2 { 2 } else { (p - 1) as i64 };
    let r = u.pow(k)?;
    let y = r.sub(&Padic::one(x.prime(), EXACT));
    Ok(log1p(&y, target + 1)?.div_int(k).with_prec(target))
}

/// Logarithm on the quadratic extension with `log(p) = 0`. For the ramified
/// extension the generator `t` gets `log t = log(t^2 / p) / 2`.
pub fn log_iwasawa_quad(x: &QuadPadic) -> Result<QuadPadic> {
    let ext = x.ext().clone();
    let (k, u) = x.split_uniformizer()?;
    let target = u.prec();
    let q = ext.residue_size() as i64;
    let p = ext.prime().p();
    let mut r = u.pow(q - 1)?;
    // raise to p-th powers until the series needs no precision-losing terms
    let mut s = 0;
    if p == 2 {
        for _ in 0..3 {
            r = r.pow(2)?;
            s += 1;
        }
    }
    let y = r.sub(&QuadPadic::one(&ext, EXACT));
    let mut lu = log1p(&y, target + s)?.div_int(q - 1);
    for _ in 0..s {
        lu = lu.div_int(p as i64);
    }
    let lu = lu.with_prec(target);
    if k == 0 || ext.kind() == ExtKind::Unramified {
        return Ok(lu);
    }
    let lt = log_generator(&ext, target)?;
    Ok(lu.add(&QuadPadic::from_padic(&ext, lt.mul_int(k))))
}

/// `log(t)` under the Iwasawa branch: half the log of the unit `t^2 / p`.
fn log_generator(ext: &Arc<QuadExt>, prec: i64) -> Result<Padic> {
    let prime = ext.prime();
    let d = Padic::from_bigint(prime, ext.d(), prec + 2);
    let unit = d.shift(-d.valuation().unwrap());
    Ok(log_iwasawa(&unit)?.div_int(2))
}

/// A branch of the logarithm, fixed by the value assigned to `log p`.
#[derive(Clone, Debug)]
pub struct BranchedLog {
    log_p: Padic,
    /// The parameter killed by the branch, if it came from one.
    q: Option<Padic>,
}

impl BranchedLog {
    /// The branch with `log p = 0`.
    pub fn iwasawa(prime: &Prime) -> BranchedLog {
        BranchedLog { log_p: Padic::exact_zero(prime), q: None }
    }

    /// The branch with `log q = 0` for `q` of positive valuation.
    pub fn killing(q: &Padic) -> Result<BranchedLog> {
        let v = q.valuation().ok_or(Error::DivisionByIndistinguishableZero)?;
        if v <= 0 {
            return Err(Error::Incompatible("branch parameter must have positive valuation".into()));
        }
        let log_p = log_iwasawa(q)?.div_int(v).neg();
        Ok(BranchedLog { log_p, q: Some(q.clone()) })
    }

    pub fn log_p(&self) -> &Padic {
        &self.log_p
    }

    pub fn parameter(&self) -> Option<&Padic> {
        self.q.as_ref()
    }

    pub fn log(&self, x: &Padic) -> Result<Padic> {
        let v = x.valuation().ok_or(Error::DivisionByIndistinguishableZero)?;
        Ok(log_iwasawa(x)?.add(&self.log_p.mul_int(v)))
    }

    /// Logarithm on a quadratic extension: `log x = log_iw x + v(x) log p`.
    pub fn log_quad(&self, x: &QuadPadic) -> Result<QuadPadic> {
        let ve = x.vale().ok_or(Error::DivisionByIndistinguishableZero)?;
        let e = x.ext().e();
        let base = log_iwasawa_quad(x)?;
        let corr = self.log_p.mul_int(ve).div_int(e);
        Ok(base.add(&QuadPadic::from_padic(x.ext(), corr)))
    }
}

impl Padic {
    pub fn log(&self) -> Result<Padic> {
        log_iwasawa(self)
    }

    pub fn exp(&self) -> Result<Padic> {
        exp(self, self.prec())
    }
}

impl QuadPadic {
    pub fn log(&self) -> Result<QuadPadic> {
        log_iwasawa_quad(self)
    }

    pub fn exp(&self) -> Result<QuadPadic> {
        exp(self, self.prec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn log_of_one_is_zero() {
        let p = Prime::new(5);
        assert!(Padic::one(&p, 20).log().unwrap().is_zero());
    }

    #[test]
    fn log_is_a_homomorphism() {
        let p = Prime::new(3);
        let a = Padic::from_int(&p, 4, 30);
        let b = Padic::from_int(&p, 16, 30);
        assert_eq!(b.log().unwrap(), a.log().unwrap().mul_int(2));
        let c = Padic::from_int(&p, 7 * 9, 30);
        let d = Padic::from_int(&p, 5, 30);
        assert_eq!(c.mul(&d).log().unwrap(), c.log().unwrap().add(&d.log().unwrap()));
    }

    #[test]
    fn exp_inverts_log() {
        let p = Prime::new(7);
        let u = Padic::from_int(&p, 1 + 49, 25);
        assert_eq!(u.log().unwrap().exp().unwrap(), u);
    }

    #[test]
    fn exp_of_three() {
        // oracle: sum of 3^n/n! with exact rationals, truncated far past the target
        let p = Prime::new(3);
        let x = Padic::from_int(&p, 3, 20);
        let mut s = BigRational::from_integer(BigInt::from(0));
        let mut t = BigRational::from_integer(BigInt::from(1));
        for n in 0..120 {
            s += &t;
            t = t * BigRational::from_integer(BigInt::from(3)) / BigRational::from_integer(BigInt::from(n + 1));
        }
        let oracle = Padic::from_rational(&p, &s, 20).unwrap();
        assert_eq!(x.exp().unwrap(), oracle);
        assert_eq!(exp(&Padic::from_int(&p, 1, 20), 20).unwrap_err().to_string().contains("convergence"), true);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let p = Prime::new(5);
        assert_eq!(Padic::zero(&p, 10).exp().unwrap(), Padic::one(&p, 10));
    }

    #[test]
    fn branch_kills_parameter() {
        let p = Prime::new(5);
        let q = Padic::from_int(&p, 5 * 7, 30);
        let br = BranchedLog::killing(&q).unwrap();
        assert!(br.log(&q).unwrap().is_zero());
        let x = Padic::from_int(&p, 25 * 3, 30);
        let y = Padic::from_int(&p, 11, 30);
        assert_eq!(br.log(&x.mul(&y)).unwrap(), br.log(&x).unwrap().add(&br.log(&y).unwrap()));
    }

    #[test]
    fn quad_log_homomorphism() {
        let p = Prime::new(3);
        let k = QuadExt::ramified(&p, -120).unwrap();
        let x = QuadPadic::new(&k, Padic::from_int(&p, 2, 30), Padic::from_int(&p, 1, 30));
        let y = QuadPadic::new(&k, Padic::from_int(&p, 5, 30), Padic::from_int(&p, -4, 30));
        let lhs = x.mul(&y).log().unwrap();
        let rhs = x.log().unwrap().add(&y.log().unwrap());
        assert!(lhs.sub(&rhs).vale().map_or(true, |v| v >= 2 * 27));
        let t = QuadPadic::gen(&k).lift_prec(30);
        let br = BranchedLog::iwasawa(&p);
        let lt2 = br.log_quad(&t.mul(&t)).unwrap();
        assert_eq!(lt2, br.log_quad(&t).unwrap().mul_int(2));
    }

    #[test]
    fn quad_exp_log_round_trip() {
        let p = Prime::new(7);
        let k = QuadExt::ramified(&p, -7).unwrap();
        let t = QuadPadic::gen(&k).lift_prec(30);
        let u = QuadPadic::one(&k, 30).add(&t.mul(&t).mul(&t));
        let back = u.log().unwrap().exp().unwrap();
        assert!(back.sub(&u).vale().map_or(true, |v| v >= 2 * 28));
    }
}
