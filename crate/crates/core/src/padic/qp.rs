use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Precision given to zeros that are known exactly.
pub const EXACT: i64 = 1 << 40;

const POW_TABLE: usize = 512;

/// A rational prime with a cached table of its powers.
#[derive(Clone)]
pub struct Prime(Arc<PrimeInner>);

struct PrimeInner {
    p: u64,
    big: BigInt,
    powers: Vec<BigInt>,
}

impl Prime {
    pub fn new(p: u64) -> Prime {
        assert!(p >= 2, "prime must be at least 2");
        let big = BigInt::from(p);
        let mut powers = Vec::with_capacity(POW_TABLE);
        let mut x = BigInt::one();
        for _ in 0..POW_TABLE {
            powers.push(x.clone());
            x *= &big;
        }
        Prime(Arc::new(PrimeInner { p, big, powers }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn big(&self) -> &BigInt {
        &self.0.big
    }

    /// `p^k` for `k >= 0`.
    pub fn pow(&self, k: i64) -> BigInt {
        assert!(k >= 0, "negative exponent {k}");
        match self.0.powers.get(k as usize) {
            Some(x) => x.clone(),
            None => num_traits::pow(self.0.big.clone(), k as usize),
        }
    }

    /// Splits a nonzero integer as `p^v * u` with `p` not dividing `u`.
    pub fn split(&self, n: &BigInt) -> (i64, BigInt) {
        assert!(!n.is_zero());
        let mut v = 0;
        let mut u = n.clone();
        loop {
            let (q, r) = u.div_rem(&self.0.big);
            if !r.is_zero() {
                return (v, u);
            }
            u = q;
            v += 1;
        }
    }

    pub fn valuation_int(&self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            None
        } else {
            Some(self.split(n).0)
        }
    }

    /// Valuation of a nonzero rational.
    pub fn valuation_rat(&self, x: &BigRational) -> Option<i64> {
        if x.is_zero() {
            None
        } else {
            Some(self.split(x.numer()).0 - self.split(x.denom()).0)
        }
    }
}

impl PartialEq for Prime {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}
impl Eq for Prime {}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0.p)
    }
}

/// Trial-division primality test for the small primes that occur as levels.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of `Q_p` known modulo `p^prec`.
///
/// Nonzero values are stored as `p^val * unit` with `0 < unit < p^(prec - val)`
/// and `p` not dividing `unit`. A value whose ball contains zero is stored
/// with `unit = 0` and `val = prec`.
#[derive(Clone)]
pub struct Padic {
    prime: Prime,
    val: i64,
    unit: BigInt,
    prec: i64,
}

impl Padic {
    pub fn zero(prime: &Prime, prec: i64) -> Padic {
        let prec = prec.min(EXACT);
        Padic { prime: prime.clone(), val: prec, unit: BigInt::zero(), prec }
    }

    pub fn exact_zero(prime: &Prime) -> Padic {
        Padic::zero(prime, EXACT)
    }

    pub fn one(prime: &Prime, prec: i64) -> Padic {
        Padic::from_int(prime, 1, prec)
    }

    pub fn from_int(prime: &Prime, n: impl Into<BigInt>, prec: i64) -> Padic {
        Padic::from_bigint(prime, &n.into(), prec)
    }

    pub fn from_bigint(prime: &Prime, n: &BigInt, prec: i64) -> Padic {
        if n.is_zero() {
            return Padic::zero(prime, prec);
        }
        let (v, u) = prime.split(n);
        normalize(prime, u, v, prec)
    }

    pub fn from_ratio(prime: &Prime, num: impl Into<BigInt>, den: impl Into<BigInt>, prec: i64) -> Result<Padic> {
        Padic::from_rational(prime, &BigRational::new(num.into(), den.into()), prec)
    }

    pub fn from_rational(prime: &Prime, x: &BigRational, prec: i64) -> Result<Padic> {
        if x.denom().is_zero() {
            return Err(Error::DivisionByIndistinguishableZero);
        }
        if x.is_zero() {
            return Ok(Padic::zero(prime, prec));
        }
        let (vn, un) = prime.split(x.numer());
        let (vd, ud) = prime.split(x.denom());
        let v = vn - vd;
        if prec >= EXACT {
            if ud.abs().is_one() {
                return Ok(normalize(prime, un * ud, v, EXACT));
            }
            return Err(Error::Unsupported("exact p-adic value with a non-unit denominator".into()));
        }
        if v >= prec {
            return Ok(Padic::zero(prime, prec));
        }
        let m = prime.pow(prec - v);
        let inv = ud.mod_floor(&m).modinv(&m).ok_or(Error::DivisionByIndistinguishableZero)?;
        Ok(normalize(prime, un * inv, v, prec))
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Whether the value carries no precision bound.
    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Valuation, or `None` when the ball contains zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation, with zero counted as its precision.
    pub fn val_or_prec(&self) -> i64 {
        self.val
    }

    /// Number of significant digits.
    pub fn rel_prec(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.prec - self.val
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Drops digits so that the value is known modulo `p^n`. Never raises precision.
    pub fn with_prec(&self, n: i64) -> Padic {
        if n >= self.prec {
            return self.clone();
        }
        if self.is_zero() || self.val >= n {
            return Padic::zero(&self.prime, n);
        }
        let m = self.prime.pow(n - self.val);
        Padic { prime: self.prime.clone(), val: self.val, unit: self.unit.mod_floor(&m), prec: n }
    }

    /// Treats the stored representative as exact and pads it with zero digits.
    pub fn lift_prec(&self, n: i64) -> Padic {
        if n <= self.prec {
            return self.with_prec(n);
        }
        if self.is_zero() {
            return Padic::zero(&self.prime, n);
        }
        Padic { prime: self.prime.clone(), val: self.val, unit: self.unit.clone(), prec: n }
    }

    /// Multiplies by `p^k` exactly.
    pub fn shift(&self, k: i64) -> Padic {
        let prec = if self.is_exact() { EXACT } else { (self.prec + k).min(EXACT) };
        if self.is_zero() {
            return Padic::zero(&self.prime, prec);
        }
        Padic { prime: self.prime.clone(), val: self.val + k, unit: self.unit.clone(), prec }
    }

    /// The exact rational `p^val * unit` represented by the stored digits.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        if self.val >= 0 {
            BigRational::from_integer(&self.unit * self.prime.pow(self.val))
        } else {
            BigRational::new(self.unit.clone(), self.prime.pow(-self.val))
        }
    }

    /// Integer representative in `[0, p^prec)`; requires an integral value.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(&self.unit * self.prime.pow(self.val))
    }

    /// Symmetric integer representative in `(-p^prec/2, p^prec/2]`.
    pub fn to_bigint_balanced(&self) -> Option<BigInt> {
        let x = self.to_bigint()?;
        if self.prec >= EXACT {
            return Some(x);
        }
        let m = self.prime.pow(self.prec);
        if &x * 2 > m {
            Some(x - m)
        } else {
            Some(x)
        }
    }

    /// Reduction modulo `p` of an integral value.
    pub fn residue(&self) -> u64 {
        assert!(self.val >= 0, "residue of a non-integral value");
        if self.val > 0 || self.is_zero() {
            return 0;
        }
        self.unit.mod_floor(self.prime.big()).to_u64().unwrap()
    }

    /// Base-p digits from `p^val` up to `p^(prec-1)`, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        for _ in 0..self.rel_prec().min(64) {
            let (q, r) = u.div_rem(self.prime.big());
            out.push(r.to_u64().unwrap());
            u = q;
        }
        out
    }

    pub fn neg(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        if self.is_exact() {
            return Padic { prime: self.prime.clone(), val: self.val, unit: -&self.unit, prec: self.prec };
        }
        let m = self.prime.pow(self.prec - self.val);
        Padic { prime: self.prime.clone(), val: self.val, unit: m - &self.unit, prec: self.prec }
    }

    pub fn add(&self, other: &Padic) -> Padic {
        assert_eq!(self.prime, other.prime, "mixed primes");
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let m = self.val.min(other.val);
        if m >= prec {
            return Padic::zero(&self.prime, prec);
        }
        let x = &self.unit * self.prime.pow(self.val - m) + &other.unit * self.prime.pow(other.val - m);
        normalize(&self.prime, x, m, prec)
    }

    pub fn sub(&self, other: &Padic) -> Padic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        assert_eq!(self.prime, other.prime, "mixed primes");
        let bound_a = if self.is_exact() { EXACT } else { self.prec.saturating_add(other.val) };
        let bound_b = if other.is_exact() { EXACT } else { other.prec.saturating_add(self.val) };
        let prec = bound_a.min(bound_b).min(EXACT);
        if self.is_zero() || other.is_zero() {
            return Padic::zero(&self.prime, prec);
        }
        let val = self.val + other.val;
        if val >= prec {
            return Padic::zero(&self.prime, prec);
        }
        let unit = &self.unit * &other.unit;
        if prec >= EXACT {
            return Padic { prime: self.prime.clone(), val, unit, prec };
        }
        let m = self.prime.pow(prec - val);
        Padic { prime: self.prime.clone(), val, unit: unit.mod_floor(&m), prec }
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::DivisionByIndistinguishableZero);
        }
        if self.is_exact() {
            if self.unit.abs().is_one() {
                return Ok(Padic { prime: self.prime.clone(), val: -self.val, unit: self.unit.clone(), prec: EXACT });
            }
            return Err(Error::Unsupported("inverse of an exact value that is not a signed power of p".into()));
        }
        let rel = self.prec - self.val;
        let m = self.prime.pow(rel);
        let u = self.unit.modinv(&m).ok_or(Error::DivisionByIndistinguishableZero)?;
        Ok(Padic { prime: self.prime.clone(), val: -self.val, unit: u, prec: rel - self.val })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiplies by an integer, exactly.
    pub fn mul_int(&self, n: i64) -> Padic {
        self.mul(&Padic::from_int(&self.prime, n, EXACT))
    }

    /// Multiplies by an arbitrary integer, exactly.
    pub fn mul_bigint(&self, n: &BigInt) -> Padic {
        self.mul(&Padic::from_bigint(&self.prime, n, EXACT))
    }

    /// Divides by a nonzero integer; loses `v_p(n)` digits.
    pub fn div_int(&self, n: i64) -> Padic {
        assert!(n != 0, "division by zero integer");
        let (v, u) = self.prime.split(&BigInt::from(n));
        if u.abs().is_one() {
            return self.mul(&Padic::from_bigint(&self.prime, &u, EXACT)).shift(-v);
        }
        if self.is_zero() {
            return self.shift(-v);
        }
        assert!(!self.is_exact(), "inexact division of an exact value");
        let rel = (self.prec - self.val).max(1);
        let m = self.prime.pow(rel);
        let inv = u.mod_floor(&m).modinv(&m).unwrap();
        self.mul(&normalize(&self.prime, inv, 0, rel)).shift(-v)
    }

    pub fn pow(&self, n: i64) -> Result<Padic> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut base = self.clone();
        let mut acc = Padic::one(&self.prime, EXACT);
        let mut e = n as u64;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul(&base) };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        if first {
            // x^0: one, at the precision the unit part supports
            return Ok(Padic::one(&self.prime, EXACT));
        }
        Ok(acc)
    }

    /// Whether the ball of `self - other` contains zero.
    pub fn approx_eq(&self, other: &Padic) -> bool {
        self.sub(other).is_zero()
    }

    /// Square root, if one exists. For `p = 2` one digit of precision is lost.
    pub fn sqrt(&self) -> Option<Padic> {
        if self.is_zero() {
            let h = if self.prec >= EXACT { EXACT } else { self.prec.div_euclid(2) };
            return Some(Padic::zero(&self.prime, h));
        }
        if self.val % 2 != 0 {
            return None;
        }
        if self.is_exact() {
            return self.with_prec(self.val + 200).sqrt();
        }
        let p = self.p();
        let rel = self.prec - self.val;
        let u = Padic { prime: self.prime.clone(), val: 0, unit: self.unit.clone(), prec: rel };
        let root = if p == 2 {
            if rel < 3 {
                return None;
            }
            if (&self.unit % 8u32) != BigInt::one() {
                return None;
            }
            // Newton on x^2 = u from x = 1, working modulo 2^(rel+1)
            let mut x = Padic::one(&self.prime, rel + 1);
            let u2 = u.lift_prec(rel + 1);
            for _ in 0..(2 * rel + 4) {
                let next = x.add(&u2.div(&x).ok()?).div_int(2);
                x = next.lift_prec(rel + 1);
            }
            x.with_prec(rel - 1)
        } else {
            let r = self.unit.mod_floor(self.prime.big());
            let half = (p - 1) / 2;
            if r.modpow(&BigInt::from(half), self.prime.big()) != BigInt::one() {
                return None;
            }
            let mut x0 = 0u64;
            let r64 = r.to_u64().unwrap();
            for c in 1..p {
                if (c * c) % p == r64 {
                    x0 = c;
                    break;
                }
            }
            let mut x = Padic::from_int(&self.prime, x0, rel);
            let mut k = 1;
            while k < rel {
                k *= 2;
                x = x.add(&u.div(&x).ok()?).div_int(2).lift_prec(rel);
            }
            x.with_prec(rel)
        };
        Some(root.shift(self.val / 2))
    }

    /// Teichmüller representative of a unit: the root of unity of order dividing
    /// `p - 1` congruent to it modulo `p`. For `p = 2` this is `1`.
    pub fn teichmuller(&self) -> Result<Padic> {
        if !self.is_unit() {
            return Err(Error::Incompatible("Teichmüller lift of a non-unit".into()));
        }
        if self.is_exact() {
            return Err(Error::Unsupported("Teichmüller lift of an exact value".into()));
        }
        let n = self.prec;
        if self.p() == 2 {
            return Ok(Padic::one(&self.prime, n));
        }
        let m = self.prime.pow(n);
        let e = self.prime.pow(n - 1);
        let r = self.unit.mod_floor(self.prime.big());
        Ok(normalize(&self.prime, r.modpow(&e, &m), 0, n))
    }
}

/// Builds `p^v * x` modulo `p^prec`, stripping factors of `p` from `x`.
pub(crate) fn normalize(prime: &Prime, x: BigInt, v: i64, prec: i64) -> Padic {
    if v >= prec {
        return Padic::zero(prime, prec);
    }
    let mut x = if prec >= EXACT { x } else { x.mod_floor(&prime.pow(prec - v)) };
    if x.is_zero() {
        return Padic::zero(prime, prec);
    }
    let mut v = v;
    loop {
        let (q, r) = x.div_rem(prime.big());
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    Padic { prime: prime.clone(), val: v, unit: x, prec }
}

impl PartialEq for Padic {
    /// Equality of balls up to the coarser precision.
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.approx_eq(other)
    }
}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        if self.is_zero() {
            if self.prec >= EXACT {
                return write!(f, "0");
            }
            return write!(f, "O({p}^{})", self.prec);
        }
        if self.val == 0 {
            write!(f, "{}", self.unit)?;
        } else {
            write!(f, "{}*{p}^{}", self.unit, self.val)?;
        }
        if self.prec < EXACT {
            write!(f, " + O({p}^{})", self.prec)?;
        }
        Ok(())
    }
}

macro_rules! forward_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<&Padic> for &Padic {
            type Output = Padic;
            fn $m(self, o: &Padic) -> Padic { Padic::$m(self, o) }
        }
    )*};
}
forward_ops!(Add add, Sub sub, Mul mul);

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        Padic::neg(self)
    }
}


/// `p`-adic valuation of a nonzero integer, as used throughout for small
/// bookkeeping.
pub fn vp_i64(p: u64, n: i64) -> u32 {
    assert!(n != 0);
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u64) -> Prime {
        Prime::new(p)
    }

    #[test]
    fn integers_embed() {
        let p = q(3);
        let x = &Padic::from_int(&p, 1, 10) + &Padic::from_int(&p, 2, 10);
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.to_bigint(), Some(BigInt::from(3)));
    }

    #[test]
    fn geometric_inverse() {
        let p = q(3);
        let x = Padic::from_int(&p, 4, 12).inv().unwrap();
        // 1 - 3 + 9 - 27 + ...
        let mut s = Padic::zero(&p, 12);
        let mut t = Padic::one(&p, 12);
        for _ in 0..12 {
            s = &s + &t;
            t = t.mul_int(-3);
        }
        assert_eq!(x, s);
        assert_eq!(x.prec(), 12);
    }

    #[test]
    fn inverse_of_zero_ball_fails() {
        let p = q(5);
        let z = Padic::from_int(&p, 25, 2);
        assert!(z.is_zero());
        assert_eq!(z.inv().unwrap_err(), Error::DivisionByIndistinguishableZero);
    }

    #[test]
    fn rational_round_trip() {
        let p = q(7);
        let r = BigRational::new(BigInt::from(-22), BigInt::from(49 * 3));
        let x = Padic::from_rational(&p, &r, 20).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        let back = x.mul(&Padic::from_int(&p, 49 * 3, EXACT));
        assert_eq!(back, Padic::from_int(&p, -22, 20));
    }

    #[test]
    fn precision_is_tracked() {
        let p = q(5);
        let a = Padic::from_int(&p, 7, 10);
        let b = Padic::from_int(&p, 25, 6);
        assert_eq!(a.add(&b).prec(), 6);
        assert_eq!(a.mul(&b).prec(), 6);
        let c = Padic::from_int(&p, 7, 10).sub(&Padic::from_int(&p, 7 + 5usize.pow(9) as i64, 10));
        assert_eq!(c.valuation(), Some(9));
        assert_eq!(c.rel_prec(), 1);
    }

    #[test]
    fn square_roots() {
        let p = q(7);
        let x = Padic::from_int(&p, 2, 30).sqrt().unwrap();
        assert_eq!(x.mul(&x), Padic::from_int(&p, 2, 30));
        assert!(Padic::from_int(&p, 3, 30).sqrt().is_none());
        let two = q(2);
        let y = Padic::from_int(&two, -7, 30).sqrt().unwrap();
        assert_eq!(y.mul(&y), Padic::from_int(&two, -7, 29));
        assert!(Padic::from_int(&two, 3, 30).sqrt().is_none());
        let z = Padic::from_int(&p, 2 * 49, 30).sqrt().unwrap();
        assert_eq!(z.valuation(), Some(1));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        let p = q(7);
        let w = Padic::from_int(&p, 3, 25).teichmuller().unwrap();
        assert_eq!(w.residue(), 3);
        assert_eq!(w.pow(6).unwrap(), Padic::one(&p, 25));
    }

    #[test]
    fn digits_of_minus_one() {
        let p = q(3);
        let m = Padic::from_int(&p, -1, 5);
        assert_eq!(m.digits(), vec![2, 2, 2, 2, 2]);
    }
}
