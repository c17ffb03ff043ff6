use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::qp::{Padic, Prime, EXACT};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtKind {
    Ramified,
    Unramified,
}

/// A quadratic extension `Q_p(t)` with `t^2 = d` for a fixed integer `d`.
///
/// Ramified extensions use `d` of odd valuation, so that `t` is a uniformizer
/// up to a unit of `Q_p`. The unramified extension uses a non-residue unit.
#[derive(Debug, PartialEq, Eq)]
pub struct QuadExt {
    prime: Prime,
    kind: ExtKind,
    d: BigInt,
}

impl QuadExt {
    /// `Q_p(sqrt(D))` for a discriminant `D` in which `p` ramifies.
    pub fn ramified(prime: &Prime, disc: i64) -> Result<Arc<QuadExt>> {
        let p = prime.p();
        let dd = BigInt::from(disc);
        let v = prime.valuation_int(&dd).unwrap_or(0);
        let d = if p == 2 {
            match v {
                3 => dd / 4,
                _ => {
                    return Err(Error::Unsupported(format!(
                        "2-adic completion of Q(sqrt({disc})) without a square-root uniformizer"
                    )))
                }
            }
        } else if v == 1 {
            dd
        } else {
            return Err(Error::NotRamified { d: disc, p });
        };
        Ok(Arc::new(QuadExt { prime: prime.clone(), kind: ExtKind::Ramified, d }))
    }

    /// The unramified quadratic extension, generated by the square root of the
    /// least quadratic non-residue.
    pub fn unramified(prime: &Prime) -> Result<Arc<QuadExt>> {
        let p = prime.p();
        if p == 2 {
            return Err(Error::Unsupported("unramified quadratic extension of Q_2".into()));
        }
        let half = BigInt::from((p - 1) / 2);
        let n = (2..p)
            .find(|&c| BigInt::from(c).modpow(&half, prime.big()) != BigInt::one())
            .unwrap();
        Ok(Arc::new(QuadExt { prime: prime.clone(), kind: ExtKind::Unramified, d: BigInt::from(n) }))
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn kind(&self) -> ExtKind {
        self.kind
    }

    /// The square of the stored generator.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Ramification index.
    pub fn e(&self) -> i64 {
        match self.kind {
            ExtKind::Ramified => 2,
            ExtKind::Unramified => 1,
        }
    }

    /// Size of the residue field.
    pub fn residue_size(&self) -> u64 {
        match self.kind {
            ExtKind::Ramified => self.prime.p(),
            ExtKind::Unramified => self.prime.p() * self.prime.p(),
        }
    }
}

/// An element `a + b t` of a quadratic extension.
#[derive(Clone)]
pub struct QuadPadic {
    ext: Arc<QuadExt>,
    a: Padic,
    b: Padic,
}

impl QuadPadic {
    pub fn new(ext: &Arc<QuadExt>, a: Padic, b: Padic) -> QuadPadic {
        assert_eq!(a.prime(), ext.prime());
        assert_eq!(b.prime(), ext.prime());
        QuadPadic { ext: ext.clone(), a, b }
    }

    pub fn from_padic(ext: &Arc<QuadExt>, a: Padic) -> QuadPadic {
        let b = Padic::exact_zero(ext.prime());
        QuadPadic::new(ext, a, b)
    }

    pub fn from_int(ext: &Arc<QuadExt>, n: i64, prec: i64) -> QuadPadic {
        QuadPadic::from_padic(ext, Padic::from_int(ext.prime(), n, prec))
    }

    pub fn zero(ext: &Arc<QuadExt>, prec: i64) -> QuadPadic {
        QuadPadic::new(ext, Padic::zero(ext.prime(), prec), Padic::zero(ext.prime(), prec))
    }

    pub fn one(ext: &Arc<QuadExt>, prec: i64) -> QuadPadic {
        QuadPadic::from_int(ext, 1, prec)
    }

    /// The stored generator `t`, known exactly.
    pub fn gen(ext: &Arc<QuadExt>) -> QuadPadic {
        QuadPadic::new(ext, Padic::exact_zero(ext.prime()), Padic::one(ext.prime(), EXACT))
    }

    pub fn ext(&self) -> &Arc<QuadExt> {
        &self.ext
    }

    pub fn prime(&self) -> &Prime {
        self.ext.prime()
    }

    pub fn a(&self) -> &Padic {
        &self.a
    }

    pub fn b(&self) -> &Padic {
        &self.b
    }

    pub fn prec(&self) -> i64 {
        self.a.prec().min(self.b.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Valuation times the ramification index, or `None` for a zero ball.
    pub fn vale(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let va = self.a.val_or_prec();
        let vb = self.b.val_or_prec();
        Some(match self.ext.kind {
            ExtKind::Ramified => {
                let dv = self.ext.prime.valuation_int(&self.ext.d).unwrap();
                // v(b t) = v(b) + v(d)/2
                (2 * va).min(2 * vb + dv)
            }
            ExtKind::Unramified => va.min(vb),
        })
    }

    /// Valuation as a rational `(num, den)` with `den` the ramification index.
    pub fn valuation(&self) -> Option<(i64, i64)> {
        self.vale().map(|v| (v, self.ext.e()))
    }

    fn same(&self, other: &QuadPadic) {
        assert!(Arc::ptr_eq(&self.ext, &other.ext) || *self.ext == *other.ext, "mixed extensions");
    }

    fn d_padic(&self) -> Padic {
        Padic::from_bigint(self.ext.prime(), &self.ext.d, EXACT)
    }

    pub fn add(&self, o: &QuadPadic) -> QuadPadic {
        self.same(o);
        QuadPadic { ext: self.ext.clone(), a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &QuadPadic) -> QuadPadic {
        self.same(o);
        QuadPadic { ext: self.ext.clone(), a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.neg(), b: self.b.neg() }
    }

    pub fn mul(&self, o: &QuadPadic) -> QuadPadic {
        self.same(o);
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&self.d_padic()));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        QuadPadic { ext: self.ext.clone(), a, b }
    }

    pub fn mul_padic(&self, x: &Padic) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.mul(x), b: self.b.mul(x) }
    }

    pub fn mul_int(&self, n: i64) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.mul_int(n), b: self.b.mul_int(n) }
    }

    pub fn div_int(&self, n: i64) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.div_int(n), b: self.b.div_int(n) }
    }

    pub fn add_padic(&self, x: &Padic) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.add(x), b: self.b.clone() }
    }

    /// The nontrivial automorphism `t -> -t`.
    pub fn conj(&self) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.clone(), b: self.b.neg() }
    }

    pub fn norm(&self) -> Padic {
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&self.d_padic()))
    }

    pub fn trace(&self) -> Padic {
        self.a.mul_int(2)
    }

    pub fn inv(&self) -> Result<QuadPadic> {
        if self.is_zero() {
            return Err(Error::DivisionByIndistinguishableZero);
        }
        // Compute the norm at a precision that reflects the true valuation.
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByIndistinguishableZero);
        }
        let ni = n.inv()?;
        Ok(self.conj().mul_padic(&ni))
    }

    pub fn div(&self, o: &QuadPadic) -> Result<QuadPadic> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> Result<QuadPadic> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        let mut acc = QuadPadic::one(&self.ext, EXACT);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn with_prec(&self, n: i64) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.with_prec(n), b: self.b.with_prec(n) }
    }

    pub fn lift_prec(&self, n: i64) -> QuadPadic {
        QuadPadic { ext: self.ext.clone(), a: self.a.lift_prec(n), b: self.b.lift_prec(n) }
    }

    pub fn approx_eq(&self, o: &QuadPadic) -> bool {
        self.sub(o).is_zero()
    }

    /// Residue class of an integral element, as `(a mod p, b mod p)` in the
    /// basis `1, t` for unramified extensions and `(a mod p, 0)` for ramified ones.
    pub fn residue(&self) -> (u64, u64) {
        match self.ext.kind {
            ExtKind::Ramified => (self.a.residue(), 0),
            ExtKind::Unramified => (self.a.residue(), self.b.residue()),
        }
    }

    /// Teichmüller representative of a unit.
    pub fn teichmuller(&self) -> Result<QuadPadic> {
        if self.vale() != Some(0) {
            return Err(Error::Incompatible("Teichmüller lift of a non-unit".into()));
        }
        match self.ext.kind {
            ExtKind::Ramified => Ok(QuadPadic::from_padic(&self.ext, self.a.teichmuller()?)),
            ExtKind::Unramified => {
                let n = self.prec();
                let p = self.prime().p() as i64;
                let mut x = self.clone();
                for _ in 0..(2 * n) {
                    x = x.pow(p)?.with_prec(n);
                }
                Ok(x)
            }
        }
    }

    /// Splits a nonzero element as `t^k * u` (ramified) or `p^k * u` (unramified)
    /// with `u` a unit.
    pub fn split_uniformizer(&self) -> Result<(i64, QuadPadic)> {
        let v = self.vale().ok_or(Error::DivisionByIndistinguishableZero)?;
        match self.ext.kind {
            ExtKind::Unramified => {
                let s = Padic::from_int(self.prime(), 1, EXACT).shift(-v);
                Ok((v, self.mul_padic(&s)))
            }
            ExtKind::Ramified => {
                let t = QuadPadic::gen(&self.ext).lift_prec(self.prec() + 2);
                let dv = self.prime().valuation_int(&self.ext.d).unwrap();
                // t has valuation dv/2; only dv = 1 occurs.
                debug_assert_eq!(dv, 1);
                Ok((v, self.mul(&t.pow(-v)?)))
            }
        }
    }
}

impl PartialEq for QuadPadic {
    fn eq(&self, o: &Self) -> bool {
        self.approx_eq(o)
    }
}

impl fmt::Debug for QuadPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*t", self.a, self.b)
    }
}

impl fmt::Display for QuadPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, self.ext.d)
    }
}

/// Quadratic residue symbol of an integer modulo an odd prime.
pub fn legendre(a: i64, p: u64) -> i32 {
    let pi = p as i64;
    let r = a.mod_floor(&pi);
    if r == 0 {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    let x = BigInt::from(r).modpow(&e, &BigInt::from(p));
    if x.is_one() {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d / n)` for a discriminant `d` and positive `n`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut res = 1;
    let mut n = n;
    while n % 2 == 0 {
        n /= 2;
        let r = d.rem_euclid(8);
        res *= match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let mut q = 3u64;
    while n > 1 {
        if q * q > n {
            res *= legendre(d, n);
            break;
        }
        while n % q == 0 {
            n /= q;
            res *= legendre(d, q);
        }
        q += 2;
    }
    res
}
