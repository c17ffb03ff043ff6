//! Elliptic curves over `Q` in long Weierstrass form: invariants, rational
//! points, and traces of Frobenius by point counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::factor;
use crate::error::{Error, Result};
use crate::padic::legendre;

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    pub a: [BigInt; 5],
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}]", self.a[0], self.a[1], self.a[2], self.a[3], self.a[4])
    }
}

/// A rational point; `None` is the point at infinity.
pub type Point = Option<(BigRational, BigRational)>;

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl EllipticCurve {
    pub fn new(a: [i64; 5]) -> EllipticCurve {
        EllipticCurve { a: a.map(BigInt::from) }
    }

    pub fn b2(&self) -> BigInt {
        &self.a[0] * &self.a[0] + 4 * &self.a[1]
    }

    pub fn b4(&self) -> BigInt {
        &self.a[0] * &self.a[2] + 2 * &self.a[3]
    }

    pub fn b6(&self) -> BigInt {
        &self.a[2] * &self.a[2] + 4 * &self.a[4]
    }

    pub fn b8(&self) -> BigInt {
        let [a1, a2, a3, a4, a6] = &self.a;
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> BigInt {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }

    pub fn c6(&self) -> BigInt {
        let b2 = self.b2();
        -(&b2 * &b2 * &b2) + 36 * &b2 * self.b4() - 216 * self.b6()
    }

    pub fn disc(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn j(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.disc())
    }

    pub fn is_on(&self, p: &Point) -> bool {
        let Some((x, y)) = p else { return true };
        let [a1, a2, a3, a4, a6] = &self.a;
        y * y + q(a1) * x * y + q(a3) * y == x * x * x + q(a2) * x * x + q(a4) * x + q(a6)
    }

    pub fn neg(&self, p: &Point) -> Point {
        let (x, y) = p.as_ref()?;
        Some((x.clone(), -y - q(&self.a[0]) * x - q(&self.a[2])))
    }

    pub fn add(&self, p: &Point, r: &Point) -> Point {
        let Some((x1, y1)) = p else { return r.clone() };
        let Some((x2, y2)) = r else { return p.clone() };
        let [a1, a2, a3, a4, a6] = &self.a;
        let (a1, a2, a3, a4, a6) = (q(a1), q(a2), q(a3), q(a4), q(a6));
        let (lam, nu) = if x1 == x2 {
            if (y1 + y2 + &a1 * x2 + &a3).is_zero() {
                return None;
            }
            let num = BigRational::from_integer(3.into()) * x1 * x1 + BigRational::from_integer(2.into()) * &a2 * x1 + &a4 - &a1 * y1;
            let den = BigRational::from_integer(2.into()) * y1 + &a1 * x1 + &a3;
            let lam = num / &den;
            let nu = (-(x1 * x1 * x1) + &a4 * x1 + BigRational::from_integer(2.into()) * &a6 - &a3 * y1) / den;
            (lam, nu)
        } else {
            let lam = (y2 - y1) / (x2 - x1);
            let nu = (y1 * x2 - y2 * x1) / (x2 - x1);
            (lam, nu)
        };
        let x3 = &lam * &lam + &a1 * &lam - &a2 - x1 - x2;
        let y3 = -(&lam + &a1) * &x3 - &nu - &a3;
        Some((x3, y3))
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc: Point = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Number of points over `F_l`, including infinity.
    pub fn count_points(&self, l: u64) -> u64 {
        let m = BigInt::from(l);
        let red: Vec<i64> = self.a.iter().map(|c| c.mod_floor(&m).to_i64().unwrap()).collect();
        let li = l as i64;
        if l == 2 {
            let mut n = 1;
            for x in 0..2 {
                for y in 0..2 {
                    let lhs = y * y + red[0] * x * y + red[2] * y;
                    let rhs = x * x * x + red[1] * x * x + red[3] * x + red[4];
                    if (lhs - rhs).rem_euclid(2) == 0 {
                        n += 1;
                    }
                }
            }
            return n;
        }
        let b2 = self.b2().mod_floor(&m).to_i64().unwrap();
        let b4 = self.b4().mod_floor(&m).to_i64().unwrap();
        let b6 = self.b6().mod_floor(&m).to_i64().unwrap();
        let mut n = 1 + l as i64;
        for x in 0..li {
            let x2 = x * x % li;
            let f = (4 * x2 % li * x + b2 * x2 + 2 * b4 * x + b6).rem_euclid(li);
            n += legendre(f, l) as i64;
        }
        n as u64
    }

    /// `a_l = l + 1 - #E(F_l)` for good `l`; for multiplicative reduction the
    /// same formula gives `+1` (split), `-1` (non-split); `0` for additive.
    pub fn a_ell(&self, l: u64) -> i64 {
        l as i64 + 1 - self.count_points(l) as i64
    }

    /// Conductor of a semistable curve given by a minimal model: the product
    /// of the primes of bad reduction, all of which must be multiplicative.
    pub fn semistable_conductor(&self) -> Result<u64> {
        let d = self.disc().abs().to_u64().ok_or_else(|| Error::Unsupported("discriminant too large".into()))?;
        let c4 = self.c4();
        let mut n = 1;
        for (l, _) in factor(d) {
            if (&c4 % BigInt::from(l)).is_zero() {
                return Err(Error::Unsupported(format!("additive or non-minimal reduction at {l}")));
            }
            n *= l;
        }
        Ok(n)
    }

    /// The quadratic twist by `d`, as a short model `y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3`.
    pub fn twist_short(&self, d: i64) -> EllipticCurve {
        let d = BigInt::from(d);
        EllipticCurve {
            a: [
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                -27 * self.c4() * &d * &d,
                -54 * self.c6() * &d * &d * &d,
            ],
        }
    }

    /// Short model `y^2 = x^3 - 27 c4 x - 54 c6` with the change of
    /// variables `x = 36 x' + 3 b2`, `y = 108 (2 y' + a1 x' + a3)`.
    pub fn short_model(&self) -> EllipticCurve {
        self.twist_short(1)
    }

    /// Map a point of the original model to the short model.
    pub fn to_short(&self, p: &Point) -> Point {
        let (x, y) = p.as_ref()?;
        let xs = BigRational::from_integer(36.into()) * x + q(&self.b2()) * BigRational::from_integer(3.into());
        let ys = BigRational::from_integer(108.into())
            * (BigRational::from_integer(2.into()) * y + q(&self.a[0]) * x + q(&self.a[2]));
        Some((xs, ys))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_21a1() {
        let e = EllipticCurve::new([1, 0, 0, -4, -1]);
        assert_eq!(e.disc(), BigInt::from(3969));
        assert_eq!(e.semistable_conductor().unwrap(), 21);
        assert_eq!(e.a_ell(2), -1);
        assert_eq!(e.a_ell(5), -2);
        // split at 3, non-split at 7
        assert_eq!(e.a_ell(3), 1);
        assert_eq!(e.a_ell(7), -1);
    }

    #[test]
    fn invariants_of_35a1_and_14a1() {
        let e = EllipticCurve::new([0, 1, 1, 9, 1]);
        assert_eq!(e.semistable_conductor().unwrap(), 35);
        assert_eq!(e.a_ell(7), 1);
        assert_eq!(e.a_ell(2), 0);
        let f = EllipticCurve::new([1, 0, 1, 4, -6]);
        assert_eq!(f.semistable_conductor().unwrap(), 14);
        assert_eq!(f.a_ell(3), -2);
    }

    #[test]
    fn group_law() {
        let e = EllipticCurve::new([0, 1, 1, 9, 1]);
        let s = e.short_model();
        let p: Point = Some((BigRational::from_integer(1.into()), BigRational::from_integer(3.into())));
        assert!(e.is_on(&p));
        let p2 = e.add(&p, &p);
        assert!(e.is_on(&p2));
        assert_eq!(e.add(&p, &e.neg(&p)), None);
        assert_eq!(e.mul(3, &p), e.add(&p2, &p));
        assert!(s.is_on(&e.to_short(&p2)));
        assert_eq!(e.mul(0, &p), None);
    }
}
