use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element `x0 + x1 i + x2 j + x3 k` of the algebra with `i^2 = a`,
/// `j^2 = b`, `k = i j = -j i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quat {
    pub a: i64,
    pub b: i64,
    pub c: [BigRational; 4],
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Quat {
    pub fn new(a: i64, b: i64, c: [BigRational; 4]) -> Quat {
        Quat { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: [i64; 4]) -> Quat {
        Quat::new(a, b, [r(c[0]), r(c[1]), r(c[2]), r(c[3])])
    }

    pub fn scalar(a: i64, b: i64, x: BigRational) -> Quat {
        Quat::new(a, b, [x, r(0), r(0), r(0)])
    }

    pub fn one(a: i64, b: i64) -> Quat {
        Quat::from_ints(a, b, [1, 0, 0, 0])
    }

    pub fn zero(a: i64, b: i64) -> Quat {
        Quat::from_ints(a, b, [0, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    fn like(&self, c: [BigRational; 4]) -> Quat {
        Quat { a: self.a, b: self.b, c }
    }

    pub fn add(&self, o: &Quat) -> Quat {
        self.like([&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2], &self.c[3] + &o.c[3]])
    }

    pub fn sub(&self, o: &Quat) -> Quat {
        self.like([&self.c[0] - &o.c[0], &self.c[1] - &o.c[1], &self.c[2] - &o.c[2], &self.c[3] - &o.c[3]])
    }

    pub fn neg(&self) -> Quat {
        self.like([-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]])
    }

    pub fn scale(&self, s: &BigRational) -> Quat {
        self.like([&self.c[0] * s, &self.c[1] * s, &self.c[2] * s, &self.c[3] * s])
    }

    pub fn scale_int(&self, n: i64) -> Quat {
        self.scale(&r(n))
    }

    pub fn mul(&self, o: &Quat) -> Quat {
        debug_assert!(self.a == o.a && self.b == o.b);
        let (a, b) = (r(self.a), r(self.b));
        let ab = &a * &b;
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &o.c;
        self.like([
            x0 * y0 + &a * x1 * y1 + &b * x2 * y2 - &ab * x3 * y3,
            x0 * y1 + x1 * y0 - &b * x2 * y3 + &b * x3 * y2,
            x0 * y2 + x2 * y0 + &a * x1 * y3 - &a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ])
    }

    pub fn conj(&self) -> Quat {
        self.like([self.c[0].clone(), -&self.c[1], -&self.c[2], -&self.c[3]])
    }

    pub fn nrd(&self) -> BigRational {
        let (a, b) = (r(self.a), r(self.b));
        let [x0, x1, x2, x3] = &self.c;
        x0 * x0 - &a * x1 * x1 - &b * x2 * x2 + &a * &b * x3 * x3
    }

    pub fn trd(&self) -> BigRational {
        &self.c[0] * r(2)
    }

    pub fn inv(&self) -> Option<Quat> {
        let n = self.nrd();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    /// `self * o^{-1}`.
    pub fn div(&self, o: &Quat) -> Option<Quat> {
        Some(self.mul(&o.inv()?))
    }

    /// `u x u^{-1}`.
    pub fn conjugate_by(&self, u: &Quat) -> Option<Quat> {
        Some(u.mul(self).mul(&u.inv()?))
    }

    /// Whether reduced trace and norm are integers.
    pub fn is_integral(&self) -> bool {
        self.trd().is_integer() && self.nrd().is_integer()
    }

    pub fn is_scalar(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_relations() {
        let (a, b) = (-1, -7);
        let i = Quat::from_ints(a, b, [0, 1, 0, 0]);
        let j = Quat::from_ints(a, b, [0, 0, 1, 0]);
        let k = Quat::from_ints(a, b, [0, 0, 0, 1]);
        assert_eq!(i.mul(&i), Quat::from_ints(a, b, [a, 0, 0, 0]));
        assert_eq!(j.mul(&j), Quat::from_ints(a, b, [b, 0, 0, 0]));
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.neg());
        assert_eq!(k.mul(&k), Quat::from_ints(a, b, [-a * b, 0, 0, 0]));
    }

    #[test]
    fn norm_is_multiplicative_and_inverse_works() {
        let x = Quat::from_ints(-2, -5, [1, 2, -3, 4]);
        let y = Quat::from_ints(-2, -5, [-5, 0, 7, 1]);
        assert_eq!(x.mul(&y).nrd(), x.nrd() * y.nrd());
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert_eq!(x.mul(&x.conj()), Quat::scalar(-2, -5, x.nrd()));
    }
}
