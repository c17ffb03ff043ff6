use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Padic, Prime};
use crate::error::{Error, Result};

/// A 2x2 matrix `[[a, b], [c, d]]` over `Q_p`.
#[derive(Clone, PartialEq)]
pub struct Mat2 {
    pub a: Padic,
    pub b: Padic,
    pub c: Padic,
    pub d: Padic,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: Padic, b: Padic, c: Padic, d: Padic) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(prime: &Prime, m: [i64; 4], prec: i64) -> Mat2 {
        let f = |x: i64| Padic::from_int(prime, x, prec);
        Mat2::new(f(m[0]), f(m[1]), f(m[2]), f(m[3]))
    }

    pub fn from_rationals(prime: &Prime, m: &[BigRational; 4], prec: i64) -> Result<Mat2> {
        let f = |x: &BigRational| Padic::from_rational(prime, x, prec);
        Ok(Mat2::new(f(&m[0])?, f(&m[1])?, f(&m[2])?, f(&m[3])?))
    }

    pub fn identity(prime: &Prime, prec: i64) -> Mat2 {
        Mat2::from_ints(prime, [1, 0, 0, 1], prec)
    }

    pub fn prime(&self) -> &Prime {
        self.a.prime()
    }

    pub fn entries(&self) -> [&Padic; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a.add(&o.a), self.b.add(&o.b), self.c.add(&o.c), self.d.add(&o.d))
    }

    pub fn scale(&self, x: &Padic) -> Mat2 {
        Mat2::new(self.a.mul(x), self.b.mul(x), self.c.mul(x), self.d.mul(x))
    }

    pub fn det(&self) -> Padic {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> Padic {
        self.a.add(&self.d)
    }

    /// The adjugate `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), self.b.neg(), self.c.neg(), self.a.clone())
    }

    pub fn inv(&self) -> Result<Mat2> {
        let di = self.det().inv()?;
        Ok(self.adjugate().scale(&di))
    }

    pub fn apply(&self, v: &(Padic, Padic)) -> (Padic, Padic) {
        (self.a.mul(&v.0).add(&self.b.mul(&v.1)), self.c.mul(&v.0).add(&self.d.mul(&v.1)))
    }

    /// Least valuation of an entry (the precision cap for a zero matrix).
    pub fn min_valuation(&self) -> i64 {
        self.entries().iter().map(|x| x.val_or_prec()).min().unwrap()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integral())
    }

    pub fn prec(&self) -> i64 {
        self.entries().iter().map(|x| x.prec()).min().unwrap()
    }

    pub fn with_prec(&self, n: i64) -> Mat2 {
        Mat2::new(self.a.with_prec(n), self.b.with_prec(n), self.c.with_prec(n), self.d.with_prec(n))
    }

    pub fn approx_eq(&self, o: &Mat2) -> bool {
        self.a.approx_eq(&o.a) && self.b.approx_eq(&o.b) && self.c.approx_eq(&o.c) && self.d.approx_eq(&o.d)
    }

    /// Möbius action `z -> (a z + b) / (c z + d)` on a finite point.
    pub fn mobius(&self, z: &Padic) -> Result<Padic> {
        self.a.mul(z).add(&self.b).div(&self.c.mul(z).add(&self.d))
    }

    /// Integer entries, when every entry is exact and integral.
    pub fn to_ints(&self) -> Result<[BigInt; 4]> {
        let f = |x: &Padic| x.to_bigint().ok_or_else(|| Error::Invariant(format!("non-integral entry {x}")));
        Ok([f(&self.a)?, f(&self.b)?, f(&self.c)?, f(&self.d)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let p = Prime::new(5);
        let m = Mat2::from_ints(&p, [2, 3, 7, 1], 20);
        let id = m.mul(&m.inv().unwrap());
        assert!(id.approx_eq(&Mat2::identity(&p, 20)));
        assert_eq!(m.det(), Padic::from_int(&p, -19, 20));
        let w = Mat2::from_ints(&p, [0, 1, 5, 0], 20);
        assert_eq!(w.mul(&w), Mat2::from_ints(&p, [5, 0, 0, 5], 20));
    }
}
