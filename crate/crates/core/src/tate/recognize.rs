use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::padic::{Padic, QuadPadic};

/// The rational `a/b` with `|a|, |b| <= bound` congruent to `x` modulo its
/// precision, found by reducing the lattice spanned by `(p^n, 0)` and
/// `(x, 1)`. `None` when no such rational exists or when the precision is
/// too low for it to be unique.
pub fn rational_recognize(x: &Padic, bound: &BigInt) -> Option<BigRational> {
    let prime = x.prime();
    let Some(v) = x.valuation() else {
        return Some(BigRational::zero());
    };
    let n = x.prec() - v;
    let modulus = prime.pow(n);
    if BigInt::from(2) * bound * bound >= modulus {
        return None;
    }
    let unit = x.unit().mod_floor(&modulus);
    let (mut r0, mut r1) = (modulus.clone(), unit);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > *bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    let scale = if v >= 0 {
        BigRational::from_integer(prime.pow(v))
    } else {
        BigRational::new(BigInt::one(), prime.pow(-v))
    };
    let r = BigRational::new(r1, s1) * scale;
    (r.numer().abs() <= *bound && r.denom() <= bound).then_some(r)
}

/// Recognize an element of `K_p` that should lie in `Q`: its second
/// coordinate must vanish to within `slack` digits of its precision.
pub fn recognize_quad(x: &QuadPadic, bound: &BigInt, slack: i64) -> Option<BigRational> {
    if x.b().val_or_prec() < x.prec() - slack {
        return None;
    }
    rational_recognize(&x.a().with_prec(x.prec() - slack), bound)
}
