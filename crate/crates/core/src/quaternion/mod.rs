//! Definite quaternion algebras over `Q`, their maximal and Eichler orders,
//! orientations, and the splitting at a prime where the algebra is unramified.

mod element;
mod order;
mod splitting;

pub use element::Quat;
pub use order::{eichler_order, maximal_order, EichlerOrder, Order, Orientation, ResidueRing};
pub use splitting::{split_at_p, SplittingMap};

use crate::arith::{factor, prime_divisors};
use crate::error::{Error, Result};
use crate::padic::legendre;

/// `B = (a, b)_Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatAlgebra {
    pub a: i64,
    pub b: i64,
    pub disc: u64,
}

impl QuatAlgebra {
    pub fn elem(&self, c: [i64; 4]) -> Quat {
        Quat::from_ints(self.a, self.b, c)
    }

    pub fn one(&self) -> Quat {
        self.elem([1, 0, 0, 0])
    }

    pub fn is_definite(&self) -> bool {
        self.a < 0 && self.b < 0
    }

    /// Finite primes at which the algebra ramifies.
    pub fn ramified_primes(&self) -> Vec<u64> {
        ramified_primes(self.a, self.b)
    }
}

/// Hilbert symbol `(a, b)_l` of nonzero integers at a finite prime `l`.
pub fn hilbert_symbol(a: i64, b: i64, l: u64) -> i32 {
    assert!(a != 0 && b != 0);
    let split = |x: i64| {
        let mut x = x;
        let mut v = 0u32;
        while x % l as i64 == 0 {
            x /= l as i64;
            v += 1;
        }
        (v, x)
    };
    let (al, u) = split(a);
    let (be, v) = split(b);
    if l == 2 {
        let eps = |x: i64| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i64| {
            let x = x.rem_euclid(8);
            ((x * x - 1) / 8).rem_euclid(2)
        };
        let e = eps(u) * eps(v) + al as i64 * omega(v) + be as i64 * omega(u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let mut s = 1i32;
    if (al * be) % 2 == 1 && (l - 1) / 2 % 2 == 1 {
        s = -s;
    }
    if be % 2 == 1 {
        s *= legendre(u, l);
    }
    if al % 2 == 1 {
        s *= legendre(v, l);
    }
    s
}

/// Finite primes where `(a, b)` ramifies: only primes dividing `2ab` can.
pub fn ramified_primes(a: i64, b: i64) -> Vec<u64> {
    let mut cands = prime_divisors(2 * (a.unsigned_abs()) * b.unsigned_abs());
    cands.sort();
    cands.into_iter().filter(|&l| hilbert_symbol(a, b, l) == -1).collect()
}

/// A definite algebra ramified exactly at the primes dividing `n_minus`.
/// The pair `(a, b)` is the first with `a, b < 0`, ordered by `|a|` and then
/// `|b|`, whose Hilbert symbols certify the ramification.
pub fn build_algebra(n_minus: u64) -> Result<QuatAlgebra> {
    let f = factor(n_minus);
    if n_minus < 2 || f.iter().any(|&(_, e)| e > 1) || f.len() % 2 == 0 {
        return Err(Error::BadDiscriminant(format!("{n_minus} is not a squarefree product of an odd number of primes")));
    }
    let target: Vec<u64> = f.iter().map(|&(q, _)| q).collect();
    let bound = 8 * n_minus as i64 + 8;
    for a in 1..=bound {
        for b in 1..=bound {
            if ramified_primes(-a, -b) == target {
                return Ok(QuatAlgebra { a: -a, b: -b, disc: n_minus });
            }
        }
    }
    Err(Error::BadDiscriminant(format!("no presentation found for {n_minus}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_symbols() {
        assert_eq!(hilbert_symbol(-1, -1, 2), -1);
        assert_eq!(hilbert_symbol(-1, -7, 7), -1);
        assert_eq!(hilbert_symbol(-1, -7, 2), 1);
        assert_eq!(hilbert_symbol(-1, -3, 3), -1);
        assert_eq!(hilbert_symbol(2, 3, 5), 1);
        assert_eq!(hilbert_symbol(5, 5, 5), 1);
        assert_eq!(hilbert_symbol(3, 3, 3), -1);
    }

    #[test]
    fn product_formula() {
        // ramified places including infinity come in even number
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                if a == 0 || b == 0 {
                    continue;
                }
                let inf = if a < 0 && b < 0 { 1 } else { 0 };
                assert_eq!((ramified_primes(a, b).len() + inf) % 2, 0, "({a},{b})");
            }
        }
    }

    #[test]
    fn algebras() {
        assert_eq!(build_algebra(7).unwrap(), QuatAlgebra { a: -1, b: -7, disc: 7 });
        assert_eq!(build_algebra(2).unwrap(), QuatAlgebra { a: -1, b: -1, disc: 2 });
        assert_eq!(build_algebra(3).unwrap(), QuatAlgebra { a: -1, b: -3, disc: 3 });
        assert_eq!(build_algebra(5).unwrap(), QuatAlgebra { a: -2, b: -5, disc: 5 });
        assert!(matches!(build_algebra(15), Err(Error::BadDiscriminant(_))));
        assert!(matches!(build_algebra(12), Err(Error::BadDiscriminant(_))));
        let b30 = build_algebra(30).unwrap();
        assert_eq!(b30.ramified_primes(), vec![2, 3, 5]);
    }
}
