use crate::arith::{factor, gcd};
use crate::classfield::is_fundamental;
use crate::error::{Error, Result};
use crate::padic::{is_prime, kronecker};

/// The standing assumptions on `(N, p, D)`, each with a fixed name used
/// in error messages and reports.
pub const BULLETS: [&str; 6] = [
    "p exactly divides N",
    "gcd(N, D) = p",
    "unit obstruction",
    "fundamental discriminant",
    "primes of N/p inert or split",
    "odd factor count",
];

/// Outcome of the hypothesis audit, with the factorization of `N/p` into
/// its inert part `N^-` and split part `N^+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Audit {
    pub n: u64,
    pub p: u64,
    pub d: i64,
    pub n_minus: u64,
    pub n_plus: u64,
    pub results: Vec<(&'static str, bool)>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.results.iter().find(|(_, ok)| !ok).map(|(name, _)| *name)
    }

    pub fn n_minus_primes(&self) -> Vec<u64> {
        factor(self.n_minus).into_iter().map(|(l, _)| l).collect()
    }
}

/// Evaluate every bullet without stopping at the first failure.
pub fn audit(n: u64, p: u64, d: i64) -> Audit {
    let exact = is_prime(p) && n % p == 0 && (n / p) % p != 0;
    let coprime = d % p as i64 == 0 && gcd(n, d.unsigned_abs()) == p;
    let units = d != -3 && d != -4;
    let fundamental = d < 0 && is_fundamental(d);
    let rest = if exact { n / p } else { n };
    let mut n_minus = 1;
    let mut n_plus = 1;
    let mut split_or_inert = true;
    let mut squarefree = true;
    for (l, e) in factor(rest) {
        if l == p {
            continue;
        }
        match kronecker(d, l) {
            -1 => {
                n_minus *= l;
                squarefree &= e == 1;
            }
            1 => n_plus *= l.pow(e),
            _ => split_or_inert = false,
        }
    }
    let odd = squarefree && factor(n_minus).len() % 2 == 1;
    Audit {
        n,
        p,
        d,
        n_minus,
        n_plus,
        results: BULLETS.into_iter().zip([exact, coprime, units, fundamental, split_or_inert, odd]).collect(),
    }
}

/// The audit, failing with the name of the first violated bullet.
pub fn check(n: u64, p: u64, d: i64) -> Result<Audit> {
    let a = audit(n, p, d);
    match a.first_failure() {
        Some(name) => Err(Error::HypothesisViolation(name.to_string())),
        None => Ok(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_instances() {
        let a = check(21, 3, -120).unwrap();
        assert_eq!((a.n_minus, a.n_plus), (7, 1));
        let a = check(14, 2, -8).unwrap();
        assert_eq!((a.n_minus, a.n_plus), (7, 1));
        let a = check(35, 7, -7).unwrap();
        assert_eq!((a.n_minus, a.n_plus), (5, 1));
    }

    #[test]
    fn named_rejections() {
        assert_eq!(check(21, 3, -3), Err(Error::HypothesisViolation("unit obstruction".into())));
        assert_eq!(check(14, 2, -4), Err(Error::HypothesisViolation("unit obstruction".into())));
        // 5 and 7 are both inert in Q(sqrt -2)
        assert_eq!(check(70, 2, -8), Err(Error::HypothesisViolation("odd factor count".into())));
        assert_eq!(check(63, 3, -120), Err(Error::HypothesisViolation("p exactly divides N".into())));
        assert_eq!(check(21, 3, -7), Err(Error::HypothesisViolation("gcd(N, D) = p".into())));
    }

    #[test]
    fn every_bullet_is_reported() {
        let a = audit(70, 2, -8);
        assert_eq!(a.results.len(), BULLETS.len());
        assert_eq!(a.n_minus, 35);
        assert!(!a.passed());
    }
}
