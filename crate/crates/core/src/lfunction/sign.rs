/// The set `Sigma(E, chi)` of places where the local sign differs, and the
/// resulting global sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignReport {
    pub sigma: Vec<u64>,
    pub w: i8,
    pub a_p: i8,
    pub b_p: i8,
    /// Whether `p` itself lies in `Sigma`, so that the sign at `p` changes
    /// relative to the primes of `N^-`.
    pub change_of_sign: bool,
}

/// `Sigma` consists of the primes of `N^-` and, when `a_p b_p = 1`, of `p`;
/// then `w = (-1)^(#Sigma + 1)`. Here `b_p` is the value of the character on
/// the prime above `p`.
pub fn sign(p: u64, n_minus_primes: &[u64], a_p: i8, b_p: i8) -> SignReport {
    let mut sigma: Vec<u64> = n_minus_primes.to_vec();
    let at_p = a_p * b_p == 1;
    if at_p {
        sigma.push(p);
    }
    sigma.sort_unstable();
    let w = if (sigma.len() + 1) % 2 == 0 { 1 } else { -1 };
    SignReport { sigma, w, a_p, b_p, change_of_sign: at_p }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_trivial_character() {
        let r = sign(3, &[7], 1, 1);
        assert_eq!(r.sigma, vec![3, 7]);
        assert_eq!(r.w, -1);
        assert!(r.change_of_sign);
    }

    #[test]
    fn nonsplit_cases() {
        let r = sign(7, &[3], -1, 1);
        assert_eq!(r.sigma, vec![3]);
        assert_eq!(r.w, 1);
        let r = sign(7, &[3], -1, -1);
        assert!(r.sigma.contains(&7));
        assert_eq!(r.w, -1);
    }
}
