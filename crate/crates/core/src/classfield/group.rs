use num_integer::Integer;

use crate::padic::{Padic, Prime};

/// A finite abelian group given by its multiplication table. Element `0` is
/// the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelian {
    table: Vec<Vec<usize>>,
}

impl FiniteAbelian {
    pub fn from_table(table: Vec<Vec<usize>>) -> FiniteAbelian {
        let n = table.len();
        assert!(n > 0 && table.iter().all(|r| r.len() == n));
        assert!((0..n).all(|i| table[0][i] == i), "element 0 must be the identity");
        FiniteAbelian { table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inv(&self, x: usize) -> usize {
        (0..self.order()).find(|&y| self.table[x][y] == 0).unwrap()
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|x| self.element_order(x)).fold(1, |a, b| a.lcm(&b))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| self.table[x][y] == self.table[y][x]))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z)))))
    }

    /// The subgroup generated by a list of elements, sorted.
    pub fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    /// Quotient by a subgroup. Returns the quotient group, the projection,
    /// and for each coset its least element as representative.
    pub fn quotient(&self, sub: &[usize]) -> (FiniteAbelian, Vec<usize>, Vec<usize>) {
        let n = self.order();
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if proj[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(x);
            for &s in sub {
                proj[self.mul(x, s)] = idx;
            }
        }
        let m = reps.len();
        let table = (0..m).map(|i| (0..m).map(|j| proj[self.mul(reps[i], reps[j])]).collect()).collect();
        (FiniteAbelian::from_table(table), proj, reps)
    }

    /// A generating set chosen greedily by element index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0];
        for x in 1..self.order() {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.span(&gens);
            }
        }
        gens
    }

    /// All characters, as exponent vectors of a primitive root of unity of
    /// order the group exponent. The trivial character is first; the rest are
    /// ordered lexicographically by their values on the generators.
    pub fn characters(&self) -> Vec<Character> {
        let m = self.exponent();
        let gens = self.generators();
        let mut out = Vec::new();
        let mut assign = vec![0usize; gens.len()];
        loop {
            if let Some(ch) = self.extend(&gens, &assign, m) {
                out.push(ch);
            }
            // next assignment in lexicographic order
            let mut i = gens.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                assign[i] += 1;
                if assign[i] < m {
                    break;
                }
                assign[i] = 0;
            }
        }
    }

    fn extend(&self, gens: &[usize], assign: &[usize], m: usize) -> Option<Character> {
        let n = self.order();
        let mut val = vec![usize::MAX; n];
        val[0] = 0;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let v = (val[x] + assign[k]) % m;
                if val[y] == usize::MAX {
                    val[y] = v;
                    stack.push(y);
                } else if val[y] != v {
                    return None;
                }
            }
        }
        Some(Character { m: m as u32, exps: val.into_iter().map(|v| v as u32).collect() })
    }
}

/// A character of a finite abelian group with values `zeta_m^exps[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub m: u32,
    pub exps: Vec<u32>,
}

impl Character {
    pub fn trivial(n: usize) -> Character {
        Character { m: 1, exps: vec![0; n] }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Exponent of the value on element `i`, reduced to lowest terms as
    /// `(order, exponent)`.
    pub fn value(&self, i: usize) -> RootOfUnity {
        RootOfUnity::new(self.m, self.exps[i])
    }

    /// Order of the character.
    pub fn order(&self) -> u32 {
        self.exps.iter().map(|&e| RootOfUnity::new(self.m, e).order).fold(1, |a, b| a.lcm(&b))
    }

    pub fn conj(&self) -> Character {
        Character { m: self.m, exps: self.exps.iter().map(|&e| (self.m - e % self.m) % self.m).collect() }
    }

    /// Pull back along a map of groups given as a table.
    pub fn pullback(&self, map: &[usize]) -> Character {
        Character { m: self.m, exps: map.iter().map(|&j| self.exps[j]).collect() }
    }

    /// Whether `zeta_order` lies in `Q_p`.
    pub fn values_in_qp(&self, p: u64) -> bool {
        let k = self.order() as u64;
        k <= 2 || (p - 1) % k == 0
    }
}

/// The root of unity `exp(2 pi i e / order)` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub order: u32,
    pub exp: u32,
}

impl RootOfUnity {
    pub fn new(m: u32, e: u32) -> RootOfUnity {
        let e = e % m.max(1);
        if e == 0 {
            return RootOfUnity { order: 1, exp: 0 };
        }
        let g = m.gcd(&e);
        RootOfUnity { order: m / g, exp: e / g }
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// The value in `Q_p`, when `Q_p` contains the needed roots of unity. The
    /// primitive root used is the Teichmüller lift of the least primitive root
    /// modulo `p`, raised to `(p-1)/order`.
    pub fn to_padic(&self, prime: &Prime, prec: i64) -> Option<Padic> {
        let p = prime.p();
        match self.order {
            1 => return Some(Padic::one(prime, prec)),
            2 => return Some(Padic::from_int(prime, -1, prec)),
            _ => {}
        }
        if (p - 1) % self.order as u64 != 0 {
            return None;
        }
        let g = primitive_root(p);
        let zeta = Padic::from_int(prime, g, prec).teichmuller().ok()?.pow(((p - 1) / self.order as u64) as i64).ok()?;
        zeta.pow(self.exp as i64).ok()
    }
}

/// Least primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            factors.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&f| powmod(g, (p - 1) / f, p) != 1))
        .unwrap()
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteAbelian {
        FiniteAbelian::from_table((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect())
    }

    fn klein() -> FiniteAbelian {
        FiniteAbelian::from_table((0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect())
    }

    #[test]
    fn characters_of_small_groups() {
        let c1 = cyclic(1).characters();
        assert_eq!(c1.len(), 1);
        assert!(c1[0].is_trivial());
        let c2 = cyclic(2).characters();
        assert_eq!(c2.len(), 2);
        assert!(c2[0].is_trivial());
        assert_eq!(c2[1].value(1), RootOfUnity { order: 2, exp: 1 });
        let v = klein().characters();
        assert_eq!(v.len(), 4);
        for ch in &v {
            assert!(ch.order() <= 2);
        }
        assert_eq!(cyclic(6).characters().len(), 6);
    }

    #[test]
    fn characters_are_homomorphisms() {
        let g = cyclic(4);
        for ch in g.characters() {
            for x in 0..4 {
                for y in 0..4 {
                    assert_eq!((ch.exps[x] + ch.exps[y]) % ch.m, ch.exps[g.mul(x, y)]);
                }
            }
        }
    }

    #[test]
    fn quotient_of_cyclic() {
        let g = cyclic(4);
        let sub = g.span(&[2]);
        let (q, proj, reps) = g.quotient(&sub);
        assert_eq!(q.order(), 2);
        assert_eq!(reps, vec![0, 1]);
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn fourth_roots_of_unity_in_z5() {
        let prime = Prime::new(5);
        let g = cyclic(4);
        for ch in g.characters() {
            for x in 0..4 {
                let z = ch.value(x).to_padic(&prime, 20).unwrap();
                assert_eq!(z.pow(4).unwrap(), Padic::one(&prime, 20));
            }
        }
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert!(RootOfUnity::new(4, 1).to_padic(&Prime::new(7), 10).is_none());
    }
}
