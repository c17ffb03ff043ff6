use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Quat, QuatAlgebra};
use crate::arith::{factor, gcd, prime_divisors};
use crate::error::{Error, Result};
use crate::lattice::{det, hnf_rat, mat_inv, rat, short_vectors, RatMat};

/// A full-rank lattice in the algebra that is closed under multiplication.
/// The basis is in Hermite form taken with the scalar coordinate last, so
/// the last basis element is `1`.
#[derive(Clone, Debug)]
pub struct Order {
    pub alg: QuatAlgebra,
    pub basis: Vec<Quat>,
    inv: RatMat,
}

fn reorder(c: &[BigRational; 4]) -> Vec<BigRational> {
    vec![c[1].clone(), c[2].clone(), c[3].clone(), c[0].clone()]
}

fn unorder(v: &[BigRational]) -> [BigRational; 4] {
    [v[3].clone(), v[0].clone(), v[1].clone(), v[2].clone()]
}

impl Order {
    /// The lattice spanned by `gens`. Fails unless it has rank four.
    pub fn lattice(alg: &QuatAlgebra, gens: &[Quat]) -> Result<Order> {
        let rows: Vec<Vec<BigRational>> = gens.iter().map(|g| reorder(&g.c)).collect();
        let h = hnf_rat(&rows);
        if h.len() != 4 {
            return Err(Error::Invariant(format!("lattice of rank {} instead of 4", h.len())));
        }
        let basis: Vec<Quat> = h.iter().map(|r| Quat::new(alg.a, alg.b, unorder(r))).collect();
        let m: RatMat = basis.iter().map(|q| q.c.to_vec()).collect();
        let inv = mat_inv(&m).expect("full rank");
        Ok(Order { alg: alg.clone(), basis, inv })
    }

    /// The ring generated by `gens` and `1`. Fails if some element met on the
    /// way is not integral, so that no order contains the generators.
    pub fn ring_closure(alg: &QuatAlgebra, gens: &[Quat]) -> Result<Order> {
        let mut cur: Vec<Quat> = gens.to_vec();
        cur.push(alg.one());
        for _ in 0..12 {
            let l = Order::lattice(alg, &cur)?;
            if l.basis.iter().any(|x| !x.is_integral()) {
                return Err(Error::Invariant("non-integral element".into()));
            }
            let mut all = l.basis.clone();
            let mut closed = true;
            for x in &l.basis {
                for y in &l.basis {
                    let z = x.mul(y);
                    if !z.trd().is_integer() {
                        return Err(Error::Invariant("non-integral product".into()));
                    }
                    if !l.contains(&z) {
                        closed = false;
                        all.push(z);
                    }
                }
            }
            if closed {
                return Ok(l);
            }
            cur = all;
        }
        Err(Error::Invariant("ring closure did not stabilise".into()))
    }

    pub fn standard(alg: &QuatAlgebra) -> Order {
        let gens: Vec<Quat> = (0..4).map(|r| {
            let mut c = [0; 4];
            c[r] = 1;
            alg.elem(c)
        }).collect();
        Order::lattice(alg, &gens).unwrap()
    }

    /// Coordinates of `x` in the basis.
    pub fn coords(&self, x: &Quat) -> Vec<BigRational> {
        (0..4)
            .map(|j| {
                let mut s = rat(0);
                for i in 0..4 {
                    s += &x.c[i] * &self.inv[i][j];
                }
                s
            })
            .collect()
    }

    pub fn contains(&self, x: &Quat) -> bool {
        self.coords(x).iter().all(|c| c.is_integer())
    }

    pub fn elem(&self, coords: &[BigInt]) -> Quat {
        let mut acc = Quat::zero(self.alg.a, self.alg.b);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
            }
        }
        acc
    }

    pub fn is_ring(&self) -> bool {
        self.contains(&self.alg.one()) && self.basis.iter().all(|x| self.basis.iter().all(|y| self.contains(&x.mul(y))))
    }

    /// Reduced discriminant: the square root of `|det(trd(b_r b_s))|`.
    pub fn reduced_disc(&self) -> BigRational {
        let m: RatMat =
            self.basis.iter().map(|x| self.basis.iter().map(|y| x.mul(y).trd()).collect()).collect();
        let d = det(&m).abs();
        let n = d.numer().sqrt();
        let e = d.denom().sqrt();
        assert_eq!(&(&n * &n), d.numer(), "discriminant is not a square");
        assert_eq!(&(&e * &e), d.denom(), "discriminant is not a square");
        BigRational::new(n, e)
    }

    pub fn reduced_disc_u64(&self) -> u64 {
        let d = self.reduced_disc();
        assert!(d.is_integer());
        d.to_integer().to_u64().unwrap()
    }

    /// Gram matrix of the reduced norm in the basis.
    pub fn gram(&self) -> RatMat {
        self.basis
            .iter()
            .map(|x| self.basis.iter().map(|y| x.mul(&y.conj()).trd() / rat(2)).collect())
            .collect()
    }

    /// Elements of reduced norm `m`, one of each pair `{x, -x}`.
    pub fn norm_form_enumerate(&self, m: &BigInt) -> Vec<Quat> {
        let mr = BigRational::from_integer(m.clone());
        short_vectors(&self.gram(), &mr)
            .into_iter()
            .map(|v| self.elem(&v))
            .filter(|x| x.nrd() == mr)
            .collect()
    }

    /// Elements of reduced norm `m` with both signs.
    pub fn elements_of_norm(&self, m: &BigInt) -> Vec<Quat> {
        let mut out = Vec::new();
        for x in self.norm_form_enumerate(m) {
            out.push(x.neg());
            out.push(x);
        }
        out
    }

    pub fn units(&self) -> Vec<Quat> {
        self.elements_of_norm(&BigInt::one())
    }

    /// Lattice intersection, through duals: `(L1* + L2*)*`.
    pub fn intersect(&self, other: &Order) -> Result<Order> {
        let d1 = dual(&self.basis);
        let d2 = dual(&other.basis);
        let mut rows = d1;
        rows.extend(d2);
        let h = hnf_rat(&rows);
        let back = dual_rows(&h);
        let gens: Vec<Quat> = back.iter().map(|r| Quat::new(self.alg.a, self.alg.b, [r[0].clone(), r[1].clone(), r[2].clone(), r[3].clone()])).collect();
        Order::lattice(&self.alg, &gens)
    }

    /// `u^{-1} O u`.
    pub fn conjugate(&self, u: &Quat) -> Result<Order> {
        let ui = u.inv().ok_or_else(|| Error::Invariant("zero conjugator".into()))?;
        let gens: Vec<Quat> = self.basis.iter().map(|x| ui.mul(x).mul(u)).collect();
        Order::lattice(&self.alg, &gens)
    }

    /// Integer structure constants `b_r b_s = sum_t m[r][s][t] b_t`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.basis
            .iter()
            .map(|x| {
                self.basis
                    .iter()
                    .map(|y| self.coords(&x.mul(y)).into_iter().map(|c| c.to_integer()).collect())
                    .collect()
            })
            .collect()
    }
}

fn dual(basis: &[Quat]) -> Vec<Vec<BigRational>> {
    let m: RatMat = basis.iter().map(|q| q.c.to_vec()).collect();
    dual_rows(&m)
}

/// Rows of the inverse transpose: a basis of the dual lattice under the
/// standard coordinate pairing.
fn dual_rows(m: &RatMat) -> RatMat {
    let inv = mat_inv(m).expect("full rank");
    (0..4).map(|i| (0..4).map(|j| inv[j][i].clone()).collect()).collect()
}

/// A maximal order, found by enlarging `Z<1, i, j, k>` one prime at a time.
pub fn maximal_order(alg: &QuatAlgebra) -> Result<Order> {
    let mut o = Order::standard(alg);
    loop {
        let d = o.reduced_disc();
        let target = BigRational::from_integer(BigInt::from(alg.disc));
        if d == target {
            return Ok(o);
        }
        let ratio = (d / &target).to_integer().to_u64().ok_or_else(|| Error::Invariant("discriminant overflow".into()))?;
        let mut grown = false;
        'primes: for l in prime_divisors(ratio) {
            let li = l as i64;
            let lr = rat(li);
            let total = (l as usize).pow(4);
            for idx in 1..total {
                let mut t = idx;
                let mut c = Vec::with_capacity(4);
                for _ in 0..4 {
                    c.push(BigInt::from((t % l as usize) as i64));
                    t /= l as usize;
                }
                let x = o.elem(&c).scale(&lr.recip());
                if !x.is_integral() {
                    continue;
                }
                let mut gens = o.basis.clone();
                gens.push(x);
                if let Ok(bigger) = Order::ring_closure(alg, &gens) {
                    o = bigger;
                    grown = true;
                    break 'primes;
                }
            }
        }
        if !grown {
            return Err(Error::Invariant(format!("order of discriminant {} cannot be enlarged", o.reduced_disc())));
        }
    }
}

/// Target of an orientation: `Z/m` or the field with `l^2` elements,
/// presented as `F_l[s]/(s^2 - r)` for odd `l` and `F_2[s]/(s^2 + s + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueRing {
    ZMod(u64),
    Quadratic { l: u64, r: u64 },
}

impl ResidueRing {
    pub fn size(&self) -> u64 {
        match self {
            ResidueRing::ZMod(m) => *m,
            ResidueRing::Quadratic { l, .. } => l * l,
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            ResidueRing::ZMod(m) => *m,
            ResidueRing::Quadratic { l, .. } => *l,
        }
    }

    pub fn element(&self, idx: u64) -> (u64, u64) {
        match self {
            ResidueRing::ZMod(_) => (idx, 0),
            ResidueRing::Quadratic { l, .. } => (idx / l, idx % l),
        }
    }

    pub fn add(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let m = self.modulus();
        ((x.0 + y.0) % m, (x.1 + y.1) % m)
    }

    pub fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        match self {
            ResidueRing::ZMod(m) => ((x.0 * y.0) % m, 0),
            ResidueRing::Quadratic { l, r } => {
                let l = *l;
                let ss = (x.1 * y.1) % l;
                if l == 2 {
                    // s^2 = s + 1
                    ((x.0 * y.0 + ss) % 2, (x.0 * y.1 + x.1 * y.0 + ss) % 2)
                } else {
                    ((x.0 * y.0 + ss * r) % l, (x.0 * y.1 + x.1 * y.0) % l)
                }
            }
        }
    }

    pub fn scale(&self, n: &BigInt, x: (u64, u64)) -> (u64, u64) {
        let m = self.modulus();
        let k = n.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        ((k * x.0) % m, (k * x.1) % m)
    }
}

/// A surjective ring map from the order to a residue ring, at one prime
/// dividing the level or the discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub l: u64,
    pub ring: ResidueRing,
    /// Images of the basis elements (the last is `1`).
    pub images: Vec<(u64, u64)>,
}

impl Orientation {
    /// Image of an element whose coordinates have denominators prime to `l`.
    pub fn apply(&self, o: &Order, x: &Quat) -> Option<(u64, u64)> {
        let m = BigInt::from(match self.ring {
            ResidueRing::ZMod(m) => m,
            ResidueRing::Quadratic { l, .. } => l,
        });
        let mut acc = (0, 0);
        for (c, img) in o.coords(x).iter().zip(&self.images) {
            let den = c.denom().mod_floor(&m);
            let inv = den.extended_gcd(&m);
            if !inv.gcd.is_one() {
                return None;
            }
            let k = (c.numer() * inv.x).mod_floor(&m);
            acc = self.ring.add(acc, self.ring.scale(&k, *img));
        }
        Some(acc)
    }
}

fn least_nonresidue(l: u64) -> u64 {
    (2..l).find(|&r| crate::padic::legendre(r as i64, l) == -1).unwrap()
}

/// The lexicographically least surjective ring map from `o` to `ring`.
fn find_orientation(o: &Order, l: u64, ring: ResidueRing) -> Result<Orientation> {
    let sc = o.structure_constants();
    let n = ring.size();
    let one = (1, 0);
    let quadratic = matches!(ring, ResidueRing::Quadratic { .. });
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let imgs = [ring.element(i0), ring.element(i1), ring.element(i2), one];
                if quadratic && imgs.iter().all(|x| x.1 == 0) {
                    continue;
                }
                let ok = (0..3).all(|r| {
                    (r..3).all(|s| {
                        let lhs = ring.mul(imgs[r], imgs[s]);
                        let mut rhs = (0, 0);
                        for t in 0..4 {
                            rhs = ring.add(rhs, ring.scale(&sc[r][s][t], imgs[t]));
                        }
                        let lhs2 = ring.mul(imgs[s], imgs[r]);
                        let mut rhs2 = (0, 0);
                        for t in 0..4 {
                            rhs2 = ring.add(rhs2, ring.scale(&sc[s][r][t], imgs[t]));
                        }
                        lhs == rhs && lhs2 == rhs2
                    })
                });
                if ok {
                    return Ok(Orientation { l, ring, images: imgs.to_vec() });
                }
            }
        }
    }
    Err(Error::Invariant(format!("no orientation at {l}")))
}

/// An Eichler order `R_0` of level `N^+` in the algebra, the maximal order
/// containing it, and orientations at every prime of `N^+ N^-`. The ring
/// `R = R_0[1/p]` is handled through `contains_r`.
#[derive(Clone, Debug)]
pub struct EichlerOrder {
    pub order: Order,
    pub maximal: Order,
    pub level: u64,
    pub p: u64,
    pub orientations: Vec<Orientation>,
}

impl EichlerOrder {
    pub fn alg(&self) -> &QuatAlgebra {
        &self.order.alg
    }

    /// Membership in `R_0[1/p]`.
    pub fn contains_r(&self, x: &Quat) -> bool {
        self.order.coords(x).iter().all(|c| {
            let mut d = c.denom().clone();
            let p = BigInt::from(self.p);
            while (&d % &p).is_zero() {
                d /= &p;
            }
            d.is_one()
        })
    }

    /// Orientation data of `x` at every prime of `N^+ N^-`.
    pub fn orient(&self, x: &Quat) -> Option<Vec<(u64, u64)>> {
        self.orientations.iter().map(|o| o.apply(&self.order, x)).collect()
    }
}

pub fn eichler_order(alg: &QuatAlgebra, n_plus: u64, p: u64) -> Result<EichlerOrder> {
    if gcd(n_plus, alg.disc) != 1 || n_plus % p == 0 || alg.disc % p == 0 {
        return Err(Error::LevelNotCoprime(format!("N+={n_plus}, N-={}, p={p}", alg.disc)));
    }
    let maximal = maximal_order(alg)?;
    let order = if n_plus == 1 {
        maximal.clone()
    } else {
        let primes = prime_divisors(n_plus);
        let mut found = None;
        for alpha in maximal.norm_form_enumerate(&BigInt::from(n_plus)) {
            let primitive = primes.iter().all(|&l| !maximal.contains(&alpha.scale(&rat(l as i64).recip())));
            if !primitive {
                continue;
            }
            let cand = maximal.intersect(&maximal.conjugate(&alpha)?)?;
            if cand.is_ring() && cand.reduced_disc() == rat((n_plus * alg.disc) as i64) {
                found = Some(cand);
                break;
            }
        }
        found.ok_or_else(|| Error::Invariant(format!("no Eichler order of level {n_plus}")))?
    };
    let mut orientations = Vec::new();
    for (l, e) in factor(n_plus * alg.disc) {
        let ring = if alg.disc % l == 0 {
            ResidueRing::Quadratic { l, r: if l == 2 { 1 } else { least_nonresidue(l) } }
        } else {
            ResidueRing::ZMod(l.pow(e))
        };
        orientations.push(find_orientation(&order, l, ring)?);
    }
    orientations.sort_by_key(|o| o.l);
    Ok(EichlerOrder { order, maximal, level: n_plus, p, orientations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::build_algebra;

    #[test]
    fn hurwitz_order() {
        let alg = build_algebra(2).unwrap();
        let o = maximal_order(&alg).unwrap();
        assert_eq!(o.reduced_disc_u64(), 2);
        assert!(o.is_ring());
        assert_eq!(o.units().len(), 24);
        assert!(o.contains(&Quat::new(-1, -1, [rat(1), rat(1), rat(1), rat(1)]).scale(&BigRational::new(1.into(), 2.into()))));
    }

    #[test]
    fn maximal_orders_of_small_discriminant() {
        for n in [3u64, 5, 7, 11, 13, 30] {
            let alg = build_algebra(n).unwrap();
            let o = maximal_order(&alg).unwrap();
            assert_eq!(o.reduced_disc_u64(), n);
            assert!(o.is_ring());
            assert!(o.units().iter().any(|u| u.is_one()));
        }
    }

    #[test]
    fn eichler_levels() {
        let alg = build_algebra(2).unwrap();
        let e = eichler_order(&alg, 3, 5).unwrap();
        assert_eq!(e.order.reduced_disc_u64(), 6);
        assert_eq!(e.orientations.len(), 2);
        let alg7 = build_algebra(7).unwrap();
        let e7 = eichler_order(&alg7, 1, 3).unwrap();
        assert_eq!(e7.order.reduced_disc_u64(), 7);
        assert!(matches!(eichler_order(&alg7, 7, 3), Err(Error::LevelNotCoprime(_))));
    }

    #[test]
    fn orientations_are_ring_maps() {
        let alg = build_algebra(5).unwrap();
        let e = eichler_order(&alg, 7, 3).unwrap();
        let b = &e.order.basis;
        for o in &e.orientations {
            for x in b {
                for y in b {
                    let fx = o.apply(&e.order, x).unwrap();
                    let fy = o.apply(&e.order, y).unwrap();
                    assert_eq!(o.apply(&e.order, &x.mul(y)).unwrap(), o.ring.mul(fx, fy));
                }
            }
        }
    }
}
