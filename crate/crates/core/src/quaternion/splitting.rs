use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{EichlerOrder, Quat};
use crate::error::{Error, Result};
use crate::padic::{Mat2, Padic, Prime};

/// Extra digits carried by the stored images.
const GUARD: i64 = 20;

/// An isomorphism `B (x) Q_p -> M_2(Q_p)` carrying the maximal order
/// containing `R_0` onto `M_2(Z_p)`. Stored through the images of `1, i, j, k`.
#[derive(Clone, Debug)]
pub struct SplittingMap {
    pub prime: Prime,
    pub prec: i64,
    pub a: i64,
    pub b: i64,
    pub images: [Mat2; 4],
}

impl SplittingMap {
    pub fn apply(&self, x: &Quat) -> Result<Mat2> {
        let mut acc: Option<Mat2> = None;
        for (c, m) in x.c.iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            let extra = (-self.prime.valuation_rat(c).unwrap_or(0)).max(0);
            let s = Padic::from_rational(&self.prime, c, self.prec + GUARD + extra)?;
            let t = m.scale(&s);
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        Ok(acc.unwrap_or_else(|| Mat2::from_ints(&self.prime, [0, 0, 0, 0], self.prec)).with_prec(self.prec))
    }

    /// Coordinates in `1, i, j, k` of the preimage of a matrix, using
    /// `trd(x i) = 2 a x_1`, `trd(x j) = 2 b x_2`, `trd(x k) = -2 a b x_3`.
    pub fn coordinates(&self, m: &Mat2) -> Result<[Padic; 4]> {
        let two = |x: Padic, d: i64| -> Result<Padic> {
            Ok(x.div(&Padic::from_int(&self.prime, 2 * d, self.prec + GUARD))?.with_prec(self.prec))
        };
        Ok([
            two(m.trace(), 1)?,
            two(m.mul(&self.images[1]).trace(), self.a)?,
            two(m.mul(&self.images[2]).trace(), self.b)?,
            two(m.mul(&self.images[3]).trace(), -self.a * self.b)?,
        ])
    }
}

/// Some `(x, z)` with `x^2 - a z^2 = b` in `Q_p`, with `z = n / p^k` small.
fn norm_solution(prime: &Prime, a: i64, b: i64, prec: i64) -> Result<(Padic, BigRational)> {
    let p = prime.p() as i64;
    for k in 0..4u32 {
        let den = p.pow(k);
        for n in 0..(p * p * den).max(16) {
            let z = BigRational::new(BigInt::from(n), BigInt::from(den));
            let s = BigRational::from_integer(BigInt::from(b)) + BigRational::from_integer(BigInt::from(a)) * &z * &z;
            if s.is_zero() {
                continue;
            }
            let sp = Padic::from_rational(prime, &s, prec + 4)?;
            if let Some(x) = sp.sqrt() {
                return Ok((x, z));
            }
        }
    }
    Err(Error::PrecisionExhausted("no solution of the splitting norm equation".into()))
}

pub fn split_at_p(o: &EichlerOrder, prec: i64) -> Result<SplittingMap> {
    let alg = o.alg();
    let prime = Prime::new(o.p);
    let w = prec + 40;
    let (a, b) = (alg.a, alg.b);
    let (x, z) = norm_solution(&prime, a, b, w)?;
    let zp = Padic::from_rational(&prime, &z, w)?;
    let ap = Padic::from_int(&prime, a, w);
    let zero = Padic::zero(&prime, w);
    let one = Padic::one(&prime, w);
    let i0 = Mat2::new(zero.clone(), ap.clone(), one.clone(), zero.clone());
    let j0 = Mat2::new(x.clone(), ap.mul(&zp).neg(), zp.clone(), x.neg());
    let k0 = i0.mul(&j0);
    let id = Mat2::identity(&prime, w);
    let base = [id.clone(), i0, j0, k0];
    let first = |q: &Quat| -> Result<(Padic, Padic)> {
        let mut v = (Padic::zero(&prime, w), Padic::zero(&prime, w));
        for (c, m) in q.c.iter().zip(&base) {
            let s = Padic::from_rational(&prime, c, w)?;
            v = (v.0.add(&m.a.mul(&s)), v.1.add(&m.c.mul(&s)));
        }
        Ok(v)
    };
    let vecs: Vec<(Padic, Padic)> = o.maximal.basis.iter().map(first).collect::<Result<_>>()?;
    // Z_p-span of the vectors: pivot on the bottom coordinate, then the top.
    let piv = vecs
        .iter()
        .filter(|v| !v.1.is_zero())
        .min_by_key(|v| v.1.val_or_prec())
        .ok_or_else(|| Error::PrecisionExhausted("degenerate lattice".into()))?
        .clone();
    let mut tops = Vec::new();
    for v in &vecs {
        let f = v.1.div(&piv.1)?;
        tops.push(v.0.sub(&f.mul(&piv.0)));
    }
    let t = tops
        .into_iter()
        .filter(|x| !x.is_zero())
        .min_by_key(|x| x.val_or_prec())
        .ok_or_else(|| Error::PrecisionExhausted("degenerate lattice".into()))?;
    let g = Mat2::new(t, piv.0.clone(), Padic::zero(&prime, w), piv.1.clone());
    let gi = g.inv()?;
    let images_w: Vec<Mat2> = base.iter().map(|m| gi.mul(m).mul(&g)).collect();
    let g_prec = prec + GUARD;
    let images: [Mat2; 4] = [
        images_w[0].with_prec(g_prec),
        images_w[1].with_prec(g_prec),
        images_w[2].with_prec(g_prec),
        images_w[3].with_prec(g_prec),
    ];
    let map = SplittingMap { prime: prime.clone(), prec, a, b, images };
    for q in &o.maximal.basis {
        let m = map.apply(q)?;
        if !m.is_integral() || m.prec() < prec {
            return Err(Error::PrecisionExhausted(format!("image of {q:?} is not integral to precision {prec}")));
        }
    }
    certify(&map, alg.a, alg.b)?;
    Ok(map)
}

/// Multiplicativity on basis products.
fn certify(map: &SplittingMap, a: i64, b: i64) -> Result<()> {
    for r in 0..4 {
        for s in 0..4 {
            let mut er = [0; 4];
            er[r] = 1;
            let mut es = [0; 4];
            es[s] = 1;
            let x = Quat::from_ints(a, b, er);
            let y = Quat::from_ints(a, b, es);
            let lhs = map.apply(&x.mul(&y))?;
            let rhs = map.images[r].mul(&map.images[s]).with_prec(map.prec);
            if !lhs.approx_eq(&rhs) {
                return Err(Error::PrecisionExhausted(format!("splitting not multiplicative on basis pair ({r},{s})")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{build_algebra, eichler_order};

    #[test]
    fn splitting_is_an_algebra_map() {
        for (nm, np, p) in [(7u64, 1u64, 3u64), (5, 1, 7), (3, 7, 2), (2, 3, 5)] {
            let alg = build_algebra(nm).unwrap();
            let o = eichler_order(&alg, np, p).unwrap();
            let s = split_at_p(&o, 30).unwrap_or_else(|e| panic!("{nm} {np} {p}: {e:?}"));
            assert!(s.images[0].approx_eq(&Mat2::identity(&s.prime, 30)));
            for x in &o.order.basis {
                let m = s.apply(x).unwrap();
                assert!(m.is_integral());
                assert_eq!(m.det(), Padic::from_rational(&s.prime, &x.nrd(), 30).unwrap());
                assert_eq!(m.trace(), Padic::from_rational(&s.prime, &x.trd(), 30).unwrap());
                let back = s.coordinates(&m).unwrap();
                for r in 0..4 {
                    assert!(back[r].approx_eq(&Padic::from_rational(&s.prime, &x.c[r], 30).unwrap()));
                }
            }
        }
    }
}
