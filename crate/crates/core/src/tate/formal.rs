use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::curve::EllipticCurve;
use crate::error::{Error, Result};
use crate::padic::{Padic, QuadExt, QuadPadic};

/// A point of `E(K_p)` on the given model; `None` is the origin.
pub type LocalPoint = Option<(QuadPadic, QuadPadic)>;

fn mul_series(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn inv_series(a: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    let a0 = a[0].recip();
    out[0] = a0.clone();
    for k in 1..n {
        let mut s = BigRational::zero();
        for j in 1..=k.min(a.len() - 1) {
            s += &a[j] * &out[k - j];
        }
        out[k] = -s * &a0;
    }
    out
}

/// Coefficients `c_k`, `k < n`, of the invariant differential
/// `dx / (2y + a1 x + a3) = sum c_k t^k dt` in the parameter `t = -x/y`.
pub fn formal_log_coefficients(curve: &EllipticCurve, n: usize) -> Vec<BigInt> {
    let [a1, a2, a3, a4, a6] = &curve.a;
    let len = n + 4;
    // w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3, degree by degree;
    // the coefficient of t^k in w^2 and w^3 only involves s_i with i <= k - 3
    let mut s = vec![BigInt::zero(); len];
    let mut w2 = vec![BigInt::zero(); len];
    let mut w3 = vec![BigInt::zero(); len];
    for k in 3..len {
        w2[k] = (3..=k.saturating_sub(3)).map(|i| &s[i] * &s[k - i]).sum();
        w3[k] = (3..=k.saturating_sub(6)).map(|i| &s[i] * &w2[k - i]).sum();
        let mut v = a1 * &s[k - 1] + a2 * &s[k - 2] + a3 * &w2[k] + a4 * &w2[k - 1] + a6 * &w3[k];
        if k == 3 {
            v += 1;
        }
        s[k] = v;
    }
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let m = n + 1;
    let wt: Vec<BigRational> = (0..m).map(|i| q(&s[i + 3])).collect();
    let u = inv_series(&wt, m);
    // x = t^-2 u, y = -t^-3 u; multiply numerator and denominator by t^3
    let two = BigRational::from_integer(2.into());
    let mut num = vec![BigRational::zero(); m];
    let mut den = vec![BigRational::zero(); m];
    for i in 0..m {
        num[i] = -&two * &u[i] + &u[i] * BigRational::from_integer(i.into());
        den[i] = -&two * &u[i];
        if i >= 1 {
            den[i] += q(a1) * &u[i - 1];
        }
    }
    if m > 3 {
        den[3] += q(a3);
    }
    mul_series(&num, &inv_series(&den, m), n).into_iter().map(|c| c.to_integer()).collect()
}

/// The curve over `K_p` with enough of its formal logarithm to reach a
/// working precision.
#[derive(Clone, Debug)]
pub struct LocalCurve {
    pub curve: EllipticCurve,
    pub ext: Arc<QuadExt>,
    a: [QuadPadic; 5],
    omega: Vec<BigInt>,
}

impl LocalCurve {
    pub fn new(curve: &EllipticCurve, ext: &Arc<QuadExt>, prec: i64) -> LocalCurve {
        let e = ext.e();
        let p = ext.prime().p() as f64;
        let target = (e * (prec + super::GUARD + 8)) as f64;
        // t^k / k has valuation at least k - e log_p k in uniformizer units
        let mut n = 1usize;
        while (n as f64) - (e as f64) * (n as f64).ln() / p.ln() < target + 2.0 {
            n += 1;
        }
        let a = [0, 1, 2, 3, 4].map(|i| QuadPadic::from_padic(ext, Padic::from_bigint(ext.prime(), &curve.a[i], crate::padic::EXACT)));
        LocalCurve { curve: curve.clone(), ext: ext.clone(), a, omega: formal_log_coefficients(curve, n + 1) }
    }

    pub fn is_on(&self, pt: &LocalPoint) -> bool {
        let Some((x, y)) = pt else { return true };
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
        let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(a6);
        lhs.sub(&rhs).is_zero()
    }

    pub fn neg(&self, pt: &LocalPoint) -> LocalPoint {
        let (x, y) = pt.as_ref()?;
        Some((x.clone(), y.neg().sub(&self.a[0].mul(x)).sub(&self.a[2])))
    }

    pub fn add(&self, p1: &LocalPoint, p2: &LocalPoint) -> Result<LocalPoint> {
        let Some((x1, y1)) = p1 else { return Ok(p2.clone()) };
        let Some((x2, y2)) = p2 else { return Ok(p1.clone()) };
        let [a1, a2, a3, a4, a6] = &self.a;
        let (lam, nu) = if x1.sub(x2).is_zero() {
            let den = y1.add(y1).add(&a1.mul(x1)).add(a3);
            if y1.add(y2).add(&a1.mul(x2)).add(a3).is_zero() || den.is_zero() {
                return Ok(None);
            }
            let num = x1.mul(x1).mul_int(3).add(&a2.mul(x1).mul_int(2)).add(a4).sub(&a1.mul(y1));
            let nu_num = x1.mul(x1).mul(x1).neg().add(&a4.mul(x1)).add(&a6.mul_int(2)).sub(&a3.mul(y1));
            (num.div(&den)?, nu_num.div(&den)?)
        } else {
            let dx = x2.sub(x1);
            (y2.sub(y1).div(&dx)?, y1.mul(x2).sub(&y2.mul(x1)).div(&dx)?)
        };
        let x3 = lam.mul(&lam).add(&a1.mul(&lam)).sub(a2).sub(x1).sub(x2);
        let y3 = lam.add(a1).mul(&x3).neg().sub(&nu).sub(a3);
        Ok(Some((x3, y3)))
    }

    pub fn mul(&self, n: u64, pt: &LocalPoint) -> Result<LocalPoint> {
        let mut acc = None;
        let mut base = pt.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            base = self.add(&base, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// The formal logarithm at `t = -x/y` of a point reducing to the origin.
    pub fn formal_log(&self, pt: &LocalPoint, prec: i64) -> Result<QuadPadic> {
        let Some((x, y)) = pt else { return Ok(QuadPadic::zero(&self.ext, prec)) };
        let t = x.div(y)?.neg();
        let vt = t.vale().unwrap_or(i64::MAX / 4);
        if vt < 1 {
            return Err(Error::UniformizationFailed("point does not reduce to the origin".into()));
        }
        let e = self.ext.e();
        let prime = self.ext.prime();
        let work = prec + super::GUARD;
        let mut acc = QuadPadic::zero(&self.ext, work);
        let mut tk = t.clone();
        let mut done = false;
        // bounds v_p(k) for every remaining term
        let tail = (self.omega.len() as f64).ln() / (prime.p() as f64).ln();
        let tail = tail.floor() as i64;
        for (k, c) in self.omega.iter().enumerate() {
            let k1 = (k + 1) as i64;
            let vk = crate::padic::vp_i64(prime.p(), k1) as i64;
            if tk.vale().map_or(true, |v| v - e * tail >= e * work) {
                done = true;
                break;
            }
            if !c.is_zero() {
                let coef = Padic::from_rational(prime, &BigRational::new(c.clone(), k1.into()), work + vk)?;
                acc = acc.add(&tk.mul_padic(&coef));
            }
            tk = tk.mul(&t);
        }
        if !done {
            return Err(Error::UniformizationFailed("formal logarithm truncated too early".into()));
        }
        Ok(acc.with_prec(prec))
    }

    /// `(1/m) Log(m P)` for the least `m` with `m P` reducing to the origin.
    pub fn log(&self, pt: &LocalPoint, prec: i64) -> Result<QuadPadic> {
        let mut acc = pt.clone();
        for m in 1..=4096u64 {
            match &acc {
                None => return Ok(QuadPadic::zero(&self.ext, prec)),
                Some((x, _)) if x.vale().map_or(false, |v| v < 0) => {
                    let l = self.formal_log(&acc, prec + 4)?;
                    return Ok(l.mul_padic(&Padic::from_ratio(self.ext.prime(), 1, m as i64, prec + 4)?).with_prec(prec));
                }
                _ => acc = self.add(&acc, pt)?,
            }
        }
        Err(Error::UniformizationFailed("no multiple reduces to the origin".into()))
    }
}
