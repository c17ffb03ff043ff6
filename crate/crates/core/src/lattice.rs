//! Integer lattices: Hermite normal form, LLL reduction of a Gram matrix, and
//! Fincke-Pohst enumeration of short vectors of a positive definite form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type RatMat = Vec<Vec<BigRational>>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Row Hermite normal form of an integer matrix. Zero rows are dropped; the
/// result is upper triangular in echelon shape with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        // gcd-combine all remaining rows on this column
        let mut piv: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for r in m.into_iter() {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match piv.take() {
                None => piv = Some(r),
                Some(pr) => {
                    let g = pr[col].extended_gcd(&r[col]);
                    let (a, b) = (&pr[col] / &g.gcd, &r[col] / &g.gcd);
                    let new_piv: Vec<BigInt> = (0..ncols).map(|k| &g.x * &pr[k] + &g.y * &r[k]).collect();
                    let other: Vec<BigInt> = (0..ncols).map(|k| &a * &r[k] - &b * &pr[k]).collect();
                    piv = Some(new_piv);
                    if other.iter().any(|x| !x.is_zero()) {
                        rest.push(other);
                    }
                }
            }
        }
        m = rest;
        if let Some(mut pr) = piv {
            if pr[col].is_negative() {
                for x in pr.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(pr);
            pivots.push(col);
        }
    }
    // reduce above pivots
    for i in 0..out.len() {
        let c = pivots[i];
        for k in 0..i {
            let q = out[k][c].div_floor(&out[i][c]);
            if !q.is_zero() {
                for j in 0..ncols {
                    let t = &q * &out[i][j];
                    out[k][j] -= t;
                }
            }
        }
    }
    out
}

/// Least common multiple of the denominators of a rational matrix.
pub fn common_denominator(rows: &[Vec<BigRational>]) -> BigInt {
    let mut d = BigInt::one();
    for r in rows {
        for x in r {
            d = d.lcm(x.denom());
        }
    }
    d
}

/// Row HNF of a rational matrix: the lattice spanned by the rows.
pub fn hnf_rat(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = common_denominator(rows);
    let ints: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()).collect();
    hnf_rows(&ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, d.clone())).collect())
        .collect()
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn mat_inv(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    let mut a: RatMat = m.clone();
    let mut inv: RatMat = (0..n).map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &s;
            inv[col][j] = &inv[col][j] / &s;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Basis of the right kernel `{x : M x = 0}` of a rational matrix with
/// `ncols` columns, by reduced row echelon form. Basis vectors have a `1`
/// in their free coordinate.
pub fn kernel(m: &RatMat, ncols: usize) -> RatMat {
    let mut a: RatMat = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, piv);
        let s = a[row][col].clone();
        for j in col..ncols {
            a[row][j] = &a[row][j] / &s;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..ncols {
                    let t = &f * &a[row][j];
                    a[r][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![rat(0); ncols];
            v[f] = rat(1);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: &RatMat, ncols: usize) -> usize {
    ncols - kernel(m, ncols).len()
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = rat(0);
                    for t in 0..k {
                        s += &a[i][t] * &b[t][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &RatMat) -> RatMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn det(m: &RatMat) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = rat(1);
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return rat(0),
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    d
}

/// LLL reduction (delta = 3/4) of a positive definite Gram matrix. Returns the
/// unimodular transform `T` (rows are new basis vectors in old coordinates)
/// and the reduced Gram matrix `T G T^t`.
pub fn lll_gram(g: &RatMat) -> (Vec<Vec<BigInt>>, RatMat) {
    let n = g.len();
    let mut t: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut gram = g.clone();
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1;
    let mut iterations = 0;
    while k < n {
        iterations += 1;
        assert!(iterations < 100_000, "LLL did not terminate");
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&gram);
            let q = round(&mu[k][j]);
            if !q.is_zero() {
                sub_row(&mut t, &mut gram, k, j, &q);
            }
        }
        let (mu, bstar) = gram_schmidt(&gram);
        let lhs = &bstar[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            t.swap(k, k - 1);
            swap_gram(&mut gram, k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (t, gram)
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

fn gram_schmidt(g: &RatMat) -> (RatMat, Vec<BigRational>) {
    let n = g.len();
    let mut mu = vec![vec![rat(0); n]; n];
    let mut b = vec![rat(0); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &b[k];
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = g[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &b[k];
        }
        b[i] = s;
        mu[i][i] = rat(1);
    }
    (mu, b)
}

/// Row `k` -= q * row `j`, updating the Gram matrix.
fn sub_row(t: &mut [Vec<BigInt>], g: &mut RatMat, k: usize, j: usize, q: &BigInt) {
    let n = g.len();
    for c in 0..n {
        let x = q * &t[j][c];
        t[k][c] -= x;
    }
    let qr = BigRational::from_integer(q.clone());
    // new g[k][c] = g[k][c] - q g[j][c] for c != k
    let gjj = g[j][j].clone();
    let gkj = g[k][j].clone();
    let gkk = g[k][k].clone();
    for c in 0..n {
        if c != k {
            let v = &g[k][c] - &qr * &g[j][c];
            g[k][c] = v.clone();
            g[c][k] = v;
        }
    }
    g[k][k] = gkk - rat(2) * &qr * gkj + &qr * &qr * gjj;
}

fn swap_gram(g: &mut RatMat, a: usize, b: usize) {
    g.swap(a, b);
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

fn to_f64(x: &BigRational) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::MAX);
    let d = x.denom().to_f64().unwrap_or(f64::MAX);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        return n / d;
    }
    // scale down large entries
    let shift = x.numer().bits().max(x.denom().bits()) as i64 - 60;
    let s = BigInt::one() << (shift.max(0) as usize);
    let n = (x.numer() / &s).to_f64().unwrap();
    let d = (x.denom() / &s).to_f64().unwrap();
    if d == 0.0 {
        f64::INFINITY
    } else {
        n / d
    }
}

pub fn quad_form(g: &RatMat, x: &[BigInt]) -> BigRational {
    let n = g.len();
    let mut s = rat(0);
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            s += &g[i][j] * BigRational::from_integer(&x[i] * &x[j]);
        }
    }
    s
}

/// All nonzero integer vectors `x` with `x^t G x <= bound`, one from each
/// pair `{x, -x}` (the one whose last nonzero coordinate is positive).
pub fn short_vectors(g: &RatMat, bound: &BigRational) -> Vec<Vec<BigInt>> {
    let n = g.len();
    let (t, red) = lll_gram(g);
    let (mu, b) = gram_schmidt(&red);
    let muf: Vec<Vec<f64>> = mu.iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let bf: Vec<f64> = b.iter().map(to_f64).collect();
    let cf = to_f64(bound) * (1.0 + 1e-9) + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate(n, n, &muf, &bf, cf, &mut x, 0.0, &mut |y: &[i64]| {
        let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
        if quad_form(&red, &yb) > *bound {
            return;
        }
        // map back to original coordinates
        let orig: Vec<BigInt> = (0..n)
            .map(|c| {
                let mut s = BigInt::zero();
                for r in 0..n {
                    s += &yb[r] * &t[r][c];
                }
                s
            })
            .collect();
        out.push(orig);
    });
    // canonical sign and order
    for v in out.iter_mut() {
        if let Some(last) = v.iter().rev().find(|x| !x.is_zero()) {
            if last.is_negative() {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Recursive Fincke-Pohst over levels `k-1 .. 0`. `acc` is the partial norm
/// contributed by the coordinates already fixed.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    n: usize,
    k: usize,
    mu: &[Vec<f64>],
    b: &[f64],
    bound: f64,
    x: &mut Vec<i64>,
    acc: f64,
    sink: &mut dyn FnMut(&[i64]),
) {
    if k == 0 {
        if x.iter().any(|&v| v != 0) {
            // keep one of each +-pair: last nonzero positive
            let last = x.iter().rev().find(|&&v| v != 0).unwrap();
            if *last > 0 {
                sink(x);
            }
        }
        return;
    }
    let i = k - 1;
    let mut c = 0.0;
    for j in i + 1..n {
        c -= mu[j][i] * x[j] as f64;
    }
    let rem = bound - acc;
    if rem < -1e-9 {
        return;
    }
    let r = (rem.max(0.0) / b[i]).sqrt();
    let lo = (c - r - 1e-7).ceil() as i64;
    let hi = (c + r + 1e-7).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let d = v as f64 - c;
        let add = d * d * b[i];
        if acc + add <= bound + 1e-7 * bound.abs().max(1.0) {
            enumerate(n, i, mu, b, bound, x, acc + add, sink);
        }
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_small_matrix() {
        let h = hnf_rows(&[bi(&[2, 4, 4]), bi(&[-6, 6, 12]), bi(&[10, -4, -16])]);
        // determinant is preserved up to sign
        let m: RatMat = h.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let orig: RatMat = vec![bi(&[2, 4, 4]), bi(&[-6, 6, 12]), bi(&[10, -4, -16])]
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        assert_eq!(det(&m).abs(), det(&orig).abs());
        assert!(h[1][0].is_zero() && h[2][0].is_zero() && h[2][1].is_zero());
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let h = hnf_rows(&[bi(&[1, 2]), bi(&[2, 4]), bi(&[3, 6])]);
        assert_eq!(h, vec![bi(&[1, 2])]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m: RatMat = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(&v[0] + rat(2) * &v[1] + rat(3) * &v[2], rat(0));
        }
        assert_eq!(rank(&m, 3), 1);
    }

    #[test]
    fn inverse_round_trip() {
        let m: RatMat = vec![vec![rat(2), rat(1)], vec![rat(7), rat(4)]];
        let inv = mat_inv(&m).unwrap();
        let id = mat_mul(&m, &inv);
        assert_eq!(id, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
    }

    #[test]
    fn short_vectors_of_z4() {
        let g: RatMat = (0..4).map(|i| (0..4).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect();
        assert_eq!(short_vectors(&g, &rat(1)).len(), 4);
        // vectors of norm <= 2 in Z^4: 8/2 + 24/2
        assert_eq!(short_vectors(&g, &rat(2)).len(), 16);
    }

    #[test]
    fn lll_preserves_determinant() {
        let g: RatMat = vec![
            vec![rat(101), rat(50), rat(3)],
            vec![rat(50), rat(26), rat(2)],
            vec![rat(3), rat(2), rat(5)],
        ];
        let (t, red) = lll_gram(&g);
        assert_eq!(det(&red), det(&g));
        let tm: RatMat = t.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        assert_eq!(det(&tm).abs(), rat(1));
        assert!(red[0][0] <= rat(5));
    }
}
