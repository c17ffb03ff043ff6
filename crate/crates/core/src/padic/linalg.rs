use num_rational::BigRational;
use num_traits::Zero;

use super::Padic;
use crate::error::{Error, Result};

pub type PadicMat = Vec<Vec<Padic>>;

fn pivot_row(m: &PadicMat, col: usize, from: usize) -> Option<usize> {
    (from..m.len()).filter(|&r| !m[r][col].is_zero()).min_by_key(|&r| m[r][col].val_or_prec())
}

/// Inverse of a square matrix over `Q_p`, pivoting on least valuation.
pub fn inverse(m: &PadicMat) -> Result<PadicMat> {
    let n = m.len();
    let prime = m[0][0].prime().clone();
    let prec = m.iter().flatten().map(|x| x.prec()).min().unwrap();
    let mut a = m.clone();
    let mut inv: PadicMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Padic::one(&prime, prec) } else { Padic::zero(&prime, prec) }).collect())
        .collect();
    for col in 0..n {
        let piv = pivot_row(&a, col, col).ok_or(Error::DivisionByIndistinguishableZero)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&s);
            inv[col][j] = inv[col][j].mul(&s);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Ok(inv)
}

/// Hermite form over `Z_p` of a nonsingular square matrix: upper triangular,
/// diagonal `p^{d_j}`, entries above the diagonal reduced to finite
/// expansions with no digits at positions `>= d_j`. Such a matrix has entries
/// in `Z[1/p]` and is returned exactly.
pub fn hermite(m: &PadicMat) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let prime = m[0][0].prime().clone();
    let mut a = m.clone();
    let mut diag = vec![0i64; n];
    for col in 0..n {
        let piv = pivot_row(&a, col, col).ok_or(Error::DivisionByIndistinguishableZero)?;
        a.swap(col, piv);
        let v = a[col][col].valuation().unwrap();
        diag[col] = v;
        // scale the pivot to p^v
        let u = a[col][col].shift(-v).inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&u);
        }
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].div(&a[col][col])?;
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                }
            }
        }
    }
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for j in 0..n {
        let pj = prime.pow(diag[j].max(0));
        out[j][j] = if diag[j] >= 0 {
            BigRational::from_integer(pj)
        } else {
            BigRational::new(1.into(), prime.pow(-diag[j]))
        };
        for i in 0..j {
            let x = &a[i][j];
            if x.prec() < diag[j] {
                return Err(Error::PrecisionExhausted(format!("hermite form needs {} digits", diag[j])));
            }
            let r = if x.val_or_prec() >= diag[j] {
                BigRational::zero()
            } else {
                x.with_prec(diag[j]).to_rational()
            };
            let rp = Padic::from_rational(&prime, &r, x.prec())?;
            let q = x.sub(&rp).div(&a[j][j])?;
            for k in j..n {
                a[i][k] = a[i][k].sub(&q.mul(&a[j][k]));
            }
            out[i][j] = r;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;

    #[test]
    fn hermite_of_small_matrix() {
        let p = Prime::new(3);
        let f = |x: i64| Padic::from_int(&p, x, 20);
        let m = vec![vec![f(3), f(1)], vec![f(9), f(6)]];
        let h = hermite(&m).unwrap();
        // row span over Z_3: determinant 9, so diagonal valuations sum to 2
        let d = &h[0][0] * &h[1][1];
        assert_eq!(d, BigRational::from_integer(9.into()));
        let inv = inverse(&m).unwrap();
        assert!(inv[0][0].mul(&m[0][0]).add(&inv[0][1].mul(&m[1][0])).approx_eq(&f(1)));
    }
}
