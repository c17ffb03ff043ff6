use std::sync::Arc;

use num_integer::Roots;
use num_traits::ToPrimitive;

use super::OptimalEmbedding;
use crate::classfield::QuadField;
use crate::error::{Error, Result};
use crate::lattice::rat;
use crate::measure::{Measure, Moments, Piece};
use crate::padic::{BranchedLog, Mat2, Padic, QuadExt, QuadPadic};
use crate::quaternion::Quat;
use crate::tree::{ends_fundamental_domain, ArithmeticGroup, Edge};

/// `sqrt(D)` in the ramified extension, whose generator squares to `D / k^2`.
pub fn root_of_disc(ext: &Arc<QuadExt>, disc: i64) -> Result<QuadPadic> {
    let d = ext.d().to_i64().ok_or_else(|| Error::Incompatible("extension generator too large".into()))?;
    if disc % d != 0 {
        return Err(Error::Incompatible(format!("extension does not contain sqrt({disc})")));
    }
    let k2 = disc / d;
    let k = k2.sqrt();
    if k * k != k2 {
        return Err(Error::Incompatible(format!("extension does not contain sqrt({disc})")));
    }
    Ok(QuadPadic::gen(ext).mul_int(k))
}

/// The fixed points `z = (a + sqrt D)/c` and `zbar = (a - sqrt D)/c` of
/// `iota(Psi(sqrt D)) = [[a, b], [c, d]]` on `P^1(K_p)`.
pub fn fixed_points(g: &ArithmeticGroup, emb: &OptimalEmbedding, ext: &Arc<QuadExt>, disc: i64) -> Result<(QuadPadic, QuadPadic)> {
    let m = g.iota(&emb.root_d)?;
    let s = root_of_disc(ext, disc)?;
    let a = QuadPadic::from_padic(ext, m.a.clone());
    let c = QuadPadic::from_padic(ext, m.c.clone());
    Ok((a.add(&s).div(&c)?, a.sub(&s).div(&c)?))
}

/// `(a - zbar)/(a - z)`, with infinity sent to `1`.
pub fn eta_inverse(z: &QuadPadic, zbar: &QuadPadic, a: Option<&Padic>) -> Result<QuadPadic> {
    match a {
        None => Ok(QuadPadic::one(z.ext(), z.prec())),
        Some(a) => {
            let x = QuadPadic::from_padic(z.ext(), a.clone());
            x.sub(zbar).div(&x.sub(z))
        }
    }
}

/// `(alpha z - zbar)/(alpha - 1)`, or `None` for `alpha = 1`.
pub fn eta(z: &QuadPadic, zbar: &QuadPadic, alpha: &QuadPadic) -> Result<Option<QuadPadic>> {
    let den = alpha.sub(&QuadPadic::one(z.ext(), alpha.prec()));
    if den.is_zero() {
        return Ok(None);
    }
    Ok(Some(alpha.mul(z).sub(zbar).div(&den)?))
}

/// Coefficients, constant term first, of
/// `trace(iota(u) (x, 1)^T (1, -x)) = -c x^2 + (a - d) x + b`.
pub fn twist_polynomial(g: &ArithmeticGroup, emb: &OptimalEmbedding) -> Result<[Padic; 3]> {
    let m = g.iota(&emb.root_d)?;
    Ok([m.b.clone(), m.a.sub(&m.d), m.c.neg()])
}

/// `P . m = (cx + d)^2 det(m)^{-1} P((ax + b)/(cx + d))`.
pub fn twist_act(poly: &[Padic; 3], m: &Mat2) -> Result<[Padic; 3]> {
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let two = |x: &Padic| x.mul_int(2);
    let den = [d.mul(d), two(&c.mul(d)), c.mul(c)];
    let mid = [b.mul(d), a.mul(d).add(&b.mul(c)), a.mul(c)];
    let num = [b.mul(b), two(&a.mul(b)), a.mul(a)];
    let det = m.det();
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let s = poly[0].mul(&den[i]).add(&poly[1].mul(&mid[i])).add(&poly[2].mul(&num[i]));
        out.push(s.div(&det)?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// `(x, y)` with `x + y omega` of norm `p`, when the prime above `p` is
/// principal.
pub fn uniformizer(field: &QuadField) -> Option<(i64, i64)> {
    let (t, n) = field.omega_poly();
    let p = field.p as i64;
    let bound = 2 * p.sqrt() + 2;
    for y in 0..=bound {
        for x in -bound - t * y..=bound {
            if x * x + t * x * y + n * y * y == p {
                return Some((x, y));
            }
        }
    }
    None
}

/// A fundamental domain in `P^1(Q_p)` for the action of `O^x / Z[1/p]^x`
/// through the embedding. When the prime above `p` is principal that
/// group has order two, generated by the image `gamma` of a uniformizer,
/// and the domain is cut out by `gamma`; otherwise it is trivial.
#[derive(Clone, Debug)]
pub struct GDomain {
    /// Order of the group acting, which is the order of the kernel of
    /// `K_{p,1}^x -> G`.
    pub kappa: usize,
    pub gamma: Option<Quat>,
    /// `None` for the whole line.
    pub edges: Option<Vec<Edge>>,
}

impl GDomain {
    pub fn new(field: &QuadField, g: &ArithmeticGroup, emb: &OptimalEmbedding) -> Result<GDomain> {
        let Some((x, y)) = uniformizer(field) else {
            return Ok(GDomain { kappa: 1, gamma: None, edges: None });
        };
        let o = &emb.omega;
        let gamma = o.scale(&rat(y)).add(&Quat::scalar(o.a, o.b, rat(x)));
        let edges = ends_fundamental_domain(g, &emb.edge.src, &gamma)?;
        Ok(GDomain { kappa: 2, gamma: Some(gamma), edges: Some(edges) })
    }

    pub fn pieces(&self, m: &Measure) -> Result<Vec<Piece>> {
        match &self.edges {
            None => Ok(m.whole_line()),
            Some(edges) => m.pieces_for(edges),
        }
    }

    /// The edges of the complement, which is the image of the domain.
    pub fn complement(&self, g: &ArithmeticGroup) -> Option<Vec<Edge>> {
        let edges = self.edges.as_ref()?;
        let src = &edges[0].src;
        Some(g.tree.out_edges(src).into_iter().filter(|e| !edges.contains(e)).collect())
    }

    /// `int_F log(eta^{-1}(a)) d mu(a)`, the integral of `log g` over `G`.
    pub fn log_integral(&self, m: &Measure, mom: &Moments, z: &QuadPadic, zbar: &QuadPadic, log: &BranchedLog) -> Result<QuadPadic> {
        m.integrate_log_ratio(mom, self.pieces(m)?, zbar, z, log)
    }

    /// `int_F d mu`, exactly.
    pub fn mass(&self, m: &Measure) -> Result<num_rational::BigRational> {
        Ok(crate::measure::total_mass(m, &self.pieces(m)?))
    }
}
