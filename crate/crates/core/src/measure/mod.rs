//! The measure on `P^1(Q_p)` attached to a weight-2 harmonic cocycle, and
//! integration against it.
//!
//! Two integrators are provided. Riemann sums and products sample an
//! integrand at the centres of a level-`m` covering. The moment integrator
//! expands the integrand as a power series on each piece of an adaptive
//! covering and pairs it with the moments of the measure, which converges
//! much faster for the locally analytic integrands used downstream.

mod moments;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::harmonic::Cocycle;
use crate::padic::{BranchedLog, Mat2, QuadPadic};
use crate::tree::{ArithmeticGroup, Edge, Glue, QuotientGraph};

pub use moments::Moments;

/// A covering piece: an edge of the tree with its glue to a representative.
#[derive(Clone, Debug)]
pub struct Piece {
    pub edge: Edge,
    pub glue: Glue,
    pub depth: usize,
}

/// `mu(U(e)) = c(e)` for the cocycle `c`.
#[derive(Clone, Copy)]
pub struct Measure<'a> {
    pub q: &'a QuotientGraph,
    pub g: &'a ArithmeticGroup,
    pub c: &'a Cocycle,
}

/// `(A(u) - z1) / (A(u) - z2) = g0 (1 + t1 u) / (1 + t2 u)` for a chart `A`.
#[derive(Clone, Debug)]
pub struct LinearRatio {
    pub g0: QuadPadic,
    pub t1: QuadPadic,
    pub t2: QuadPadic,
}

impl LinearRatio {
    pub fn on_chart(chart: &Mat2, z1: &QuadPadic, z2: &QuadPadic) -> Result<LinearRatio> {
        let ext = z1.ext();
        let lift = |x: &crate::padic::Padic| QuadPadic::from_padic(ext, x.clone());
        let (a, b, c, d) = (lift(&chart.a), lift(&chart.b), lift(&chart.c), lift(&chart.d));
        let num1 = b.sub(&z1.mul(&d));
        let num2 = b.sub(&z2.mul(&d));
        Ok(LinearRatio {
            g0: num1.div(&num2)?,
            t1: a.sub(&z1.mul(&c)).div(&num1)?,
            t2: a.sub(&z2.mul(&c)).div(&num2)?,
        })
    }

    /// Least valuation of `t1`, `t2`, times the ramification index.
    pub fn slope(&self) -> i64 {
        let big = i64::MAX / 4;
        self.t1.vale().unwrap_or(big).min(self.t2.vale().unwrap_or(big))
    }

    /// Coefficients of `log(1 + t1 u) - log(1 + t2 u)` in degrees `1..=deg`.
    pub fn log_tail(&self, deg: usize) -> Vec<QuadPadic> {
        let mut out = Vec::with_capacity(deg);
        let (mut p1, mut p2) = (self.t1.clone(), self.t2.clone());
        for r in 1..=deg as i64 {
            let mut term = p1.sub(&p2).div_int(r);
            if r % 2 == 0 {
                term = term.neg();
            }
            out.push(term);
            p1 = p1.mul(&self.t1);
            p2 = p2.mul(&self.t2);
        }
        out
    }
}

impl<'a> Measure<'a> {
    pub fn new(q: &'a QuotientGraph, g: &'a ArithmeticGroup, c: &'a Cocycle) -> Measure<'a> {
        Measure { q, g, c }
    }

    fn glue_mass(&self, glue: &Glue) -> BigRational {
        let v = &self.c.values[glue.rep];
        if glue.sign == 1 {
            v.clone()
        } else {
            -v
        }
    }

    pub fn mass(&self, e: &Edge) -> Result<BigRational> {
        Ok(self.glue_mass(&self.q.reduce_edge(self.g, e)?))
    }

    pub fn piece_mass(&self, piece: &Piece) -> BigRational {
        self.glue_mass(&piece.glue)
    }

    /// The `p + 1` pieces leaving the root; their sets partition `P^1(Q_p)`.
    pub fn whole_line(&self) -> Vec<Piece> {
        let t = &self.g.tree;
        t.out_edges(&t.root())
            .into_iter()
            .zip(self.q.root_glues())
            .map(|(edge, glue)| Piece { edge, glue: glue.clone(), depth: 1 })
            .collect()
    }

    /// Pieces for arbitrary edges, reduced from scratch.
    pub fn pieces_for(&self, edges: &[Edge]) -> Result<Vec<Piece>> {
        edges
            .iter()
            .map(|e| Ok(Piece { edge: e.clone(), glue: self.q.reduce_edge(self.g, e)?, depth: self.g.tree.depth(&e.dst) as usize }))
            .collect()
    }

    pub fn subdivide(&self, piece: &Piece) -> Result<Vec<Piece>> {
        self.g
            .tree
            .edge_children(&piece.edge)
            .into_iter()
            .map(|edge| {
                let glue = self.q.child_glue(self.g, &piece.glue, &edge)?;
                Ok(Piece { edge, glue, depth: piece.depth + 1 })
            })
            .collect()
    }

    /// The level-`m` covering: edges at distance `m` from the root pointing
    /// away from it.
    pub fn covering(&self, m: usize) -> Result<Vec<Piece>> {
        let mut level = self.whole_line();
        for _ in 1..m {
            let mut next = Vec::with_capacity(level.len() * self.q.p as usize);
            for piece in &level {
                next.extend(self.subdivide(piece)?);
            }
            level = next;
        }
        Ok(level)
    }

    /// Centre of `U(e)`: the rational centre of the ball, or infinity for the
    /// complement of a ball.
    pub fn center(e: &Edge) -> Option<BigRational> {
        if e.points_down() {
            Some(e.dst.a.clone())
        } else {
            None
        }
    }

    /// `sum_e phi(t_e) mu(U(e))` over the level-`m` covering.
    pub fn riemann_sum(&self, m: usize, phi: impl Fn(Option<&BigRational>) -> Result<QuadPadic>) -> Result<QuadPadic> {
        let mut acc: Option<QuadPadic> = None;
        for piece in self.covering(m)? {
            let w = integral_mass(&self.piece_mass(&piece))?;
            let term = phi(Self::center(&piece.edge).as_ref())?.mul_int(w);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.ok_or_else(|| Error::Invariant("empty covering".into()))
    }

    /// `prod_e phi(t_e)^{mu(U(e))}` over the level-`m` covering.
    pub fn riemann_product(&self, m: usize, phi: impl Fn(Option<&BigRational>) -> Result<QuadPadic>) -> Result<QuadPadic> {
        let mut acc: Option<QuadPadic> = None;
        for piece in self.covering(m)? {
            let w = integral_mass(&self.piece_mass(&piece))?;
            if w == 0 {
                continue;
            }
            let v = phi(Self::center(&piece.edge).as_ref())?;
            if v.vale() != Some(0) {
                return Err(Error::NonUnitSample);
            }
            let term = v.pow(w)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.mul(&term),
            });
        }
        acc.ok_or_else(|| Error::Invariant("all masses vanish".into()))
    }

    /// Chart `Z_p -> U(e)` of a piece: the representative's chart moved back
    /// by the glue.
    pub fn chart(&self, mom: &Moments, piece: &Piece) -> Result<Mat2> {
        let back = self.g.iota(&piece.glue.gamma.conj())?;
        Ok(back.mul(mom.chart_of(piece.glue.rep, piece.glue.sign)))
    }

    /// Refine `start` until `accept` holds on every piece.
    pub fn adaptive(
        &self,
        mom: &Moments,
        start: Vec<Piece>,
        max_depth: usize,
        accept: impl Fn(&Mat2) -> Result<bool>,
    ) -> Result<Vec<(Piece, Mat2)>> {
        let mut out = Vec::new();
        let mut stack = start;
        while let Some(piece) = stack.pop() {
            let chart = self.chart(mom, &piece)?;
            if accept(&chart)? {
                out.push((piece, chart));
            } else if piece.depth >= max_depth {

                return Err(Error::DepthExceeded(max_depth));
            } else {
                stack.extend(self.subdivide(&piece)?);
            }
        }
        Ok(out)
    }

    /// `sum over pieces of sum_r f_r m(r)`, where `f` returns the Taylor
    /// coefficients of the integrand composed with the chart.
    pub fn integrate_series(
        &self,
        mom: &Moments,
        pieces: &[(Piece, Mat2)],
        f: impl Fn(&Piece, &Mat2) -> Result<Vec<QuadPadic>>,
    ) -> Result<QuadPadic> {
        let mut acc: Option<QuadPadic> = None;
        for (piece, chart) in pieces {
            let coeffs = f(piece, chart)?;
            let m = mom.of(piece.glue.rep, piece.glue.sign);
            for (cf, mr) in coeffs.iter().zip(m) {
                let term = cf.mul_padic(mr);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
        }
        acc.ok_or_else(|| Error::Invariant("nothing to integrate".into()))
    }

    /// `int log((x - z1)/(x - z2)) d mu(x)` over the sets of `start`.
    pub fn integrate_log_ratio(
        &self,
        mom: &Moments,
        start: Vec<Piece>,
        z1: &QuadPadic,
        z2: &QuadPadic,
        log: &BranchedLog,
    ) -> Result<QuadPadic> {
        let e = z1.ext().e();
        let pieces = self.adaptive(mom, start, 60, |chart| Ok(LinearRatio::on_chart(chart, z1, z2)?.slope() >= e))?;
        self.integrate_series(mom, &pieces, |piece, chart| {
            let lr = LinearRatio::on_chart(chart, z1, z2)?;
            let mass = integral_mass(&self.piece_mass(piece))?;
            let mut out = vec![if mass == 0 { QuadPadic::zero(z1.ext(), mom.prec) } else { log.log_quad(&lr.g0)? }];
            out.extend(lr.log_tail(mom.degree));
            Ok(out)
        })
    }

    /// The Coleman integral `int_{z1}^{z2} f(z) dz`, that is
    /// `int_{P^1} log((x - z2)/(x - z1)) d mu(x)`.
    pub fn coleman_integral(&self, mom: &Moments, z1: &QuadPadic, z2: &QuadPadic, log: &BranchedLog) -> Result<QuadPadic> {
        self.integrate_log_ratio(mom, self.whole_line(), z2, z1, log)
    }

    /// The multiplicative integral of `(x - z1)/(x - z2)` over the sets of
    /// `start`: the product of the values at the piece centres raised to the
    /// masses, times the exponential of the integrated logarithm of the
    /// remaining principal units. Pieces are refined until those units are
    /// within the domain where `exp` inverts `log`.
    pub fn mult_integral(&self, mom: &Moments, start: Vec<Piece>, z1: &QuadPadic, z2: &QuadPadic) -> Result<QuadPadic> {
        let e = z1.ext().e();
        let pieces = self.adaptive(mom, start, 60, |chart| {
            let lr = LinearRatio::on_chart(chart, z1, z2)?;
            Ok(lr.slope() >= e && lr.t1.sub(&lr.t2).vale().map_or(true, |v| v >= 2 * e))
        })?;
        let mut prod = QuadPadic::one(z1.ext(), crate::padic::EXACT);
        for (piece, chart) in &pieces {
            let w = integral_mass(&self.piece_mass(piece))?;
            if w != 0 {
                prod = prod.mul(&LinearRatio::on_chart(chart, z1, z2)?.g0.pow(w)?);
            }
        }
        let tail = self.integrate_series(mom, &pieces, |_, chart| {
            let lr = LinearRatio::on_chart(chart, z1, z2)?;
            let mut out = vec![QuadPadic::zero(z1.ext(), mom.prec)];
            out.extend(lr.log_tail(mom.degree));
            Ok(out)
        })?;
        Ok(prod.mul(&tail.exp()?).with_prec(mom.prec))
    }
}

fn integral_mass(m: &BigRational) -> Result<i64> {
    if !m.is_integer() {
        return Err(Error::Incompatible("measure values must be integers".into()));
    }
    m.to_integer().to_i64().ok_or_else(|| Error::Incompatible("measure value too large".into()))
}

/// Sum of the masses of a covering, exactly.
pub fn total_mass(m: &Measure, pieces: &[Piece]) -> BigRational {
    pieces.iter().fold(BigRational::zero(), |acc, p| acc + m.piece_mass(p))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::curve::EllipticCurve;
    use crate::harmonic::eigencocycle;
    use crate::padic::{Padic, Prime, QuadExt};
    use crate::quaternion::{build_algebra, eichler_order, split_at_p};
    use crate::tree::build_quotient;

    struct Fixture {
        g: ArithmeticGroup,
        q: QuotientGraph,
        c: Cocycle,
    }

    fn fixture() -> Fixture {
        let alg = build_algebra(7).unwrap();
        let o = eichler_order(&alg, 1, 3).unwrap();
        let s = split_at_p(&o, 40).unwrap();
        let g = ArithmeticGroup::new(o, s).unwrap();
        let q = build_quotient(&g, 12).unwrap();
        let e = EllipticCurve::new([1, 0, 0, -4, -1]);
        let a: BTreeMap<u64, i64> = [2, 5, 11, 13].into_iter().map(|l| (l, e.a_ell(l))).collect();
        let c = eigencocycle(&q, &g, &a, 13).unwrap();
        Fixture { g, q, c }
    }

    fn point(ext: &Arc<QuadExt>, a: i64, b: i64, prec: i64) -> QuadPadic {
        let prime = ext.prime();
        QuadPadic::new(ext, Padic::from_int(prime, a, prec), Padic::from_int(prime, b, prec))
    }

    #[test]
    fn masses_are_additive_and_invariant() {
        let f = fixture();
        let m = Measure::new(&f.q, &f.g, &f.c);
        for level in 1..=4 {
            let cov = m.covering(level).unwrap();
            assert_eq!(cov.len(), 4 * 3usize.pow(level as u32 - 1));
            assert!(total_mass(&m, &cov).is_zero());
            for piece in cov.iter().take(12) {
                let kids = m.subdivide(piece).unwrap();
                assert_eq!(total_mass(&m, &kids), m.piece_mass(piece));
                assert_eq!(m.mass(&piece.edge).unwrap(), m.piece_mass(piece));
            }
        }
        let gammas: Vec<_> = f.q.children.iter().flat_map(|c| c[0].iter().chain(&c[1])).map(|gl| gl.gamma.clone()).take(30).collect();
        for (i, gamma) in gammas.iter().enumerate() {
            assert!(f.g.in_gamma(gamma));
            let piece = &m.covering(2).unwrap()[i % 12];
            let moved = f.g.act_edge(gamma, &piece.edge).unwrap();
            assert_eq!(m.mass(&moved).unwrap(), m.piece_mass(piece));
        }
    }

    #[test]
    fn riemann_sums_of_constants() {
        let f = fixture();
        let m = Measure::new(&f.q, &f.g, &f.c);
        let ext = QuadExt::ramified(f.g.prime(), -120).unwrap();
        let one = |_: Option<&BigRational>| Ok(QuadPadic::from_int(&ext, 1, 20));
        assert!(m.riemann_sum(3, one).unwrap().is_zero());
        let seven = |_: Option<&BigRational>| Ok(QuadPadic::from_int(&ext, 7, 20));
        assert_eq!(m.riemann_product(3, seven).unwrap(), QuadPadic::one(&ext, 20));
    }

    #[test]
    fn moment_integrals_match_riemann_sums() {
        let f = fixture();
        let m = Measure::new(&f.q, &f.g, &f.c);
        let prime = Prime::new(3);
        let ext = QuadExt::ramified(&prime, -120).unwrap();
        let prec = 16;
        let mom = Moments::compute(&f.q, &f.g, &f.c, prec, prec as usize + 4).unwrap();
        let z = point(&ext, 1, 1, 30);
        let zb = z.conj();
        let log = BranchedLog::iwasawa(&prime);
        let col = m.coleman_integral(&mom, &zb, &z, &log).unwrap();
        assert!(!col.is_zero());
        // antisymmetry and the empty path
        assert_eq!(m.coleman_integral(&mom, &z, &zb, &log).unwrap(), col.neg());
        assert!(m.coleman_integral(&mom, &z, &z, &log).unwrap().is_zero());
        // Riemann sums converge to the same value, one digit per level
        let phi = |x: Option<&BigRational>| -> Result<QuadPadic> {
            let Some(x) = x else { return Ok(QuadPadic::zero(&ext, 30)) };
            let xp = QuadPadic::from_padic(&ext, Padic::from_rational(&prime, x, 30)?);
            log.log_quad(&xp.sub(&z).div(&xp.sub(&zb))?)
        };
        for level in [4, 6] {
            let r = m.riemann_sum(level, &phi).unwrap();
            let diff = r.sub(&col);
            let v = diff.vale().unwrap_or(i64::MAX);
            assert!(v >= 2 * (level as i64 - 2), "level {level}: valuation {v}");
        }
        // the multiplicative integral has the additive one as its logarithm
        let mi = m.mult_integral(&mom, m.whole_line(), &z, &zb).unwrap();
        assert_eq!(mi.mul(&mi.conj()), QuadPadic::one(&ext, prec));
        assert_eq!(log.log_quad(&mi).unwrap(), col.with_prec(mi.prec().min(col.prec())));
    }
}
