//! Oriented optimal embeddings of `O = O_K[1/p]` into `R`, the action of
//! `Delta` on them, and the objects attached to one embedding: fixed points
//! in `K_p`, the parametrization of `P^1(Q_p)` by norm-one elements, the
//! twist polynomial and the pushed-forward measure.

mod local;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::classfield::{is_fundamental, DeltaGroup, QuadField};
use crate::error::{Error, Result};
use crate::lattice::rat;
use crate::quaternion::{EichlerOrder, Order, Quat};
use crate::tree::{ArithmeticGroup, Edge, LocalOrder, QuotientGraph};

pub use local::{eta, eta_inverse, fixed_points, root_of_disc, twist_act, twist_polynomial, uniformizer, GDomain};

/// An embedding, stored through the images of `omega` (with
/// `omega^2 - t omega + n = 0`) and of `sqrt(D) = 2 omega - t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalEmbedding {
    pub omega: Quat,
    pub root_d: Quat,
    /// The edge whose Iwahori order contains the image; for listed
    /// embeddings this is the quotient representative `rep`.
    pub edge: Edge,
    pub rep: usize,
    /// Image of `omega` under the orientation at each prime of `N^+ N^-`.
    pub orientation: Vec<(u64, u64)>,
}

/// The least root of `X^2 - t X + n` in each residue ring of the
/// orientation of `R`, which fixes the orientation of `O`.
pub fn field_orientation(field: &QuadField, o: &EichlerOrder) -> Result<Vec<(u64, u64)>> {
    let (t, n) = field.omega_poly();
    o.orientations
        .iter()
        .map(|or| {
            let ring = &or.ring;
            (0..ring.size())
                .map(|i| ring.element(i))
                .find(|&r| {
                    let sq = ring.mul(r, r);
                    let lin = ring.scale(&BigInt::from(-t), r);
                    ring.add(ring.add(sq, lin), ring.scale(&BigInt::from(n), (1, 0))) == (0, 0)
                })
                .ok_or_else(|| Error::HypothesisViolation(format!("{} is not inert or split at {}", field.disc, or.l)))
        })
        .collect()
}

/// Whether `x` lies in the Eichler Z-order `R cap End(e)` of level `p N^+`.
pub fn in_edge_order(g: &ArithmeticGroup, e: &Edge, x: &Quat) -> Result<bool> {
    if !g.order.contains_r(x) {
        return Ok(false);
    }
    let ch = g.chart(&g.tree.edge_chart(e))?;
    let m = ch.inv()?.mul(&g.iota(x)?).mul(&ch);
    Ok(m.is_integral() && m.c.val_or_prec() >= 1)
}

/// The edge reversed by `iota(y)` for `y` the image of `sqrt(D)`: the middle
/// edge of the path from the root to its image.
pub fn embedding_edge(g: &ArithmeticGroup, root_d: &Quat) -> Result<Edge> {
    let t = &g.tree;
    let v = t.root();
    let w = g.act_vertex(root_d, &v)?;
    let path = t.path(&v, &w);
    let len = path.len() - 1;
    if len % 2 == 0 {
        return Err(Error::Invariant("image of sqrt(D) fixes a vertex".into()));
    }
    let mid = Edge { src: path[(len - 1) / 2].clone(), dst: path[(len + 1) / 2].clone() };
    Ok(if t.parity(&mid.src) == 0 { mid } else { mid.reverse() })
}

/// Whether the image of `omega` is a root of its minimal polynomial, and
/// `O_K` is maximal so that the embedding of `O_K[1/p]` is optimal.
pub fn is_optimal(field: &QuadField, omega: &Quat) -> bool {
    let (t, n) = field.omega_poly();
    omega.trd() == rat(t) && omega.nrd() == rat(n) && is_fundamental(field.disc) && t * t - 4 * n == field.disc
}

fn conjugate_under_stabilizer(stab: &[Quat], x: &Quat, y: &Quat) -> bool {
    stab.iter().any(|s| x.conjugate_by(s).as_ref() == Some(y))
}

/// All oriented optimal embeddings up to conjugation by `R_1^x`, grouped by
/// the quotient edge they sit on.
pub fn enumerate_embeddings(field: &QuadField, q: &QuotientGraph, g: &ArithmeticGroup) -> Result<Vec<OptimalEmbedding>> {
    let (t, n) = field.omega_poly();
    let target = field_orientation(field, &g.order)?;
    let mut out: Vec<OptimalEmbedding> = Vec::new();
    for (k, e) in q.edges.iter().enumerate() {
        let chart = g.tree.edge_chart(e);
        let stab = g.edge_transporters(e, e)?;
        let mut here: Vec<Quat> = Vec::new();
        for y in g.transport_elements(&chart, &chart, LocalOrder::Iwahori, &rat(n))? {
            for x in [y.neg(), y] {
                if x.trd() != rat(t) || !is_optimal(field, &x) {
                    continue;
                }
                if g.order.orient(&x).as_ref() != Some(&target) {
                    continue;
                }
                let root_d = x.scale_int(2).sub(&Quat::scalar(x.a, x.b, rat(t)));
                if embedding_edge(g, &root_d)? != *e {
                    continue;
                }
                if here.iter().any(|h| conjugate_under_stabilizer(&stab, h, &x)) {
                    continue;
                }
                here.push(x.clone());
                out.push(OptimalEmbedding { omega: x, root_d, edge: e.clone(), rep: k, orientation: target.clone() });
            }
        }
    }
    Ok(out)
}

/// Conjugate an embedding given by the image of `omega` into the list and
/// return its index.
pub fn locate(q: &QuotientGraph, g: &ArithmeticGroup, list: &[OptimalEmbedding], omega: &Quat, t: i64) -> Result<usize> {
    let root_d = omega.scale_int(2).sub(&Quat::scalar(omega.a, omega.b, rat(t)));
    let e = embedding_edge(g, &root_d)?;
    let glue = q.reduce_edge(g, &e)?;
    let moved = omega.conjugate_by(&glue.gamma).ok_or(Error::ConjugatorNotFound)?;
    let rep = &q.edges[glue.rep];
    let stab = g.edge_transporters(rep, rep)?;
    list.iter()
        .position(|emb| emb.rep == glue.rep && conjugate_under_stabilizer(&stab, &emb.omega, &moved))
        .ok_or_else(|| Error::OrbitIncomplete("conjugated embedding is not in the list".into()))
}

/// A generator of the left ideal `R Psi(a)` for the ideal `a = Z a + Z (-b + sqrt D)/2`
/// of norm prime to `pN`.
fn ideal_generator(g: &ArithmeticGroup, emb: &OptimalEmbedding, form: (i64, i64)) -> Result<Quat> {
    let (a, b) = form;
    let o = &g.order;
    let level = (o.alg().disc * o.level * o.p) as i64;
    if num_integer::gcd(a, level) != 1 {
        return Err(Error::IdealNotCoprime);
    }
    let (qa, qb) = (o.alg().a, o.alg().b);
    let xi = emb.root_d.sub(&Quat::scalar(qa, qb, rat(b))).scale(&BigRational::new(1.into(), 2.into()));
    let gens_a = Quat::scalar(qa, qb, rat(a));
    let chart = g.tree.edge_chart(&emb.edge);
    let basis = g.transport_lattice(&chart, &chart, LocalOrder::Iwahori)?;
    let gens: Vec<Quat> = basis.iter().flat_map(|r| [r.mul(&gens_a), r.mul(&xi)]).collect();
    let ideal = Order::lattice(o.alg(), &gens)?;
    let mut m = BigInt::from(a);
    for _ in 0..24 {
        if let Some(beta) = ideal.norm_form_enumerate(&m).into_iter().next() {
            return Ok(beta);
        }
        m *= BigInt::from(o.p);
    }
    Err(Error::ConjugatorNotFound)
}

/// The embedding translated by the ideal class `class` of `K`.
pub fn act_by_class(
    field: &QuadField,
    q: &QuotientGraph,
    g: &ArithmeticGroup,
    list: &[OptimalEmbedding],
    idx: usize,
    class: usize,
) -> Result<usize> {
    let emb = &list[idx];
    let level = (g.order.alg().disc * g.order.level * g.order.p) as i64;
    let f = field.ideal_coprime_to(class, level);
    let beta = ideal_generator(g, emb, (f.a, f.b))?;
    let moved = emb.omega.conjugate_by(&beta).ok_or(Error::ConjugatorNotFound)?;
    if !g.order.contains_r(&moved) {
        return Err(Error::Invariant("translated embedding left R".into()));
    }
    locate(q, g, list, &moved, field.omega_poly().0)
}

/// Number of `Delta`-orbits on the embeddings. Conjugation by `R^x` and by
/// `R_1^x` differ by an element of norm `p`; when the prime above `p` is
/// principal, the image of its generator is such an element and commutes
/// with the embedding, so the two conjugacy relations agree and there is a
/// single orbit.
pub fn expected_orbits(delta: &DeltaGroup) -> usize {
    if delta.p_principal {
        1
    } else {
        2
    }
}

/// The embeddings together with the action of `Delta` and an ordering of one
/// orbit.
#[derive(Clone, Debug)]
pub struct EmbeddingSystem {
    pub field: QuadField,
    pub delta: DeltaGroup,
    pub list: Vec<OptimalEmbedding>,
    /// `action[s][i]`: index of the embedding `i` translated by `s` in `Delta`.
    pub action: Vec<Vec<usize>>,
    /// `orbit[s]` is the embedding `Psi_1` translated by `s^{-1}`.
    pub orbit: Vec<usize>,
    /// An embedding outside the orbit of `Psi_1`, if there is one.
    pub other: Option<usize>,
}

impl EmbeddingSystem {
    pub fn build(field: &QuadField, delta: &DeltaGroup, q: &QuotientGraph, g: &ArithmeticGroup) -> Result<EmbeddingSystem> {
        let list = enumerate_embeddings(field, q, g)?;
        let hp = delta.order();
        let expected = expected_orbits(delta) * hp;
        if list.len() != expected {
            return Err(Error::CountMismatch { found: list.len(), expected });
        }
        let action: Vec<Vec<usize>> = (0..hp)
            .map(|s| (0..list.len()).map(|i| act_by_class(field, q, g, &list, i, delta.lifts[s])).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for i in 0..list.len() {
            let mut seen: Vec<usize> = action.iter().map(|row| row[i]).collect();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != hp {
                return Err(Error::OrbitIncomplete(format!("Delta does not act freely on embedding {i}")));
            }
        }
        let orbit: Vec<usize> = (0..hp).map(|s| action[delta.group.inv(s)][0]).collect();
        let other = (0..list.len()).find(|i| !orbit.contains(i));
        Ok(EmbeddingSystem { field: field.clone(), delta: delta.clone(), list, action, orbit, other })
    }

    pub fn orbit_count(&self) -> usize {
        let mut reps: Vec<usize> = (0..self.list.len())
            .map(|i| self.action.iter().map(|row| row[i]).min().unwrap())
            .collect();
        reps.sort_unstable();
        reps.dedup();
        reps.len()
    }

    pub fn psi(&self, i: usize) -> &OptimalEmbedding {
        &self.list[self.orbit[i]]
    }
}

/// `x^2 = D` for the image of `sqrt(D)`.
pub fn squares_to_disc(emb: &OptimalEmbedding, d: i64) -> bool {
    let sq = emb.root_d.mul(&emb.root_d);
    sq.is_scalar() && sq.c[0] == rat(d) && emb.root_d.trd().is_zero()
}

#[cfg(test)]
mod tests;
