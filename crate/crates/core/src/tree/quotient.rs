use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::group::ArithmeticGroup;
use super::node::{Edge, Vertex};
use crate::arith::factor;
use crate::error::{Error, Result};
use crate::quaternion::Quat;

/// How a tree edge is identified with a representative: `gamma * e` is the
/// representative when `sign = 1` and its reverse when `sign = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Glue {
    pub rep: usize,
    pub sign: i8,
    pub gamma: Quat,
}

/// The finite graph `Gamma \ T`. Edge representatives all have a source at
/// even distance from the root; the class of an edge with odd source is the
/// reverse of one of them.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub p: u64,
    pub vertices: Vec<Vertex>,
    pub vertex_stab: Vec<usize>,
    pub edges: Vec<Edge>,
    pub edge_stab: Vec<usize>,
    /// Vertex representatives of the source and target of each edge
    /// representative.
    pub edge_ends: Vec<(usize, usize)>,
    /// For each vertex representative, its `p + 1` out-edges in tree order.
    pub vertex_star: Vec<Vec<Glue>>,
    /// For each edge representative, the `p` edges continuing it (index 0)
    /// and continuing its reverse (index 1).
    pub children: Vec<[Vec<Glue>; 2]>,
    pub atkin_lehner: Quat,
}

/// `(1/12) prod_{l | N^-} (l - 1) prod_{l^e || N^+} l^{e-1} (l + 1)`.
pub fn eichler_mass(n_minus: u64, n_plus: u64) -> BigRational {
    let mut num = BigInt::from(1);
    for (l, _) in factor(n_minus) {
        num *= l - 1;
    }
    for (l, e) in factor(n_plus) {
        num *= BigInt::from(l).pow(e - 1) * (l + 1);
    }
    BigRational::new(num, BigInt::from(12))
}

impl ArithmeticGroup {
    pub fn reduce_vertex_among(&self, v: &Vertex, reps: &[Vertex]) -> Result<Option<(usize, Quat)>> {
        for (k, r) in reps.iter().enumerate() {
            if self.tree.parity(r) != self.tree.parity(v) {
                continue;
            }
            if let Some(x) = self.vertex_transporters(v, r)?.into_iter().next() {
                return Ok(Some((k, x)));
            }
        }
        Ok(None)
    }

    pub fn reduce_edge_among(&self, e: &Edge, reps: &[Edge]) -> Result<Option<Glue>> {
        let (f, sign) = if self.tree.parity(&e.src) == 0 { (e.clone(), 1) } else { (e.reverse(), -1) };
        for (k, r) in reps.iter().enumerate() {
            if let Some(x) = self.edge_transporters(&f, r)?.into_iter().next() {
                return Ok(Some(Glue { rep: k, sign, gamma: x }));
            }
        }
        Ok(None)
    }
}

/// Breadth-first exploration of the tree from the root until every edge
/// leaving a representative is identified with a representative.
pub fn build_quotient(g: &ArithmeticGroup, depth_limit: usize) -> Result<QuotientGraph> {
    let t = &g.tree;
    let mut vertices = vec![t.root()];
    let mut edges: Vec<Edge> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(vi) = queue.pop_front() {
        let v = vertices[vi].clone();
        if t.depth(&v) as usize > depth_limit {
            return Err(Error::DepthExceeded(depth_limit));
        }
        for e in t.out_edges(&v) {
            if g.reduce_edge_among(&e, &edges)?.is_some() {
                continue;
            }
            edges.push(if t.parity(&v) == 0 { e.clone() } else { e.reverse() });
            if g.reduce_vertex_among(&e.dst, &vertices)?.is_none() {
                vertices.push(e.dst.clone());
                queue.push_back(vertices.len() - 1);
            }
        }
    }
    let vertex_stab = vertices.iter().map(|v| g.vertex_stabilizer(v)).collect::<Result<Vec<_>>>()?;
    let edge_stab = edges.iter().map(|e| g.edge_stabilizer(e)).collect::<Result<Vec<_>>>()?;
    let find_v = |v: &Vertex| -> Result<usize> {
        Ok(g.reduce_vertex_among(v, &vertices)?.ok_or_else(|| Error::Invariant("vertex left the quotient".into()))?.0)
    };
    let find_e = |e: &Edge| -> Result<Glue> {
        g.reduce_edge_among(e, &edges)?.ok_or_else(|| Error::Invariant("edge left the quotient".into()))
    };
    let edge_ends = edges.iter().map(|e| Ok((find_v(&e.src)?, find_v(&e.dst)?))).collect::<Result<Vec<_>>>()?;
    let vertex_star = vertices
        .iter()
        .map(|v| t.out_edges(v).iter().map(find_e).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut children = Vec::with_capacity(edges.len());
    for e in &edges {
        let fwd = t.edge_children(e).iter().map(find_e).collect::<Result<Vec<_>>>()?;
        let back = t.edge_children(&e.reverse()).iter().map(find_e).collect::<Result<Vec<_>>>()?;
        children.push([fwd, back]);
    }
    Ok(QuotientGraph {
        p: t.p(),
        vertices,
        vertex_stab,
        edges,
        edge_stab,
        edge_ends,
        vertex_star,
        children,
        atkin_lehner: g.atkin_lehner()?,
    })
}

impl QuotientGraph {
    pub fn even_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| self.vertices[i].n.rem_euclid(2) == 0).collect()
    }

    /// `sum 1/w_v` over vertex classes of the given parity.
    pub fn mass(&self, parity: i64) -> BigRational {
        let mut s = BigRational::zero();
        for (v, &w) in self.vertices.iter().zip(&self.vertex_stab) {
            if v.n.rem_euclid(2) == parity {
                s += BigRational::new(BigInt::from(1), BigInt::from(w));
            }
        }
        s
    }

    /// Representative and group element for any edge, by comparison with
    /// every representative.
    pub fn reduce_edge_by_search(&self, g: &ArithmeticGroup, e: &Edge) -> Result<Glue> {
        if let Some(k) = self.edges.iter().position(|r| r == e) {
            return Ok(Glue { rep: k, sign: 1, gamma: g.order.alg().one() });
        }
        g.reduce_edge_among(e, &self.edges)?.ok_or(Error::DepthExceeded(0))
    }

    /// Representative and group element for any edge, by walking the path
    /// from the root and following the stored continuation tables.
    pub fn reduce_edge(&self, g: &ArithmeticGroup, e: &Edge) -> Result<Glue> {
        let t = &g.tree;
        let root = t.root();
        let path = t.path(&root, &e.src);
        let mut steps: Vec<Edge> = path.windows(2).map(|w| Edge { src: w[0].clone(), dst: w[1].clone() }).collect();
        let mut reversed_last = false;
        if path.len() >= 2 && e.dst == path[path.len() - 2] {
            reversed_last = true;
        } else {
            steps.push(e.clone());
        }
        let first = &steps[0];
        let idx = t.out_edges(&root).iter().position(|f| f == first).unwrap();
        let mut glue = self.vertex_star[0][idx].clone();
        for next in &steps[1..] {
            glue = self.child_glue(g, &glue, next)?;
        }
        if reversed_last {
            glue.sign = -glue.sign;
        }
        Ok(glue)
    }

    /// The glue of `child`, an edge continuing the edge whose glue is `glue`.
    pub fn child_glue(&self, g: &ArithmeticGroup, glue: &Glue, child: &Edge) -> Result<Glue> {
        let moved = g.act_edge(&glue.gamma, child)?;
        let side = if glue.sign == 1 { 0 } else { 1 };
        let pos = g
            .tree
            .edge_children(&self.oriented_rep(glue))
            .iter()
            .position(|f| *f == moved)
            .ok_or_else(|| Error::Invariant(format!("lost track of {child:?} while reducing")))?;
        let step = &self.children[glue.rep][side][pos];
        Ok(Glue { rep: step.rep, sign: step.sign, gamma: step.gamma.mul(&glue.gamma) })
    }

    /// Glues of the `p + 1` edges leaving the root, in tree order.
    pub fn root_glues(&self) -> &[Glue] {
        &self.vertex_star[0]
    }

    /// The representative edge, oriented as the glue says.
    pub fn oriented_rep(&self, glue: &Glue) -> Edge {
        let r = &self.edges[glue.rep];
        if glue.sign == 1 {
            r.clone()
        } else {
            r.reverse()
        }
    }

    pub fn reduce_vertex(&self, g: &ArithmeticGroup, v: &Vertex) -> Result<(usize, Quat)> {
        g.reduce_vertex_among(v, &self.vertices)?.ok_or(Error::DepthExceeded(0))
    }
}

/// Edges whose `U` sets partition a fundamental domain for the involution
/// `gamma` acting on `P^1(Q_p)`. The geodesic from `v` to `gamma v` has odd
/// length and `gamma` reverses its middle edge `e_m`; the domain is
/// `U(reverse e_m)`, returned as the `p` other edges leaving the source of
/// `e_m`.
pub fn ends_fundamental_domain(g: &ArithmeticGroup, v: &Vertex, gamma: &Quat) -> Result<Vec<Edge>> {
    let t = gamma.trd();
    let n = gamma.nrd();
    if n.is_zero() {
        return Err(Error::InfiniteOrder);
    }
    let ratio = &t * &t / &n;
    if ratio == BigRational::from_integer(4.into()) && gamma.is_scalar() {
        return Err(Error::DegenerateDomain("scalar element".into()));
    }
    let finite = [0, 1, 2, 3].iter().any(|&k| ratio == BigRational::from_integer(k.into()));
    if !finite {
        return Err(Error::InfiniteOrder);
    }
    if !t.is_zero() {
        return Err(Error::Unsupported("fundamental domains for elements of order above two".into()));
    }
    let w = g.act_vertex(gamma, v)?;
    if w == *v {
        return Err(Error::DegenerateDomain("the element fixes the vertex".into()));
    }
    let path = g.tree.path(v, &w);
    let len = path.len() - 1;
    if len % 2 == 0 {
        return Err(Error::DegenerateDomain("the element fixes the midpoint of the path".into()));
    }
    let mid = Edge { src: path[(len - 1) / 2].clone(), dst: path[(len + 1) / 2].clone() };
    if g.act_edge(gamma, &mid)? != mid.reverse() {
        return Err(Error::Invariant("the element does not reverse the middle edge".into()));
    }
    Ok(g.tree.out_edges(&mid.src).into_iter().filter(|e| *e != mid).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{build_algebra, eichler_order, split_at_p};

    fn group(nm: u64, np: u64, p: u64) -> ArithmeticGroup {
        let alg = build_algebra(nm).unwrap();
        let o = eichler_order(&alg, np, p).unwrap();
        let s = split_at_p(&o, 40).unwrap();
        ArithmeticGroup::new(o, s).unwrap()
    }

    #[test]
    fn mass_formula() {
        for (nm, np, p) in [(2u64, 1u64, 3u64), (7, 1, 3), (5, 1, 7), (3, 1, 7), (2, 3, 5), (3, 2, 5), (7, 1, 2)] {
            let g = group(nm, np, p);
            let q = build_quotient(&g, 30).unwrap();
            assert_eq!(q.mass(0), eichler_mass(nm, np), "even mass for {nm} {np} {p}");
            assert_eq!(q.mass(1), eichler_mass(nm, np), "odd mass for {nm} {np} {p}");
            for (k, &(s, _)) in q.edge_ends.iter().enumerate() {
                assert_eq!(q.vertex_stab[s] % q.edge_stab[k], 0);
            }
            for (vi, star) in q.vertex_star.iter().enumerate() {
                let out = g.tree.out_edges(&q.vertices[vi]);
                assert_eq!(star.len() as u64, p + 1);
                for (e, glue) in out.iter().zip(star) {
                    assert_eq!(g.act_edge(&glue.gamma, e).unwrap(), q.oriented_rep(glue));
                }
            }
        }
    }

    #[test]
    fn reduction_walk_round_trip() {
        let g = group(7, 1, 3);
        let q = build_quotient(&g, 30).unwrap();
        for e in g.tree.covering_at_level(4).iter().step_by(7) {
            for f in [e.clone(), e.reverse()] {
                let glue = q.reduce_edge(&g, &f).unwrap();
                assert!(g.in_gamma(&glue.gamma));
                assert_eq!(g.act_edge(&glue.gamma, &f).unwrap(), q.oriented_rep(&glue));
                let slow = q.reduce_edge_by_search(&g, &f).unwrap();
                assert_eq!((slow.rep, slow.sign), (glue.rep, glue.sign));
            }
        }
        for (k, r) in q.edges.iter().enumerate() {
            let glue = q.reduce_edge(&g, r).unwrap();
            assert_eq!((glue.rep, glue.sign), (k, 1));
        }
    }

    #[test]
    fn atkin_lehner_flips_parity() {
        let g = group(5, 1, 7);
        let q = build_quotient(&g, 30).unwrap();
        let w = &q.atkin_lehner;
        for v in &q.vertices {
            let wv = g.act_vertex(w, v).unwrap();
            assert_ne!(g.tree.parity(&wv), g.tree.parity(v));
        }
    }

    #[test]
    fn fundamental_domain_of_an_involution() {
        let g = group(5, 1, 7);
        // an element of norm 7 and trace 0: it squares to -7
        let w = g
            .order
            .order
            .norm_form_enumerate(&BigInt::from(7))
            .into_iter()
            .find(|x| x.trd().is_zero())
            .unwrap();
        let root = g.tree.root();
        let dom = ends_fundamental_domain(&g, &root, &w).unwrap();
        assert_eq!(dom.len(), 7);
        let img: Vec<Edge> = dom.iter().map(|e| g.act_edge(&w, e).unwrap()).collect();
        for e in &img {
            assert!(!dom.contains(e));
        }
        assert!(matches!(ends_fundamental_domain(&g, &root, &g.order.alg().one()), Err(Error::DegenerateDomain(_))));
    }
}
