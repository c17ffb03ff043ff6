use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::node::{ratmat_to_padic, Edge, RatMat2, Tree, Vertex};
use crate::error::{Error, Result};
use crate::lattice::{mat_mul, short_vectors, transpose, RatMat};
use crate::padic::{hermite, mat_inverse, Mat2, Padic, Prime};
use crate::quaternion::{EichlerOrder, Quat, SplittingMap};

/// Which local order the transporter must land in: `M_2(Z_p)` for vertices
/// or the Iwahori order (lower left entry divisible by `p`) for edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalOrder {
    Maximal,
    Iwahori,
}

/// The group of norm-one units of `R = R_0[1/p]` acting on the tree through
/// the splitting map.
#[derive(Clone, Debug)]
pub struct ArithmeticGroup {
    pub order: EichlerOrder,
    pub split: SplittingMap,
    pub tree: Tree,
    gram: RatMat,
    basis_images: Vec<Mat2>,
}

impl ArithmeticGroup {
    pub fn new(order: EichlerOrder, split: SplittingMap) -> Result<ArithmeticGroup> {
        let tree = Tree::new(&split.prime);
        let gram = order.order.gram();
        let basis_images = order.order.basis.iter().map(|b| split.apply(b)).collect::<Result<_>>()?;
        Ok(ArithmeticGroup { order, split, tree, gram, basis_images })
    }

    pub fn prime(&self) -> &Prime {
        &self.split.prime
    }

    pub fn prec(&self) -> i64 {
        self.split.prec
    }

    pub fn iota(&self, x: &Quat) -> Result<Mat2> {
        self.split.apply(x)
    }

    pub fn chart(&self, m: &RatMat2) -> Result<Mat2> {
        ratmat_to_padic(m, self.prime(), self.prec())
    }

    /// A Z-basis (in quaternions) of `{y in R : iota(y) in to * O * from^{-1}}`
    /// for the local order `O`.
    pub fn transport_lattice(&self, from: &RatMat2, to: &RatMat2, local: LocalOrder) -> Result<Vec<Quat>> {
        let g1 = self.chart(from)?;
        let g2i = self.chart(to)?.inv()?;
        let p = Padic::from_int(self.prime(), self.prime().p() as i64, self.prec());
        let mut rows = Vec::with_capacity(4);
        for img in &self.basis_images {
            let m = g2i.mul(img).mul(&g1);
            let c = match local {
                LocalOrder::Maximal => m.c.clone(),
                LocalOrder::Iwahori => m.c.div(&p)?,
            };
            rows.push(vec![m.a.clone(), m.b.clone(), c, m.d.clone()]);
        }
        let inv = mat_inverse(&rows)?;
        let h = hermite(&inv)?;
        Ok(h.iter()
            .map(|row| {
                let coords: Vec<BigRational> = row.clone();
                let mut acc = Quat::zero(self.order.alg().a, self.order.alg().b);
                for (c, b) in coords.iter().zip(&self.order.order.basis) {
                    if !c.is_zero() {
                        acc = acc.add(&b.scale(c));
                    }
                }
                acc
            })
            .collect())
    }

    /// Elements `y` of the transport lattice with `nrd(y) = m`, one of each
    /// pair `{y, -y}`.
    pub fn transport_elements(&self, from: &RatMat2, to: &RatMat2, local: LocalOrder, m: &BigRational) -> Result<Vec<Quat>> {
        let basis = self.transport_lattice(from, to, local)?;
        let h: RatMat = basis.iter().map(|y| self.order.order.coords(y)).collect();
        let g = mat_mul(&mat_mul(&h, &self.gram), &transpose(&h));
        let out = short_vectors(&g, m)
            .into_iter()
            .map(|v| {
                let mut acc = Quat::zero(self.order.alg().a, self.order.alg().b);
                for (c, b) in v.iter().zip(&basis) {
                    if !c.is_zero() {
                        acc = acc.add(&b.scale(&BigRational::from_integer(c.clone())));
                    }
                }
                acc
            })
            .filter(|y| y.nrd() == *m)
            .collect();
        Ok(out)
    }

    fn det_valuation(&self, m: &RatMat2) -> i64 {
        let d = &m[0] * &m[3] - &m[1] * &m[2];
        self.prime().valuation_rat(&d).unwrap()
    }

    fn p_pow(&self, e: i64) -> BigRational {
        let p = BigRational::from_integer(BigInt::from(self.prime().p()));
        if e >= 0 {
            num_traits::pow(p, e as usize)
        } else {
            num_traits::pow(p.recip(), (-e) as usize)
        }
    }

    /// All norm-one `x` in `R` modulo sign with `iota(x) from O = to O` up to
    /// scalars.
    pub fn transporters(&self, from: &RatMat2, to: &RatMat2, local: LocalOrder) -> Result<Vec<Quat>> {
        let e = self.det_valuation(to) - self.det_valuation(from);
        if e.rem_euclid(2) != 0 {
            return Ok(Vec::new());
        }
        let ys = self.transport_elements(from, to, local, &self.p_pow(e))?;
        let s = self.p_pow(-e / 2);
        Ok(ys.into_iter().map(|y| y.scale(&s)).collect())
    }

    pub fn vertex_transporters(&self, v: &Vertex, w: &Vertex) -> Result<Vec<Quat>> {
        self.transporters(&self.tree.vertex_chart(v), &self.tree.vertex_chart(w), LocalOrder::Maximal)
    }

    pub fn edge_transporters(&self, e: &Edge, f: &Edge) -> Result<Vec<Quat>> {
        self.transporters(&self.tree.edge_chart(e), &self.tree.edge_chart(f), LocalOrder::Iwahori)
    }

    /// Order of the stabilizer in `Gamma = R_1^x / {+-1}`.
    pub fn vertex_stabilizer(&self, v: &Vertex) -> Result<usize> {
        Ok(self.vertex_transporters(v, v)?.len())
    }

    pub fn edge_stabilizer(&self, e: &Edge) -> Result<usize> {
        Ok(self.edge_transporters(e, e)?.len())
    }

    pub fn act_vertex(&self, x: &Quat, v: &Vertex) -> Result<Vertex> {
        self.tree.act_vertex(&self.iota(x)?, v)
    }

    pub fn act_edge(&self, x: &Quat, e: &Edge) -> Result<Edge> {
        self.tree.act_edge(&self.iota(x)?, e)
    }

    /// An element of `R_0` of reduced norm `p` times an even power of `p`,
    /// scaled into `R` with norm `p`.
    pub fn atkin_lehner(&self) -> Result<Quat> {
        let p = self.prime().p();
        let o = &self.order.order;
        for j in 0..6u32 {
            let m = BigInt::from(p).pow(2 * j + 1);
            if let Some(x) = o.norm_form_enumerate(&m).into_iter().next() {
                return Ok(x.scale(&self.p_pow(-(j as i64))));
            }
        }
        Err(Error::Invariant("no element of norm p found".into()))
    }

    /// Whether `x` lies in `R` and has norm one.
    pub fn in_gamma(&self, x: &Quat) -> bool {
        x.nrd().is_one() && self.order.contains_r(x)
    }
}
