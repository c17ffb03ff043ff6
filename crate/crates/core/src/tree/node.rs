use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{Mat2, Padic, Prime};

/// An exact 2x2 rational matrix `[a, b, c, d]`.
pub type RatMat2 = [BigRational; 4];

pub fn ratmat_to_padic(m: &RatMat2, prime: &Prime, prec: i64) -> Result<Mat2> {
    Mat2::from_rationals(prime, m, prec)
}

fn ri(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Representative of `x mod p^n Z_p` for `x` in `Z[1/p]`: the unique one
/// whose p-adic expansion has no digits at positions `>= n` and
/// nonnegative digits.
pub fn canon_mod(prime: &Prime, x: &BigRational, n: i64) -> BigRational {
    let (s, _) = prime.split(x.denom());
    debug_assert!(x.denom() == &prime.pow(s), "denominator is not a power of p");
    if n + s <= 0 {
        return BigRational::zero();
    }
    let m = prime.pow(n + s);
    BigRational::new(x.numer().mod_floor(&m), prime.pow(s))
}

/// A vertex of the tree: the class of the lattice spanned by the columns of
/// `[[p^n, a], [0, 1]]`, equivalently the ball `a + p^n Z_p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub n: i64,
    pub a: BigRational,
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.a, self.n)
    }
}

/// An oriented edge. `U(e)` is the ball of `dst` when `dst` is a child of
/// `src`, and the complement of the ball of `src` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: Vertex,
    pub dst: Vertex,
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.src, self.dst)
    }
}

impl Edge {
    pub fn reverse(&self) -> Edge {
        Edge { src: self.dst.clone(), dst: self.src.clone() }
    }

    /// Whether the edge points into a smaller ball.
    pub fn points_down(&self) -> bool {
        self.dst.n == self.src.n + 1
    }
}

/// Combinatorics of the Bruhat-Tits tree of `PGL_2(Q_p)`.
#[derive(Clone, Debug)]
pub struct Tree {
    pub prime: Prime,
}

impl Tree {
    pub fn new(prime: &Prime) -> Tree {
        Tree { prime: prime.clone() }
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn vertex(&self, n: i64, a: &BigRational) -> Vertex {
        Vertex { n, a: canon_mod(&self.prime, a, n) }
    }

    /// The vertex `Z_p^2`.
    pub fn root(&self) -> Vertex {
        Vertex { n: 0, a: BigRational::zero() }
    }

    /// The standard edge `p^{-1} Z_p -> Z_p`, with `U = Z_p`.
    pub fn standard_edge(&self) -> Edge {
        Edge { src: self.vertex(-1, &BigRational::zero()), dst: self.root() }
    }

    fn p_pow(&self, k: i64) -> BigRational {
        if k >= 0 {
            ri(self.prime.pow(k))
        } else {
            BigRational::new(BigInt::one(), self.prime.pow(-k))
        }
    }

    pub fn vertex_chart(&self, v: &Vertex) -> RatMat2 {
        [self.p_pow(v.n), v.a.clone(), BigRational::zero(), BigRational::one()]
    }

    /// A matrix `g` with `e = g e*` for the standard edge `e*`, so that
    /// `U(e) = g(Z_p)`.
    pub fn edge_chart(&self, e: &Edge) -> RatMat2 {
        if e.points_down() {
            [self.p_pow(e.dst.n), e.dst.a.clone(), BigRational::zero(), BigRational::one()]
        } else {
            [e.src.a.clone(), self.p_pow(e.src.n - 1), BigRational::one(), BigRational::zero()]
        }
    }

    /// Distance from the root.
    pub fn depth(&self, v: &Vertex) -> i64 {
        let va = if v.a.is_zero() { i64::MAX } else { self.prime.valuation_rat(&v.a).unwrap() };
        let top = 0.min(va).min(v.n);
        -top + (v.n - top)
    }

    pub fn parity(&self, v: &Vertex) -> i64 {
        v.n.rem_euclid(2)
    }

    pub fn parent(&self, v: &Vertex) -> Vertex {
        self.vertex(v.n - 1, &v.a)
    }

    pub fn children_of_vertex(&self, v: &Vertex) -> Vec<Vertex> {
        let step = self.p_pow(v.n);
        (0..self.p() as i64).map(|b| self.vertex(v.n + 1, &(&v.a + &step * ri(BigInt::from(b))))).collect()
    }

    /// The `p + 1` edges leaving `v`: the `p` children in digit order, then
    /// the parent.
    pub fn out_edges(&self, v: &Vertex) -> Vec<Edge> {
        let mut out: Vec<Edge> =
            self.children_of_vertex(v).into_iter().map(|w| Edge { src: v.clone(), dst: w }).collect();
        out.push(Edge { src: v.clone(), dst: self.parent(v) });
        out
    }

    /// The `p` edges leaving `dst(e)` other than the reverse of `e`; their
    /// `U` sets partition `U(e)`.
    pub fn edge_children(&self, e: &Edge) -> Vec<Edge> {
        let back = e.reverse();
        self.out_edges(&e.dst).into_iter().filter(|f| *f != back).collect()
    }

    /// The class of the lattice spanned by the columns of `m`.
    pub fn vertex_of_matrix(&self, m: &Mat2) -> Result<Vertex> {
        let (mut x, mut y, mut z, mut w) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());
        if z.val_or_prec() < w.val_or_prec() {
            std::mem::swap(&mut x, &mut y);
            std::mem::swap(&mut z, &mut w);
        }
        if w.is_zero() {
            return Err(Error::PrecisionExhausted("singular lattice".into()));
        }
        let f = z.div(&w)?;
        let top = x.sub(&f.mul(&y));
        if top.is_zero() {
            return Err(Error::PrecisionExhausted("lattice basis lost precision".into()));
        }
        let n = top.valuation().unwrap() - w.valuation().unwrap();
        let a = y.div(&w)?;
        if a.prec() < n {
            return Err(Error::PrecisionExhausted(format!("vertex needs {n} digits, have {}", a.prec())));
        }
        let ar = if a.val_or_prec() >= n { BigRational::zero() } else { a.with_prec(n).to_rational() };
        Ok(self.vertex(n, &ar))
    }

    pub fn act_vertex(&self, g: &Mat2, v: &Vertex) -> Result<Vertex> {
        let c = ratmat_to_padic(&self.vertex_chart(v), &self.prime, g.prec())?;
        self.vertex_of_matrix(&g.mul(&c))
    }

    pub fn act_edge(&self, g: &Mat2, e: &Edge) -> Result<Edge> {
        Ok(Edge { src: self.act_vertex(g, &e.src)?, dst: self.act_vertex(g, &e.dst)? })
    }

    /// The `p^{m-1}(p+1)` edges at distance `m` from the root pointing away
    /// from it.
    pub fn covering_at_level(&self, m: usize) -> Vec<Edge> {
        assert!(m >= 1);
        let mut level = self.out_edges(&self.root());
        for _ in 1..m {
            level = level.iter().flat_map(|e| self.edge_children(e)).collect();
        }
        level
    }

    /// Whether the point `x` (`None` is infinity) lies in `U(e)`.
    pub fn end_in(&self, e: &Edge, x: Option<&Padic>) -> bool {
        let in_ball = |v: &Vertex| match x {
            None => false,
            Some(x) => {
                let d = x.sub(&Padic::from_rational(&self.prime, &v.a, x.prec()).unwrap());
                d.val_or_prec() >= v.n
            }
        };
        if e.points_down() {
            in_ball(&e.dst)
        } else {
            !in_ball(&e.src)
        }
    }

    /// The geodesic from `u` to `v` as a list of vertices.
    pub fn path(&self, u: &Vertex, v: &Vertex) -> Vec<Vertex> {
        // climb both to a common ball
        let mut up_u = vec![u.clone()];
        let mut up_v = vec![v.clone()];
        let mut a = u.clone();
        let mut b = v.clone();
        while a != b {
            if a.n >= b.n {
                a = self.parent(&a);
                up_u.push(a.clone());
            } else {
                b = self.parent(&b);
                up_v.push(b.clone());
            }
            if a.n == b.n && a != b {
                a = self.parent(&a);
                up_u.push(a.clone());
                b = self.parent(&b);
                up_v.push(b.clone());
            }
        }
        up_v.pop();
        up_v.reverse();
        up_u.extend(up_v);
        up_u
    }
}
