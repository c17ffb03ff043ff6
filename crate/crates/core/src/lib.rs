//! Anticyclotomic p-adic L-functions attached to elliptic curves over
//! imaginary quadratic fields in which the prime `p` ramifies.
//!
//! The crate is organised bottom up: p-adic arithmetic, class groups,
//! definite quaternion algebras, the Bruhat-Tits tree and its quotient,
//! harmonic cocycles, measures and integration on `P^1(Q_p)`, optimal
//! embeddings, the L-function itself, and the Tate-curve side used to
//! compare derivatives against logarithms of points.

pub mod error;
pub mod harmonic;
pub mod lattice;
pub mod lfunction;
pub mod measure;
pub mod arith;
pub mod classfield;
pub mod curve;
pub mod embeddings;
pub mod padic;
pub mod pipeline;
pub mod quaternion;
pub mod tate;
pub mod tree;

pub use error::{Error, Result};
