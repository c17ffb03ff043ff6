//! The Bruhat-Tits tree of `PGL_2(Q_p)`, the action of the norm-one units of
//! an Eichler `Z[1/p]`-order on it, and the finite quotient graph.

mod group;
mod node;
mod quotient;

pub use group::{ArithmeticGroup, LocalOrder};
pub use quotient::{build_quotient, eichler_mass, ends_fundamental_domain, Glue, QuotientGraph};
pub use node::{canon_mod, ratmat_to_padic, Edge, RatMat2, Tree, Vertex};
