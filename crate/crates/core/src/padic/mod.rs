//! p-adic numbers: `Q_p`, its quadratic extensions, and the logarithm and
//! exponential maps.

mod linalg;
mod mat2;
mod qp;
mod quad;
mod series;

pub use linalg::{hermite, inverse as mat_inverse, PadicMat};
pub use mat2::Mat2;
pub use qp::{is_prime, vp_i64, Padic, Prime, EXACT};
pub use quad::{kronecker, legendre, ExtKind, QuadExt, QuadPadic};
pub use series::{exp, log1p, log_iwasawa, log_iwasawa_quad, BranchedLog, SeriesRing};
