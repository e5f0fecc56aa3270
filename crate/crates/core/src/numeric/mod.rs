//! Scalars, polynomials, rational functions, root extraction and dense
//! linear algebra shared by every other module.

pub mod linalg;
pub mod poly;
pub mod ratfun;
pub mod roots;
pub mod scalar;

pub use linalg::Matrix;
pub use poly::{interpolate, wronskian, Polynomial};
pub use ratfun::RationalFunction;
pub use roots::{clustered_roots, poly_roots};
pub use scalar::{CFloat, Scalar};
