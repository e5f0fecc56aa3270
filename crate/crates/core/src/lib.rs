//! Eigenvectors of the glN Gaudin Bethe algebra and Fuchsian differential
//! operators with polynomial kernel.
//!
//! The crate builds the Bethe algebra action on tensor products of evaluation
//! modules, evaluates the universal weight function at root coordinates of
//! Schubert-cell points, and reconstructs Bethe eigenvectors from Fuchsian
//! operators by degenerating a curve of generic cell points.

pub mod bethe;
pub mod config;
pub mod diffop;
pub mod error;
pub mod gln;
pub mod io;
pub mod numeric;
pub mod par;
pub mod pipeline;
pub mod schubert;
pub mod weight;

pub use error::{Error, Result};
pub use numeric::{CFloat, Matrix, Polynomial, RationalFunction, Scalar};
pub use rug::Rational;
