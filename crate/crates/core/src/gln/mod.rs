//! Representations of glN: partitions, tensor powers of the vector
//! representation with evaluation points, singular vectors and the
//! equivariant projections onto irreducible submodules.

mod epimorphism;
mod partition;
mod space;

pub use epimorphism::Epimorphism;
pub use partition::Partition;
pub use space::{admissible_indices, singular_basis, weight_of, ModuleSpace};
