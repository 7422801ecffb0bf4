//! Exact linear algebra over Q(√5)(i): scalars, square matrices, projectors
//! of orthogonal bases, and symplectic Pauli operators.
//!
//! The field covers all built-in systems. Systems whose coordinates lie in
//! Q(i) never populate the `√5` components; a faster Q(i)-only scalar would
//! only need to replace [`ExactScalar`] behind the same operations.

mod basis;
mod intern;
mod matrix;
pub mod parse;
mod pauli;
mod scalar;

pub use basis::{observable_from_basis, standard_basis, OrthogonalBasis};
pub use intern::ObservableInterner;
pub use matrix::{
    inner_product, product_sign, projector, ray_reflection, sign_canonical, ExactMatrix, ExactVector, ProductSign,
};
pub use parse::{format_vector, parse_scalar, parse_vector, parse_vectors};
pub use pauli::{commute, pauli_product, PauliOperator};
pub use scalar::{ExactScalar, RealSurd};
