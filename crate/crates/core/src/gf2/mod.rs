//! Bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices are stored 64 coordinates per `u64` word, so row
//! operations are word-wise XORs and weights are popcounts. This is the
//! carrier for incidence matrices, their kernels, solution cosets and the
//! codes whose weight distributions are counted elsewhere.

mod matrix;
mod span;
pub(crate) mod vector;

pub use matrix::{dual_basis, in_span, AffineSolutionSet, Gf2Matrix, RowReduction};
pub use span::{enumerate_coset, enumerate_span, sample_coset, sample_coset_with, tally_span_weights, SpanTally};
pub use vector::Gf2Vector;
