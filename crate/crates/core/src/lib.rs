//! Exact computation of generalized parity proofs of the Kochen-Specker theorem.

pub mod budget;
pub mod error;
pub mod exactalg;
pub mod gf2;
pub mod incidence;
pub mod prooffinder;
pub mod raysystems;
pub mod weightdist;

pub use budget::Budget;
pub use error::{Error, Result};
