//! Constraint systems built from orthogonal bases, and counting,
//! enumeration, sampling and size statistics of their parity proofs.
//!
//! A proof is an indicator vector `x` over the constraints with
//! `H′xᵀ = (0, …, 0, 1)ᵀ`: even occurrence of every observable and an odd
//! number of `−I` constraints.

mod build;
mod mitm;
mod system;

use crate::gf2::{enumerate_coset, sample_coset, tally_span_weights, AffineSolutionSet, Gf2Vector};
use crate::weightdist::{coset_distribution_from_dual_split, macwilliams_transform, WeightDistribution};
use crate::{Budget, Error, Result};

pub use build::{
    build_general_constraints, build_ray_constraints, mermin_paulis, mermin_square, BasisConstraintFamily, BasisFamily,
    GeneralMode, FULL_MODE_MAX_LOG2,
};
pub use mitm::{min_weight_proofs, MitmStats};
pub use system::{Constraint, ConstraintSystem, ParityProof, ProofJson, RawConstraint};

/// Number of parity proofs of a system: zero or a power of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofCount {
    Zero,
    PowerOfTwo(usize),
}

impl ProofCount {
    pub fn log2(self) -> Option<usize> {
        match self {
            Self::Zero => None,
            Self::PowerOfTwo(k) => Some(k),
        }
    }

    /// Decimal rendering of the exact count.
    pub fn to_decimal(self) -> String {
        match self {
            Self::Zero => "0".into(),
            Self::PowerOfTwo(k) => (num_bigint::BigUint::from(1u32) << k).to_string(),
        }
    }
}

/// The solution coset of `H′xᵀ = (0, …, 0, 1)ᵀ`.
pub fn solution_set(cs: &ConstraintSystem) -> AffineSolutionSet {
    cs.h_prime().solve_affine(&cs.target())
}

pub fn count_proofs(cs: &ConstraintSystem) -> ProofCount {
    let sol = solution_set(cs);
    match sol.dimension() {
        None => ProofCount::Zero,
        Some(k) => ProofCount::PowerOfTwo(k),
    }
}

/// Visits every proof in Gray-code order, validating each before the
/// visitor sees it. Stops when the visitor returns `false`; returns the
/// number of proofs visited.
pub fn enumerate_proofs<F>(cs: &ConstraintSystem, budget: &Budget, mut visitor: F) -> Result<u64>
where
    F: FnMut(&ParityProof) -> bool,
{
    let sol = solution_set(cs);
    let Some(offset) = &sol.offset else {
        return Ok(0);
    };
    budget.check_enumeration(sol.kernel_basis.len(), "proof enumeration")?;
    let mut visited = 0u64;
    let mut failure = None;
    enumerate_coset(&sol.kernel_basis, offset, |x, _| {
        if visited & 0xffff == 0 {
            if let Err(e) = budget.check_time("proof enumeration") {
                failure = Some(e);
                return false;
            }
        }
        match ParityProof::from_indicator(cs, x) {
            Ok(p) => {
                visited += 1;
                visitor(&p)
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(visited),
    }
}

/// A uniformly random proof, reproducible from `seed`.
pub fn sample_proof(cs: &ConstraintSystem, seed: u64) -> Result<Option<ParityProof>> {
    let sol = solution_set(cs);
    if !sol.is_consistent() {
        return Ok(None);
    }
    let x = sample_coset(&sol, seed)?;
    ParityProof::from_indicator(cs, &x).map(Some)
}

/// Size statistics of a constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeDistributions {
    /// Weights of all of `ker H` (proofs and sign-violating even sets).
    pub kernel: WeightDistribution,
    /// Sizes of parity proofs.
    pub proofs: WeightDistribution,
}

/// Proof sizes counted through the dual, without listing proofs.
///
/// The row space `R` of `H` is enumerated once. The dual of `ker H′` is
/// `R ∪ (p + R)`, split by pairing with any proof, so the coset transform
/// applies with `R` as the hyperplane. When every constraint is `−I`
/// the shifted half is the reversal of `R` and needs no extra walk.
pub fn size_distributions(cs: &ConstraintSystem, budget: &Budget) -> Result<SizeDistributions> {
    let n = cs.constraint_count();
    let row_space = cs.h().row_space_basis();
    let tally = tally_span_weights(&row_space, n, (!cs.all_negative()).then_some(cs.p()), budget)?;
    let hyper = WeightDistribution::from_u64(&tally.primary);
    let kernel = macwilliams_transform(&hyper, row_space.len())?;
    if !solution_set(cs).is_consistent() {
        return Ok(SizeDistributions { kernel, proofs: WeightDistribution::zero(n) });
    }
    let complement = match &tally.shifted {
        Some(s) => WeightDistribution::from_u64(s),
        None => hyper.complemented(),
    };
    let proofs = coset_distribution_from_dual_split(&hyper, &complement)?;
    if proofs.total() != kernel.total() >> 1usize {
        return Err(Error::Invariant("proofs must fill half of ker H".into()));
    }
    Ok(SizeDistributions { kernel, proofs })
}

pub fn proof_size_distribution(cs: &ConstraintSystem, budget: &Budget) -> Result<WeightDistribution> {
    Ok(size_distributions(cs, budget)?.proofs)
}

/// Indicator vector of a proof.
pub fn indicator(cs: &ConstraintSystem, proof: &ParityProof) -> Gf2Vector {
    Gf2Vector::from_indices(cs.constraint_count(), proof.constraints.iter().copied())
}
