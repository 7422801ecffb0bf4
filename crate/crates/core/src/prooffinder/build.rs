use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{ConstraintSystem, RawConstraint};
use crate::exactalg::{ray_reflection, sign_canonical, ExactMatrix, ObservableInterner, PauliOperator};
use crate::gf2::{enumerate_span, Gf2Matrix, Gf2Vector};
use crate::raysystems::{BasisSet, RaySystem};
use crate::{Error, Result};

/// Largest `dim U_B` expanded in [`GeneralMode::Full`].
pub const FULL_MODE_MAX_LOG2: usize = 20;

/// How the per-basis spaces `U_B` become constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneralMode {
    /// One constraint per nonzero element of `U_B`.
    Full,
    /// One constraint per vector of a basis of `U_B`.
    BasisColumns,
}

/// Per-basis data of the general construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    /// Index into the input [`BasisSet`].
    pub basis: usize,
    /// `L_B`: admissible `λ` (first coordinate 0, nonzero).
    pub lambdas: Vec<Gf2Vector>,
    /// Interned observable id of each `O_B(λ)` in `lambdas`.
    pub observables: Vec<usize>,
    /// Whether `O_B(λ)` is the negative of the interned representative.
    pub flips: Vec<bool>,
    /// Basis of `U_B` as indicator vectors over `lambdas`.
    pub u_basis: Vec<Gf2Vector>,
}

impl BasisFamily {
    /// `n_B = |L_B|`.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }
}

/// The retained bases of the general construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisConstraintFamily {
    pub families: Vec<BasisFamily>,
}

/// One constraint per basis made of its `d` ray reflections, each with
/// product `−I`. Observable labels are ray indices.
pub fn build_ray_constraints(bases: &BasisSet, rs: &RaySystem) -> Result<ConstraintSystem> {
    let reflections: Vec<ExactMatrix> = rs.rays().par_iter().map(|v| ray_reflection(v)).collect::<Result<_>>()?;
    let raw = bases
        .bases
        .iter()
        .enumerate()
        .map(|(k, b)| RawConstraint { observables: b.clone(), negative: true, source: k })
        .collect();
    ConstraintSystem::new(rs.name(), raw, Some(&reflections))
}

/// All `λ` with `λ_1 = 0`, `λ ≠ 0`, in increasing binary order.
fn nonzero_lambdas(d: usize) -> Vec<Gf2Vector> {
    (1u64..1 << (d - 1)).map(|m| Gf2Vector::from_indices(d, (1..d).filter(|&i| m >> (i - 1) & 1 == 1))).collect()
}

/// Constraints from every `T ⊆ L_B` with `Σ_{λ∈T} λ = 0`, observables
/// identified across bases up to sign. Observable labels are interner ids.
pub fn build_general_constraints(
    bases: &BasisSet,
    rs: &RaySystem,
    mode: GeneralMode,
) -> Result<(ConstraintSystem, BasisConstraintFamily)> {
    let d = rs.dimension();
    if d < 2 {
        return Err(Error::InvalidInput("general constraints need dimension at least 2".into()));
    }
    let lambdas = nonzero_lambdas(d);
    let per_basis: Vec<Vec<(ExactMatrix, bool)>> = bases
        .bases
        .par_iter()
        .map(|b| {
            let ob = rs.orthogonal_basis(b)?;
            Ok(lambdas.iter().map(|l| sign_canonical(&ob.observable(l))).collect())
        })
        .collect::<Result<_>>()?;

    let interner = ObservableInterner::new();
    let ids: Vec<Vec<(usize, bool)>> =
        per_basis.iter().map(|obs| obs.iter().map(|(m, flipped)| (interner.intern(m).0, *flipped)).collect()).collect();

    // L_B: λ whose observable occurs in another live basis; iterate while
    // bases drop out.
    let mut alive = vec![true; ids.len()];
    let admissible = loop {
        let mut holders: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); interner.len()];
        for (b, row) in ids.iter().enumerate().filter(|&(b, _)| alive[b]) {
            for &(id, _) in row {
                holders[id].insert(b);
            }
        }
        let admissible: Vec<Vec<usize>> = ids
            .iter()
            .enumerate()
            .map(|(b, row)| {
                if !alive[b] {
                    return Vec::new();
                }
                (0..row.len()).filter(|&k| holders[row[k].0].iter().any(|&o| o != b)).collect()
            })
            .collect();
        let mut changed = false;
        for (b, adm) in admissible.iter().enumerate() {
            if alive[b] && adm.is_empty() {
                alive[b] = false;
                changed = true;
            }
        }
        if !changed {
            break admissible;
        }
    };

    let mut families = Vec::new();
    let mut raw = Vec::new();
    for (b, adm) in admissible.into_iter().enumerate() {
        if !alive[b] {
            continue;
        }
        let fam_lambdas: Vec<Gf2Vector> = adm.iter().map(|&k| lambdas[k].clone()).collect();
        let u_basis = Gf2Matrix::from_columns(d, &fam_lambdas).kernel_basis();
        let fam = BasisFamily {
            basis: b,
            observables: adm.iter().map(|&k| ids[b][k].0).collect(),
            flips: adm.iter().map(|&k| ids[b][k].1).collect(),
            lambdas: fam_lambdas,
            u_basis,
        };
        let mut emit = |t: &Gf2Vector| {
            let observables = t.ones_iter().map(|k| fam.observables[k]).collect();
            let negative = t.ones_iter().filter(|&k| fam.flips[k]).count() % 2 == 1;
            raw.push(RawConstraint { observables, negative, source: b });
        };
        match mode {
            GeneralMode::BasisColumns => fam.u_basis.iter().for_each(&mut emit),
            GeneralMode::Full => {
                if fam.u_basis.len() > FULL_MODE_MAX_LOG2 {
                    return Err(Error::BudgetExceeded(format!(
                        "basis {b} has dim U_B = {} > {FULL_MODE_MAX_LOG2}; use basis_columns mode",
                        fam.u_basis.len()
                    )));
                }
                enumerate_span(&fam.u_basis, fam.n(), |t, _| {
                    if !t.is_zero() {
                        emit(t);
                    }
                });
            }
        }
        families.push(fam);
    }
    let reps = interner.into_representatives();
    let cs = ConstraintSystem::new(rs.name(), raw, Some(&reps))?;
    Ok((cs, BasisConstraintFamily { families }))
}

/// The nine two-qubit observables of the Mermin square, row by row.
pub fn mermin_paulis() -> Vec<PauliOperator> {
    ["XI", "IX", "XX", "IY", "YI", "YY", "XY", "YX", "ZZ"]
        .into_iter()
        .map(|s| PauliOperator::parse(s).expect("valid Pauli"))
        .collect()
}

/// The Mermin square: three rows then three columns of [`mermin_paulis`].
pub fn mermin_square() -> ConstraintSystem {
    let ms = mermin_paulis().iter().map(PauliOperator::to_matrix).collect();
    let contexts = [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8]].map(|c| c.to_vec());
    ConstraintSystem::explicit("mermin", ms, &contexts).expect("Mermin square contexts are valid")
}
