use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactalg::{product_sign, ExactMatrix, PauliOperator, ProductSign};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    name: Option<String>,
    constraints: Option<Vec<ConstraintJson>>,
    paulis: Option<Vec<String>>,
    contexts: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintJson {
    observables: Vec<usize>,
    negative: bool,
}

/// A constraint before pruning: observables are caller-side labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawConstraint {
    pub observables: Vec<usize>,
    /// True when the product of the observables is `−I`.
    pub negative: bool,
    /// Caller-side tag, e.g. the basis the constraint came from.
    pub source: usize,
}

/// A retained constraint; observables are row indices of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub observables: Vec<usize>,
    pub negative: bool,
    pub source: usize,
}

/// Observables, constraints and the incidence matrices `H`, `H′`.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    name: String,
    labels: Vec<usize>,
    matrices: Option<Vec<ExactMatrix>>,
    constraints: Vec<Constraint>,
    h: Gf2Matrix,
    p: Gf2Vector,
}

/// Drops every constraint that contains an observable occurring in no
/// other surviving constraint, until nothing changes. Such a constraint can
/// never be part of a proof.
fn prune(raw: &[RawConstraint]) -> Vec<usize> {
    let mut alive: Vec<bool> = vec![true; raw.len()];
    loop {
        let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
        for (c, _) in raw.iter().zip(&alive).filter(|(_, &a)| a) {
            for &o in &c.observables {
                *occ.entry(o).or_default() += 1;
            }
        }
        let mut changed = false;
        for (c, a) in raw.iter().zip(alive.iter_mut()) {
            if *a && c.observables.iter().any(|o| occ[o] < 2) {
                *a = false;
                changed = true;
            }
        }
        if !changed {
            return (0..raw.len()).filter(|&i| alive[i]).collect();
        }
    }
}

impl ConstraintSystem {
    /// Builds and prunes a system.
    ///
    /// `matrices[label]`, when given, is the observable with that label;
    /// every retained constraint is then checked to multiply to its sign.
    pub fn new(name: &str, raw: Vec<RawConstraint>, matrices: Option<&[ExactMatrix]>) -> Result<Self> {
        for c in &raw {
            let mut sorted = c.observables.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("constraint from source {} repeats an observable", c.source)));
            }
            if let Some(ms) = matrices {
                if let Some(&bad) = c.observables.iter().find(|&&o| o >= ms.len()) {
                    return Err(Error::InvalidInput(format!("observable label {bad} has no matrix")));
                }
            }
        }
        let kept = prune(&raw);
        let mut labels: Vec<usize> = kept.iter().flat_map(|&i| raw[i].observables.iter().copied()).collect();
        labels.sort_unstable();
        labels.dedup();
        let row_of: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(r, &l)| (l, r)).collect();
        let constraints: Vec<Constraint> = kept
            .iter()
            .map(|&i| {
                let mut obs: Vec<usize> = raw[i].observables.iter().map(|l| row_of[l]).collect();
                obs.sort_unstable();
                Constraint { observables: obs, negative: raw[i].negative, source: raw[i].source }
            })
            .collect();
        let n = constraints.len();
        let mut h = Gf2Matrix::zeros(labels.len(), n);
        let mut p = Gf2Vector::zeros(n);
        for (j, c) in constraints.iter().enumerate() {
            for &r in &c.observables {
                h.set(r, j, true);
            }
            p.set(j, c.negative);
        }
        let matrices = matrices.map(|ms| labels.iter().map(|&l| ms[l].clone()).collect::<Vec<_>>());
        let cs = Self { name: name.to_owned(), labels, matrices, constraints, h, p };
        cs.verify_products()?;
        Ok(cs)
    }

    /// Builds a system from explicit observables and contexts, deriving each
    /// sign from the exact product and checking pairwise commutation.
    pub fn explicit(name: &str, matrices: Vec<ExactMatrix>, contexts: &[Vec<usize>]) -> Result<Self> {
        let mut raw = Vec::with_capacity(contexts.len());
        for (k, ctx) in contexts.iter().enumerate() {
            let ms: Vec<ExactMatrix> = ctx
                .iter()
                .map(|&o| {
                    matrices.get(o).cloned().ok_or_else(|| Error::InvalidInput(format!("unknown observable {o}")))
                })
                .collect::<Result<_>>()?;
            for a in 0..ms.len() {
                for b in a + 1..ms.len() {
                    if ms[a].mul(&ms[b]) != ms[b].mul(&ms[a]) {
                        return Err(Error::InvalidInput(format!(
                            "context {k}: observables {} and {} do not commute",
                            ctx[a], ctx[b]
                        )));
                    }
                }
            }
            let negative = match product_sign(&ms) {
                ProductSign::PlusI => false,
                ProductSign::MinusI => true,
                ProductSign::NotScalar => {
                    return Err(Error::InvalidInput(format!("context {k} does not multiply to ±I")));
                }
            };
            raw.push(RawConstraint { observables: ctx.clone(), negative, source: k });
        }
        Self::new(name, raw, Some(&matrices))
    }

    /// Reads a system from JSON.
    ///
    /// Either abstract, `{"constraints": [{"observables": [..], "negative": b}]}`,
    /// or explicit, `{"paulis": ["XI", ..], "contexts": [[..]]}` with signs
    /// derived from exact products. `"name"` is optional in both.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SystemJson = serde_json::from_str(text)?;
        let name = raw.name.as_deref().unwrap_or("constraints");
        match (raw.constraints, raw.paulis, raw.contexts) {
            (Some(cs), None, None) => {
                let raw = cs
                    .into_iter()
                    .enumerate()
                    .map(|(k, c)| RawConstraint { observables: c.observables, negative: c.negative, source: k })
                    .collect();
                Self::new(name, raw, None)
            }
            (None, Some(ps), Some(ctx)) => {
                let ms = ps.iter().map(|p| PauliOperator::parse(p).map(|p| p.to_matrix())).collect::<Result<_>>()?;
                Self::explicit(name, ms, &ctx)
            }
            _ => Err(Error::InvalidInput("expected either \"constraints\" or \"paulis\" with \"contexts\"".into())),
        }
    }

    fn verify_products(&self) -> Result<()> {
        let Some(ms) = &self.matrices else {
            return Ok(());
        };
        let bad = self.constraints.par_iter().position_first(|c| {
            let factors: Vec<ExactMatrix> = c.observables.iter().map(|&r| ms[r].clone()).collect();
            let expected = if c.negative { ProductSign::MinusI } else { ProductSign::PlusI };
            product_sign(&factors) != expected
        });
        match bad {
            Some(j) => Err(Error::Invariant(format!("constraint {j} does not multiply to its recorded sign"))),
            None => Ok(()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of constraints, the length of a proof indicator vector.
    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn observable_count(&self) -> usize {
        self.labels.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Caller-side label of each observable row.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn matrices(&self) -> Option<&[ExactMatrix]> {
        self.matrices.as_deref()
    }

    pub fn h(&self) -> &Gf2Matrix {
        &self.h
    }

    pub fn p(&self) -> &Gf2Vector {
        &self.p
    }

    /// `H` with the sign row `p` appended.
    pub fn h_prime(&self) -> Gf2Matrix {
        let mut m = self.h.clone();
        m.push_row(self.p.clone());
        m
    }

    /// The right-hand side `(0, …, 0, 1)` of `H′xᵀ`.
    pub fn target(&self) -> Gf2Vector {
        Gf2Vector::unit(self.labels.len() + 1, self.labels.len())
    }

    pub fn all_negative(&self) -> bool {
        self.p.weight() == self.p.len()
    }
}

/// A validated set of constraints forming a parity proof.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityProof {
    /// Sorted constraint indices.
    pub constraints: Vec<usize>,
    /// `(observable row, occurrences)` for every observable used.
    pub observable_counts: Vec<(usize, usize)>,
    pub minus_count: usize,
}

impl ParityProof {
    /// Checks the parity conditions independently of any linear algebra.
    pub fn validate(cs: &ConstraintSystem, indices: &[usize]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invariant("proof repeats a constraint".into()));
        }
        if let Some(&j) = sorted.iter().find(|&&j| j >= cs.constraint_count()) {
            return Err(Error::Invariant(format!("constraint index {j} out of range")));
        }
        let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
        let mut minus = 0;
        for &j in &sorted {
            let c = &cs.constraints[j];
            minus += usize::from(c.negative);
            for &o in &c.observables {
                *occ.entry(o).or_default() += 1;
            }
        }
        if let Some((o, k)) = occ.iter().find(|(_, &k)| k % 2 == 1) {
            return Err(Error::Invariant(format!("observable {o} occurs {k} times")));
        }
        if minus % 2 == 0 {
            return Err(Error::Invariant(format!("{minus} constraints multiply to −I, expected an odd number")));
        }
        Ok(Self { constraints: sorted, observable_counts: occ.into_iter().collect(), minus_count: minus })
    }

    pub fn from_indicator(cs: &ConstraintSystem, x: &Gf2Vector) -> Result<Self> {
        Self::validate(cs, &x.support())
    }

    pub fn size(&self) -> usize {
        self.constraints.len()
    }

    pub fn to_json(&self, cs: &ConstraintSystem) -> ProofJson {
        ProofJson {
            system: cs.name().to_owned(),
            constraints: self.constraints.clone(),
            size: self.size(),
            observables: self.observable_counts.iter().map(|&(o, _)| cs.labels()[o]).collect(),
            validated: true,
        }
    }
}

/// Export form of a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofJson {
    pub system: String,
    pub constraints: Vec<usize>,
    pub size: usize,
    pub observables: Vec<usize>,
    pub validated: bool,
}
