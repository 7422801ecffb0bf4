use super::{inner_product, projector, ExactMatrix, ExactScalar, ExactVector};
use crate::gf2::Gf2Vector;
use crate::{Error, Result};

/// An orthogonal (not necessarily normalized) basis of C^d with its
/// rank-one projectors precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalBasis {
    vectors: Vec<ExactVector>,
    projectors: Vec<ExactMatrix>,
}

impl OrthogonalBasis {
    /// Checks pairwise orthogonality exactly and caches `P_i`.
    pub fn new(vectors: Vec<ExactVector>) -> Result<Self> {
        let d = vectors.len();
        for v in &vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.len() });
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                if !inner_product(&vectors[i], &vectors[j]).is_zero() {
                    return Err(Error::InvalidInput(format!("basis vectors {i} and {j} are not orthogonal")));
                }
            }
        }
        let projectors = vectors.iter().map(|v| projector(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self { vectors, projectors })
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[ExactVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> &[ExactMatrix] {
        &self.projectors
    }

    /// `O_B(λ) = Σ_i (−1)^{λ_i} P_i`.
    pub fn observable(&self, lambda: &Gf2Vector) -> ExactMatrix {
        observable_from_basis(self, lambda)
    }
}

/// `Σ_i (−1)^{λ_i} P_i` over the cached projectors of `basis`.
///
/// # Panics
/// If `lambda` has the wrong length.
pub fn observable_from_basis(basis: &OrthogonalBasis, lambda: &Gf2Vector) -> ExactMatrix {
    let d = basis.dimension();
    assert_eq!(lambda.len(), d, "lambda length must equal the basis dimension");
    let mut out = ExactMatrix::zeros(d);
    for (i, p) in basis.projectors.iter().enumerate() {
        out = if lambda.get(i) { out.sub(p) } else { out.add(p) };
    }
    out
}

/// The standard basis `e_1, …, e_d`.
pub fn standard_basis(d: usize) -> OrthogonalBasis {
    let vectors = (0..d)
        .map(|i| (0..d).map(|j| if i == j { ExactScalar::one() } else { ExactScalar::zero() }).collect())
        .collect();
    OrthogonalBasis::new(vectors).expect("standard basis is orthogonal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_lambdas() {
        let b = standard_basis(3);
        assert!(b.observable(&Gf2Vector::zeros(3)).is_identity());
        assert_eq!(b.observable(&Gf2Vector::ones(3)), ExactMatrix::identity(3).neg());
        let z = standard_basis(2).observable(&Gf2Vector::parse_bits("01").unwrap());
        assert_eq!(z, ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn projectors_resolve_identity() {
        let one = ExactScalar::one();
        let i = ExactScalar::i();
        let b = OrthogonalBasis::new(vec![vec![one.clone(), i.clone()], vec![one.clone(), -&i]]).unwrap();
        let sum = b.projectors().iter().fold(ExactMatrix::zeros(2), |acc, p| acc.add(p));
        assert!(sum.is_identity());
        for p in b.projectors() {
            assert_eq!(&p.mul(p), p);
            assert!(p.is_hermitian());
        }
    }

    #[test]
    fn rejects_non_orthogonal_vectors() {
        let one = ExactScalar::one();
        let r = OrthogonalBasis::new(vec![vec![one.clone(), one.clone()], vec![one.clone(), ExactScalar::zero()]]);
        assert!(r.is_err());
    }
}
