use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use super::ExactScalar;
use crate::{Error, Result};

/// A vector over Q(√5)(i).
pub type ExactVector = Vec<ExactScalar>;

/// A square `dim × dim` matrix over Q(√5)(i), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<ExactScalar>,
}

/// Classification of an exact matrix product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductSign {
    PlusI,
    MinusI,
    NotScalar,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![ExactScalar::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ExactScalar::one() } else { ExactScalar::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// # Panics
    /// If `rows` is not square.
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim, "matrix must be square");
            entries.extend(r);
        }
        Self { dim, entries }
    }

    /// Integer matrix shorthand, mostly for tests.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| ExactScalar::from_int(x)).collect()).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Returns `c` when `self = c·I`.
    pub fn scalar_value(&self) -> Option<ExactScalar> {
        let c = self.get(0, 0).clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    /// True when `M = M†` and `M² = I`.
    pub fn is_binary_observable(&self) -> bool {
        self.is_hermitian() && self.mul(self).is_identity()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|a| a * k).collect() }
    }

    pub fn scale_rational(&self, k: &BigRational) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|a| a.scale(k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let e = &mut out.entries[i * d + j];
                        *e = &*e + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Tensor product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.dim, other.dim);
        Self::from_fn(p * q, |i, j| self.get(i / q, j / q) * other.get(i % q, j % q))
    }

    pub fn apply(&self, v: &[ExactScalar]) -> ExactVector {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).fold(ExactScalar::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j])))
            .collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Hermitian inner product `⟨x, y⟩ = Σ conj(x_i)·y_i`.
pub fn inner_product(x: &[ExactScalar], y: &[ExactScalar]) -> ExactScalar {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    x.iter().zip(y).fold(ExactScalar::zero(), |acc, (a, b)| &acc + &(&a.conj() * b))
}

/// `v†v / ⟨v, v⟩` for a row vector `v`.
pub fn projector(v: &[ExactScalar]) -> Result<ExactMatrix> {
    let norm = inner_product(v, v);
    let inv = norm.inv().ok_or(Error::ZeroVector)?;
    Ok(ExactMatrix::from_fn(v.len(), |j, k| &(&v[j].conj() * &v[k]) * &inv))
}

/// The reflection `S_v = I − 2·v†v/⟨v, v⟩`.
pub fn ray_reflection(v: &[ExactScalar]) -> Result<ExactMatrix> {
    let p = projector(v)?;
    Ok(ExactMatrix::identity(v.len()).sub(&p.scale(&ExactScalar::from_int(2))))
}

/// Picks the representative of `{m, −m}` whose first nonzero entry
/// (row-major) is positive under [`ExactScalar::orientation`].
///
/// Returns the representative and whether it equals `−m`.
pub fn sign_canonical(m: &ExactMatrix) -> (ExactMatrix, bool) {
    match m.entries.iter().find(|e| !e.is_zero()).map(ExactScalar::orientation) {
        Some(Ordering::Less) => (m.neg(), true),
        _ => (m.clone(), false),
    }
}

/// Classifies the ordered product of `ms`; the empty product is `+I`.
pub fn product_sign(ms: &[ExactMatrix]) -> ProductSign {
    let Some(first) = ms.first() else {
        return ProductSign::PlusI;
    };
    let prod = ms[1..].iter().fold(first.clone(), |acc, m| acc.mul(m));
    match prod.scalar_value() {
        Some(c) if c.is_one() => ProductSign::PlusI,
        Some(c) if (-&c).is_one() => ProductSign::MinusI,
        _ => ProductSign::NotScalar,
    }
}
