use std::fmt;

use super::{ExactMatrix, ExactScalar};
use crate::gf2::Gf2Vector;
use crate::{Error, Result};

/// A signed tensor product of Pauli matrices in symplectic form.
///
/// Qubit `k` carries `I, X, Y, Z` for `(x_k, z_k) = (0,0), (1,0), (1,1), (0,1)`;
/// qubit 0 is the leftmost tensor factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    x: Gf2Vector,
    z: Gf2Vector,
    negative: bool,
}

impl PauliOperator {
    pub fn new(x: Gf2Vector, z: Gf2Vector, negative: bool) -> Self {
        assert_eq!(x.len(), z.len(), "x and z bit vectors must have equal length");
        Self { x, z, negative }
    }

    pub fn identity(qubits: usize) -> Self {
        Self::new(Gf2Vector::zeros(qubits), Gf2Vector::zeros(qubits), false)
    }

    /// Sign-free Pauli with two bits per qubit taken from `index`
    /// (bit `2k` = x_k, bit `2k+1` = z_k).
    pub fn from_index(qubits: usize, index: u64) -> Self {
        let mut p = Self::identity(qubits);
        for k in 0..qubits {
            p.x.set(k, (index >> (2 * k)) & 1 == 1);
            p.z.set(k, (index >> (2 * k + 1)) & 1 == 1);
        }
        p
    }

    /// Inverse of [`from_index`](Self::from_index), ignoring the sign.
    pub fn index(&self) -> u64 {
        (0..self.qubits())
            .fold(0, |acc, k| acc | (u64::from(self.x.get(k)) << (2 * k)) | (u64::from(self.z.get(k)) << (2 * k + 1)))
    }

    /// Parses strings like `XY`, `-ZI` or `+IXZ`.
    pub fn parse(s: &str) -> Result<Self> {
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let n = body.chars().count();
        let mut p = Self::identity(n);
        p.negative = negative;
        for (k, c) in body.chars().enumerate() {
            let (x, z) = match c.to_ascii_uppercase() {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                _ => return Err(Error::InvalidInput(format!("invalid Pauli letter {c:?} in {s:?}"))),
            };
            p.x.set(k, x);
            p.z.set(k, z);
        }
        Ok(p)
    }

    pub fn qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &Gf2Vector {
        &self.x
    }

    pub fn z_bits(&self) -> &Gf2Vector {
        &self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// True for `±I`.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn negated(&self) -> Self {
        Self { negative: !self.negative, ..self.clone() }
    }

    /// The same tensor product with sign `+1`.
    pub fn unsigned(&self) -> Self {
        Self { negative: false, ..self.clone() }
    }

    /// Letters without the sign, e.g. `XY`.
    pub fn letters(&self) -> String {
        (0..self.qubits())
            .map(|k| match (self.x.get(k), self.z.get(k)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            })
            .collect()
    }

    /// Symplectic form `x_p·z_q + z_p·x_q`.
    pub fn commutes(&self, other: &Self) -> bool {
        commute(self, other)
    }

    /// Dense matrix of the signed tensor product.
    pub fn to_matrix(&self) -> ExactMatrix {
        let i = ExactScalar::i();
        let mut m = ExactMatrix::identity(1);
        for k in 0..self.qubits() {
            let letter = match (self.x.get(k), self.z.get(k)) {
                (false, false) => ExactMatrix::identity(2),
                (true, false) => ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]),
                (true, true) => {
                    ExactMatrix::from_rows(vec![vec![ExactScalar::zero(), -&i], vec![i.clone(), ExactScalar::zero()]])
                }
                (false, true) => ExactMatrix::from_ints(&[&[1, 0], &[0, -1]]),
            };
            m = m.kron(&letter);
        }
        if self.negative {
            m.neg()
        } else {
            m
        }
    }

    /// Exponent `e` with `self = i^e · X^x Z^z`.
    fn xz_phase(&self) -> u32 {
        let y_count = self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
        (y_count + if self.negative { 2 } else { 0 }) % 4
    }
}

/// Whether two Paulis commute.
pub fn commute(p: &PauliOperator, q: &PauliOperator) -> bool {
    assert_eq!(p.qubits(), q.qubits(), "qubit count mismatch");
    p.x.dot(&q.z) == p.z.dot(&q.x)
}

/// Product of a sequence with exact phase tracking.
///
/// Returns the product as a signed Pauli, or [`Error::PhaseError`] when the
/// accumulated phase is `±i`. The empty product is an error because the
/// qubit count is unknown.
pub fn pauli_product(ps: &[PauliOperator]) -> Result<PauliOperator> {
    let first = ps.first().ok_or_else(|| Error::InvalidInput("empty Pauli product".into()))?;
    let n = first.qubits();
    let mut x = Gf2Vector::zeros(n);
    let mut z = Gf2Vector::zeros(n);
    let mut e = 0u32;
    for p in ps {
        if p.qubits() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.qubits() });
        }
        // (X^x Z^z)(X^a Z^b) = (−1)^{z·a} X^{x+a} Z^{z+b}
        e += p.xz_phase() + if z.dot(&p.x) { 2 } else { 0 };
        x.xor_assign(&p.x);
        z.xor_assign(&p.z);
    }
    let y_count = x.words().iter().zip(z.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
    match (e + 4 - y_count % 4) % 4 {
        0 => Ok(PauliOperator::new(x, z, false)),
        2 => Ok(PauliOperator::new(x, z, true)),
        _ => Err(Error::PhaseError),
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&self.letters())
    }
}
