//! Weight distributions of binary linear codes and their cosets.
//!
//! Counts are arbitrary-precision throughout: the distributions handled here
//! exceed `2^61` and the intermediate Krawtchouk sums of a length-105
//! transform overflow `i128`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf2::{dual_basis, in_span, tally_span_weights, Gf2Vector};

/// Number of words of each Hamming weight `0..=n` in a code or coset.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    length: usize,
    counts: Vec<BigUint>,
}

impl WeightDistribution {
    pub fn zero(length: usize) -> Self {
        Self { length, counts: vec![BigUint::zero(); length + 1] }
    }

    /// A single word of weight `w`.
    pub fn spike(length: usize, w: usize) -> Self {
        let mut d = Self::zero(length);
        d.counts[w] = BigUint::one();
        d
    }

    /// # Panics
    /// If `counts.len() != length + 1`.
    pub fn from_counts(length: usize, counts: Vec<BigUint>) -> Self {
        assert_eq!(counts.len(), length + 1, "need one count per weight 0..=n");
        Self { length, counts }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        assert!(!counts.is_empty());
        Self { length: counts.len() - 1, counts: counts.iter().map(|&c| BigUint::from(c)).collect() }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> &BigUint {
        &self.counts[w]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `(weight, count)` for every nonzero entry.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Smallest weight with a nonzero count.
    pub fn min_weight(&self) -> Option<usize> {
        self.nonzero().next().map(|(w, _)| w)
    }

    /// Entrywise sum of two distributions of the same length.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.length, other.length);
        Self { length: self.length, counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect() }
    }

    /// Keeps only the entries whose weight satisfies `keep`.
    pub fn filter_weights(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            length: self.length,
            counts: self
                .counts
                .iter()
                .enumerate()
                .map(|(w, c)| if keep(w) { c.clone() } else { BigUint::zero() })
                .collect(),
        }
    }

    /// The distribution of `v + 1` for `v` in the original set.
    pub fn complemented(&self) -> Self {
        Self { length: self.length, counts: self.counts.iter().rev().cloned().collect() }
    }

    pub fn to_json(&self) -> DistributionJson {
        DistributionJson { n: self.length, counts: self.nonzero().map(|(w, c)| (w, c.to_string())).collect() }
    }

    pub fn from_json(json: &DistributionJson) -> Result<Self> {
        let mut d = Self::zero(json.n);
        for (w, c) in &json.counts {
            if *w > json.n {
                return Err(Error::InvalidInput(format!("weight {w} exceeds length {}", json.n)));
            }
            d.counts[*w] =
                c.parse().map_err(|_| Error::InvalidInput(format!("count {c:?} is not a decimal integer")))?;
        }
        Ok(d)
    }
}

impl fmt::Debug for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightDistribution(n={}, [", self.length)?;
        for (i, (w, c)) in self.nonzero().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "<{w}, {c}>")?;
        }
        f.write_str("])")
    }
}

/// Sparse JSON form: nonzero `[weight, "count"]` pairs, counts as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub n: usize,
    pub counts: Vec<(usize, String)>,
}

/// `K_j(i; n) = Σ_k (−1)^k C(i, k) C(n − i, j − k)`.
pub fn krawtchouk(n: usize, j: usize, i: usize) -> BigInt {
    assert!(i <= n && j <= n, "krawtchouk arguments out of range");
    let mut sum = BigInt::zero();
    for k in 0..=j.min(i) {
        if j - k > n - i {
            continue;
        }
        let term = BigInt::from(num_integer::binomial(BigUint::from(i), BigUint::from(k)))
            * BigInt::from(num_integer::binomial(BigUint::from(n - i), BigUint::from(j - k)));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// All Krawtchouk values `K_j(i; n)` for one length, built from Pascal's triangle.
pub struct KrawtchoukTable {
    n: usize,
    // values[j * (n + 1) + i] = K_j(i; n)
    values: Vec<BigInt>,
}

impl KrawtchoukTable {
    pub fn new(n: usize) -> Self {
        let mut pascal: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
        for r in 0..=n {
            let mut row = vec![BigInt::one(); r + 1];
            for k in 1..r {
                row[k] = &pascal[r - 1][k - 1] + &pascal[r - 1][k];
            }
            pascal.push(row);
        }
        let binom = |a: usize, b: usize| -> Option<&BigInt> { pascal[a].get(b) };
        let mut values = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                let mut sum = BigInt::zero();
                for k in 0..=j.min(i) {
                    let Some(c2) = binom(n - i, j - k) else { continue };
                    let term = binom(i, k).expect("k <= i") * c2;
                    if k % 2 == 0 {
                        sum += term;
                    } else {
                        sum -= term;
                    }
                }
                values.push(sum);
            }
        }
        Self { n, values }
    }

    pub fn length(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, i: usize) -> &BigInt {
        &self.values[j * (self.n + 1) + i]
    }

    /// `Σ_i dist_i · K_j(i)` for every `j`.
    fn apply(&self, dist: &[BigUint]) -> Vec<BigInt> {
        let weights: Vec<(usize, BigInt)> =
            dist.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, BigInt::from(c.clone()))).collect();
        (0..=self.n).map(|j| weights.iter().map(|(i, c)| c * self.get(j, *i)).sum()).collect()
    }
}

/// Exact division of every entry by `divisor`, rejecting negative or
/// fractional results.
fn exact_quotients(length: usize, sums: Vec<BigInt>, divisor: &BigInt, what: &str) -> Result<WeightDistribution> {
    let mut counts = Vec::with_capacity(sums.len());
    for (w, s) in sums.into_iter().enumerate() {
        let (q, r) = s.div_rem(divisor);
        if !r.is_zero() {
            return Err(Error::InvalidDistribution(format!("{what}: entry {w} is not an integer")));
        }
        if q.is_negative() {
            return Err(Error::InvalidDistribution(format!("{what}: entry {w} is negative ({q})")));
        }
        counts.push(q.to_biguint().expect("non-negative"));
    }
    Ok(WeightDistribution::from_counts(length, counts))
}

/// Weight distribution of `span(basis)` by exhaustive enumeration.
///
/// Refuses spans larger than `2^budget.max_enumeration_log2`.
pub fn exhaustive_distribution(basis: &[Gf2Vector], n: usize, budget: &Budget) -> Result<WeightDistribution> {
    let tally = tally_span_weights(basis, n, None, budget)?;
    Ok(WeightDistribution::from_u64(&tally.primary))
}

/// Distribution of the dual code of a linear code of dimension `dim`.
pub fn macwilliams_transform(dist: &WeightDistribution, dim: usize) -> Result<WeightDistribution> {
    let table = KrawtchoukTable::new(dist.length);
    macwilliams_with(&table, dist, dim)
}

pub fn macwilliams_with(table: &KrawtchoukTable, dist: &WeightDistribution, dim: usize) -> Result<WeightDistribution> {
    if table.length() != dist.length {
        return Err(Error::DimensionMismatch { expected: dist.length, found: table.length() });
    }
    if dist.total() != BigUint::one() << dim {
        return Err(Error::InvalidDistribution(format!(
            "a code of dimension {dim} has 2^{dim} words, distribution sums to {}",
            dist.total()
        )));
    }
    let sums = table.apply(&dist.counts);
    exact_quotients(dist.length, sums, &(BigInt::one() << dim), "MacWilliams transform")
}

/// Coset distribution from the duals.
///
/// Let `D` be a code and `a ∉ D`. `hyperplane` is the distribution of
/// `(D + ⟨a⟩)^⊥ = D^⊥ ∩ ⟨a⟩^⊥` and `complement` that of the other half of
/// `D^⊥`, i.e. `u + hyperplane` for any `u ∈ D^⊥` with `u·a = 1`. Then
///
/// `N_w = (1/|D^⊥|) · (2 Σ_{v ∈ D^⊥ ∩ ⟨a⟩^⊥} K_w(wt v) − Σ_{v ∈ D^⊥} K_w(wt v))`
///
/// which simplifies to `(Σ_hyperplane K_w − Σ_complement K_w) / |D^⊥|`.
pub fn coset_distribution_from_dual_split(
    hyperplane: &WeightDistribution,
    complement: &WeightDistribution,
) -> Result<WeightDistribution> {
    let table = KrawtchoukTable::new(hyperplane.length);
    coset_distribution_from_dual_split_with(&table, hyperplane, complement)
}

pub fn coset_distribution_from_dual_split_with(
    table: &KrawtchoukTable,
    hyperplane: &WeightDistribution,
    complement: &WeightDistribution,
) -> Result<WeightDistribution> {
    let n = hyperplane.length;
    if complement.length != n || table.length() != n {
        return Err(Error::DimensionMismatch { expected: n, found: complement.length });
    }
    let half = hyperplane.total();
    if complement.total() != half || half.is_zero() {
        return Err(Error::InvalidDistribution("dual halves must have equal nonzero size".into()));
    }
    let dual_size = BigInt::from_biguint(Sign::Plus, half * 2u32);
    let a = table.apply(&hyperplane.counts);
    let b = table.apply(&complement.counts);
    let sums = a.into_iter().zip(b).map(|(x, y)| x - y).collect();
    exact_quotients(n, sums, &dual_size, "coset transform")
}

/// Distribution of `offset + span(kernel_basis)` computed through the dual.
///
/// When `offset` lies in the span the coset is the code itself and the
/// distribution is obtained by enumeration. Otherwise the dual `D^⊥`
/// (dimension `n − dim D`) is enumerated once, split by `v·offset`.
pub fn coset_distribution(
    kernel_basis: &[Gf2Vector],
    offset: &Gf2Vector,
    budget: &Budget,
) -> Result<WeightDistribution> {
    let n = offset.len();
    if let Some(b) = kernel_basis.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if in_span(kernel_basis, offset) {
        return exhaustive_distribution(kernel_basis, n, budget);
    }
    let dual = dual_basis(kernel_basis, n);
    budget.check_enumeration(dual.len().saturating_sub(1), "coset distribution")?;
    let (hyper, shift) = split_by_functional(&dual, offset)
        .ok_or_else(|| Error::Invariant("offset outside the code must pair nontrivially with its dual".into()))?;
    let tally = tally_span_weights(&hyper, n, Some(&shift), budget)?;
    let h = WeightDistribution::from_u64(&tally.primary);
    let c = WeightDistribution::from_u64(tally.shifted.as_deref().expect("shift requested"));
    coset_distribution_from_dual_split(&h, &c)
}

/// Splits `span(basis)` along `v ↦ v·a`: returns a basis of the kernel of the
/// functional and one vector `u` with `u·a = 1`, or `None` if the functional
/// vanishes on the span.
pub fn split_by_functional(basis: &[Gf2Vector], a: &Gf2Vector) -> Option<(Vec<Gf2Vector>, Gf2Vector)> {
    let pivot = basis.iter().position(|v| v.dot(a))?;
    let u = basis[pivot].clone();
    let hyper = basis
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pivot)
        .map(|(_, v)| if v.dot(a) { v.xor(&u) } else { v.clone() })
        .collect();
    Some((hyper, u))
}

/// Converts a count to `u128` when it fits (handy in tests and reports).
pub fn count_to_u128(c: &BigUint) -> Option<u128> {
    c.to_u128()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(counts: &[u64]) -> WeightDistribution {
        WeightDistribution::from_u64(counts)
    }

    #[test]
    fn krawtchouk_edge_values() {
        for n in 0..8 {
            for i in 0..=n {
                assert_eq!(krawtchouk(n, 0, i), BigInt::one());
            }
            for j in 0..=n {
                let c = num_integer::binomial(n as u64, j as u64);
                assert_eq!(krawtchouk(n, j, 0), BigInt::from(c));
            }
        }
    }

    #[test]
    fn krawtchouk_matches_character_sum() {
        // K_j(wt v) = Σ_{wt x = j} (−1)^{x·v}; v = e_0 in length 4.
        let n = 4;
        let v = 1u32;
        for j in 0..=n {
            let direct: i64 = (0u32..16)
                .filter(|x| x.count_ones() as usize == j)
                .map(|x| if (x & v).count_ones().is_multiple_of(2) { 1 } else { -1 })
                .sum();
            assert_eq!(krawtchouk(n, j, 1), BigInt::from(direct));
        }
        let table = KrawtchoukTable::new(n);
        for j in 0..=n {
            for i in 0..=n {
                assert_eq!(table.get(j, i), &krawtchouk(n, j, i));
            }
        }
    }

    #[test]
    fn full_space_dualizes_to_zero_code() {
        let n = 5;
        let counts: Vec<u64> = (0..=n).map(|k| num_integer::binomial(n as u64, k as u64)).collect();
        let dual = macwilliams_transform(&dist(&counts), n).unwrap();
        assert_eq!(dual, WeightDistribution::spike(n, 0));
    }

    #[test]
    fn repetition_code_dual_is_even_weight_code() {
        let dual = macwilliams_transform(&dist(&[1, 0, 0, 1]), 1).unwrap();
        assert_eq!(dual, dist(&[1, 0, 3, 0]));
    }

    #[test]
    fn transform_rejects_non_code_distributions() {
        // B_1 = (3 − 1 − 2·3) / 4 = −1.
        assert!(matches!(macwilliams_transform(&dist(&[1, 0, 1, 2]), 2), Err(Error::InvalidDistribution(_))));
        // Wrong total for the claimed dimension.
        assert!(matches!(macwilliams_transform(&dist(&[1, 1, 0]), 2), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn exhaustive_basics() {
        let b = Budget::default();
        assert_eq!(exhaustive_distribution(&[], 3, &b).unwrap(), WeightDistribution::spike(3, 0));
        let units: Vec<_> = (0..4).map(|i| Gf2Vector::unit(4, i)).collect();
        assert_eq!(exhaustive_distribution(&units, 4, &b).unwrap(), dist(&[1, 4, 6, 4, 1]));
    }

    #[test]
    fn coset_of_zero_code_is_a_spike() {
        let a = Gf2Vector::parse_bits("10110").unwrap();
        let d = coset_distribution(&[], &a, &Budget::default()).unwrap();
        assert_eq!(d, WeightDistribution::spike(5, 3));
    }

    #[test]
    fn odd_coset_of_even_weight_code() {
        let even: Vec<_> = ["1100", "0110", "0011"].iter().map(|s| Gf2Vector::parse_bits(s).unwrap()).collect();
        let a = Gf2Vector::parse_bits("1000").unwrap();
        let d = coset_distribution(&even, &a, &Budget::default()).unwrap();
        assert_eq!(d, dist(&[0, 4, 0, 4, 0]));
    }

    #[test]
    fn coset_inside_code_delegates() {
        let basis = vec![Gf2Vector::parse_bits("110").unwrap()];
        let d = coset_distribution(&basis, &Gf2Vector::parse_bits("110").unwrap(), &Budget::default()).unwrap();
        assert_eq!(d, dist(&[1, 0, 1, 0]));
    }

    #[test]
    fn json_lists_nonzero_pairs() {
        let d = dist(&[1, 0, 3, 0]);
        let json = serde_json::to_string(&d.to_json()).unwrap();
        assert_eq!(json, r#"{"n":3,"counts":[[0,"1"],[2,"3"]]}"#);
        let back: DistributionJson = serde_json::from_str(&json).unwrap();
        assert_eq!(WeightDistribution::from_json(&back).unwrap(), d);
    }
}
