//! Enumeration and sampling of linear spans and cosets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{AffineSolutionSet, Gf2Vector};
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Visits every element of `span(basis)` in Gray-code order.
///
/// Consecutive visits differ by exactly one basis vector. The weight passed to
/// the visitor is maintained incrementally from the words each step touches.
/// `n` is the ambient length (needed when `basis` is empty).
pub fn enumerate_span<F>(basis: &[Gf2Vector], n: usize, mut visitor: F)
where
    F: FnMut(&Gf2Vector, usize),
{
    let start = Gf2Vector::zeros(n);
    gray_walk(basis, start, 0, |v, w| {
        visitor(v, w);
        true
    });
}

/// Visits `offset + span(basis)` in Gray-code order. Stops early when the
/// visitor returns `false`; returns whether the walk completed. Any
/// dimension is accepted; callers bound large walks with a budget.
pub fn enumerate_coset<F>(basis: &[Gf2Vector], offset: &Gf2Vector, visitor: F) -> bool
where
    F: FnMut(&Gf2Vector, usize) -> bool,
{
    let w = offset.weight();
    gray_walk(basis, offset.clone(), w, visitor)
}

fn gray_walk<F>(basis: &[Gf2Vector], mut cur: Gf2Vector, mut weight: usize, mut visitor: F) -> bool
where
    F: FnMut(&Gf2Vector, usize) -> bool,
{
    // Only the words a basis vector touches can change weight.
    let touched: Vec<Vec<usize>> =
        basis.iter().map(|b| b.words().iter().enumerate().filter(|(_, &w)| w != 0).map(|(k, _)| k).collect()).collect();
    if !visitor(&cur, weight) {
        return false;
    }
    // Beyond 127 dimensions the walk cannot finish; it still visits a
    // valid prefix for visitors that stop early.
    let total: u128 = if basis.len() < 128 { 1 << basis.len() } else { u128::MAX };
    for step in 1..total {
        let j = step.trailing_zeros() as usize;
        let before: usize = touched[j].iter().map(|&k| cur.words()[k].count_ones() as usize).sum();
        cur.xor_assign(&basis[j]);
        let after: usize = touched[j].iter().map(|&k| cur.words()[k].count_ones() as usize).sum();
        weight = weight + after - before;
        if !visitor(&cur, weight) {
            return false;
        }
    }
    true
}

/// Draws a uniformly random element of the solution coset.
///
/// Each kernel-basis coefficient is an independent fair bit from a ChaCha8
/// stream seeded with `seed`, so results are reproducible.
pub fn sample_coset(sol: &AffineSolutionSet, seed: u64) -> Result<Gf2Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_coset_with(sol, &mut rng)
}

pub fn sample_coset_with<R: Rng>(sol: &AffineSolutionSet, rng: &mut R) -> Result<Gf2Vector> {
    let offset =
        sol.offset.as_ref().ok_or_else(|| Error::InvalidInput("cannot sample from an empty solution set".into()))?;
    let mut v = offset.clone();
    for b in &sol.kernel_basis {
        if rng.gen::<bool>() {
            v.xor_assign(b);
        }
    }
    Ok(v)
}

/// Weight histograms produced by [`tally_span_weights`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanTally {
    /// `primary[w]` counts elements `v` of the span with `wt(v) = w`.
    pub primary: Vec<u64>,
    /// `shifted[w]` counts elements with `wt(v + shift) = w`, when a shift was given.
    pub shifted: Option<Vec<u64>>,
}

/// Largest number of basis vectors folded into the inner lookup table.
const INNER_BITS: usize = 10;
/// Outer coefficient bits fixed per partition.
const PARTITION_BITS: usize = 8;

/// Tallies the Hamming weights of all `2^dim` elements of `span(basis)`.
///
/// The low basis vectors are expanded into a table; the high ones are walked
/// in Gray order, and each outer element is combined with every table entry.
/// The outer walk is split into disjoint partitions (fixing the top
/// coefficient bits) that run in parallel and are merged in index order. The
/// budget's deadline is checked between partitions.
pub fn tally_span_weights(
    basis: &[Gf2Vector],
    n: usize,
    shift: Option<&Gf2Vector>,
    budget: &Budget,
) -> Result<SpanTally> {
    let dim = basis.len();
    budget.check_enumeration(dim, "span weight tally")?;
    if dim >= 64 {
        return Err(Error::BudgetExceeded(format!("span of dimension {dim} is not enumerable")));
    }
    if let Some(s) = shift {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.len() });
        }
    }
    let words = super::vector::words_for(n).max(1);
    let flat = |v: &Gf2Vector| {
        let mut w = v.words().to_vec();
        w.resize(words, 0);
        w
    };

    let inner_dim = dim.min(INNER_BITS);
    let (inner_basis, outer_basis) = basis.split_at(inner_dim);
    // Inner table in Gray order (the order is irrelevant for a tally).
    let mut table = Vec::with_capacity(words << inner_dim);
    {
        let mut cur = vec![0u64; words];
        table.extend_from_slice(&cur);
        for step in 1..(1u64 << inner_dim) {
            let j = step.trailing_zeros() as usize;
            for (c, b) in cur.iter_mut().zip(inner_basis[j].words()) {
                *c ^= b;
            }
            table.extend_from_slice(&cur);
        }
    }
    let shift_words = shift.map(flat);

    let outer_dim = outer_basis.len();
    let part_bits = outer_dim.min(PARTITION_BITS);
    let walk_dim = outer_dim - part_bits;
    let (walk_basis, part_basis) = outer_basis.split_at(walk_dim);
    let walk_flat: Vec<Vec<u64>> = walk_basis.iter().map(flat).collect();
    let part_flat: Vec<Vec<u64>> = part_basis.iter().map(flat).collect();

    let partial: Vec<Result<(Vec<u64>, Vec<u64>)>> = (0..(1u64 << part_bits))
        .into_par_iter()
        .map(|part| {
            budget.check_time("span weight tally")?;
            let mut start = vec![0u64; words];
            for (bit, b) in part_flat.iter().enumerate() {
                if part >> bit & 1 == 1 {
                    for (s, x) in start.iter_mut().zip(b) {
                        *s ^= x;
                    }
                }
            }
            let mut hist = vec![0u64; n + 1];
            let mut hist_shift = vec![0u64; if shift_words.is_some() { n + 1 } else { 0 }];
            let mut cur = start;
            let mut shifted_buf = vec![0u64; words];
            let total = 1u64 << walk_dim;
            for step in 0..total {
                if step > 0 {
                    let j = step.trailing_zeros() as usize;
                    for (c, b) in cur.iter_mut().zip(&walk_flat[j]) {
                        *c ^= b;
                    }
                }
                tally_block(&cur, &table, words, &mut hist);
                if let Some(sw) = &shift_words {
                    for ((d, a), b) in shifted_buf.iter_mut().zip(&cur).zip(sw) {
                        *d = a ^ b;
                    }
                    tally_block(&shifted_buf, &table, words, &mut hist_shift);
                }
            }
            Ok((hist, hist_shift))
        })
        .collect();

    let mut primary = vec![0u64; n + 1];
    let mut shifted = shift.map(|_| vec![0u64; n + 1]);
    for r in partial {
        let (h, hs) = r?;
        for (a, b) in primary.iter_mut().zip(&h) {
            *a += b;
        }
        if let Some(sh) = shifted.as_mut() {
            for (a, b) in sh.iter_mut().zip(&hs) {
                *a += b;
            }
        }
    }
    Ok(SpanTally { primary, shifted })
}

/// Adds `wt(outer + t)` for every table entry `t` to `hist`.
fn tally_block(outer: &[u64], table: &[u64], words: usize, hist: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("popcnt") {
            // SAFETY: the CPU supports the popcnt instruction (checked above).
            unsafe { tally_block_popcnt(outer, table, words, hist) };
            return;
        }
    }
    tally_block_generic(outer, table, words, hist);
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "popcnt")]
unsafe fn tally_block_popcnt(outer: &[u64], table: &[u64], words: usize, hist: &mut [u64]) {
    tally_block_generic(outer, table, words, hist);
}

#[inline(always)]
fn tally_block_generic(outer: &[u64], table: &[u64], words: usize, hist: &mut [u64]) {
    match words {
        1 => {
            let o = outer[0];
            for &t in table {
                hist[(o ^ t).count_ones() as usize] += 1;
            }
        }
        2 => {
            let (o0, o1) = (outer[0], outer[1]);
            for t in table.chunks_exact(2) {
                let w = (o0 ^ t[0]).count_ones() + (o1 ^ t[1]).count_ones();
                hist[w as usize] += 1;
            }
        }
        _ => {
            for t in table.chunks_exact(words) {
                let w: u32 = outer.iter().zip(t).map(|(a, b)| (a ^ b).count_ones()).sum();
                hist[w as usize] += 1;
            }
        }
    }
}
