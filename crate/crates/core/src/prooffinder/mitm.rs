//! Meet-in-the-middle search for all proofs up to a given size.
//!
//! Every proof `y` of size `s` splits uniquely as `y = A ∪ B` where `A`
//! holds the `⌈s/2⌉` smallest indices. The table stores every `B` with
//! `|B| ≤ ⌊w/2⌋` under the key `H′Bᵀ`; probing with each `A`,
//! `|A| ≤ ⌈w/2⌉`, looks up `key(target) ⊕ key(A)` and keeps entries with
//! `|B| ∈ {|A|, |A| − 1}` and `min B > max A`.
//!
//! Keys are the syndromes compressed through the reduced row-echelon form
//! of `[H′ | target]`, so they have `rank H′` bits. Table entries are
//! `(key, combination rank)` pairs in hash buckets laid out by a counting
//! sort. If the table does not fit the memory budget, the key space is
//! split into partitions handled in separate passes.

use std::ops::BitXor;

use rayon::prelude::*;

use super::{ConstraintSystem, ParityProof};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::{Budget, Error, Result};

/// Work done by one search, for reporting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MitmStats {
    pub stored: u64,
    pub probes: u64,
    pub passes: u32,
    pub key_bits: usize,
}

trait Key: Copy + Eq + Default + Send + Sync + BitXor<Output = Self> {
    fn hash(self) -> u64;
}

impl Key for u64 {
    fn hash(self) -> u64 {
        self.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

impl Key for u128 {
    fn hash(self) -> u64 {
        ((self as u64) ^ (self >> 64) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ ((self >> 64) as u64).rotate_left(29)
    }
}

/// `binom[n][k]`, saturating.
fn binomials(n: usize, kmax: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; kmax + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for k in 1..=kmax.min(i) {
            t[i][k] = t[i - 1][k - 1].saturating_add(if k < i { t[i - 1][k] } else { 0 });
        }
    }
    t
}

/// Inverse of the lexicographic rank of `s`-subsets of `0..n`.
fn unrank(binom: &[Vec<u64>], n: usize, s: usize, mut r: u64, out: &mut Vec<usize>) {
    out.clear();
    let mut c = 0;
    for i in 0..s {
        loop {
            let below = binom[n - c - 1][s - i - 1];
            if r < below {
                break;
            }
            r -= below;
            c += 1;
        }
        out.push(c);
        c += 1;
    }
}

/// Calls `f(key)` for every subset of size `s` in lexicographic order.
fn for_each_subset<K: Key>(cols: &[K], s: usize, f: &mut impl FnMut(K)) {
    fn rec<K: Key>(cols: &[K], start: usize, left: usize, key: K, f: &mut impl FnMut(K)) {
        if left == 0 {
            f(key);
            return;
        }
        for c in start..=cols.len() - left {
            rec(cols, c + 1, left - 1, key ^ cols[c], f);
        }
    }
    if s <= cols.len() {
        rec(cols, 0, s, K::default(), f);
    }
}

struct Table<K> {
    shift: u32,
    starts: Vec<u32>,
    keys: Vec<K>,
    ids: Vec<u32>,
}

impl<K: Key> Table<K> {
    fn bucket(&self, k: K) -> usize {
        if self.shift >= 64 {
            0
        } else {
            (k.hash() >> self.shift) as usize
        }
    }
}

fn partition_of<K: Key>(k: K, passes: u32) -> u32 {
    ((k.hash() & 0xffff_ffff) % u64::from(passes)) as u32
}

struct Search<'a, K> {
    cols: &'a [K],
    target: K,
    n: usize,
    store_max: usize,
    probe_max: usize,
    binom: Vec<Vec<u64>>,
    size_offsets: Vec<u64>,
}

impl<K: Key> Search<'_, K> {
    fn build(&self, pass: u32, passes: u32, total: u64) -> Table<K> {
        let per_pass = (total / u64::from(passes)).max(1);
        let bits = 64 - per_pass.next_power_of_two().leading_zeros().min(63);
        let bits = bits.saturating_sub(1).max(1);
        let mut table =
            Table { shift: 64 - bits, starts: vec![0; (1usize << bits) + 1], keys: Vec::new(), ids: Vec::new() };
        for s in 0..=self.store_max {
            for_each_subset(self.cols, s, &mut |k: K| {
                if partition_of(k, passes) == pass {
                    let b = table.bucket(k);
                    table.starts[b + 1] += 1;
                }
            });
        }
        for b in 1..table.starts.len() {
            table.starts[b] += table.starts[b - 1];
        }
        let len = *table.starts.last().unwrap() as usize;
        table.keys = vec![K::default(); len];
        table.ids = vec![0; len];
        let mut fill = table.starts.clone();
        let mut id = 0u32;
        for s in 0..=self.store_max {
            for_each_subset(self.cols, s, &mut |k: K| {
                if partition_of(k, passes) == pass {
                    let b = table.bucket(k);
                    let at = fill[b] as usize;
                    table.keys[at] = k;
                    table.ids[at] = id;
                    fill[b] += 1;
                }
                id = id.wrapping_add(1);
            });
        }
        table
    }

    fn decode(&self, id: u32, out: &mut Vec<usize>) {
        let id = u64::from(id);
        let s = self.size_offsets.partition_point(|&o| o <= id) - 1;
        unrank(&self.binom, self.n, s, id - self.size_offsets[s], out);
    }

    /// Probes every `A` whose smallest element is `first`.
    fn probe_from(&self, table: &Table<K>, first: usize, pass: u32, passes: u32) -> (Vec<Vec<usize>>, u64) {
        let mut found = Vec::new();
        let mut probes = 0u64;
        let mut a = vec![first];
        let mut scratch = Vec::new();
        self.probe_rec(table, &mut a, self.cols[first], pass, passes, &mut found, &mut probes, &mut scratch);
        (found, probes)
    }

    #[allow(clippy::too_many_arguments)]
    fn probe_rec(
        &self,
        table: &Table<K>,
        a: &mut Vec<usize>,
        key: K,
        pass: u32,
        passes: u32,
        found: &mut Vec<Vec<usize>>,
        probes: &mut u64,
        scratch: &mut Vec<usize>,
    ) {
        let last = *a.last().unwrap();
        let size = a.len();
        // B needs at least |A| − 1 indices above max A.
        if self.n - 1 - last < size - 1 {
            return;
        }
        let need = key ^ self.target;
        if partition_of(need, passes) == pass {
            *probes += 1;
            let b = table.bucket(need);
            for at in table.starts[b] as usize..table.starts[b + 1] as usize {
                if table.keys[at] != need {
                    continue;
                }
                self.decode(table.ids[at], scratch);
                let ok_size = scratch.len() == size || scratch.len() + 1 == size;
                if ok_size && scratch.first().is_none_or(|&m| m > last) {
                    let mut y = a.clone();
                    y.extend_from_slice(scratch);
                    found.push(y);
                }
            }
        }
        if size < self.probe_max {
            for c in last + 1..self.n {
                a.push(c);
                self.probe_rec(table, a, key ^ self.cols[c], pass, passes, found, probes, scratch);
                a.pop();
            }
        }
    }
}

/// Compressed column keys and target key: the reduced rows of `[H′ | t]`.
fn compress(cs: &ConstraintSystem) -> Option<(Vec<Gf2Vector>, Gf2Vector, usize)> {
    let n = cs.constraint_count();
    let t = cs.target();
    let rows: Vec<Gf2Vector> = cs
        .h_prime()
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.push(t.get(i));
            a
        })
        .collect();
    let red = Gf2Matrix::from_rows(n + 1, rows).row_reduce();
    if red.pivot_columns.last() == Some(&n) {
        return None;
    }
    let r = red.rank;
    let cols =
        (0..n).map(|j| Gf2Vector::from_bools(&(0..r).map(|i| red.reduced.get(i, j)).collect::<Vec<_>>())).collect();
    let target = Gf2Vector::from_bools(&(0..r).map(|i| red.reduced.get(i, n)).collect::<Vec<_>>());
    Some((cols, target, r))
}

/// All parity proofs with at most `w` constraints, sorted by size and then
/// lexicographically.
pub fn min_weight_proofs(cs: &ConstraintSystem, w: usize, budget: &Budget) -> Result<(Vec<ParityProof>, MitmStats)> {
    let n = cs.constraint_count();
    let Some((cols, target, r)) = compress(cs) else {
        return Ok((Vec::new(), MitmStats::default()));
    };
    let w = w.min(n);
    if w == 0 {
        return Ok((Vec::new(), MitmStats { key_bits: r, ..MitmStats::default() }));
    }
    let to_key = |v: &Gf2Vector| v.ones_iter().fold(0u128, |k, i| k | 1 << i);
    if r <= 64 {
        let cols: Vec<u64> = cols.iter().map(|c| to_key(c) as u64).collect();
        run(cs, &cols, to_key(&target) as u64, w, r, budget)
    } else if r <= 128 {
        let cols: Vec<u128> = cols.iter().map(to_key).collect();
        run(cs, &cols, to_key(&target), w, r, budget)
    } else {
        Err(Error::BudgetExceeded(format!("syndromes of {r} bits exceed the 128-bit key limit")))
    }
}

fn run<K: Key>(
    cs: &ConstraintSystem,
    cols: &[K],
    target: K,
    w: usize,
    key_bits: usize,
    budget: &Budget,
) -> Result<(Vec<ParityProof>, MitmStats)> {
    let n = cols.len();
    let store_max = w / 2;
    let probe_max = w - store_max;
    let binom = binomials(n, probe_max.max(store_max) + 1);
    let mut size_offsets = vec![0u64];
    for s in 0..=store_max {
        let next = size_offsets[s].saturating_add(binom[n][s]);
        size_offsets.push(next);
    }
    let stored = size_offsets[store_max + 1];
    if stored > u64::from(u32::MAX) {
        return Err(Error::BudgetExceeded(format!(
            "w = {w} needs {stored} stored combinations; at most {} fit",
            u32::MAX
        )));
    }
    let probe_total: u64 = (1..=probe_max).map(|a| binom[n][a]).fold(0, u64::saturating_add);
    let entry_bytes = (std::mem::size_of::<K>() + 4) as u64;
    let memory = stored * entry_bytes + stored.next_power_of_two() * 2;
    let passes = memory.div_ceil(budget.max_memory_bytes.max(1)).max(1);
    if passes > 1 << 16 {
        return Err(Error::BudgetExceeded(format!("w = {w} needs about {memory} bytes of table")));
    }
    let passes = passes as u32;
    let work = probe_total.saturating_mul(u64::from(passes)).max(1);
    budget.check_enumeration(64 - work.leading_zeros() as usize, "meet-in-the-middle probing")?;

    let search = Search { cols, target, n, store_max, probe_max, binom, size_offsets };
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut probes = 0u64;
    for pass in 0..passes {
        budget.check_time("meet-in-the-middle table build")?;
        let table = search.build(pass, passes, stored);
        let results: Vec<Result<(Vec<Vec<usize>>, u64)>> = (0..n)
            .into_par_iter()
            .map(|first| {
                budget.check_time("meet-in-the-middle probing")?;
                Ok(search.probe_from(&table, first, pass, passes))
            })
            .collect();
        for r in results {
            let (f, p) = r?;
            found.extend(f);
            probes += p;
        }
    }
    let mut proofs = found.iter().map(|y| ParityProof::validate(cs, y)).collect::<Result<Vec<_>>>()?;
    proofs.sort_by(|a, b| (a.size(), &a.constraints).cmp(&(b.size(), &b.constraints)));
    proofs.dedup();
    Ok((proofs, MitmStats { stored, probes, passes, key_bits }))
}
