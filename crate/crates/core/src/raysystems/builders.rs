use std::str::FromStr;

use super::RaySystem;
use crate::exactalg::{ExactMatrix, ExactScalar, ExactVector, PauliOperator};
use crate::Error;

/// The ray systems that ship with the library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinSystem {
    Cell600,
    Pauli60_105,
    E8,
}

impl BuiltinSystem {
    pub const ALL: [BuiltinSystem; 3] = [Self::Cell600, Self::Pauli60_105, Self::E8];

    pub fn name(self) -> &'static str {
        match self {
            Self::Cell600 => "600cell",
            Self::Pauli60_105 => "60-105",
            Self::E8 => "e8",
        }
    }

    pub fn build(self) -> RaySystem {
        match self {
            Self::Cell600 => build_600cell(),
            Self::Pauli60_105 => build_60_105(),
            Self::E8 => build_e8_roots(),
        }
    }
}

impl FromStr for BuiltinSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown system {s:?} (expected 600cell, 60-105 or e8)")))
    }
}

fn finish(name: &str, d: usize, vectors: Vec<ExactVector>) -> RaySystem {
    RaySystem::from_vectors(name, d, vectors).expect("built-in rays are nonzero").0
}

fn ints(v: &[i64]) -> ExactVector {
    v.iter().map(|&x| ExactScalar::from_int(x)).collect()
}

/// Sign patterns `(±1)^n`, bit `k` of the pattern index negating entry `k`.
fn sign_patterns(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u32..1 << n).map(move |m| (0..n).map(|k| if m >> k & 1 == 1 { -1 } else { 1 }).collect())
}

/// The 60 rays through the vertices of the 600-cell (unit icosians up to sign).
pub fn build_600cell() -> RaySystem {
    let mut vs = Vec::new();
    for i in 0..4 {
        let mut v = [0; 4];
        v[i] = 1;
        for s in [1, -1] {
            vs.push(ints(&v.iter().map(|x| x * s).collect::<Vec<_>>()));
        }
    }
    for s in sign_patterns(4) {
        vs.push(ints(&s));
    }
    // Even permutations of (φ, 1, 1/φ, 0) with all sign choices.
    let phi = ExactScalar::phi();
    let base = [phi.clone(), ExactScalar::one(), &phi - &ExactScalar::one(), ExactScalar::zero()];
    for perm in even_permutations_of_4() {
        for s in sign_patterns(3) {
            let mut v = vec![ExactScalar::zero(); 4];
            for (k, &p) in perm.iter().enumerate() {
                v[p] = if k < 3 && s[k] < 0 { -&base[k] } else { base[k].clone() };
            }
            vs.push(v);
        }
    }
    finish("600cell", 4, vs)
}

fn even_permutations_of_4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a == b || a == c || b == c {
                    continue;
                }
                let p = [a, b, c, 6 - a - b - c];
                let inversions =
                    (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                if inversions % 2 == 0 {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// The 60 two-qubit stabilizer rays: joint eigenvectors of the 15 maximal
/// sets of three commuting nontrivial Pauli operators.
pub fn build_60_105() -> RaySystem {
    let paulis: Vec<PauliOperator> = (1..16).map(|i| PauliOperator::from_index(2, i)).collect();
    let id = ExactMatrix::identity(4);
    let mut vs = Vec::new();
    for a in 0..15 {
        for b in a + 1..15 {
            if !paulis[a].commutes(&paulis[b]) {
                continue;
            }
            let c_index = paulis[a].index() ^ paulis[b].index();
            if c_index <= paulis[b].index() {
                continue;
            }
            let (p, q) = (paulis[a].to_matrix(), paulis[b].to_matrix());
            for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let proj =
                    id.add(&p.scale(&ExactScalar::from_int(s1))).mul(&id.add(&q.scale(&ExactScalar::from_int(s2))));
                let col = (0..4).find(|&j| (0..4).any(|i| !proj.get(i, j).is_zero())).expect("rank-one projector");
                // Row vector v with v†v ∝ the projector: v = conj(column)ᵀ.
                vs.push((0..4).map(|i| proj.get(i, col).conj()).collect());
            }
        }
    }
    finish("60-105", 4, vs)
}

/// The 120 rays through the 240 roots of E8.
pub fn build_e8_roots() -> RaySystem {
    let mut vs = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; 8];
                v[i] = si;
                v[j] = sj;
                vs.push(ints(&v));
            }
        }
    }
    for s in sign_patterns(8) {
        if s.iter().filter(|&&x| x < 0).count() % 2 == 0 {
            vs.push(ints(&s));
        }
    }
    finish("e8", 8, vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_even_permutations() {
        assert_eq!(even_permutations_of_4().len(), 12);
    }

    #[test]
    fn names_round_trip() {
        for b in BuiltinSystem::ALL {
            assert_eq!(b.name().parse::<BuiltinSystem>().unwrap(), b);
        }
        assert!("d4".parse::<BuiltinSystem>().is_err());
    }
}
