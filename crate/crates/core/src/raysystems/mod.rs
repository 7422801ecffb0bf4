//! Ray systems, their orthogonality graphs, and orthogonal bases as cliques.

mod builders;
mod clique;

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use builders::{build_600cell, build_60_105, build_e8_roots, BuiltinSystem};
pub use clique::{k_cliques, BitGraph};

use crate::exactalg::{format_vector, inner_product, parse_vectors, ExactScalar, ExactVector, OrthogonalBasis};
use crate::{Error, Result};

/// Canonical projective representative of the ray through `v`: the first
/// nonzero coordinate becomes a positive integer and all rational
/// components are coprime integers.
pub fn projective_key(v: &[ExactScalar]) -> Result<ExactVector> {
    let lead = v.iter().find(|e| !e.is_zero()).ok_or(Error::ZeroVector)?;
    let inv = lead.inv().expect("nonzero field element is invertible");
    let scaled: ExactVector = v.iter().map(|e| e * &inv).collect();
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for e in &scaled {
        for c in e.components() {
            if !c.is_zero() {
                den = den.lcm(c.denom());
                num = num.gcd(c.numer());
            }
        }
    }
    let k = BigRational::new(den, num.abs());
    Ok(scaled.iter().map(|e| e.scale(&k)).collect())
}

/// A ray merged into an earlier one because the two are parallel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeWarning {
    /// 1-based source line (or input position for in-memory input).
    pub line: usize,
    /// Index of the retained ray.
    pub merged_into: usize,
}

/// Pairwise non-parallel rays in C^d with their exact orthogonality graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySystem {
    name: String,
    dimension: usize,
    rays: Vec<ExactVector>,
    graph: BitGraph,
}

impl RaySystem {
    /// Builds a system from `(line, vector)` pairs, merging parallel rays.
    pub fn from_numbered_vectors(
        name: &str,
        dimension: usize,
        vectors: impl IntoIterator<Item = (usize, ExactVector)>,
    ) -> Result<(Self, Vec<MergeWarning>)> {
        let mut rays: Vec<ExactVector> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut warnings = Vec::new();
        for (line, v) in vectors {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: v.len() });
            }
            let key = projective_key(&v).map_err(|_| Error::Parse { line, message: "zero vector".into() })?;
            if let Some(&j) = index.get(&key) {
                warnings.push(MergeWarning { line, merged_into: j });
            } else {
                index.insert(key.clone(), rays.len());
                rays.push(key);
            }
        }
        let mut graph = BitGraph::new(rays.len());
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if inner_product(&rays[i], &rays[j]).is_zero() {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok((Self { name: name.to_owned(), dimension, rays, graph }, warnings))
    }

    pub fn from_vectors(name: &str, dimension: usize, vectors: Vec<ExactVector>) -> Result<(Self, Vec<MergeWarning>)> {
        Self::from_numbered_vectors(name, dimension, vectors.into_iter().enumerate().map(|(k, v)| (k + 1, v)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rays(&self) -> &[ExactVector] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn is_orthogonal(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(i, j)
    }

    /// Orthogonality edges `(i, j)` with `i < j`.
    pub fn orthogonality_edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }

    /// The rays of one basis as an [`OrthogonalBasis`].
    pub fn orthogonal_basis(&self, basis: &[usize]) -> Result<OrthogonalBasis> {
        OrthogonalBasis::new(basis.iter().map(|&i| self.rays[i].clone()).collect())
    }

    /// Serializes in the ray file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("# {} rays in dimension {}: {}\n", self.rays.len(), self.dimension, self.name);
        for r in &self.rays {
            s.push_str(&format_vector(r));
            s.push('\n');
        }
        s
    }
}

/// Reads a ray file. Parallel rays are merged and reported.
pub fn load_rays(path: impl AsRef<Path>, dimension: Option<usize>) -> Result<(RaySystem, Vec<MergeWarning>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let vectors = parse_vectors(&text, dimension)?;
    let d = match (dimension, vectors.first()) {
        (Some(d), _) => d,
        (None, Some((_, v))) => v.len(),
        (None, None) => return Err(Error::InvalidInput(format!("{} contains no vectors", path.display()))),
    };
    let name = path.file_stem().map_or_else(|| "rays".to_owned(), |s| s.to_string_lossy().into_owned());
    RaySystem::from_numbered_vectors(&name, d, vectors)
}

/// All orthogonal bases of a ray system, as sorted ray-index lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSet {
    pub dimension: usize,
    pub bases: Vec<Vec<usize>>,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("basis set serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Every `d`-clique of the orthogonality graph, in lexicographic order.
pub fn find_bases(rs: &RaySystem) -> BasisSet {
    BasisSet { dimension: rs.dimension, bases: k_cliques(&rs.graph, rs.dimension) }
}
