//! Parity proofs on abstract incidence structures.
//!
//! Points carry observables and blocks carry constraints. Cubic graphs give
//! structures with one point per edge and one three-point block per vertex.
//! Non-existence of a proof is certified by rewriting the product of all
//! blocks to the empty word; existence by an explicit Pauli assignment.

mod assign;
mod coset;
mod decide;
mod graph;
mod rewrite;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use assign::{assign_generators, format_word, GeneratorAssignment, Word};
pub use coset::{enumerate_involution_group, CayleyTable};
pub use decide::{
    check_pauli_assignment, decide_structure, decide_structure_with, search_pauli_assignment, Decision, DecisionReport,
    PauliAssignment, PauliJson, SearchOptions, SearchOutcome, Verdict, ORDER_PORTFOLIO, QUICK_LIMITS,
};
pub use graph::{connected_cubic_graphs, SimpleGraph, MAX_CANONICAL_VERTICES};
pub use rewrite::{
    knuth_bendix, product_word, recursive_cmp, relations, shortlex_cmp, CompletionLimits, RewriteStatus, RewriteSystem,
    WordOrder,
};

use crate::{Error, Result};

/// Points `0..points` and blocks of point indices.
///
/// Every block has at least three distinct points and every point lies in
/// an even number of blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IncidenceStructure {
    points: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct StructureJson {
    points: usize,
    blocks: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for IncidenceStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = StructureJson::deserialize(d)?;
        Self::new(raw.points, raw.blocks).map_err(serde::de::Error::custom)
    }
}

impl IncidenceStructure {
    pub fn new(points: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut occurrences = vec![0usize; points];
        for (k, b) in blocks.iter().enumerate() {
            if b.len() < 3 {
                return Err(Error::InvalidInput(format!("block {k} has fewer than three points")));
            }
            for (i, &p) in b.iter().enumerate() {
                if p >= points {
                    return Err(Error::InvalidInput(format!("block {k} names point {p} of {points}")));
                }
                if b[..i].contains(&p) {
                    return Err(Error::InvalidInput(format!("block {k} repeats point {p}")));
                }
                occurrences[p] += 1;
            }
        }
        if let Some(p) = occurrences.iter().position(|&c| c % 2 == 1) {
            return Err(Error::InvalidInput(format!("point {p} lies in {} blocks", occurrences[p])));
        }
        Ok(Self { points, blocks })
    }

    /// Edges become points (lexicographic edge order) and vertex `v` becomes
    /// block `v` listing its incident edges in increasing order.
    pub fn from_cubic_graph(g: &SimpleGraph) -> Result<Self> {
        if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) != 3) {
            return Err(Error::InvalidInput(format!("degree: vertex {v} has degree {}", g.degree(v))));
        }
        if !g.is_connected() {
            return Err(Error::InvalidInput("disconnected graph".into()));
        }
        let edges = g.edges();
        let mut blocks = vec![Vec::with_capacity(3); g.vertex_count()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            blocks[a].push(k);
            blocks[b].push(k);
        }
        Self::new(edges.len(), blocks)
    }

    /// The structure of `K_4`: six points, four blocks.
    pub fn pasch() -> Self {
        Self::from_cubic_graph(&SimpleGraph::complete(4)).expect("K4 is cubic")
    }

    /// The 3×3 grid (points row-major) with the columns listed before the rows.
    pub fn grid() -> Self {
        let blocks = vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8], vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        Self::new(9, blocks).expect("grid is valid")
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("structure serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Connected cubic graphs on `n` vertices as incidence structures, one per
/// isomorphism class.
pub fn generate_cubic_structures(n: usize) -> Result<Vec<IncidenceStructure>> {
    connected_cubic_graphs(n)?.iter().map(IncidenceStructure::from_cubic_graph).collect()
}

/// One line of a graph6 file.
#[derive(Clone, Debug)]
pub struct Graph6Record {
    /// 1-based line number.
    pub line: usize,
    pub graph: SimpleGraph,
    /// The structure, or why the graph was rejected.
    pub structure: std::result::Result<IncidenceStructure, String>,
}

/// Parses graph6 text; non-cubic or disconnected graphs are kept as
/// rejected records, malformed lines are an error.
pub fn parse_graph6(text: &str) -> Result<Vec<Graph6Record>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let graph = SimpleGraph::from_graph6(line).map_err(|message| Error::Parse { line: k + 1, message })?;
        let structure = IncidenceStructure::from_cubic_graph(&graph).map_err(|e| match e {
            Error::InvalidInput(m) => m,
            other => other.to_string(),
        });
        out.push(Graph6Record { line: k + 1, graph, structure });
    }
    Ok(out)
}

pub fn load_graph6(path: impl AsRef<Path>) -> Result<Vec<Graph6Record>> {
    parse_graph6(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pasch_has_the_k4_blocks() {
        let p = IncidenceStructure::pasch();
        assert_eq!(p.point_count(), 6);
        assert_eq!(p.blocks(), &[vec![0, 1, 2], vec![0, 3, 4], vec![1, 3, 5], vec![2, 4, 5]]);
    }

    #[test]
    fn invalid_structures_are_rejected() {
        assert!(IncidenceStructure::new(3, vec![vec![0, 1, 2]]).is_err());
        assert!(IncidenceStructure::new(3, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(IncidenceStructure::new(3, vec![vec![0, 1, 1], vec![0, 1, 2]]).is_err());
        assert!(IncidenceStructure::new(3, vec![vec![0, 1, 3], vec![0, 1, 2]]).is_err());
        assert!(IncidenceStructure::from_json(r#"{"points":3,"blocks":[[0,1,2]]}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = IncidenceStructure::grid();
        let text = g.to_json();
        assert!(text.starts_with(r#"{"points":9,"blocks":[[0,3,6]"#));
        assert_eq!(IncidenceStructure::from_json(&text).unwrap(), g);
    }

    #[test]
    fn graph6_rejections_carry_reasons() {
        let two = SimpleGraph::from_edges(
            8,
            &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (4, 5), (5, 6), (4, 6), (4, 7), (5, 7), (6, 7)],
        );
        let text = format!("C~\nCF\n\n{}\n", two.to_graph6());
        let recs = parse_graph6(&text).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[2].line, 4);
        assert_eq!(recs[2].structure.as_ref().unwrap_err(), "disconnected graph");
        assert_eq!(recs[0].structure.as_ref().unwrap(), &IncidenceStructure::pasch());
        assert!(recs[1].structure.as_ref().unwrap_err().starts_with("degree"));
        assert!(matches!(parse_graph6("C~\n!!\n"), Err(Error::Parse { line: 2, .. })));
    }
}
