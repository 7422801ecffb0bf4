//! Small simple graphs: canonical labeling, connected cubic generation and
//! the graph6 exchange format.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// Largest vertex count accepted by [`SimpleGraph::canonical_code`]
/// (the code is the upper triangle packed into a `u128`).
pub const MAX_CANONICAL_VERTICES: usize = 16;

/// An undirected simple graph on `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    /// # Panics
    /// On loops, repeated edges or out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.adj.len() && b < self.adj.len(), "invalid edge ({a}, {b})");
        assert!(!self.has_edge(a, b), "repeated edge ({a}, {b})");
        for (u, v) in [(a, b), (b, a)] {
            let row = &mut self.adj[u];
            let at = row.partition_point(|&x| x < v);
            row.insert(at, v);
        }
    }

    fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adj.len()).flat_map(|a| self.adj[a].iter().filter(move |&&b| b > a).map(move |&b| (a, b))).collect()
    }

    pub fn is_cubic(&self) -> bool {
        self.adj.iter().all(|r| r.len() == 3)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        Self::from_edges(self.adj.len(), &edges)
    }

    /// Canonical labeling by individualization and refinement.
    ///
    /// Returns the minimum upper-triangle code over all leaves of the search
    /// tree together with a permutation realizing it. Isomorphic graphs get
    /// equal codes.
    ///
    /// # Panics
    /// If the graph has more than [`MAX_CANONICAL_VERTICES`] vertices.
    pub fn canonical_labeling(&self) -> (u128, Vec<usize>) {
        let n = self.adj.len();
        assert!(n <= MAX_CANONICAL_VERTICES, "canonical labeling supports at most {MAX_CANONICAL_VERTICES} vertices");
        let mut degrees: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let colors = self.adj.iter().map(|r| degrees.binary_search(&r.len()).unwrap() as u32).collect();
        let mut best = None;
        self.search(colors, &mut best);
        best.unwrap_or((0, Vec::new()))
    }

    pub fn canonical_code(&self) -> u128 {
        self.canonical_labeling().0
    }

    pub fn canonical_form(&self) -> Self {
        self.relabel(&self.canonical_labeling().1)
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count() && self.canonical_code() == other.canonical_code()
    }

    fn refine(&self, colors: &mut [u32]) {
        let mut cells = count_cells(colors);
        loop {
            let keys: Vec<(u32, Vec<u32>)> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<u32> = self.adj[v].iter().map(|&u| colors[u]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            for (c, k) in colors.iter_mut().zip(&keys) {
                *c = sorted.binary_search(k).unwrap() as u32;
            }
            if sorted.len() == cells {
                return;
            }
            cells = sorted.len();
        }
    }

    fn search(&self, mut colors: Vec<u32>, best: &mut Option<(u128, Vec<usize>)>) {
        self.refine(&mut colors);
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let Some(target) = sizes.iter().position(|&s| s > 1) else {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let code = self.code_under(&perm);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, perm));
            }
            return;
        };
        let target = target as u32;
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let next = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| if c > target || (c == target && u != v) { c + 1 } else { c })
                .collect();
            self.search(next, best);
        }
    }

    /// Upper triangle under `perm`, pair `(0,1)` in the most significant bit.
    fn code_under(&self, perm: &[usize]) -> u128 {
        let n = self.adj.len();
        let total = n * n.saturating_sub(1) / 2;
        let mut code = 0u128;
        for (a, b) in self.edges() {
            let (i, j) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            let k = i * (2 * n - i - 1) / 2 + (j - i - 1);
            code |= 1 << (total - 1 - k);
        }
        code
    }

    /// Encodes in graph6 (without the optional header).
    pub fn to_graph6(&self) -> String {
        let n = self.adj.len();
        let mut out: Vec<u8> = Vec::new();
        if n < 63 {
            out.push(n as u8 + 63);
        } else {
            out.push(126);
            out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
        }
        let mut bits = Vec::with_capacity(n * n / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(self.has_edge(i, j));
            }
        }
        for chunk in bits.chunks(6) {
            let v = chunk.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (5 - k)));
            out.push(v + 63);
        }
        String::from_utf8(out).expect("graph6 output is ASCII")
    }

    /// Decodes one graph6 line (an optional `>>graph6<<` header is skipped).
    pub fn from_graph6(line: &str) -> std::result::Result<Self, String> {
        let s = line.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s).as_bytes();
        if let Some(&c) = s.iter().find(|&&c| !(63..=126).contains(&c)) {
            return Err(format!("invalid graph6 byte {c:#04x}"));
        }
        let (n, body) = match s {
            [] => return Err("empty graph6 line".into()),
            [126, 126, ..] => return Err("graphs with more than 258047 vertices are not supported".into()),
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err("truncated graph6 size field".into());
                }
                let n = rest[..3].iter().fold(0usize, |acc, &c| (acc << 6) | usize::from(c - 63));
                (n, &rest[3..])
            }
            [c, rest @ ..] => (usize::from(c - 63), rest),
        };
        let pairs = n * n.saturating_sub(1) / 2;
        if body.len() != pairs.div_ceil(6) {
            return Err(format!("expected {} data bytes for {n} vertices, found {}", pairs.div_ceil(6), body.len()));
        }
        let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        let mut g = Self::new(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        if (k..body.len() * 6).any(bit) {
            return Err("nonzero padding bits".into());
        }
        Ok(g)
    }
}

fn count_cells(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Removes edges `e` and `f` and adds adjacent vertices `x`, `y` with `x`
/// joined to `pair.0` and `y` to `pair.1`, where the two pairs split the
/// four endpoints. `None` when a pair repeats a vertex.
fn expand(g: &SimpleGraph, e: (usize, usize), f: (usize, usize), split: usize) -> Option<SimpleGraph> {
    let [(p, q), (r, s)] = match split {
        0 => [(e.0, e.1), (f.0, f.1)],
        1 => [(e.0, f.0), (e.1, f.1)],
        _ => [(e.0, f.1), (e.1, f.0)],
    };
    if p == q || r == s {
        return None;
    }
    let n = g.vertex_count();
    let mut h = g.clone();
    h.adj.push(Vec::new());
    h.adj.push(Vec::new());
    let (x, y) = (n, n + 1);
    h.remove_edge(e.0, e.1);
    h.remove_edge(f.0, f.1);
    for (a, b) in [(p, x), (q, x), (r, y), (s, y), (x, y)] {
        h.add_edge(a, b);
    }
    Some(h)
}

/// One representative per isomorphism class of connected cubic graphs on
/// `n` vertices, in canonical form and sorted by canonical code.
///
/// Each level expands the previous one: delete two edges, add two adjacent
/// vertices and reattach the four freed endpoints two to each.
pub fn connected_cubic_graphs(n: usize) -> Result<Vec<SimpleGraph>> {
    if n % 2 == 1 || !(4..=12).contains(&n) {
        return Err(Error::InvalidInput(format!("cubic graphs need an even vertex count in 4..=12, got {n}")));
    }
    let mut level: BTreeMap<u128, SimpleGraph> = BTreeMap::new();
    let k4 = SimpleGraph::complete(4);
    level.insert(k4.canonical_code(), k4.canonical_form());
    for _ in (6..=n).step_by(2) {
        let mut next = BTreeMap::new();
        for g in level.values() {
            let edges = g.edges();
            for (i, &e) in edges.iter().enumerate() {
                for &f in &edges[i + 1..] {
                    for h in (0..3).filter_map(|split| expand(g, e, f, split)) {
                        let (code, perm) = h.canonical_labeling();
                        next.entry(code).or_insert_with(|| h.relabel(&perm));
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> SimpleGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        SimpleGraph::from_edges(10, &e)
    }

    #[test]
    fn canonical_code_ignores_labels() {
        let g = petersen();
        let perm = [3, 7, 1, 9, 0, 2, 8, 4, 6, 5];
        assert_eq!(g.canonical_code(), g.relabel(&perm).canonical_code());
        assert_eq!(g.canonical_form(), g.relabel(&perm).canonical_form());
        let prism =
            SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]);
        let k33 = SimpleGraph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert!(!prism.is_isomorphic(&k33));
    }

    #[test]
    fn small_censuses() {
        assert_eq!(connected_cubic_graphs(4).unwrap().len(), 1);
        assert_eq!(connected_cubic_graphs(6).unwrap().len(), 2);
        assert_eq!(connected_cubic_graphs(8).unwrap().len(), 5);
        assert!(connected_cubic_graphs(7).is_err());
        assert!(connected_cubic_graphs(2).is_err());
    }

    #[test]
    fn graph6_known_strings() {
        assert_eq!(SimpleGraph::complete(4).to_graph6(), "C~");
        assert_eq!(petersen().canonical_code(), SimpleGraph::from_graph6("IheA@GUAo").unwrap().canonical_code());
        let g = SimpleGraph::from_graph6(">>graph6<<C~").unwrap();
        assert_eq!(g, SimpleGraph::complete(4));
        assert!(SimpleGraph::from_graph6("C}").is_ok());
        assert!(SimpleGraph::from_graph6("C~~").is_err());
        assert!(SimpleGraph::from_graph6("C ").is_err());
        assert!(SimpleGraph::from_graph6("").is_err());
    }

    #[test]
    fn graph6_round_trip() {
        for g in connected_cubic_graphs(8).unwrap() {
            assert_eq!(SimpleGraph::from_graph6(&g.to_graph6()).unwrap(), g);
        }
        let big = SimpleGraph::complete(70);
        assert_eq!(SimpleGraph::from_graph6(&big.to_graph6()).unwrap(), big);
    }
}
