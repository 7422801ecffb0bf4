use rayon::prelude::*;

/// Adjacency of a simple graph as one bitset row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, rows: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n && a != b, "invalid edge ({a}, {b})");
        self.rows[a * self.words + b / 64] |= 1 << (b % 64);
        self.rows[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        (self.rows[a * self.words + b / 64] >> (b % 64)) & 1 == 1
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|a| self.neighbors(a).filter(move |&b| b > a).map(move |b| (a, b))).collect()
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                k * 64 + t
            })
        })
    })
}

/// All cliques with exactly `k` vertices, each as an increasing index list,
/// in lexicographic order.
pub fn k_cliques(g: &BitGraph, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let per_root: Vec<Vec<Vec<usize>>> = (0..g.n)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut cand = g.row(v).to_vec();
            clear_up_to(&mut cand, v);
            let mut stack = vec![v];
            extend(g, k, &mut stack, &cand, &mut out);
            out
        })
        .collect();
    per_root.into_iter().flatten().collect()
}

/// Clears bits `0..=v`.
fn clear_up_to(set: &mut [u64], v: usize) {
    for (k, w) in set.iter_mut().enumerate() {
        let lo = k * 64;
        if v >= lo + 63 {
            *w = 0;
        } else if v >= lo {
            *w &= !((1u64 << (v - lo + 1)) - 1);
        }
    }
}

fn extend(g: &BitGraph, k: usize, stack: &mut Vec<usize>, cand: &[u64], out: &mut Vec<Vec<usize>>) {
    if stack.len() == k {
        out.push(stack.clone());
        return;
    }
    let size: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
    if stack.len() + size < k {
        return;
    }
    let mut next = vec![0u64; cand.len()];
    for u in ones(cand) {
        for ((n, c), r) in next.iter_mut().zip(cand).zip(g.row(u)) {
            *n = c & r;
        }
        clear_up_to(&mut next, u);
        stack.push(u);
        extend(g, k, stack, &next, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_cliques() {
        let g = BitGraph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))));
        assert_eq!(k_cliques(&g, 3).len(), 10);
        assert_eq!(k_cliques(&g, 5), vec![vec![0, 1, 2, 3, 4]]);
        assert!(k_cliques(&g, 6).is_empty());
    }

    #[test]
    fn path_has_no_triangles() {
        let g = BitGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(k_cliques(&g, 3).is_empty());
        assert_eq!(k_cliques(&g, 2), vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn wide_graphs_cross_word_boundaries() {
        let g = BitGraph::from_edges(130, [(1, 70), (70, 129), (1, 129), (63, 64)]);
        assert_eq!(k_cliques(&g, 3), vec![vec![1, 70, 129]]);
        assert_eq!(g.degree(70), 2);
    }
}
