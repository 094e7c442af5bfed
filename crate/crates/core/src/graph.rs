//! Simple undirected graphs.

use std::collections::BTreeSet;

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored normalised (`u < v`), sorted and deduplicated; self-loops
/// are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, dropping self-loops and parallel edges.
    ///
    /// # Panics
    /// If an endpoint is `>= n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let set: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .inspect(|&(u, v)| assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices"))
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Graph { n, edges: set.into_iter().collect() }
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// The subgraph induced by `vertices`, relabelled `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges)
    }

    /// Whether `m` is a set of vertex-disjoint edges of this graph.
    pub fn is_matching(&self, m: &[(usize, usize)]) -> bool {
        let mut used = vec![false; self.n];
        for &(u, v) in m {
            if u >= self.n || v >= self.n || !self.has_edge(u, v) || used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_edges() {
        let g = Graph::new(4, [(2, 1), (1, 2), (3, 3), (0, 3)]);
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        let h = g.induced(&[4, 3, 1]);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edges(), &[(0, 1)]);
    }

    #[test]
    fn matching_check() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(g.is_matching(&[(0, 1), (2, 3)]));
        assert!(!g.is_matching(&[(0, 1), (1, 2)]));
        assert!(!g.is_matching(&[(0, 2)]));
    }
}
