use std::collections::HashMap;

use super::OracleError;
use crate::graph::Graph;

/// Maximum matching size by memoised search over vertex subsets.
pub fn oracle_max_matching(graph: &Graph) -> Result<usize, OracleError> {
    let n = graph.vertex_count();
    if n > 24 {
        return Err(OracleError::TooLarge(format!("{n} vertices, at most 24 supported")));
    }
    let adj: Vec<u32> = graph
        .adjacency()
        .iter()
        .map(|list| list.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut memo = HashMap::new();
    Ok(best(full, &adj, &mut memo))
}

fn best(mask: u32, adj: &[u32], memo: &mut HashMap<u32, u8>) -> usize {
    if mask.count_ones() < 2 {
        return 0;
    }
    if let Some(&r) = memo.get(&mask) {
        return r as usize;
    }
    let v = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << v);
    let bound = (mask.count_ones() / 2) as usize;
    let mut out = 0;
    let mut nb = adj[v] & rest;
    while nb != 0 && out < bound {
        let u = nb.trailing_zeros();
        nb &= nb - 1;
        out = out.max(1 + best(rest & !(1 << u), adj, memo));
    }
    if out < bound {
        out = out.max(best(rest, adj, memo));
    }
    memo.insert(mask, out as u8);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::new(10, outer.chain(spokes).chain(inner))
    }

    #[test]
    fn small_graphs() {
        assert_eq!(oracle_max_matching(&Graph::new(3, [(0, 1), (1, 2), (0, 2)])).unwrap(), 1);
        assert_eq!(oracle_max_matching(&Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)])).unwrap(), 2);
        assert_eq!(oracle_max_matching(&Graph::empty(0)).unwrap(), 0);
        assert!(oracle_max_matching(&Graph::empty(25)).is_err());
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let g = petersen();
        let m = [(0, 5), (1, 2), (3, 4), (6, 8), (7, 9)];
        assert!(g.is_matching(&m));
        assert_eq!(oracle_max_matching(&g).unwrap(), 5);
    }

    /// Largest independent set by enumeration.
    fn independence_number(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|&s| g.edges().iter().all(|&(u, v)| s & (1 << u) == 0 || s & (1 << v) == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn bipartite_graphs_satisfy_konig() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let (a, b) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let edges: Vec<(usize, usize)> = (0..a)
                .flat_map(|u| (0..b).map(move |v| (u, a + v)))
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let g = Graph::new(a + b, edges);
            // Without isolated vertices, a maximum independent set is the
            // complement of a minimum vertex cover.
            let covered: Vec<usize> = (0..a + b).filter(|&v| g.edges().iter().any(|e| e.0 == v || e.1 == v)).collect();
            let h = g.induced(&covered);
            assert_eq!(oracle_max_matching(&h).unwrap(), h.vertex_count() - independence_number(&h));
        }
    }
}
