use std::collections::VecDeque;

use super::RankOracle;
use crate::matroid::MatroidPair;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeOutcome {
    /// A maximum common independent set, sorted.
    pub elements: Vec<usize>,
    /// Number of augmenting paths used.
    pub augmentations: usize,
}

/// Maximum common independent set by shortest augmenting paths in the
/// exchange graph.
pub fn oracle_matroid_intersection(pair: &MatroidPair) -> ExchangeOutcome {
    let n = pair.n();
    let mut m1 = RankOracle::new(pair.q1().clone());
    let mut m2 = RankOracle::from_rows(pair.q2());
    let mut in_i = vec![false; n];
    let mut augmentations = 0;
    loop {
        let current: Vec<usize> = (0..n).filter(|&e| in_i[e]).collect();
        let path = match shortest_path(&current, &in_i, &mut m1, &mut m2) {
            Some(p) => p,
            None => break,
        };
        for e in path {
            in_i[e] = !in_i[e];
        }
        augmentations += 1;
    }
    ExchangeOutcome { elements: (0..n).filter(|&e| in_i[e]).collect(), augmentations }
}

/// Shortest path from `{y ∉ I : I + y ∈ M1}` to `{y ∉ I : I + y ∈ M2}` with
/// arcs `x → y` when `I - x + y ∈ M1` and `y → x` when `I - x + y ∈ M2`.
fn shortest_path(
    current: &[usize],
    in_i: &[bool],
    m1: &mut RankOracle,
    m2: &mut RankOracle,
) -> Option<Vec<usize>> {
    let n = in_i.len();
    let with = |extra: usize| {
        let mut s = current.to_vec();
        s.push(extra);
        s
    };
    let swap = |out: usize, extra: usize| {
        let mut s: Vec<usize> = current.iter().copied().filter(|&e| e != out).collect();
        s.push(extra);
        s
    };
    let mut sink = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for y in (0..n).filter(|&y| !in_i[y]) {
        sink[y] = m2.is_independent(&with(y));
        if m1.is_independent(&with(y)) {
            seen[y] = true;
            queue.push_back(y);
        }
    }
    while let Some(v) = queue.pop_front() {
        if !in_i[v] && sink[v] {
            let mut path = vec![v];
            let mut c = v;
            while parent[c] != usize::MAX {
                c = parent[c];
                path.push(c);
            }
            return Some(path);
        }
        for w in 0..n {
            if seen[w] || in_i[w] == in_i[v] {
                continue;
            }
            let arc = if in_i[v] {
                m1.is_independent(&swap(v, w))
            } else {
                m2.is_independent(&swap(w, v))
            };
            if arc {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::linalg::Matrix;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn identity_pair_takes_everything() {
        let eye = Matrix::identity(f(), 4);
        let pair = MatroidPair::new(eye.clone(), eye).unwrap();
        assert_eq!(oracle_matroid_intersection(&pair).elements, vec![0, 1, 2, 3]);
    }

    #[test]
    fn loops_are_excluded() {
        // Only elements 1 and 3 are non-loops in both matroids.
        let m1 = Matrix::from_rows(f(), &[vec![1, 1, 0, 0], vec![0, 0, 0, 1]]);
        let m2 = Matrix::from_rows(f(), &[vec![0, 1, 1, 0], vec![0, 0, 0, 1]]);
        let pair = MatroidPair::from_columns(m1, m2).unwrap();
        assert_eq!(oracle_matroid_intersection(&pair).elements, vec![1, 3]);
    }

    #[test]
    fn greedy_trap_needs_augmentation() {
        // Taking element 0 first blocks both others; {1, 2} is optimal.
        let m1 = Matrix::from_rows(f(), &[vec![1, 1, 0], vec![0, 0, 1]]);
        let m2 = Matrix::from_rows(f(), &[vec![1, 0, 1], vec![0, 1, 0]]);
        let pair = MatroidPair::from_columns(m1, m2).unwrap();
        let out = oracle_matroid_intersection(&pair);
        assert_eq!(out.elements, vec![1, 2]);
        assert!(pair.is_common_independent(&out.elements));
    }
}
