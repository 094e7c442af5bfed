//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::matroid::MatroidPair;
use crate::pathmatch::PathMatchingInstance;

/// `G(n, p)`.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random `rows × cols` matrix of rank at most `rank`.
pub fn low_rank_matrix(f: PrimeField, rows: usize, cols: usize, rank: usize, rng: &mut impl Rng) -> Matrix {
    let a = Matrix::from_fn(f, rows, rank, |_, _| f.sample(rng));
    let b = Matrix::from_fn(f, rank, cols, |_, _| f.sample(rng));
    a.mul(&b).expect("shapes agree")
}

/// A pair of `r`-row linear matroids on `n` elements with some structure:
/// each side has a random rank in `1..=r`, and a few elements are made
/// loops or parallel copies so that greedy choices can go wrong.
pub fn random_matroid_pair(f: PrimeField, r: usize, n: usize, seed: u64) -> MatroidPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sides = Vec::new();
    for _ in 0..2 {
        let rank = rng.gen_range(1..=r.max(1)).min(r);
        let mut m = low_rank_matrix(f, r, n, rank, &mut rng);
        for e in 0..n {
            match rng.gen_range(0..8) {
                0 => (0..r).for_each(|i| m.set(i, e, f.elem(0))),
                1 if e > 0 => {
                    let src = rng.gen_range(0..e);
                    let c = f.sample_nonzero(&mut rng);
                    (0..r).for_each(|i| m.set(i, e, f.mul(c, m.get(i, src))));
                }
                _ => {}
            }
        }
        sides.push(m);
    }
    let m2 = sides.pop().expect("two sides");
    let m1 = sides.pop().expect("two sides");
    MatroidPair::from_columns(m1, m2).expect("same shape")
}

/// A pair whose second matroid has only `r` non-loops, spread evenly over
/// the ground set, so that a greedy scan must visit all of it. The first
/// matroid is a uniformly random `r × n` matrix.
pub fn spread_matroid_pair(f: PrimeField, r: usize, n: usize, seed: u64) -> MatroidPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m1 = Matrix::from_fn(f, r, n, |_, _| f.sample(&mut rng));
    let step = (n / r.max(1)).max(1);
    let m2 = Matrix::from_fn(f, r, n, |_, e| if e % step == step - 1 { f.sample(&mut rng) } else { f.elem(0) });
    MatroidPair::from_columns(m1, m2).expect("same shape")
}

/// Graphic matroid of `K_k` as a `(k-1) × C(k,2)` matrix (incidence matrix
/// without its last row), edges in lexicographic order.
pub fn complete_graphic(f: PrimeField, k: usize) -> Matrix {
    let edges: Vec<(usize, usize)> = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
    let mut m = Matrix::zeros(f, k.saturating_sub(1), edges.len());
    for (e, &(u, v)) in edges.iter().enumerate() {
        if u + 1 < k {
            m.set(u, e, f.elem(1));
        }
        if v + 1 < k {
            m.set(v, e, f.from_i64(-1));
        }
    }
    m
}

/// Two copies of the graphic matroid of `K_k`, the second with its edges
/// relabelled by a seeded permutation (identity for `seed == 0`).
pub fn graphic_pair(f: PrimeField, k: usize, seed: u64) -> MatroidPair {
    let m = complete_graphic(f, k);
    let mut perm: Vec<usize> = (0..m.cols()).collect();
    if seed != 0 {
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let m2 = m.select_cols(&perm);
    MatroidPair::from_columns(m, m2).expect("same shape")
}

/// A small path-matching instance with `t` terminals per side, `s` inner
/// vertices and full-rank random matroids of rank `r <= t`.
pub fn random_bpm_instance(
    f: PrimeField,
    t: usize,
    s: usize,
    r: usize,
    density: f64,
    seed: u64,
) -> PathMatchingInstance {
    assert!(r <= t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (q1, q2) = loop {
        let q1 = Matrix::from_fn(f, r, t, |_, _| f.sample(&mut rng));
        let q2 = Matrix::from_fn(f, t, r, |_, _| f.sample(&mut rng));
        if q1.rank() == r && q2.rank() == r {
            break (q1, q2);
        }
    };
    let n = 2 * t + s;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let same_side = (v < t) || (u >= t && v < 2 * t);
            if !same_side && rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    PathMatchingInstance::new(q1, q2, s, edges).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graphic_ranks() {
        let f = PrimeField::default();
        assert_eq!(complete_graphic(f, 4).rank(), 3);
        assert_eq!(complete_graphic(f, 5).rank(), 4);
        // A triangle is dependent.
        assert_eq!(complete_graphic(f, 4).select_cols(&[0, 1, 3]).rank(), 2);
    }

    #[test]
    fn generators_are_deterministic() {
        let f = PrimeField::default();
        assert_eq!(random_graph(12, 0.5, 3), random_graph(12, 0.5, 3));
        assert_eq!(random_matroid_pair(f, 4, 9, 2), random_matroid_pair(f, 4, 9, 2));
        assert_eq!(random_bpm_instance(f, 2, 4, 1, 0.5, 1), random_bpm_instance(f, 2, 4, 1, 0.5, 1));
    }

    #[test]
    fn spread_pair_has_late_elements() {
        let f = PrimeField::default();
        let pair = spread_matroid_pair(f, 4, 32, 1);
        let live: Vec<usize> = (0..32).filter(|&e| (0..4).any(|c| !pair.q2().get(e, c).is_zero())).collect();
        assert_eq!(live, vec![7, 15, 23, 31]);
    }
}
