use super::{with_retries, IntersectConfig, IntersectOutcome, IntersectStats, MatroidError, MatroidPair, MatroidState};

/// Matroid intersection by scanning the ground set in blocks of `ρ`
/// elements. Each block of `Z(J)^{-1}` is assembled from the current
/// `𝒴(J)`, so the work is `O(n ρ^{ω-1})`.
pub fn intersect_alg2(pair: &MatroidPair, config: &IntersectConfig) -> Result<IntersectOutcome, MatroidError> {
    with_retries(pair, config, |seed| {
        let mut st = MatroidState::new(pair, seed);
        greedy_blocks(&mut st)?;
        Ok((st.intersection().to_vec(), st.rank(), IntersectStats::default()))
    })
}

/// Runs the block scan on `st` until `|J| = ρ` or the ground set is used up.
pub fn greedy_blocks(st: &mut MatroidState) -> Result<(), MatroidError> {
    let (n, k) = (st.n(), st.rank());
    if k == 0 {
        return Ok(());
    }
    let mut start = 0;
    while start < n && st.intersection().len() < k {
        let idx: Vec<usize> = (start..n.min(start + k)).collect();
        start += idx.len();
        st.load_block(idx.clone())?;
        for i in idx {
            if st.allowed_element(i)? {
                st.y_rank1_update(i)?;
                if st.intersection().len() == k {
                    break;
                }
            }
        }
    }
    Ok(())
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
    fn partition_matroids() {
        // M1: {0,1} parallel, {2,3} parallel. M2: {0,2} parallel, {1,3} parallel.
        let m1 = Matrix::from_rows(f(), &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let m2 = Matrix::from_rows(f(), &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        let pair = MatroidPair::from_columns(m1, m2).unwrap();
        let out = intersect_alg2(&pair, &IntersectConfig::default()).unwrap();
        assert_eq!(out.elements.len(), 2);
        assert!(out.elements == vec![0, 3] || out.elements == vec![1, 2]);
    }

    #[test]
    fn rank_deficient_sides() {
        let m1 = Matrix::from_rows(f(), &[vec![1, 2, 3], vec![2, 4, 6]]);
        let m2 = Matrix::identity(f(), 3);
        let pair = MatroidPair::from_columns(m1, m2).unwrap();
        let out = intersect_alg2(&pair, &IntersectConfig::with_seed(5)).unwrap();
        assert_eq!(out.elements, vec![0]);
    }

    #[test]
    fn cached_block_tracks_updates() {
        use crate::linalg::testutil::random_matrix;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (r, n) = (4, 9);
        let pair = MatroidPair::new(random_matrix(f(), r, n, &mut rng), random_matrix(f(), n, r, &mut rng)).unwrap();
        let mut st = MatroidState::new(&pair, 1);
        let idx: Vec<usize> = (0..n).collect();
        st.load_block(idx).unwrap();
        for i in [2, 5, 7] {
            st.y_rank1_update(i).unwrap();
        }
        let rest: Vec<usize> = (0..n).filter(|i| ![2, 5, 7].contains(i)).collect();
        let fresh = st.assemble_zj_inv_block(&rest, &rest).unwrap();
        let (_, cached) = st.block().unwrap();
        assert_eq!(cached.select(&rest, &rest), fresh);
    }
}
