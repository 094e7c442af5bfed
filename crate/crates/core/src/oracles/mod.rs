//! Deterministic reference solvers for small instances.
//!
//! They share nothing with the algebraic algorithms beyond exact rank
//! computations and are meant to check them.

mod bpm;
mod intersection;
mod matching;

use std::collections::HashMap;

use thiserror::Error;

use crate::linalg::Matrix;

pub use bpm::oracle_bpm_exists;
pub use intersection::{oracle_matroid_intersection, ExchangeOutcome};
pub use matching::oracle_max_matching;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
}

/// Exact ranks of column subsets of a matrix, with a bounded memo.
#[derive(Debug, Clone)]
pub struct RankOracle {
    m: Matrix,
    memo: HashMap<Vec<usize>, usize>,
    capacity: usize,
}

impl RankOracle {
    pub const DEFAULT_CAPACITY: usize = 1 << 16;

    /// Elements are the columns of `m`.
    pub fn new(m: Matrix) -> Self {
        RankOracle { m, memo: HashMap::new(), capacity: Self::DEFAULT_CAPACITY }
    }

    /// Elements are the rows of `m`.
    pub fn from_rows(m: &Matrix) -> Self {
        Self::new(m.transpose())
    }

    pub fn ground_size(&self) -> usize {
        self.m.cols()
    }

    pub fn full_rank(&mut self) -> usize {
        let all: Vec<usize> = (0..self.ground_size()).collect();
        self.rank(&all)
    }

    pub fn rank(&mut self, set: &[usize]) -> usize {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = self.m.select_cols(&key).rank();
        if self.memo.len() >= self.capacity {
            self.memo.clear();
        }
        self.memo.insert(key, r);
        r
    }

    pub fn is_independent(&mut self, set: &[usize]) -> bool {
        self.rank(set) == set.len()
    }

    /// Number of cached subsets.
    pub fn cached(&self) -> usize {
        self.memo.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rank_oracle_memoises() {
        let f = PrimeField::default();
        let m = Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 0, 1]]);
        let mut o = RankOracle::new(m);
        assert_eq!(o.rank(&[0, 1]), 1);
        assert_eq!(o.rank(&[1, 0]), 1);
        assert_eq!(o.cached(), 1);
        assert!(o.is_independent(&[0, 2]));
        assert!(!o.is_independent(&[0, 0]));
        assert_eq!(o.full_rank(), 2);
    }
}
