//! Linear matroid intersection.
//!
//! Two matroids on the ground set `0..n` are given by the columns of `Q1`
//! (`r1 × n`) and the rows of `Q2` (`n × r2`). With `z` a vector of random
//! nonzero scalars and `X = diag(z)`, the matrix
//!
//! ```text
//!     Z = [ 0   Q1 ]
//!         [ Q2  X  ]
//! ```
//!
//! has rank `n + ρ` where `ρ` is the size of a maximum common independent
//! set, and `Y = -Q1 X^{-1} Q2` is the Schur complement of `X`. Both
//! algorithms first restrict `Q1` to a row basis and `Q2` to a column basis
//! of `Y`, after which both representations have full rank `ρ` and `Y` is
//! nonsingular.

mod alg1;
mod alg2;
mod state;

use thiserror::Error;

use crate::field::{PrimeField, Scalar};
use crate::linalg::{LinalgError, Matrix};
use crate::updates::LedgerError;

pub use alg1::intersect_alg1;
pub use alg2::intersect_alg2;
pub use state::MatroidState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matroid representations live in different fields")]
    FieldMismatch,
    #[error("element {0} is not covered by a current block of Z(J)^-1")]
    StaleBlock(usize),
    #[error("element {0} is already in the intersection")]
    InIntersection(usize),
    #[error("element {0} is not allowed")]
    NotAllowed(usize),
    #[error("no verified solution after {attempts} randomized attempts")]
    RandomnessExhausted { attempts: u32 },
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Two linear matroids on a common ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidPair {
    q1: Matrix,
    q2: Matrix,
}

impl MatroidPair {
    /// `q1` is `r1 × n` (columns are elements), `q2` is `n × r2` (rows are
    /// elements). Neither needs full rank.
    pub fn new(q1: Matrix, q2: Matrix) -> Result<Self, MatroidError> {
        if q1.field() != q2.field() {
            return Err(MatroidError::FieldMismatch);
        }
        if q1.cols() != q2.rows() {
            return Err(MatroidError::DimensionMismatch(format!(
                "Q1 has {} elements, Q2 has {}",
                q1.cols(),
                q2.rows()
            )));
        }
        Ok(MatroidPair { q1, q2 })
    }

    /// Both matroids given column-wise, as `r × n` matrices.
    pub fn from_columns(m1: Matrix, m2: Matrix) -> Result<Self, MatroidError> {
        Self::new(m1, m2.transpose())
    }

    pub fn field(&self) -> PrimeField {
        self.q1.field()
    }

    /// Ground set size.
    pub fn n(&self) -> usize {
        self.q1.cols()
    }

    pub fn q1(&self) -> &Matrix {
        &self.q1
    }

    pub fn q2(&self) -> &Matrix {
        &self.q2
    }

    /// Whether `set` is independent in both matroids.
    pub fn is_common_independent(&self, set: &[usize]) -> bool {
        let mut seen = vec![false; self.n()];
        for &e in set {
            if e >= self.n() || seen[e] {
                return false;
            }
            seen[e] = true;
        }
        self.q1.select_cols(set).rank() == set.len() && self.q2.select_rows(set).rank() == set.len()
    }

    /// The explicit `(r1 + n) × (r2 + n)` matrix `Z` for diagonal `z`.
    pub fn assemble_z(&self, z: &[Scalar]) -> Matrix {
        let f = self.field();
        let (r1, r2, n) = (self.q1.rows(), self.q2.cols(), self.n());
        let mut m = Matrix::zeros(f, r1 + n, r2 + n);
        m.paste(0, r2, &self.q1);
        m.paste(r1, 0, &self.q2);
        m.paste(r1, r2, &Matrix::diagonal(f, z));
        m
    }
}

/// `Y = -Q1 diag(z)^{-1} Q2`.
///
/// # Panics
/// If some `z_i` is zero or `z` has the wrong length.
pub fn build_y(pair: &MatroidPair, z: &[Scalar]) -> Matrix {
    assert_eq!(z.len(), pair.n());
    let f = pair.field();
    let zinv = f.batch_inv(z).expect("z must be nonzero");
    let scaled = pair.q1.scale_cols(&zinv);
    scaled.mul(&pair.q2).expect("shapes checked").neg()
}

/// Random nonzero diagonal for attempt seed `seed`.
pub(crate) fn sample_z(f: PrimeField, n: usize, seed: u64) -> Vec<Scalar> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| f.sample_nonzero(&mut rng)).collect()
}

/// Size of a maximum common independent set, as the rank of `Y` for a
/// random substitution. Never larger than the true value; smaller with
/// probability at most `n / p`.
pub fn max_intersection_size(pair: &MatroidPair, seed: u64) -> usize {
    build_y(pair, &sample_z(pair.field(), pair.n(), seed)).rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntersectConfig {
    pub seed: u64,
    /// Extra randomized attempts after a failed verification.
    pub retries: u32,
    /// Recursive algorithm only: compare every flushed region with an eagerly
    /// updated copy.
    pub audit: bool,
}

impl Default for IntersectConfig {
    fn default() -> Self {
        IntersectConfig { seed: 0, retries: 3, audit: false }
    }
}

impl IntersectConfig {
    pub fn with_seed(seed: u64) -> Self {
        IntersectConfig { seed, ..Self::default() }
    }

    pub fn attempt_seed(&self, attempt: u32) -> u64 {
        self.seed ^ u64::from(attempt).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntersectStats {
    pub attempts: u32,
    pub field_muls: u64,
    /// Recursive algorithm: number of ledger flushes.
    pub flushes: usize,
    /// Recursive algorithm: largest strip `rows × cols` flushed at each recursion
    /// level (level 0 is the root).
    pub strip_sizes: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectOutcome {
    /// The common independent set, sorted.
    pub elements: Vec<usize>,
    /// `rank Y` for the substitution used.
    pub rank_size: usize,
    pub seed: u64,
    pub stats: IntersectStats,
}

/// Shared retry loop: runs `attempt` with fresh seeds until its answer is a
/// common independent set of the predicted size.
pub(crate) fn with_retries(
    pair: &MatroidPair,
    config: &IntersectConfig,
    mut attempt: impl FnMut(u64) -> Result<(Vec<usize>, usize, IntersectStats), MatroidError>,
) -> Result<IntersectOutcome, MatroidError> {
    let mut muls = 0;
    for k in 0..=config.retries {
        let seed = config.attempt_seed(k);
        let (res, m) = crate::field::count_muls(|| attempt(seed));
        muls += m;
        let (mut elements, rank_size, stats) = res?;
        elements.sort_unstable();
        if elements.len() == rank_size && pair.is_common_independent(&elements) {
            let stats = IntersectStats { attempts: k + 1, field_muls: muls, ..stats };
            return Ok(IntersectOutcome { elements, rank_size, seed, stats });
        }
    }
    Err(MatroidError::RandomnessExhausted { attempts: config.retries + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn y_of_identity_pair_is_minus_identity() {
        let eye = Matrix::identity(f(), 3);
        let pair = MatroidPair::new(eye.clone(), eye).unwrap();
        let y = build_y(&pair, &[Scalar::ONE; 3]);
        assert_eq!(y, Matrix::identity(f(), 3).neg());
    }

    #[test]
    fn y_of_parallel_pair() {
        let pair = MatroidPair::new(
            Matrix::from_rows(f(), &[vec![1, 1]]),
            Matrix::from_rows(f(), &[vec![1], vec![1]]),
        )
        .unwrap();
        let y = build_y(&pair, &[Scalar::ONE, Scalar::ONE]);
        assert_eq!(y.get(0, 0), f().from_i64(-2));
    }

    #[test]
    fn rank_of_z_is_rank_of_y_plus_n() {
        use crate::linalg::testutil::random_matrix;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for trial in 0..20 {
            let (r, n) = (1 + trial % 5, 3 + trial % 9);
            let inner = 1 + trial % r;
            let q1 = random_matrix(f(), r, inner, &mut rng).mul(&random_matrix(f(), inner, n, &mut rng)).unwrap();
            let q2 = random_matrix(f(), n, r, &mut rng);
            let pair = MatroidPair::new(q1, q2).unwrap();
            let z = sample_z(f(), n, trial as u64);
            assert_eq!(pair.assemble_z(&z).rank(), build_y(&pair, &z).rank() + n);
        }
    }

    #[test]
    fn mismatched_inputs() {
        let a = Matrix::identity(f(), 2);
        let b = Matrix::identity(PrimeField::new(101).unwrap(), 2);
        assert_eq!(MatroidPair::new(a.clone(), b), Err(MatroidError::FieldMismatch));
        assert!(matches!(
            MatroidPair::new(a, Matrix::identity(f(), 3)),
            Err(MatroidError::DimensionMismatch(_))
        ));
    }
}
