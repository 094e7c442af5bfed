use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::instance::{build_z, ZMatrix};
use super::solver::{solve_bpm_with_z, SolveStats, SolverConfig};
use super::{verify_bpm, PathMatchError, PathMatchingInstance};
use crate::field::{count_muls, PrimeField};
use crate::graph::Graph;
use crate::linalg::{max_rank_principal_submatrix, Matrix};

/// Result of [`max_matching`] or [`independent_matching`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingOutcome {
    /// Matched pairs, sorted. Graph vertices for [`max_matching`];
    /// `(T1 index, T2 index)` for [`independent_matching`].
    pub edges: Vec<(usize, usize)>,
    /// Maximum size predicted by the rank of the substituted matrix.
    pub rank_size: usize,
    pub seed: u64,
    pub stats: SolveStats,
}

/// Maximum matching of a general graph.
///
/// The rank of a random Tutte matrix gives twice the matching number; a
/// full-rank principal submatrix `Z[A, A]` picks a vertex set `A` whose
/// induced graph has a perfect matching, which is then found by the
/// path-matching solver on the same substitution.
pub fn max_matching(
    graph: &Graph,
    field: PrimeField,
    config: &SolverConfig,
) -> Result<MatchingOutcome, PathMatchError> {
    config.check()?;
    let mut stats = SolveStats::default();
    for attempt in 0..=config.retries {
        let seed = config.attempt_seed(attempt);
        let (res, muls) = count_muls(|| match_once(graph, field, seed, config));
        stats.field_muls += muls;
        stats.attempts = attempt + 1;
        if let Some((edges, rank_size, run)) = res? {
            let stats = SolveStats { attempts: stats.attempts, field_muls: stats.field_muls, ..run };
            return Ok(MatchingOutcome { edges, rank_size, seed, stats });
        }
    }
    Err(PathMatchError::RandomnessExhausted { attempts: config.retries + 1 })
}

type Attempt = Option<(Vec<(usize, usize)>, usize, SolveStats)>;

fn match_once(
    graph: &Graph,
    field: PrimeField,
    seed: u64,
    config: &SolverConfig,
) -> Result<Attempt, PathMatchError> {
    let inst = PathMatchingInstance::matching(graph, field);
    let zm = build_z(&inst, seed);
    let a = max_rank_principal_submatrix(&zm.z, &[])?;
    if a.is_empty() {
        return Ok(Some((Vec::new(), 0, SolveStats::default())));
    }
    let sub = graph.induced(&a);
    let sub_inst = PathMatchingInstance::matching(&sub, field);
    let ids: Vec<Option<usize>> = (0..a.len()).map(Some).collect();
    let sub_z = ZMatrix { z: zm.z.select(&a, &a), row_of: ids.clone(), col_of: ids, seed };
    let sol = match solve_bpm_with_z(&sub_inst, &sub_z, config) {
        Ok(sol) => sol,
        Err(PathMatchError::NoBpm) => return Ok(None),
        Err(e) => return Err(e),
    };
    if verify_bpm(&sub_inst, &sol.edges).is_err() {
        return Ok(None);
    }
    let mut edges: Vec<(usize, usize)> =
        sol.edges.iter().map(|&(u, v)| (a[u].min(a[v]), a[u].max(a[v]))).collect();
    edges.sort_unstable();
    if !graph.is_matching(&edges) || 2 * edges.len() != a.len() {
        return Ok(None);
    }
    Ok(Some((edges, a.len() / 2, sol.stats)))
}

/// A bipartite graph `T1 × T2` with a linear matroid on each side: the
/// columns of `q1` (`r1 × t`) and the rows of `q2` (`t × r2`). The matrices
/// need not have full row (column) rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMatroidInstance {
    q1: Matrix,
    q2: Matrix,
    edges: Vec<(usize, usize)>,
}

impl BipartiteMatroidInstance {
    /// `edges` are `(i, j)` with `i` indexing `T1` and `j` indexing `T2`.
    pub fn new(
        q1: Matrix,
        q2: Matrix,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PathMatchError> {
        if q1.field() != q2.field() {
            return Err(PathMatchError::FieldMismatch);
        }
        let t = q1.cols();
        if q2.rows() != t {
            return Err(PathMatchError::DimensionMismatch(format!(
                "Q1 has {t} columns but Q2 has {} rows",
                q2.rows()
            )));
        }
        let mut list = Vec::new();
        for (i, j) in edges {
            if i >= t || j >= t {
                return Err(PathMatchError::InvalidEdge(i, j, "endpoint out of range".into()));
            }
            list.push((i, j));
        }
        list.sort_unstable();
        list.dedup();
        Ok(BipartiteMatroidInstance { q1, q2, edges: list })
    }

    pub fn t(&self) -> usize {
        self.q1.cols()
    }

    pub fn q1(&self) -> &Matrix {
        &self.q1
    }

    pub fn q2(&self) -> &Matrix {
        &self.q2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Whether `m` is a matching of this graph whose sides are independent
    /// in the respective matroids.
    pub fn is_independent_matching(&self, m: &[(usize, usize)]) -> bool {
        let t = self.t();
        let (mut left, mut right) = (vec![false; t], vec![false; t]);
        for &(i, j) in m {
            if i >= t || j >= t || self.edges.binary_search(&(i, j)).is_err() || left[i] || right[j] {
                return false;
            }
            left[i] = true;
            right[j] = true;
        }
        let d1: Vec<usize> = m.iter().map(|e| e.0).collect();
        let d2: Vec<usize> = m.iter().map(|e| e.1).collect();
        self.q1.select_cols(&d1).rank() == m.len() && self.q2.select_rows(&d2).rank() == m.len()
    }
}

/// Maximum independent matching.
///
/// With `Z` the path-matching matrix of the instance, `rank Z - 2t` is the
/// answer size `k`. It equals the rank of the Schur complement
/// `Y = Q1 D1^{-1} X D2^{-1} Q2`; restricting `Q1` to a row basis and `Q2`
/// to a column basis of `Y` gives rank-`k` matroids whose basic
/// path-matchings are exactly the maximum independent matchings.
pub fn independent_matching(
    inst: &BipartiteMatroidInstance,
    config: &SolverConfig,
) -> Result<MatchingOutcome, PathMatchError> {
    config.check()?;
    let mut stats = SolveStats::default();
    for attempt in 0..=config.retries {
        let seed = config.attempt_seed(attempt);
        let (res, muls) = count_muls(|| independent_once(inst, seed, config));
        stats.field_muls += muls;
        stats.attempts = attempt + 1;
        if let Some((edges, rank_size, run)) = res? {
            let stats = SolveStats { attempts: stats.attempts, field_muls: stats.field_muls, ..run };
            return Ok(MatchingOutcome { edges, rank_size, seed, stats });
        }
    }
    Err(PathMatchError::RandomnessExhausted { attempts: config.retries + 1 })
}

/// `Q1 D1^{-1} X D2^{-1} Q2` for a random substitution.
pub(crate) fn bipartite_schur(inst: &BipartiteMatroidInstance, seed: u64) -> Matrix {
    let f = inst.q1.field();
    let t = inst.t();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Matrix::zeros(f, t, t);
    for &(i, j) in &inst.edges {
        x.set(i, j, f.sample(&mut rng));
    }
    let d1: Vec<_> = (0..t).map(|_| f.sample_nonzero(&mut rng)).collect();
    let d2: Vec<_> = (0..t).map(|_| f.sample_nonzero(&mut rng)).collect();
    let d1 = f.batch_inv(&d1).expect("nonzero");
    let d2 = f.batch_inv(&d2).expect("nonzero");
    let scaled = x.scale_rows(&d1).scale_cols(&d2);
    let left = inst.q1.mul(&scaled).expect("shapes checked");
    left.mul(&inst.q2).expect("shapes checked")
}

fn independent_once(
    inst: &BipartiteMatroidInstance,
    seed: u64,
    config: &SolverConfig,
) -> Result<Attempt, PathMatchError> {
    let t = inst.t();
    let profile = bipartite_schur(inst, seed).rank_profile();
    let k = profile.rank;
    if k == 0 {
        return Ok(Some((Vec::new(), 0, SolveStats::default())));
    }
    let q1 = inst.q1.select_rows(&profile.row_basis);
    let q2 = inst.q2.select_cols(&profile.col_basis);
    let edges = inst.edges.iter().map(|&(i, j)| (i, t + j));
    let restricted = PathMatchingInstance::new(q1, q2, 0, edges)?;
    let zm = build_z(&restricted, seed);
    let sol = match solve_bpm_with_z(&restricted, &zm, config) {
        Ok(sol) => sol,
        Err(PathMatchError::NoBpm) => return Ok(None),
        Err(e) => return Err(e),
    };
    let edges: Vec<(usize, usize)> = sol.edges.iter().map(|&(a, b)| (a, b - t)).collect();
    if edges.len() != k || !inst.is_independent_matching(&edges) {
        return Ok(None);
    }
    Ok(Some((edges, k, sol.stats)))
}
