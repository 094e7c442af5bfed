use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{norm, PathMatchError};
use crate::field::PrimeField;
use crate::graph::Graph;
use crate::linalg::{LinalgError, Matrix};

/// Which side a global vertex belongs to, with its index within the side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    T1(usize),
    T2(usize),
    S(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMatchingInstance {
    t: usize,
    s: usize,
    q1: Matrix,
    q2: Matrix,
    edges: Vec<(usize, usize)>,
}

impl PathMatchingInstance {
    /// Validates and builds an instance. `q1` is `r × t`, `q2` is `t × r`,
    /// both of rank `r`; edges use global vertex numbers.
    pub fn new(
        q1: Matrix,
        q2: Matrix,
        s: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PathMatchError> {
        if q1.field() != q2.field() {
            return Err(PathMatchError::FieldMismatch);
        }
        let (r, t) = (q1.rows(), q1.cols());
        if q2.rows() != t || q2.cols() != r {
            return Err(PathMatchError::DimensionMismatch(format!(
                "Q1 is {}x{} but Q2 is {}x{}",
                r,
                t,
                q2.rows(),
                q2.cols()
            )));
        }
        let r1 = q1.rank();
        if r1 != r {
            return Err(PathMatchError::RankDeficientMatroid { side: 1, rank: r1, expected: r });
        }
        let r2 = q2.rank();
        if r2 != r {
            return Err(PathMatchError::RankDeficientMatroid { side: 2, rank: r2, expected: r });
        }
        let n = 2 * t + s;
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(PathMatchError::InvalidEdge(u, v, "endpoint out of range".into()));
            }
            if u == v {
                return Err(PathMatchError::InvalidEdge(u, v, "self-loop".into()));
            }
            let (a, b) = norm(u, v);
            if b < t {
                return Err(PathMatchError::InvalidEdge(u, v, "both endpoints in T1".into()));
            }
            if a >= t && b < 2 * t {
                return Err(PathMatchError::InvalidEdge(u, v, "both endpoints in T2".into()));
            }
            list.push((a, b));
        }
        list.sort_unstable();
        list.dedup();
        Ok(PathMatchingInstance { t, s, q1, q2, edges: list })
    }

    /// The perfect-matching instance of a graph: `T1 = T2 = ∅`, `S = V`.
    pub fn matching(graph: &Graph, field: PrimeField) -> Self {
        PathMatchingInstance {
            t: 0,
            s: graph.vertex_count(),
            q1: Matrix::zeros(field, 0, 0),
            q2: Matrix::zeros(field, 0, 0),
            edges: graph.edges().to_vec(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.q1.field()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.q1.rows()
    }

    /// Total number of vertices `2t + s`.
    pub fn vertex_count(&self) -> usize {
        2 * self.t + self.s
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

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&norm(u, v)).is_ok()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        if v < self.t {
            VertexKind::T1(v)
        } else if v < 2 * self.t {
            VertexKind::T2(v - self.t)
        } else {
            VertexKind::S(v - 2 * self.t)
        }
    }

    pub fn t1_vertex(&self, i: usize) -> usize {
        i
    }

    pub fn t2_vertex(&self, i: usize) -> usize {
        self.t + i
    }

    pub fn s_vertex(&self, i: usize) -> usize {
        2 * self.t + i
    }

    /// Whether `v` indexes a row of `X` (it lies in `T1 ∪ S`).
    pub fn has_row(&self, v: usize) -> bool {
        !matches!(self.kind(v), VertexKind::T2(_))
    }

    /// Whether `v` indexes a column of `X` (it lies in `T2 ∪ S`).
    pub fn has_col(&self, v: usize) -> bool {
        !matches!(self.kind(v), VertexKind::T1(_))
    }
}

/// The randomly substituted matrix `Z` of an instance (with nothing matched
/// yet), together with the vertex ↔ index maps of its `X` block.
///
/// Rows are laid out as `[Q1 rows (r)] [T2 (t)] [T1 (t)] [S (s)]` and columns
/// as `[Q2 columns (r)] [T1 (t)] [T2 (t)] [S (s)]`: the `T2` rows carry `Q2`
/// and `D2`, the `T1` columns carry `Q1` and `D1`, and `X` occupies rows
/// `T1 ∪ S` and columns `T2 ∪ S`.
#[derive(Debug, Clone)]
pub struct ZMatrix {
    pub z: Matrix,
    /// Z row of each global vertex that indexes a row of `X`.
    pub row_of: Vec<Option<usize>>,
    /// Z column of each global vertex that indexes a column of `X`.
    pub col_of: Vec<Option<usize>>,
    pub seed: u64,
}

impl ZMatrix {
    /// `N`: the transpose of the `X`-block of `Z^{-1}`, embedded in a
    /// `V × V` matrix (rows of `T2` and columns of `T1` are zero).
    pub fn tracked_inverse(&self) -> Result<Matrix, LinalgError> {
        let zinv = self.z.invert()?;
        let n = self.row_of.len();
        let f = self.z.field();
        let mut out = Matrix::zeros(f, n, n);
        for a in 0..n {
            let Some(ra) = self.row_of[a] else { continue };
            for b in 0..n {
                if let Some(cb) = self.col_of[b] {
                    out.set(a, b, zinv.get(cb, ra));
                }
            }
        }
        Ok(out)
    }
}

/// Assembles `Z` with independent uniform values for the edge variables
/// (negated across the skew pair for `S`–`S` edges) and independent uniform
/// nonzero values on the diagonals of `D1`, `D2`. Deterministic in `seed`.
pub fn build_z(inst: &PathMatchingInstance, seed: u64) -> ZMatrix {
    let f = inst.field();
    let (r, t, s) = (inst.r(), inst.t(), inst.s());
    let n = inst.vertex_count();
    let dim = r + 2 * t + s;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = Matrix::zeros(f, dim, dim);

    let mut row_of = vec![None; n];
    let mut col_of = vec![None; n];
    for i in 0..t {
        row_of[inst.t1_vertex(i)] = Some(r + t + i);
        col_of[inst.t2_vertex(i)] = Some(r + t + i);
    }
    for k in 0..s {
        row_of[inst.s_vertex(k)] = Some(r + 2 * t + k);
        col_of[inst.s_vertex(k)] = Some(r + 2 * t + k);
    }

    for i in 0..r {
        for j in 0..t {
            z.set(i, r + j, inst.q1().get(i, j));
        }
    }
    for j in 0..t {
        for i in 0..r {
            z.set(r + j, i, inst.q2().get(j, i));
        }
    }

    for &(a, b) in inst.edges() {
        let x = f.sample(&mut rng);
        match (inst.kind(a), inst.kind(b)) {
            (VertexKind::S(_), VertexKind::S(_)) => {
                z.set(row_of[a].unwrap(), col_of[b].unwrap(), x);
                z.set(row_of[b].unwrap(), col_of[a].unwrap(), f.neg(x));
            }
            (VertexKind::T2(_), VertexKind::S(_)) => {
                z.set(row_of[b].unwrap(), col_of[a].unwrap(), x);
            }
            _ => {
                // T1–T2 and T1–S: a is the T1 endpoint.
                z.set(row_of[a].unwrap(), col_of[b].unwrap(), x);
            }
        }
    }
    for i in 0..t {
        z.set(r + t + i, r + i, f.sample_nonzero(&mut rng));
    }
    for j in 0..t {
        z.set(r + j, r + t + j, f.sample_nonzero(&mut rng));
    }
    ZMatrix { z, row_of, col_of, seed }
}

/// Whether the instance has a basic path-matching, decided by the
/// nonsingularity of a random substitution of `Z`. A `true` answer is always
/// correct; `false` is wrong with probability at most `n / p`.
pub fn bpm_exists(inst: &PathMatchingInstance, seed: u64) -> bool {
    build_z(inst, seed).z.is_nonsingular()
}

/// Entry of the substituted `X` for the edge `{a, b}`, oriented as row `a`,
/// column `b`; zero when no such entry exists.
#[cfg(test)]
pub(crate) fn x_entry(zm: &ZMatrix, a: usize, b: usize) -> crate::field::Scalar {
    match (zm.row_of[a], zm.col_of[b]) {
        (Some(r), Some(c)) => zm.z.get(r, c),
        _ => crate::field::Scalar::ZERO,
    }
}
