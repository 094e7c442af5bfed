//! Divide-and-conquer search for a basic path-matching.
//!
//! The solver keeps `N`, the transpose of the `X`-block of `Z(M)^{-1}`, as a
//! `V × V` matrix. Its rows are the vertices of `T1 ∪ S`, its columns those of
//! `T2 ∪ S`; a row (column) dies once the vertex stops being a row (column)
//! of `X` in the contracted instance. Vertices are split into `α` parts and
//! every pair of parts is solved recursively; each part splits into `α/2`
//! sub-parts per level, down to single-vertex parts whose pairs are tested
//! for being allowed edges. Accepted edges are recorded in an
//! [`UpdateLedger`] and only the parts of `N` the recursion looks at next are
//! brought up to date.

use std::collections::HashSet;

use super::instance::{build_z, ZMatrix};
use super::{norm, verify_bpm, PathMatchError, PathMatchingInstance};
use crate::field::{count_muls, PrimeField};
use crate::linalg::{LinalgError, Matrix};
use crate::updates::{Region, UpdateLedger};

/// How accepted updates reach `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// Recorded in the ledger and flushed region by region.
    #[default]
    Lazy,
    /// Applied to all of `N` as soon as they are accepted.
    Eager,
    /// Lazy, with every flushed region compared against an eager copy.
    Audit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Number of parts per level; must be even and at least 4.
    pub alpha: usize,
    /// Extra randomized attempts after a failed verification.
    pub retries: u32,
    pub mode: UpdateMode,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { alpha: 4, retries: 3, mode: UpdateMode::Lazy, seed: 0 }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig { seed, ..Self::default() }
    }

    pub(crate) fn check(&self) -> Result<(), PathMatchError> {
        if self.alpha < 4 || self.alpha % 2 != 0 {
            return Err(PathMatchError::BadAlpha(self.alpha));
        }
        Ok(())
    }

    /// Seed used by the given attempt (attempt 0 uses `seed` itself).
    pub fn attempt_seed(&self, attempt: u32) -> u64 {
        self.seed ^ u64::from(attempt).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub attempts: u32,
    /// Full sweeps of the recursion in the last attempt.
    pub passes: usize,
    pub subproblems: usize,
    pub leaves: usize,
    pub flushes: usize,
    /// Field multiplications over all attempts.
    pub field_muls: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpmSolution {
    /// Edges in global vertex numbering, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Seed of the substitution that produced the edges.
    pub seed: u64,
    pub stats: SolveStats,
}

/// Finds a basic path-matching, re-randomizing when the result fails
/// deterministic verification.
///
/// A singular substitution is reported as [`PathMatchError::NoBpm`]; this is
/// wrong with probability at most `n / p`.
pub fn solve_bpm(
    inst: &PathMatchingInstance,
    config: &SolverConfig,
) -> Result<BpmSolution, PathMatchError> {
    config.check()?;
    let mut total = SolveStats::default();
    for attempt in 0..=config.retries {
        let seed = config.attempt_seed(attempt);
        let zm = build_z(inst, seed);
        let (res, muls) = count_muls(|| solve_bpm_with_z(inst, &zm, config));
        total.field_muls += muls;
        total.attempts = attempt + 1;
        let sol = res?;
        if verify_bpm(inst, &sol.edges).is_ok() {
            let stats = SolveStats { attempts: total.attempts, field_muls: total.field_muls, ..sol.stats };
            return Ok(BpmSolution { edges: sol.edges, seed, stats });
        }
    }
    Err(PathMatchError::RandomnessExhausted { attempts: config.retries + 1 })
}

/// Runs the greedy recursion once on a given substitution `zm` of `inst`.
///
/// The result is not verified. Fails with [`PathMatchError::NoBpm`] if `Z`
/// is singular.
pub fn solve_bpm_with_z(
    inst: &PathMatchingInstance,
    zm: &ZMatrix,
    config: &SolverConfig,
) -> Result<BpmSolution, PathMatchError> {
    config.check()?;
    let n_mat = match zm.tracked_inverse() {
        Ok(m) => m,
        Err(LinalgError::Singular) => return Err(PathMatchError::NoBpm),
        Err(e) => return Err(e.into()),
    };
    let mut sweep = Sweep::new(inst, n_mat, config);
    loop {
        let accepted = sweep.pass()?;
        sweep.stats.passes += 1;
        if accepted == 0 || sweep.complete() {
            break;
        }
    }
    let mut edges = sweep.edges;
    edges.sort_unstable();
    Ok(BpmSolution { edges, seed: zm.seed, stats: sweep.stats })
}

struct Sweep<'a> {
    inst: &'a PathMatchingInstance,
    f: PrimeField,
    n: usize,
    n_pad: usize,
    alpha: usize,
    mat: Matrix,
    ledger: Option<UpdateLedger>,
    /// Static: vertex indexes a row (column) of `X` at all.
    has_row: Vec<bool>,
    has_col: Vec<bool>,
    row_live: Vec<bool>,
    col_live: Vec<bool>,
    /// 2-D prefix sums of the adjacency matrix over padded positions.
    adj_prefix: Vec<u32>,
    entered: HashSet<(usize, usize, usize)>,
    edges: Vec<(usize, usize)>,
    stats: SolveStats,
}

impl<'a> Sweep<'a> {
    fn new(inst: &'a PathMatchingInstance, mat: Matrix, config: &SolverConfig) -> Self {
        let n = inst.vertex_count();
        let alpha = config.alpha;
        let mut n_pad = alpha;
        while n_pad < n {
            n_pad *= alpha / 2;
        }
        let has_row: Vec<bool> = (0..n).map(|v| inst.has_row(v)).collect();
        let has_col: Vec<bool> = (0..n).map(|v| inst.has_col(v)).collect();
        let w = n_pad + 1;
        let mut adj_prefix = vec![0u32; w * w];
        for &(u, v) in inst.edges() {
            adj_prefix[(u + 1) * w + v + 1] += 1;
            adj_prefix[(v + 1) * w + u + 1] += 1;
        }
        for i in 1..w {
            for j in 1..w {
                adj_prefix[i * w + j] += adj_prefix[(i - 1) * w + j] + adj_prefix[i * w + j - 1]
                    - adj_prefix[(i - 1) * w + j - 1];
            }
        }
        let ledger = match config.mode {
            UpdateMode::Lazy => Some(UpdateLedger::new(mat.field(), n)),
            UpdateMode::Audit => Some(UpdateLedger::with_audit(&mat)),
            UpdateMode::Eager => None,
        };
        Sweep {
            inst,
            f: mat.field(),
            n,
            n_pad,
            alpha,
            mat,
            ledger,
            row_live: has_row.clone(),
            col_live: has_col.clone(),
            has_row,
            has_col,
            adj_prefix,
            entered: HashSet::new(),
            edges: Vec::new(),
            stats: SolveStats::default(),
        }
    }

    /// Whether the accepted edges already form a complete candidate.
    fn complete(&self) -> bool {
        let inst = self.inst;
        let r = inst.r();
        let s_done = (0..inst.s()).all(|k| {
            let v = inst.s_vertex(k);
            !self.row_live[v] && !self.col_live[v]
        });
        let t1 = (0..inst.t()).filter(|&i| !self.row_live[inst.t1_vertex(i)]).count();
        let t2 = (0..inst.t()).filter(|&i| !self.col_live[inst.t2_vertex(i)]).count();
        s_done && t1 == r && t2 == r
    }

    /// One sweep over all subproblems; returns the number of accepted edges.
    ///
    /// An `S`–`S` edge is tested as a matching edge while both ends are
    /// inner vertices, and as a path edge once one end has become a path
    /// end, so a rejected pair can become allowed later. Callers repeat the
    /// sweep until nothing more is accepted.
    fn pass(&mut self) -> Result<usize, PathMatchError> {
        if self.n < 2 {
            return Ok(0);
        }
        self.entered.clear();
        let before = self.edges.len();
        let parts: Vec<usize> = (0..self.alpha).collect();
        let all: Vec<usize> = (0..self.n).collect();
        self.run_children(1, &parts, &all)?;
        Ok(self.edges.len() - before)
    }

    fn part_size(&self, level: usize) -> usize {
        let mut size = self.n_pad / self.alpha;
        for _ in 1..level {
            size /= self.alpha / 2;
        }
        size
    }

    fn span(&self, level: usize, part: usize) -> (usize, usize) {
        let sz = self.part_size(level);
        ((part * sz).min(self.n), ((part + 1) * sz).min(self.n))
    }

    fn adj_count(&self, (r0, r1): (usize, usize), (c0, c1): (usize, usize)) -> u32 {
        let w = self.n_pad + 1;
        let p = &self.adj_prefix;
        p[r1 * w + c1] + p[r0 * w + c0] - p[r0 * w + c1] - p[r1 * w + c0]
    }

    fn worth_entering(&self, level: usize, c: usize, d: usize) -> bool {
        if self.entered.contains(&(level, c, d)) {
            return false;
        }
        let (a, b) = (self.span(level, c), self.span(level, d));
        if (a.1 - a.0) + (b.1 - b.0) < 2 {
            return false;
        }
        if self.adj_count(a, a) + self.adj_count(a, b) + self.adj_count(b, b) == 0 {
            return false;
        }
        let active = (a.0..a.1)
            .chain(b.0..b.1)
            .filter(|&v| self.row_live[v] || self.col_live[v])
            .take(2)
            .count();
        active == 2
    }

    fn run_children(
        &mut self,
        level: usize,
        subparts: &[usize],
        whole: &[usize],
    ) -> Result<(), PathMatchError> {
        for x in 0..subparts.len() {
            for y in x + 1..subparts.len() {
                let (c, d) = (subparts[x], subparts[y]);
                if !self.worth_entering(level, c, d) {
                    continue;
                }
                let before = self.ledger.as_ref().map_or(0, |l| l.len());
                self.node(level, c, d)?;
                let after = self.ledger.as_ref().map_or(0, |l| l.len());
                if after > before {
                    let (a, b) = (self.span(level, c), self.span(level, d));
                    let inside = |v: &usize| (a.0..a.1).contains(v) || (b.0..b.1).contains(v);
                    let (child, rest): (Vec<usize>, Vec<usize>) = whole.iter().copied().partition(|v| inside(v));
                    self.restore_clean(&child, &rest)?;
                }
            }
        }
        Ok(())
    }

    /// After a child on `child` finished, brings the rest of the parent's
    /// region up to date: rows of `rest` against the child, the child
    /// against `rest`, then `rest` against itself.
    fn restore_clean(&mut self, child: &[usize], rest: &[usize]) -> Result<(), PathMatchError> {
        if rest.is_empty() {
            return Ok(());
        }
        let rows = |vs: &[usize]| vs.iter().copied().filter(|&v| self.has_row[v]).collect::<Vec<_>>();
        let cols = |vs: &[usize]| vs.iter().copied().filter(|&v| self.has_col[v]).collect::<Vec<_>>();
        let regions = [
            Region::new(rows(rest), cols(child)),
            Region::new(rows(child), cols(rest)),
            Region::new(rows(rest), cols(rest)),
        ];
        let ledger = self.ledger.as_mut().expect("lazy mode");
        for region in &regions {
            ledger.flush(&mut self.mat, region)?;
            self.stats.flushes += 1;
        }
        Ok(())
    }

    fn node(&mut self, level: usize, c: usize, d: usize) -> Result<(), PathMatchError> {
        self.entered.insert((level, c, d));
        self.stats.subproblems += 1;
        if self.part_size(level) == 1 {
            return self.leaf(c, d);
        }
        let h = self.alpha / 2;
        let sub: Vec<usize> = (c * h..c * h + h).chain(d * h..d * h + h).collect();
        let (a, b) = (self.span(level, c), self.span(level, d));
        let whole: Vec<usize> = (a.0..a.1).chain(b.0..b.1).collect();
        self.run_children(level + 1, &sub, &whole)
    }

    fn leaf(&mut self, i: usize, j: usize) -> Result<(), PathMatchError> {
        if j >= self.n || !self.inst.has_edge(i, j) {
            return Ok(());
        }
        self.stats.leaves += 1;
        let f = self.f;
        let both = |v: usize| self.row_live[v] && self.col_live[v];
        let (cols, rows, block) = if both(i) && both(j) {
            // Two inner vertices: the edge would join the matching.
            let g = |a, b| self.mat.get(a, b);
            let det = f.sub(f.mul(g(i, i), g(j, j)), f.mul(g(i, j), g(j, i)));
            if det.is_zero() {
                return Ok(());
            }
            let inv = f.inv(det).expect("nonzero");
            let block = Matrix::from_fn(f, 2, 2, |r, c| match (r, c) {
                (0, 0) => f.mul(inv, g(j, j)),
                (0, 1) => f.neg(f.mul(inv, g(i, j))),
                (1, 0) => f.neg(f.mul(inv, g(j, i))),
                _ => f.mul(inv, g(i, i)),
            });
            (vec![i, j], vec![i, j], block)
        } else {
            let (a, b) = if self.row_live[i] && self.col_live[j] {
                (i, j)
            } else if self.row_live[j] && self.col_live[i] {
                (j, i)
            } else {
                return Ok(());
            };
            let x = self.mat.get(a, b);
            if x.is_zero() {
                return Ok(());
            }
            let block = Matrix::from_fn(f, 1, 1, |_, _| f.inv(x).expect("nonzero"));
            (vec![b], vec![a], block)
        };
        self.apply(&cols, &block, &rows, i, j)?;
        for &r in &rows {
            self.row_live[r] = false;
        }
        for &c in &cols {
            self.col_live[c] = false;
        }
        self.edges.push(norm(i, j));
        Ok(())
    }

    fn apply(
        &mut self,
        cols: &[usize],
        block: &Matrix,
        rows: &[usize],
        i: usize,
        j: usize,
    ) -> Result<(), PathMatchError> {
        match self.ledger.as_mut() {
            None => {
                let corr = self.mat.select_cols(cols).mul(block)?.mul(&self.mat.select_rows(rows))?;
                self.mat.sub_assign(&corr)?;
            }
            Some(ledger) => {
                let pick = |keep: &[bool]| [i, j].into_iter().filter(|&v| keep[v]).collect::<Vec<_>>();
                let region = Region::new(pick(&self.has_row), pick(&self.has_col));
                ledger.record(&self.mat, cols, block, rows, &region)?;
                ledger.flush(&mut self.mat, &region)?;
                self.stats.flushes += 1;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn matching(g: &Graph) -> PathMatchingInstance {
        PathMatchingInstance::matching(g, field())
    }

    #[test]
    fn single_edge() {
        let inst = matching(&Graph::new(2, [(0, 1)]));
        let sol = solve_bpm(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(sol.edges, vec![(0, 1)]);
    }

    #[test]
    fn four_cycle_is_deterministic() {
        let inst = matching(&Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]));
        let cfg = SolverConfig::with_seed(5);
        let a = solve_bpm(&inst, &cfg).unwrap();
        let b = solve_bpm(&inst, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges.len(), 2);
        assert!(Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).is_matching(&a.edges));
    }

    #[test]
    fn path_of_four_uses_outer_edges() {
        let inst = matching(&Graph::new(4, [(0, 1), (1, 2), (2, 3)]));
        let sol = solve_bpm(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(sol.edges, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn terminal_path_instance() {
        let one = Matrix::identity(field(), 1);
        let inst = PathMatchingInstance::new(one.clone(), one, 2, [(0, 2), (2, 3), (3, 1)]).unwrap();
        let sol = solve_bpm(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(sol.edges, vec![(0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn odd_graph_has_no_solution() {
        let inst = matching(&Graph::new(3, [(0, 1), (1, 2), (0, 2)]));
        assert_eq!(solve_bpm(&inst, &SolverConfig::default()), Err(PathMatchError::NoBpm));
    }

    #[test]
    fn rejected_inner_edge_is_retested_as_path_edge() {
        // Two T1-T2 paths; the middle edge s4-s5 of the first is first seen
        // while both ends are inner vertices.
        let f = field();
        let eye = Matrix::identity(f, 2);
        let edges = [(0, 6), (6, 4), (4, 5), (5, 2), (1, 7), (7, 3)];
        let inst = PathMatchingInstance::new(eye.clone(), eye, 4, edges).unwrap();
        for mode in [UpdateMode::Lazy, UpdateMode::Eager, UpdateMode::Audit] {
            let cfg = SolverConfig { mode, ..SolverConfig::default() };
            let sol = solve_bpm(&inst, &cfg).unwrap();
            assert_eq!(sol.edges.len(), 6);
            assert!(sol.stats.passes >= 2);
        }
    }

    #[test]
    fn modes_agree_on_a_random_graph() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 22;
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.3) {
                    e.push((u, v));
                }
            }
        }
        // Guarantee a perfect matching.
        e.extend((0..n / 2).map(|k| (2 * k, 2 * k + 1)));
        let inst = matching(&Graph::new(n, e));
        for alpha in [4, 6] {
            let run = |mode| {
                let cfg = SolverConfig { mode, alpha, ..SolverConfig::with_seed(11) };
                solve_bpm(&inst, &cfg).unwrap().edges
            };
            let lazy = run(UpdateMode::Lazy);
            assert_eq!(lazy.len(), n / 2);
            assert_eq!(lazy, run(UpdateMode::Eager));
            assert_eq!(lazy, run(UpdateMode::Audit));
        }
    }

    #[test]
    fn bad_alpha() {
        let inst = matching(&Graph::new(2, [(0, 1)]));
        let cfg = SolverConfig { alpha: 5, ..SolverConfig::default() };
        assert_eq!(solve_bpm(&inst, &cfg), Err(PathMatchError::BadAlpha(5)));
    }
}
