//! Lazily applied low-rank updates to a tracked inverse.
//!
//! Every update has the form `N ← N − N[*, cols] · B · N[rows, *]` with `B`
//! a 1×1 or 2×2 block. Instead of touching all of `N`, the ledger stores the
//! update parameters in three `n × n` matrices: column `c` of `U` holds the
//! `u`-vector taken from column `c` of `N`, row `r` of `V` holds the
//! `v`-vector taken from row `r`, and `C[cols, rows] = B`. Regions of `N` are
//! brought up to date on request with [`UpdateLedger::flush`].
//!
//! Parameters are themselves only known where they have been computed. Each
//! entry of `N` carries the number of updates already applied to it, and each
//! `U`/`V` entry a known bit; a flush that would need an unknown parameter
//! that cannot be derived from its own region fails with
//! [`LedgerError::DirtyParameters`] instead of producing wrong numbers.

use std::ops::Range;

use thiserror::Error;

use crate::field::{PrimeField, Scalar};
use crate::linalg::{sequential_update, unfurl_rank2, LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("index {0} is already used by a recorded update")]
    IndexReuse(usize),
    #[error("update block must be 1x1 or 2x2 and match its index lists")]
    BadBlock,
    #[error("dirty parameters: {0}")]
    DirtyParameters(String),
    #[error("flushed entry ({0}, {1}) disagrees with eager replay")]
    AuditMismatch(usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A rectangular index region `rows × cols` of the tracked matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Region {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        Region { rows, cols }
    }

    pub fn square(idx: Vec<usize>) -> Self {
        Region { rows: idx.clone(), cols: idx }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty() || self.cols.is_empty()
    }
}

#[derive(Debug, Clone)]
struct Update {
    cols: Vec<usize>,
    rows: Vec<usize>,
    block: [[Scalar; 2]; 2],
    /// Offset of this update in the flattened `pi_c`/`pi_r` lists.
    start: usize,
}

impl Update {
    fn arity(&self) -> usize {
        self.cols.len()
    }

    /// Rank-1 terms `(local u position, scalar, local v position)`, with
    /// zero-scalar terms dropped.
    fn terms(&self) -> Vec<(usize, Scalar, usize)> {
        let raw: Vec<(usize, Scalar, usize)> = if self.arity() == 1 {
            vec![(0, self.block[0][0], 0)]
        } else {
            unfurl_rank2(0, 1, self.block, 0, 1).to_vec()
        };
        raw.into_iter().filter(|t| !t.1.is_zero()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct UpdateLedger {
    field: PrimeField,
    n: usize,
    u: Matrix,
    c: Matrix,
    v: Matrix,
    pi_c: Vec<usize>,
    pi_r: Vec<usize>,
    updates: Vec<Update>,
    col_owner: Vec<Option<usize>>,
    row_owner: Vec<Option<usize>>,
    u_known: Vec<bool>,
    v_known: Vec<bool>,
    applied: Vec<u32>,
    shadow: Option<Matrix>,
}

impl UpdateLedger {
    /// An empty ledger for an `n × n` tracked matrix.
    pub fn new(field: PrimeField, n: usize) -> Self {
        UpdateLedger {
            field,
            n,
            u: Matrix::zeros(field, n, n),
            c: Matrix::zeros(field, n, n),
            v: Matrix::zeros(field, n, n),
            pi_c: Vec::new(),
            pi_r: Vec::new(),
            updates: Vec::new(),
            col_owner: vec![None; n],
            row_owner: vec![None; n],
            u_known: vec![false; n * n],
            v_known: vec![false; n * n],
            applied: vec![0; n * n],
            shadow: None,
        }
    }

    /// Like [`new`](Self::new), but also keeps an eagerly updated copy of
    /// `initial` and checks every flushed region against it.
    pub fn with_audit(initial: &Matrix) -> Self {
        assert!(initial.is_square());
        let mut ledger = Self::new(initial.field(), initial.rows());
        ledger.shadow = Some(initial.clone());
        ledger
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of recorded updates.
    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    /// Column indices of all recorded updates, in recording order.
    pub fn pi_c(&self) -> &[usize] {
        &self.pi_c
    }

    /// Row indices of all recorded updates, in recording order.
    pub fn pi_r(&self) -> &[usize] {
        &self.pi_r
    }

    /// Arity (1 or 2) of each recorded update.
    pub fn arities(&self) -> Vec<usize> {
        self.updates.iter().map(Update::arity).collect()
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// The eagerly maintained copy, when auditing.
    pub fn shadow(&self) -> Option<&Matrix> {
        self.shadow.as_ref()
    }

    /// How many recorded updates have been applied to entry `(i, j)`.
    pub fn applied(&self, i: usize, j: usize) -> usize {
        self.applied[i * self.n + j] as usize
    }

    /// Whether every entry of `region` has all recorded updates applied.
    pub fn is_clean(&self, region: &Region) -> bool {
        let k = self.len();
        region.rows.iter().all(|&i| region.cols.iter().all(|&j| self.applied(i, j) == k))
    }

    /// Records the update `N ← N − N[*, cols] · block · N[rows, *]`.
    ///
    /// `N` is not modified. The parameters inside `capture` are copied from
    /// `n` (rows `capture.rows` of the new `U` columns and columns
    /// `capture.cols` of the new `V` rows), so those parts of `n` must be
    /// clean.
    pub fn record(
        &mut self,
        n: &Matrix,
        cols: &[usize],
        block: &Matrix,
        rows: &[usize],
        capture: &Region,
    ) -> Result<(), LedgerError> {
        let k = cols.len();
        if !(k == 1 || k == 2) || rows.len() != k || block.rows() != k || block.cols() != k {
            return Err(LedgerError::BadBlock);
        }
        if k == 2 && (cols[0] == cols[1] || rows[0] == rows[1]) {
            return Err(LedgerError::BadBlock);
        }
        for &c in cols {
            if self.col_owner[c].is_some() {
                return Err(LedgerError::IndexReuse(c));
            }
        }
        for &r in rows {
            if self.row_owner[r].is_some() {
                return Err(LedgerError::IndexReuse(r));
            }
        }
        let now = self.len();
        for &i in &capture.rows {
            for &c in cols {
                if self.applied(i, c) != now {
                    return Err(LedgerError::DirtyParameters(format!(
                        "capture entry ({i}, {c}) is not clean"
                    )));
                }
            }
        }
        for &r in rows {
            for &j in &capture.cols {
                if self.applied(r, j) != now {
                    return Err(LedgerError::DirtyParameters(format!(
                        "capture entry ({r}, {j}) is not clean"
                    )));
                }
            }
        }

        let nn = self.n;
        for &i in &capture.rows {
            for &c in cols {
                self.u.set(i, c, n.get(i, c));
                self.u_known[i * nn + c] = true;
            }
        }
        for &r in rows {
            for &j in &capture.cols {
                self.v.set(r, j, n.get(r, j));
                self.v_known[r * nn + j] = true;
            }
        }
        let mut b = [[Scalar::ZERO; 2]; 2];
        for (a, &c) in cols.iter().enumerate() {
            for (bb, &r) in rows.iter().enumerate() {
                b[a][bb] = block.get(a, bb);
                self.c.set(c, r, block.get(a, bb));
            }
        }
        for &c in cols {
            self.col_owner[c] = Some(now);
        }
        for &r in rows {
            self.row_owner[r] = Some(now);
        }
        let start = self.pi_c.len();
        self.pi_c.extend_from_slice(cols);
        self.pi_r.extend_from_slice(rows);
        self.updates.push(Update { cols: cols.to_vec(), rows: rows.to_vec(), block: b, start });

        if let Some(sh) = self.shadow.take() {
            let corr = sh.select_cols(cols).mul(block)?.mul(&sh.select_rows(rows))?;
            self.shadow = Some(sh.sub(&corr)?);
        }
        Ok(())
    }

    /// Brings `target` of `n` up to date with every recorded update.
    ///
    /// All entries of `target` must currently carry the same number of
    /// applied updates. Parameters the region needs and that are not yet
    /// known are derived from the region itself through the sequential
    /// update identity, which requires the pending updates' own columns
    /// (for `U`) and rows (for `V`) to lie inside the region.
    pub fn flush(&mut self, n: &mut Matrix, target: &Region) -> Result<(), LedgerError> {
        if target.is_empty() {
            return Ok(());
        }
        let k0 = self.applied(target.rows[0], target.cols[0]);
        for &i in &target.rows {
            for &j in &target.cols {
                if self.applied(i, j) != k0 {
                    return Err(LedgerError::DirtyParameters(format!(
                        "region is not uniformly updated at ({i}, {j})"
                    )));
                }
            }
        }
        let k1 = self.len();
        if k0 < k1 {
            let u_r = self.compute_u(n, &target.rows, k0..k1)?;
            let v_c = self.compute_v(n, &target.cols, k0..k1)?;
            let cflat = self.flat_block(k0..k1);
            let corr = u_r.mul(&cflat.mul(&v_c)?)?;
            let f = self.field;
            for (a, &i) in target.rows.iter().enumerate() {
                for (b, &j) in target.cols.iter().enumerate() {
                    n.set(i, j, f.sub(n.get(i, j), corr.get(a, b)));
                    self.applied[i * self.n + j] = k1 as u32;
                }
            }
        }
        if let Some(sh) = &self.shadow {
            for &i in &target.rows {
                for &j in &target.cols {
                    if sh.get(i, j) != n.get(i, j) {
                        return Err(LedgerError::AuditMismatch(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    /// Block-diagonal `C` restricted to the flattened positions of `upds`.
    fn flat_block(&self, upds: Range<usize>) -> Matrix {
        let (p0, p1) = self.positions(&upds);
        let mut cm = Matrix::zeros(self.field, p1 - p0, p1 - p0);
        for m in upds {
            let up = &self.updates[m];
            for (a, c, b) in up.terms() {
                cm.set(up.start + a - p0, up.start + b - p0, c);
            }
        }
        cm
    }

    fn positions(&self, upds: &Range<usize>) -> (usize, usize) {
        if upds.is_empty() {
            return (0, 0);
        }
        let first = &self.updates[upds.start];
        let last = &self.updates[upds.end - 1];
        (first.start, last.start + last.arity())
    }

    /// Update index owning each flattened position in `upds`.
    fn owners(&self, upds: &Range<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        for m in upds.clone() {
            out.extend(std::iter::repeat(m).take(self.updates[m].arity()));
        }
        out
    }

    /// `U[rows, pi_c[upds]]`, computing and storing unknown entries.
    ///
    /// Unknown entries are derived from `N[rows, pi_c]`, which must then
    /// carry exactly `upds.start` applied updates.
    fn compute_u(
        &mut self,
        n: &Matrix,
        rows: &[usize],
        upds: Range<usize>,
    ) -> Result<Matrix, LedgerError> {
        let (p0, p1) = self.positions(&upds);
        let cols: Vec<usize> = self.pi_c[p0..p1].to_vec();
        let owner = self.owners(&upds);
        let np = cols.len();
        let nn = self.n;
        let f = self.field;
        let mut out = Matrix::zeros(f, rows.len(), np);

        for (pattern, members) in group_by_pattern(rows, |r, q| self.u_known[r * nn + cols[q]], np) {
            let grows: Vec<usize> = members.iter().map(|&a| rows[a]).collect();
            let mut x = Matrix::zeros(f, grows.len(), np);
            for (gi, &r) in grows.iter().enumerate() {
                for q in 0..np {
                    let c = cols[q];
                    let val = if pattern[q] {
                        self.u.get(r, c)
                    } else {
                        if self.applied(r, c) != upds.start {
                            return Err(LedgerError::DirtyParameters(format!(
                                "U[{r}, {c}] needs N[{r}, {c}] at update {}",
                                upds.start
                            )));
                        }
                        n.get(r, c)
                    };
                    x.set(gi, q, val);
                }
            }
            let result = if pattern.iter().all(|&k| k) {
                x
            } else {
                let mut y = Matrix::zeros(f, np, np);
                for q in (0..np).filter(|&q| !pattern[q]) {
                    let c = cols[q];
                    for m in upds.start..owner[q] {
                        let up = &self.updates[m];
                        for (a, s, b) in up.terms() {
                            let vr = up.rows[b];
                            if !self.v_known[vr * nn + c] {
                                return Err(LedgerError::DirtyParameters(format!(
                                    "V[{vr}, {c}] is unknown"
                                )));
                            }
                            let pa = up.start + a - p0;
                            let delta = f.mul(s, self.v.get(vr, c));
                            y.set(pa, q, f.sub(y.get(pa, q), delta));
                        }
                    }
                }
                sequential_update(&x, &y)?
            };
            for (gi, &r) in grows.iter().enumerate() {
                for q in 0..np {
                    self.u.set(r, cols[q], result.get(gi, q));
                    self.u_known[r * nn + cols[q]] = true;
                    out.set(members[gi], q, result.get(gi, q));
                }
            }
        }
        Ok(out)
    }

    /// `V[pi_r[upds], cols]`, computing and storing unknown entries.
    fn compute_v(
        &mut self,
        n: &Matrix,
        cols: &[usize],
        upds: Range<usize>,
    ) -> Result<Matrix, LedgerError> {
        let (p0, p1) = self.positions(&upds);
        let prow: Vec<usize> = self.pi_r[p0..p1].to_vec();
        let owner = self.owners(&upds);
        let np = prow.len();
        let nn = self.n;
        let f = self.field;
        let mut out = Matrix::zeros(f, np, cols.len());

        for (pattern, members) in group_by_pattern(cols, |c, p| self.v_known[prow[p] * nn + c], np) {
            let gcols: Vec<usize> = members.iter().map(|&a| cols[a]).collect();
            // Work with Vᵀ so the sequential identity applies column-wise.
            let mut xt = Matrix::zeros(f, gcols.len(), np);
            for (gj, &c) in gcols.iter().enumerate() {
                for p in 0..np {
                    let r = prow[p];
                    let val = if pattern[p] {
                        self.v.get(r, c)
                    } else {
                        if self.applied(r, c) != upds.start {
                            return Err(LedgerError::DirtyParameters(format!(
                                "V[{r}, {c}] needs N[{r}, {c}] at update {}",
                                upds.start
                            )));
                        }
                        n.get(r, c)
                    };
                    xt.set(gj, p, val);
                }
            }
            let result = if pattern.iter().all(|&k| k) {
                xt
            } else {
                let mut y = Matrix::zeros(f, np, np);
                for p in (0..np).filter(|&p| !pattern[p]) {
                    let r = prow[p];
                    for m in upds.start..owner[p] {
                        let up = &self.updates[m];
                        for (a, s, b) in up.terms() {
                            let uc = up.cols[a];
                            if !self.u_known[r * nn + uc] {
                                return Err(LedgerError::DirtyParameters(format!(
                                    "U[{r}, {uc}] is unknown"
                                )));
                            }
                            let pb = up.start + b - p0;
                            let delta = f.mul(s, self.u.get(r, uc));
                            y.set(pb, p, f.sub(y.get(pb, p), delta));
                        }
                    }
                }
                sequential_update(&xt, &y)?
            };
            for (gj, &c) in gcols.iter().enumerate() {
                for p in 0..np {
                    self.v.set(prow[p], c, result.get(gj, p));
                    self.v_known[prow[p] * nn + c] = true;
                    out.set(p, members[gj], result.get(gj, p));
                }
            }
        }
        Ok(out)
    }
}

/// Groups `items` by their known-bit pattern over `width` positions,
/// preserving first-appearance order. Returns `(pattern, member positions)`.
fn group_by_pattern(
    items: &[usize],
    known: impl Fn(usize, usize) -> bool,
    width: usize,
) -> Vec<(Vec<bool>, Vec<usize>)> {
    let mut groups: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    for (a, &it) in items.iter().enumerate() {
        let pat: Vec<bool> = (0..width).map(|q| known(it, q)).collect();
        match groups.iter_mut().find(|g| g.0 == pat) {
            Some(g) => g.1.push(a),
            None => groups.push((pat, vec![a])),
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eliminate_block_inverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: PrimeField, n: usize, rng: &mut impl Rng) -> Matrix {
        Matrix::from_fn(f, n, n, |_, _| f.sample(rng))
    }

    /// Eager reference: apply `N − N[*,cols] B N[rows,*]` to the whole matrix.
    fn eager(n: &Matrix, cols: &[usize], block: &Matrix, rows: &[usize]) -> Matrix {
        let corr = n.select_cols(cols).mul(block).unwrap().mul(&n.select_rows(rows)).unwrap();
        n.sub(&corr).unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn empty_ledger_flush_is_identity() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut n = random_matrix(f, 5, &mut rng);
        let before = n.clone();
        let mut ledger = UpdateLedger::new(f, 5);
        ledger.flush(&mut n, &Region::square(all(5))).unwrap();
        assert_eq!(n, before);
    }

    #[test]
    fn single_record_extends_pi() {
        let f = PrimeField::default();
        let n = Matrix::identity(f, 4);
        let mut ledger = UpdateLedger::new(f, 4);
        let b = Matrix::identity(f, 1);
        ledger.record(&n, &[1], &b, &[2], &Region::default()).unwrap();
        assert_eq!(ledger.pi_c(), &[1]);
        assert_eq!(ledger.pi_r(), &[2]);
        assert_eq!(ledger.arities(), vec![1]);
        assert_eq!(ledger.c().get(1, 2), Scalar::ONE);
    }

    #[test]
    fn reusing_an_index_is_rejected() {
        let f = PrimeField::default();
        let n = Matrix::identity(f, 4);
        let mut ledger = UpdateLedger::new(f, 4);
        let b = Matrix::identity(f, 1);
        ledger.record(&n, &[1], &b, &[2], &Region::default()).unwrap();
        assert_eq!(
            ledger.record(&n, &[1], &b, &[3], &Region::default()),
            Err(LedgerError::IndexReuse(1))
        );
        assert_eq!(
            ledger.record(&n, &[0], &b, &[2], &Region::default()),
            Err(LedgerError::IndexReuse(2))
        );
    }

    #[test]
    fn rank1_flush_matches_pair_elimination() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let z = random_matrix(f, 6, &mut rng);
        let mut n = z.invert().unwrap();
        let (i, j) = (1, 4);
        let b = Matrix::from_fn(f, 1, 1, |_, _| f.inv(n.get(j, i)).unwrap());
        let mut ledger = UpdateLedger::new(f, 6);
        ledger.record(&n, &[i], &b, &[j], &Region::square(all(6))).unwrap();
        ledger.flush(&mut n, &Region::square(all(6))).unwrap();
        let expect = eliminate_block_inverse(&z.invert().unwrap(), &[i], &[j]).unwrap();
        let keep_r: Vec<usize> = all(6).into_iter().filter(|&r| r != j).collect();
        let keep_c: Vec<usize> = all(6).into_iter().filter(|&c| c != i).collect();
        assert_eq!(n.select(&keep_r, &keep_c), expect);
        assert!(n.select_cols(&[i]).is_zero());
        assert!(n.select_rows(&[j]).is_zero());
    }

    #[test]
    fn rank2_flush_matches_eager() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n0 = random_matrix(f, 6, &mut rng);
        let mut n = n0.clone();
        let block = n.select(&[0, 3], &[0, 3]).invert().unwrap();
        let mut ledger = UpdateLedger::new(f, 6);
        ledger.record(&n, &[0, 3], &block, &[0, 3], &Region::square(all(6))).unwrap();
        ledger.flush(&mut n, &Region::square(all(6))).unwrap();
        assert_eq!(n, eager(&n0, &[0, 3], &block, &[0, 3]));
    }

    #[test]
    fn three_interleaved_updates_on_sw_quadrant() {
        // Updates live in the top-left quadrant; flushing the south-west
        // quadrant must derive U for its rows from the region itself.
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n0 = random_matrix(f, 8, &mut rng);
        let top: Vec<usize> = (0..4).collect();
        let bottom: Vec<usize> = (4..8).collect();
        let mut n = n0.clone();
        let mut reference = n0.clone();
        let mut ledger = UpdateLedger::with_audit(&n0);
        for (c, r) in [(0, 1), (2, 3), (3, 0)] {
            let b = Matrix::from_fn(f, 1, 1, |_, _| f.sample_nonzero(&mut rng));
            ledger.record(&n, &[c], &b, &[r], &Region::square(top.clone())).unwrap();
            ledger.flush(&mut n, &Region::square(top.clone())).unwrap();
            reference = eager(&reference, &[c], &b, &[r]);
        }
        ledger.flush(&mut n, &Region::new(bottom.clone(), top.clone())).unwrap();
        assert_eq!(n.select(&bottom, &top), reference.select(&bottom, &top));
        ledger.flush(&mut n, &Region::new(top.clone(), bottom.clone())).unwrap();
        ledger.flush(&mut n, &Region::square(bottom.clone())).unwrap();
        assert_eq!(n, reference);
    }

    #[test]
    fn reflush_is_identity() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n0 = random_matrix(f, 4, &mut rng);
        let mut n = n0.clone();
        let mut ledger = UpdateLedger::new(f, 4);
        let b = Matrix::identity(f, 1);
        ledger.record(&n, &[0], &b, &[1], &Region::square(all(4))).unwrap();
        ledger.flush(&mut n, &Region::square(all(4))).unwrap();
        let once = n.clone();
        ledger.flush(&mut n, &Region::square(all(4))).unwrap();
        assert_eq!(n, once);
    }

    #[test]
    fn flushing_without_derivable_parameters_fails() {
        // The second update's u-vector depends on V[1, 2], which was neither
        // captured nor derived, so no region can be brought past it.
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n0 = random_matrix(f, 4, &mut rng);
        let mut n = n0.clone();
        let mut ledger = UpdateLedger::new(f, 4);
        let b = Matrix::identity(f, 1);
        ledger.record(&n, &[0], &b, &[1], &Region::square(vec![0, 1])).unwrap();
        ledger.record(&n, &[2], &b, &[3], &Region::default()).unwrap();
        let err = ledger.flush(&mut n, &Region::new(vec![0], vec![0])).unwrap_err();
        assert!(matches!(err, LedgerError::DirtyParameters(_)));
        assert_eq!(n, n0);
    }

    #[test]
    fn non_uniform_region_is_rejected() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n = random_matrix(f, 4, &mut rng);
        let mut ledger = UpdateLedger::new(f, 4);
        let b = Matrix::identity(f, 1);
        ledger.record(&n, &[0], &b, &[1], &Region::square(vec![0, 1])).unwrap();
        ledger.flush(&mut n, &Region::square(vec![0, 1])).unwrap();
        let err = ledger.flush(&mut n, &Region::square(vec![1, 2])).unwrap_err();
        assert!(matches!(err, LedgerError::DirtyParameters(_)));
    }
}
