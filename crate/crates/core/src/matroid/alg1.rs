use super::{with_retries, IntersectConfig, IntersectOutcome, IntersectStats, MatroidError, MatroidPair, MatroidState};
use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::updates::{Region, UpdateLedger};

/// Matroid intersection by halving recursion over the ground set with
/// lazily applied updates to `N`, the element block of `Z(J)^{-1}`.
///
/// Entries of `N` are materialised from `𝒴(∅)` only where needed: the
/// diagonal `b × b` blocks (`b = ρ` rounded up to a power of two) and the
/// strips that connect the two halves of a subproblem to the updates made in
/// one of them. On entry to a subproblem `P`:
///
/// 1. if `|P| ≤ b`, `N[P, P]` is up to date; otherwise every diagonal
///    `b × b` block of `P` is;
/// 2. the ledger knows `U[P, c]` and `V[r, P]` for every update recorded
///    so far.
///
/// On exit the ledger also knows them for the updates made inside `P`.
pub fn intersect_alg1(pair: &MatroidPair, config: &IntersectConfig) -> Result<IntersectOutcome, MatroidError> {
    with_retries(pair, config, |seed| {
        let st = MatroidState::new(pair, seed);
        let (j, stats) = run_alg1(&st, config.audit)?;
        Ok((j, st.rank(), stats))
    })
}

/// Runs the recursion from the empty intersection of `st`. Returns the
/// accepted elements in acceptance order.
pub fn run_alg1(st: &MatroidState, audit: bool) -> Result<(Vec<usize>, IntersectStats), MatroidError> {
    let (n, k) = (st.n(), st.rank());
    if k == 0 || n == 0 {
        return Ok((Vec::new(), IntersectStats::default()));
    }
    let b = k.next_power_of_two();
    let n_pad = n.max(b).next_power_of_two();
    let f = st.field();
    let mut run = Run {
        st,
        f,
        n,
        b,
        k,
        nmat: Matrix::zeros(f, n, n),
        ledger: UpdateLedger::new(f, n),
        j: Vec::new(),
        stats: IntersectStats::default(),
    };
    if audit {
        let all: Vec<usize> = (0..n).collect();
        run.ledger = UpdateLedger::with_audit(&st.initial_block(&all, &all));
    }
    for lo in (0..n_pad).step_by(b) {
        let blk = run.clip(lo, lo + b);
        run.fill(&blk, &blk);
    }
    run.rec(0, n_pad, 0)?;
    Ok((run.j, run.stats))
}

struct Run<'a> {
    st: &'a MatroidState,
    f: PrimeField,
    n: usize,
    b: usize,
    k: usize,
    nmat: Matrix,
    ledger: UpdateLedger,
    j: Vec<usize>,
    stats: IntersectStats,
}

impl Run<'_> {
    fn done(&self) -> bool {
        self.j.len() == self.k
    }

    fn clip(&self, lo: usize, hi: usize) -> Vec<usize> {
        (lo..hi.min(self.n)).collect()
    }

    /// Writes `N(∅)[rows, cols]` into the working matrix.
    fn fill(&mut self, rows: &[usize], cols: &[usize]) {
        if rows.is_empty() || cols.is_empty() {
            return;
        }
        let m = self.st.initial_block(rows, cols);
        self.nmat.scatter(rows, cols, &m);
    }

    fn flush(&mut self, rows: &[usize], cols: &[usize]) -> Result<(), MatroidError> {
        if rows.is_empty() || cols.is_empty() {
            return Ok(());
        }
        self.stats.flushes += 1;
        self.ledger.flush(&mut self.nmat, &Region::new(rows.to_vec(), cols.to_vec()))?;
        Ok(())
    }

    fn note_strip(&mut self, depth: usize, rows: usize, cols: usize) {
        if self.stats.strip_sizes.len() <= depth {
            self.stats.strip_sizes.resize(depth + 1, (0, 0));
        }
        let s = &mut self.stats.strip_sizes[depth];
        s.0 = s.0.max(rows);
        s.1 = s.1.max(cols);
    }

    /// Columns of the updates recorded from position `from` on.
    fn new_cols(&self, from: usize) -> Vec<usize> {
        self.ledger.pi_c()[from..].to_vec()
    }

    fn rec(&mut self, lo: usize, hi: usize, depth: usize) -> Result<(), MatroidError> {
        if self.done() || lo >= self.n {
            return Ok(());
        }
        if hi - lo == 1 {
            return self.leaf(lo);
        }
        let mid = lo + (hi - lo) / 2;
        let (v1, v2) = (self.clip(lo, mid), self.clip(mid, hi));
        let start = self.ledger.len();
        if hi - lo <= self.b {
            self.rec(lo, mid, depth + 1)?;
            if self.done() {
                return Ok(());
            }
            if self.ledger.len() > start {
                self.flush(&v2, &v1)?;
                self.flush(&v1, &v2)?;
                self.flush(&v2, &v2)?;
            }
            let between = self.ledger.len();
            self.rec(mid, hi, depth + 1)?;
            if self.done() {
                return Ok(());
            }
            if self.ledger.len() > between {
                self.flush(&v2, &v1)?;
                self.flush(&v1, &v2)?;
                self.flush(&v1, &v1)?;
            }
            return Ok(());
        }

        self.rec(lo, mid, depth + 1)?;
        if self.done() {
            return Ok(());
        }
        let c1 = self.new_cols(start);
        if !c1.is_empty() {
            self.fill(&v2, &c1);
            self.flush(&v2, &c1)?;
            self.fill(&c1, &v2);
            self.flush(&c1, &v2)?;
            self.note_strip(depth, v2.len(), c1.len());
            for blo in (mid..hi).step_by(self.b) {
                let blk = self.clip(blo, blo + self.b);
                self.flush(&blk, &blk)?;
            }
        }
        let between = self.ledger.len();
        self.rec(mid, hi, depth + 1)?;
        if self.done() {
            return Ok(());
        }
        let c2 = self.new_cols(between);
        if !c2.is_empty() {
            let mut in_c1 = vec![false; self.n];
            for &c in &c1 {
                in_c1[c] = true;
            }
            let rest1: Vec<usize> = v1.iter().copied().filter(|&v| !in_c1[v]).collect();
            // `c1 × c2` and `c2 × c1` lie in the strips filled above.
            self.flush(&c1, &c2)?;
            self.fill(&rest1, &c2);
            self.flush(&rest1, &c2)?;
            self.flush(&c2, &c1)?;
            self.fill(&c2, &rest1);
            self.flush(&c2, &rest1)?;
            self.note_strip(depth, v1.len(), c2.len());
        }
        Ok(())
    }

    fn leaf(&mut self, i: usize) -> Result<(), MatroidError> {
        let f = self.f;
        let zinv = self.st.z_inv()[i];
        let nii = self.nmat.get(i, i);
        if nii == zinv {
            return Ok(());
        }
        let alpha_inv = f.inv(f.sub(nii, zinv)).expect("nonzero by test");
        let block = Matrix::from_fn(f, 1, 1, |_, _| alpha_inv);
        let here = Region::square(vec![i]);
        self.ledger.record(&self.nmat, &[i], &block, &[i], &here)?;
        self.flush(&[i], &[i])?;
        self.j.push(i);
        Ok(())
    }
}
