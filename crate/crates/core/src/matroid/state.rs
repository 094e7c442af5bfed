use super::{build_y, sample_z, MatroidError, MatroidPair};
use crate::field::{PrimeField, Scalar};
use crate::linalg::Matrix;

/// State of a greedy intersection search on a rank-restricted pair.
///
/// Holds the current intersection `J`, the diagonal `z`, and
/// `𝒴(J)`: the leading `ρ × ρ` block of `Y(J)^{-1}`, where `Y(J)` is the
/// Schur complement of the `J̄` part of `X` in `Z(J)` (`Z` with `z_i` set to
/// zero for `i ∈ J`). Entries of the element block `N` of `Z(J)^{-1}` over
/// `J̄` are `δ_ij / z_i + Q2[i,*] 𝒴(J) Q1[*,j] / (z_i z_j)`.
#[derive(Debug, Clone)]
pub struct MatroidState {
    field: PrimeField,
    q1: Matrix,
    q2: Matrix,
    z: Vec<Scalar>,
    zinv: Vec<Scalar>,
    y0: Matrix,
    ycal: Matrix,
    in_j: Vec<bool>,
    j: Vec<usize>,
    block: Option<Block>,
}

#[derive(Debug, Clone)]
struct Block {
    idx: Vec<usize>,
    /// Position of each element in `idx`.
    pos: Vec<Option<usize>>,
    n: Matrix,
}

impl MatroidState {
    /// Samples `z` from `seed` and restricts the pair to full rank.
    pub fn new(pair: &MatroidPair, seed: u64) -> Self {
        Self::with_z(pair, sample_z(pair.field(), pair.n(), seed))
    }

    /// # Panics
    /// If some `z_i` is zero or `z` has the wrong length.
    pub fn with_z(pair: &MatroidPair, z: Vec<Scalar>) -> Self {
        let f = pair.field();
        let y = build_y(pair, &z);
        let prof = y.rank_profile();
        let q1 = pair.q1().select_rows(&prof.row_basis);
        let q2 = pair.q2().select_cols(&prof.col_basis);
        let y0 = y
            .select(&prof.row_basis, &prof.col_basis)
            .invert()
            .expect("rank profile block is nonsingular");
        let zinv = f.batch_inv(&z).expect("z must be nonzero");
        MatroidState {
            field: f,
            q1,
            q2,
            ycal: y0.clone(),
            y0,
            zinv,
            z,
            in_j: vec![false; pair.n()],
            j: Vec::new(),
            block: None,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// Size `ρ` of a maximum intersection (whp), the rank of `Y`.
    pub fn rank(&self) -> usize {
        self.q1.rows()
    }

    /// Rows of `Q1` kept by the restriction (`ρ × n`).
    pub fn q1(&self) -> &Matrix {
        &self.q1
    }

    /// Columns of `Q2` kept by the restriction (`n × ρ`).
    pub fn q2(&self) -> &Matrix {
        &self.q2
    }

    pub fn z(&self) -> &[Scalar] {
        &self.z
    }

    pub fn z_inv(&self) -> &[Scalar] {
        &self.zinv
    }

    /// Elements accepted so far, in acceptance order.
    pub fn intersection(&self) -> &[usize] {
        &self.j
    }

    pub fn contains(&self, i: usize) -> bool {
        self.in_j[i]
    }

    /// `𝒴(J)` for the current `J`.
    pub fn ycal(&self) -> &Matrix {
        &self.ycal
    }

    /// `𝒴(∅)`.
    pub fn ycal_initial(&self) -> &Matrix {
        &self.y0
    }

    /// `Y(J)` computed from scratch as a Schur complement of the explicit
    /// `Z(J)`, laid out as `[[-Q1 X^{-1} Q2 over J̄, Q1[*, J]], [Q2[J, *], 0]]`
    /// with `J` in ascending order.
    pub fn schur_y(&self, j: &[usize]) -> Matrix {
        let f = self.field;
        let (k, n) = (self.rank(), self.n());
        let mut zj = Matrix::zeros(f, k + n, k + n);
        zj.paste(0, k, &self.q1);
        zj.paste(k, 0, &self.q2);
        let mut rest = Vec::new();
        for i in 0..n {
            if !j.contains(&i) {
                zj.set(k + i, k + i, self.z[i]);
                rest.push(k + i);
            }
        }
        zj.schur_complement(&rest, &rest).expect("diagonal pivot block")
    }

    /// Entries `N[rows, cols]` of the element block of `Z(J)^{-1}` for the
    /// current `J`; all indices must lie outside `J`.
    pub fn assemble_zj_inv_block(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix, MatroidError> {
        for &i in rows.iter().chain(cols) {
            if self.in_j[i] {
                return Err(MatroidError::InIntersection(i));
            }
        }
        Ok(self.inverse_block(&self.ycal, rows, cols))
    }

    /// Like [`assemble_zj_inv_block`](Self::assemble_zj_inv_block) for
    /// `J = ∅`.
    pub fn initial_block(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        self.inverse_block(&self.y0, rows, cols)
    }

    fn inverse_block(&self, ycal: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
        let f = self.field;
        let left = self.q2.select_rows(rows).mul(ycal).expect("shapes agree");
        let mut m = left.mul(&self.q1.select_cols(cols)).expect("shapes agree");
        let rz: Vec<Scalar> = rows.iter().map(|&i| self.zinv[i]).collect();
        let cz: Vec<Scalar> = cols.iter().map(|&i| self.zinv[i]).collect();
        m = m.scale_rows(&rz).scale_cols(&cz);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if i == j {
                    m.set(a, b, f.add(m.get(a, b), self.zinv[i]));
                }
            }
        }
        m
    }

    /// Computes and caches the principal block `N[idx, idx]`.
    pub fn load_block(&mut self, idx: Vec<usize>) -> Result<(), MatroidError> {
        let n = self.assemble_zj_inv_block(&idx, &idx)?;
        let mut pos = vec![None; self.n()];
        for (a, &i) in idx.iter().enumerate() {
            pos[i] = Some(a);
        }
        self.block = Some(Block { idx, pos, n });
        Ok(())
    }

    /// The cached block, if it is current.
    pub fn block(&self) -> Option<(&[usize], &Matrix)> {
        self.block.as_ref().map(|b| (b.idx.as_slice(), &b.n))
    }

    /// Whether `J + i` is extensible: `N_ii ≠ 1 / z_i`, read from the
    /// cached block.
    pub fn allowed_element(&self, i: usize) -> Result<bool, MatroidError> {
        if self.in_j[i] {
            return Err(MatroidError::InIntersection(i));
        }
        let b = self.block.as_ref().ok_or(MatroidError::StaleBlock(i))?;
        let a = b.pos[i].ok_or(MatroidError::StaleBlock(i))?;
        Ok(b.n.get(a, a) != self.zinv[i])
    }

    /// Adds `i` to `J`, replacing `𝒴(J)` by
    /// `𝒴 - (vᵀ𝒴u)^{-1} (𝒴u)(vᵀ𝒴)` with `u = Q1[*, i]`, `vᵀ = Q2[i, *]`.
    /// A cached block is updated by the matching rank-1 correction; on
    /// error nothing changes.
    pub fn y_rank1_update(&mut self, i: usize) -> Result<(), MatroidError> {
        if self.in_j[i] {
            return Err(MatroidError::InIntersection(i));
        }
        let f = self.field;
        let u = self.q1.column(i);
        let yu = self.ycal.mul_vec(&u);
        let vy = self.ycal.vec_mul(self.q2.row(i));
        let s = crate::linalg::dot(f, self.q2.row(i), &yu);
        let Ok(sinv) = f.inv(s) else {
            return Err(MatroidError::NotAllowed(i));
        };
        let k = self.rank();
        for a in 0..k {
            let ca = f.mul(sinv, yu[a]);
            if ca.is_zero() {
                continue;
            }
            let row = self.ycal.row_mut(a);
            for b in 0..k {
                row[b] = f.sub(row[b], f.mul(ca, vy[b]));
            }
        }
        if let Some(b) = self.block.as_mut() {
            if let Some(p) = b.pos[i] {
                // Z(J+i) = Z(J) - z_i e_i e_iᵀ, so N loses
                // N[*, i] N[i, *] / (N_ii - 1/z_i).
                let alpha = f.sub(b.n.get(p, p), self.zinv[i]);
                let ainv = f.inv(alpha).expect("allowed element");
                let col = b.n.column(p);
                let row = b.n.row(p).to_vec();
                let m = b.idx.len();
                for a in 0..m {
                    let ca = f.mul(ainv, col[a]);
                    if ca.is_zero() {
                        continue;
                    }
                    let r = b.n.row_mut(a);
                    for c in 0..m {
                        r[c] = f.sub(r[c], f.mul(ca, row[c]));
                    }
                }
            } else {
                self.block = None;
            }
        }
        self.in_j[i] = true;
        self.j.push(i);
        Ok(())
    }
}
