//! Dense exact linear algebra over GF(p).
//!
//! [`Matrix`] is the currency of the whole crate: row-major residues tagged
//! with the field they live in. Multiplication dispatches between a
//! delayed-reduction classical kernel and Strassen's recursion (see
//! [`MulStrategy`]); elimination routines live in `elim`, the low-rank
//! inverse-update identities in `update`.

mod elim;
mod mul;
mod update;

use std::fmt;

use thiserror::Error;

use crate::field::{PrimeField, Scalar};

pub use elim::{max_rank_principal_submatrix, RankProfile};
pub use mul::{mul_strategy, with_mul_strategy, MulStrategy, DEFAULT_STRASSEN_CROSSOVER};
pub use update::{
    eliminate_block_inverse, eliminate_pair_inverse, eliminate_quad_inverse,
    rank1_inverse_update, sequential_update, unfurl_rank2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("pivot block of the Schur complement is singular")]
    SingularPivotBlock,
    #[error("elimination not allowed: the pivot entry or block is singular")]
    NotAllowed,
    #[error("matrix is not strictly upper triangular")]
    NotStrictlyUpperTriangular,
    #[error("forced rows are linearly dependent")]
    ForcedSetDependent,
    #[error("principal submatrix on a row basis is singular")]
    PrincipalSubmatrixSingular,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Dense row-major matrix over one prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    field: PrimeField,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over GF({})", self.rows, self.cols, self.field.modulus())?;
        for i in 0..self.rows {
            let row: Vec<u64> = self.row(i).iter().map(|s| s.value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::ZERO; rows * cols], field }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar(1 % field.modulus());
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data, field }
    }

    /// Builds a matrix from unreduced integer rows. All rows must have equal length.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |i, j| field.elem(rows[i][j]))
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn diagonal(field: PrimeField, diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn column_vector(field: PrimeField, v: &[Scalar]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec(), field }
    }

    pub fn row_vector(field: PrimeField, v: &[Scalar]) -> Self {
        Matrix { rows: 1, cols: v.len(), data: v.to_vec(), field }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v.value() < self.field.modulus());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// The submatrix `M[rows, cols]`, in the order the indices are given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Deletes the given rows and columns (the minor `M` with `I`, `J` removed).
    pub fn minor(&self, del_rows: &[usize], del_cols: &[usize]) -> Matrix {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !del_rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !del_cols.contains(j)).collect();
        self.select(&keep_r, &keep_c)
    }

    /// Writes `block` into positions `rows x cols`.
    pub fn scatter(&mut self, rows: &[usize], cols: &[usize], block: &Matrix) {
        assert_eq!(block.rows, rows.len());
        assert_eq!(block.cols, cols.len());
        for (bi, &i) in rows.iter().enumerate() {
            for (bj, &j) in cols.iter().enumerate() {
                self.set(i, j, block.get(bi, bj));
            }
        }
    }

    /// Copies `block` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// Contiguous block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(self.with_data(data))
    }

    pub fn sub_assign(&mut self, other: &Matrix) -> Result<(), LinalgError> {
        self.check_same_shape(other)?;
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.sub(*a, b);
        }
        Ok(())
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        self.with_data(data)
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        let f = self.field;
        crate::field::tally_muls(self.data.len() as u64);
        let data = self.data.iter().map(|&a| Scalar(f.mul_raw(a.value(), c.value()))).collect();
        self.with_data(data)
    }

    /// Multiplies row `i` by `d[i]` (left multiplication by a diagonal matrix).
    pub fn scale_rows(&self, d: &[Scalar]) -> Matrix {
        assert_eq!(d.len(), self.rows);
        let f = self.field;
        crate::field::tally_muls(self.data.len() as u64);
        Matrix::from_fn(f, self.rows, self.cols, |i, j| {
            Scalar(f.mul_raw(self.get(i, j).value(), d[i].value()))
        })
    }

    /// Multiplies column `j` by `d[j]` (right multiplication by a diagonal matrix).
    pub fn scale_cols(&self, d: &[Scalar]) -> Matrix {
        assert_eq!(d.len(), self.cols);
        let f = self.field;
        crate::field::tally_muls(self.data.len() as u64);
        Matrix::from_fn(f, self.rows, self.cols, |i, j| {
            Scalar(f.mul_raw(self.get(i, j).value(), d[j].value()))
        })
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data, field: self.field }
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        crate::field::tally_muls((self.rows * self.cols) as u64);
        (0..self.rows)
            .map(|i| dot(f, self.row(i), v))
            .collect()
    }

    /// Row-vector–matrix product `vᵀ M`.
    pub fn vec_mul(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        crate::field::tally_muls((self.rows * self.cols) as u64);
        let budget = f.accumulation_budget();
        let mut acc = vec![0u128; self.cols];
        let mut pending = 0usize;
        for (i, &vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (a, &m) in acc.iter_mut().zip(self.row(i)) {
                *a += vi.value() as u128 * m.value() as u128;
            }
            pending += 1;
            if pending >= budget {
                for a in acc.iter_mut() {
                    *a = f.reduce_wide(*a) as u128;
                }
                pending = 1;
            }
        }
        acc.into_iter().map(|a| Scalar(f.reduce_wide(a))).collect()
    }
}

/// Untallied dot product with delayed reduction.
pub(crate) fn dot(f: PrimeField, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let budget = f.accumulation_budget();
    let mut acc: u128 = 0;
    let mut pending = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        acc += x.value() as u128 * y.value() as u128;
        pending += 1;
        if pending >= budget {
            acc = f.reduce_wide(acc) as u128;
            pending = 1;
        }
    }
    Scalar(f.reduce_wide(acc))
}
