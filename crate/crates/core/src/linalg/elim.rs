use super::{LinalgError, Matrix};
use crate::field::{tally_muls, PrimeField, Scalar};

/// Row and column bases of a matrix found by greedy elimination.
///
/// `row_basis` lists the first maximal set of independent rows scanned in
/// index order; `col_basis` the pivot columns of that elimination. Both are
/// sorted ascending and `M[row_basis, col_basis]` is nonsingular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub row_basis: Vec<usize>,
    pub col_basis: Vec<usize>,
}

/// `dst -= x * src`, untallied.
fn axpy(f: PrimeField, dst: &mut [Scalar], x: Scalar, src: &[Scalar]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.sub(*d, Scalar(f.mul_raw(x.value(), s.value())));
    }
}

/// Incremental row echelon form. Basis rows are normalised to 1 at their
/// pivot and each is reduced against all earlier ones, so reducing a new row
/// against the basis in insertion order clears every earlier pivot.
struct Echelon<'a> {
    f: PrimeField,
    col_order: &'a [usize],
    basis: Vec<(usize, Vec<Scalar>)>,
}

impl<'a> Echelon<'a> {
    fn new(f: PrimeField, col_order: &'a [usize]) -> Self {
        Echelon { f, col_order, basis: Vec::new() }
    }

    /// Adds `row` if it is independent of the basis; returns its pivot column.
    fn insert(&mut self, mut row: Vec<Scalar>) -> Option<usize> {
        let f = self.f;
        for (pc, br) in &self.basis {
            let x = row[*pc];
            if !x.is_zero() {
                tally_muls(row.len() as u64);
                axpy(f, &mut row, x, br);
            }
        }
        let pc = self.col_order.iter().copied().find(|&c| !row[c].is_zero())?;
        let inv = f.inv(row[pc]).expect("pivot is nonzero");
        tally_muls(row.len() as u64);
        for x in row.iter_mut() {
            *x = Scalar(f.mul_raw(x.value(), inv.value()));
        }
        self.basis.push((pc, row));
        Some(pc)
    }
}

/// Greedy basis: rows visited in `row_order`, pivots chosen as the first
/// nonzero column in `col_order`. Returns `(rows, pivots)` in discovery order.
pub(crate) fn greedy_row_basis(
    m: &Matrix,
    row_order: &[usize],
    col_order: &[usize],
) -> (Vec<usize>, Vec<usize>) {
    let mut ech = Echelon::new(m.field(), col_order);
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    let limit = m.rows().min(m.cols());
    for &r in row_order {
        if rows.len() == limit {
            break;
        }
        if let Some(pc) = ech.insert(m.row(r).to_vec()) {
            rows.push(r);
            pivots.push(pc);
        }
    }
    (rows, pivots)
}

impl Matrix {
    pub fn rank_profile(&self) -> RankProfile {
        let rows: Vec<usize> = (0..self.rows()).collect();
        let cols: Vec<usize> = (0..self.cols()).collect();
        let (mut row_basis, mut col_basis) = greedy_row_basis(self, &rows, &cols);
        row_basis.sort_unstable();
        col_basis.sort_unstable();
        RankProfile { rank: row_basis.len(), row_basis, col_basis }
    }

    pub fn rank(&self) -> usize {
        self.rank_profile().rank
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn invert(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows(), self.cols()));
        }
        let f = self.field();
        let n = self.rows();
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, n);
        for c in 0..n {
            let piv = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(LinalgError::Singular)?;
            if piv != c {
                swap_rows(&mut a, piv, c);
                swap_rows(&mut inv, piv, c);
            }
            let pinv = f.inv(a.get(c, c)).expect("pivot is nonzero");
            tally_muls((2 * n) as u64);
            for x in a.row_mut(c)[c..].iter_mut() {
                *x = Scalar(f.mul_raw(x.value(), pinv.value()));
            }
            for x in inv.row_mut(c).iter_mut() {
                *x = Scalar(f.mul_raw(x.value(), pinv.value()));
            }
            let prow: Vec<Scalar> = a.row(c)[c..].to_vec();
            let pinv_row: Vec<Scalar> = inv.row(c).to_vec();
            for r in 0..n {
                if r == c {
                    continue;
                }
                let x = a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                tally_muls((2 * n - c) as u64);
                axpy(f, &mut a.row_mut(r)[c..], x, &prow);
                axpy(f, inv.row_mut(r), x, &pinv_row);
            }
        }
        Ok(inv)
    }

    /// Basis of the right null space `{x : M x = 0}`, one vector per column.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field();
        let (rows, cols) = (self.rows(), self.cols());
        // Reduced row echelon form.
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            swap_rows(&mut a, piv, r);
            let inv = f.inv(a.get(r, c)).expect("pivot is nonzero");
            tally_muls(cols as u64);
            for x in a.row_mut(r).iter_mut() {
                *x = Scalar(f.mul_raw(x.value(), inv.value()));
            }
            let prow = a.row(r).to_vec();
            for i in 0..rows {
                let x = a.get(i, c);
                if i != r && !x.is_zero() {
                    tally_muls(cols as u64);
                    axpy(f, a.row_mut(i), x, &prow);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, Scalar(1 % f.modulus()));
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(a.get(i, fc)));
            }
        }
        k
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows(), self.cols()));
        }
        let f = self.field();
        let n = self.rows();
        let mut a = self.clone();
        let mut det = Scalar(1 % f.modulus());
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Scalar::ZERO);
            };
            if piv != c {
                swap_rows(&mut a, piv, c);
                det = f.neg(det);
            }
            let d = a.get(c, c);
            det = f.mul(det, d);
            let dinv = f.inv(d).expect("pivot is nonzero");
            let prow: Vec<Scalar> = a.row(c)[c..].to_vec();
            for r in c + 1..n {
                let x = a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let factor = f.mul(x, dinv);
                tally_muls((n - c) as u64);
                axpy(f, &mut a.row_mut(r)[c..], factor, &prow);
            }
        }
        Ok(det)
    }

    /// Schur complement of the block `M[rows, cols]`:
    /// `M[R', C'] - M[R', cols] M[rows, cols]^{-1} M[rows, C']`, where `R'`
    /// and `C'` are the remaining indices in ascending order.
    pub fn schur_complement(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix, LinalgError> {
        if rows.len() != cols.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "pivot block is {}x{}",
                rows.len(),
                cols.len()
            )));
        }
        for &i in rows {
            check_index(i, self.rows())?;
        }
        for &j in cols {
            check_index(j, self.cols())?;
        }
        let pinv = self
            .select(rows, cols)
            .invert()
            .map_err(|_| LinalgError::SingularPivotBlock)?;
        let rest_r: Vec<usize> = (0..self.rows()).filter(|i| !rows.contains(i)).collect();
        let rest_c: Vec<usize> = (0..self.cols()).filter(|j| !cols.contains(j)).collect();
        let corr = self
            .select(&rest_r, cols)
            .mul(&pinv)?
            .mul(&self.select(rows, &rest_c))?;
        self.select(&rest_r, &rest_c).sub(&corr)
    }
}

pub(crate) fn check_index(index: usize, dim: usize) -> Result<(), LinalgError> {
    if index >= dim {
        Err(LinalgError::IndexOutOfRange { index, dim })
    } else {
        Ok(())
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols();
    let (lo, hi) = (a.min(b), a.max(b));
    let data = &mut m.data;
    let (left, right) = data.split_at_mut(hi * cols);
    left[lo * cols..(lo + 1) * cols].swap_with_slice(&mut right[..cols]);
}

/// Index set `A` with `Z[A, A]` nonsingular and `|A| = rank Z`, containing
/// every index in `forced`.
///
/// A column basis `B` is chosen with the forced columns first, then a row
/// basis `A` of `Z[*, B]` with the forced rows first. For skew-symmetric `Z`
/// (any matrix whose row and column dependencies coincide) `Z[A, A]` is then
/// nonsingular; this is checked and reported otherwise.
pub fn max_rank_principal_submatrix(
    z: &Matrix,
    forced: &[usize],
) -> Result<Vec<usize>, LinalgError> {
    if !z.is_square() {
        return Err(LinalgError::NotSquare(z.rows(), z.cols()));
    }
    let n = z.rows();
    for &i in forced {
        check_index(i, n)?;
    }
    let order: Vec<usize> = forced
        .iter()
        .copied()
        .chain((0..n).filter(|i| !forced.contains(i)))
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let (b, _) = greedy_row_basis(&z.transpose(), &order, &all);
    let zb = z.select_cols(&b);
    let bcols: Vec<usize> = (0..b.len()).collect();
    let (mut a, _) = greedy_row_basis(&zb, &order, &bcols);
    if forced.iter().any(|i| !a.contains(i)) {
        return Err(LinalgError::ForcedSetDependent);
    }
    a.sort_unstable();
    if !z.select(&a, &a).is_nonsingular() {
        return Err(LinalgError::PrincipalSubmatrixSingular);
    }
    Ok(a)
}
