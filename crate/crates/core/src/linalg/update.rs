use super::elim::check_index;
use super::{LinalgError, Matrix};
use crate::field::{tally_muls, Scalar};

/// Inverse of `M + c·u·vᵀ` given `Minv = M^{-1}` (Sherman–Morrison).
///
/// With `α = c^{-1} + vᵀ Minv u` the result is
/// `Minv − α^{-1} (Minv u)(vᵀ Minv)`; it exists iff `α ≠ 0`. A zero `c` is
/// the identity update and returns `Minv` unchanged.
pub fn rank1_inverse_update(
    minv: &Matrix,
    u: &[Scalar],
    v: &[Scalar],
    c: Scalar,
) -> Result<Matrix, LinalgError> {
    if !minv.is_square() {
        return Err(LinalgError::NotSquare(minv.rows(), minv.cols()));
    }
    let n = minv.rows();
    if u.len() != n || v.len() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "update vectors of length {} and {} for order {n}",
            u.len(),
            v.len()
        )));
    }
    if c.is_zero() {
        return Ok(minv.clone());
    }
    let f = minv.field();
    let mu = minv.mul_vec(u);
    let vm = minv.vec_mul(v);
    tally_muls(n as u64);
    let vmu = super::dot(f, v, &mu);
    let alpha = f.add(f.inv(c).expect("c is nonzero"), vmu);
    let ainv = f.inv(alpha).map_err(|_| LinalgError::Singular)?;
    let scaled: Vec<Scalar> = mu.iter().map(|&x| f.mul(x, ainv)).collect();
    let mut out = minv.clone();
    tally_muls((n * n) as u64);
    for i in 0..n {
        let s = scaled[i];
        if s.is_zero() {
            continue;
        }
        for (o, &w) in out.row_mut(i).iter_mut().zip(&vm) {
            *o = f.sub(*o, Scalar(f.mul_raw(s.value(), w.value())));
        }
    }
    Ok(out)
}

/// Given `N = Z^{-1}`, returns the inverse of `Z` with rows `zrows` and
/// columns `zcols` deleted:
/// `(N − N[*, zrows] N[zcols, zrows]^{-1} N[zcols, *])` with rows `zcols`
/// and columns `zrows` removed.
///
/// Fails with `NotAllowed` when `N[zcols, zrows]` is singular, which is
/// exactly when the smaller matrix is singular.
pub fn eliminate_block_inverse(
    n: &Matrix,
    zrows: &[usize],
    zcols: &[usize],
) -> Result<Matrix, LinalgError> {
    if !n.is_square() {
        return Err(LinalgError::NotSquare(n.rows(), n.cols()));
    }
    if zrows.len() != zcols.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "deleting {} rows but {} columns",
            zrows.len(),
            zcols.len()
        )));
    }
    for &i in zrows.iter().chain(zcols) {
        check_index(i, n.rows())?;
    }
    let pivot = n.select(zcols, zrows);
    let pinv = pivot.invert().map_err(|_| LinalgError::NotAllowed)?;
    let all: Vec<usize> = (0..n.rows()).collect();
    let keep_r: Vec<usize> = all.iter().copied().filter(|i| !zcols.contains(i)).collect();
    let keep_c: Vec<usize> = all.iter().copied().filter(|j| !zrows.contains(j)).collect();
    let left = n.select(&keep_r, zrows).mul(&pinv)?;
    let corr = left.mul(&n.select(zcols, &keep_c))?;
    n.select(&keep_r, &keep_c).sub(&corr)
}

/// Rank-1 case of [`eliminate_block_inverse`]: delete row `i` and column `j`
/// of `Z`. Allowed iff `N[j, i] ≠ 0`.
pub fn eliminate_pair_inverse(n: &Matrix, i: usize, j: usize) -> Result<Matrix, LinalgError> {
    eliminate_block_inverse(n, &[i], &[j])
}

/// Rank-2 case: delete rows and columns `{i, j}` of `Z`. Allowed iff
/// `det N[{i,j}, {i,j}] ≠ 0`.
pub fn eliminate_quad_inverse(n: &Matrix, i: usize, j: usize) -> Result<Matrix, LinalgError> {
    if i == j {
        return Err(LinalgError::DimensionMismatch("rank-2 update needs i != j".into()));
    }
    eliminate_block_inverse(n, &[i, j], &[i, j])
}

/// Splits the rank-2 update `(u1 | u2) · C · (v1 ; v2)` into four rank-1
/// terms `(u_a, C[a][b], v_b)`.
///
/// The order is `(u1,c11,v1), (u2,c22,v2), (u2,c21,v1), (u1,c12,v2)`. The
/// vector types are generic so callers can unfurl either explicit vectors or
/// index handles.
pub fn unfurl_rank2<U: Clone, V: Clone>(
    u1: U,
    u2: U,
    c: [[Scalar; 2]; 2],
    v1: V,
    v2: V,
) -> [(U, Scalar, V); 4] {
    [
        (u1.clone(), c[0][0], v1.clone()),
        (u2.clone(), c[1][1], v2.clone()),
        (u2, c[1][0], v1),
        (u1, c[0][1], v2),
    ]
}

/// `X ⊗ Y = X (I − Y)^{-1}` for strictly upper triangular `Y`: the result of
/// applying, for `i = 1..k` in order, `X += X[*, i] · Y[i, *]`.
pub fn sequential_update(x: &Matrix, y: &Matrix) -> Result<Matrix, LinalgError> {
    if !y.is_square() {
        return Err(LinalgError::NotSquare(y.rows(), y.cols()));
    }
    if x.cols() != y.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "X has {} columns, Y has order {}",
            x.cols(),
            y.rows()
        )));
    }
    let k = y.rows();
    for i in 0..k {
        if y.row(i)[..=i].iter().any(|s| !s.is_zero()) {
            return Err(LinalgError::NotStrictlyUpperTriangular);
        }
    }
    let t = unit_upper_inverse(y);
    x.mul(&t)
}

/// `(I − Y)^{-1}` for strictly upper triangular `Y`, from `T = I + Y T`
/// solved column by column from the bottom up.
fn unit_upper_inverse(y: &Matrix) -> Matrix {
    let f = y.field();
    let k = y.rows();
    let mut t = Matrix::identity(f, k);
    for j in 0..k {
        for i in (0..j).rev() {
            let mut acc = Scalar::ZERO;
            for m in i + 1..=j {
                let yim = y.get(i, m);
                if !yim.is_zero() {
                    acc = f.add(acc, Scalar(f.mul_raw(yim.value(), t.get(m, j).value())));
                }
            }
            tally_muls((j - i) as u64);
            t.set(i, j, acc);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn outer(u: &[Scalar], c: Scalar, v: &[Scalar], f: PrimeField) -> Matrix {
        Matrix::from_fn(f, u.len(), v.len(), |i, j| f.mul(f.mul(u[i], c), v[j]))
    }

    #[test]
    fn rank1_identity_example() {
        let f = PrimeField::new(7).unwrap();
        let n = 3;
        let e1: Vec<Scalar> = (0..n).map(|i| Scalar(u64::from(i == 0))).collect();
        let out = rank1_inverse_update(&Matrix::identity(f, n), &e1, &e1, Scalar::ONE).unwrap();
        // (I + e1 e1ᵀ)^{-1} = diag(1/2, 1, 1) and 1/2 = 4 mod 7.
        assert_eq!(out, Matrix::diagonal(f, &[f.elem(4), Scalar::ONE, Scalar::ONE]));
        let unchanged = rank1_inverse_update(&Matrix::identity(f, n), &e1, &e1, Scalar::ZERO);
        assert_eq!(unchanged.unwrap(), Matrix::identity(f, n));
        // I - e1 e1ᵀ is singular: α = -1 + 1 = 0.
        let minus = f.neg(Scalar::ONE);
        assert_eq!(
            rank1_inverse_update(&Matrix::identity(f, n), &e1, &e1, minus),
            Err(LinalgError::Singular)
        );
    }

    #[test]
    fn rank1_multiplies_back_to_identity() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let m = random_nonsingular(f, 5, &mut rng);
            let u: Vec<Scalar> = (0..5).map(|_| f.sample(&mut rng)).collect();
            let v: Vec<Scalar> = (0..5).map(|_| f.sample(&mut rng)).collect();
            let c = f.sample_nonzero(&mut rng);
            let updated = m.add(&outer(&u, c, &v, f)).unwrap();
            let out = rank1_inverse_update(&m.invert().unwrap(), &u, &v, c).unwrap();
            assert_eq!(out.mul(&updated).unwrap(), Matrix::identity(f, 5));
        }
    }

    #[test]
    fn pair_elimination_matches_minor_inverse() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut checked = 0;
        while checked < 30 {
            let z = random_nonsingular(f, 6, &mut rng);
            let n = z.invert().unwrap();
            let (i, j) = (rng.gen_range(0..6), rng.gen_range(0..6));
            match eliminate_pair_inverse(&n, i, j) {
                Ok(out) => {
                    assert_eq!(out, z.minor(&[i], &[j]).invert().unwrap());
                    checked += 1;
                }
                Err(e) => {
                    assert_eq!(e, LinalgError::NotAllowed);
                    assert!(!z.minor(&[i], &[j]).is_nonsingular());
                }
            }
        }
    }

    #[test]
    fn pair_elimination_two_by_two() {
        let f = PrimeField::new(101).unwrap();
        let z = Matrix::from_rows(f, &[vec![3, 5], vec![7, 2]]);
        let n = z.invert().unwrap();
        let out = eliminate_pair_inverse(&n, 0, 1).unwrap();
        assert_eq!(out, z.minor(&[0], &[1]).invert().unwrap());
        let mut zero = n.clone();
        zero.set(1, 0, Scalar::ZERO);
        assert_eq!(eliminate_pair_inverse(&zero, 0, 1), Err(LinalgError::NotAllowed));
    }

    #[test]
    fn quad_elimination_matches_minor_inverse() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let z = random_nonsingular(f, 6, &mut rng);
            let n = z.invert().unwrap();
            let out = eliminate_quad_inverse(&n, 1, 4).unwrap();
            assert_eq!(out, z.minor(&[1, 4], &[1, 4]).invert().unwrap());
        }
        let zero = Matrix::zeros(f, 4, 4);
        assert_eq!(eliminate_quad_inverse(&zero, 0, 1), Err(LinalgError::NotAllowed));
    }

    #[test]
    fn skew_quad_is_two_rank1_terms() {
        // For a skew block [[0,x],[-x,0]] the inverse is [[0,-1/x],[1/x,0]],
        // so the unfurled diagonal terms vanish and two rank-1 terms remain.
        let f = PrimeField::default();
        let x = f.elem(12345);
        let xi = f.inv(x).unwrap();
        let block = [[Scalar::ZERO, f.neg(xi)], [xi, Scalar::ZERO]];
        let terms = unfurl_rank2("u1", "u2", block, "v1", "v2");
        assert!(terms[0].1.is_zero() && terms[1].1.is_zero());
        assert_eq!(terms[2], ("u2", xi, "v1"));
        assert_eq!(terms[3], ("u1", f.neg(xi), "v2"));
    }

    #[test]
    fn unfurl_identity_and_zero() {
        let one = Scalar::ONE;
        let z = Scalar::ZERO;
        let terms = unfurl_rank2(1, 2, [[one, z], [z, one]], 10, 20);
        assert_eq!(terms, [(1, one, 10), (2, one, 20), (2, z, 10), (1, z, 20)]);
        let zero_terms = unfurl_rank2(1, 2, [[z, z], [z, z]], 10, 20);
        assert!(zero_terms.iter().all(|t| t.1.is_zero()));
    }

    #[test]
    fn unfurl_sums_to_direct_product() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..20 {
            let cols: Vec<Vec<Scalar>> = (0..2).map(|_| (0..5).map(|_| f.sample(&mut rng)).collect()).collect();
            let rows: Vec<Vec<Scalar>> = (0..2).map(|_| (0..4).map(|_| f.sample(&mut rng)).collect()).collect();
            let c = [[f.sample(&mut rng), f.sample(&mut rng)], [f.sample(&mut rng), f.sample(&mut rng)]];
            let u = Matrix::from_fn(f, 5, 2, |i, j| cols[j][i]);
            let v = Matrix::from_fn(f, 2, 4, |i, j| rows[i][j]);
            let cm = Matrix::from_fn(f, 2, 2, |i, j| c[i][j]);
            let direct = naive_product(&naive_product(&u, &cm), &v);
            let mut sum = Matrix::zeros(f, 5, 4);
            for (a, s, b) in unfurl_rank2(&cols[0], &cols[1], c, &rows[0], &rows[1]) {
                sum = sum.add(&outer(a, s, b, f)).unwrap();
            }
            assert_eq!(sum, direct);
        }
    }

    fn iterate_definition(x: &Matrix, y: &Matrix) -> Matrix {
        let f = x.field();
        let mut cur = x.clone();
        for i in 0..y.rows() {
            let col = cur.column(i);
            let next = Matrix::from_fn(f, cur.rows(), cur.cols(), |r, c| {
                f.add(cur.get(r, c), f.mul(col[r], y.get(i, c)))
            });
            cur = next;
        }
        cur
    }

    fn random_strict_upper<R: Rng>(f: PrimeField, k: usize, rng: &mut R) -> Matrix {
        Matrix::from_fn(f, k, k, |i, j| if j > i { f.sample(rng) } else { Scalar::ZERO })
    }

    #[test]
    fn sequential_update_trivial_cases() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let x = random_matrix(f, 4, 4, &mut rng);
        assert_eq!(sequential_update(&x, &Matrix::zeros(f, 4, 4)).unwrap(), x);
        let x1 = random_matrix(f, 3, 1, &mut rng);
        assert_eq!(sequential_update(&x1, &Matrix::zeros(f, 1, 1)).unwrap(), x1);
        let bad = Matrix::identity(f, 4);
        assert_eq!(sequential_update(&x, &bad), Err(LinalgError::NotStrictlyUpperTriangular));
    }

    #[test]
    fn sequential_update_eight_by_eight() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let x = random_matrix(f, 8, 8, &mut rng);
        let y = random_strict_upper(f, 8, &mut rng);
        assert_eq!(sequential_update(&x, &y).unwrap(), iterate_definition(&x, &y));
    }

    proptest! {
        #[test]
        fn sequential_update_matches_definition(seed in any::<u64>(), rows in 1usize..10, k in 1usize..16) {
            let f = PrimeField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_matrix(f, rows, k, &mut rng);
            let y = random_strict_upper(f, k, &mut rng);
            prop_assert_eq!(sequential_update(&x, &y).unwrap(), iterate_definition(&x, &y));
        }

        #[test]
        fn rank1_agrees_with_direct_inversion(seed in any::<u64>(), n in 1usize..8) {
            let f = PrimeField::new(1_000_003).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_nonsingular(f, n, &mut rng);
            let u: Vec<Scalar> = (0..n).map(|_| f.sample(&mut rng)).collect();
            let v: Vec<Scalar> = (0..n).map(|_| f.sample(&mut rng)).collect();
            let c = f.sample_nonzero(&mut rng);
            let direct = m.add(&outer(&u, c, &v, f)).unwrap().invert();
            let fast = rank1_inverse_update(&m.invert().unwrap(), &u, &v, c);
            prop_assert_eq!(direct.is_ok(), fast.is_ok());
            if let (Ok(a), Ok(b)) = (direct, fast) {
                prop_assert_eq!(a, b);
            }
        }
    }
}
