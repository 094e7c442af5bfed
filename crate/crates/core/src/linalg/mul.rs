use std::cell::Cell;

use super::{LinalgError, Matrix};
use crate::field::{tally_muls, Scalar};

/// Smallest dimension at which Strassen's recursion is applied by default.
pub const DEFAULT_STRASSEN_CROSSOVER: usize = 128;

/// How `Matrix::mul` multiplies. Chosen per thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulStrategy {
    /// Strassen recursion whenever all three dimensions reach the crossover.
    Strassen { crossover: usize },
    /// Always the classical cubic kernel.
    Naive,
}

impl Default for MulStrategy {
    fn default() -> Self {
        MulStrategy::Strassen { crossover: DEFAULT_STRASSEN_CROSSOVER }
    }
}

thread_local! {
    static STRATEGY: Cell<MulStrategy> = Cell::new(MulStrategy::default());
}

pub fn mul_strategy() -> MulStrategy {
    STRATEGY.with(Cell::get)
}

/// Runs `f` with `strategy` installed on this thread, restoring the previous
/// strategy afterwards (also on panic).
pub fn with_mul_strategy<T>(strategy: MulStrategy, f: impl FnOnce() -> T) -> T {
    struct Restore(MulStrategy);
    impl Drop for Restore {
        fn drop(&mut self) {
            STRATEGY.with(|s| s.set(self.0));
        }
    }
    let _guard = Restore(STRATEGY.with(|s| s.replace(strategy)));
    f()
}

impl Matrix {
    fn check_mul(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Product using the thread's current [`MulStrategy`].
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        match mul_strategy() {
            MulStrategy::Naive => self.mul_classical(other),
            MulStrategy::Strassen { crossover } => self.mul_with_crossover(other, crossover),
        }
    }

    /// Classical product with delayed modular reduction.
    pub fn mul_classical(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_mul(other)?;
        Ok(classical(self, other))
    }

    /// Strassen's recursion down to blocks smaller than `crossover`, then the
    /// classical kernel. Odd dimensions are zero-padded at each level.
    pub fn mul_with_crossover(
        &self,
        other: &Matrix,
        crossover: usize,
    ) -> Result<Matrix, LinalgError> {
        self.check_mul(other)?;
        Ok(strassen(self, other, crossover.max(2)))
    }
}

fn classical(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field;
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut out = Matrix::zeros(f, m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    tally_muls((m * k * n) as u64);
    let budget = f.accumulation_budget();
    let mut acc = vec![0u128; n];
    for i in 0..m {
        acc.iter_mut().for_each(|x| *x = 0);
        let mut pending = 0usize;
        for (kk, &aik) in a.row(i).iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            let x = aik.value() as u128;
            for (s, &bv) in acc.iter_mut().zip(b.row(kk)) {
                *s += x * bv.value() as u128;
            }
            pending += 1;
            if pending >= budget {
                for s in acc.iter_mut() {
                    *s = f.reduce_wide(*s) as u128;
                }
                pending = 1;
            }
        }
        for (o, &s) in out.row_mut(i).iter_mut().zip(&acc) {
            *o = Scalar(f.reduce_wide(s));
        }
    }
    out
}

fn strassen(a: &Matrix, b: &Matrix, crossover: usize) -> Matrix {
    let (m, k, n) = (a.rows, a.cols, b.cols);
    if m.min(k).min(n) < crossover {
        return classical(a, b);
    }
    let (m2, k2, n2) = (m.div_ceil(2), k.div_ceil(2), n.div_ceil(2));
    let quad = |x: &Matrix, r0: usize, c0: usize, h: usize, w: usize| {
        let mut q = Matrix::zeros(x.field, h, w);
        let rh = x.rows.saturating_sub(r0).min(h);
        let cw = x.cols.saturating_sub(c0).min(w);
        for i in 0..rh {
            q.row_mut(i)[..cw].copy_from_slice(&x.row(r0 + i)[c0..c0 + cw]);
        }
        q
    };
    let a11 = quad(a, 0, 0, m2, k2);
    let a12 = quad(a, 0, k2, m2, k2);
    let a21 = quad(a, m2, 0, m2, k2);
    let a22 = quad(a, m2, k2, m2, k2);
    let b11 = quad(b, 0, 0, k2, n2);
    let b12 = quad(b, 0, n2, k2, n2);
    let b21 = quad(b, k2, 0, k2, n2);
    let b22 = quad(b, k2, n2, k2, n2);

    let add = |x: &Matrix, y: &Matrix| x.add(y).expect("conformal quadrants");
    let sub = |x: &Matrix, y: &Matrix| x.sub(y).expect("conformal quadrants");
    let rec = |x: &Matrix, y: &Matrix| strassen(x, y, crossover);

    let p1 = rec(&add(&a11, &a22), &add(&b11, &b22));
    let p2 = rec(&add(&a21, &a22), &b11);
    let p3 = rec(&a11, &sub(&b12, &b22));
    let p4 = rec(&a22, &sub(&b21, &b11));
    let p5 = rec(&add(&a11, &a12), &b22);
    let p6 = rec(&sub(&a21, &a11), &add(&b11, &b12));
    let p7 = rec(&sub(&a12, &a22), &add(&b21, &b22));

    let c11 = add(&sub(&add(&p1, &p4), &p5), &p7);
    let c12 = add(&p3, &p5);
    let c21 = add(&p2, &p4);
    let c22 = add(&add(&sub(&p1, &p2), &p3), &p6);

    let mut out = Matrix::zeros(a.field, m, n);
    for (q, r0, c0) in [(&c11, 0, 0), (&c12, 0, n2), (&c21, m2, 0), (&c22, m2, n2)] {
        let h = m.saturating_sub(r0).min(m2);
        let w = n.saturating_sub(c0).min(n2);
        for i in 0..h {
            out.row_mut(r0 + i)[c0..c0 + w].copy_from_slice(&q.row(i)[..w]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::field::{count_muls, PrimeField};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classical_matches_triple_loop() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (m, k, n) in [(1, 1, 1), (3, 5, 2), (7, 7, 7), (0, 3, 4), (4, 0, 2)] {
            let a = random_matrix(f, m, k, &mut rng);
            let b = random_matrix(f, k, n, &mut rng);
            assert_eq!(a.mul_classical(&b).unwrap(), naive_product(&a, &b));
        }
    }

    #[test]
    fn delayed_reduction_at_large_modulus() {
        // With p near 2^62 only a handful of products fit in a u128, so the
        // intermediate reductions are exercised on every row.
        let f = PrimeField::new((1 << 61) - 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(f, 6, 40, &mut rng);
        let b = random_matrix(f, 40, 5, &mut rng);
        assert_eq!(a.mul_classical(&b).unwrap(), naive_product(&a, &b));
        let big = PrimeField::new(4611686018427387847).unwrap();
        let top = Matrix::from_fn(big, 3, 64, |_, _| Scalar(big.modulus() - 1));
        let topt = top.transpose();
        assert_eq!(top.mul_classical(&topt).unwrap(), naive_product(&top, &topt));
    }

    #[test]
    fn strassen_matches_classical_on_odd_sizes() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // 33 -> 17 -> 9 pads an odd dimension at every level.
        for (m, k, n) in [(33, 33, 33), (17, 40, 19), (64, 64, 64)] {
            let a = random_matrix(f, m, k, &mut rng);
            let b = random_matrix(f, k, n, &mut rng);
            assert_eq!(a.mul_with_crossover(&b, 8).unwrap(), a.mul_classical(&b).unwrap());
        }
    }

    #[test]
    fn strategy_is_scoped_and_affects_counts() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(f, 64, 64, &mut rng);
        let b = random_matrix(f, 64, 64, &mut rng);
        let (x, naive) = count_muls(|| with_mul_strategy(MulStrategy::Naive, || a.mul(&b).unwrap()));
        assert_eq!(naive, 64 * 64 * 64);
        let fast = MulStrategy::Strassen { crossover: 16 };
        let (y, strass) = count_muls(|| with_mul_strategy(fast, || a.mul(&b).unwrap()));
        assert_eq!(x, y);
        assert_eq!(strass, 7 * 7 * 7 * 8 * 8 * 8);
        assert_eq!(mul_strategy(), MulStrategy::default());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let f = PrimeField::default();
        let a = Matrix::zeros(f, 2, 3);
        assert!(matches!(a.mul(&a), Err(LinalgError::DimensionMismatch(_))));
    }

    proptest! {
        #[test]
        fn product_is_associative(seed in any::<u64>(), m in 1usize..10, k in 1usize..10, n in 1usize..10, q in 1usize..10) {
            let f = PrimeField::new(1_000_003).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(f, m, k, &mut rng);
            let b = random_matrix(f, k, n, &mut rng);
            let c = random_matrix(f, n, q, &mut rng);
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn strassen_agrees_for_any_crossover(seed in any::<u64>(), m in 1usize..24, k in 1usize..24, n in 1usize..24, cross in 2usize..8) {
            let f = PrimeField::default();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(f, m, k, &mut rng);
            let b = random_matrix(f, k, n, &mut rng);
            prop_assert_eq!(a.mul_with_crossover(&b, cross).unwrap(), naive_product(&a, &b));
        }
    }
}
