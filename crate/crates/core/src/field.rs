//! Exact arithmetic in GF(p) for a runtime prime `p < 2^62`.
//!
//! Elements are plain residues wrapped in [`Scalar`]; all operations go
//! through the owning [`PrimeField`], which is a `Copy` handle. Products are
//! formed in 128-bit intermediates.
//!
//! Every field multiplication performed by this crate is tallied in a
//! thread-local counter (see [`mul_count`]) so that solvers can report
//! operation counts that do not depend on wall-clock noise.

use std::cell::Cell;
use std::fmt;

use rand::RngCore;
use thiserror::Error;

/// Largest admissible modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 62;

/// The Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^62")]
    ModulusTooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

thread_local! {
    static MUL_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Number of field multiplications performed on this thread so far.
pub fn mul_count() -> u64 {
    MUL_COUNT.with(Cell::get)
}

pub fn reset_mul_count() {
    MUL_COUNT.with(|c| c.set(0));
}

/// Runs `f` and returns its result together with the number of field
/// multiplications it performed on the current thread.
pub fn count_muls<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let before = mul_count();
    let out = f();
    (out, mul_count() - before)
}

#[inline]
pub(crate) fn tally_muls(n: u64) {
    MUL_COUNT.with(|c| c.set(c.get().wrapping_add(n)));
}

/// A residue in `[0, p)`. Carries no modulus; see [`PrimeField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct Scalar(pub(crate) u64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The prime field GF(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(self, x: u64) -> Scalar {
        Scalar(x % self.p)
    }

    pub fn from_i64(self, x: i64) -> Scalar {
        let r = (x as i128).rem_euclid(self.p as i128);
        Scalar(r as u64)
    }

    /// Interprets a residue as a signed integer in `(-p/2, p/2]`.
    pub fn to_signed(self, a: Scalar) -> i64 {
        if a.0 > self.p / 2 {
            -((self.p - a.0) as i64)
        } else {
            a.0 as i64
        }
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a.0 + b.0;
        Scalar(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        Scalar(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        tally_muls(1);
        Scalar(self.mul_raw(a.0, b.0))
    }

    /// Untallied product of two residues; kernels tally in bulk.
    #[inline(always)]
    pub(crate) fn mul_raw(self, a: u64, b: u64) -> u64 {
        if self.p <= 1 << 32 {
            // Both residues are below 2^32, so the product fits in a u64.
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    #[inline(always)]
    pub(crate) fn reduce_wide(self, x: u128) -> u64 {
        if x >> 64 == 0 {
            (x as u64) % self.p
        } else {
            (x % self.p as u128) as u64
        }
    }

    /// How many products of two residues a `u128` accumulator can absorb
    /// before it must be reduced.
    pub(crate) fn accumulation_budget(self) -> usize {
        let m = (self.p - 1) as u128;
        if m <= 1 {
            return usize::MAX;
        }
        let budget = u128::MAX / (m * m);
        budget.min(usize::MAX as u128) as usize
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(self, mut base: Scalar, mut e: u64) -> Scalar {
        let mut acc = Scalar(1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat, `a^(p-2)`.
    pub fn inv(self, a: Scalar) -> Result<Scalar, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Inverts every element of `xs` with a single exponentiation
    /// (Montgomery's trick). Fails if any element is zero.
    pub fn batch_inv(self, xs: &[Scalar]) -> Result<Vec<Scalar>, FieldError> {
        if xs.is_empty() {
            return Ok(Vec::new());
        }
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = Scalar(1);
        for &x in xs {
            if x.is_zero() {
                return Err(FieldError::ZeroInverse);
            }
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv_acc = self.inv(acc)?;
        let mut out = vec![Scalar(0); xs.len()];
        for i in (0..xs.len()).rev() {
            out[i] = self.mul(inv_acc, prefix[i]);
            inv_acc = self.mul(inv_acc, xs[i]);
        }
        Ok(out)
    }

    /// Uniform sample from `[0, p)` by rejection on 64-bit words.
    pub fn sample<R: RngCore + ?Sized>(self, rng: &mut R) -> Scalar {
        let rem = (u64::MAX % self.p + 1) % self.p;
        loop {
            let x = rng.next_u64();
            if rem == 0 || x <= u64::MAX - rem {
                return Scalar(x % self.p);
            }
        }
    }

    /// Uniform sample from the nonzero residues.
    pub fn sample_nonzero<R: RngCore + ?Sized>(self, rng: &mut R) -> Scalar {
        loop {
            let x = self.sample(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
