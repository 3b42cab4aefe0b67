//! Arithmetic in Z/p for an odd prime p below 2^31.
//!
//! Elements are plain canonical `u32` residues wrapped in [`Fp`]. The field
//! handle [`PrimeField`] is `Copy` and does no bookkeeping; cost
//! instrumentation goes through a [`Counted`] view bound to an [`OpCounter`]
//! owned by one computation.

use core::cell::Cell;
use core::fmt;

use crate::error::{Error, Result};

/// Largest 16-bit prime, the default modulus.
pub const DEFAULT_PRIME: u32 = 65521;
/// 2^31 - 1, used where genericity matters.
pub const MERSENNE_31: u32 = 2147483647;

/// A canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp(pub u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which arithmetic operation to apply in [`PrimeField::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

/// The prime field Z/p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    for q in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if p == q {
            return true;
        }
        if p % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for 32-bit inputs.
    let p64 = p as u64;
    let mut d = p64 - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        if a % p64 == 0 {
            continue;
        }
        let mut x = pow_mod(a % p64, d, p64);
        if x == 1 || x == p64 - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % p64;
            if x == p64 - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl PrimeField {
    /// Builds Z/p, rejecting composite moduli and anything outside `[3, 2^31)`.
    pub fn new(p: u32) -> Result<Self> {
        if !(3..(1u32 << 31)).contains(&p) || !is_prime_u32(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into the field.
    pub fn from_i64(&self, v: i64) -> Fp {
        Fp(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_u64(&self, v: u64) -> Fp {
        Fp((v % self.p as u64) as u32)
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: Fp) -> i64 {
        let v = a.0 as i64;
        if v > (self.p as i64) / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + b.0 as u64;
        let p = self.p as u64;
        Fp(if s >= p { s - p } else { s } as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        if a.0 >= b.0 {
            Fp(a.0 - b.0)
        } else {
            Fp((a.0 as u64 + self.p as u64 - b.0 as u64) as u32)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fp) -> Fp {
        if a.0 == 0 {
            a
        } else {
            Fp(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp((a.0 as u64 * b.0 as u64 % self.p as u64) as u32)
    }

    /// Inverse by the extended Euclidean algorithm. Also returns the number of
    /// division steps taken, which is the inversion cost unit.
    pub fn inv_with_steps(&self, a: Fp) -> Result<(Fp, u64)> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        let mut steps = 0u64;
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
            steps += 1;
        }
        debug_assert_eq!(r0, 1);
        Ok((self.from_i64(t0), steps))
    }

    pub fn inv(&self, a: Fp) -> Result<Fp> {
        self.inv_with_steps(a).map(|(x, _)| x)
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fp, e: u64) -> Fp {
        Fp(pow_mod(a.0 as u64, e, self.p as u64) as u32)
    }

    /// Uncounted dispatch over [`ArithKind`]; `b` is ignored by unary kinds.
    pub fn arith(&self, a: Fp, b: Fp, kind: ArithKind) -> Result<Fp> {
        Ok(match kind {
            ArithKind::Add => self.add(a, b),
            ArithKind::Sub => self.sub(a, b),
            ArithKind::Mul => self.mul(a, b),
            ArithKind::Neg => self.neg(a),
            ArithKind::Inv => self.inv(a)?,
            ArithKind::Div => self.div(a, b)?,
        })
    }

    /// A view of this field that charges every operation to `ops`.
    pub fn counted<'a>(&self, ops: &'a OpCounter) -> Counted<'a> {
        Counted { field: *self, ops }
    }
}

/// Operation tally for one computation context.
#[derive(Debug, Default)]
pub struct OpCounter(Cell<u64>);

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&self, k: u64) {
        self.0.set(self.0.get() + k);
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.0.get()
    }

    pub fn reset(&self) {
        self.0.set(0);
    }
}

/// Field arithmetic that increments an [`OpCounter`]: 1 per add/sub/mul/neg,
/// the Euclid step count per inversion or division.
#[derive(Clone, Copy, Debug)]
pub struct Counted<'a> {
    pub field: PrimeField,
    pub ops: &'a OpCounter,
}

impl Counted<'_> {
    #[inline]
    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        self.ops.charge(1);
        self.field.add(a, b)
    }

    #[inline]
    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        self.ops.charge(1);
        self.field.sub(a, b)
    }

    #[inline]
    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        self.ops.charge(1);
        self.field.mul(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Fp) -> Fp {
        self.ops.charge(1);
        self.field.neg(a)
    }

    pub fn inv(&self, a: Fp) -> Result<Fp> {
        let (x, steps) = self.field.inv_with_steps(a)?;
        self.ops.charge(steps);
        Ok(x)
    }

    pub fn div(&self, a: Fp, b: Fp) -> Result<Fp> {
        let (x, steps) = self.field.inv_with_steps(b)?;
        self.ops.charge(steps);
        Ok(self.field.mul(a, x))
    }

    pub fn arith(&self, a: Fp, b: Fp, kind: ArithKind) -> Result<Fp> {
        match kind {
            ArithKind::Add => Ok(self.add(a, b)),
            ArithKind::Sub => Ok(self.sub(a, b)),
            ArithKind::Mul => Ok(self.mul(a, b)),
            ArithKind::Neg => Ok(self.neg(a)),
            ArithKind::Inv => self.inv(a),
            ArithKind::Div => self.div(a, b),
        }
    }
}
