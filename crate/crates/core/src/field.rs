//! Prime fields and quadratic extensions.
//!
//! Residues are plain `u64` values in `[0, p)`; the modulus is capped below
//! `2^32` so that a product of two residues never overflows.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `2^31 - 1`, the default working prime.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Common interface of the finite fields used by the generic kernels
/// (univariate polynomials, point scans, residue sampling).
pub trait Field: Copy + Send + Sync + fmt::Debug {
    type Elem: Copy + Eq + fmt::Debug + Send + Sync;

    fn prime(&self) -> PrimeField;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Embeds a residue of the prime subfield.
    fn embed(&self, x: u64) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    /// Number of field elements.
    fn order(&self) -> u128;
    /// The `index`-th element in a fixed enumeration of the field.
    fn element(&self, index: u128) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn pow(&self, mut a: Self::Elem, mut e: u128) -> Self::Elem {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.mul(a, self.inv(b))
    }

    fn is_square(&self, a: Self::Elem) -> bool {
        self.is_zero(a) || self.pow(a, (self.order() - 1) / 2) == self.one()
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(x) {
                return x;
            }
        }
    }

    /// Some non-square element.
    fn non_square(&self) -> Self::Elem {
        (2..self.order())
            .map(|i| self.element(i))
            .find(|&z| !self.is_square(z))
            .expect("odd field has a non-square")
    }

    /// Tonelli-Shanks square root, `None` for non-squares.
    fn sqrt(&self, a: Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let q = self.order();
        let mut t = q - 1;
        let mut s = 0u32;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let z = self.non_square();
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        while b != self.one() {
            let mut i = 0;
            let mut b2 = b;
            while b2 != self.one() {
                b2 = self.mul(b2, b2);
                i += 1;
            }
            let mut g = c;
            for _ in 0..(m - i - 1) {
                g = self.mul(g, g);
            }
            x = self.mul(x, g);
            c = self.mul(g, g);
            b = self.mul(b, c);
            m = i;
        }
        Some(x)
    }
}

/// Arithmetic modulo a validated prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        Self { p: DEFAULT_PRIME }
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::small(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl PrimeField {
    /// A working prime: prime, above 1000 and below `2^32`.
    pub fn new(p: u64) -> Result<Self> {
        if p <= 1000 {
            return Err(Error::UnsupportedModulus { p, reason: "working primes must exceed 1000" });
        }
        Self::small(p)
    }

    /// A calibration prime: any odd prime below `2^32`. Callers are
    /// responsible for keeping it above the degrees they differentiate.
    pub fn small(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(Error::UnsupportedModulus { p, reason: "modulus must be below 2^32" });
        }
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn lift(&self, x: u64) -> i64 {
        if x > self.p / 2 {
            x as i64 - self.p as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse by the extended Euclidean algorithm; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.from_i64(t0)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    /// Smallest quadratic non-residue.
    pub fn nonresidue(&self) -> u64 {
        (2..self.p)
            .find(|&z| self.pow(z, (self.p - 1) / 2) == self.p - 1)
            .expect("odd prime has a non-residue")
    }

    /// Integer `n` as a residue.
    pub fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn prime(&self) -> PrimeField {
        *self
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn embed(&self, x: u64) -> u64 {
        x
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        PrimeField::add(self, a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        PrimeField::sub(self, a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        PrimeField::neg(self, a)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        PrimeField::mul(self, a, b)
    }
    fn inv(&self, a: u64) -> u64 {
        PrimeField::inv(self, a)
    }
    fn order(&self) -> u128 {
        self.p as u128
    }
    fn element(&self, index: u128) -> u64 {
        (index % self.p as u128) as u64
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        PrimeField::random(self, rng)
    }
}

/// `F_p[i] / (i^2 - n)` for the smallest non-residue `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp2 {
    base: PrimeField,
    nonresidue: u64,
}

impl Fp2 {
    pub fn new(base: PrimeField) -> Self {
        Self { base, nonresidue: base.nonresidue() }
    }

    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    /// Frobenius `x -> x^p`, i.e. conjugation `a + b i -> a - b i`.
    pub fn conj(&self, a: [u64; 2]) -> [u64; 2] {
        [a[0], self.base.neg(a[1])]
    }

    pub fn is_base(&self, a: [u64; 2]) -> bool {
        a[1] == 0
    }
}

impl Field for Fp2 {
    type Elem = [u64; 2];

    fn prime(&self) -> PrimeField {
        self.base
    }
    fn zero(&self) -> [u64; 2] {
        [0, 0]
    }
    fn one(&self) -> [u64; 2] {
        [1, 0]
    }
    fn embed(&self, x: u64) -> [u64; 2] {
        [x, 0]
    }
    fn add(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        [self.base.add(a[0], b[0]), self.base.add(a[1], b[1])]
    }
    fn sub(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        [self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1])]
    }
    fn neg(&self, a: [u64; 2]) -> [u64; 2] {
        [self.base.neg(a[0]), self.base.neg(a[1])]
    }
    fn mul(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        let f = &self.base;
        let re = f.add(f.mul(a[0], b[0]), f.mul(self.nonresidue, f.mul(a[1], b[1])));
        let im = f.add(f.mul(a[0], b[1]), f.mul(a[1], b[0]));
        [re, im]
    }
    fn inv(&self, a: [u64; 2]) -> [u64; 2] {
        let f = &self.base;
        let norm = f.sub(f.mul(a[0], a[0]), f.mul(self.nonresidue, f.mul(a[1], a[1])));
        let ni = f.inv(norm);
        [f.mul(a[0], ni), f.mul(f.neg(a[1]), ni)]
    }
    fn order(&self) -> u128 {
        let p = self.base.modulus() as u128;
        p * p
    }
    fn element(&self, index: u128) -> [u64; 2] {
        let p = self.base.modulus() as u128;
        let i = index % (p * p);
        [(i % p) as u64, (i / p) as u64]
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> [u64; 2] {
        [self.base.random(rng), self.base.random(rng)]
    }
    fn non_square(&self) -> [u64; 2] {
        // base elements are all squares here
        (0..self.base.modulus()).map(|k| [k, 1]).find(|&z| !self.is_square(z)).expect("odd field has a non-square")
    }
}
