//! Exact coefficient domains.
//!
//! Two domains are provided: arbitrary-precision rationals and prime fields
//! with a 61–62 bit modulus. Both implement [`Domain`], a ring-object style
//! trait: elements are plain values and every operation goes through the
//! domain, so a prime field's modulus lives in one place.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Lower end of the range prime moduli are drawn from.
pub const PRIME_LOW: u64 = 1 << 60;
/// Upper end (inclusive) of the range prime moduli are drawn from.
pub const PRIME_HIGH: u64 = 1 << 62;

/// Integers sampled over the rationals are uniform in `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 999;

/// A coefficient ring passed as a value; elements carry no context, so the
/// modulus lives in the domain object.
#[allow(clippy::wrong_self_convention)]
pub trait Domain: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Draws a sample point coordinate.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Exact rank of a matrix over this domain.
    fn rank(&self, m: &Matrix<Self>) -> usize;

    fn descriptor(&self) -> DomainDescriptor;

    /// Renders an element as a decimal string (`p/q` for rationals).
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Which domain a computation ran in; recorded in every report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainDescriptor {
    Rationals,
    PrimeField { modulus: u64 },
}

impl DomainDescriptor {
    pub fn name(&self) -> &'static str {
        match self {
            DomainDescriptor::Rationals => "rational",
            DomainDescriptor::PrimeField { .. } => "prime",
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            DomainDescriptor::Rationals => None,
            DomainDescriptor::PrimeField { modulus } => Some(*modulus),
        }
    }
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainDescriptor::Rationals => write!(f, "QQ"),
            DomainDescriptor::PrimeField { modulus } => write!(f, "GF({modulus})"),
        }
    }
}

/// Runtime choice of coefficient domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientDomain {
    Rationals(Rationals),
    PrimeField(PrimeField),
}

impl CoefficientDomain {
    pub fn descriptor(&self) -> DomainDescriptor {
        match self {
            CoefficientDomain::Rationals(d) => d.descriptor(),
            CoefficientDomain::PrimeField(d) => d.descriptor(),
        }
    }
}

/// Dispatches a generic computation on a [`CoefficientDomain`].
#[macro_export]
macro_rules! with_domain {
    ($domain:expr, |$d:ident| $body:expr) => {
        match $domain {
            $crate::domain::CoefficientDomain::Rationals($d) => $body,
            $crate::domain::CoefficientDomain::PrimeField($d) => $body,
        }
    };
}

// ---------------------------------------------------------------------------
// Rationals

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Domain for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND))
    }
    fn rank(&self, m: &Matrix<Self>) -> usize {
        crate::matrix::rational_rank(m)
    }
    fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor::Rationals
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// The field of integers modulo a prime `p` with `2^60 < p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field, checking that the modulus is a prime above 2^60.
    pub fn new(p: u64) -> Result<Self> {
        if p <= PRIME_LOW || p >= 1 << 63 {
            return Err(Error::InvalidModulus { modulus: p, reason: "modulus must lie in (2^60, 2^63)" });
        }
        if !is_prime(p) {
            return Err(Error::InvalidModulus { modulus: p, reason: "modulus is not prime" });
        }
        Ok(PrimeField { p })
    }

    /// Draws a prime uniformly from `[2^60, 2^62]` (first prime at or after a
    /// uniform start point, wrapping at the top of the range).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = rng.gen_range(PRIME_LOW..=PRIME_HIGH) | 1;
        loop {
            if c > PRIME_HIGH {
                c = PRIME_LOW + 1;
            }
            if is_prime(c) {
                return PrimeField { p: c };
            }
            c += 2;
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces a value that may be a signed integer.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    /// Reduces a rational whose denominator is invertible mod p.
    pub fn reduce_rational(&self, r: &BigRational) -> Option<u64> {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        self.div(&n, &d)
    }

    /// Lifts to the symmetric representative in `(-p/2, p/2]`.
    pub fn lift_signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }
}

impl Domain for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i128(v as i128)
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (g, x, _) = ext_gcd(*a as i128, self.p as i128);
        debug_assert_eq!(g, 1);
        Some(x.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn rank(&self, m: &Matrix<Self>) -> usize {
        crate::matrix::field_rank(self, m)
    }
    fn descriptor(&self) -> DomainDescriptor {
        DomainDescriptor::PrimeField { modulus: self.p }
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Miller–Rabin with the first twelve prime bases, which is exact for all
/// 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least common multiple of the denominators of a slice of rationals.
pub(crate) fn denominator_lcm(values: &[BigRational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Content (gcd of entries) of an integer vector; zero for the zero vector.
pub(crate) fn content(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
pub fn primitive_integer_vector(values: &[BigRational]) -> Vec<BigInt> {
    let l = denominator_lcm(values);
    let mut ints: Vec<BigInt> =
        values.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    let c = content(&ints);
    if !c.is_zero() {
        for v in ints.iter_mut() {
            *v = &*v / &c;
        }
    }
    if let Some(first) = ints.iter().find(|v| !v.is_zero()) {
        if first.sign() == Sign::Minus {
            for v in ints.iter_mut() {
                *v = -&*v;
            }
        }
    }
    ints
}
