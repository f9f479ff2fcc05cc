//! Coefficient domains: integers, rationals and prime fields.
//!
//! Elements are plain values; the domain object carries whatever context the
//! arithmetic needs (for `F_p`, the modulus).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

// ring elements are built through the ring object, which carries the modulus
#[allow(clippy::wrong_self_convention)]
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Text for a coefficient, and whether it reads as negative.
    fn render(&self, a: &Self::Elem) -> (String, bool);
    fn tag(&self) -> DomainTag;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_int(&BigInt::from(v))
    }
}

pub trait Field: Ring {
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// Which domain a computation ran over; used for provenance and JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DomainTag {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl std::fmt::Display for DomainTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainTag::Integers => write!(f, "Z"),
            DomainTag::Rationals => write!(f, "Q"),
            DomainTag::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// Accepts `z`, `q`, `r` (served by `q`: every decision here is over a
/// field of characteristic zero) and `fp:P` for a prime `P`.
impl std::str::FromStr for DomainTag {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || crate::error::Error::Parse {
            line: 1,
            message: format!("unknown domain {s:?}; expected z, q, r or fp:P"),
        };
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(DomainTag::Integers),
            "q" | "r" => Ok(DomainTag::Rationals),
            other => {
                let p: u64 = other
                    .strip_prefix("fp:")
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?;
                if PrimeField::new(p).is_none() {
                    return Err(crate::error::Error::Range {
                        what: "field characteristic",
                        value: p as usize,
                        range: "word-sized primes",
                    });
                }
                Ok(DomainTag::PrimeField(p))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn render(&self, a: &BigInt) -> (String, bool) {
        (a.abs().to_string(), a.is_negative())
    }
    fn tag(&self) -> DomainTag {
        DomainTag::Integers
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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
    fn render(&self, a: &BigRational) -> (String, bool) {
        (a.abs().to_string(), a.is_negative())
    }
    fn tag(&self) -> DomainTag {
        DomainTag::Rationals
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
}

/// `Z/pZ` for a prime `p < 2^32`, elements stored reduced in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `None` unless `p` is a prime below `2^32`.
    pub fn new(p: u64) -> Option<Self> {
        (p < (1 << 32) && is_prime_u64(p)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("reduced value fits")
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn render(&self, a: &u64) -> (String, bool) {
        // print the symmetric representative
        if *a > self.p / 2 {
            ((self.p - a).to_string(), true)
        } else {
            (a.to_string(), false)
        }
    }
    fn tag(&self) -> DomainTag {
        DomainTag::PrimeField(self.p)
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.reduce_i64(v)
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(!(*a).is_multiple_of(self.p), "inverse of zero");
        self.pow(*a, self.p - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factors of `|d|` (without multiplicity) by trial division up to
/// `trial_limit`; `None` when a cofactor above the limit is not provably prime.
pub fn prime_factors(d: &BigInt, trial_limit: u64) -> Option<Vec<u64>> {
    let mut rest = d.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= trial_limit {
        let bp = BigInt::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        if (&rest % &bp).is_zero() {
            out.push(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some(out);
    }
    let r = rest.to_u64()?;
    if is_prime_u64(r) {
        out.push(r);
        out.sort_unstable();
        out.dedup();
        Some(out)
    } else if BigInt::from(p) * BigInt::from(p) > rest {
        out.push(r);
        Some(out)
    } else {
        None
    }
}

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime_u64(p)).collect()
}
