//! Exact counting formulas over `Z_d`.
//!
//! Everything here is big-integer or big-rational arithmetic. Nothing in this
//! module touches floating point, so equalities such as "frame potential
//! equals Welch bound" can be decided exactly.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type ExactInteger = BigInt;

/// Largest prime accepted; residues are stored in a byte.
pub const MAX_PRIME: u64 = 251;

/// A validated prime modulus `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(d: u64) -> Result<Self> {
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        if d > MAX_PRIME {
            return Err(Error::InvalidArgument(format!(
                "d = {d} is larger than the supported maximum {MAX_PRIME}"
            )));
        }
        Ok(Prime(d as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_even(self) -> bool {
        self.0 == 2
    }

    pub(crate) fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub(crate) fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(d: u64) -> Result<Self> {
        Prime::new(d)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0 as u64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Trial division.
pub fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= d {
        if d.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. Serialized as the string `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        ExactRational(BigRational::new(numer.into(), denom))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// `base^exp` for any signed exponent.
    pub fn power(base: impl Into<BigInt>, exp: i64) -> Self {
        let base = base.into();
        let mag = num_traits::pow(base, exp.unsigned_abs() as usize);
        if exp >= 0 {
            ExactRational::from_integer(mag)
        } else {
            ExactRational::new(BigInt::one(), mag)
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        Ok(ExactRational::new(p, q))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |a, b| a * b)
    }
}

/// `C(n, k)` for a big top argument; 0 when `k > n`.
pub fn binomial_big(n: &BigInt, k: u64) -> ExactInteger {
    if n.is_negative() || BigInt::from(k) > *n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = C(n, i) here, so acc * (n - i) is divisible by i + 1
        acc *= n - BigInt::from(i);
        let (q, r) = acc.div_rem(&BigInt::from(i + 1));
        debug_assert!(r.is_zero());
        acc = q;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> ExactInteger {
    binomial_big(&BigInt::from(n), k)
}

/// Number of `k`-dimensional subspaces of `Z_d^n`.
pub fn gaussian_binomial(n: u32, k: u32, d: Prime) -> ExactInteger {
    if k > n {
        return BigInt::zero();
    }
    let one = BigInt::one();
    let mut acc = BigInt::one();
    for i in 0..k {
        // after this step acc = [n choose i+1]_d
        acc *= d.pow(n - i) - &one;
        let (q, r) = acc.div_rem(&(d.pow(i + 1) - &one));
        debug_assert!(r.is_zero());
        acc = q;
    }
    acc
}

fn gaussian_signed(n: i64, k: i64, d: Prime) -> ExactInteger {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        gaussian_binomial(n as u32, k as u32, d)
    }
}

/// Checks `[n, k]_d = d^k [n-1, k]_d + [n-1, k-1]_d`. Defined for `n >= 1`;
/// returns `false` for `n = 0`.
pub fn gaussian_pascal_check(n: u32, k: u32, d: Prime) -> bool {
    if n == 0 {
        return false;
    }
    let (n, k) = (n as i64, k as i64);
    let lhs = gaussian_signed(n, k, d);
    let rhs = d.pow(k as u32) * gaussian_signed(n - 1, k, d) + gaussian_signed(n - 1, k - 1, d);
    lhs == rhs
}

/// Total number of Lagrangian subspaces of `Z_d^{2n}`: `prod_{j=1..n} (d^j + 1)`.
pub fn lagrangian_count(d: Prime, n: u32) -> ExactInteger {
    (1..=n).map(|j| d.pow(j) + BigInt::one()).product()
}

/// Number of stabilizer states on `n` qudits of prime dimension `d`.
pub fn stabilizer_count(d: Prime, n: u32) -> ExactInteger {
    d.pow(n) * lagrangian_count(d, n)
}

/// Number of Lagrangians transverse to a fixed one: `d^{n(n+1)/2}`.
pub fn transversal_count(d: Prime, n: u32) -> ExactInteger {
    d.pow(n * (n + 1) / 2)
}

/// Number of Lagrangians meeting a fixed Lagrangian in exactly `k` dimensions.
pub fn kappa(d: Prime, n: u32, k: u32) -> Result<ExactInteger> {
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "intersection dimension k = {k} exceeds n = {n}"
        )));
    }
    Ok(gaussian_binomial(n, k, d) * transversal_count(d, n - k))
}

/// `1 / C(D + t - 1, t)`.
pub fn welch_bound(dim: impl Into<BigInt>, t: u32) -> ExactRational {
    let dim = dim.into();
    let top = dim + BigInt::from(t) - BigInt::one();
    ExactRational::new(BigInt::one(), binomial_big(&top, t as u64))
}
