//! Exact rationals with p-adic views: valuation, residues mod p^n, binomials,
//! Bernoulli numbers.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fixed prime, top level and comparison exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeContext {
    pub p: u64,
    pub n_max: u32,
    pub prec: u32,
}

impl PrimeContext {
    pub fn new(p: u64, n_max: u32, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n_max == 0 || prec == 0 {
            return Err(Error::InvalidInput("n_max and prec must be positive".into()));
        }
        Ok(Self { p, n_max, prec })
    }

    /// p^n as a machine integer; levels are small enough that this never overflows.
    pub fn pn(&self, n: u32) -> u64 {
        self.p.pow(n)
    }

    pub fn with_n_max(&self, n_max: u32) -> Self {
        Self { n_max, ..*self }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation; `None` stands for +infinity.
pub type Valuation = Option<i64>;

/// An exact rational, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PadicNum(pub BigRational);

impl PadicNum {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn frac<T: Into<BigInt>>(num: T, den: T) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn vp(&self, p: u64) -> Valuation {
        vp(self, p)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PadicNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self(BigRational::new(n, d)))
    }
}

impl Serialize for PadicNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PadicNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for PadicNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for PadicNum {
    fn from(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&PadicNum> for &PadicNum {
            type Output = PadicNum;
            fn $m(self, rhs: &PadicNum) -> PadicNum {
                PadicNum((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $m(self, rhs: PadicNum) -> PadicNum {
                PadicNum(self.0.$m(rhs.0))
            }
        }
        impl $tr<&PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $m(self, rhs: &PadicNum) -> PadicNum {
                PadicNum(self.0.$m(&rhs.0))
            }
        }
        impl $tr<PadicNum> for &PadicNum {
            type Output = PadicNum;
            fn $m(self, rhs: PadicNum) -> PadicNum {
                PadicNum((&self.0).$m(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        PadicNum(-self.0)
    }
}

impl Neg for &PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        PadicNum(-&self.0)
    }
}

impl AddAssign<&PadicNum> for PadicNum {
    fn add_assign(&mut self, rhs: &PadicNum) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&PadicNum> for PadicNum {
    fn sub_assign(&mut self, rhs: &PadicNum) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&PadicNum> for PadicNum {
    fn mul_assign(&mut self, rhs: &PadicNum) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for PadicNum {
    fn sum<I: Iterator<Item = PadicNum>>(iter: I) -> Self {
        iter.fold(PadicNum::zero(), |a, b| a + b)
    }
}

fn vp_int(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// vp(0) = +infinity (`None`).
pub fn vp(x: &PadicNum, p: u64) -> Valuation {
    if x.is_zero() {
        return None;
    }
    Some(vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// Minimum of a valuation with an exponent; +infinity never wins.
pub fn vp_at_least(x: &PadicNum, p: u64, e: i64) -> bool {
    vp(x, p).is_none_or(|v| v >= e)
}

/// ⟨c⟩_n ∈ [0, p^n): the residue of a p-integral rational.
pub fn repr_mod(c: &PadicNum, p: u64, n: u32) -> Result<u64> {
    let m = BigInt::from(p).pow(n);
    let den = c.denom();
    if (den % BigInt::from(p)).is_zero() {
        return Err(Error::NotIntegral(c.to_string()));
    }
    let num = c.numer().mod_floor(&m);
    let inv = mod_inverse(&den.mod_floor(&m), &m).ok_or_else(|| Error::NotIntegral(c.to_string()))?;
    let r = (num * inv).mod_floor(&m);
    Ok(r.to_u64().expect("residue fits in u64"))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// True iff vp(c) = 0.
pub fn is_unit(c: &PadicNum, p: u64) -> bool {
    vp(c, p) == Some(0)
}

/// c(c−1)···(c−k+1)/k!.
pub fn binom(c: &PadicNum, k: u32) -> PadicNum {
    let mut acc = PadicNum::one();
    for j in 0..k {
        acc = acc * (c - PadicNum::from_int(j)) / PadicNum::from_int(j + 1);
    }
    acc
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |a, j| a * BigInt::from(j))
}

/// vp(k!) by Legendre's formula.
pub fn vp_factorial(k: u32, p: u64) -> i64 {
    let mut s = 0;
    let mut q = p;
    while q <= k as u64 {
        s += (k as u64 / q) as i64;
        q *= p;
    }
    s
}

/// B_0..=B_k with B_1 = −1/2.
pub fn bernoulli_table(k: u32) -> Vec<PadicNum> {
    let mut b = vec![PadicNum::one()];
    for m in 1..=k {
        let s: PadicNum = (0..m)
            .map(|j| PadicNum::from(binom_int(m + 1, j)) * &b[j as usize])
            .sum();
        b.push(-s / PadicNum::from_int(m + 1));
    }
    b
}

pub fn bernoulli(k: u32) -> PadicNum {
    bernoulli_table(k).pop().unwrap()
}

/// B_k(x) = Σ_j C(k,j) B_j x^{k−j}.
pub fn bernoulli_poly(k: u32, x: &PadicNum) -> PadicNum {
    let b = bernoulli_table(k);
    (0..=k)
        .map(|j| PadicNum::from(binom_int(k, j)) * &b[j as usize] * x.pow(k - j))
        .sum()
}

pub fn binom_int(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Parse helper for CLI-facing rationals that must be p-integral.
pub fn parse_integral(s: &str, p: u64) -> Result<PadicNum> {
    let c: PadicNum = s.parse()?;
    if vp(&c, p).is_some_and(|v| v < 0) {
        return Err(Error::NotIntegral(s.to_string()));
    }
    Ok(c)
}

/// Absolute value of the numerator, mainly for sanity assertions.
pub fn abs(x: &PadicNum) -> PadicNum {
    PadicNum(x.0.abs())
}
