//! Exact rational numbers and the rank-two divisor lattice.
//!
//! Every invariant in this crate is an exact rational; there is no floating
//! point anywhere in the computation path. Divisor classes on Picard-rank-two
//! varieties are written as `(beta, gamma)` in a fixed two-element basis, and
//! cones in that lattice are spanned by two primitive integral rays.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Small-integer view, if the value is an integer that fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        i64::try_from(self.numer().clone()).ok()
    }

    /// Numerator and denominator as `i64`, if both fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((
            i64::try_from(self.numer().clone()).ok()?,
            i64::try_from(self.denom().clone()).ok()?,
        ))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::integer(n as i64)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_unsigned(digits: &str, text: &str) -> Result<BigInt> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed rational {text:?}")));
    }
    BigInt::from_str(digits).map_err(|e| Error::Parse(format!("{text:?}: {e}")))
}

/// Parses `"p/q"` or `"p"`, with an optional leading sign on the numerator.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (negative, body) = match trimmed.as_bytes().first() {
        Some(b'-') => (true, &trimmed[1..]),
        Some(b'+') => (false, &trimmed[1..]),
        _ => (false, trimmed),
    };
    let (num_text, den_text) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut numer = parse_unsigned(num_text, text)?;
    if negative {
        numer = -numer;
    }
    let denom = match den_text {
        Some(d) => parse_unsigned(d, text)?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Rational::from_bigints(numer, denom)
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A divisor class `beta * L + gamma * F` in a fixed rank-two basis `(L, F)`.
///
/// On projective bundles the basis is the tautological class and the
/// pull-back of the base hyperplane, in that order, everywhere including
/// serialisation.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Class2 {
    pub beta: Rational,
    pub gamma: Rational,
}

impl Class2 {
    pub fn new(beta: impl Into<Rational>, gamma: impl Into<Rational>) -> Self {
        Class2 {
            beta: beta.into(),
            gamma: gamma.into(),
        }
    }

    pub fn ints(beta: i64, gamma: i64) -> Self {
        Class2::new(beta, gamma)
    }

    pub fn zero() -> Self {
        Class2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.beta.is_integer() && self.gamma.is_integer()
    }

    pub fn scale(&self, k: &Rational) -> Class2 {
        Class2 {
            beta: &self.beta * k,
            gamma: &self.gamma * k,
        }
    }

    /// Determinant of the 2x2 matrix with rows `self`, `other`.
    pub fn det(&self, other: &Class2) -> Rational {
        &self.beta * &other.gamma - &self.gamma * &other.beta
    }
}

impl fmt::Debug for Class2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.beta, self.gamma)
    }
}

impl fmt::Display for Class2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.beta, self.gamma)
    }
}

impl Add<&Class2> for &Class2 {
    type Output = Class2;
    fn add(self, rhs: &Class2) -> Class2 {
        Class2 {
            beta: &self.beta + &rhs.beta,
            gamma: &self.gamma + &rhs.gamma,
        }
    }
}

impl Sub<&Class2> for &Class2 {
    type Output = Class2;
    fn sub(self, rhs: &Class2) -> Class2 {
        Class2 {
            beta: &self.beta - &rhs.beta,
            gamma: &self.gamma - &rhs.gamma,
        }
    }
}

impl Neg for &Class2 {
    type Output = Class2;
    fn neg(self) -> Class2 {
        Class2 {
            beta: -&self.beta,
            gamma: -&self.gamma,
        }
    }
}

/// Gcd of the coordinates of a nonzero integral class.
pub fn content(v: &Class2) -> Result<BigInt> {
    if !v.is_integral() {
        return Err(Error::domain(format!("content of non-integral class {v}")));
    }
    if v.is_zero() {
        return Err(Error::domain("content of the zero class"));
    }
    Ok(v.beta.numer().gcd(v.gamma.numer()))
}

/// Where a class sits relative to a two-dimensional cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Rational polyhedral cone spanned by two primitive, non-proportional
/// integral rays.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone2 {
    ray1: Class2,
    ray2: Class2,
}

impl Cone2 {
    pub fn new(ray1: Class2, ray2: Class2) -> Result<Self> {
        for ray in [&ray1, &ray2] {
            if content(ray)? != BigInt::one() {
                return Err(Error::domain(format!("cone ray {ray} is not primitive")));
            }
        }
        if ray1.det(&ray2).is_zero() {
            return Err(Error::domain(format!(
                "cone rays {ray1} and {ray2} are proportional"
            )));
        }
        Ok(Cone2 { ray1, ray2 })
    }

    pub fn ray1(&self) -> &Class2 {
        &self.ray1
    }

    pub fn ray2(&self) -> &Class2 {
        &self.ray2
    }

    /// Coordinates `(a, b)` with `v = a * ray1 + b * ray2`, by Cramer's rule.
    pub fn coordinates(&self, v: &Class2) -> (Rational, Rational) {
        let det = self.ray1.det(&self.ray2);
        let a = v.det(&self.ray2) / &det;
        let b = self.ray1.det(v) / &det;
        (a, b)
    }

    pub fn membership(&self, v: &Class2) -> Membership {
        let (a, b) = self.coordinates(v);
        if a.is_negative() || b.is_negative() {
            Membership::Outside
        } else if a.is_positive() && b.is_positive() {
            Membership::Interior
        } else {
            Membership::Boundary
        }
    }

    pub fn contains(&self, v: &Class2) -> bool {
        self.membership(v) != Membership::Outside
    }
}

impl fmt::Debug for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.ray1, self.ray2)
    }
}

impl fmt::Display for Cone2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Positivity of a divisor class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Positivity {
    pub pseff: bool,
    pub big: bool,
    pub nef: bool,
    pub ample: bool,
}

impl Positivity {
    /// Flags of `s * H` for an ample generator `H` of a rank-one class group.
    pub fn of_rank_one(s: &Rational) -> Self {
        let nonneg = !s.is_negative();
        let pos = s.is_positive();
        Positivity {
            pseff: nonneg,
            big: pos,
            nef: nonneg,
            ample: pos,
        }
    }
}

impl Ord for Class2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.beta, &self.gamma).cmp(&(&other.beta, &other.gamma))
    }
}

impl PartialOrd for Class2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
