//! Exact rationals, the extended quotient value set `{0} ∪ Q>0 ∪ {∞}`, and
//! negative (Hirzebruch–Jung) continued fractions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("0/0 is not a valid quotient")]
    ZeroOverZero,
    #[error("negative valuation {0}")]
    Negative(String),
    #[error("hj_expand needs 0 < q < n with gcd(n, q) = 1, got n = {n}, q = {q}")]
    BadHjArgs { n: i64, q: i64 },
    #[error("invalid continued fraction: {0}")]
    BadHjString(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Builds the rational `n/d` from machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"` into a rational in lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let s = s.trim();
    let err = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rat::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// The value attached to vertices and arrows of a dual graph.
///
/// Going-in arrows carry `Zero`, going-out arrows carry `Infinity`, and
/// exceptional components carry a positive rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Quotient {
    Zero,
    Finite(Rat),
    Infinity,
}

impl Quotient {
    /// The quotient `a/b` of two valuations.
    pub fn ratio(a: u64, b: u64) -> Result<Quotient, ArithError> {
        match (a, b) {
            (0, 0) => Err(ArithError::ZeroOverZero),
            (0, _) => Ok(Quotient::Zero),
            (_, 0) => Ok(Quotient::Infinity),
            _ => Ok(Quotient::Finite(Rat::new(BigInt::from(a), BigInt::from(b)))),
        }
    }

    /// Builds a quotient from a nonnegative rational (zero maps to `Zero`).
    pub fn from_rat(r: Rat) -> Result<Quotient, ArithError> {
        if r.is_negative() {
            Err(ArithError::Negative(fmt_rat(&r)))
        } else if r.is_zero() {
            Ok(Quotient::Zero)
        } else {
            Ok(Quotient::Finite(r))
        }
    }

    /// Convenience constructor for `n/d > 0`.
    pub fn frac(n: i64, d: i64) -> Quotient {
        Quotient::from_rat(rat(n, d)).expect("nonnegative fraction")
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Quotient::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl Ord for Quotient {
    fn cmp(&self, other: &Self) -> Ordering {
        quotient_cmp(self, other)
    }
}

impl PartialOrd for Quotient {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order with `Zero` minimal, `Infinity` maximal, finite values compared
/// as rationals.
pub fn quotient_cmp(a: &Quotient, b: &Quotient) -> Ordering {
    use Quotient::*;
    match (a, b) {
        (Zero, Zero) | (Infinity, Infinity) => Ordering::Equal,
        (Zero, _) | (_, Infinity) => Ordering::Less,
        (_, Zero) | (Infinity, _) => Ordering::Greater,
        (Finite(x), Finite(y)) => x.cmp(y),
    }
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quotient::Zero => write!(f, "0"),
            Quotient::Infinity => write!(f, "inf"),
            Quotient::Finite(r) => write!(f, "{}", fmt_rat(r)),
        }
    }
}

impl FromStr for Quotient {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "∞" => Ok(Quotient::Infinity),
            other => Quotient::from_rat(parse_rat(other)?),
        }
    }
}

impl Serialize for Quotient {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Quotient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A negative continued fraction `[b_1, …, b_k]` with every `b_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HJString(Vec<i64>);

impl HJString {
    pub fn new(coeffs: Vec<i64>) -> Result<HJString, ArithError> {
        if coeffs.is_empty() {
            return Err(ArithError::BadHjString("empty".into()));
        }
        if let Some(b) = coeffs.iter().find(|&&b| b < 2) {
            return Err(ArithError::BadHjString(format!("coefficient {b} < 2")));
        }
        Ok(HJString(coeffs))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Expands `n/q = b_1 − 1/(b_2 − … − 1/b_k)` with all `b_i ≥ 2`.
pub fn hj_expand(n: i64, q: i64) -> Result<HJString, ArithError> {
    if q <= 0 || q >= n || n.gcd(&q) != 1 {
        return Err(ArithError::BadHjArgs { n, q });
    }
    let (mut a, mut b) = (n, q);
    let mut out = Vec::new();
    while b > 0 {
        // b_i = ceil(a / b); the remainder r = b_i·b − a satisfies 0 ≤ r < b.
        let c = (a + b - 1) / b;
        out.push(c);
        let r = c * b - a;
        a = b;
        b = r;
    }
    HJString::new(out)
}

/// Evaluates a negative continued fraction exactly.
pub fn cf_evaluate(s: &HJString) -> Rat {
    let mut acc = rat_int(*s.0.last().expect("nonempty"));
    for &b in s.0.iter().rev().skip(1) {
        acc = rat_int(b) - acc.recip();
    }
    acc
}

/// Modular inverse of `a` modulo `m` (`m ≥ 1`); `None` when not invertible.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

/// `true` iff the rational is a (possibly negative) integer.
pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}
