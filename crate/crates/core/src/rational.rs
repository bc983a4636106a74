//! Exact rational vectors tagged with the lattice they live in.
//!
//! Cocharacter-side vectors (`CoVec`) and character-side vectors (`ChVec`)
//! are distinct types, so mixing them in arithmetic is a compile error.
//! Pairings between the two sides go through a [`RootDatum`](crate::RootDatum)
//! because they depend on its pairing matrix.

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Marker for the cocharacter lattice `X_*` (tensored with `Q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochar;

/// Marker for the character lattice `X^*` (tensored with `Q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Char;

/// A vector of exact rationals on one side of the pairing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec<S> {
    coords: Vec<Rational64>,
    side: PhantomData<S>,
}

pub type CoVec = RatVec<Cochar>;
pub type ChVec = RatVec<Char>;

impl<S> RatVec<S> {
    pub fn new(coords: Vec<Rational64>) -> Self {
        RatVec { coords, side: PhantomData }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rational64::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| Rational64::from_integer(x)).collect())
    }

    /// Parses `"p/q"` or integer strings.
    pub fn parse_strs<T: AsRef<str>>(v: &[T]) -> Result<Self> {
        v.iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if every coordinate is an integer.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn scale(&self, k: Rational64) -> Self {
        Self::new(self.coords.iter().map(|c| c * k).collect())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> i64 {
        self.coords.iter().fold(1, |acc, c| acc.lcm(c.denom()))
    }

    pub fn max_abs(&self) -> Rational64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or_else(Rational64::zero)
    }

    /// Coordinates rendered as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl<S> fmt::Debug for RatVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S> fmt::Display for RatVec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<S> Add for &RatVec<S> {
    type Output = RatVec<S>;
    fn add(self, rhs: Self) -> RatVec<S> {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        RatVec::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl<S> Sub for &RatVec<S> {
    type Output = RatVec<S>;
    fn sub(self, rhs: Self) -> RatVec<S> {
        assert_eq!(self.len(), rhs.len(), "dimension mismatch");
        RatVec::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl<S> Neg for &RatVec<S> {
    type Output = RatVec<S>;
    fn neg(self) -> RatVec<S> {
        RatVec::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl<S> Serialize for RatVec<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de, S> Deserialize<'de> for RatVec<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        RatVec::parse_strs(&raw).map_err(serde::de::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => s.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
    }
}

/// Smallest integer `>= x`.
pub fn ceil(x: Rational64) -> i64 {
    x.ceil().to_integer()
}

pub fn rat(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

pub fn int(p: i64) -> Rational64 {
    Rational64::from_integer(p)
}

pub fn one() -> Rational64 {
    Rational64::one()
}

/// Serde adaptor for a sequence of rationals as `"p/q"` strings.
pub mod rat_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational64>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let v = CoVec::parse_strs(&["1/2", "-3", " 4/6 "]).unwrap();
        assert_eq!(v.to_strings(), vec!["1/2", "-3", "2/3"]);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn ceiling_of_negative_halves() {
        assert_eq!(ceil(rat(-1, 2)), 0);
        assert_eq!(ceil(rat(1, 2)), 1);
        assert_eq!(ceil(int(-3)), -3);
    }

    #[test]
    fn json_uses_strings() {
        let v = CoVec::new(vec![rat(1, 2), int(0)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","0"]"#);
        let back: CoVec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
