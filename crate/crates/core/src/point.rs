//! Exact rational points and convex combinations.
//!
//! Coordinates are arbitrary-precision rationals. On the wire a scalar is the
//! canonical string `"num/den"` (lowest terms, positive denominator), so
//! serialized instances and certificates are byte-stable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{GeometryError, Result};

pub type Rat = BigRational;

/// Canonical `num/den` rendering of a rational.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim())
            .map_err(|e| GeometryError::InvalidInput(format!("bad rational {s:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(GeometryError::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Nearest rational with the given power-of-two denominator; used to exactify
/// floating-point search results.
pub fn rat_from_f64_rounded(x: f64, denom_pow2: u32) -> Rat {
    let den = 1i64 << denom_pow2;
    let num = (x * den as f64).round();
    if !num.is_finite() {
        return Rat::zero();
    }
    Rat::new(BigInt::from(num as i128), BigInt::from(den))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Good enough for heuristics; exact paths never round-trip through here.
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rat>,
}

impl Point {
    pub fn new(coords: Vec<Rat>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Point::new(vec![Rat::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &Point) -> Rat {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Point {
        Point::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// `self + t * (other - self)`, the exact point at parameter `t` on the segment.
    pub fn lerp(&self, other: &Point, t: &Rat) -> Point {
        self.add(&other.sub(self).scale(t))
    }

    pub fn dist_sq(&self, other: &Point) -> Rat {
        self.sub(other).norm_sq()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rat_to_f64).collect()
    }

    /// Exact weighted sum `sum w_i p_i`.
    pub fn weighted_sum(points: &[&Point], weights: &[Rat]) -> Point {
        assert!(!points.is_empty());
        let mut acc = Point::zero(points[0].dim());
        for (p, w) in points.iter().zip(weights) {
            acc = acc.add(&p.scale(w));
        }
        acc
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coords.iter().map(rat_to_string).collect();
        strs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let strs: Vec<String> = Vec::deserialize(deserializer)?;
        let coords = strs
            .iter()
            .map(|s| rat_from_str(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Point::new(coords))
    }
}

pub mod rat_serde {
    //! Serde adapter for a single `Rat` rendered as `"num/den"`.
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        rat_to_string(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        rat_from_str(&s).map_err(|e| D::Error::custom(e.to_string()))
    }
}

pub mod rat_vec_serde {
    //! Serde adapter for `Vec<Rat>`.
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(rat_to_string).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let strs: Vec<String> = Vec::deserialize(d)?;
        strs.iter()
            .map(|s| rat_from_str(s).map_err(|e| D::Error::custom(e.to_string())))
            .collect()
    }
}

/// An exact convex combination over some ground point list: distinct indices,
/// strictly positive weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexCombination {
    pub indices: Vec<usize>,
    #[serde(with = "rat_vec_serde")]
    pub weights: Vec<Rat>,
}

impl ConvexCombination {
    pub fn new(indices: Vec<usize>, weights: Vec<Rat>) -> Result<Self> {
        let comb = ConvexCombination { indices, weights };
        comb.validate()?;
        Ok(comb)
    }

    pub fn singleton(index: usize) -> Self {
        ConvexCombination {
            indices: vec![index],
            weights: vec![Rat::one()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.indices.len() != self.weights.len() {
            return Err(GeometryError::InvalidInput(
                "combination index/weight length mismatch".into(),
            ));
        }
        if self.indices.is_empty() {
            return Err(GeometryError::EmptyInput("convex combination"));
        }
        let mut seen = self.indices.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != self.indices.len() {
            return Err(GeometryError::InvalidInput(
                "combination indices not distinct".into(),
            ));
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(GeometryError::InvalidInput(
                "combination weight not strictly positive".into(),
            ));
        }
        let total: Rat = self.weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(GeometryError::InvalidInput(
                "combination weights do not sum to one".into(),
            ));
        }
        Ok(())
    }

    /// Evaluates the combination against its ground point list.
    pub fn evaluate(&self, points: &[Point]) -> Point {
        let sel: Vec<&Point> = self.indices.iter().map(|&i| &points[i]).collect();
        Point::weighted_sum(&sel, &self.weights)
    }

    /// Drops zero-weight entries; used when a solved system produces
    /// boundary weights.
    pub fn from_weights(weights: &[Rat]) -> Result<Self> {
        let mut indices = Vec::new();
        let mut kept = Vec::new();
        for (i, w) in weights.iter().enumerate() {
            if w.is_positive() {
                indices.push(i);
                kept.push(w.clone());
            } else if w.is_negative() {
                return Err(GeometryError::InvalidInput("negative weight".into()));
            }
        }
        ConvexCombination::new(indices, kept)
    }

    pub fn support_size(&self) -> usize {
        self.indices.len()
    }
}
