//! Exact points of P^N(Q).
//!
//! A point is stored by its canonical integer representative: coordinates
//! with gcd 1 and first nonzero entry positive. That makes equality, hashing
//! and the Weil height well defined with no further normalization.

use crate::error::{Error, Result};
use crate::interval::{log_enclosure, HeightInterval};
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A point of P^N(Q) in canonical integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Canonicalizes a rational coordinate tuple.
    pub fn normalize(raw: &[BigRational]) -> Result<ProjPoint> {
        if raw.len() < 2 {
            return Err(Error::InvalidArgument(
                "a projective point needs at least two coordinates".into(),
            ));
        }
        let mut den_lcm = BigInt::one();
        for r in raw {
            den_lcm = den_lcm.lcm(r.denom());
        }
        let ints: Vec<BigInt> = raw.iter().map(|r| r.numer() * (&den_lcm / r.denom())).collect();
        Self::from_integers(&ints)
    }

    /// Canonicalizes an integer coordinate tuple.
    pub fn from_integers(raw: &[BigInt]) -> Result<ProjPoint> {
        if raw.len() < 2 {
            return Err(Error::InvalidArgument(
                "a projective point needs at least two coordinates".into(),
            ));
        }
        let mut g = BigInt::zero();
        for c in raw {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return Err(Error::DegeneratePoint);
        }
        let mut coords: Vec<BigInt> = raw.iter().map(|c| c / &g).collect();
        if coords.iter().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative()) {
            for c in &mut coords {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords })
    }

    /// Ambient dimension N.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// H(P): the max absolute value of the canonical coordinates.
    pub fn max_abs_coord(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().expect("point has coordinates")
    }

    /// Weil height h(P) = log H(P); exact zero when all coordinates lie in
    /// {-1, 0, 1}.
    pub fn weil_height(&self, precision_bits: u32) -> HeightInterval {
        log_enclosure(&self.max_abs_coord(), precision_bits)
            .expect("H(P) >= 1 for a normalized point")
    }

    /// Parses colon syntax `x0:x1:...:xN`; entries may be integers,
    /// fractions `a/b`, or decimals.
    pub fn parse(s: &str) -> Result<ProjPoint> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 2 {
            return Err(Error::Parse(format!("point needs at least two coordinates: {s:?}")));
        }
        let mut raw = Vec::with_capacity(parts.len());
        for p in parts {
            let r = crate::dyadic::parse_rational_decimal(p)
                .ok_or_else(|| Error::Parse(format!("bad coordinate {p:?}")))?;
            raw.push(r);
        }
        Self::normalize(&raw)
    }

    /// Colon rendering of the canonical representative.
    pub fn render(&self) -> String {
        self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut small = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let v = i128::try_from(c)
                .map_err(|_| S::Error::custom("coordinate exceeds the i128 serialization range"))?;
            small.push(v);
        }
        small.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let small = Vec::<i128>::deserialize(deserializer)?;
        let raw: Vec<BigInt> = small.into_iter().map(BigInt::from).collect();
        ProjPoint::from_integers(&raw).map_err(D::Error::custom)
    }
}

/// All points of P^N(Q) with canonical coordinates bounded by `bound`,
/// in ascending lexicographic order of the signed coordinate tuple.
pub fn enumerate_points(n: usize, bound: u32) -> Vec<ProjPoint> {
    assert!(bound >= 1, "coordinate bound must be at least 1");
    let b = bound as i64;
    let mut out = Vec::new();
    let mut tuple = vec![0i64; n + 1];
    walk(&mut tuple, 0, false, b, &mut out);
    out
}

fn walk(tuple: &mut [i64], pos: usize, seen_nonzero: bool, b: i64, out: &mut Vec<ProjPoint>) {
    if pos == tuple.len() {
        if seen_nonzero && tuple_gcd(tuple) == 1 {
            let coords = tuple.iter().map(|&v| BigInt::from(v)).collect();
            out.push(ProjPoint { coords });
        }
        return;
    }
    // Before the first nonzero entry only 0..=b is canonical; after it the
    // full signed range applies. Ascending iteration gives global lex order.
    let lo = if seen_nonzero { -b } else { 0 };
    for v in lo..=b {
        tuple[pos] = v;
        walk(tuple, pos + 1, seen_nonzero || v != 0, b, out);
    }
    tuple[pos] = 0;
}

fn tuple_gcd(tuple: &[i64]) -> i64 {
    let mut g: i64 = 0;
    for &v in tuple {
        g = gcd_i64(g, v.abs());
        if g == 1 {
            return 1;
        }
    }
    g
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
