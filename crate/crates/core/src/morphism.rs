//! Degree-d rational self-maps of P^N with integer coefficient tensors.
//!
//! A map is N+1 homogeneous forms of degree d, stored dense in the fixed
//! monomial order and normalized like a projective point: global content 1,
//! first nonzero coefficient of the row-major flatten positive. The height
//! h(phi) is the Weil height of that coefficient point.
//!
//! Whether the map is actually a morphism (no common zero over the algebraic
//! closure) is not decided here; `morphism_status` starts `Unverified` and is
//! settled by the certificate machinery.

use crate::error::{Error, Result};
use crate::interval::{log_enclosure, HeightInterval};
use crate::monomial::{monomial_count, monomials, parse_form, HomPoly};
use crate::point::ProjPoint;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismStatus {
    Verified,
    Unverified,
    NotMorphism,
}

/// A degree-d self-map of P^N in canonical integer coefficients.
#[derive(Debug, Clone)]
pub struct Morphism {
    n: usize,
    d: u32,
    rows: Vec<HomPoly>,
    status: MorphismStatus,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Morphism) -> bool {
        self.n == other.n && self.d == other.d && self.rows == other.rows
    }
}

impl Eq for Morphism {}

impl std::hash::Hash for Morphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.d.hash(state);
        self.rows.hash(state);
    }
}

impl Morphism {
    /// Builds a map from one polynomial text per coordinate; rational
    /// coefficients are cleared by a single global scalar.
    pub fn construct<S: AsRef<str>>(n: usize, d: u32, coords: &[S]) -> Result<Morphism> {
        if coords.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "a self-map of P^{n} needs {} coordinates, got {}",
                n + 1,
                coords.len()
            )));
        }
        if d < 1 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let mut rat_rows = Vec::with_capacity(n + 1);
        for c in coords {
            rat_rows.push(parse_form(n + 1, d, c.as_ref())?);
        }
        let mut den = BigInt::one();
        for row in &rat_rows {
            for q in row {
                den = den.lcm(q.denom());
            }
        }
        let int_rows: Vec<Vec<BigInt>> = rat_rows
            .iter()
            .map(|row| row.iter().map(|q| q.numer() * (&den / q.denom())).collect())
            .collect();
        Morphism::from_coeff_rows(n, d, int_rows)
    }

    /// Builds a map from dense integer coefficient rows in the fixed
    /// monomial order, then normalizes.
    pub fn from_coeff_rows(n: usize, d: u32, rows: Vec<Vec<BigInt>>) -> Result<Morphism> {
        assert_eq!(rows.len(), n + 1, "coordinate count");
        let k = monomial_count(n + 1, d);
        for row in &rows {
            assert_eq!(row.len(), k, "dense row length");
        }
        let mut content = BigInt::zero();
        'outer: for row in &rows {
            for c in row {
                content = content.gcd(c);
                if content.is_one() {
                    break 'outer;
                }
            }
        }
        if content.is_zero() {
            return Err(Error::ZeroMap);
        }
        let mut rows = rows;
        let negate = rows
            .iter()
            .flat_map(|r| r.iter())
            .find(|c| !c.is_zero())
            .map_or(false, |c| c.is_negative());
        for row in &mut rows {
            for c in row.iter_mut() {
                *c = &*c / &content;
                if negate {
                    *c = -&*c;
                }
            }
        }
        let rows = rows.into_iter().map(|r| HomPoly::from_coeffs(n + 1, d, r)).collect();
        Ok(Morphism { n, d, rows, status: MorphismStatus::Unverified })
    }

    /// The coordinate power map [x0^d : ... : xN^d].
    pub fn power(n: usize, d: u32) -> Morphism {
        assert!(d >= 1);
        let basis = monomials(n + 1, d);
        let rows = (0..=n)
            .map(|i| {
                let mut coeffs = vec![BigInt::zero(); basis.len()];
                let target: Vec<u32> =
                    (0..=n).map(|v| if v == i { d } else { 0 }).collect();
                let idx = basis.iter().position(|m| *m == target).unwrap();
                coeffs[idx] = BigInt::one();
                HomPoly::from_coeffs(n + 1, d, coeffs)
            })
            .collect();
        Morphism { n, d, rows, status: MorphismStatus::Unverified }
    }

    /// The family [x^d + A x^(d-1) y : y^d] on P^1.
    pub fn phi_a(d: u32, a: &BigInt) -> Result<Morphism> {
        if a.is_zero() {
            return Err(Error::InvalidArgument("phi_A requires A nonzero".into()));
        }
        assert!(d >= 1);
        let basis = monomials(2, d);
        let mut row0 = vec![BigInt::zero(); basis.len()];
        row0[basis.iter().position(|m| m == &[d, 0]).unwrap()] = BigInt::one();
        row0[basis.iter().position(|m| m == &[d - 1, 1]).unwrap()] = a.clone();
        let mut row1 = vec![BigInt::zero(); basis.len()];
        row1[basis.iter().position(|m| m == &[0, d]).unwrap()] = BigInt::one();
        Morphism::from_coeff_rows(1, d, vec![row0, row1])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn rows(&self) -> &[HomPoly] {
        &self.rows
    }

    pub fn status(&self) -> MorphismStatus {
        self.status
    }

    pub fn set_status(&mut self, status: MorphismStatus) {
        self.status = status;
    }

    /// Row-major flatten of the coefficient tensor: the coordinates of the
    /// corresponding projective point.
    pub fn coeff_point(&self) -> Vec<BigInt> {
        self.rows.iter().flat_map(|r| r.coeffs().iter().cloned()).collect()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.rows.iter().map(|r| r.max_abs_coeff()).max().expect("rows nonempty")
    }

    /// h(phi): the Weil height of the coefficient point.
    pub fn naive_height(&self, precision_bits: u32) -> HeightInterval {
        log_enclosure(&self.max_abs_coeff(), precision_bits)
            .expect("normalized coefficients have max >= 1")
    }

    /// Un-normalized evaluation at the canonical representative of P.
    pub fn evaluate_raw(&self, p: &ProjPoint) -> Result<Vec<BigInt>> {
        if p.dim() != self.n {
            return Err(Error::InvalidArgument(format!(
                "point lives in P^{} but the map acts on P^{}",
                p.dim(),
                self.n
            )));
        }
        let raw: Vec<BigInt> = self.rows.iter().map(|f| f.eval_bigint(p.coords())).collect();
        if raw.iter().all(|c| c.is_zero()) {
            return Err(Error::BaseLocus);
        }
        Ok(raw)
    }

    /// phi^n(P) with a coordinate-size guard; also returns the raw tuple of
    /// the final application step (for n = 1, the raw evaluation at P).
    pub fn evaluate_with_ceiling(
        &self,
        p: &ProjPoint,
        iterations: u32,
        bit_ceiling: u64,
    ) -> Result<(ProjPoint, Vec<BigInt>)> {
        assert!(iterations >= 1);
        let overhead = (monomial_count(self.n + 1, self.d) as u64).max(2).ilog2() as u64
            + self.max_abs_coeff().bits()
            + 2;
        let mut current = p.clone();
        let mut last_raw = Vec::new();
        for _ in 0..iterations {
            let in_bits = current.max_abs_coord().bits();
            let predicted = self.d as u64 * in_bits + overhead;
            if predicted > bit_ceiling {
                return Err(Error::ResourceCeiling(format!(
                    "iterate coordinates near 2^{predicted} bits exceed the {bit_ceiling}-bit ceiling"
                )));
            }
            last_raw = self.evaluate_raw(&current)?;
            current = ProjPoint::from_integers(&last_raw)?;
        }
        Ok((current, last_raw))
    }

    /// phi^n(P) and the raw tuple of the final step, unguarded.
    pub fn evaluate(&self, p: &ProjPoint, iterations: u32) -> Result<(ProjPoint, Vec<BigInt>)> {
        self.evaluate_with_ceiling(p, iterations, u64::MAX)
    }

    /// True when every row is a single monomial x_j^d with coefficient +-1
    /// and the rows hit each variable exactly once. For such maps
    /// H(phi(P)) = H(P)^d holds as an integer identity, with no offsets.
    pub fn is_coordinate_power_map(&self) -> bool {
        let mut hit = vec![false; self.n + 1];
        let basis = monomials(self.n + 1, self.d);
        for row in &self.rows {
            let mut found: Option<usize> = None;
            for (idx, c) in row.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !c.abs().is_one() || found.is_some() {
                    return false;
                }
                let expts = &basis[idx];
                match (0..=self.n).find(|&v| expts[v] == self.d) {
                    Some(v) => found = Some(v),
                    None => return false,
                }
            }
            match found {
                Some(v) if !hit[v] => hit[v] = true,
                _ => return false,
            }
        }
        hit.iter().all(|&h| h)
    }

    /// Polynomial texts per coordinate, in the parseable grammar.
    pub fn coord_texts(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.render()).collect()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coord_texts().join(" : "))
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    #[serde(rename = "N")]
    n: usize,
    d: u32,
    coords: Vec<String>,
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismRepr { n: self.n, d: self.d, coords: self.coord_texts() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MorphismRepr::deserialize(deserializer)?;
        Morphism::construct(repr.n, repr.d, &repr.coords).map_err(serde::de::Error::custom)
    }
}

/// Clears a rational coefficient tensor to integers by one global scalar.
pub fn clear_denominators(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    let mut den = BigInt::one();
    for row in rows {
        for q in row {
            den = den.lcm(q.denom());
        }
    }
    rows.iter()
        .map(|row| row.iter().map(|q| q.numer() * (&den / q.denom())).collect())
        .collect()
}
