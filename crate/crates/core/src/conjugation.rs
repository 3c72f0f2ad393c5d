//! Coordinate changes: the projective linear action on morphisms and the
//! exhaustive search for coordinate changes that bring two maps close.
//!
//! An invertible integer matrix f acts on a map by phi^f = f^-1 o phi o f,
//! realized exactly: the inverse is the integer adjugate (a projective
//! inverse), the composition substitutes linear forms into the coordinate
//! polynomials, and the result is content-normalized. Conjugation preserves
//! degree and morphism-ness, and canonical heights transform by
//! hhat_{phi^f}(P) = hhat_phi(f(P)).
//!
//! The class-level distance between two maps is an infimum over coordinate
//! changes. Whether it is attained is unknown; the search enumerates all
//! integer representatives with entries up to a bound and reports the full
//! table of estimates, never claiming attainment.

use crate::certificate::VerifiedMorphism;
use crate::distance::{sup_estimates, DistanceEstimate, DistanceMode};
use crate::error::{Error, Result};
use crate::matrix::{adjugate_bigint, determinant_bigint, mat_mul_bigint};
use crate::monomial::{monomials, HomPoly};
use crate::morphism::Morphism;
use crate::point::ProjPoint;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use rayon::prelude::*;
use std::collections::HashSet;
use std::fmt;

/// An element of the projective linear group over Q, held as the canonical
/// integer representative: content 1, first nonzero entry positive,
/// determinant nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PglMap {
    matrix: Vec<Vec<BigInt>>,
}

impl PglMap {
    pub fn new(matrix: Vec<Vec<BigInt>>) -> Result<PglMap> {
        let size = matrix.len();
        if size < 2 || matrix.iter().any(|row| row.len() != size) {
            return Err(Error::InvalidArgument(
                "a projective change of coordinates needs a square matrix of size at least 2".into(),
            ));
        }
        let mut content = BigInt::zero();
        for row in &matrix {
            for e in row {
                content = content.gcd(e);
            }
        }
        if content.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut rows: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|row| row.iter().map(|e| e / &content).collect())
            .collect();
        if rows.iter().flatten().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative()) {
            for row in &mut rows {
                for e in row.iter_mut() {
                    *e = -std::mem::take(e);
                }
            }
        }
        if determinant_bigint(&rows).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(PglMap { matrix: rows })
    }

    pub fn identity(n: usize) -> PglMap {
        let size = n + 1;
        let matrix = (0..size)
            .map(|i| (0..size).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        PglMap { matrix }
    }

    /// Dimension N of the space P^N acted on.
    pub fn dim(&self) -> usize {
        self.matrix.len() - 1
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    /// The projective inverse: the adjugate, renormalized.
    pub fn inverse(&self) -> PglMap {
        PglMap::new(adjugate_bigint(&self.matrix)).expect("adjugate of invertible is invertible")
    }

    /// self after other (matrix product).
    pub fn compose(&self, other: &PglMap) -> Result<PglMap> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidArgument("composing maps of different sizes".into()));
        }
        PglMap::new(mat_mul_bigint(&self.matrix, &other.matrix))
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "point {p} does not lie in P^{}",
                self.dim()
            )));
        }
        let coords: Vec<BigInt> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(p.coords()).map(|(a, x)| a * x).sum())
            .collect();
        ProjPoint::from_integers(&coords)
    }

    /// Parses "a,b;c,d" row-major syntax.
    pub fn parse(s: &str) -> Result<PglMap> {
        let rows: Vec<Vec<BigInt>> = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| {
                        e.trim().parse::<BigInt>().map_err(|_| {
                            Error::Parse(format!("bad matrix entry {:?}", e.trim()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PglMap::new(rows)
    }

    pub fn render(&self) -> String {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for PglMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// phi^f = f^-1 o phi o f, content-normalized; degree and status carry over.
pub fn conjugate(map: &Morphism, f: &PglMap) -> Result<Morphism> {
    if map.dim() != f.dim() {
        return Err(Error::InvalidArgument(
            "coordinate change and morphism act on different spaces".into(),
        ));
    }
    let nv = map.dim() + 1;
    let forms: Vec<HomPoly> = f
        .matrix()
        .iter()
        .map(|row| HomPoly::from_coeffs(nv, 1, row.clone()))
        .collect();
    let composed: Vec<HomPoly> = map.rows().iter().map(|p| substitute_linear(p, &forms)).collect();
    let adj = adjugate_bigint(f.matrix());
    let rows: Vec<Vec<BigInt>> = (0..nv)
        .map(|i| {
            let mut acc = HomPoly::zero(nv, map.degree());
            for (k, comp) in composed.iter().enumerate() {
                acc = acc.add(&comp.scale(&adj[i][k]));
            }
            acc.coeffs().to_vec()
        })
        .collect();
    let mut out = Morphism::from_coeff_rows(map.dim(), map.degree(), rows)?;
    out.set_status(map.status());
    Ok(out)
}

/// Substitutes the degree-1 forms for the variables of `poly`.
fn substitute_linear(poly: &HomPoly, forms: &[HomPoly]) -> HomPoly {
    let nv = poly.nvars();
    let mut acc = HomPoly::zero(nv, poly.degree());
    for (expts, c) in monomials(nv, poly.degree()).iter().zip(poly.coeffs()) {
        if c.is_zero() {
            continue;
        }
        let mut term = HomPoly::from_coeffs(nv, 0, vec![BigInt::one()]);
        for (form, &e) in forms.iter().zip(expts) {
            for _ in 0..e {
                term = term.mul(form);
            }
        }
        acc = acc.add(&term.scale(c));
    }
    acc
}

/// All canonical integer representatives with entries in [-bound, bound],
/// in deterministic enumeration order.
pub fn enumerate_pgl(n: usize, entry_bound: u32) -> Vec<PglMap> {
    assert!(entry_bound >= 1, "entry bound must be at least 1");
    let size = n + 1;
    let cells = size * size;
    let m = entry_bound as i64;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut entries = vec![-m; cells];
    'outer: loop {
        let matrix: Vec<Vec<BigInt>> =
            (0..size).map(|i| (0..size).map(|j| BigInt::from(entries[i * size + j])).collect()).collect();
        if let Ok(f) = PglMap::new(matrix) {
            if seen.insert(f.clone()) {
                out.push(f);
            }
        }
        for slot in (0..cells).rev() {
            if entries[slot] < m {
                entries[slot] += 1;
                continue 'outer;
            }
            entries[slot] = -m;
        }
        break;
    }
    out
}

/// Exhaustive small-entry exploration of the class-level distance: for every
/// coordinate change f with entries up to `entry_bound`, estimate the height
/// gap between phi^f and psi, and return the candidate minimizing the upper
/// bound together with the full table.
pub fn dynamical_distance_search(
    phi: &VerifiedMorphism,
    psi: &VerifiedMorphism,
    entry_bound: u32,
    sample_bound: u32,
    eps: &BigRational,
    precision_bits: u32,
) -> Result<(PglMap, DistanceEstimate, Vec<(PglMap, DistanceEstimate)>)> {
    if phi.dim() != psi.dim() {
        return Err(Error::InvalidArgument("morphisms act on different spaces".into()));
    }
    let candidates = enumerate_pgl(phi.dim(), entry_bound);
    let table: Vec<(PglMap, DistanceEstimate)> = candidates
        .into_par_iter()
        .map(|f| {
            let conj = VerifiedMorphism::new(conjugate(phi.map(), &f)?)?;
            let est = sup_estimates(
                DistanceMode::HeightGap,
                &conj,
                Some(psi),
                sample_bound,
                eps,
                precision_bits,
            )?;
            Ok((f, est))
        })
        .collect::<Result<Vec<_>>>()?;
    // first index wins ties: deterministic in enumeration order
    let mut best = 0usize;
    for (idx, (_, est)) in table.iter().enumerate().skip(1) {
        if est.upper().cmp_exact(table[best].1.upper()).is_lt() {
            best = idx;
        }
    }
    Ok((table[best].0.clone(), table[best].1.clone(), table))
}
