//! Recovery of a map from point-value data via the monomial matrix.
//!
//! For K = C(N+d, N) points, the K x K matrix whose row j lists the degree-d
//! monomials evaluated at P_j has nonzero determinant exactly when the
//! configuration avoids the degenerate locus. Against its adjugate B and
//! determinant D, the coefficients of any degree-d map phi satisfy the exact
//! identity D * a_iI = sum_j B_Ij * phi_i(P_j), so a full set of raw value
//! tuples determines phi by integer linear algebra alone.
//!
//! Value tuples must be raw polynomial evaluations at the canonical integer
//! representatives: rescaling one tuple independently of the others changes
//! the right-hand sides non-uniformly and silently corrupts the recovery.
//! recover_map therefore re-evaluates the recovered map and insists the
//! given tuples match up to one global rational scalar.

use crate::error::{Error, Result};
use crate::interval::HeightInterval;
use crate::matrix::{adjugate_bigint, determinant_bigint};
use crate::monomial::{monomial_count, monomials};
use crate::morphism::Morphism;
use crate::point::ProjPoint;
use num::{BigInt, BigRational, One, Zero};

/// The evaluated-monomial matrix of a point configuration, with its exact
/// determinant and adjugate.
#[derive(Debug, Clone)]
pub struct MonomialMatrix {
    points: Vec<ProjPoint>,
    entries: Vec<Vec<BigInt>>,
    det: BigInt,
    adjugate: Vec<Vec<BigInt>>,
}

impl MonomialMatrix {
    pub fn new(n: usize, d: u32, points: &[ProjPoint]) -> Result<MonomialMatrix> {
        let k = monomial_count(n + 1, d);
        if points.len() != k {
            return Err(Error::InvalidArgument(format!(
                "a degree-{d} configuration in P^{n} needs exactly {k} points, got {}",
                points.len()
            )));
        }
        for p in points {
            if p.dim() != n {
                return Err(Error::InvalidArgument(format!(
                    "point {p} does not lie in P^{n}"
                )));
            }
        }
        let tuples: Vec<Vec<BigInt>> = points.iter().map(|p| p.coords().to_vec()).collect();
        let entries = monomial_entries(n, d, &tuples);
        let det = determinant_bigint(&entries);
        let adjugate = adjugate_bigint(&entries);
        Ok(MonomialMatrix { points: points.to_vec(), entries, det, adjugate })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn adjugate(&self) -> &[Vec<BigInt>] {
        &self.adjugate
    }

    /// True when the configuration lies in the degenerate locus.
    pub fn is_degenerate(&self) -> bool {
        self.det.is_zero()
    }
}

/// Rows of evaluated degree-d monomials at the given coordinate tuples,
/// without any normalization of the tuples.
pub fn monomial_entries(n: usize, d: u32, tuples: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let basis = monomials(n + 1, d);
    tuples
        .iter()
        .map(|coords| {
            basis
                .iter()
                .map(|expts| {
                    let mut term = BigInt::one();
                    for (c, &e) in coords.iter().zip(expts) {
                        if e > 0 {
                            term *= c.pow(e);
                        }
                    }
                    term
                })
                .collect()
        })
        .collect()
}

/// Reconstructs the unique degree-d map whose raw evaluations at the given
/// points are the given tuples, up to one global scalar.
pub fn recover_map(n: usize, d: u32, pairs: &[(ProjPoint, Vec<BigInt>)]) -> Result<Morphism> {
    let points: Vec<ProjPoint> = pairs.iter().map(|(p, _)| p.clone()).collect();
    let mm = MonomialMatrix::new(n, d, &points)?;
    if mm.is_degenerate() {
        return Err(Error::DegenerateConfiguration(
            "the sample points lie in the degenerate locus (determinant is zero)".into(),
        ));
    }
    let k = points.len();
    for (p, v) in pairs {
        if v.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "value tuple at {p} has {} entries, expected {}",
                v.len(),
                n + 1
            )));
        }
    }

    // D * a_iI = sum_j adj[I][j] * (V_j)_i; content normalization absorbs D
    let rows: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| {
            (0..k)
                .map(|bi| {
                    let mut acc = BigInt::zero();
                    for (j, (_, v)) in pairs.iter().enumerate() {
                        acc += &mm.adjugate[bi][j] * &v[i];
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let recovered = match Morphism::from_coeff_rows(n, d, rows) {
        Ok(m) => m,
        Err(Error::ZeroMap) => {
            return Err(Error::InconsistentValues(
                "the value tuples only admit the zero map".into(),
            ))
        }
        Err(e) => return Err(e),
    };

    // raw re-evaluation must reproduce every tuple with a single scalar
    let mut scalar: Option<BigRational> = None;
    for (p, v) in pairs {
        let raw = recovered
            .evaluate_raw(p)
            .map_err(|e| Error::InconsistentValues(format!("re-evaluation failed at {p}: {e}")))?;
        for (a, b) in raw.iter().zip(v) {
            match &scalar {
                None => {
                    if !b.is_zero() {
                        if a.is_zero() {
                            return Err(inconsistent(p));
                        }
                        scalar = Some(BigRational::new(a.clone(), b.clone()));
                    } else if !a.is_zero() {
                        return Err(inconsistent(p));
                    }
                }
                Some(c) => {
                    if BigRational::from_integer(a.clone())
                        != c * BigRational::from_integer(b.clone())
                    {
                        return Err(inconsistent(p));
                    }
                }
            }
        }
    }
    Ok(recovered)
}

fn inconsistent(p: &ProjPoint) -> Error {
    Error::InconsistentValues(format!(
        "value tuples are not raw evaluations of one map (mismatch at {p}); \
         per-point rescaling breaks recovery"
    ))
}

/// Signed enclosure of d(K-1) sum h(P_j) + sum h(phi(P_j)) - h(phi). Any
/// uniform constant for the configuration inequality must dominate the
/// negative of this, so experiments track the running max of (-slack).
pub fn prop9_slack(
    map: &Morphism,
    points: &[ProjPoint],
    precision_bits: u32,
) -> Result<HeightInterval> {
    let mm = MonomialMatrix::new(map.dim(), map.degree(), points)?;
    if mm.is_degenerate() {
        return Err(Error::DegenerateConfiguration(
            "height slack is only defined off the degenerate locus".into(),
        ));
    }
    let k = points.len();
    let factor = BigRational::from_integer(BigInt::from(map.degree() as usize * (k - 1)));
    let mut sum_h = HeightInterval::exact_zero();
    let mut sum_image = HeightInterval::exact_zero();
    for p in points {
        sum_h = sum_h.add(&p.weil_height(precision_bits), precision_bits);
        let image = map.evaluate(p, 1)?.0;
        sum_image = sum_image.add(&image.weil_height(precision_bits), precision_bits);
    }
    let lhs = sum_h.scale_rational(&factor, precision_bits).add(&sum_image, precision_bits);
    Ok(lhs.sub(&map.naive_height(precision_bits), precision_bits))
}
