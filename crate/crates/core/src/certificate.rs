//! Exact height-offset certificates.
//!
//! A certificate for a map phi of degree d on P^N is the polynomial identity
//!
//! ```text
//!   R_j * x_j^t = sum_i G_ij(x) * phi_i(x)      for every j,
//! ```
//!
//! with t = (N+1)(d-1) + 1, integer cofactors G_ij of degree t - d, and
//! positive integers R_j. Such an identity exists at this t exactly when the
//! coordinate forms have no common zero over the algebraic closure, so
//! finding one doubles as the morphism test. From the identity follow the
//! two-sided height offsets
//!
//! ```text
//!   d*h(P) - C_low <= h(phi(P)) <= d*h(P) + C_up
//! ```
//!
//! with C_up = log(K * max|a_iI|) and C_low = log((N+1) * C_G * lcm R_j),
//! where C_G = max_j sum_i (sum of |coefficients| of G_ij). The lower bound
//! uses the finite-place fact that gcd of the raw tuple divides lcm R_j.
//!
//! For N = 1 the system is solved classically: the identity coefficients are
//! rows of the adjugate of the Sylvester matrix and R_j is the resultant.

use crate::error::{Error, Result};
use crate::interval::{log_enclosure, HeightInterval};
use crate::matrix::{adjugate_bigint, determinant_bigint, solve_particular};
use crate::monomial::{monomial_count, monomials, HomPoly};
use crate::morphism::{Morphism, MorphismStatus};
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact data certifying the two-sided height offsets of a morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetCertificate {
    n: usize,
    d: u32,
    t: u32,
    r: Vec<BigInt>,
    /// g[j][i] = G_ij, the cofactor of phi_i in the identity for x_j.
    g: Vec<Vec<HomPoly>>,
    c_up: HeightInterval,
    c_low: HeightInterval,
    /// Set for coordinate power maps, where H(phi(P)) = H(P)^d is an exact
    /// integer identity and the true offsets are zero; the formula constants
    /// above remain valid but downstream error control may use zero instead.
    exact: bool,
}

/// Default precision for the offset enclosures stored on a certificate.
const CERT_PRECISION: u32 = 64;

impl OffsetCertificate {
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn r(&self) -> &[BigInt] {
        &self.r
    }

    pub fn cofactor(&self, j: usize, i: usize) -> &HomPoly {
        &self.g[j][i]
    }

    pub fn c_up(&self) -> &HeightInterval {
        &self.c_up
    }

    pub fn c_low(&self) -> &HeightInterval {
        &self.c_low
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn lcm_r(&self) -> BigInt {
        self.r.iter().fold(BigInt::one(), |acc, r| acc.lcm(r))
    }

    /// max_j sum_i (sum of |coefficients| of G_ij).
    pub fn cofactor_weight(&self) -> BigInt {
        self.g
            .iter()
            .map(|row| row.iter().map(|p| p.sum_abs_coeffs()).sum::<BigInt>())
            .max()
            .expect("certificate has rows")
    }

    /// Upper bound on both offsets, used by Tate telescoping; zero when the
    /// power-map identity makes the true offsets vanish.
    pub fn telescoping_constant(&self) -> crate::dyadic::Dyadic {
        if self.exact {
            return crate::dyadic::Dyadic::zero();
        }
        std::cmp::max(self.c_up.hi().clone(), self.c_low.hi().clone())
    }

    /// Checks the exact polynomial identity and the stored enclosures
    /// against `map`.
    pub fn verify(&self, map: &Morphism) -> Result<()> {
        if map.dim() != self.n || map.degree() != self.d {
            return Err(Error::InvalidCertificate(format!(
                "certificate is for (N, d) = ({}, {}), map has ({}, {})",
                self.n,
                self.d,
                map.dim(),
                map.degree()
            )));
        }
        let n = self.n;
        if self.t != (n as u32 + 1) * (self.d - 1) + 1 {
            return Err(Error::InvalidCertificate("unexpected certificate degree".into()));
        }
        if self.r.len() != n + 1 || self.g.len() != n + 1 {
            return Err(Error::InvalidCertificate("certificate shape mismatch".into()));
        }
        for j in 0..=n {
            if !self.r[j].is_positive() {
                return Err(Error::InvalidCertificate(format!("R_{j} is not positive")));
            }
            if self.g[j].len() != n + 1 {
                return Err(Error::InvalidCertificate("cofactor row length mismatch".into()));
            }
            let mut lhs = HomPoly::zero(n + 1, self.t);
            for i in 0..=n {
                if self.g[j][i].degree() != self.t - self.d {
                    return Err(Error::InvalidCertificate("cofactor degree mismatch".into()));
                }
                lhs = lhs.add(&self.g[j][i].mul(&map.rows()[i]));
            }
            let mut target_expts = vec![0u32; n + 1];
            target_expts[j] = self.t;
            let target = HomPoly::monomial(n + 1, &target_expts, self.r[j].clone());
            if lhs != target {
                return Err(Error::InvalidCertificate(format!(
                    "identity fails for x_{j}: expansion is not R_{j} * x_{j}^{}",
                    self.t
                )));
            }
        }
        let (up, low) = offsets(map, self, CERT_PRECISION + 32)?;
        if !self.c_up.overlaps(&up) || !self.c_low.overlaps(&low) {
            return Err(Error::InvalidCertificate(
                "stored offset enclosures do not match the certificate data".into(),
            ));
        }
        if self.exact != map.is_coordinate_power_map() {
            return Err(Error::InvalidCertificate(
                "exactness flag does not match the map".into(),
            ));
        }
        Ok(())
    }
}

/// The certified offset enclosures of a certificate, recomputed from its
/// exact data at the requested precision.
pub fn offsets(
    map: &Morphism,
    cert: &OffsetCertificate,
    precision_bits: u32,
) -> Result<(HeightInterval, HeightInterval)> {
    if map.dim() != cert.n || map.degree() != cert.d {
        return Err(Error::InvalidCertificate("certificate does not belong to this map".into()));
    }
    let k = monomial_count(map.dim() + 1, map.degree());
    let up_arg = BigInt::from(k) * map.max_abs_coeff();
    let c_up = log_enclosure(&up_arg, precision_bits)?;
    let low_arg = BigInt::from(map.dim() + 1) * cert.cofactor_weight() * cert.lcm_r();
    let c_low = log_enclosure(&low_arg, precision_bits)?;
    Ok((c_up, c_low))
}

/// Searches for a certificate at the Macaulay degree; failure to solve means
/// the coordinate forms share a zero over the algebraic closure.
pub fn find_certificate(map: &Morphism) -> Result<OffsetCertificate> {
    let n = map.dim();
    let d = map.degree();
    let t = (n as u32 + 1) * (d - 1) + 1;
    let g = if n == 1 { sylvester_cofactors(map, t)? } else { macaulay_cofactors(map, t)? };
    let (g, r) = reduce_rows(g);
    build_certificate(map, t, r, g)
}

fn build_certificate(
    map: &Morphism,
    t: u32,
    r: Vec<BigInt>,
    g: Vec<Vec<HomPoly>>,
) -> Result<OffsetCertificate> {
    let mut cert = OffsetCertificate {
        n: map.dim(),
        d: map.degree(),
        t,
        r,
        g,
        c_up: HeightInterval::exact_zero(),
        c_low: HeightInterval::exact_zero(),
        exact: map.is_coordinate_power_map(),
    };
    let (c_up, c_low) = offsets(map, &cert, CERT_PRECISION)?;
    cert.c_up = c_up;
    cert.c_low = c_low;
    cert.verify(map)?;
    Ok(cert)
}

/// Scaled integer cofactor rows with their R_j, before common-factor
/// reduction: each row j arrives with an implicit scalar r[j].
type ScaledRows = Vec<(BigInt, Vec<HomPoly>)>;

fn reduce_rows(rows: ScaledRows) -> (Vec<Vec<HomPoly>>, Vec<BigInt>) {
    let mut g = Vec::with_capacity(rows.len());
    let mut r = Vec::with_capacity(rows.len());
    for (rj, polys) in rows {
        let mut common = rj.clone();
        for p in &polys {
            common = common.gcd(&p.content());
            if common.is_one() {
                break;
            }
        }
        let reduced: Vec<HomPoly> = if common.is_one() {
            polys
        } else {
            polys.iter().map(|p| scale_down(p, &common)).collect()
        };
        r.push(&rj / &common);
        g.push(reduced);
    }
    (g, r)
}

fn scale_down(p: &HomPoly, k: &BigInt) -> HomPoly {
    let coeffs = p.coeffs().iter().map(|c| c / k).collect();
    HomPoly::from_coeffs(p.nvars(), p.degree(), coeffs)
}

/// N = 1: the Sylvester matrix of the two coordinate forms. Row k expands
/// x^(d-1-k) y^k * phi_0 and row d+k expands x^(d-1-k) y^k * phi_1, in the
/// degree 2d-1 monomial basis; rows of the adjugate then give the cofactors
/// of Res * x^(2d-1) and Res * y^(2d-1).
fn sylvester_cofactors(map: &Morphism, t: u32) -> Result<ScaledRows> {
    let d = map.degree() as usize;
    let size = 2 * d;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for (which, row_poly) in map.rows().iter().enumerate() {
        for k in 0..d {
            for (m, c) in row_poly.coeffs().iter().enumerate() {
                s[which * d + k][k + m] = c.clone();
            }
        }
    }
    let res = determinant_bigint(&s);
    if res.is_zero() {
        return Err(Error::NotAMorphism(
            "the coordinate forms have a common root: resultant is zero".into(),
        ));
    }
    let adj = adjugate_bigint(&s);
    let flip = res.is_negative();
    let mut out = Vec::with_capacity(2);
    for adj_row in [0usize, size - 1] {
        let halves: Vec<HomPoly> = (0..2)
            .map(|i| {
                let coeffs: Vec<BigInt> = adj[adj_row][i * d..(i + 1) * d]
                    .iter()
                    .map(|c| if flip { -c } else { c.clone() })
                    .collect();
                HomPoly::from_coeffs(2, t - map.degree(), coeffs)
            })
            .collect();
        out.push((res.abs(), halves));
    }
    Ok(out)
}

/// General N: solve the degree-t linear system for each target variable.
fn macaulay_cofactors(map: &Morphism, t: u32) -> Result<ScaledRows> {
    let n = map.dim();
    let d = map.degree();
    let nv = n + 1;
    let gdeg = t - d;
    let basis_g = monomials(nv, gdeg);
    let basis_t = monomials(nv, t);
    let basis_d = monomials(nv, d);
    let pos_t: std::collections::HashMap<&[u32], usize> =
        basis_t.iter().enumerate().map(|(idx, m)| (m.as_slice(), idx)).collect();
    let m_per_poly = basis_g.len();
    let cols = nv * m_per_poly;
    let mut a = vec![vec![BigRational::zero(); cols]; basis_t.len()];
    for i in 0..nv {
        for (ai, alpha) in basis_g.iter().enumerate() {
            let col = i * m_per_poly + ai;
            for (gi, gamma) in basis_d.iter().enumerate() {
                let c = &map.rows()[i].coeffs()[gi];
                if c.is_zero() {
                    continue;
                }
                let sum: Vec<u32> = alpha.iter().zip(gamma).map(|(x, y)| x + y).collect();
                let row = pos_t[sum.as_slice()];
                a[row][col] += BigRational::from_integer(c.clone());
            }
        }
    }
    let mut out = Vec::with_capacity(nv);
    for j in 0..nv {
        let mut rhs = vec![BigRational::zero(); basis_t.len()];
        let mut target = vec![0u32; nv];
        target[j] = t;
        rhs[pos_t[target.as_slice()]] = BigRational::one();
        let Some(solution) = solve_particular(&a, &rhs) else {
            return Err(Error::NotAMorphism(format!(
                "x_{j}^{t} is not in the coordinate ideal at the Macaulay degree"
            )));
        };
        let mut den = BigInt::one();
        for v in &solution {
            den = den.lcm(v.denom());
        }
        let polys: Vec<HomPoly> = (0..nv)
            .map(|i| {
                let coeffs: Vec<BigInt> = solution[i * m_per_poly..(i + 1) * m_per_poly]
                    .iter()
                    .map(|q| q.numer() * (&den / q.denom()))
                    .collect();
                HomPoly::from_coeffs(nv, gdeg, coeffs)
            })
            .collect();
        out.push((den, polys));
    }
    Ok(out)
}

/// Runs the certificate search and records the outcome on the map's status.
pub fn certify(map: &mut Morphism) -> Result<OffsetCertificate> {
    match find_certificate(map) {
        Ok(cert) => {
            map.set_status(MorphismStatus::Verified);
            Ok(cert)
        }
        Err(e) => {
            if matches!(e, Error::NotAMorphism(_)) {
                map.set_status(MorphismStatus::NotMorphism);
            }
            Err(e)
        }
    }
}

/// A morphism bundled with its verified certificate.
#[derive(Debug, Clone)]
pub struct VerifiedMorphism {
    map: Morphism,
    cert: OffsetCertificate,
}

impl VerifiedMorphism {
    pub fn new(mut map: Morphism) -> Result<VerifiedMorphism> {
        let cert = certify(&mut map)?;
        Ok(VerifiedMorphism { map, cert })
    }

    pub fn map(&self) -> &Morphism {
        &self.map
    }

    pub fn into_map(self) -> Morphism {
        self.map
    }

    pub fn cert(&self) -> &OffsetCertificate {
        &self.cert
    }

    pub fn degree(&self) -> u32 {
        self.map.degree()
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    #[serde(rename = "N")]
    n: usize,
    d: u32,
    t: u32,
    #[serde(rename = "R")]
    r: Vec<i128>,
    #[serde(rename = "G")]
    g: Vec<Vec<Vec<i128>>>,
    c_up: HeightInterval,
    c_low: HeightInterval,
    exact: bool,
}

impl Serialize for OffsetCertificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let to128 = |v: &BigInt| {
            i128::try_from(v).map_err(|_| {
                serde::ser::Error::custom("certificate entry exceeds the i128 serialization range")
            })
        };
        let mut g = Vec::with_capacity(self.g.len());
        for row in &self.g {
            let mut out_row = Vec::with_capacity(row.len());
            for p in row {
                out_row.push(p.coeffs().iter().map(&to128).collect::<std::result::Result<Vec<_>, _>>()?);
            }
            g.push(out_row);
        }
        CertificateRepr {
            n: self.n,
            d: self.d,
            t: self.t,
            r: self.r.iter().map(&to128).collect::<std::result::Result<Vec<_>, _>>()?,
            g,
            c_up: self.c_up.clone(),
            c_low: self.c_low.clone(),
            exact: self.exact,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OffsetCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CertificateRepr::deserialize(deserializer)?;
        if repr.d < 1 || repr.t <= repr.d {
            return Err(serde::de::Error::custom("certificate degrees out of range"));
        }
        let gdeg = repr.t - repr.d;
        let nv = repr.n + 1;
        let expect = monomial_count(nv, gdeg);
        let mut g = Vec::with_capacity(repr.g.len());
        for row in &repr.g {
            let mut out_row = Vec::with_capacity(row.len());
            for coeffs in row {
                if coeffs.len() != expect {
                    return Err(serde::de::Error::custom("cofactor coefficient list length"));
                }
                out_row.push(HomPoly::from_coeffs(
                    nv,
                    gdeg,
                    coeffs.iter().map(|&c| BigInt::from(c)).collect(),
                ));
            }
            g.push(out_row);
        }
        Ok(OffsetCertificate {
            n: repr.n,
            d: repr.d,
            t: repr.t,
            r: repr.r.into_iter().map(BigInt::from).collect(),
            g,
            c_up: repr.c_up,
            c_low: repr.c_low,
            exact: repr.exact,
        })
    }
}
