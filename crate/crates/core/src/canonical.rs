//! Canonical heights by Tate telescoping.
//!
//! For a verified morphism phi of degree d >= 2 with certificate constant
//! C = max(C_up, C_low), the partial values d^-n h(phi^n(P)) converge to the
//! canonical height at the unconditional rate
//!
//! ```text
//!   |hhat(P) - d^-n h(phi^n(P))| <= C / (d^n (d - 1)),
//! ```
//!
//! so an eps-enclosure needs n with the tail below eps/4 plus an enclosure
//! of h(phi^n(P)) of width eps/2.
//!
//! Iterating phi exactly doubles coordinate sizes every step, which is
//! hopeless at small eps. Instead the normalized iterate is tracked two
//! ways at once:
//!
//! * outward-rounded dyadic intervals around each integer coordinate, at a
//!   working precision that adapts until the final enclosure is tight;
//! * exact residues mod L^m, L = lcm R_j, which determine each step's
//!   coordinate gcd exactly (the certificate identity forces the gcd of a
//!   raw image tuple to divide L when the input is normalized), letting the
//!   intervals be divided by the true content. The modulus sheds one factor
//!   g | L per division, so starting at L^(n+1) keeps every step valid.
//!
//! Preperiodic points short-circuit all of this: an exact revisit in the
//! normalized orbit proves hhat = 0, and the orbit scan is cheap because a
//! preperiodic point satisfies h <= C/(d-1) at every step, giving a small
//! exact bit cutoff beyond which "unknown" is the honest answer.

use crate::certificate::OffsetCertificate;
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{ln_interval, HeightInterval};
use crate::morphism::{Morphism, MorphismStatus};
use crate::point::ProjPoint;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed};
use serde::Serialize;
use std::collections::HashMap;

/// Hard cap on bits per tracked quantity (working precision, content
/// modulus, orbit coordinates) before aborting with a resource error.
pub const DEFAULT_BIT_CEILING: u64 = 1 << 26;

/// Orbit length scanned for an exact revisit before falling back to the
/// Tate limit.
pub const DEFAULT_PREPERIOD_STEPS: usize = 64;

/// Bit guard for the standalone preperiodicity check, where no certificate
/// constant is available to bound preperiodic orbits.
const ORBIT_BIT_GUARD: u64 = 1 << 12;

/// Tuning knobs for canonical-height evaluation.
#[derive(Debug, Clone)]
pub struct TateOpts {
    pub bit_ceiling: u64,
    pub preperiod_steps: usize,
}

impl Default for TateOpts {
    fn default() -> Self {
        TateOpts { bit_ceiling: DEFAULT_BIT_CEILING, preperiod_steps: DEFAULT_PREPERIOD_STEPS }
    }
}

/// Outcome of scanning an orbit for an exact repeated normalized point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preperiodicity {
    /// The orbit revisits itself: phi^(tail + cycle)(P) = phi^tail(P)
    /// exactly, which proves hhat(P) = 0.
    Preperiodic { tail: usize, cycle: usize, orbit: Vec<ProjPoint> },
    /// No revisit within the scanned window.
    Unknown { steps: usize },
}

/// Canonical-height result with the quantities a caller may want to report.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalHeight {
    pub interval: HeightInterval,
    pub n_used: u32,
    #[serde(rename = "C_up")]
    pub c_up: HeightInterval,
    #[serde(rename = "C_low")]
    pub c_low: HeightInterval,
    pub preperiodic: bool,
}

/// Scans the exact normalized orbit of `p` for a revisit.
///
/// `Preperiodic` is returned only on an exact repeat; coordinate growth past
/// an internal bit guard yields `Unknown`, never a false positive.
pub fn preperiodicity_check(
    map: &Morphism,
    p: &ProjPoint,
    max_steps: usize,
) -> Result<Preperiodicity> {
    orbit_scan(map, p, max_steps, ORBIT_BIT_GUARD)
}

fn orbit_scan(
    map: &Morphism,
    p: &ProjPoint,
    max_steps: usize,
    bit_guard: u64,
) -> Result<Preperiodicity> {
    assert!(max_steps >= 1, "orbit scan needs at least one step");
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    let mut orbit = vec![p.clone()];
    seen.insert(p.clone(), 0);
    let mut current = p.clone();
    for step in 1..=max_steps {
        if current.max_abs_coord().bits() > bit_guard {
            return Ok(Preperiodicity::Unknown { steps: step - 1 });
        }
        let (next, _) = map.evaluate(&current, 1)?;
        if let Some(&tail) = seen.get(&next) {
            orbit.push(next);
            return Ok(Preperiodicity::Preperiodic { tail, cycle: step - tail, orbit });
        }
        seen.insert(next.clone(), step);
        orbit.push(next.clone());
        current = next;
    }
    Ok(Preperiodicity::Unknown { steps: max_steps })
}

/// An eps-enclosure of the canonical height of `p` under `map`.
pub fn canonical_height(
    map: &Morphism,
    cert: &OffsetCertificate,
    p: &ProjPoint,
    eps: &BigRational,
    precision_bits: u32,
) -> Result<HeightInterval> {
    Ok(canonical_height_detailed(map, cert, p, eps, precision_bits, &TateOpts::default())?.interval)
}

/// Full canonical-height evaluation with iteration metadata.
pub fn canonical_height_detailed(
    map: &Morphism,
    cert: &OffsetCertificate,
    p: &ProjPoint,
    eps: &BigRational,
    precision_bits: u32,
    opts: &TateOpts,
) -> Result<CanonicalHeight> {
    if map.degree() < 2 {
        return Err(Error::InvalidArgument(
            "canonical heights need degree at least 2".into(),
        ));
    }
    if map.status() != MorphismStatus::Verified {
        return Err(Error::InvalidArgument(
            "canonical heights need a verified morphism; run the certificate search first".into(),
        ));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if p.dim() != map.dim() {
        return Err(Error::InvalidArgument(format!(
            "point lives in P^{} but the map acts on P^{}",
            p.dim(),
            map.dim()
        )));
    }

    let detail = |interval, n_used, preperiodic| CanonicalHeight {
        interval,
        n_used,
        c_up: cert.c_up().clone(),
        c_low: cert.c_low().clone(),
        preperiodic,
    };

    let c = cert.telescoping_constant();
    let cutoff = preperiodic_bit_cutoff(&c, map.degree());
    if let Preperiodicity::Preperiodic { .. } = orbit_scan(map, p, opts.preperiod_steps, cutoff)? {
        return Ok(detail(HeightInterval::exact_zero(), 0, true));
    }

    let (interval, n_used) = tate_enclosure(map, cert, p, eps, precision_bits, opts)?;
    Ok(detail(interval, n_used, false))
}

/// Bit bound satisfied by every point of every preperiodic orbit:
/// h <= C/(d-1), so log2 H <= C/((d-1) ln 2); slack covers the f64 use,
/// which only shifts where the scan gives up and answers unknown.
fn preperiodic_bit_cutoff(c: &Dyadic, d: u32) -> u64 {
    let bound = c.to_f64() / ((d - 1) as f64 * std::f64::consts::LN_2);
    bound.ceil() as u64 + 4
}

fn tate_enclosure(
    map: &Morphism,
    cert: &OffsetCertificate,
    p: &ProjPoint,
    eps: &BigRational,
    precision_bits: u32,
    opts: &TateOpts,
) -> Result<(HeightInterval, u32)> {
    let d = map.degree();
    let c_rat = cert.telescoping_constant().to_rational();

    // smallest n with C/(d^n (d-1)) <= eps/4
    let d_rat = BigRational::from_integer(BigInt::from(d));
    let dm1 = BigRational::from_integer(BigInt::from(d - 1));
    let four = BigRational::from_integer(BigInt::from(4));
    let mut n: u32 = 0;
    let mut dn = BigRational::one();
    let target = &four * &c_rat / (&dm1 * eps);
    while dn < target {
        dn *= &d_rat;
        n += 1;
    }
    let tail = &c_rat / (&dn * &dm1);
    let tail_dyadic = Dyadic::from_rational(&tail, 64, Round::Ceil);

    // exact content factors, one per step, from residues mod L^(n+1)
    let contents = content_factors(map, cert, p, n, opts)?;

    let mut wp = precision_bits.max(48);
    loop {
        if u64::from(wp) > opts.bit_ceiling {
            return Err(Error::ResourceCeiling(format!(
                "working precision exceeded {} bits without reaching eps = {eps}",
                opts.bit_ceiling
            )));
        }
        let mut coords: Vec<HeightInterval> = p
            .coords()
            .iter()
            .map(|c| HeightInterval::point(Dyadic::from_bigint(c)))
            .collect();
        for g in &contents {
            let raw: Vec<HeightInterval> =
                map.rows().iter().map(|f| f.eval_interval(&coords, wp)).collect();
            coords = if g.is_one() {
                raw
            } else {
                let inv = BigRational::new(BigInt::one(), g.clone());
                raw.iter().map(|iv| iv.scale_rational(&inv, wp)).collect()
            };
        }
        // the iterate is a normalized integer tuple, so max |coord| >= 1
        let mut mag = coords[0].abs();
        for iv in &coords[1..] {
            mag = mag.max_with(&iv.abs());
        }
        let mag = mag.clamp_lower(&Dyadic::one());
        let h_n = ln_interval(&mag, wp);
        let scaled = h_n.scale_rational(&dn.recip(), wp);
        let enclosure = scaled.widen(&tail_dyadic, wp);
        let width = enclosure.width_upper(wp).to_rational();
        if &width <= eps {
            return Ok((enclosure.clamp_lower(&Dyadic::zero()), n));
        }
        wp = wp.saturating_mul(2);
    }
}

/// The exact per-step coordinate gcds of the normalized iteration, computed
/// from residues alone: with input gcd 1 the raw gcd g divides L, and
/// gcd(raw mod M, M) = g whenever L | M, so each step needs only modular
/// evaluations. Dividing residues and modulus by g keeps the invariant for
/// the next step.
fn content_factors(
    map: &Morphism,
    cert: &OffsetCertificate,
    p: &ProjPoint,
    n: u32,
    opts: &TateOpts,
) -> Result<Vec<BigInt>> {
    let l = cert.lcm_r();
    if l.is_one() {
        return Ok(vec![BigInt::one(); n as usize]);
    }
    let l_uint = l.to_biguint().expect("lcm of positive R_j is positive");
    let modulus_bits = u64::from(n + 1) * l_uint.bits();
    if modulus_bits > opts.bit_ceiling {
        return Err(Error::ResourceCeiling(format!(
            "content modulus would need about {modulus_bits} bits"
        )));
    }
    let mut m = l_uint.pow(n + 1);
    let mut residues: Vec<BigUint> = p
        .coords()
        .iter()
        .map(|c| {
            c.mod_floor(&BigInt::from(m.clone()))
                .to_biguint()
                .expect("mod_floor of a positive modulus is non-negative")
        })
        .collect();
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let raw: Vec<BigUint> = map.rows().iter().map(|f| f.eval_mod(&residues, &m)).collect();
        let mut g = m.clone();
        for r in &raw {
            g = g.gcd(r);
            if g.is_one() {
                break;
            }
        }
        if g.is_one() {
            residues = raw;
        } else {
            residues = raw.iter().map(|r| r / &g).collect();
            m /= &g;
        }
        out.push(BigInt::from(g));
    }
    Ok(out)
}

/// Exact-orbit bracket d^-n h(phi^n P) +- C/(d^n (d-1)); the slow reference
/// the interval iteration must agree with.
pub fn direct_tate_bracket(
    map: &Morphism,
    cert: &OffsetCertificate,
    p: &ProjPoint,
    n: u32,
    precision_bits: u32,
) -> Result<HeightInterval> {
    let (iterate, _) = map.evaluate(p, n)?;
    let h_n = iterate.weil_height(precision_bits);
    let dn = BigRational::from_integer(BigInt::from(map.degree())).pow(n as i32);
    let dm1 = BigRational::from_integer(BigInt::from(map.degree() - 1));
    let tail = cert.telescoping_constant().to_rational() / (&dn * &dm1);
    let scaled = h_n.scale_rational(&dn.recip(), precision_bits);
    Ok(scaled
        .widen(&Dyadic::from_rational(&tail, 64, Round::Ceil), precision_bits)
        .clamp_lower(&Dyadic::zero()))
}
