//! Certified real enclosures for height values, in natural-log units.
//!
//! A [`HeightInterval`] is a pair of dyadic endpoints `[lo, hi]` with
//! `lo <= hi`, produced so that the exact real quantity being measured is
//! guaranteed to lie inside. All operations round outward. The distinguished
//! exact-zero interval `[0, 0]` marks values known to be exactly zero (height
//! of a point with coordinates in {-1, 0, 1}, canonical height of a
//! preperiodic point).
//!
//! The only transcendental function needed is the natural log, computed by
//! the atanh series with an explicit tail bound, so every enclosure here is a
//! theorem about the dyadic endpoints rather than a float approximation.

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Decimal digits used when serializing endpoints; parsing precision on read.
const SERIAL_DIGITS: u32 = 30;
const DESERIAL_BITS: u32 = 192;

/// A certified enclosure `[lo, hi]` of a real value, endpoints in nats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl HeightInterval {
    /// The distinguished exact-zero interval.
    pub fn exact_zero() -> HeightInterval {
        HeightInterval { lo: Dyadic::zero(), hi: Dyadic::zero() }
    }

    pub fn point(v: Dyadic) -> HeightInterval {
        HeightInterval { lo: v.clone(), hi: v }
    }

    pub fn from_endpoints(lo: Dyadic, hi: Dyadic) -> HeightInterval {
        assert!(lo.cmp_exact(&hi) != std::cmp::Ordering::Greater, "inverted interval endpoints");
        HeightInterval { lo, hi }
    }

    /// Outward enclosure of an exact rational.
    pub fn from_rational(q: &BigRational, precision_bits: u32) -> HeightInterval {
        HeightInterval {
            lo: Dyadic::from_rational(q, precision_bits, Round::Floor),
            hi: Dyadic::from_rational(q, precision_bits, Round::Ceil),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        self.lo.cmp_rational(q) != std::cmp::Ordering::Greater
            && self.hi.cmp_rational(q) != std::cmp::Ordering::Less
    }

    pub fn contains_dyadic(&self, v: &Dyadic) -> bool {
        self.lo.cmp_exact(v) != std::cmp::Ordering::Greater
            && self.hi.cmp_exact(v) != std::cmp::Ordering::Less
    }

    pub fn contains_interval(&self, other: &HeightInterval) -> bool {
        self.contains_dyadic(&other.lo) && self.contains_dyadic(&other.hi)
    }

    pub fn overlaps(&self, other: &HeightInterval) -> bool {
        self.lo.cmp_exact(&other.hi) != std::cmp::Ordering::Greater
            && other.lo.cmp_exact(&self.hi) != std::cmp::Ordering::Greater
    }

    /// Upper bound on the width `hi - lo`.
    pub fn width_upper(&self, precision_bits: u32) -> Dyadic {
        self.hi.sub_round(&self.lo, precision_bits, Round::Ceil)
    }

    /// Heuristic midpoint for display only.
    pub fn midpoint_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn neg(&self) -> HeightInterval {
        HeightInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &HeightInterval, precision_bits: u32) -> HeightInterval {
        // add_round, not add_exact: endpoints at wildly different scales
        // would otherwise align mantissas across the whole exponent gap
        HeightInterval {
            lo: self.lo.add_round(&other.lo, precision_bits, Round::Floor),
            hi: self.hi.add_round(&other.hi, precision_bits, Round::Ceil),
        }
    }

    pub fn sub(&self, other: &HeightInterval, precision_bits: u32) -> HeightInterval {
        self.add(&other.neg(), precision_bits)
    }

    /// Enclosure of |x| over the interval.
    pub fn abs(&self) -> HeightInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let mag = std::cmp::max(self.lo.neg(), self.hi.clone());
            HeightInterval { lo: Dyadic::zero(), hi: mag }
        }
    }

    /// Enclosure of |x - y|.
    pub fn abs_diff(&self, other: &HeightInterval, precision_bits: u32) -> HeightInterval {
        self.sub(other, precision_bits).abs()
    }

    /// Enclosure of max(x, y); exact on the endpoints.
    pub fn max_with(&self, other: &HeightInterval) -> HeightInterval {
        HeightInterval {
            lo: std::cmp::max(self.lo.clone(), other.lo.clone()),
            hi: std::cmp::max(self.hi.clone(), other.hi.clone()),
        }
    }

    /// Multiplication by an exact rational (denominator positive).
    pub fn scale_rational(&self, q: &BigRational, precision_bits: u32) -> HeightInterval {
        let num = Dyadic::from_bigint(q.numer());
        let den = Dyadic::from_bigint(q.denom());
        let ends = if q.is_negative() { (&self.hi, &self.lo) } else { (&self.lo, &self.hi) };
        let lo = ends.0.mul_round(&num, u32::MAX, Round::Floor).div_round(
            &den,
            precision_bits,
            Round::Floor,
        );
        let hi = ends.1.mul_round(&num, u32::MAX, Round::Ceil).div_round(
            &den,
            precision_bits,
            Round::Ceil,
        );
        HeightInterval { lo, hi }
    }

    /// Full interval product, exact endpoint products before the final round.
    pub fn mul(&self, other: &HeightInterval, precision_bits: u32) -> HeightInterval {
        let products = [
            self.lo.mul_round(&other.lo, u32::MAX, Round::Floor),
            self.lo.mul_round(&other.hi, u32::MAX, Round::Floor),
            self.hi.mul_round(&other.lo, u32::MAX, Round::Floor),
            self.hi.mul_round(&other.hi, u32::MAX, Round::Floor),
        ];
        let lo = products.iter().min().unwrap().round(precision_bits, Round::Floor);
        let hi = products.iter().max().unwrap().round(precision_bits, Round::Ceil);
        HeightInterval { lo, hi }
    }

    /// Interval quotient for a strictly positive divisor interval.
    pub fn div_pos(&self, other: &HeightInterval, precision_bits: u32) -> HeightInterval {
        assert!(other.lo.is_positive(), "divisor interval must be strictly positive");
        let lo = if self.lo.is_negative() {
            self.lo.div_round(&other.lo, precision_bits, Round::Floor)
        } else {
            self.lo.div_round(&other.hi, precision_bits, Round::Floor)
        };
        let hi = if self.hi.is_negative() {
            self.hi.div_round(&other.hi, precision_bits, Round::Ceil)
        } else {
            self.hi.div_round(&other.lo, precision_bits, Round::Ceil)
        };
        HeightInterval { lo, hi }
    }

    /// Raises the lower endpoint to `floor` when it sits below it. Sound only
    /// when the enclosed value is known to be at least `floor`.
    pub fn clamp_lower(&self, floor: &Dyadic) -> HeightInterval {
        if self.lo.cmp_exact(floor) == std::cmp::Ordering::Less {
            let hi = std::cmp::max(self.hi.clone(), floor.clone());
            HeightInterval { lo: floor.clone(), hi }
        } else {
            self.clone()
        }
    }

    /// Symmetric widening by `slack >= 0` on both sides.
    pub fn widen(&self, slack: &Dyadic, precision_bits: u32) -> HeightInterval {
        assert!(!slack.is_negative());
        HeightInterval {
            lo: self.lo.sub_round(slack, precision_bits, Round::Floor),
            hi: self.hi.add_round(slack, precision_bits, Round::Ceil),
        }
    }

    /// Outward decimal pair used by serialization and reports.
    pub fn decimal_pair(&self) -> (String, String) {
        (self.lo.to_decimal(SERIAL_DIGITS, Round::Floor), self.hi.to_decimal(SERIAL_DIGITS, Round::Ceil))
    }
}

impl Serialize for HeightInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (lo, hi) = self.decimal_pair();
        [lo, hi].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HeightInterval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(deserializer)?;
        let lo = Dyadic::from_decimal(&lo, DESERIAL_BITS, Round::Floor)
            .ok_or_else(|| D::Error::custom("unparseable interval endpoint"))?;
        let hi = Dyadic::from_decimal(&hi, DESERIAL_BITS, Round::Ceil)
            .ok_or_else(|| D::Error::custom("unparseable interval endpoint"))?;
        if lo.cmp_exact(&hi) == std::cmp::Ordering::Greater {
            return Err(D::Error::custom("inverted interval endpoints"));
        }
        Ok(HeightInterval { lo, hi })
    }
}

/// Combination modes exposed at the API boundary.
#[derive(Debug, Clone)]
pub enum CombineMode {
    Add,
    Sub,
    Scale(BigRational),
    AbsDiff,
    Max,
}

/// Applies `mode` with outward rounding. Binary modes require `b`.
pub fn interval_combine(
    a: &HeightInterval,
    b: Option<&HeightInterval>,
    mode: &CombineMode,
    precision_bits: u32,
) -> HeightInterval {
    let need_b = || b.expect("binary combine mode requires a second interval");
    match mode {
        CombineMode::Add => a.add(need_b(), precision_bits),
        CombineMode::Sub => a.sub(need_b(), precision_bits),
        CombineMode::Scale(q) => a.scale_rational(q, precision_bits),
        CombineMode::AbsDiff => a.abs_diff(need_b(), precision_bits),
        CombineMode::Max => a.max_with(need_b()),
    }
}

/// Enclosure of log(n) for a positive integer, width at most
/// `2^(1 - precision_bits) * max(1, log n)`.
pub fn log_enclosure(n: &BigInt, precision_bits: u32) -> Result<HeightInterval> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("log of a nonpositive integer {n}")));
    }
    if n.is_one() {
        return Ok(HeightInterval::exact_zero());
    }
    Ok(ln_dyadic(&Dyadic::from_bigint(n), precision_bits.max(4)))
}

/// Enclosure of ln(x) for a positive dyadic, absolute width below
/// `2^-precision_bits`.
pub fn ln_dyadic(x: &Dyadic, precision_bits: u32) -> HeightInterval {
    assert!(x.is_positive(), "ln of a nonpositive value");
    let w = precision_bits.max(4);
    let pre = w + 24;
    if x.precision_bits() <= pre as u64 {
        let (lo, hi) = ln_core(x, w);
        return HeightInterval { lo, hi };
    }
    let xl = x.round(pre, Round::Floor);
    let xh = x.round(pre, Round::Ceil);
    let lo = ln_core(&xl, w).0;
    let hi = ln_core(&xh, w).1;
    HeightInterval { lo, hi }
}

/// Enclosure of ln over an interval with strictly positive lower endpoint.
pub fn ln_interval(x: &HeightInterval, precision_bits: u32) -> HeightInterval {
    assert!(x.lo().is_positive(), "ln of an interval touching zero");
    let lo = ln_dyadic(x.lo(), precision_bits);
    let hi = ln_dyadic(x.hi(), precision_bits);
    HeightInterval { lo: lo.lo, hi: hi.hi }
}

/// Cached enclosure of ln 2 at the requested precision.
pub fn ln2_enclosure(precision_bits: u32) -> HeightInterval {
    let (lo, hi) = ln2_endpoints(precision_bits.max(4) + 8);
    HeightInterval { lo, hi }
}

/// ln x = ln f + k ln 2 with x = f * 2^k, f in [1, 2).
fn ln_core(x: &Dyadic, w: u32) -> (Dyadic, Dyadic) {
    let k = x.bit_magnitude().expect("ln_core needs a nonzero input");
    let f = x.shl(-k);
    let kb = 64 - k.unsigned_abs().leading_zeros();
    let wa = w + kb + 24;
    let (mut lo, mut hi) = ln_of_normalized(&f, wa);
    if k != 0 {
        let (l2l, l2h) = ln2_endpoints(wa);
        let kd = Dyadic::from_i64(k);
        let (pl, ph) = if k > 0 {
            (l2l.mul_round(&kd, wa, Round::Floor), l2h.mul_round(&kd, wa, Round::Ceil))
        } else {
            (l2h.mul_round(&kd, wa, Round::Floor), l2l.mul_round(&kd, wa, Round::Ceil))
        };
        lo = lo.add_round(&pl, wa, Round::Floor);
        hi = hi.add_round(&ph, wa, Round::Ceil);
    }
    (lo, hi)
}

/// ln f for an exact dyadic f in [1, 2), via 2 atanh((f-1)/(f+1)).
fn ln_of_normalized(f: &Dyadic, wa: u32) -> (Dyadic, Dyadic) {
    let one = Dyadic::one();
    let num = f.add_exact(&one.neg());
    if num.is_zero() {
        return (Dyadic::zero(), Dyadic::zero());
    }
    let den = f.add_exact(&one);
    let zl = num.div_round(&den, wa, Round::Floor);
    let zh = num.div_round(&den, wa, Round::Ceil);
    atanh_twice(&zl, &zh, wa)
}

/// Enclosure of 2 atanh(z) from a bracket 0 <= zl <= z <= zh <= 3/8.
fn atanh_twice(zl: &Dyadic, zh: &Dyadic, wa: u32) -> (Dyadic, Dyadic) {
    debug_assert!(!zl.is_negative());
    assert!(
        zh.cmp_exact(&Dyadic::new(BigInt::from(3), -3)) != std::cmp::Ordering::Greater,
        "atanh series requires z <= 3/8"
    );
    let z2l = zl.mul_round(zl, wa, Round::Floor);
    let z2h = zh.mul_round(zh, wa, Round::Ceil);
    let mut term_lo = zl.clone();
    let mut term_hi = zh.clone();
    let mut sum_lo = Dyadic::zero();
    let mut sum_hi = Dyadic::zero();
    let mut order: i64 = 1;
    loop {
        let div = Dyadic::from_i64(order);
        sum_lo = sum_lo.add_round(&term_lo.div_round(&div, wa, Round::Floor), wa, Round::Floor);
        sum_hi = sum_hi.add_round(&term_hi.div_round(&div, wa, Round::Ceil), wa, Round::Ceil);
        term_lo = term_lo.mul_round(&z2l, wa, Round::Floor);
        term_hi = term_hi.mul_round(&z2h, wa, Round::Ceil);
        order += 2;
        if term_hi.is_zero() || term_hi.bit_magnitude().unwrap() < -((wa + 4) as i64) {
            break;
        }
        assert!(order < 1 << 24, "atanh series failed to converge");
    }
    // Geometric tail: sum of the remaining z^(2t+1)/(2t+1) lies in
    // [0, term_hi / (1 - z^2)] and z <= 3/8 gives 1/(1 - z^2) <= 5/4.
    let tail = term_hi.mul_round(&Dyadic::new(BigInt::from(5), -2), wa, Round::Ceil);
    sum_hi = sum_hi.add_round(&tail, wa, Round::Ceil);
    (sum_lo.shl(1), sum_hi.shl(1))
}

/// ln 2 = 2 atanh(1/3), cached per working precision.
fn ln2_endpoints(wa: u32) -> (Dyadic, Dyadic) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Dyadic, Dyadic)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&wa) {
        return hit.clone();
    }
    let one = Dyadic::one();
    let three = Dyadic::from_i64(3);
    let zl = one.div_round(&three, wa, Round::Floor);
    let zh = one.div_round(&three, wa, Round::Ceil);
    let value = atanh_twice(&zl, &zh, wa);
    cache.lock().unwrap().insert(wa, value.clone());
    value
}
