//! Exact dyadic rationals `mant * 2^exp` with directed rounding.
//!
//! Every interval endpoint in this crate is a [`Dyadic`]. The representation
//! is canonical (mantissa odd or zero), so structural equality is value
//! equality. Arithmetic comes in two flavours: exact (`shl`, negation,
//! comparison) and directed (`add_round`, `mul_round`, `div_round`, ...),
//! where the result is rounded to a requested number of significant bits
//! toward minus or plus infinity. Directed rounding is what makes interval
//! endpoints sound: lower endpoints round down, upper endpoints round up.

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, One, Signed, Zero};
use std::cmp::Ordering;

/// Rounding direction for directed operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward minus infinity.
    Floor,
    /// Toward plus infinity.
    Ceil,
}

impl Round {
    fn flip(self) -> Round {
        match self {
            Round::Floor => Round::Ceil,
            Round::Ceil => Round::Floor,
        }
    }
}

/// An exact dyadic rational, canonically `mant * 2^exp` with `mant` odd or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_bigint(n: &BigInt) -> Dyadic {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// Builds `mant * 2^exp` and normalizes.
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits of the mantissa (0 for zero).
    pub fn precision_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// `floor(log2 |x|)` for nonzero x.
    pub fn bit_magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.magnitude().bits() as i64 - 1 + self.exp)
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Directed rounding to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let prec = prec.max(2) as u64;
        let bits = self.precision_bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = bits - prec;
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude());
        let lost = mag.trailing_zeros().map_or(false, |tz| tz < drop);
        let mut q: BigUint = mag >> drop;
        let bump = match (sign, dir) {
            (Sign::Plus, Round::Ceil) => lost,
            (Sign::Minus, Round::Floor) => lost,
            _ => false,
        };
        if bump {
            q += 1u32;
        }
        let mant = BigInt::from_biguint(sign, q);
        Dyadic::new(mant, self.exp + drop as i64)
    }

    fn add_exact_impl(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.exp >= other.exp {
            let shifted = &self.mant << (self.exp - other.exp) as u64;
            Dyadic::new(shifted + &other.mant, other.exp)
        } else {
            let shifted = &other.mant << (other.exp - self.exp) as u64;
            Dyadic::new(shifted + &self.mant, self.exp)
        }
    }

    /// Directed addition at `prec` significant bits.
    ///
    /// When the exponent gap is huge the small operand only matters through
    /// a one-ulp surrogate, so mantissas never blow up past the precision.
    pub fn add_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let bm_a = self.bit_magnitude().unwrap();
        let bm_b = other.bit_magnitude().unwrap();
        let (hi, lo, bm_hi) = if bm_a >= bm_b {
            (self, other, bm_a)
        } else {
            (other, self, bm_a.max(bm_b))
        };
        let gap = (bm_a - bm_b).abs();
        if gap > prec as i64 + 4 {
            // |lo| < 2^(bm_hi - prec - 4); a signed one-ulp surrogate at
            // 2^(bm_hi - prec - 3) dominates it in the rounding direction.
            let surrogate_needed = match dir {
                Round::Floor => lo.is_negative(),
                Round::Ceil => lo.is_positive(),
            };
            if !surrogate_needed {
                return hi.round(prec, dir);
            }
            let mant = if lo.is_negative() { BigInt::from(-1) } else { BigInt::one() };
            let surrogate = Dyadic::new(mant, bm_hi - prec as i64 - 3);
            return hi.add_exact(&surrogate).round(prec, dir);
        }
        self.add_exact(other).round(prec, dir)
    }

    pub fn sub_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        self.add_round(&other.neg(), prec, dir)
    }

    pub fn mul_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp).round(prec, dir)
    }

    /// Directed division, `other` nonzero.
    pub fn div_round(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let negative = self.is_negative() != other.is_negative();
        let mag_a = self.mant.magnitude();
        let mag_b = other.mant.magnitude();
        let bits_a = mag_a.bits();
        let bits_b = mag_b.bits();
        let shift = prec as u64 + 2 + bits_b.saturating_sub(bits_a);
        let num: BigUint = mag_a << shift;
        let (q, r) = num::Integer::div_rem(&num, mag_b);
        let mut q = q;
        let inexact = !r.is_zero();
        let round_away = match (negative, dir) {
            (false, Round::Ceil) => inexact,
            (true, Round::Floor) => inexact,
            _ => false,
        };
        if round_away {
            q += 1u32;
        }
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        let mant = BigInt::from_biguint(sign, q);
        Dyadic::new(mant, self.exp - other.exp - shift as i64).round(prec, dir)
    }

    /// Exact sum with no rounding; the mantissa grows with the exponent gap,
    /// so prefer `add_round` when operands can sit at wildly different scales.
    pub fn add_exact(&self, other: &Dyadic) -> Dyadic {
        self.add_exact_impl(other)
    }

    /// Exact comparison. Decides via bit magnitudes first so mantissas are
    /// aligned only when the magnitudes genuinely overlap.
    pub fn cmp_exact(&self, other: &Dyadic) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let sign_rank = |s: Sign| match s {
            Sign::Minus => 0,
            Sign::NoSign => 1,
            Sign::Plus => 2,
        };
        if sign_rank(sa) != sign_rank(sb) {
            return sign_rank(sa).cmp(&sign_rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let bm_a = self.bit_magnitude().unwrap();
        let bm_b = other.bit_magnitude().unwrap();
        let mag_order = if bm_a != bm_b {
            bm_a.cmp(&bm_b)
        } else {
            // Same floor(log2 |.|): the exponent gap is bounded by the
            // mantissa widths, so shifting is safe.
            if self.exp >= other.exp {
                let shifted = self.mant.magnitude() << (self.exp - other.exp) as u64;
                shifted.cmp(other.mant.magnitude())
            } else {
                let shifted = other.mant.magnitude() << (other.exp - self.exp) as u64;
                self.mant.magnitude().cmp(&shifted)
            }
        };
        if sa == Sign::Minus {
            mag_order.reverse()
        } else {
            mag_order
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        let sa = if self.is_zero() {
            0i8
        } else if self.is_negative() {
            -1
        } else {
            1
        };
        let sb = if r.is_zero() {
            0i8
        } else if r.is_negative() {
            -1
        } else {
            1
        };
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // floor(log2) windows; fall back to exact cross-multiplication only
        // when they overlap.
        let bm_a = self.bit_magnitude().unwrap();
        let bm_r_lo = r.numer().magnitude().bits() as i64 - r.denom().magnitude().bits() as i64 - 1;
        let bm_r_hi = bm_r_lo + 2;
        let mag_order = if bm_a < bm_r_lo {
            Ordering::Less
        } else if bm_a > bm_r_hi {
            Ordering::Greater
        } else {
            // |exp| is within a couple of bits of the rational's size here.
            let lhs_mag;
            let rhs_mag;
            if self.exp >= 0 {
                lhs_mag = (self.mant.magnitude() << self.exp as u64) * r.denom().magnitude();
                rhs_mag = r.numer().magnitude().clone();
            } else {
                lhs_mag = self.mant.magnitude() * r.denom().magnitude();
                rhs_mag = r.numer().magnitude() << (-self.exp) as u64;
            }
            lhs_mag.cmp(&rhs_mag)
        };
        if sa < 0 {
            mag_order.reverse()
        } else {
            mag_order
        }
    }

    /// Exact conversion, for tests and small cases only: `2^|exp|` is built.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Lossy conversion for heuristics and display, never for correctness.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.precision_bits();
        let (top, extra) = if bits > 64 {
            let drop = bits - 64;
            let q: BigUint = self.mant.magnitude() >> drop;
            (q, drop as i64)
        } else {
            (self.mant.magnitude().clone(), 0)
        };
        let mut v = 0.0f64;
        for d in top.to_u64_digits().iter().rev() {
            v = v * 1.8446744073709552e19 + *d as f64;
        }
        let e = self.exp + extra;
        let scaled = v * 2f64.powi(e.clamp(-1_000_000, 1_000_000) as i32);
        if self.is_negative() {
            -scaled
        } else {
            scaled
        }
    }

    /// Decimal rendering with directed rounding at `digits` fractional digits.
    /// Trailing zeros are trimmed; the rendered value is exact when possible.
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        let dir_mag = if negative { dir.flip() } else { dir };
        let pow10 = BigUint::from(10u32).pow(digits);
        let mag = self.mant.magnitude();
        let scaled: BigUint = if self.exp >= 0 {
            (mag << self.exp as u64) * &pow10
        } else {
            let num = mag * &pow10;
            let shift = (-self.exp) as u64;
            let q: BigUint = &num >> shift;
            let lost = num.trailing_zeros().map_or(false, |tz| tz < shift);
            if lost && dir_mag == Round::Ceil {
                q + 1u32
            } else {
                q
            }
        };
        if scaled.is_zero() {
            return "0".to_string();
        }
        let s = scaled.to_string();
        let digits = digits as usize;
        let (int_part, frac_part) = if s.len() > digits {
            (s[..s.len() - digits].to_string(), s[s.len() - digits..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = digits))
        };
        let frac_trimmed = frac_part.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if frac_trimmed.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_trimmed}")
        }
    }

    /// Parses decimal/scientific notation with directed rounding.
    pub fn from_decimal(s: &str, prec: u32, dir: Round) -> Option<Dyadic> {
        let r = parse_rational_decimal(s)?;
        Some(Dyadic::from_rational(&r, prec, dir))
    }

    /// Directed enclosure endpoint of an exact rational.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let num = Dyadic::from_bigint(r.numer());
        if r.denom().is_one() {
            return num.round(prec, dir);
        }
        num.div_round(&Dyadic::from_bigint(r.denom()), prec, dir)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        self.cmp_exact(other)
    }
}

/// Parses `[-+]?digits[.digits][eE[-+]?digits]` or `a/b` into an exact rational.
pub fn parse_rational_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a.trim().parse().ok()?;
        let den: BigInt = b.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(idx) => {
            let e: i64 = s[idx + 1..].parse().ok()?;
            (&s[..idx], e)
        }
        None => (s, 0i64),
    };
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let t = exp10 - frac_part.len() as i64;
    let value = if t >= 0 {
        BigRational::from_integer(digits * BigInt::from(10u32).pow(t as u32))
    } else {
        BigRational::new(digits, BigInt::from(10u32).pow((-t) as u32))
    };
    Some(value * BigRational::from_integer(BigInt::from(sign)))
}
