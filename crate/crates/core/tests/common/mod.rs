//! Shared oracle: an exact rational enclosure of the natural logarithm,
//! independent of the library's interval machinery.

use num::{BigRational, One, Signed, Zero};

/// Enclosure of ln(q) for q > 0 from the series
/// ln x = 2 sum z^(2k+1)/(2k+1) with z = (x-1)/(x+1), after reducing the
/// argument into [1, 2) by powers of two. All arithmetic is exact; the
/// truncation error is covered by a geometric tail bound.
pub fn ln_oracle(q: &BigRational, terms: usize) -> (BigRational, BigRational) {
    assert!(q.is_positive(), "ln needs a positive argument");
    if *q < BigRational::one() {
        let (lo, hi) = ln_oracle(&q.recip(), terms);
        return (-hi, -lo);
    }
    let two = BigRational::from_integer(2.into());
    let mut r = q.clone();
    let mut j = 0i64;
    while r >= two {
        r /= &two;
        j += 1;
    }
    let (r_lo, r_hi) = series(&r, terms);
    let (two_lo, two_hi) = series(&two, terms);
    let jq = BigRational::from_integer(j.into());
    let (j_lo, j_hi) = if j >= 0 { (&jq * two_lo, &jq * two_hi) } else { (&jq * two_hi, &jq * two_lo) };
    (r_lo + j_lo, r_hi + j_hi)
}

/// ln x for x in [1, 2]: partial sum, then sum plus tail bound. z is at
/// most 1/3, so the tail shrinks by a factor 9 per term.
fn series(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    if x.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let one = BigRational::one();
    let z = (x - &one) / (x + &one);
    let z2 = &z * &z;
    let mut power = z;
    let mut sum = BigRational::zero();
    for k in 0..terms {
        sum += &power / BigRational::from_integer((2 * k as i64 + 1).into());
        power *= &z2;
    }
    let tail = power / (BigRational::from_integer((2 * terms as i64 + 1).into()) * (&one - &z2));
    let two = BigRational::from_integer(2.into());
    (&sum * &two, (sum + tail) * two)
}

#[allow(dead_code)]
pub fn mid(pair: &(BigRational, BigRational)) -> BigRational {
    (&pair.0 + &pair.1) / BigRational::from_integer(2.into())
}
