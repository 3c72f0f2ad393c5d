//! Homogeneous polynomials over Z in a fixed dense monomial basis.
//!
//! The basis for degree d in variables x0..xN is the set of exponent tuples
//! summing to d, listed in descending lexicographic order with x0 > x1 > ...
//! > xN. Every coefficient table in the crate (morphism rows, certificate
//! cofactors, interpolation output) is indexed by this one order, so
//! coefficient points in projective space are reproducible bit for bit.

use crate::error::{Error, Result};
use crate::interval::HeightInterval;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Exponent tuples of total degree `degree` in `nvars` variables,
/// descending lex.
pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    assert!(nvars >= 1);
    let mut out = Vec::with_capacity(monomial_count(nvars, degree));
    let mut cur = vec![0u32; nvars];
    fill(&mut cur, 0, degree, &mut out);
    out
}

fn fill(cur: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos == cur.len() - 1 {
        cur[pos] = remaining;
        out.push(cur.to_vec());
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

/// K = C(nvars - 1 + degree, degree).
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    let n = (nvars - 1) as u128 + degree as u128;
    let k = degree as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    (num / den) as usize
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// A homogeneous polynomial with integer coefficients in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    nvars: usize,
    degree: u32,
    coeffs: Vec<BigInt>,
}

impl HomPoly {
    pub fn zero(nvars: usize, degree: u32) -> HomPoly {
        HomPoly { nvars, degree, coeffs: vec![BigInt::zero(); monomial_count(nvars, degree)] }
    }

    pub fn from_coeffs(nvars: usize, degree: u32, coeffs: Vec<BigInt>) -> HomPoly {
        assert_eq!(coeffs.len(), monomial_count(nvars, degree), "dense coefficient length");
        HomPoly { nvars, degree, coeffs }
    }

    /// Single monomial `coeff * x^expts`.
    pub fn monomial(nvars: usize, expts: &[u32], coeff: BigInt) -> HomPoly {
        assert_eq!(expts.len(), nvars);
        let degree = expts.iter().sum();
        let mut p = HomPoly::zero(nvars, degree);
        let idx = monomials(nvars, degree).iter().position(|m| m == expts).unwrap();
        p.coeffs[idx] = coeff;
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        HomPoly { nvars: self.nvars, degree: self.degree, coeffs }
    }

    pub fn sub(&self, other: &HomPoly) -> HomPoly {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        HomPoly { nvars: self.nvars, degree: self.degree, coeffs }
    }

    pub fn scale(&self, k: &BigInt) -> HomPoly {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        HomPoly { nvars: self.nvars, degree: self.degree, coeffs }
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        assert_eq!(self.nvars, other.nvars);
        let degree = self.degree + other.degree;
        let basis_a = monomials(self.nvars, self.degree);
        let basis_b = monomials(self.nvars, other.degree);
        let basis_out = monomials(self.nvars, degree);
        let pos: HashMap<&[u32], usize> =
            basis_out.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut coeffs = vec![BigInt::zero(); basis_out.len()];
        for (ia, ea) in basis_a.iter().enumerate() {
            if self.coeffs[ia].is_zero() {
                continue;
            }
            for (ib, eb) in basis_b.iter().enumerate() {
                if other.coeffs[ib].is_zero() {
                    continue;
                }
                let sum: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                coeffs[pos[sum.as_slice()]] += &self.coeffs[ia] * &other.coeffs[ib];
            }
        }
        HomPoly { nvars: self.nvars, degree, coeffs }
    }

    /// Exact evaluation at integer coordinates.
    pub fn eval_bigint(&self, coords: &[BigInt]) -> BigInt {
        assert_eq!(coords.len(), self.nvars);
        let powers = power_table_bigint(coords, self.degree);
        let mut acc = BigInt::zero();
        for (idx, expts) in monomials(self.nvars, self.degree).iter().enumerate() {
            let c = &self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (v, &e) in expts.iter().enumerate() {
                if e > 0 {
                    term *= &powers[v][e as usize];
                }
            }
            acc += term;
        }
        acc
    }

    /// Certified evaluation at interval coordinates.
    pub fn eval_interval(&self, coords: &[HeightInterval], precision_bits: u32) -> HeightInterval {
        assert_eq!(coords.len(), self.nvars);
        let mut powers: Vec<Vec<HeightInterval>> = Vec::with_capacity(self.nvars);
        for c in coords {
            let mut row = vec![HeightInterval::point(crate::dyadic::Dyadic::one())];
            for e in 1..=self.degree {
                let prev = &row[(e - 1) as usize];
                row.push(prev.mul(c, precision_bits));
            }
            powers.push(row);
        }
        let mut acc = HeightInterval::exact_zero();
        for (idx, expts) in monomials(self.nvars, self.degree).iter().enumerate() {
            let c = &self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let mut term = HeightInterval::point(crate::dyadic::Dyadic::from_bigint(c));
            for (v, &e) in expts.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[v][e as usize], precision_bits);
                }
            }
            acc = acc.add(&term, precision_bits);
        }
        acc
    }

    /// Evaluation of the residue mod `m` from coordinate residues mod `m`.
    pub fn eval_mod(&self, residues: &[BigUint], m: &BigUint) -> BigUint {
        assert_eq!(residues.len(), self.nvars);
        let mut acc = BigUint::zero();
        for (idx, expts) in monomials(self.nvars, self.degree).iter().enumerate() {
            let c = &self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let mut term = c.mod_floor(&BigInt::from(m.clone())).to_biguint().unwrap();
            for (v, &e) in expts.iter().enumerate() {
                for _ in 0..e {
                    term = (term * &residues[v]) % m;
                }
            }
            acc = (acc + term) % m;
        }
        acc
    }

    /// gcd of the coefficients (nonnegative, 0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn sum_abs_coeffs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Renders in the text grammar accepted by `parse_form`.
    pub fn render(&self) -> String {
        let basis = monomials(self.nvars, self.degree);
        let mut out = String::new();
        for (idx, expts) in basis.iter().enumerate() {
            let c = &self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || expts.iter().all(|&e| e == 0) {
                factors.push(mag.to_string());
            }
            for (v, &e) in expts.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("x{v}"));
                } else if e > 1 {
                    factors.push(format!("x{v}^{e}"));
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn power_table_bigint(coords: &[BigInt], degree: u32) -> Vec<Vec<BigInt>> {
    coords
        .iter()
        .map(|c| {
            let mut row = vec![BigInt::one()];
            for e in 1..=degree {
                let prev = row[(e - 1) as usize].clone();
                row.push(prev * c);
            }
            row
        })
        .collect()
}

/// Parses one homogeneous form into a dense rational coefficient vector in
/// the fixed monomial order. Grammar: terms joined by `+`/`-`, each term a
/// `*`-product of an optional rational coefficient and variable powers
/// `xk` or `xk^e`, variables x0..x{nvars-1}.
pub fn parse_form(nvars: usize, degree: u32, text: &str) -> Result<Vec<BigRational>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let basis = monomials(nvars, degree);
    let mut coeffs = vec![BigRational::zero(); basis.len()];
    for (term, sign) in split_terms(&cleaned)? {
        let (coeff, expts) = parse_term(nvars, &term)?;
        if coeff.is_zero() {
            continue;
        }
        let total: u32 = expts.iter().sum();
        if total != degree {
            return Err(Error::Inhomogeneous(format!(
                "term {term:?} has degree {total}, expected {degree}"
            )));
        }
        let idx = basis
            .iter()
            .position(|m| *m == expts)
            .expect("every degree-matching exponent tuple is in the basis");
        let signed = if sign < 0 { -coeff } else { coeff };
        coeffs[idx] += signed;
    }
    Ok(coeffs)
}

fn split_terms(s: &str) -> Result<Vec<(String, i32)>> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let mut pending_sign = 1i32;
    for ch in s.chars() {
        if ch == '+' || ch == '-' {
            if !cur.is_empty() {
                terms.push((std::mem::take(&mut cur), pending_sign));
                pending_sign = 1;
            }
            if ch == '-' {
                pending_sign = -pending_sign;
            }
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling operator in {s:?}")));
    }
    terms.push((cur, pending_sign));
    Ok(terms)
}

fn parse_term(nvars: usize, term: &str) -> Result<(BigRational, Vec<u32>)> {
    let mut coeff = BigRational::one();
    let mut expts = vec![0u32; nvars];
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in term {term:?}")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (var_s, exp_s) = match rest.split_once('^') {
                Some((v, e)) => (v, Some(e)),
                None => (rest, None),
            };
            let var: usize = var_s
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
            if var >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{var} out of range, map uses x0..x{}",
                    nvars - 1
                )));
            }
            let exp: u32 = match exp_s {
                Some(e) => {
                    e.parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?
                }
                None => 1,
            };
            expts[var] += exp;
        } else {
            let q = crate::dyadic::parse_rational_decimal(factor)
                .ok_or_else(|| Error::Parse(format!("bad coefficient {factor:?}")))?;
            coeff *= q;
        }
    }
    Ok((coeff, expts))
}
