//! Univariate polynomials in `ξ` with arbitrary-precision integer coefficients.
//!
//! Every space handled by this crate has cohomology only in even degrees, so a
//! Poincaré polynomial `Σ dim H^{2i} ξ^i` has integral exponents. Subtraction is
//! allowed to produce negative coefficients: wall-crossing terms are differences.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PolyError;

/// Sparse polynomial `Σ c_i ξ^i`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    coeffs: BTreeMap<u32, BigInt>,
}

impl PoincarePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c ξ^exp`.
    pub fn monomial(exp: u32, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    /// Builds a polynomial from coefficients listed from degree 0 upwards.
    pub fn from_coeffs<I, C>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(i as u32, c.into());
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with a nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Dense coefficient list `c_0, …, c_deg`; empty for zero.
    pub fn dense_coeffs(&self) -> Vec<BigInt> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i)).collect(),
        }
    }

    /// Multiplication by `ξ^k`.
    pub fn shift(&self, k: u32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * &k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Sum of coefficients: the topological Euler characteristic of a space
    /// without odd cohomology.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// `true` iff `c_i = c_{d-i}` for every `0 ≤ i ≤ d`.
    pub fn is_palindromic(&self, d: u32) -> bool {
        if self.degree().is_some_and(|deg| deg > d) {
            return false;
        }
        (0..=d / 2).all(|i| self.coeff(i) == self.coeff(d - i))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// Renders `a_d ξ^d + … + a_0`, or ascending when `ascending` is set.
    pub fn to_text(&self, ascending: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<(u32, &BigInt)> = if ascending {
            self.terms().collect()
        } else {
            self.terms().rev().collect()
        };
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = abs.is_one();
            match e {
                0 => out.push_str(&abs.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&abs.to_string());
                    }
                    out.push('ξ');
                    if e > 1 {
                        out.push('^');
                        out.push_str(&e.to_string());
                    }
                }
            }
        }
        out
    }
}

/// `1 + ξ + … + ξ^{n-1} = (ξ^n - 1)/(ξ - 1)`, the Poincaré polynomial of `P^{n-1}`.
pub fn q_int(n: u32) -> Result<PoincarePolynomial, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroQInteger);
    }
    Ok(PoincarePolynomial::from_terms((0..n).map(|e| (e, 1))))
}

/// Poincaré polynomial of `P^d`.
pub fn projective_space(d: u32) -> PoincarePolynomial {
    PoincarePolynomial::from_terms((0..=d).map(|e| (e, 1)))
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(false))
    }
}

impl Add for &PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn add(self, rhs: Self) -> PoincarePolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn sub(self, rhs: Self) -> PoincarePolynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn neg(self) -> PoincarePolynomial {
        PoincarePolynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn mul(self, rhs: Self) -> PoincarePolynomial {
        let mut out = PoincarePolynomial::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PoincarePolynomial {
            type Output = PoincarePolynomial;
            fn $m(self, rhs: Self) -> PoincarePolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PoincarePolynomial> for PoincarePolynomial {
            type Output = PoincarePolynomial;
            fn $m(self, rhs: &PoincarePolynomial) -> PoincarePolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for PoincarePolynomial {
    type Output = PoincarePolynomial;

    fn neg(self) -> PoincarePolynomial {
        -&self
    }
}

impl std::iter::Sum for PoincarePolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for PoincarePolynomial {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

// Wire form: {"coeffs": [[exp, "decimal"], ...]} with ascending exponents.
#[derive(Serialize, Deserialize)]
struct PolyWire {
    coeffs: Vec<(u32, String)>,
}

impl Serialize for PoincarePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyWire {
            coeffs: self.terms().map(|(e, c)| (e, c.to_string())).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PoincarePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PolyWire::deserialize(deserializer)?;
        let mut p = PoincarePolynomial::zero();
        let mut last: Option<u32> = None;
        for (e, c) in wire.coeffs {
            if last.is_some_and(|l| l >= e) {
                return Err(D::Error::custom("exponents must be strictly ascending"));
            }
            last = Some(e);
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            if c.is_zero() {
                return Err(D::Error::custom("zero coefficients are not stored"));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> PoincarePolynomial {
        PoincarePolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn additive_identity_and_inverse() {
        assert_eq!(&p(&[1, 1]) + &PoincarePolynomial::zero(), p(&[1, 1]));
        assert!((&p(&[1, 1]) + &p(&[-1, -1])).is_zero());
        assert_eq!((&p(&[1, 1]) + &p(&[-1, -1])).degree(), None);
    }

    #[test]
    fn projective_plane_plus_line() {
        assert_eq!(projective_space(2) + projective_space(1), p(&[2, 2, 1]));
    }

    #[test]
    fn products() {
        assert_eq!(&p(&[1, 1]) * &PoincarePolynomial::one(), p(&[1, 1]));
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_int(1).unwrap(), PoincarePolynomial::one());
        assert_eq!(q_int(4).unwrap(), p(&[1, 1, 1, 1]));
        assert_eq!(q_int(12).unwrap().eval_at_one(), BigInt::from(12));
        assert_eq!(q_int(12).unwrap(), projective_space(11));
        assert!(matches!(q_int(0), Err(PolyError::ZeroQInteger)));
    }

    #[test]
    fn q_int_twelve_is_the_geometric_quotient() {
        // (ξ^12 - 1) = (ξ - 1) q_int(12)
        let lhs = &PoincarePolynomial::monomial(12, 1) - &PoincarePolynomial::one();
        let rhs = &p(&[-1, 1]) * &q_int(12).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn palindromes() {
        assert!(p(&[1, 3, 1]).is_palindromic(2));
        assert!(!p(&[1, 2]).is_palindromic(1));
        assert!(!p(&[1, 1, 1]).is_palindromic(1));
        assert!(PoincarePolynomial::zero().is_palindromic(0));
    }

    #[test]
    fn eval_zero() {
        assert!(PoincarePolynomial::zero().eval_at_one().is_zero());
    }

    #[test]
    fn text_rendering() {
        let poly = p(&[1, -3, 0, 1]);
        assert_eq!(poly.to_text(false), "ξ^3 - 3ξ + 1");
        assert_eq!(poly.to_text(true), "1 - 3ξ + ξ^3");
        assert_eq!((-&poly).to_text(false), "-ξ^3 + 3ξ - 1");
        assert_eq!(PoincarePolynomial::zero().to_string(), "0");
    }

    #[test]
    fn json_form_is_sorted_and_stringly() {
        let poly = p(&[5, 0, -2]);
        let s = serde_json::to_string(&poly).unwrap();
        assert_eq!(s, r#"{"coeffs":[[0,"5"],[2,"-2"]]}"#);
        let back: PoincarePolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, poly);
        assert!(
            serde_json::from_str::<PoincarePolynomial>(r#"{"coeffs":[[2,"1"],[0,"1"]]}"#).is_err()
        );
        assert!(serde_json::from_str::<PoincarePolynomial>(r#"{"coeffs":[[0,"0"]]}"#).is_err());
    }

    #[test]
    fn no_overflow() {
        let big = PoincarePolynomial::monomial(0, BigInt::from(u64::MAX));
        let sq = &big * &big;
        assert_eq!(sq.coeff(0), BigInt::from(u64::MAX) * BigInt::from(u64::MAX));
    }
}
