//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// Formats as `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidValue(format!("malformed rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `s (s-1) ... (s-k+1)`.
pub fn falling_factorial(s: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut t = s.clone();
    for _ in 0..k {
        acc *= &t;
        t -= Rational::one();
    }
    acc
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
}

impl ExactScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.re * q, &self.im * q)
    }

    /// Unique power of `i` that rotates `self` into the quadrant
    /// `re > 0, im >= 0`, together with the rotated value.
    pub fn quadrant_normalize(&self) -> Option<(u8, Self)> {
        if self.is_zero() {
            return None;
        }
        let mut z = self.clone();
        for k in 0..4u8 {
            if z.re.is_positive() && !z.im.is_negative() {
                return Some((k, z));
            }
            z = &z * &Self::i();
        }
        unreachable!("some rotation lands in the first quadrant")
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{}i)", self.re, -&self.im)
                } else {
                    write!(f, "({}+{}i)", self.re, self.im)
                }
            }
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.re, -&self.im)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let a = ExactScalar::new(rat(1, 2), rat(3, 1));
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(&ExactScalar::i() * &ExactScalar::i(), ExactScalar::from_int(-1));
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(parse_rational("10/4").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn quadrant() {
        let z = ExactScalar::new(int(0), int(-2));
        let (k, w) = z.quadrant_normalize().unwrap();
        assert_eq!(k, 1);
        assert_eq!(w, ExactScalar::from_int(2));
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
        assert_eq!(falling_factorial(&rat(1, 2), 2), rat(-1, 4));
    }
}
