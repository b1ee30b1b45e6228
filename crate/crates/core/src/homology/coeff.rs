use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::symcore::scalar::{format_rational, frac, parse_rational};
use crate::symcore::Rational;

/// Coefficients for cochains. `RCx` stands in for `ℂ^×`: a pair `(t, u)`
/// represents `e^{2πit}·e^u`, with `t ∈ ℚ/ℤ` and `u ∈ ℚ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientGroup {
    Z,
    Zmod(u64),
    Q,
    QmodZ,
    RCx,
}

/// An element of `ℚ/ℤ ⊕ ℚ`; the group law is componentwise addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RCxValue {
    t: Rational,
    u: Rational,
}

impl RCxValue {
    pub fn new(t: Rational, u: Rational) -> Self {
        Self { t: frac(&t), u }
    }

    pub fn one() -> Self {
        Self { t: Rational::zero(), u: Rational::zero() }
    }

    pub fn root_of_unity(t: Rational) -> Self {
        Self::new(t, Rational::zero())
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn is_one(&self) -> bool {
        self.t.is_zero() && self.u.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.t + &other.t, &self.u + &other.u)
    }

    pub fn inv(&self) -> Self {
        Self::new(-&self.t, -&self.u)
    }

    pub fn pow(&self, n: i128) -> Self {
        let n = Rational::from_integer(BigInt::from(n));
        Self::new(&self.t * &n, &self.u * &n)
    }
}

impl fmt::Display for RCxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.t), format_rational(&self.u))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffValue {
    Int(i128),
    Rat(Rational),
    Rcx(RCxValue),
}

impl fmt::Display for CoefficientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Z => write!(f, "Z"),
            Self::Zmod(m) => write!(f, "Z/{m}"),
            Self::Q => write!(f, "Q"),
            Self::QmodZ => write!(f, "Q/Z"),
            Self::RCx => write!(f, "RCx"),
        }
    }
}

impl FromStr for CoefficientGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" => Ok(Self::Z),
            "Q" => Ok(Self::Q),
            "Q/Z" => Ok(Self::QmodZ),
            "RCx" => Ok(Self::RCx),
            other => {
                let m = other
                    .strip_prefix("Z/")
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidValue(format!("unknown coefficient group {other:?}")))?;
                Self::zmod(m)
            }
        }
    }
}

fn rational_to_i128(q: &Rational) -> Option<i128> {
    if q.is_integer() {
        q.to_integer().to_i128()
    } else {
        None
    }
}

impl CoefficientGroup {
    pub fn zmod(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidValue(format!("Z/{m} needs modulus at least 2")));
        }
        Ok(Self::Zmod(m))
    }

    pub fn zero(&self) -> CoeffValue {
        match self {
            Self::Z | Self::Zmod(_) => CoeffValue::Int(0),
            Self::Q | Self::QmodZ => CoeffValue::Rat(Rational::zero()),
            Self::RCx => CoeffValue::Rcx(RCxValue::one()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Zmod(_))
    }

    /// Checks membership and returns the canonical representative.
    pub fn normalize(&self, v: CoeffValue) -> Result<CoeffValue> {
        let bad = |v: &CoeffValue| Error::InvalidValue(format!("{v:?} is not an element of {self}"));
        match (self, v) {
            (Self::Z, v @ CoeffValue::Int(_)) => Ok(v),
            (Self::Zmod(m), CoeffValue::Int(n)) => Ok(CoeffValue::Int(n.rem_euclid(*m as i128))),
            (Self::Q, v @ CoeffValue::Rat(_)) => Ok(v),
            (Self::QmodZ, CoeffValue::Rat(q)) => Ok(CoeffValue::Rat(frac(&q))),
            (Self::RCx, CoeffValue::Rcx(r)) => Ok(CoeffValue::Rcx(RCxValue::new(r.t, r.u))),
            (_, v) => Err(bad(&v)),
        }
    }

    pub fn add(&self, a: &CoeffValue, b: &CoeffValue) -> CoeffValue {
        match (self, a, b) {
            (Self::Z, CoeffValue::Int(x), CoeffValue::Int(y)) => CoeffValue::Int(x + y),
            (Self::Zmod(m), CoeffValue::Int(x), CoeffValue::Int(y)) => CoeffValue::Int((x + y).rem_euclid(*m as i128)),
            (Self::Q, CoeffValue::Rat(x), CoeffValue::Rat(y)) => CoeffValue::Rat(x + y),
            (Self::QmodZ, CoeffValue::Rat(x), CoeffValue::Rat(y)) => CoeffValue::Rat(frac(&(x + y))),
            (Self::RCx, CoeffValue::Rcx(x), CoeffValue::Rcx(y)) => CoeffValue::Rcx(x.mul(y)),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &CoeffValue) -> CoeffValue {
        self.scale(a, -1)
    }

    pub fn sub(&self, a: &CoeffValue, b: &CoeffValue) -> CoeffValue {
        self.add(a, &self.neg(b))
    }

    /// `n · a`.
    pub fn scale(&self, a: &CoeffValue, n: i128) -> CoeffValue {
        let nq = || Rational::from_integer(BigInt::from(n));
        match (self, a) {
            (Self::Z, CoeffValue::Int(x)) => CoeffValue::Int(x * n),
            (Self::Zmod(m), CoeffValue::Int(x)) => CoeffValue::Int((x * n).rem_euclid(*m as i128)),
            (Self::Q, CoeffValue::Rat(x)) => CoeffValue::Rat(x * nq()),
            (Self::QmodZ, CoeffValue::Rat(x)) => CoeffValue::Rat(frac(&(x * nq()))),
            (Self::RCx, CoeffValue::Rcx(x)) => CoeffValue::Rcx(x.pow(n)),
            _ => panic!("value does not belong to {self}"),
        }
    }

    pub fn is_zero(&self, a: &CoeffValue) -> bool {
        *a == self.zero()
    }

    /// Product for the cup pairing `self × other`, if defined, with its target group.
    pub fn pairing(&self, other: &Self) -> Result<CoefficientGroup> {
        match (self, other) {
            (Self::Z, g) | (g, Self::Z) => Ok(*g),
            (Self::Zmod(a), Self::Zmod(b)) if a == b => Ok(*self),
            (Self::Q, Self::Q) => Ok(Self::Q),
            _ => Err(Error::PairingUndefined { left: self.to_string(), right: other.to_string() }),
        }
    }

    pub(crate) fn multiply(&self, other: &Self, a: &CoeffValue, b: &CoeffValue) -> CoeffValue {
        let target = self.pairing(other).expect("pairing checked by caller");
        match (self, other, a, b) {
            (Self::Z, _, CoeffValue::Int(n), v) => target.scale(v, *n),
            (_, Self::Z, v, CoeffValue::Int(n)) => target.scale(v, *n),
            (Self::Zmod(m), Self::Zmod(_), CoeffValue::Int(x), CoeffValue::Int(y)) => {
                CoeffValue::Int((x * y).rem_euclid(*m as i128))
            }
            (Self::Q, Self::Q, CoeffValue::Rat(x), CoeffValue::Rat(y)) => CoeffValue::Rat(x * y),
            _ => unreachable!("pairing table and value shapes disagree"),
        }
    }

    /// Parses a JSON-side value: integers and rationals as strings, RCx as `[t, u]`.
    pub fn parse_value(&self, v: &ValueJson) -> Result<CoeffValue> {
        let raw = match (self, v) {
            (Self::Z | Self::Zmod(_), ValueJson::Scalar(s)) => {
                let q = parse_rational(s)?;
                CoeffValue::Int(rational_to_i128(&q).ok_or_else(|| Error::InvalidValue(format!("{s:?} is not an integer")))?)
            }
            (Self::Q | Self::QmodZ, ValueJson::Scalar(s)) => CoeffValue::Rat(parse_rational(s)?),
            (Self::RCx, ValueJson::Pair([t, u])) => CoeffValue::Rcx(RCxValue::new(parse_rational(t)?, parse_rational(u)?)),
            _ => return Err(Error::InvalidValue(format!("value shape does not match {self}"))),
        };
        self.normalize(raw)
    }

    pub fn format_value(&self, v: &CoeffValue) -> ValueJson {
        match v {
            CoeffValue::Int(n) => ValueJson::Scalar(n.to_string()),
            CoeffValue::Rat(q) => ValueJson::Scalar(format_rational(q)),
            CoeffValue::Rcx(r) => ValueJson::Pair([format_rational(&r.t), format_rational(&r.u)]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Scalar(String),
    Pair([String; 2]),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rat;

    #[test]
    fn parse_and_display() {
        for s in ["Z", "Z/4", "Q", "Q/Z", "RCx"] {
            assert_eq!(s.parse::<CoefficientGroup>().unwrap().to_string(), s);
        }
        assert!("Z/1".parse::<CoefficientGroup>().is_err());
        assert!("R".parse::<CoefficientGroup>().is_err());
    }

    #[test]
    fn arithmetic() {
        let g = CoefficientGroup::Zmod(4);
        assert_eq!(g.add(&CoeffValue::Int(3), &CoeffValue::Int(3)), CoeffValue::Int(2));
        let q = CoefficientGroup::QmodZ;
        assert_eq!(q.scale(&CoeffValue::Rat(rat(2, 3)), 2), CoeffValue::Rat(rat(1, 3)));
        let r = CoefficientGroup::RCx;
        let a = CoeffValue::Rcx(RCxValue::new(rat(3, 4), rat(1, 2)));
        assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
        assert_eq!(r.parse_value(&ValueJson::Pair(["5/4".into(), "0".into()])).unwrap(), CoeffValue::Rcx(RCxValue::new(rat(1, 4), rat(0, 1))));
        assert!(CoefficientGroup::Z.parse_value(&ValueJson::Scalar("1/2".into())).is_err());
    }

    #[test]
    fn pairings() {
        use CoefficientGroup::*;
        assert_eq!(Z.pairing(&RCx).unwrap(), RCx);
        assert_eq!(QmodZ.pairing(&Z).unwrap(), QmodZ);
        assert!(Zmod(2).pairing(&Zmod(3)).is_err());
        assert!(RCx.pairing(&RCx).is_err());
    }
}
