use serde::{Deserialize, Serialize};

use super::coeff::{CoeffValue, CoefficientGroup, RCxValue, ValueJson};
use super::nerve::CoverNerve;
use crate::error::{Error, Result};
use crate::symcore::scalar::frac;
use crate::symcore::Rational;

/// A cochain in degree `k`: one value per basis element of the degree-`k`
/// cochain group (the k-simplices of a nerve, in their stored order, or the
/// basis of an abstract complex).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    coeff: CoefficientGroup,
    values: Vec<CoeffValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainEntryJson {
    pub simplex: Vec<usize>,
    pub value: ValueJson,
}

/// Entries not listed are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainJson {
    pub degree: usize,
    pub coeff: String,
    pub values: Vec<CochainEntryJson>,
}

impl Cochain {
    pub fn new(degree: usize, coeff: CoefficientGroup, values: Vec<CoeffValue>) -> Result<Self> {
        let values = values.into_iter().map(|v| coeff.normalize(v)).collect::<Result<_>>()?;
        Ok(Self { degree, coeff, values })
    }

    pub fn zero(degree: usize, coeff: CoefficientGroup, len: usize) -> Self {
        Self { degree, coeff, values: vec![coeff.zero(); len] }
    }

    pub fn from_ints(degree: usize, coeff: CoefficientGroup, values: &[i128]) -> Result<Self> {
        let vals = values
            .iter()
            .map(|&n| match coeff {
                CoefficientGroup::Z | CoefficientGroup::Zmod(_) => CoeffValue::Int(n),
                CoefficientGroup::Q | CoefficientGroup::QmodZ => CoeffValue::Rat(Rational::from_integer(n.into())),
                CoefficientGroup::RCx => CoeffValue::Rcx(RCxValue::new(Rational::from_integer(n.into()), Rational::from_integer(0.into()))),
            })
            .collect();
        Self::new(degree, coeff, vals)
    }

    pub fn on_nerve(nerve: &CoverNerve, degree: usize, coeff: CoefficientGroup, f: impl Fn(&[usize]) -> CoeffValue) -> Result<Self> {
        Self::new(degree, coeff, nerve.simplices(degree).iter().map(|s| f(s)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.coeff
    }

    pub fn values(&self) -> &[CoeffValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| self.coeff.is_zero(v))
    }

    pub fn value(&self, i: usize) -> &CoeffValue {
        &self.values[i]
    }

    pub fn value_at(&self, nerve: &CoverNerve, simplex: &[usize]) -> Option<&CoeffValue> {
        nerve.index_of(simplex).map(|i| &self.values[i])
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.coeff != other.coeff {
            return Err(Error::CoefficientMismatch { left: self.coeff.to_string(), right: other.coeff.to_string() });
        }
        if self.degree != other.degree || self.len() != other.len() {
            return Err(Error::InvalidValue("cochains live in different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| self.coeff.add(a, b)).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, n: i128) -> Self {
        let values = self.values.iter().map(|a| self.coeff.scale(a, n)).collect();
        Self { values, ..self.clone() }
    }

    /// Integer values, for `Z` and `Z/m` cochains (residues in `[0, m)`).
    pub fn as_ints(&self) -> Option<Vec<i128>> {
        self.values.iter().map(|v| if let CoeffValue::Int(n) = v { Some(*n) } else { None }).collect()
    }

    /// Applies a coefficient homomorphism: `Z → Z/m, Q, Q/Z`, `Z/m → Z/d` for `d | m`,
    /// `Q → Q/Z` and `Q/Z → RCx` (into the `t` slot).
    pub fn change_coefficients(&self, target: CoefficientGroup) -> Result<Self> {
        use CoefficientGroup as G;
        let unsupported = || Error::Unsupported(format!("coefficient map {} -> {}", self.coeff, target));
        let zero = Rational::from_integer(0.into());
        let values = self
            .values
            .iter()
            .map(|v| -> Result<CoeffValue> {
                Ok(match (self.coeff, target, v) {
                    (a, b, v) if a == b => v.clone(),
                    (G::Z, G::Zmod(_), v) => v.clone(),
                    (G::Zmod(m), G::Zmod(d), v) if m % d == 0 => v.clone(),
                    (G::Z, G::Q | G::QmodZ, CoeffValue::Int(n)) => CoeffValue::Rat(Rational::from_integer((*n).into())),
                    (G::Q, G::QmodZ, v) => v.clone(),
                    (G::QmodZ, G::RCx, CoeffValue::Rat(q)) => CoeffValue::Rcx(RCxValue::new(q.clone(), zero.clone())),
                    _ => return Err(unsupported()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.degree, target, values)
    }

    /// The `t` (torsion) and `u` (rational) slots of an `RCx` cochain.
    pub fn split_rcx(&self) -> Option<(Self, Self)> {
        let mut ts = Vec::with_capacity(self.len());
        let mut us = Vec::with_capacity(self.len());
        for v in &self.values {
            let CoeffValue::Rcx(r) = v else { return None };
            ts.push(CoeffValue::Rat(r.t().clone()));
            us.push(CoeffValue::Rat(r.u().clone()));
        }
        Some((
            Self { degree: self.degree, coeff: CoefficientGroup::QmodZ, values: ts },
            Self { degree: self.degree, coeff: CoefficientGroup::Q, values: us },
        ))
    }

    pub fn join_rcx(t: &Self, u: &Self) -> Result<Self> {
        if t.coeff != CoefficientGroup::QmodZ || u.coeff != CoefficientGroup::Q || t.len() != u.len() {
            return Err(Error::InvalidValue("RCx join needs a Q/Z and a Q cochain of the same shape".into()));
        }
        let values = t
            .values
            .iter()
            .zip(&u.values)
            .map(|(a, b)| match (a, b) {
                (CoeffValue::Rat(a), CoeffValue::Rat(b)) => CoeffValue::Rcx(RCxValue::new(frac(a), b.clone())),
                _ => unreachable!(),
            })
            .collect();
        Ok(Self { degree: t.degree, coeff: CoefficientGroup::RCx, values })
    }

    pub fn to_json(&self, nerve: &CoverNerve) -> CochainJson {
        let values = nerve
            .simplices(self.degree)
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| !self.coeff.is_zero(v))
            .map(|(s, v)| CochainEntryJson { simplex: s.clone(), value: self.coeff.format_value(v) })
            .collect();
        CochainJson { degree: self.degree, coeff: self.coeff.to_string(), values }
    }

    pub fn from_json(nerve: &CoverNerve, j: &CochainJson) -> Result<Self> {
        let coeff: CoefficientGroup = j.coeff.parse()?;
        let mut c = Self::zero(j.degree, coeff, nerve.count(j.degree));
        let mut seen = vec![false; c.len()];
        for e in &j.values {
            let i = nerve
                .index_of(&e.simplex)
                .filter(|_| e.simplex.len() == j.degree + 1)
                .ok_or_else(|| Error::InvalidValue(format!("{:?} is not a {}-simplex of the nerve (vertices must be increasing)", e.simplex, j.degree)))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidValue(format!("simplex {:?} listed twice", e.simplex)));
            }
            c.values[i] = coeff.parse_value(&e.value)?;
        }
        Ok(c)
    }
}

fn face(s: &[usize], i: usize) -> Vec<usize> {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// `(dc)(v₀…v_{k+1}) = Σ_i (−1)^i c(v₀…v̂ᵢ…v_{k+1})`.
pub fn coboundary(nerve: &CoverNerve, c: &Cochain) -> Result<Cochain> {
    check_shape(nerve, c)?;
    let g = c.coeff;
    let k = c.degree;
    let values = nerve
        .simplices(k + 1)
        .iter()
        .map(|s| {
            (0..s.len()).fold(g.zero(), |acc, i| {
                let v = &c.values[nerve.index_of(&face(s, i)).expect("nerve is closed")];
                if i % 2 == 0 {
                    g.add(&acc, v)
                } else {
                    g.sub(&acc, v)
                }
            })
        })
        .collect();
    Ok(Cochain { degree: k + 1, coeff: g, values })
}

fn check_shape(nerve: &CoverNerve, c: &Cochain) -> Result<()> {
    if c.len() != nerve.count(c.degree) {
        return Err(Error::InvalidValue(format!(
            "cochain has {} values but the nerve has {} simplices of dimension {}",
            c.len(),
            nerve.count(c.degree),
            c.degree
        )));
    }
    Ok(())
}

/// Alexander–Whitney: `(a⌣b)(v₀…v_{p+q}) = a(v₀…v_p)·b(v_p…v_{p+q})`.
pub fn cup_product(nerve: &CoverNerve, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    check_shape(nerve, a)?;
    check_shape(nerve, b)?;
    let target = a.coeff.pairing(&b.coeff)?;
    let (p, q) = (a.degree, b.degree);
    let values = nerve
        .simplices(p + q)
        .iter()
        .map(|s| {
            let front = &a.values[nerve.index_of(&s[..=p]).expect("closed")];
            let back = &b.values[nerve.index_of(&s[p..]).expect("closed")];
            a.coeff.multiply(&b.coeff, front, back)
        })
        .collect();
    Ok(Cochain { degree: p + q, coeff: target, values })
}

/// Pullback along a vertex map `source → target` sending simplices to simplices.
/// Degenerate images give zero; otherwise the sign of the sorting permutation applies.
pub fn pullback(map: &[usize], source: &CoverNerve, target: &CoverNerve, c: &Cochain) -> Result<Cochain> {
    check_shape(target, c)?;
    if map.len() != source.vertices() {
        return Err(Error::InvalidNerve("vertex map has the wrong length".into()));
    }
    let g = c.coeff;
    let mut values = Vec::with_capacity(source.count(c.degree));
    for s in source.simplices(c.degree) {
        let mut img: Vec<usize> = s.iter().map(|&v| map[v]).collect();
        let mut sign = 1i128;
        for i in 0..img.len() {
            for j in 0..img.len() - 1 - i {
                if img[j] > img[j + 1] {
                    img.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if img.windows(2).any(|w| w[0] == w[1]) {
            values.push(g.zero());
            continue;
        }
        let i = target
            .index_of(&img)
            .ok_or_else(|| Error::InvalidNerve(format!("image {img:?} of {s:?} is not a simplex")))?;
        values.push(g.scale(&c.values[i], sign));
    }
    Ok(Cochain { degree: c.degree, coeff: g, values })
}

#[cfg(test)]
mod tests {
    use super::super::nerve::models;
    use super::*;
    use crate::symcore::rat;

    #[test]
    fn constant_zero_cochain_is_closed() {
        let n = models::circle();
        let c = Cochain::from_ints(0, CoefficientGroup::Z, &[5, 5, 5]).unwrap();
        assert!(coboundary(&n, &c).unwrap().is_zero());
        // No 2-simplices: the coboundary of a 1-cochain is the empty cochain.
        let e = Cochain::from_ints(1, CoefficientGroup::Z, &[1, 2, 3]).unwrap();
        assert!(coboundary(&n, &e).unwrap().is_empty());
    }

    #[test]
    fn d_squared_on_sphere() {
        let n = models::sphere();
        let c = Cochain::from_ints(0, CoefficientGroup::Z, &[3, -1, 4, 1]).unwrap();
        let dc = coboundary(&n, &c).unwrap();
        assert!(!dc.is_zero());
        assert!(coboundary(&n, &dc).unwrap().is_zero());
    }

    #[test]
    fn cup_units() {
        let n = models::torus();
        let one = Cochain::from_ints(0, CoefficientGroup::Z, &[1; 7]).unwrap();
        let a = Cochain::from_ints(1, CoefficientGroup::Z, &(0..21).map(|i| i % 5 - 2).collect::<Vec<_>>()).unwrap();
        assert_eq!(cup_product(&n, &a, &one).unwrap(), a);
        assert_eq!(cup_product(&n, &one, &a).unwrap(), a);
        let zero = Cochain::zero(1, CoefficientGroup::Z, 21);
        assert!(cup_product(&n, &zero, &a).unwrap().is_zero());
        let r = Cochain::zero(1, CoefficientGroup::RCx, 21);
        assert!(cup_product(&n, &r, &r).is_err());
    }

    #[test]
    fn json_round_trip() {
        let n = models::sphere();
        let c = Cochain::on_nerve(&n, 2, CoefficientGroup::RCx, |s| {
            CoeffValue::Rcx(RCxValue::new(rat(s[0] as i64, 4), rat(s[2] as i64, 3)))
        })
        .unwrap();
        let j = c.to_json(&n);
        let text = serde_json::to_string(&j).unwrap();
        let back: CochainJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Cochain::from_json(&n, &back).unwrap(), c);
    }
}
