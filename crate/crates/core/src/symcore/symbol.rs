use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{falling_factorial, format_rational, frac, int, ExactScalar, Rational};
use crate::error::{Error, Result};

/// Exponent data of a monomial `x^x · ξ₁^xi1 · ξ₂^xi[0] ⋯ ξₙ^xi[n-2]`.
///
/// Variable index 0 is the distinguished covariable `ξ₁`, the only one that
/// may carry a negative or fractional exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MonomialKey {
    pub x: Vec<u32>,
    pub xi1: Rational,
    pub xi: Vec<u32>,
}

impl MonomialKey {
    pub fn one(nvars: usize) -> Self {
        Self { x: vec![0; nvars], xi1: Rational::zero(), xi: vec![0; nvars.saturating_sub(1)] }
    }

    /// Homogeneity degree in the covariables.
    pub fn degree(&self) -> Rational {
        &self.xi1 + int(self.xi.iter().map(|&e| e as i64).sum())
    }

    pub fn nvars(&self) -> usize {
        self.x.len()
    }

    pub fn is_x_free(&self) -> bool {
        self.x.iter().all(|&e| e == 0)
    }

    /// True when the monomial is a pure power of `ξ₁`.
    pub fn is_xi1_power(&self) -> bool {
        self.is_x_free() && self.xi.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            xi1: &self.xi1 + &other.xi1,
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial {
    pub coeff: ExactScalar,
    pub key: MonomialKey,
}

impl Monomial {
    pub fn new(coeff: ExactScalar, key: MonomialKey) -> Self {
        Self { coeff, key }
    }
}

/// A total symbol truncated to `window` homogeneous levels below `order`.
///
/// Level `j` holds the component of degree `order - j`. Degrees above
/// `order` are known to vanish; degrees below `order - window + 1` are
/// unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedSymbol {
    nvars: usize,
    order: Rational,
    levels: Vec<BTreeMap<MonomialKey, ExactScalar>>,
}

impl GradedSymbol {
    pub fn zero(nvars: usize, order: Rational, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        if nvars == 0 {
            return Err(Error::IndexOutOfRange { index: 0, nvars });
        }
        Ok(Self { nvars, order, levels: vec![BTreeMap::new(); window] })
    }

    pub fn zero_like(other: &Self) -> Self {
        Self { nvars: other.nvars, order: other.order.clone(), levels: vec![BTreeMap::new(); other.window()] }
    }

    pub fn from_terms(
        nvars: usize,
        order: Rational,
        window: usize,
        terms: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self> {
        let mut s = Self::zero(nvars, order, window)?;
        for m in terms {
            if m.key.x.len() != nvars || m.key.xi.len() != nvars - 1 {
                return Err(Error::NvarsMismatch { left: nvars, right: m.key.x.len() });
            }
            let level = s.level_of_degree(&m.key.degree())?;
            s.add_term(level, m.key, &m.coeff);
        }
        Ok(s)
    }

    /// `c` as a symbol of order 0.
    pub fn constant(nvars: usize, c: ExactScalar, window: usize) -> Result<Self> {
        Self::from_terms(nvars, Rational::zero(), window, [Monomial::new(c, MonomialKey::one(nvars))])
    }

    pub fn x(nvars: usize, i: usize, window: usize) -> Result<Self> {
        check_index(i, nvars)?;
        let mut key = MonomialKey::one(nvars);
        key.x[i] = 1;
        Self::from_terms(nvars, Rational::zero(), window, [Monomial::new(ExactScalar::one(), key)])
    }

    /// `ξ_i` for `i ≥ 1`, or `ξ₁` for `i = 0`.
    pub fn xi(nvars: usize, i: usize, window: usize) -> Result<Self> {
        check_index(i, nvars)?;
        let mut key = MonomialKey::one(nvars);
        if i == 0 {
            key.xi1 = Rational::one();
        } else {
            key.xi[i - 1] = 1;
        }
        Self::from_terms(nvars, Rational::one(), window, [Monomial::new(ExactScalar::one(), key)])
    }

    pub fn xi1_pow(nvars: usize, s: Rational, window: usize) -> Result<Self> {
        let mut key = MonomialKey::one(nvars);
        key.xi1 = s.clone();
        Self::from_terms(nvars, s, window, [Monomial::new(ExactScalar::one(), key)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &Rational {
        &self.order
    }

    pub fn window(&self) -> usize {
        self.levels.len()
    }

    /// Lowest degree whose component is known.
    pub fn floor(&self) -> Rational {
        &self.order - int(self.window() as i64 - 1)
    }

    /// Class of the order in `[0, 1)`; shared by every stored exponent of `ξ₁`.
    pub fn sector(&self) -> Rational {
        frac(&self.order)
    }

    pub fn level(&self, j: usize) -> &BTreeMap<MonomialKey, ExactScalar> {
        &self.levels[j]
    }

    pub fn degree_of_level(&self, j: usize) -> Rational {
        &self.order - int(j as i64)
    }

    pub fn level_of_degree(&self, degree: &Rational) -> Result<usize> {
        let j = &self.order - degree;
        if !j.is_integer() {
            return Err(Error::SectorMismatch {
                left: format_rational(&self.order),
                right: format_rational(degree),
            });
        }
        match j.to_integer().to_usize() {
            Some(j) if j < self.window() => Ok(j),
            _ => Err(Error::DegreeOutsideWindow { degree: format_rational(degree) }),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &MonomialKey, &ExactScalar)> {
        self.levels.iter().enumerate().flat_map(|(j, lvl)| lvl.iter().map(move |(k, c)| (j, k, c)))
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms().map(|(_, k, c)| Monomial::new(c.clone(), k.clone())).collect()
    }

    pub fn num_terms(&self) -> usize {
        self.levels.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(BTreeMap::is_empty)
    }

    pub fn coefficient(&self, key: &MonomialKey) -> ExactScalar {
        self.level_of_degree(&key.degree())
            .ok()
            .and_then(|j| self.levels[j].get(key).cloned())
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Index of the first nonzero level.
    pub fn top_nonzero_level(&self) -> Option<usize> {
        self.levels.iter().position(|l| !l.is_empty())
    }

    pub(crate) fn add_term(&mut self, level: usize, key: MonomialKey, coeff: &ExactScalar) {
        if coeff.is_zero() {
            return;
        }
        let lvl = &mut self.levels[level];
        let remove = match lvl.get_mut(&key) {
            Some(c) => {
                *c += coeff;
                c.is_zero()
            }
            None => {
                lvl.insert(key, coeff.clone());
                false
            }
        };
        if remove {
            lvl.retain(|_, c| !c.is_zero());
        }
    }

    /// Rebuilds the canonical form from the stored terms.
    pub fn canonicalize(&self) -> Self {
        let mut out = Self::zero_like(self);
        for (j, k, c) in self.terms() {
            out.add_term(j, k.clone(), c);
        }
        out
    }

    /// Keeps only the top `window` levels.
    pub fn truncate(&self, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::EmptyWindow);
        }
        let mut out = self.clone();
        out.levels.truncate(window);
        Ok(out)
    }

    /// Same data relabelled with a higher nominal order; the new top levels are zero.
    pub fn raise_order(&self, by: usize) -> Self {
        let mut levels = vec![BTreeMap::new(); by];
        levels.extend(self.levels.iter().cloned());
        Self { nvars: self.nvars, order: &self.order + int(by as i64), levels }
    }

    /// Drops leading zero levels, lowering the nominal order (and the window) accordingly.
    pub fn trim_leading_zeros(&self) -> Result<Self> {
        let top = self.top_nonzero_level().ok_or(Error::ZeroOperator)?;
        Ok(Self {
            nvars: self.nvars,
            order: &self.order - int(top as i64),
            levels: self.levels[top..].to_vec(),
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        if !(&self.order - &other.order).is_integer() {
            return Err(Error::SectorMismatch {
                left: format_rational(&self.order),
                right: format_rational(&other.order),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let top = std::cmp::max(&self.order, &other.order).clone();
        let floor = std::cmp::max(self.floor(), other.floor());
        if std::cmp::min(&self.order, &other.order) < &floor {
            return Err(Error::DisjointWindows);
        }
        let window = (&top - &floor).to_integer().to_usize().expect("non-negative window") + 1;
        let mut out = Self::zero(self.nvars, top, window)?;
        for src in [self, other] {
            for (_, k, c) in src.terms() {
                if let Ok(level) = out.level_of_degree(&k.degree()) {
                    out.add_term(level, k.clone(), c);
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-ExactScalar::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero_like(self);
        for (j, k, v) in self.terms() {
            out.add_term(j, k.clone(), &(v * c));
        }
        out
    }

    /// `∂/∂x_i`; degrees are unchanged.
    pub fn partial_x(&self, i: usize) -> Result<Self> {
        check_index(i, self.nvars)?;
        let mut out = Self::zero_like(self);
        for (j, k, c) in self.terms() {
            if k.x[i] == 0 {
                continue;
            }
            let mut key = k.clone();
            key.x[i] -= 1;
            out.add_term(j, key, &c.scale(&int(k.x[i] as i64)));
        }
        Ok(out)
    }

    /// `∂/∂ξ_i`; every degree drops by one, so the order drops by one.
    pub fn partial_xi(&self, i: usize) -> Result<Self> {
        check_index(i, self.nvars)?;
        let mut out = Self::zero_like(self);
        out.order -= Rational::one();
        for (j, k, c) in self.terms() {
            let (key, factor) = derive_xi(k, i, 1);
            if !factor.is_zero() {
                out.add_term(j, key, &c.scale(&factor));
            }
        }
        Ok(out)
    }

    /// Pointwise (commutative) product of symbols, window `min` of the inputs.
    pub fn mul_commutative(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        let window = self.window().min(other.window());
        let mut out = Self::zero(self.nvars, &self.order + &other.order, window)?;
        for (a, ka, ca) in self.terms() {
            for (b, kb, cb) in other.terms() {
                if a + b < window {
                    out.add_term(a + b, ka.mul(kb), &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Agreement on the common known range. `None` means the common range is empty.
    pub fn agrees_with(&self, other: &Self) -> Option<bool> {
        if self.nvars != other.nvars || !(&self.order - &other.order).is_integer() {
            return Some(false);
        }
        let top = std::cmp::max(&self.order, &other.order).clone();
        let floor = std::cmp::max(self.floor(), other.floor());
        if floor > top {
            return None;
        }
        let mut d = top;
        while d >= floor {
            if self.component_map(&d) != other.component_map(&d) {
                return Some(false);
            }
            d -= Rational::one();
        }
        Some(true)
    }

    /// Component at degree `d`, empty above the order; panics below the floor.
    fn component_map(&self, d: &Rational) -> BTreeMap<MonomialKey, ExactScalar> {
        if d > &self.order {
            return BTreeMap::new();
        }
        let j = self.level_of_degree(d).expect("degree inside window");
        self.levels[j].clone()
    }

    /// Number of levels on which `self` and `other` are both known, counted down from
    /// the higher of the two orders.
    pub fn common_window(&self, other: &Self) -> usize {
        let top = std::cmp::max(&self.order, &other.order).clone();
        let floor = std::cmp::max(self.floor(), other.floor());
        if floor > top {
            0
        } else {
            (&top - &floor).to_integer().to_usize().unwrap_or(0) + 1
        }
    }

    /// Checks the homogeneity invariant of every stored level.
    pub fn check_invariants(&self) -> bool {
        self.levels.iter().enumerate().all(|(j, lvl)| {
            let d = self.degree_of_level(j);
            lvl.iter().all(|(k, c)| {
                !c.is_zero() && k.degree() == d && k.x.len() == self.nvars && k.xi.len() + 1 == self.nvars
            })
        })
    }
}

pub(crate) fn check_index(i: usize, nvars: usize) -> Result<()> {
    if i >= nvars {
        Err(Error::IndexOutOfRange { index: i, nvars })
    } else {
        Ok(())
    }
}

/// `∂^k/∂ξ_i^k` of a unit-coefficient monomial: the new key and the scalar factor.
pub(crate) fn derive_xi(k: &MonomialKey, i: usize, order: u32) -> (MonomialKey, Rational) {
    let mut key = k.clone();
    if i == 0 {
        let factor = falling_factorial(&k.xi1, order);
        key.xi1 -= int(order as i64);
        (key, factor)
    } else {
        let e = k.xi[i - 1];
        if e < order {
            return (key, Rational::zero());
        }
        key.xi[i - 1] -= order;
        (key, falling_factorial(&int(e as i64), order))
    }
}

impl fmt::Debug for GradedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSymbol[n={}, order={}, window={}] {}", self.nvars, self.order, self.window(), self)
    }
}

impl fmt::Display for GradedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (_, k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in k.x.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, e)?,
                }
            }
            if !k.xi1.is_zero() {
                if k.xi1.is_one() {
                    write!(f, "·ξ1")?;
                } else if k.xi1.is_integer() && !k.xi1.is_negative() {
                    write!(f, "·ξ1^{}", k.xi1)?;
                } else {
                    write!(f, "·ξ1^({})", k.xi1)?;
                }
            }
            for (i, &e) in k.xi.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·ξ{}", i + 2)?,
                    _ => write!(f, "·ξ{}^{}", i + 2, e)?,
                }
            }
        }
        Ok(())
    }
}
