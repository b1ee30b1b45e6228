//! Operator calculus on total symbols: Leibniz products, symbol maps,
//! inverses, adjoints, inner automorphisms and the sector bimodules.

mod bimodule;
mod inverse;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symcore::scalar::{factorial, falling_factorial, frac, int};
use crate::symcore::symbol::derive_xi;
use crate::symcore::{ExactScalar, GradedSymbol, MonomialKey, Rational};

pub use bimodule::bimodule_hom_basis;

/// A microdifferential operator on a chart where `∂₁` is invertible,
/// represented by its (truncated) total symbol.
#[derive(Clone, PartialEq, Eq)]
pub struct MicrodiffOperator {
    symbol: GradedSymbol,
}

/// Class of an order in `ℚ/ℤ`, kept as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ShiftSector(Rational);

impl ShiftSector {
    pub fn new(lambda: &Rational) -> Self {
        Self(frac(lambda))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&(&self.0 + &other.0))
    }
}

impl MicrodiffOperator {
    pub fn from_symbol(symbol: GradedSymbol) -> Self {
        Self { symbol }
    }

    pub fn symbol(&self) -> &GradedSymbol {
        &self.symbol
    }

    pub fn into_symbol(self) -> GradedSymbol {
        self.symbol
    }

    pub fn nvars(&self) -> usize {
        self.symbol.nvars()
    }

    pub fn window(&self) -> usize {
        self.symbol.window()
    }

    pub fn order(&self) -> &Rational {
        self.symbol.order()
    }

    pub fn sector(&self) -> ShiftSector {
        ShiftSector::new(self.symbol.order())
    }

    pub fn identity(nvars: usize, window: usize) -> Result<Self> {
        Self::scalar(nvars, ExactScalar::one(), window)
    }

    pub fn scalar(nvars: usize, c: ExactScalar, window: usize) -> Result<Self> {
        GradedSymbol::constant(nvars, c, window).map(Self::from_symbol)
    }

    /// Multiplication by the coordinate `x_{i+1}`.
    pub fn x(nvars: usize, i: usize, window: usize) -> Result<Self> {
        GradedSymbol::x(nvars, i, window).map(Self::from_symbol)
    }

    /// The derivation `∂_{i+1}`.
    pub fn d(nvars: usize, i: usize, window: usize) -> Result<Self> {
        GradedSymbol::xi(nvars, i, window).map(Self::from_symbol)
    }

    /// `∂₁^s` for rational `s`.
    pub fn d1_pow(nvars: usize, s: Rational, window: usize) -> Result<Self> {
        GradedSymbol::xi1_pow(nvars, s, window).map(Self::from_symbol)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.symbol.add(&other.symbol).map(Self::from_symbol)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.symbol.sub(&other.symbol).map(Self::from_symbol)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self::from_symbol(self.symbol.scale(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        leibniz_product(self, other)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// Equality on the common known window; `None` when nothing is jointly known.
    pub fn agrees_with(&self, other: &Self) -> Option<bool> {
        self.symbol.agrees_with(&other.symbol)
    }

    pub fn truncate(&self, window: usize) -> Result<Self> {
        self.symbol.truncate(window).map(Self::from_symbol)
    }
}

impl fmt::Debug for MicrodiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.symbol)
    }
}

impl fmt::Display for MicrodiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)
    }
}

/// All multi-indices in `nvars` variables with total size `< bound`, with `1/α!`.
fn multi_indices(nvars: usize, bound: usize) -> Vec<(Vec<u32>, usize, Rational)> {
    fn rec(i: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[i] = a as u32;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    if bound == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(0, bound - 1, &mut vec![0; nvars], &mut raw);
    raw.into_iter()
        .map(|a| {
            let size = a.iter().map(|&e| e as usize).sum();
            let denom = a.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e));
            (a, size, Rational::new(BigInt::one(), denom))
        })
        .collect()
}

/// Composition of operators through the Leibniz formula
/// `Σ_α (1/α!) ∂_ξ^α p · ∂_x^α q`, truncated to the smaller window.
pub fn leibniz_product(p: &MicrodiffOperator, q: &MicrodiffOperator) -> Result<MicrodiffOperator> {
    let n = p.nvars();
    if n != q.nvars() {
        return Err(Error::NvarsMismatch { left: n, right: q.nvars() });
    }
    let window = p.window().min(q.window());
    let mut out = GradedSymbol::zero(n, p.order() + q.order(), window)?;
    let alphas = multi_indices(n, window);
    for (a, pk, pc) in p.symbol.terms() {
        for (b, qk, qc) in q.symbol.terms() {
            if a + b >= window {
                continue;
            }
            let base = pc * qc;
            for (alpha, size, inv_fact) in &alphas {
                if a + b + size >= window {
                    continue;
                }
                let Some((key, factor)) = leibniz_term(pk, qk, alpha) else { continue };
                out.add_term(a + b + size, key, &base.scale(&(factor * inv_fact)));
            }
        }
    }
    Ok(MicrodiffOperator::from_symbol(out))
}

/// Key and scalar of `∂_ξ^α(p) · ∂_x^α(q)` for unit-coefficient monomials.
fn leibniz_term(pk: &MonomialKey, qk: &MonomialKey, alpha: &[u32]) -> Option<(MonomialKey, Rational)> {
    let mut factor = Rational::one();
    let mut left = pk.clone();
    for (i, &ai) in alpha.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        if qk.x[i] < ai {
            return None;
        }
        let (k, f) = derive_xi(&left, i, ai);
        if f.is_zero() {
            return None;
        }
        left = k;
        factor *= f * falling_factorial(&int(qk.x[i] as i64), ai);
    }
    let mut right = qk.clone();
    for (i, &ai) in alpha.iter().enumerate() {
        right.x[i] -= ai;
    }
    Some((left.mul(&right), factor))
}

/// The homogeneous component of degree `mu`, as a one-level symbol.
///
/// Degrees above the order are known to vanish and yield zero; degrees below
/// the stored window are an error.
pub fn symbol_of_order(p: &MicrodiffOperator, mu: &Rational) -> Result<GradedSymbol> {
    let s = p.symbol();
    let mut out = GradedSymbol::zero(s.nvars(), mu.clone(), 1)?;
    if mu > s.order() {
        if !(mu - s.order()).is_integer() {
            return Err(Error::SectorMismatch {
                left: crate::symcore::format_rational(s.order()),
                right: crate::symcore::format_rational(mu),
            });
        }
        return Ok(out);
    }
    let j = s.level_of_degree(mu)?;
    for (k, c) in s.level(j) {
        out.add_term(0, k.clone(), c);
    }
    Ok(out)
}

/// Top nonzero homogeneous component with its degree.
pub fn principal_symbol(p: &MicrodiffOperator) -> Result<(Rational, GradedSymbol)> {
    let j = p.symbol().top_nonzero_level().ok_or(Error::ZeroOperator)?;
    let d = p.symbol().degree_of_level(j);
    let s = symbol_of_order(p, &d)?;
    Ok((d, s))
}

/// Invertible on the whole chart: the principal symbol is `c·ξ₁^s` with `c ≠ 0`.
pub fn is_invertible(p: &MicrodiffOperator) -> Result<bool> {
    let (_, sigma) = principal_symbol(p)?;
    Ok(sigma.num_terms() == 1 && sigma.terms().all(|(_, k, _)| k.is_xi1_power()))
}

pub use inverse::{adjoint, formal_inverse};

/// `P·Q·P⁻¹`.
pub fn ad_conjugation(p: &MicrodiffOperator, q: &MicrodiffOperator) -> Result<MicrodiffOperator> {
    let inv = formal_inverse(p)?;
    p.mul(q)?.mul(&inv)
}

/// `∂₁^λ`, the chart generator of the sector bimodule of class `[λ]`.
pub fn sector_shift_generator(nvars: usize, lambda: &Rational, window: usize) -> Result<MicrodiffOperator> {
    MicrodiffOperator::d1_pow(nvars, lambda.clone(), window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{rat, Monomial};

    fn op(nvars: usize, order: i64, window: usize, terms: &[(i64, &[u32], Rational, &[u32])]) -> MicrodiffOperator {
        let ms = terms.iter().map(|(c, x, xi1, xi)| {
            Monomial::new(
                ExactScalar::from_int(*c),
                MonomialKey { x: x.to_vec(), xi1: xi1.clone(), xi: xi.to_vec() },
            )
        });
        MicrodiffOperator::from_symbol(GradedSymbol::from_terms(nvars, int(order), window, ms).unwrap())
    }

    #[test]
    fn canonical_commutation() {
        let d1 = MicrodiffOperator::d(1, 0, 3).unwrap();
        let x1 = MicrodiffOperator::x(1, 0, 3).unwrap();
        let dx = d1.mul(&x1).unwrap();
        assert_eq!(dx, op(1, 1, 3, &[(1, &[1], int(1), &[]), (1, &[0], int(0), &[])]));
        let xd = x1.mul(&d1).unwrap();
        assert_eq!(xd, op(1, 1, 3, &[(1, &[1], int(1), &[])]));
        assert_eq!(dx.sub(&xd).unwrap().to_string(), "1");
    }

    #[test]
    fn fractional_power_commutator() {
        let lam = rat(5, 7);
        let p = MicrodiffOperator::d1_pow(1, lam.clone(), 3).unwrap();
        let x1 = MicrodiffOperator::x(1, 0, 3).unwrap();
        let c = p.commutator(&x1).unwrap();
        let expected = MicrodiffOperator::d1_pow(1, &lam - int(1), 2).unwrap().scale(&ExactScalar::from_rational(lam));
        assert_eq!(c.agrees_with(&expected), Some(true));
    }

    #[test]
    fn symbol_maps() {
        let p = op(1, 1, 2, &[(1, &[0], int(1), &[]), (1, &[1], int(0), &[])]);
        assert_eq!(symbol_of_order(&p, &int(1)).unwrap().to_string(), "1·ξ1");
        assert_eq!(symbol_of_order(&p, &int(0)).unwrap().to_string(), "1·x1");
        assert!(symbol_of_order(&p, &int(-1)).is_err());
        assert!(symbol_of_order(&p, &int(2)).unwrap().is_zero());
        let (d, s) = principal_symbol(&p).unwrap();
        assert_eq!(d, int(1));
        assert_eq!(s.to_string(), "1·ξ1");

        let q = op(2, -1, 2, &[(1, &[0, 1], int(-1), &[0])]);
        let (d, s) = principal_symbol(&q).unwrap();
        assert_eq!(d, int(-1));
        assert_eq!(s.to_string(), "1·x2·ξ1^(-1)");
        let zero = MicrodiffOperator::from_symbol(GradedSymbol::zero(1, int(0), 2).unwrap());
        assert_eq!(principal_symbol(&zero).unwrap_err(), Error::ZeroOperator);
    }

    #[test]
    fn invertibility() {
        let p = op(1, 1, 2, &[(1, &[0], int(1), &[]), (1, &[1], int(0), &[])]);
        assert!(is_invertible(&p).unwrap());
        let q = op(1, 1, 2, &[(1, &[1], int(1), &[])]);
        assert!(!is_invertible(&q).unwrap());
        let r = MicrodiffOperator::d1_pow(1, rat(1, 2), 2).unwrap().scale(&ExactScalar::from_int(3));
        assert!(is_invertible(&r).unwrap());
    }

    #[test]
    fn conjugations() {
        let w = 4;
        let q = op(1, 0, w, &[(1, &[1], int(0), &[])]);
        let one = MicrodiffOperator::identity(1, w).unwrap();
        assert_eq!(ad_conjugation(&one, &q).unwrap(), q);

        let d1 = MicrodiffOperator::d(1, 0, w).unwrap();
        let got = ad_conjugation(&d1, &q).unwrap();
        let oracle = d1.mul(&q).unwrap().mul(&MicrodiffOperator::d1_pow(1, int(-1), w).unwrap()).unwrap();
        assert_eq!(got, oracle);
        assert_eq!(got, op(1, 0, w, &[(1, &[1], int(0), &[]), (1, &[0], int(-1), &[])]));

        let lam = rat(-3, 5);
        let p = sector_shift_generator(1, &lam, w).unwrap();
        let got = ad_conjugation(&p, &q).unwrap();
        let expected = q.add(&MicrodiffOperator::d1_pow(1, int(-1), w - 1).unwrap().scale(&ExactScalar::from_rational(lam)));
        assert_eq!(got.agrees_with(&expected.unwrap()), Some(true));
    }

    #[test]
    fn sector_generators() {
        assert_eq!(sector_shift_generator(1, &int(0), 2).unwrap(), MicrodiffOperator::identity(1, 2).unwrap());
        assert_eq!(sector_shift_generator(1, &int(1), 2).unwrap(), MicrodiffOperator::d(1, 0, 2).unwrap());
        let h = sector_shift_generator(2, &rat(1, 2), 3).unwrap();
        assert_eq!(h.mul(&h).unwrap(), MicrodiffOperator::d(2, 0, 3).unwrap());
        assert_eq!(h.sector(), ShiftSector::new(&rat(1, 2)));
    }

    #[test]
    fn multi_index_count() {
        assert_eq!(multi_indices(3, 3).len(), 10);
        assert!(multi_indices(2, 0).is_empty());
    }
}
