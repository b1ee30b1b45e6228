use std::collections::BTreeMap;

use num_traits::Zero;

use super::MicrodiffOperator;
use crate::error::{Error, Result};
use crate::symcore::linalg::nullspace;
use crate::symcore::scalar::int;
use crate::symcore::{ExactScalar, GradedSymbol, Monomial, MonomialKey, Rational};

// Window used for the residual products; every constraint is first order so
// residual terms sit at levels 0 and 1.
const RESIDUAL_WINDOW: usize = 3;

/// Bimodule morphisms between the sector bimodules of classes `[λ]` and `[μ]`,
/// realized on a chart as operators `P` with
/// `[P, ∂₁] = [P, x_i] = [P, ∂_i] = 0` for `i ≥ 2` and `[P, x₁] = (μ − λ)·P·∂₁⁻¹`.
///
/// The ansatz runs over integer degrees `−(window−1) ..= window−1`, with at most
/// one factor of `x` and one factor of `ξ₂..ξₙ` per monomial. The returned list
/// is a basis of the exact solution space of that linear system.
pub fn bimodule_hom_basis(
    nvars: usize,
    lambda: &Rational,
    mu: &Rational,
    window: usize,
) -> Result<Vec<MicrodiffOperator>> {
    if window == 0 {
        return Err(Error::EmptyWindow);
    }
    let shift = ExactScalar::from_rational(mu - lambda);
    let ansatz = ansatz_keys(nvars, window as i64);

    let d1 = MicrodiffOperator::d(nvars, 0, RESIDUAL_WINDOW)?;
    let d1_inv = MicrodiffOperator::d1_pow(nvars, int(-1), RESIDUAL_WINDOW)?;
    let x1 = MicrodiffOperator::x(nvars, 0, RESIDUAL_WINDOW)?;
    let mut central = vec![d1.clone()];
    for i in 1..nvars {
        central.push(MicrodiffOperator::x(nvars, i, RESIDUAL_WINDOW)?);
        central.push(MicrodiffOperator::d(nvars, i, RESIDUAL_WINDOW)?);
    }

    let mut rows: BTreeMap<(usize, MonomialKey), Vec<ExactScalar>> = BTreeMap::new();
    let ncols = ansatz.len();
    for (col, key) in ansatz.iter().enumerate() {
        let b = monomial_operator(nvars, key)?;
        let mut residuals = Vec::with_capacity(central.len() + 1);
        for g in &central {
            residuals.push(b.commutator(g)?);
        }
        residuals.push(b.commutator(&x1)?.sub(&b.mul(&d1_inv)?.scale(&shift))?);
        for (c, r) in residuals.iter().enumerate() {
            for (_, k, v) in r.symbol().terms() {
                let row = rows.entry((c, k.clone())).or_insert_with(|| vec![ExactScalar::zero(); ncols]);
                row[col] = &row[col] + v;
            }
        }
    }
    let rows: Vec<Vec<ExactScalar>> = rows.into_values().collect();
    nullspace(&rows, ncols)
        .into_iter()
        .map(|v| {
            let terms: Vec<Monomial> = v
                .iter()
                .zip(&ansatz)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, k)| Monomial::new(c.clone(), k.clone()))
                .collect();
            let top = terms.iter().map(|m| m.key.degree()).max().unwrap_or_else(Rational::zero);
            GradedSymbol::from_terms(nvars, top, window, terms).map(MicrodiffOperator::from_symbol)
        })
        .collect()
}

fn ansatz_keys(nvars: usize, w: i64) -> Vec<MonomialKey> {
    let mut x_choices: Vec<Vec<u32>> = vec![vec![0; nvars]];
    for i in 0..nvars {
        let mut v = vec![0; nvars];
        v[i] = 1;
        x_choices.push(v);
    }
    let mut xi_choices: Vec<Vec<u32>> = vec![vec![0; nvars - 1]];
    for i in 0..nvars - 1 {
        let mut v = vec![0; nvars - 1];
        v[i] = 1;
        xi_choices.push(v);
    }
    let mut keys = Vec::new();
    for d in (-(w - 1)..=(w - 1)).rev() {
        for x in &x_choices {
            for xi in &xi_choices {
                let extra: i64 = xi.iter().map(|&e| e as i64).sum();
                keys.push(MonomialKey { x: x.clone(), xi1: int(d - extra), xi: xi.clone() });
            }
        }
    }
    keys
}

fn monomial_operator(nvars: usize, key: &MonomialKey) -> Result<MicrodiffOperator> {
    GradedSymbol::from_terms(nvars, key.degree(), RESIDUAL_WINDOW, [Monomial::new(ExactScalar::one(), key.clone())])
        .map(MicrodiffOperator::from_symbol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::rat;

    #[test]
    fn same_class_gives_scalars() {
        let basis = bimodule_hom_basis(2, &int(0), &int(0), 4).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].to_string(), "1");
    }

    #[test]
    fn different_class_gives_nothing() {
        assert!(bimodule_hom_basis(2, &int(0), &rat(1, 2), 4).unwrap().is_empty());
    }

    #[test]
    fn integer_shift() {
        let basis = bimodule_hom_basis(2, &rat(1, 3), &rat(7, 3), 4).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].agrees_with(&MicrodiffOperator::d1_pow(2, int(2), 4).unwrap()), Some(true));
    }

    // Independent oracle: a ξ₁-only ansatz Σ c_j ξ₁^j, where the constraint
    // [P, x₁] = s·P·∂₁⁻¹ reads (j − s)·c_j = 0 degree by degree.
    #[test]
    fn matches_xi1_only_oracle() {
        for (l, m) in [(rat(1, 3), rat(7, 3)), (int(1), int(-2)), (rat(1, 2), rat(1, 3)), (int(0), int(5))] {
            let s = &m - &l;
            let oracle_dim = (-3..=3).filter(|&j| int(j) == s).count();
            assert_eq!(bimodule_hom_basis(2, &l, &m, 4).unwrap().len(), oracle_dim, "{l} {m}");
        }
    }
}
