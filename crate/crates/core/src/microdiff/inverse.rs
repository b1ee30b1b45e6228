use num_integer::Integer;
use num_traits::Zero;

use super::{is_invertible, multi_indices, MicrodiffOperator};
use crate::error::{Error, Result};
use crate::symcore::scalar::{falling_factorial, int};
use crate::symcore::symbol::derive_xi;
use crate::symcore::{format_rational, ExactScalar, GradedSymbol, Rational};

/// Two-sided inverse on the stored window.
///
/// Writes `P = P₀ + P'` with `P₀ = c·∂₁^s` the principal part, so that
/// `P⁻¹ = Σ_k (−P₀⁻¹P')^k · P₀⁻¹`; the k-th term starts at level k, so the
/// series is finite on the window.
pub fn formal_inverse(p: &MicrodiffOperator) -> Result<MicrodiffOperator> {
    if !is_invertible(p)? {
        return Err(Error::NotInvertible("principal symbol is not a nonzero multiple of a power of ξ1".into()));
    }
    let trimmed = p.symbol().trim_leading_zeros()?;
    let n = trimmed.nvars();
    let window = trimmed.window();
    let (lead_key, lead_coeff) = trimmed.level(0).iter().next().expect("invertible operator has a leading term");
    let s = lead_key.xi1.clone();
    let r0 = MicrodiffOperator::d1_pow(n, -s.clone(), window)?.scale(&lead_coeff.inv().expect("nonzero leading coefficient"));

    let mut rest = GradedSymbol::zero(n, s, window)?;
    for (j, k, c) in trimmed.terms().filter(|(j, _, _)| *j > 0) {
        rest.add_term(j, k.clone(), c);
    }
    let neg_m = r0.mul(&MicrodiffOperator::from_symbol(rest))?.scale(&-ExactScalar::one());

    let mut term = MicrodiffOperator::identity(n, window)?;
    let mut sum = term.clone();
    for _ in 1..window {
        term = term.mul(&neg_m)?;
        sum = sum.add(&term)?;
    }
    sum.mul(&r0)
}

/// Formal adjoint `tot(P*)(x, ξ) = Σ_α (1/α!) ∂_ξ^α ∂_x^α [tot(P)(x, −ξ)]`,
/// defined for integer order.
pub fn adjoint(p: &MicrodiffOperator) -> Result<MicrodiffOperator> {
    let s = p.symbol();
    if !s.order().is_integer() {
        return Err(Error::FractionalSector(format_rational(&s.sector())));
    }
    let n = s.nvars();
    let window = s.window();
    let alphas = multi_indices(n, window);
    let mut out = GradedSymbol::zero(n, s.order().clone(), window)?;
    for (j, k, c) in s.terms() {
        let degree = s.degree_of_level(j).to_integer();
        let c = if degree.is_odd() { -c } else { c.clone() };
        for (alpha, size, inv_fact) in &alphas {
            if j + size >= window {
                continue;
            }
            let mut key = k.clone();
            let mut factor: Rational = inv_fact.clone();
            for (i, &ai) in alpha.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                if key.x[i] < ai {
                    factor = Rational::zero();
                    break;
                }
                factor *= falling_factorial(&int(key.x[i] as i64), ai);
                key.x[i] -= ai;
                let (next, f) = derive_xi(&key, i, ai);
                factor *= f;
                key = next;
            }
            if !factor.is_zero() {
                out.add_term(j + size, key, &c.scale(&factor));
            }
        }
    }
    Ok(MicrodiffOperator::from_symbol(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{Monomial, MonomialKey};

    fn op1(order: i64, window: usize, terms: &[(i64, u32, i64)]) -> MicrodiffOperator {
        let ms = terms.iter().map(|&(c, x, xi1)| {
            Monomial::new(ExactScalar::from_int(c), MonomialKey { x: vec![x], xi1: int(xi1), xi: vec![] })
        });
        MicrodiffOperator::from_symbol(GradedSymbol::from_terms(1, int(order), window, ms).unwrap())
    }

    #[test]
    fn inverse_examples() {
        let d1 = MicrodiffOperator::d(1, 0, 3).unwrap();
        assert_eq!(formal_inverse(&d1).unwrap(), op1(-1, 3, &[(1, 0, -1)]));
        let one = MicrodiffOperator::identity(1, 3).unwrap();
        assert_eq!(formal_inverse(&one).unwrap(), one);

        let p = op1(1, 3, &[(1, 0, 1), (1, 1, 0)]);
        let inv = formal_inverse(&p).unwrap();
        // Solved by hand degree by degree from P·Q = 1.
        assert_eq!(inv, op1(-1, 3, &[(1, 0, -1), (-1, 1, -2), (1, 2, -3), (1, 0, -3)]));
        assert_eq!(p.mul(&inv).unwrap(), op1(0, 3, &[(1, 0, 0)]));
        assert_eq!(inv.mul(&p).unwrap(), op1(0, 3, &[(1, 0, 0)]));
    }

    #[test]
    fn inverse_rejects() {
        let p = op1(1, 3, &[(1, 1, 1)]);
        assert!(matches!(formal_inverse(&p), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn adjoint_examples() {
        let x1 = MicrodiffOperator::x(1, 0, 3).unwrap();
        assert_eq!(adjoint(&x1).unwrap(), x1);
        let d1 = MicrodiffOperator::d(1, 0, 3).unwrap();
        assert_eq!(adjoint(&d1).unwrap(), d1.scale(&ExactScalar::from_int(-1)));
        // (x∂)* = −∂∘x = −x∂ − 1
        let xd = op1(1, 3, &[(1, 1, 1)]);
        let oracle = d1.mul(&x1).unwrap().scale(&ExactScalar::from_int(-1));
        assert_eq!(adjoint(&xd).unwrap(), oracle);
        assert_eq!(adjoint(&xd).unwrap(), op1(1, 3, &[(-1, 1, 1), (-1, 0, 0)]));

        let half = MicrodiffOperator::d1_pow(1, crate::symcore::rat(1, 2), 2).unwrap();
        assert!(matches!(adjoint(&half), Err(Error::FractionalSector(_))));
    }
}
