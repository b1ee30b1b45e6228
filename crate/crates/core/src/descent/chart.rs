use num_traits::{One, Zero};

use super::{LocalAlgebra, Truth};
use crate::error::{Error, Result};
use crate::homology::RCxValue;
use crate::microdiff::{ad_conjugation, formal_inverse, MicrodiffOperator};
use crate::symcore::{ExactScalar, MonomialKey, Rational};

/// The microdifferential algebra of a chart with coordinates `x₁..xₙ`, truncated
/// to `window` symbol levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartAlgebra {
    nvars: usize,
    window: usize,
}

/// A unit `c·P` with `c ∈ ℂ^×` a formal phase and `P` an invertible operator.
///
/// The pair is kept normalized so that the leading coefficient of `P` lies in
/// the closed first quadrant; the rotation by `iᵏ` moves into the phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartUnit {
    phase: RCxValue,
    op: MicrodiffOperator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartStep {
    AdConj(MicrodiffOperator),
    /// `ad(∂₁^λ)`.
    SectorShift(Rational),
}

/// A composite of steps; `steps[0]` is applied last, as in `f₀ ∘ f₁ ∘ ⋯`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChartMorphism {
    pub steps: Vec<ChartStep>,
}

impl ChartMorphism {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn sector_shift(lambda: Rational) -> Self {
        Self { steps: vec![ChartStep::SectorShift(lambda)] }
    }

    pub fn ad(p: MicrodiffOperator) -> Self {
        Self { steps: vec![ChartStep::AdConj(p)] }
    }

    /// Total shift when every step is a sector shift.
    pub fn as_sector_shift(&self) -> Option<Rational> {
        self.steps.iter().try_fold(Rational::zero(), |acc, s| match s {
            ChartStep::SectorShift(l) => Some(acc + l),
            ChartStep::AdConj(_) => None,
        })
    }
}

impl ChartUnit {
    pub fn new(phase: RCxValue, op: MicrodiffOperator) -> Result<Self> {
        let sym = op.symbol();
        let lead = sym
            .top_nonzero_level()
            .and_then(|j| sym.level(j).iter().next().map(|(_, c)| c.clone()))
            .ok_or(Error::ZeroOperator)?;
        let (k, _) = lead.quadrant_normalize().expect("nonzero");
        let mut op = op;
        let mut phase = phase;
        for _ in 0..k {
            op = op.scale(&ExactScalar::i());
            // c·P = (c·i⁻¹)·(i·P), and i⁻¹ = e^{2πi·3/4}.
            phase = phase.mul(&RCxValue::root_of_unity(Rational::new(3.into(), 4.into())));
        }
        Ok(Self { phase, op })
    }

    pub fn from_op(op: MicrodiffOperator) -> Result<Self> {
        Self::new(RCxValue::one(), op)
    }

    pub fn phase(&self) -> &RCxValue {
        &self.phase
    }

    pub fn op(&self) -> &MicrodiffOperator {
        &self.op
    }

    /// `c·∂₁^m`.
    pub fn scalar_shift(nvars: usize, window: usize, phase: RCxValue, m: Rational) -> Result<Self> {
        Self::new(phase, MicrodiffOperator::d1_pow(nvars, m, window)?)
    }

    /// The exponent `m` and phase when the unit is `c·∂₁^m` on its window.
    pub fn as_scalar_shift(&self) -> Option<(RCxValue, Rational)> {
        let sym = self.op.symbol();
        let j = sym.top_nonzero_level()?;
        let (key, c) = sym.level(j).iter().next()?;
        if !key.is_xi1_power() || !c.is_one() {
            return None;
        }
        let pure = MicrodiffOperator::d1_pow(self.op.nvars(), key.xi1.clone(), self.op.window()).ok()?;
        (pure.agrees_with(&self.op) == Some(true)).then(|| (self.phase.clone(), key.xi1.clone()))
    }
}

impl ChartAlgebra {
    pub fn new(nvars: usize, window: usize) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidAlgebra("a chart needs at least one variable".into()));
        }
        if window < 2 {
            return Err(Error::InvalidAlgebra("chart windows below 2 cannot separate sector shifts".into()));
        }
        Ok(Self { nvars, window })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn window(&self) -> usize {
        self.window
    }

    fn apply_step(&self, step: &ChartStep, op: &MicrodiffOperator) -> Result<MicrodiffOperator> {
        match step {
            ChartStep::AdConj(p) => ad_conjugation(p, op),
            ChartStep::SectorShift(l) => {
                let fwd = MicrodiffOperator::d1_pow(self.nvars, l.clone(), self.window)?;
                let back = MicrodiffOperator::d1_pow(self.nvars, -l, self.window)?;
                fwd.mul(op)?.mul(&back)
            }
        }
    }

    /// Agreement counts only when both sides are known on the full window.
    fn decide(&self, p: &MicrodiffOperator, q: &MicrodiffOperator) -> Truth {
        match p.agrees_with(q) {
            Some(false) => Truth::False,
            Some(true) if p.symbol().common_window(q.symbol()) >= self.window => Truth::True,
            _ => Truth::Indeterminate,
        }
    }

    pub fn apply_to_op(&self, f: &ChartMorphism, op: &MicrodiffOperator) -> Result<MicrodiffOperator> {
        f.steps.iter().rev().try_fold(op.clone(), |acc, s| self.apply_step(s, &acc))
    }

    /// `x₁..xₙ`, `∂₁..∂ₙ` and `∂₁⁻¹`.
    pub fn generators(&self) -> Result<Vec<MicrodiffOperator>> {
        let mut g = Vec::new();
        for i in 0..self.nvars {
            g.push(MicrodiffOperator::x(self.nvars, i, self.window)?);
            g.push(MicrodiffOperator::d(self.nvars, i, self.window)?);
        }
        g.push(MicrodiffOperator::d1_pow(self.nvars, -Rational::one(), self.window)?);
        Ok(g)
    }

    /// The `λ` with `f = ad(∂₁^λ)` on the window, if there is one.
    pub fn recognize_sector_shift(&self, f: &ChartMorphism) -> Result<Option<Rational>> {
        if let Some(l) = f.as_sector_shift() {
            return Ok(Some(l));
        }
        // ad(∂₁^λ)x₁ = x₁ + λ∂₁⁻¹, so λ is read off the ξ₁⁻¹ coefficient.
        let image = self.apply_to_op(f, &MicrodiffOperator::x(self.nvars, 0, self.window)?)?;
        let key = MonomialKey { xi1: -Rational::one(), ..MonomialKey::one(self.nvars) };
        let c = image.symbol().coefficient(&key);
        if !c.im().is_zero() {
            return Ok(None);
        }
        let lambda = c.re().clone();
        Ok(match self.morph_eq(f, &ChartMorphism::sector_shift(lambda.clone()))? {
            Truth::True => Some(lambda),
            _ => None,
        })
    }
}

impl LocalAlgebra for ChartAlgebra {
    type Elem = ChartUnit;
    type Morph = ChartMorphism;

    fn one(&self) -> ChartUnit {
        ChartUnit { phase: RCxValue::one(), op: MicrodiffOperator::identity(self.nvars, self.window).expect("window ≥ 2") }
    }

    fn mul(&self, a: &ChartUnit, b: &ChartUnit) -> Result<ChartUnit> {
        ChartUnit::new(a.phase.mul(&b.phase), a.op.mul(&b.op)?)
    }

    fn inverse(&self, a: &ChartUnit) -> Result<ChartUnit> {
        ChartUnit::new(a.phase.inv(), formal_inverse(&a.op)?)
    }

    fn elem_eq(&self, a: &ChartUnit, b: &ChartUnit) -> Result<Truth> {
        // Normalized leading coefficients make the phase part of the identity: a
        // ratio outside μ₄ is never a Gaussian rational, and one inside μ₄ would
        // rotate a normalized coefficient out of the first quadrant.
        if a.phase != b.phase {
            return Ok(Truth::False);
        }
        Ok(self.decide(&a.op, &b.op))
    }

    fn apply(&self, f: &ChartMorphism, a: &ChartUnit) -> Result<ChartUnit> {
        ChartUnit::new(a.phase.clone(), self.apply_to_op(f, &a.op)?)
    }

    fn compose(&self, f: &ChartMorphism, g: &ChartMorphism) -> ChartMorphism {
        ChartMorphism { steps: f.steps.iter().chain(&g.steps).cloned().collect() }
    }

    fn ad(&self, a: &ChartUnit) -> Result<ChartMorphism> {
        Ok(ChartMorphism::ad(a.op.clone()))
    }

    fn identity(&self) -> ChartMorphism {
        ChartMorphism::identity()
    }

    fn morph_eq(&self, f: &ChartMorphism, g: &ChartMorphism) -> Result<Truth> {
        let mut all = Truth::True;
        for x in self.generators()? {
            let t = self.decide(&self.apply_to_op(f, &x)?, &self.apply_to_op(g, &x)?);
            all = all.and(t);
            if all == Truth::False {
                break;
            }
        }
        Ok(all)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{int, rat};

    fn chart() -> ChartAlgebra {
        ChartAlgebra::new(2, 4).unwrap()
    }

    #[test]
    fn normalization_moves_i_into_the_phase() {
        let a = chart();
        let d = MicrodiffOperator::d(2, 0, 4).unwrap();
        let u = ChartUnit::from_op(d.scale(&ExactScalar::new(int(0), int(-1)))).unwrap();
        assert_eq!(u.phase(), &RCxValue::root_of_unity(rat(3, 4)));
        assert_eq!(a.elem_eq(&u, &ChartUnit::new(RCxValue::root_of_unity(rat(3, 4)), d.clone()).unwrap()).unwrap(), Truth::True);
        assert_eq!(a.elem_eq(&u, &ChartUnit::from_op(d).unwrap()).unwrap(), Truth::False);
    }

    #[test]
    fn sector_shifts_compose_and_are_recognized() {
        let a = chart();
        let f = a.compose(&ChartMorphism::sector_shift(rat(1, 3)), &ChartMorphism::sector_shift(rat(1, 2)));
        assert_eq!(a.morph_eq(&f, &ChartMorphism::sector_shift(rat(5, 6))).unwrap(), Truth::True);
        assert_eq!(a.morph_eq(&f, &ChartMorphism::sector_shift(rat(1, 6))).unwrap(), Truth::False);
        // ad(∂₁) is the integer sector shift 1.
        let g = ChartMorphism::ad(MicrodiffOperator::d(2, 0, 4).unwrap());
        assert_eq!(a.recognize_sector_shift(&g).unwrap(), Some(int(1)));
        let d1 = MicrodiffOperator::d(2, 0, 4).unwrap();
        let h = ChartMorphism::ad(d1.add(&MicrodiffOperator::x(2, 1, 4).unwrap()).unwrap());
        assert_eq!(a.recognize_sector_shift(&h).unwrap(), None);
    }

    #[test]
    fn inverse_and_scalar_shape() {
        let a = chart();
        let u = ChartUnit::scalar_shift(2, 4, RCxValue::root_of_unity(rat(1, 5)), int(2)).unwrap();
        let v = a.mul(&u, &a.inverse(&u).unwrap()).unwrap();
        assert_eq!(a.elem_eq(&v, &a.one()).unwrap(), Truth::True);
        assert_eq!(u.as_scalar_shift(), Some((RCxValue::root_of_unity(rat(1, 5)), int(2))));
    }
}
