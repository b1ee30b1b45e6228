//! Classification of rank-one modules and of algebroid descent data over a
//! circle-bundle model `γ: Y → X`, through the five-term sequence
//! `H¹(Y) → H⁰(X) → H²(X) → H²(Y) → H¹(X)`.

mod model;

use num_traits::Zero;
use serde::Serialize;

use crate::descent::{normal_form, verify_functor_data, ChartAlgebra, ChartMorphism, ChartUnit, DescentData, FunctorData, LocalAlgebra, NormalForm};
use crate::error::{Error, Result};
use crate::homology::{cohomology, smith_normal_form, CoeffValue, Cochain, CochainComplex, CoefficientGroup, IntMatrix, RCxValue};
use crate::symcore::{format_rational, frac, Rational};

pub use model::{add_classes, kunneth_agrees, CircleBundleModel, CircleBundleModelJson, FiveTermReport, FiveTermSequence, GroupReport, MapReport};

/// A rank-one local system on `Y` (an `RCx` 1-cocycle of the cone model)
/// together with the sector shift `[λ] ∈ ℚ/ℤ` it is paired with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicDatum {
    pub ell: Cochain,
    pub shift: Rational,
}

impl PicDatum {
    pub fn new(ell: Cochain, shift: Rational) -> Self {
        Self { ell, shift: frac(&shift) }
    }

    /// Tensor product: cocycles add in `RCx`, shifts add mod 1.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.ell.add(&other.ell)?, &self.shift + &other.shift))
    }
}

/// Coordinates of `ell` in `H¹(Y; RCx)`, after checking that the fiber
/// monodromy of `ell` is `e^{−2πiλ}` at every vertex.
pub fn classify_pic(m: &CircleBundleModel, p: &PicDatum) -> Result<Vec<Rational>> {
    if p.ell.coeff() != CoefficientGroup::RCx || p.ell.degree() != 1 {
        return Err(Error::InvalidValue("a Pic datum carries an RCx 1-cochain on the cone".into()));
    }
    let fiber = m.fiber(&p.ell)?;
    let want = frac(&-&p.shift);
    for v in fiber.values() {
        let CoeffValue::Rcx(z) = v else { unreachable!("RCx cochain") };
        if z.t() != &want {
            return Err(Error::MonodromyMismatch { monodromy: format_rational(z.t()), shift: format_rational(&p.shift) });
        }
    }
    m.total_cohomology(CoefficientGroup::RCx, 1).coordinates(&p.ell)
}

/// The class of normal-form descent data: `[c] ∈ H²(X; RCx)`, `[λ] ∈ H¹(X; ℚ/ℤ)`
/// and the class of `(c, λ)` in `H²(Y; RCx)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidClass {
    pub base2: Vec<Rational>,
    pub fiber1: Vec<Rational>,
    pub total: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebroidClassJson {
    pub base2: Vec<String>,
    pub fiber1: Vec<String>,
    pub total: Vec<String>,
    pub base2_summands: Vec<String>,
    pub fiber1_summands: Vec<String>,
    pub total_summands: Vec<String>,
}

impl AlgebroidClass {
    pub fn to_json(&self, m: &CircleBundleModel) -> AlgebroidClassJson {
        let s = |v: &[Rational]| v.iter().map(format_rational).collect();
        AlgebroidClassJson {
            base2: s(&self.base2),
            fiber1: s(&self.fiber1),
            total: s(&self.total),
            base2_summands: cohomology(m.base(), CoefficientGroup::RCx, 2).summand_labels(),
            fiber1_summands: cohomology(m.base(), CoefficientGroup::QmodZ, 1).summand_labels(),
            total_summands: m.total_cohomology(CoefficientGroup::RCx, 2).summand_labels(),
        }
    }
}

fn check_base(m: &CircleBundleModel, d: &DescentData<ChartAlgebra>) -> Result<()> {
    if &d.nerve != m.base() {
        return Err(Error::InvalidValue("descent data and model have different base nerves".into()));
    }
    Ok(())
}

/// The `RCx` cone cochain `(c, λ)` of a normal form.
pub fn total_cocycle(m: &CircleBundleModel, nf: &NormalForm) -> Result<Cochain> {
    let lambda = nf.lambda()?.change_coefficients(CoefficientGroup::RCx)?;
    m.join(&nf.scalars()?, &lambda)
}

pub fn classify_normal_form(m: &CircleBundleModel, nf: &NormalForm) -> Result<AlgebroidClass> {
    Ok(AlgebroidClass {
        base2: cohomology(m.base(), CoefficientGroup::RCx, 2).coordinates(&nf.scalars()?)?,
        fiber1: cohomology(m.base(), CoefficientGroup::QmodZ, 1).coordinates(&nf.lambda()?)?,
        total: m.total_cohomology(CoefficientGroup::RCx, 2).coordinates(&total_cocycle(m, nf)?)?,
    })
}

/// Classifies descent data in sector-shift normal form.
pub fn classify_algebroid(m: &CircleBundleModel, d: &DescentData<ChartAlgebra>) -> Result<AlgebroidClass> {
    check_base(m, d)?;
    classify_normal_form(m, &normal_form(d)?)
}

/// `p` with `B·p ≡ x (mod 1)` when `exact` is false, or `B·p = x` over `ℚ`.
fn solve_diagonalized(b: &IntMatrix, x: &[Rational], modulo_one: bool) -> Option<Vec<Rational>> {
    let snf = smith_normal_form(b);
    let q = |n: i128| Rational::from_integer(n.into());
    // With U·B·V = D, put y = V⁻¹p: then D·y = U·x.
    let ux: Vec<Rational> = (0..snf.u.rows()).map(|r| snf.u.row(r).iter().zip(x).fold(Rational::zero(), |acc, (&a, xv)| acc + q(a) * xv)).collect();
    let mut y = vec![Rational::zero(); b.cols()];
    for (i, v) in ux.iter().enumerate() {
        if i < snf.rank {
            y[i] = v / q(snf.d[(i, i)]);
        } else if (modulo_one && !v.is_integer()) || (!modulo_one && !v.is_zero()) {
            return None;
        }
    }
    Some((0..b.cols()).map(|r| snf.v.row(r).iter().zip(&y).fold(Rational::zero(), |acc, (&a, yv)| acc + q(a) * yv)).collect())
}

fn rcx_parts(v: &CoeffValue) -> (Rational, Rational) {
    match v {
        CoeffValue::Rcx(z) => (z.t().clone(), z.u().clone()),
        _ => unreachable!("RCx cochain"),
    }
}

/// Searches for functor data `gᵢ = ad(∂₁^{νᵢ})`, `b_ij = p_ij·∂₁^{k_ij}` between two
/// normal forms on the same base. The equations are linear over `ℚ/ℤ` and `ℚ`
/// and are solved exactly through the Smith form of the coboundary; the
/// returned witness has been re-verified.
pub fn find_equivalence(d: &DescentData<ChartAlgebra>, e: &DescentData<ChartAlgebra>) -> Result<Option<FunctorData<ChartAlgebra>>> {
    if d.nerve != e.nerve || d.algebra != e.algebra {
        return Err(Error::InvalidValue("descent data must share nerve and chart".into()));
    }
    let (nd, ne) = (normal_form(d)?, normal_form(e)?);
    let n = &d.nerve;
    let complex = CochainComplex::from_nerve(n, CoefficientGroup::Z);
    // dν ≡ λ̂ − λ̂' (mod 1).
    let dl: Vec<Rational> = nd.lifts.iter().zip(&ne.lifts).map(|(a, b)| a - b).collect();
    let Some(nu) = solve_diagonalized(&complex.differential(0), &dl, true) else { return Ok(None) };
    // dp = c − c' in ℚ/ℤ ⊕ ℚ.
    let c = nd.scalars()?.sub(&ne.scalars()?)?;
    let (ct, cu): (Vec<_>, Vec<_>) = c.values().iter().map(rcx_parts).unzip();
    let b1 = complex.differential(1);
    let Some(pt) = solve_diagonalized(&b1, &ct, true) else { return Ok(None) };
    let Some(pu) = solve_diagonalized(&b1, &cu, false) else { return Ok(None) };
    let alg = &e.algebra;
    let g = nu.iter().map(|v| ChartMorphism::sector_shift(v.clone())).collect();
    let b = n
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            let k = &nu[s[0]] - &nu[s[1]] + &dl[idx];
            debug_assert!(k.is_integer());
            ChartUnit::scalar_shift(alg.nvars(), alg.window(), RCxValue::new(pt[idx].clone(), pu[idx].clone()), k)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = FunctorData { g, b };
    let v = verify_functor_data(d, e, &w)?;
    if !v.holds() {
        return Err(Error::InvalidValue(format!("constructed equivalence failed to verify at {:?}", v.simplex)));
    }
    Ok(Some(w))
}

/// Whether the two data have equal classes and, independently, whether an
/// equivalence exists; the two answers should coincide.
pub fn equivalence_classes_agree(m: &CircleBundleModel, d: &DescentData<ChartAlgebra>, e: &DescentData<ChartAlgebra>) -> Result<bool> {
    check_base(m, d)?;
    check_base(m, e)?;
    let (cd, ce) = (classify_algebroid(m, d)?, classify_algebroid(m, e)?);
    let same = cd.base2 == ce.base2 && cd.fiber1 == ce.fiber1;
    Ok(same == find_equivalence(d, e)?.is_some())
}

/// Transports `d` along `gᵢ = ad(uᵢ)`, `b_ij = s_ij·uᵢ·f_ij(u_j)⁻¹`, which keeps
/// the morphisms and changes the scalars by the coboundary of `s`.
pub fn conjugate_by_units(d: &DescentData<ChartAlgebra>, u: &[ChartUnit], s: &[RCxValue]) -> Result<(DescentData<ChartAlgebra>, FunctorData<ChartAlgebra>)> {
    let alg = &d.algebra;
    let n = &d.nerve;
    if u.len() != n.vertices() || s.len() != n.count(1) {
        return Err(Error::IncompleteAssignment("one unit per vertex and one phase per edge".into()));
    }
    let g = u.iter().map(|ui| alg.ad(ui)).collect::<Result<Vec<_>>>()?;
    let g_inv = u.iter().map(|ui| alg.ad(&alg.inverse(ui)?)).collect::<Result<Vec<_>>>()?;
    let b = n
        .simplices(1)
        .iter()
        .zip(s)
        .map(|(e, si)| {
            let fu = alg.apply(d.f(e[0], e[1]), &u[e[1]])?;
            let core = alg.mul(&u[e[0]], &alg.inverse(&fu)?)?;
            ChartUnit::new(core.phase().mul(si), core.op().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let fd = FunctorData { g, b };
    Ok((crate::descent::transport(d, &fd, &g_inv)?, fd))
}
