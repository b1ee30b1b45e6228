//! Descent data for algebroids: local algebras `Aᵢ`, gluing isomorphisms
//! `f_ij: A_j → A_i` and units `a_ijk ∈ A_i`, together with functors,
//! transformations and rank-one modules between such data.
//!
//! Every identity is checked simplex by simplex in lexicographic order
//! (edges, then triangles, then tetrahedra); the first failure is reported.

mod chart;
pub mod json;
mod table;

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{coboundary, CoeffValue, Cochain, CoefficientGroup, CoverNerve, RCxValue};
use crate::symcore::{frac, Rational};

pub use chart::{ChartAlgebra, ChartMorphism, ChartStep, ChartUnit};
pub use table::{TableAlgebra, TableField, TableMorphism};

/// Outcome of a window-limited equality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Indeterminate,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    /// `None` (nothing known in common) is indeterminate.
    pub fn from_option(b: Option<bool>) -> Self {
        b.map_or(Truth::Indeterminate, Self::from_bool)
    }

    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Indeterminate,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Indeterminate => "indeterminate",
        })
    }
}

/// The algebra used on every chart together with its morphisms.
pub trait LocalAlgebra {
    type Elem: Clone + fmt::Debug;
    type Morph: Clone + fmt::Debug;

    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn elem_eq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Truth>;
    fn apply(&self, f: &Self::Morph, a: &Self::Elem) -> Result<Self::Elem>;
    /// `f ∘ g`.
    fn compose(&self, f: &Self::Morph, g: &Self::Morph) -> Self::Morph;
    /// `x ↦ a·x·a⁻¹`.
    fn ad(&self, a: &Self::Elem) -> Result<Self::Morph>;
    fn identity(&self) -> Self::Morph;
    fn morph_eq(&self, f: &Self::Morph, g: &Self::Morph) -> Result<Truth>;

    fn mul3(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem> {
        self.mul(&self.mul(a, b)?, c)
    }
}

/// `f_ij` for every edge `i < j` (in the nerve's edge order) and `a_ijk` for
/// every triangle `i < j < k`. All charts carry the same algebra.
#[derive(Clone, Debug)]
pub struct DescentData<A: LocalAlgebra> {
    pub nerve: CoverNerve,
    pub algebra: A,
    pub morphisms: Vec<A::Morph>,
    pub units: Vec<A::Elem>,
}

/// `gᵢ: Aᵢ → A'ᵢ` per vertex and `b_ij ∈ A'ᵢ` per edge.
#[derive(Clone, Debug)]
pub struct FunctorData<A: LocalAlgebra> {
    pub g: Vec<A::Morph>,
    pub b: Vec<A::Elem>,
}

/// `dᵢ ∈ A'ᵢ` per vertex.
#[derive(Clone, Debug)]
pub struct TransformationData<A: LocalAlgebra> {
    pub d: Vec<A::Elem>,
}

/// Rank-one modules `Mᵢ = Aᵢ` glued by `φ_ij(u) = f_ij(u)·m_ij`, one unit per edge.
#[derive(Clone, Debug)]
pub struct ModuleData<A: LocalAlgebra> {
    pub m: Vec<A::Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub truth: Truth,
    /// The first simplex where the identity fails (or cannot be decided).
    pub simplex: Option<Vec<usize>>,
    pub condition: Option<&'static str>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.truth == Truth::True
    }
}

/// Runs checks in order: the first `False` wins, otherwise the first `Indeterminate`.
fn collect(checks: Vec<Check<'_>>) -> Result<Verdict> {
    let mut pending = None;
    for (simplex, condition, check) in checks {
        match check()? {
            Truth::True => {}
            Truth::False => return Ok(Verdict { truth: Truth::False, simplex: Some(simplex), condition: Some(condition) }),
            Truth::Indeterminate => {
                pending.get_or_insert((simplex, condition));
            }
        }
    }
    Ok(match pending {
        Some((s, c)) => Verdict { truth: Truth::Indeterminate, simplex: Some(s), condition: Some(c) },
        None => Verdict { truth: Truth::True, simplex: None, condition: None },
    })
}

type Check<'a> = (Vec<usize>, &'static str, Box<dyn FnOnce() -> Result<Truth> + 'a>);

fn edge(n: &CoverNerve, i: usize, j: usize) -> usize {
    n.edge(i, j).expect("face of a nerve simplex")
}

fn tri(n: &CoverNerve, s: &[usize]) -> usize {
    n.index_of(s).expect("face of a nerve simplex")
}

fn check_lengths(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::IncompleteAssignment(format!("{what}: {got} entries for {want} simplices")));
    }
    Ok(())
}

impl<A: LocalAlgebra> DescentData<A> {
    pub fn new(nerve: CoverNerve, algebra: A, morphisms: Vec<A::Morph>, units: Vec<A::Elem>) -> Result<Self> {
        check_lengths("morphisms", morphisms.len(), nerve.count(1))?;
        check_lengths("units", units.len(), nerve.count(2))?;
        Ok(Self { nerve, algebra, morphisms, units })
    }

    /// `f = id`, `a = 1`.
    pub fn trivial(nerve: CoverNerve, algebra: A) -> Self {
        let morphisms = vec![algebra.identity(); nerve.count(1)];
        let units = vec![algebra.one(); nerve.count(2)];
        Self { nerve, algebra, morphisms, units }
    }

    pub fn f(&self, i: usize, j: usize) -> &A::Morph {
        &self.morphisms[edge(&self.nerve, i, j)]
    }

    pub fn a(&self, s: &[usize]) -> &A::Elem {
        &self.units[tri(&self.nerve, s)]
    }

    fn check_complete(&self) -> Result<()> {
        check_lengths("morphisms", self.morphisms.len(), self.nerve.count(1))?;
        check_lengths("units", self.units.len(), self.nerve.count(2))
    }
}

/// `f_ij ∘ f_jk = ad(a_ijk) ∘ f_ik` on triangles and
/// `a_ijk·a_ikl = f_ij(a_jkl)·a_ijl` on tetrahedra.
pub fn verify_descent<A: LocalAlgebra>(d: &DescentData<A>) -> Result<Verdict> {
    d.check_complete()?;
    let alg = &d.algebra;
    let mut checks: Vec<Check> = Vec::new();
    for s in d.nerve.simplices(2) {
        let (i, j, k) = (s[0], s[1], s[2]);
        checks.push((
            s.clone(),
            "f_ij f_jk = ad(a_ijk) f_ik",
            Box::new(move || {
                let lhs = alg.compose(d.f(i, j), d.f(j, k));
                let rhs = alg.compose(&alg.ad(d.a(&[i, j, k]))?, d.f(i, k));
                alg.morph_eq(&lhs, &rhs)
            }),
        ));
    }
    for s in d.nerve.simplices(3) {
        let (i, j, k, l) = (s[0], s[1], s[2], s[3]);
        checks.push((
            s.clone(),
            "a_ijk a_ikl = f_ij(a_jkl) a_ijl",
            Box::new(move || {
                let lhs = alg.mul(d.a(&[i, j, k]), d.a(&[i, k, l]))?;
                let rhs = alg.mul(&alg.apply(d.f(i, j), d.a(&[j, k, l]))?, d.a(&[i, j, l]))?;
                alg.elem_eq(&lhs, &rhs)
            }),
        ));
    }
    collect(checks)
}

fn same_nerve<A: LocalAlgebra>(d: &DescentData<A>, e: &DescentData<A>) -> Result<()> {
    if d.nerve != e.nerve {
        return Err(Error::InvalidValue("descent data live on different nerves".into()));
    }
    Ok(())
}

/// `gᵢ f_ij = ad(b_ij) f'_ij g_j` on edges and
/// `gᵢ(a_ijk)·b_ik = b_ij·f'_ij(b_jk)·a'_ijk` on triangles.
pub fn verify_functor_data<A: LocalAlgebra>(d: &DescentData<A>, e: &DescentData<A>, fd: &FunctorData<A>) -> Result<Verdict> {
    same_nerve(d, e)?;
    d.check_complete()?;
    e.check_complete()?;
    let n = &d.nerve;
    check_lengths("g", fd.g.len(), n.vertices())?;
    check_lengths("b", fd.b.len(), n.count(1))?;
    let alg = &e.algebra;
    let b = |i: usize, j: usize| &fd.b[edge(n, i, j)];
    let mut checks: Vec<Check> = Vec::new();
    for s in n.simplices(1) {
        let (i, j) = (s[0], s[1]);
        checks.push((
            s.clone(),
            "g_i f_ij = ad(b_ij) f'_ij g_j",
            Box::new(move || {
                let lhs = alg.compose(&fd.g[i], d.f(i, j));
                let rhs = alg.compose(&alg.compose(&alg.ad(b(i, j))?, e.f(i, j)), &fd.g[j]);
                alg.morph_eq(&lhs, &rhs)
            }),
        ));
    }
    for s in n.simplices(2) {
        let (i, j, k) = (s[0], s[1], s[2]);
        checks.push((
            s.clone(),
            "g_i(a_ijk) b_ik = b_ij f'_ij(b_jk) a'_ijk",
            Box::new(move || {
                let lhs = alg.mul(&alg.apply(&fd.g[i], d.a(&[i, j, k]))?, b(i, k))?;
                let rhs = alg.mul3(b(i, j), &alg.apply(e.f(i, j), b(j, k))?, e.a(&[i, j, k]))?;
                alg.elem_eq(&lhs, &rhs)
            }),
        ));
    }
    collect(checks)
}

/// `t: F ⇒ F'` between functors into `e`: `g'ᵢ = ad(dᵢ) gᵢ` on vertices and
/// `dᵢ·b_ij = b'_ij·f'_ij(d_j)` on edges.
pub fn verify_transformation<A: LocalAlgebra>(
    e: &DescentData<A>,
    f: &FunctorData<A>,
    f2: &FunctorData<A>,
    t: &TransformationData<A>,
) -> Result<Verdict> {
    e.check_complete()?;
    let n = &e.nerve;
    for (name, fd) in [("F", f), ("F'", f2)] {
        check_lengths(&format!("{name}.g"), fd.g.len(), n.vertices())?;
        check_lengths(&format!("{name}.b"), fd.b.len(), n.count(1))?;
    }
    check_lengths("d", t.d.len(), n.vertices())?;
    let alg = &e.algebra;
    let mut checks: Vec<Check> = Vec::new();
    for i in 0..n.vertices() {
        checks.push((
            vec![i],
            "g'_i = ad(d_i) g_i",
            Box::new(move || alg.morph_eq(&f2.g[i], &alg.compose(&alg.ad(&t.d[i])?, &f.g[i]))),
        ));
    }
    for s in n.simplices(1) {
        let (i, j) = (s[0], s[1]);
        let ij = edge(n, i, j);
        checks.push((
            s.clone(),
            "d_i b_ij = b'_ij f'_ij(d_j)",
            Box::new(move || {
                let lhs = alg.mul(&t.d[i], &f.b[ij])?;
                let rhs = alg.mul(&f2.b[ij], &alg.apply(e.f(i, j), &t.d[j])?)?;
                alg.elem_eq(&lhs, &rhs)
            }),
        ));
    }
    collect(checks)
}

/// `φ_ij ∘ f_ij(φ_jk) = φ_ik ∘ a_ijk⁻¹`, which for `φ_ij = f_ij(·)·m_ij`
/// reads `f_ij(m_jk)·m_ij = a_ijk·m_ik` on every triangle.
pub fn verify_module_data<A: LocalAlgebra>(d: &DescentData<A>, md: &ModuleData<A>) -> Result<Verdict> {
    d.check_complete()?;
    let n = &d.nerve;
    check_lengths("m", md.m.len(), n.count(1))?;
    let alg = &d.algebra;
    let m = |i: usize, j: usize| &md.m[edge(n, i, j)];
    let checks: Vec<Check> = n
        .simplices(2)
        .iter()
        .map(|s| {
            let (i, j, k) = (s[0], s[1], s[2]);
            let check: Box<dyn FnOnce() -> Result<Truth>> = Box::new(move || {
                let lhs = alg.mul(&alg.apply(d.f(i, j), m(j, k))?, m(i, j))?;
                let rhs = alg.mul(d.a(&[i, j, k]), m(i, k))?;
                alg.elem_eq(&lhs, &rhs)
            });
            (s.clone(), "f_ij(m_jk) m_ij = a_ijk m_ik", check)
        })
        .collect();
    collect(checks)
}

/// Transports `d` along `(g, b)`: `f'_ij = ad(b_ij)⁻¹ gᵢ f_ij g_j⁻¹` and
/// `a'_ijk = (b_ij f'_ij(b_jk))⁻¹ gᵢ(a_ijk) b_ik`, so that `(g, b)` is functor
/// data from `d` to the result. `g_inv` lists the inverses of the `gᵢ`.
pub fn transport<A: LocalAlgebra + Clone>(d: &DescentData<A>, fd: &FunctorData<A>, g_inv: &[A::Morph]) -> Result<DescentData<A>> {
    d.check_complete()?;
    let n = &d.nerve;
    check_lengths("g", fd.g.len(), n.vertices())?;
    check_lengths("g⁻¹", g_inv.len(), n.vertices())?;
    check_lengths("b", fd.b.len(), n.count(1))?;
    let alg = &d.algebra;
    let morphisms = n
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let back = alg.ad(&alg.inverse(&fd.b[e])?)?;
            Ok(alg.compose(&alg.compose(&back, &fd.g[s[0]]), &alg.compose(d.f(s[0], s[1]), &g_inv[s[1]])))
        })
        .collect::<Result<Vec<_>>>()?;
    let b = |i: usize, j: usize| &fd.b[edge(n, i, j)];
    let units = n
        .simplices(2)
        .iter()
        .map(|s| {
            let (i, j, k) = (s[0], s[1], s[2]);
            let fij = &morphisms[edge(n, i, j)];
            let left = alg.inverse(&alg.mul(b(i, j), &alg.apply(fij, b(j, k))?)?)?;
            alg.mul3(&left, &alg.apply(&fd.g[i], d.a(s))?, b(i, k))
        })
        .collect::<Result<Vec<_>>>()?;
    DescentData::new(n.clone(), alg.clone(), morphisms, units)
}

/// Sector-shift normal form: `f_ij = ad(∂₁^{λ̂_ij})` and `a_ijk = c_ijk·∂₁^{m_ijk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    /// Rational lifts per edge.
    pub lifts: Vec<Rational>,
    /// Phases per triangle.
    pub phases: Vec<RCxValue>,
}

impl NormalForm {
    /// `λ` as a `ℚ/ℤ` 1-cochain.
    pub fn lambda(&self) -> Result<Cochain> {
        Cochain::new(1, CoefficientGroup::QmodZ, self.lifts.iter().map(|l| CoeffValue::Rat(l.clone())).collect())
    }

    /// The scalar part `c` as an `RCx` 2-cochain.
    pub fn scalars(&self) -> Result<Cochain> {
        Cochain::new(2, CoefficientGroup::RCx, self.phases.iter().map(|p| CoeffValue::Rcx(p.clone())).collect())
    }
}

fn lift_discrepancy(n: &CoverNerve, lifts: &[Rational], s: &[usize]) -> Rational {
    &lifts[edge(n, s[0], s[1])] + &lifts[edge(n, s[1], s[2])] - &lifts[edge(n, s[0], s[2])]
}

/// Reads the normal form off chart data. Morphisms must equal sector shifts on
/// the window and every unit must be a phase times `∂₁^{λ̂_ij+λ̂_jk−λ̂_ik}`.
pub fn normal_form(d: &DescentData<ChartAlgebra>) -> Result<NormalForm> {
    d.check_complete()?;
    let n = &d.nerve;
    let mut lifts = Vec::new();
    for (s, f) in n.simplices(1).iter().zip(&d.morphisms) {
        let l = d
            .algebra
            .recognize_sector_shift(f)?
            .ok_or_else(|| Error::NotNormalForm(format!("morphism on edge {s:?} is not a sector shift on the window")))?;
        lifts.push(l);
    }
    let mut phases = Vec::new();
    for (s, a) in n.simplices(2).iter().zip(&d.units) {
        let want = lift_discrepancy(n, &lifts, s);
        match a.as_scalar_shift() {
            Some((p, m)) if m == want => phases.push(p),
            _ => return Err(Error::NotNormalForm(format!("unit on triangle {s:?} is not a scalar times ∂₁^{want}"))),
        }
    }
    Ok(NormalForm { lifts, phases })
}

fn require_cocycle(nerve: &CoverNerve, c: &Cochain, degree: usize, what: &str) -> Result<()> {
    if c.degree() != degree || c.len() != nerve.count(degree) {
        return Err(Error::InvalidValue(format!("{what} must be a degree-{degree} cochain on the nerve")));
    }
    if !coboundary(nerve, c)?.is_zero() {
        return Err(Error::NotACocycle(format!("{what} has nonzero coboundary")));
    }
    Ok(())
}

fn as_qmodz(c: &Cochain) -> Result<Cochain> {
    match c.coeff() {
        CoefficientGroup::QmodZ => Ok(c.clone()),
        CoefficientGroup::Q => c.change_coefficients(CoefficientGroup::QmodZ),
        other => Err(Error::CoefficientMismatch { left: other.to_string(), right: "Q/Z".into() }),
    }
}

fn as_rcx(c: &Cochain) -> Result<Cochain> {
    match c.coeff() {
        CoefficientGroup::RCx => Ok(c.clone()),
        CoefficientGroup::QmodZ => c.change_coefficients(CoefficientGroup::RCx),
        other => Err(Error::CoefficientMismatch { left: other.to_string(), right: "RCx".into() }),
    }
}

fn rat_value(v: &CoeffValue) -> Rational {
    match v {
        CoeffValue::Rat(q) => q.clone(),
        CoeffValue::Int(n) => Rational::from_integer((*n).into()),
        CoeffValue::Rcx(r) => r.t().clone(),
    }
}

fn rcx_value(v: &CoeffValue) -> RCxValue {
    match v {
        CoeffValue::Rcx(r) => r.clone(),
        other => RCxValue::root_of_unity(rat_value(other)),
    }
}

/// Builds chart data from explicit lifts and phases.
pub fn from_normal_form(nerve: &CoverNerve, algebra: &ChartAlgebra, nf: &NormalForm) -> Result<DescentData<ChartAlgebra>> {
    check_lengths("lifts", nf.lifts.len(), nerve.count(1))?;
    check_lengths("phases", nf.phases.len(), nerve.count(2))?;
    let morphisms = nf.lifts.iter().map(|l| ChartMorphism::sector_shift(l.clone())).collect();
    let units = nerve
        .simplices(2)
        .iter()
        .zip(&nf.phases)
        .map(|(s, p)| ChartUnit::scalar_shift(algebra.nvars(), algebra.window(), p.clone(), lift_discrepancy(nerve, &nf.lifts, s)))
        .collect::<Result<Vec<_>>>()?;
    DescentData::new(nerve.clone(), algebra.clone(), morphisms, units)
}

/// Twists the trivial chart data by a `ℚ/ℤ` 1-cocycle `λ` and a `ℂ^×` 2-cocycle `c`:
/// `f_ij = ad(∂₁^{λ̂_ij})` with `λ̂ ∈ [0, 1)` and `a_ijk = c_ijk·∂₁^{λ̂_ij+λ̂_jk−λ̂_ik}`.
pub fn twist_by_lambda(nerve: &CoverNerve, lambda: &Cochain, c: &Cochain, algebra: &ChartAlgebra) -> Result<DescentData<ChartAlgebra>> {
    let lambda = as_qmodz(lambda)?;
    let c = as_rcx(c)?;
    require_cocycle(nerve, &lambda, 1, "λ")?;
    require_cocycle(nerve, &c, 2, "c")?;
    let nf = NormalForm {
        lifts: lambda.values().iter().map(|v| frac(&rat_value(v))).collect(),
        phases: c.values().iter().map(rcx_value).collect(),
    };
    from_normal_form(nerve, algebra, &nf)
}

/// Twists normal-form data by `(λ', c')`: shifts add (keeping both lifts) and
/// phases multiply.
pub fn twist(d: &DescentData<ChartAlgebra>, lambda: &Cochain, c: &Cochain) -> Result<DescentData<ChartAlgebra>> {
    let lambda = as_qmodz(lambda)?;
    let c = as_rcx(c)?;
    require_cocycle(&d.nerve, &lambda, 1, "λ")?;
    require_cocycle(&d.nerve, &c, 2, "c")?;
    let nf = normal_form(d)?;
    let out = NormalForm {
        lifts: nf.lifts.iter().zip(lambda.values()).map(|(l, v)| l + frac(&rat_value(v))).collect(),
        phases: nf.phases.iter().zip(c.values()).map(|(p, v)| p.mul(&rcx_value(v))).collect(),
    };
    from_normal_form(&d.nerve, &d.algebra, &out)
}

/// Functor data between two normal forms with the same phases whose lifts
/// differ by integers: `gᵢ = id`, `b_ij = ∂₁^{λ̂_ij − λ̂'_ij}`.
pub fn lift_change_witness(d: &DescentData<ChartAlgebra>, e: &DescentData<ChartAlgebra>) -> Result<FunctorData<ChartAlgebra>> {
    same_nerve(d, e)?;
    let (nd, ne) = (normal_form(d)?, normal_form(e)?);
    let alg = &e.algebra;
    let b = nd
        .lifts
        .iter()
        .zip(&ne.lifts)
        .map(|(l, l2)| {
            let k = l - l2;
            if !k.is_integer() {
                return Err(Error::InvalidValue("lifts differ by a non-integer".into()));
            }
            ChartUnit::scalar_shift(alg.nvars(), alg.window(), RCxValue::one(), k)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctorData { g: vec![alg.identity(); d.nerve.vertices()], b })
}

/// Phase-only module data `m_ij = p_ij` for normal-form data whose scalars are
/// `c = dp` and whose shifts are integral, i.e. `λ̂ = 0`.
pub fn module_from_phases(d: &DescentData<ChartAlgebra>, p: &[RCxValue]) -> Result<ModuleData<ChartAlgebra>> {
    check_lengths("phases", p.len(), d.nerve.count(1))?;
    let alg = &d.algebra;
    let m = p
        .iter()
        .map(|pi| ChartUnit::scalar_shift(alg.nvars(), alg.window(), pi.clone(), Rational::zero()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModuleData { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::models;
    use crate::microdiff::MicrodiffOperator;
    use crate::symcore::{int, rat, ExactScalar};

    fn chart() -> ChartAlgebra {
        ChartAlgebra::new(2, 4).unwrap()
    }

    fn qz(n: &CoverNerve, k: usize, f: impl Fn(&[usize]) -> Rational) -> Cochain {
        Cochain::on_nerve(n, k, CoefficientGroup::QmodZ, |s| CoeffValue::Rat(f(s))).unwrap()
    }

    #[test]
    fn trivial_and_integer_shifts_verify() {
        let n = models::sphere();
        assert!(verify_descent(&DescentData::trivial(n.clone(), chart())).unwrap().holds());
        // f_ij = ad(∂₁^{m_ij}) for m = dh, h = vertex labels.
        let nf = NormalForm {
            lifts: n.simplices(1).iter().map(|e| int(e[1] as i64 - e[0] as i64)).collect(),
            phases: vec![RCxValue::one(); n.count(2)],
        };
        let d = from_normal_form(&n, &chart(), &nf).unwrap();
        assert!(verify_descent(&d).unwrap().holds());
        // Built with plain ad(∂₁^m) morphisms and ∂₁-power units, not sector-shift steps.
        let adj = DescentData::new(
            n.clone(),
            chart(),
            nf.lifts.iter().map(|l| ChartMorphism::ad(MicrodiffOperator::d1_pow(2, l.clone(), 4).unwrap())).collect(),
            vec![chart().one(); n.count(2)],
        )
        .unwrap();
        assert!(verify_descent(&adj).unwrap().holds());
    }

    #[test]
    fn twist_on_circle_and_sphere() {
        let s1 = models::circle();
        let lam = qz(&s1, 1, |e| if e == [0, 2] { int(0) } else { rat(1, 3) });
        // λ₀₁ = λ₁₂ = 1/3, λ₀₂ = 0 is a cocycle only on the triangle-free circle.
        let d = twist_by_lambda(&s1, &lam, &Cochain::zero(2, CoefficientGroup::RCx, 0), &chart()).unwrap();
        assert!(verify_descent(&d).unwrap().holds());
        assert_eq!(normal_form(&d).unwrap().lifts, vec![rat(1, 3), int(0), rat(1, 3)]);

        let s2 = models::sphere();
        let c = qz(&s2, 2, |t| if t == [1, 2, 3] { rat(1, 4) } else { int(0) });
        let d = twist_by_lambda(&s2, &Cochain::zero(1, CoefficientGroup::QmodZ, s2.count(1)), &c, &chart()).unwrap();
        assert!(verify_descent(&d).unwrap().holds());

        let bad = qz(&s2, 1, |e| if e == [0, 1] { rat(1, 2) } else { int(0) });
        assert!(matches!(twist_by_lambda(&s2, &bad, &c, &chart()), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn perturbed_tetrahedron_is_reported() {
        let s = models::simplex(4);
        let mut d = DescentData::trivial(s.clone(), chart());
        let t = s.index_of(&[0, 2, 3]).unwrap();
        d.units[t] = ChartUnit::new(RCxValue::root_of_unity(rat(1, 3)), MicrodiffOperator::identity(2, 4).unwrap()).unwrap();
        let v = verify_descent(&d).unwrap();
        assert_eq!(v.truth, Truth::False);
        assert_eq!(v.simplex, Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn short_windows_are_indeterminate() {
        let s = models::simplex(4);
        let mut d = DescentData::trivial(s.clone(), chart());
        d.units[0] = ChartUnit::from_op(MicrodiffOperator::identity(2, 1).unwrap()).unwrap();
        let v = verify_descent(&d).unwrap();
        // ad(a₀₁₂) is already undecidable on the first triangle.
        assert_eq!((v.truth, v.simplex), (Truth::Indeterminate, Some(vec![0, 1, 2])));
    }

    #[test]
    fn functor_data_examples() {
        let n = models::sphere();
        let alg = chart();
        let d = DescentData::trivial(n.clone(), alg.clone());
        // Identity functor.
        let id = FunctorData { g: vec![alg.identity(); 4], b: vec![alg.one(); n.count(1)] };
        assert!(verify_functor_data(&d, &d, &id).unwrap().holds());
        // gᵢ = ad(∂₁) into the transported data.
        let d1 = ChartUnit::from_op(MicrodiffOperator::d(2, 0, 4).unwrap()).unwrap();
        let g = FunctorData { g: vec![alg.ad(&d1).unwrap(); 4], b: vec![alg.one(); n.count(1)] };
        let g_inv = vec![alg.ad(&alg.inverse(&d1).unwrap()).unwrap(); 4];
        let e = transport(&d, &g, &g_inv).unwrap();
        assert!(verify_descent(&e).unwrap().holds());
        assert!(verify_functor_data(&d, &e, &g).unwrap().holds());
        // b = 1 against a target with shifted morphisms fails on the first edge.
        let shifted = from_normal_form(
            &n,
            &alg,
            &NormalForm { lifts: n.simplices(1).iter().map(|e| int(e[1] as i64 - e[0] as i64)).collect(), phases: vec![RCxValue::one(); 4] },
        )
        .unwrap();
        let v = verify_functor_data(&d, &shifted, &id).unwrap();
        assert_eq!((v.truth, v.simplex), (Truth::False, Some(vec![0, 1])));
    }

    #[test]
    fn transformation_and_modules_on_tables() {
        let m2 = TableAlgebra::matrices(2, TableField::Gaussian).unwrap();
        let n = models::simplex(3);
        let u = m2.element(vec![1.into(), 1.into(), 0.into(), 1.into()]).unwrap();
        // f_ij = ad(u^{j−i}), a = 1: a valid cocycle since ad is multiplicative.
        let pow = |k: usize| (0..k).fold(m2.one(), |acc, _| m2.mul(&acc, &u).unwrap());
        let morphisms = n.simplices(1).iter().map(|e| m2.ad(&pow(e[1] - e[0])).unwrap()).collect();
        let d = DescentData::new(n.clone(), m2.clone(), morphisms, vec![m2.one()]).unwrap();
        assert!(verify_descent(&d).unwrap().holds());
        // m_ij = u^{j−i}: f_ij(u^{k−j})·u^{j−i} = u^{k−i}.
        let md = ModuleData { m: n.simplices(1).iter().map(|e| pow(e[1] - e[0])).collect() };
        assert!(verify_module_data(&d, &md).unwrap().holds());
        let mut flipped = md.clone();
        flipped.m[0] = m2.mul(&m2.scalar(ExactScalar::from_int(-1)).unwrap(), &flipped.m[0]).unwrap();
        let v = verify_module_data(&d, &flipped).unwrap();
        assert_eq!((v.truth, v.simplex), (Truth::False, Some(vec![0, 1, 2])));

        // Central d with b' = d·b·f'(d)⁻¹.
        let id = FunctorData { g: vec![m2.identity(); 3], b: vec![m2.one(); 3] };
        let z = m2.scalar(ExactScalar::from_int(5)).unwrap();
        let b2 = n
            .simplices(1)
            .iter()
            .map(|e| m2.mul(&z, &m2.inverse(&m2.apply(d.f(e[0], e[1]), &z).unwrap()).unwrap()).unwrap())
            .collect();
        let f2 = FunctorData { g: vec![m2.identity(); 3], b: b2 };
        let t = TransformationData { d: vec![z.clone(); 3] };
        assert!(verify_transformation(&d, &id, &f2, &t).unwrap().holds());
        let wrong = TransformationData { d: vec![z.clone(), m2.one(), z] };
        let v = verify_transformation(&d, &id, &f2, &wrong).unwrap();
        assert_eq!((v.truth, v.simplex), (Truth::False, Some(vec![0, 1])));
    }

    #[test]
    fn twist_composition_is_equivalent_to_sum() {
        let n = models::circle();
        let alg = chart();
        let l1 = qz(&n, 1, |e| if e == [0, 2] { int(0) } else { rat(2, 3) });
        let l2 = qz(&n, 1, |_| rat(1, 2));
        let none = Cochain::zero(2, CoefficientGroup::RCx, 0);
        let once = twist(&twist_by_lambda(&n, &l1, &none, &alg).unwrap(), &l2, &none).unwrap();
        let sum = twist_by_lambda(&n, &l1.add(&l2).unwrap(), &none, &alg).unwrap();
        let w = lift_change_witness(&once, &sum).unwrap();
        assert!(verify_functor_data(&once, &sum, &w).unwrap().holds());
    }
}
