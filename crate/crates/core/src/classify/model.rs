use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::complex::apply_matrix;
use crate::homology::{
    coboundary, cohomology, complex_cohomology, models, AbelianGroupPresentation, Cochain, CochainComplex, CochainJson, CoefficientGroup,
    CoverNerve, IntMatrix, NerveJson, Summand,
};
use crate::symcore::{format_rational, frac, Rational};

/// A circle bundle `Y → X` over a nerve, recorded by an integer Euler 2-cocycle.
///
/// Cochains on `Y` are modeled by the cone `Cⁿ(Y) = Cⁿ(X) ⊕ Cⁿ⁻¹(X)` with
/// `d(a, b) = (da + e⌣b, −db)`; the second slot is the fiber direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleBundleModel {
    base: CoverNerve,
    euler: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleBundleModelJson {
    pub base: NerveJson,
    pub euler: CochainJson,
}

impl CircleBundleModel {
    pub fn new(base: CoverNerve, euler: Cochain) -> Result<Self> {
        if euler.coeff() != CoefficientGroup::Z {
            return Err(Error::CoefficientMismatch { left: euler.coeff().to_string(), right: "Z".into() });
        }
        if euler.degree() != 2 || euler.len() != base.count(2) {
            return Err(Error::InvalidValue("the Euler class must be a 2-cochain on the base".into()));
        }
        if !coboundary(&base, &euler)?.is_zero() {
            return Err(Error::NotACocycle("Euler cochain has nonzero coboundary".into()));
        }
        Ok(Self { base, euler })
    }

    /// The product bundle `X × S¹`.
    pub fn trivial(base: CoverNerve) -> Self {
        let euler = Cochain::zero(2, CoefficientGroup::Z, base.count(2));
        Self { base, euler }
    }

    /// Euler cocycle `k` times the indicator of one triangle.
    pub fn with_euler_on(base: CoverNerve, triangle: &[usize], k: i128) -> Result<Self> {
        let idx = base.index_of(triangle).ok_or_else(|| Error::InvalidValue(format!("{triangle:?} is not a triangle")))?;
        let mut vals = vec![0; base.count(2)];
        vals[idx] = k;
        let e = Cochain::from_ints(2, CoefficientGroup::Z, &vals)?;
        Self::new(base, e)
    }

    pub fn from_json(j: &CircleBundleModelJson) -> Result<Self> {
        let base = CoverNerve::from_json(&j.base)?;
        let euler = Cochain::from_json(&base, &j.euler)?;
        Self::new(base, euler)
    }

    pub fn to_json(&self) -> CircleBundleModelJson {
        CircleBundleModelJson { base: self.base.to_json(), euler: self.euler.to_json(&self.base) }
    }

    pub fn base(&self) -> &CoverNerve {
        &self.base
    }

    pub fn euler(&self) -> &Cochain {
        &self.euler
    }

    pub fn dim_total(&self, n: usize) -> usize {
        self.base.count(n) + if n == 0 { 0 } else { self.base.count(n - 1) }
    }

    /// Matrix of `b ↦ e⌣b` from `Cⁿ⁻¹(X)` to `Cⁿ⁺¹(X)`:
    /// `(e⌣b)(v₀…vₙ₊₁) = e(v₀v₁v₂)·b(v₂…vₙ₊₁)`.
    fn euler_matrix(&self, n: usize) -> IntMatrix {
        let rows = self.base.count(n + 1);
        let cols = if n == 0 { 0 } else { self.base.count(n - 1) };
        let mut m = IntMatrix::zeros(rows, cols);
        if n == 0 {
            return m;
        }
        let e = self.euler.as_ints().expect("integer Euler cochain");
        for (r, s) in self.base.simplices(n + 1).iter().enumerate() {
            let w = e[self.base.index_of(&s[..3]).expect("front face")];
            if w != 0 {
                m[(r, self.base.index_of(&s[2..]).expect("back face"))] += w;
            }
        }
        m
    }

    pub fn cup_euler(&self, b: &Cochain) -> Result<Cochain> {
        let k = b.degree();
        apply_matrix(&self.euler_matrix(k + 1), b, k + 2)
    }

    /// The cone complex with coefficients `coeff`, up to degree `dim X + 1`.
    pub fn total_complex(&self, coeff: CoefficientGroup) -> CochainComplex {
        let base = CochainComplex::from_nerve(&self.base, CoefficientGroup::Z);
        let top = self.base.dim() + 1;
        let dims: Vec<usize> = (0..=top).map(|n| self.dim_total(n)).collect();
        let diffs = (0..top)
            .map(|n| {
                let mut m = IntMatrix::zeros(dims[n + 1], dims[n]);
                let (an, an1) = (self.base.count(n), self.base.count(n + 1));
                m.place(0, 0, &base.differential(n));
                if n > 0 {
                    m.place(0, an, &self.euler_matrix(n));
                    let db = base.differential(n - 1);
                    let neg = IntMatrix::from_rows(&(0..db.rows()).map(|r| db.row(r).iter().map(|v| -v).collect()).collect::<Vec<_>>());
                    m.place(an1, an, &neg);
                }
                m
            })
            .collect();
        CochainComplex::new(coeff, dims, diffs).expect("the Euler cone squares to zero for a cocycle e")
    }

    pub fn total_cohomology(&self, coeff: CoefficientGroup, k: usize) -> AbelianGroupPresentation {
        complex_cohomology(&self.total_complex(coeff), k)
    }

    /// `(a, b) ↦ a ⊕ b` in degree `a.degree()`.
    pub fn join(&self, a: &Cochain, b: &Cochain) -> Result<Cochain> {
        if a.coeff() != b.coeff() {
            return Err(Error::CoefficientMismatch { left: a.coeff().to_string(), right: b.coeff().to_string() });
        }
        let n = a.degree();
        if a.len() != self.base.count(n) || b.degree() + 1 != n.max(1) || b.len() != if n == 0 { 0 } else { self.base.count(n - 1) } {
            return Err(Error::InvalidValue("slots do not match the cone degrees".into()));
        }
        Cochain::new(n, a.coeff(), a.values().iter().chain(b.values()).cloned().collect())
    }

    /// Base and fiber slots of a cone cochain.
    pub fn split(&self, c: &Cochain) -> Result<(Cochain, Cochain)> {
        let n = c.degree();
        if c.len() != self.dim_total(n) {
            return Err(Error::InvalidValue(format!("a degree-{n} cone cochain has {} values", self.dim_total(n))));
        }
        let an = self.base.count(n);
        let a = Cochain::new(n, c.coeff(), c.values()[..an].to_vec())?;
        let b = Cochain::new(n.saturating_sub(1), c.coeff(), c.values()[an..].to_vec())?;
        Ok((a, b))
    }

    /// `γ#`: a base cochain as a cone cochain with empty fiber slot.
    pub fn pull_up(&self, a: &Cochain) -> Result<Cochain> {
        let n = a.degree();
        let len = if n == 0 { 0 } else { self.base.count(n - 1) };
        self.join(a, &Cochain::zero(n.saturating_sub(1), a.coeff(), len))
    }

    /// `μ`: the fiber slot.
    pub fn fiber(&self, c: &Cochain) -> Result<Cochain> {
        Ok(self.split(c)?.1)
    }
}

/// One of the five groups of the sequence.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub name: &'static str,
    pub summands: Vec<String>,
    pub order: Option<String>,
}

/// A map in coordinates: column `j` is the image of the `j`-th generator.
#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub name: &'static str,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiveTermReport {
    pub coeff: String,
    pub groups: Vec<GroupReport>,
    pub maps: Vec<MapReport>,
    /// Exactness at `H⁰(X)`, `H²(X)`, `H²(Y)`; absent for infinite groups.
    pub exact: Option<[bool; 3]>,
    /// `μ₂∘γ# = 0` exactly and `δ∘μ₁ = d(−a)` on every generator.
    pub cochain_composites: bool,
}

impl FiveTermReport {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some_and(|e| e.iter().all(|&b| b))
    }
}

/// `H¹(Y) →μ₁ H⁰(X) →δ H²(X) →γ# H²(Y) →μ₂ H¹(X)`.
pub struct FiveTermSequence<'a> {
    pub model: &'a CircleBundleModel,
    pub coeff: CoefficientGroup,
    pub h1y: AbelianGroupPresentation,
    pub h0x: AbelianGroupPresentation,
    pub h2x: AbelianGroupPresentation,
    pub h2y: AbelianGroupPresentation,
    pub h1x: AbelianGroupPresentation,
}

type CochainMap<'a> = Box<dyn Fn(&Cochain) -> Result<Cochain> + 'a>;

impl<'a> FiveTermSequence<'a> {
    pub fn new(model: &'a CircleBundleModel, coeff: CoefficientGroup) -> Result<Self> {
        if matches!(coeff, CoefficientGroup::Z | CoefficientGroup::Q) {
            return Err(Error::Unsupported(format!("the five-term sequence is built for Z/m, Q/Z and RCx, not {coeff}")));
        }
        Ok(Self {
            model,
            coeff,
            h1y: model.total_cohomology(coeff, 1),
            h0x: cohomology(&model.base, coeff, 0),
            h2x: cohomology(&model.base, coeff, 2),
            h2y: model.total_cohomology(coeff, 2),
            h1x: cohomology(&model.base, coeff, 1),
        })
    }

    pub fn mu1(&self, c: &Cochain) -> Result<Cochain> {
        self.model.fiber(c)
    }

    pub fn delta(&self, m: &Cochain) -> Result<Cochain> {
        self.model.cup_euler(m)
    }

    pub fn gamma(&self, a: &Cochain) -> Result<Cochain> {
        self.model.pull_up(a)
    }

    pub fn mu2(&self, c: &Cochain) -> Result<Cochain> {
        self.model.fiber(c)
    }

    fn stages(&self) -> Vec<(&'static str, &AbelianGroupPresentation, &AbelianGroupPresentation, CochainMap<'_>)> {
        vec![
            ("mu1", &self.h1y, &self.h0x, Box::new(|c: &Cochain| self.mu1(c))),
            ("delta", &self.h0x, &self.h2x, Box::new(|c: &Cochain| self.delta(c))),
            ("gamma", &self.h2x, &self.h2y, Box::new(|c: &Cochain| self.gamma(c))),
            ("mu2", &self.h2y, &self.h1x, Box::new(|c: &Cochain| self.mu2(c))),
        ]
    }

    /// Coordinates of the image of the class with coordinates `x`.
    fn image(src: &AbelianGroupPresentation, dst: &AbelianGroupPresentation, f: &CochainMap<'_>, x: &[Rational]) -> Result<Vec<Rational>> {
        dst.coordinates(&f(&src.element_from_coordinates(x)?)?)
    }

    /// Exactness at the three middle groups, by enumerating finite groups.
    pub fn exactness(&self) -> Result<Option<[bool; 3]>> {
        let stages = self.stages();
        let mut out = [false; 3];
        for node in 0..3 {
            let (_, src, mid, f) = &stages[node];
            let (_, _, dst, g) = &stages[node + 1];
            let (Some(src_elems), Some(mid_elems)) = (src.elements(), mid.elements()) else { return Ok(None) };
            let mut image = src_elems.iter().map(|x| Self::image(src, mid, f, x)).collect::<Result<Vec<_>>>()?;
            image.sort();
            image.dedup();
            let mut kernel = Vec::new();
            for y in mid_elems {
                if Self::image(mid, dst, g, &y)?.iter().all(Zero::is_zero) {
                    kernel.push(y);
                }
            }
            kernel.sort();
            out[node] = image == kernel;
        }
        Ok(Some(out))
    }

    /// `μ₂∘γ# = 0` on the nose, and `δ∘μ₁(a, b) = e⌣b = −da` on generators of `H¹(Y)`.
    pub fn cochain_composites(&self) -> Result<bool> {
        for a in self.h2x.generators()? {
            if !self.mu2(&self.gamma(&a)?)?.is_zero() {
                return Ok(false);
            }
        }
        for c in self.h1y.generators()? {
            let (a, _) = self.model.split(&c)?;
            let lhs = self.delta(&self.mu1(&c)?)?;
            let rhs = coboundary(&self.model.base, &a)?.neg();
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn report(&self) -> Result<FiveTermReport> {
        let group = |name, p: &AbelianGroupPresentation| GroupReport { name, summands: p.summand_labels(), order: p.order().map(|o| o.to_string()) };
        let groups = vec![
            group("H1(Y)", &self.h1y),
            group("H0(X)", &self.h0x),
            group("H2(X)", &self.h2x),
            group("H2(Y)", &self.h2y),
            group("H1(X)", &self.h1x),
        ];
        let mut maps = Vec::new();
        for (name, src, dst, f) in self.stages() {
            let cols = src
                .generators()?
                .iter()
                .map(|g| dst.coordinates(&f(g)?))
                .collect::<Result<Vec<_>>>()?;
            let matrix = (0..dst.summands().len()).map(|r| cols.iter().map(|c| format_rational(&c[r])).collect()).collect();
            maps.push(MapReport { name, matrix });
        }
        Ok(FiveTermReport {
            coeff: self.coeff.to_string(),
            groups,
            maps,
            exact: self.exactness()?,
            cochain_composites: self.cochain_composites()?,
        })
    }
}

/// Adds two coordinate vectors of the same presentation, reducing cyclic and
/// `ℚ/ℤ` coordinates.
pub fn add_classes(p: &AbelianGroupPresentation, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    p.summands()
        .iter()
        .zip(x.iter().zip(y))
        .map(|(s, (a, b))| {
            let sum = a + b;
            match s {
                Summand::Cyclic(d) => {
                    let d = Rational::from_integer((*d).into());
                    &sum - &d * (&sum / &d).floor()
                }
                Summand::RationalsModIntegers => frac(&sum),
                Summand::Integers | Summand::Rationals => sum,
            }
        })
        .collect()
}

/// Whether `H^{≤2}` of the product cone agrees with the tensor model `C(X) ⊗ C(S¹)`.
pub fn kunneth_agrees(base: &CoverNerve, coeff: CoefficientGroup) -> Result<bool> {
    let cone = CircleBundleModel::trivial(base.clone());
    let tensor = CochainComplex::from_nerve(base, coeff).tensor(&CochainComplex::from_nerve(&models::circle(), coeff))?;
    for k in 0..=2 {
        let mut a = cone.total_cohomology(coeff, k).summand_labels();
        let mut b = complex_cohomology(&tensor, k).summand_labels();
        a.sort();
        b.sort();
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(p: &AbelianGroupPresentation) -> Vec<String> {
        p.summand_labels()
    }

    #[test]
    fn circle_with_z4() {
        let m = CircleBundleModel::trivial(models::circle());
        let seq = FiveTermSequence::new(&m, CoefficientGroup::zmod(4).unwrap()).unwrap();
        assert_eq!(labels(&seq.h1y), vec!["Z/4", "Z/4"]);
        assert_eq!(labels(&seq.h0x), vec!["Z/4"]);
        assert!(seq.h2x.is_trivial());
        assert_eq!(labels(&seq.h2y), vec!["Z/4"]);
        assert_eq!(labels(&seq.h1x), vec!["Z/4"]);
        let r = seq.report().unwrap();
        assert!(r.is_exact() && r.cochain_composites);
        // μ₁ is onto.
        let mut img: Vec<_> = seq.h1y.elements().unwrap().iter().map(|x| seq.h0x.coordinates(&seq.mu1(&seq.h1y.element_from_coordinates(x).unwrap()).unwrap()).unwrap()).collect();
        img.sort();
        img.dedup();
        assert_eq!(img.len(), 4);
    }

    #[test]
    fn hopf_model_delta_is_an_isomorphism() {
        let m = CircleBundleModel::with_euler_on(models::sphere(), &[1, 2, 3], 1).unwrap();
        let seq = FiveTermSequence::new(&m, CoefficientGroup::zmod(4).unwrap()).unwrap();
        assert!(seq.h1y.is_trivial());
        assert!(seq.h2y.is_trivial());
        let r = seq.report().unwrap();
        assert!(r.is_exact());
        let delta = &r.maps[1].matrix;
        assert_eq!(delta.len(), 1);
        assert!(delta[0][0] == "1/1" || delta[0][0] == "3/1");
    }

    #[test]
    fn point_base() {
        let m = CircleBundleModel::trivial(models::point());
        let seq = FiveTermSequence::new(&m, CoefficientGroup::zmod(3).unwrap()).unwrap();
        assert_eq!(labels(&seq.h1y), vec!["Z/3"]);
        assert!(seq.h2y.is_trivial() && seq.h1x.is_trivial() && seq.h2x.is_trivial());
        assert_eq!(seq.report().unwrap().maps[0].matrix, vec![vec!["1/1".to_string()]]);
    }

    #[test]
    fn product_cone_matches_kunneth() {
        for b in [models::circle(), models::sphere(), models::torus()] {
            for c in [CoefficientGroup::Z, CoefficientGroup::zmod(2).unwrap(), CoefficientGroup::QmodZ] {
                assert!(kunneth_agrees(&b, c).unwrap());
            }
        }
    }

    #[test]
    fn rejects_non_cocycle_euler() {
        let e = Cochain::from_ints(2, CoefficientGroup::Z, &[1, 0, 0, 0]).unwrap();
        assert!(CircleBundleModel::new(models::simplex(4), e.clone()).is_err());
        assert!(CircleBundleModel::new(models::sphere(), e).is_ok());
    }
}
