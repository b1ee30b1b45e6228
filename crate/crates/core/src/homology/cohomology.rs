use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::cochain::Cochain;
use super::coeff::{CoeffValue, CoefficientGroup};
use super::complex::CochainComplex;
use super::nerve::CoverNerve;
use super::snf::{smith_normal_form, IntMatrix, Snf};
use crate::error::{Error, Result};
use crate::symcore::scalar::{frac, lcm_of_denominators};
use crate::symcore::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Summand {
    Integers,
    Cyclic(i128),
    Rationals,
    RationalsModIntegers,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::Cyclic(d) => write!(f, "Z/{d}"),
            Self::Rationals => write!(f, "Q"),
            Self::RationalsModIntegers => write!(f, "Q/Z"),
        }
    }
}

/// Columns rank.. of `V` from the SNF of `a`: a basis of the integer kernel.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let cols: Vec<Vec<i128>> = (s.rank..a.cols()).map(|j| s.v.column(j)).collect();
    IntMatrix::from_columns(a.cols(), &cols)
}

/// An integer solution of `a·x = b`, given the SNF of `a`.
pub fn solve_integer(snf: &Snf, b: &[i128]) -> Option<Vec<i128>> {
    let ub = snf.u.mul_vec(b);
    let mut y = vec![0i128; snf.v.rows()];
    for (i, &v) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = snf.d[(i, i)];
            if v % d != 0 {
                return None;
            }
            y[i] = v / d;
        } else if v != 0 {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// `L / R` for a lattice `L ⊂ ℤⁿ` given by a basis and relations `R ⊂ L`.
#[derive(Clone, Debug)]
struct LatticeQuotient {
    basis: IntMatrix,
    basis_snf: Snf,
    rel_snf: Snf,
    // (row of the diagonalized coordinates, order); order 0 means a free summand.
    kept: Vec<(usize, i128)>,
}

impl LatticeQuotient {
    fn new(basis: IntMatrix, relations: &IntMatrix) -> Self {
        let basis_snf = smith_normal_form(&basis);
        assert_eq!(basis_snf.rank, basis.cols(), "lattice basis must be independent");
        let z = basis.cols();
        let cols: Vec<Vec<i128>> = (0..relations.cols())
            .map(|j| lattice_coords(&basis_snf, &relations.column(j)).expect("relations lie in the lattice"))
            .collect();
        let m = IntMatrix::from_columns(z, &cols);
        let rel_snf = smith_normal_form(&m);
        let kept = (0..z)
            .filter_map(|i| {
                let d = if i < rel_snf.rank { rel_snf.d[(i, i)] } else { 0 };
                (d != 1).then_some((i, d))
            })
            .collect();
        Self { basis, basis_snf, rel_snf, kept }
    }

    fn summands(&self) -> Vec<Summand> {
        self.kept.iter().map(|&(_, d)| if d == 0 { Summand::Integers } else { Summand::Cyclic(d) }).collect()
    }

    fn coords(&self, x: &[i128]) -> Option<Vec<i128>> {
        let y = lattice_coords(&self.basis_snf, x)?;
        let w = self.rel_snf.u.mul_vec(&y);
        Some(self.kept.iter().map(|&(i, d)| if d == 0 { w[i] } else { w[i].rem_euclid(d) }).collect())
    }

    fn generator(&self, k: usize) -> Vec<i128> {
        let (i, _) = self.kept[k];
        self.basis.mul_vec(&self.rel_snf.u_inv.column(i))
    }
}

fn lattice_coords(snf: &Snf, x: &[i128]) -> Option<Vec<i128>> {
    solve_integer(snf, x)
}

fn to_int(q: &Rational) -> i128 {
    q.to_integer().to_i128().expect("integer fits in i128")
}

fn int_q(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn mul_rat(m: &IntMatrix, v: &[Rational]) -> Vec<Rational> {
    (0..m.rows())
        .map(|r| m.row(r).iter().zip(v).filter(|(&a, _)| a != 0).fold(Rational::zero(), |acc, (&a, x)| acc + x * int_q(a)))
        .collect()
}

fn rational_values(c: &Cochain) -> Vec<Rational> {
    c.values()
        .iter()
        .map(|v| match v {
            CoeffValue::Rat(q) => q.clone(),
            CoeffValue::Int(n) => int_q(*n),
            CoeffValue::Rcx(_) => panic!("RCx values are split before lifting"),
        })
        .collect()
}

#[derive(Clone, Debug)]
enum Kind {
    Lattice(LatticeQuotient),
    Rational(LatticeQuotient),
    Divisible(Box<DivisibleData>),
}

#[derive(Clone, Debug)]
struct DivisibleData {
    int_k: LatticeQuotient,
    int_k1: LatticeQuotient,
    d_snf: Snf,
    // Torsion summands of H^{k+1}(ℤ): (index into int_k1.kept, rational section s with ds = y).
    sections: Vec<(usize, Vec<Rational>)>,
    // Free summands of H^k(ℤ): indices into int_k.kept.
    free: Vec<usize>,
    with_rationals: bool,
}

/// `Hᵏ` of a complex as a finitely presented group, with a coordinate map on cocycles.
///
/// Coordinates per summand: `Z` an integer, `Z/d` a residue in `[0, d)`, `Q` a
/// rational, `Q/Z` a rational in `[0, 1)`. For `Q/Z` and `RCx` the summands are
/// the divisible part `(Q/Z)^b` first, then `Tors Hᵏ⁺¹(ℤ)`, then (for `RCx`) `Q^b`.
#[derive(Clone, Debug)]
pub struct AbelianGroupPresentation {
    coeff: CoefficientGroup,
    degree: usize,
    complex: CochainComplex,
    summands: Vec<Summand>,
    kind: Kind,
}

pub fn cohomology(nerve: &CoverNerve, coeff: CoefficientGroup, k: usize) -> AbelianGroupPresentation {
    complex_cohomology(&CochainComplex::from_nerve(nerve, coeff), k)
}

pub fn complex_cohomology(complex: &CochainComplex, k: usize) -> AbelianGroupPresentation {
    let coeff = complex.coeff();
    let integral = |k: usize| {
        let b = complex.differential(k);
        LatticeQuotient::new(kernel_basis(&b), &complex.incoming(k))
    };
    let (summands, kind) = match coeff {
        CoefficientGroup::Z => {
            let q = integral(k);
            (q.summands(), Kind::Lattice(q))
        }
        CoefficientGroup::Zmod(m) => {
            let m = m as i128;
            let n = complex.dim(k);
            let b = complex.differential(k);
            let stacked = b.hstack(&scalar_matrix(b.rows(), m));
            let ker = kernel_basis(&stacked);
            let cols: Vec<Vec<i128>> = (0..ker.cols()).map(|j| ker.column(j)[..n].to_vec()).collect();
            let basis = IntMatrix::from_columns(n, &cols);
            let relations = complex.incoming(k).hstack(&scalar_matrix(n, m));
            let q = LatticeQuotient::new(basis, &relations);
            (q.summands(), Kind::Lattice(q))
        }
        CoefficientGroup::Q => {
            let q = integral(k);
            let s = q.kept.iter().filter(|(_, d)| *d == 0).map(|_| Summand::Rationals).collect();
            (s, Kind::Rational(q))
        }
        CoefficientGroup::QmodZ | CoefficientGroup::RCx => {
            let int_k = integral(k);
            let int_k1 = integral(k + 1);
            let b = complex.differential(k);
            let d_snf = smith_normal_form(&b);
            let free: Vec<usize> = (0..int_k.kept.len()).filter(|&i| int_k.kept[i].1 == 0).collect();
            let mut sections = Vec::new();
            for (idx, &(_, d)) in int_k1.kept.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let y = int_k1.generator(idx);
                let dy: Vec<i128> = y.iter().map(|v| v * d).collect();
                let x = solve_integer(&d_snf, &dy).expect("torsion class is killed by its order");
                sections.push((idx, x.iter().map(|&v| Rational::new(BigInt::from(v), BigInt::from(d))).collect()));
            }
            let mut s: Vec<Summand> = free.iter().map(|_| Summand::RationalsModIntegers).collect();
            s.extend(sections.iter().map(|(idx, _)| Summand::Cyclic(int_k1.kept[*idx].1)));
            let with_rationals = coeff == CoefficientGroup::RCx;
            if with_rationals {
                s.extend(free.iter().map(|_| Summand::Rationals));
            }
            (s, Kind::Divisible(Box::new(DivisibleData { int_k, int_k1, d_snf, sections, free, with_rationals })))
        }
    };
    AbelianGroupPresentation { coeff, degree: k, complex: complex.clone(), summands, kind }
}

fn scalar_matrix(n: usize, m: i128) -> IntMatrix {
    let mut s = IntMatrix::zeros(n, n);
    for i in 0..n {
        s[(i, i)] = m;
    }
    s
}

impl AbelianGroupPresentation {
    pub fn coeff(&self) -> CoefficientGroup {
        self.coeff
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|s| **s == Summand::Integers).count()
    }

    pub fn torsion(&self) -> Vec<i128> {
        self.summands.iter().filter_map(|s| if let Summand::Cyclic(d) = s { Some(*d) } else { None }).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.summands.is_empty()
    }

    /// Order of a finite group, `None` if infinite.
    pub fn order(&self) -> Option<u128> {
        self.summands.iter().try_fold(1u128, |acc, s| match s {
            Summand::Cyclic(d) => acc.checked_mul(*d as u128),
            _ => None,
        })
    }

    /// Every coordinate vector of a finite group, in lexicographic order.
    pub fn elements(&self) -> Option<Vec<Vec<Rational>>> {
        let orders: Vec<i128> = self.torsion();
        if orders.len() != self.summands.len() {
            return None;
        }
        let mut out = vec![vec![]];
        for d in orders {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Rational>| {
                    (0..d).map(move |i| {
                        let mut w = v.clone();
                        w.push(int_q(i));
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Whether `c` is a cocycle of the underlying complex.
    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        self.check(c)?;
        Ok(self.complex.apply(c)?.is_zero())
    }

    fn check(&self, c: &Cochain) -> Result<()> {
        if c.coeff() != self.coeff {
            return Err(Error::CoefficientMismatch { left: c.coeff().to_string(), right: self.coeff.to_string() });
        }
        if c.degree() != self.degree || c.len() != self.complex.dim(self.degree) {
            return Err(Error::InvalidValue(format!("expected a degree-{} cochain with {} values", self.degree, self.complex.dim(self.degree))));
        }
        Ok(())
    }

    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<Rational>> {
        if !self.is_cocycle(c)? {
            return Err(Error::NotACocycle(format!("degree-{} cochain has nonzero coboundary", self.degree)));
        }
        match &self.kind {
            Kind::Lattice(q) => {
                let x = c.as_ints().expect("integer-valued");
                Ok(q.coords(&x).expect("cocycles lie in the cocycle lattice").into_iter().map(int_q).collect())
            }
            Kind::Rational(q) => Ok(rational_coords(q, &rational_values(c))),
            Kind::Divisible(data) => {
                if data.with_rationals {
                    let (t, u) = c.split_rcx().expect("RCx values");
                    let mut out = self.divisible_coords(data, &rational_values(&t));
                    out.extend(rational_coords(&data.int_k, &rational_values(&u)));
                    Ok(out)
                } else {
                    Ok(self.divisible_coords(data, &rational_values(c)))
                }
            }
        }
    }

    fn divisible_coords(&self, data: &DivisibleData, lift: &[Rational]) -> Vec<Rational> {
        let b = self.complex.differential(self.degree);
        let beta: Vec<i128> = mul_rat(&b, lift).iter().map(to_int).collect();
        let t = data.int_k1.coords(&beta).expect("Bockstein image is an integer cocycle");
        let mut adjusted = lift.to_vec();
        let mut torsion = Vec::new();
        for (idx, s) in &data.sections {
            let ti = t[*idx];
            torsion.push(int_q(ti));
            for (a, sv) in adjusted.iter_mut().zip(s) {
                *a -= sv * int_q(ti);
            }
        }
        let rest: Vec<i128> = mul_rat(&b, &adjusted).iter().map(to_int).collect();
        let w = solve_integer(&data.d_snf, &rest).expect("remaining Bockstein image is a coboundary");
        let r: Vec<Rational> = adjusted.iter().zip(&w).map(|(a, &wi)| a - int_q(wi)).collect();
        let free = rational_coords(&data.int_k, &r);
        let mut out: Vec<Rational> = free.iter().map(frac).collect();
        out.extend(torsion);
        out
    }

    pub fn is_zero_class(&self, c: &Cochain) -> Result<bool> {
        Ok(self.coordinates(c)?.iter().all(Zero::is_zero))
    }

    /// A cocycle with the given coordinates.
    pub fn element_from_coordinates(&self, coords: &[Rational]) -> Result<Cochain> {
        if coords.len() != self.summands.len() {
            return Err(Error::InvalidValue(format!("expected {} coordinates", self.summands.len())));
        }
        for (c, s) in coords.iter().zip(&self.summands) {
            if matches!(s, Summand::Integers | Summand::Cyclic(_)) && !c.is_integer() {
                return Err(Error::InvalidValue("integer coordinate expected".into()));
            }
        }
        let n = self.complex.dim(self.degree);
        let k = self.degree;
        match &self.kind {
            Kind::Lattice(q) => {
                let mut acc = vec![0i128; n];
                for (i, c) in coords.iter().enumerate() {
                    let g = q.generator(i);
                    let c = to_int(c);
                    for (a, gv) in acc.iter_mut().zip(&g) {
                        *a += c * gv;
                    }
                }
                Cochain::from_ints(k, self.coeff, &acc)
            }
            Kind::Rational(q) => rational_cochain(k, CoefficientGroup::Q, &rational_combination(q, &free_indices(q), coords, n)),
            Kind::Divisible(data) => {
                let nfree = data.free.len();
                let mut t = rational_combination(&data.int_k, &data.free, &coords[..nfree], n);
                for ((_, s), c) in data.sections.iter().zip(&coords[nfree..nfree + data.sections.len()]) {
                    for (a, sv) in t.iter_mut().zip(s) {
                        *a += sv * c;
                    }
                }
                let tq = rational_cochain(k, CoefficientGroup::QmodZ, &t)?;
                if data.with_rationals {
                    let u = rational_combination(&data.int_k, &data.free, &coords[nfree + data.sections.len()..], n);
                    Cochain::join_rcx(&tq, &rational_cochain(k, CoefficientGroup::Q, &u)?)
                } else {
                    Ok(tq)
                }
            }
        }
    }

    /// Representing cocycles, one per summand. For `Q/Z` summands this is the
    /// element with coordinate `1/2`; every other summand uses coordinate 1.
    pub fn generators(&self) -> Result<Vec<Cochain>> {
        (0..self.summands.len())
            .map(|i| {
                let mut c = vec![Rational::zero(); self.summands.len()];
                c[i] = match self.summands[i] {
                    Summand::RationalsModIntegers => Rational::new(1.into(), 2.into()),
                    _ => int_q(1),
                };
                self.element_from_coordinates(&c)
            })
            .collect()
    }

    pub fn summand_labels(&self) -> Vec<String> {
        self.summands.iter().map(ToString::to_string).collect()
    }
}

fn free_indices(q: &LatticeQuotient) -> Vec<usize> {
    (0..q.kept.len()).filter(|&i| q.kept[i].1 == 0).collect()
}

/// Coordinates of a rational cocycle along the free generators of `Hᵏ(ℤ)`.
fn rational_coords(q: &LatticeQuotient, r: &[Rational]) -> Vec<Rational> {
    let n = lcm_of_denominators(r);
    let scaled: Vec<i128> = r.iter().map(|v| to_int(&(v * Rational::from_integer(n.clone())))).collect();
    let c = q.coords(&scaled).expect("scaled rational cocycle is an integer cocycle");
    free_indices(q).into_iter().map(|i| int_q(c[i]) / Rational::from_integer(n.clone())).collect()
}

fn rational_combination(q: &LatticeQuotient, idx: &[usize], coords: &[Rational], n: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); n];
    for (&i, c) in idx.iter().zip(coords) {
        for (a, g) in acc.iter_mut().zip(q.generator(i)) {
            *a += c * int_q(g);
        }
    }
    acc
}

fn rational_cochain(k: usize, coeff: CoefficientGroup, v: &[Rational]) -> Result<Cochain> {
    Cochain::new(k, coeff, v.iter().map(|q| CoeffValue::Rat(q.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::super::cochain::coboundary;
    use super::super::nerve::models;
    use super::*;
    use crate::symcore::rat;

    fn labels(n: &CoverNerve, g: &str, k: usize) -> Vec<String> {
        cohomology(n, g.parse().unwrap(), k).summand_labels()
    }

    #[test]
    fn textbook_integer_cohomology() {
        let (c, s, t, p) = (models::circle(), models::sphere(), models::torus(), models::projective_plane());
        assert_eq!(labels(&c, "Z", 0), ["Z"]);
        assert_eq!(labels(&c, "Z", 1), ["Z"]);
        assert_eq!(labels(&s, "Z", 1), Vec::<String>::new());
        assert_eq!(labels(&s, "Z", 2), ["Z"]);
        assert_eq!(labels(&t, "Z", 1), ["Z", "Z"]);
        assert_eq!(labels(&t, "Z", 2), ["Z"]);
        assert_eq!(labels(&p, "Z", 1), Vec::<String>::new());
        assert_eq!(labels(&p, "Z", 2), ["Z/2"]);
        assert_eq!(labels(&p, "Z/2", 1), ["Z/2"]);
        assert_eq!(labels(&p, "Z/2", 2), ["Z/2"]);
        assert_eq!(labels(&p, "Z/3", 2), Vec::<String>::new());
        assert_eq!(labels(&t, "Z/4", 1), ["Z/4", "Z/4"]);
        assert_eq!(labels(&t, "Q", 1), ["Q", "Q"]);
        assert_eq!(labels(&models::point(), "Z", 1), Vec::<String>::new());
    }

    #[test]
    fn divisible_coefficients() {
        let (s, p) = (models::sphere(), models::projective_plane());
        assert_eq!(labels(&s, "RCx", 2), ["Q/Z", "Q"]);
        assert_eq!(labels(&s, "Q/Z", 1), Vec::<String>::new());
        // H¹(RP²; Q/Z) = Tors H²(ℤ) = ℤ/2, H²(RP²; Q/Z) = 0.
        assert_eq!(labels(&p, "Q/Z", 1), ["Z/2"]);
        assert_eq!(labels(&p, "Q/Z", 2), Vec::<String>::new());
        assert_eq!(labels(&models::circle(), "RCx", 1), ["Q/Z", "Q"]);
    }

    #[test]
    fn coordinates_round_trip() {
        let t = models::torus();
        for g in ["Z", "Z/4", "Q", "Q/Z", "RCx"] {
            let h = cohomology(&t, g.parse().unwrap(), 1);
            let coords: Vec<Rational> = h
                .summands()
                .iter()
                .enumerate()
                .map(|(i, s)| match s {
                    Summand::Rationals => rat(2 * i as i64 + 1, 5),
                    Summand::RationalsModIntegers => rat(i as i64 + 1, 7),
                    _ => int_q(i as i128 + 1),
                })
                .collect();
            let c = h.element_from_coordinates(&coords).unwrap();
            assert_eq!(h.coordinates(&c).unwrap(), coords, "{g}");
        }
    }

    #[test]
    fn coboundaries_have_zero_coordinates() {
        let p = models::projective_plane();
        for g in ["Z", "Z/2", "Q", "Q/Z", "RCx"] {
            let coeff: CoefficientGroup = g.parse().unwrap();
            let h = cohomology(&p, coeff, 1);
            let v = Cochain::on_nerve(&p, 0, coeff, |s| match coeff {
                CoefficientGroup::Z | CoefficientGroup::Zmod(_) => CoeffValue::Int(s[0] as i128 * 3 - 2),
                CoefficientGroup::RCx => CoeffValue::Rcx(super::super::coeff::RCxValue::new(rat(s[0] as i64, 5), rat(1, s[0] as i64 + 1))),
                _ => CoeffValue::Rat(rat(s[0] as i64, 5)),
            })
            .unwrap();
            assert!(h.is_zero_class(&coboundary(&p, &v).unwrap()).unwrap(), "{g}");
        }
    }

    #[test]
    fn rejects_non_cocycles() {
        let s = models::sphere();
        let h = cohomology(&s, CoefficientGroup::Z, 1);
        let c = Cochain::from_ints(1, CoefficientGroup::Z, &[1, 0, 0, 0, 0, 0]).unwrap();
        assert!(matches!(h.coordinates(&c), Err(Error::NotACocycle(_))));
    }
}
