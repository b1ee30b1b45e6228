use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{LocalAlgebra, Truth};
use crate::error::{Error, Result};
use crate::symcore::linalg::solve;
use crate::symcore::{ExactScalar, Rational};

/// Scalars of a finite-dimensional test algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableField {
    Gaussian,
    Zmod(u64),
}

/// An associative unital algebra with basis `e₀..e_{n−1}` and
/// `eᵢ·eⱼ = Σₖ structure[i][j][k]·eₖ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableAlgebra {
    field: TableField,
    structure: Vec<Vec<Vec<ExactScalar>>>,
    one: Vec<ExactScalar>,
}

/// Cap on the brute-force unit search over `ℤ/m`.
const MAX_ENUMERATION: u64 = 1 << 20;

impl TableField {
    fn reduce(&self, c: ExactScalar) -> Result<ExactScalar> {
        match self {
            TableField::Gaussian => Ok(c),
            TableField::Zmod(m) => {
                if !c.im().is_zero() || !c.re().is_integer() {
                    return Err(Error::InvalidAlgebra(format!("{c} is not an integer residue")));
                }
                let r = c.re().to_integer().mod_floor(&BigInt::from(*m));
                Ok(ExactScalar::from_rational(Rational::from_integer(r)))
            }
        }
    }
}

impl TableAlgebra {
    pub fn new(field: TableField, structure: Vec<Vec<Vec<ExactScalar>>>) -> Result<Self> {
        let n = structure.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        if let TableField::Zmod(m) = field {
            if m < 2 {
                return Err(Error::InvalidAlgebra("ℤ/m needs m ≥ 2".into()));
            }
        }
        if structure.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n)) {
            return Err(Error::InvalidAlgebra("structure constants must form an n×n×n array".into()));
        }
        let structure = structure
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.into_iter().map(|v| field.reduce(v)).collect()).collect())
            .collect::<Result<Vec<Vec<Vec<_>>>>>()?;
        let mut alg = Self { field, structure, one: Vec::new() };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (alg.basis(i), alg.basis(j), alg.basis(k));
                    if alg.raw_mul(&alg.raw_mul(&ei, &ej)?, &ek)? != alg.raw_mul(&ei, &alg.raw_mul(&ej, &ek)?)? {
                        return Err(Error::InvalidAlgebra(format!("associativity fails at basis ({i}, {j}, {k})")));
                    }
                }
            }
        }
        alg.one = alg.find_unit()?;
        Ok(alg)
    }

    /// `n×n` matrices, basis `E_{rc}` at index `r·n + c`.
    pub fn matrices(n: usize, field: TableField) -> Result<Self> {
        let dim = n * n;
        let mut s = vec![vec![vec![ExactScalar::zero(); dim]; dim]; dim];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    s[a * n + b][b * n + c][a * n + c] = ExactScalar::one();
                }
            }
        }
        Self::new(field, s)
    }

    /// The group algebra of `ℤ/n`.
    pub fn cyclic_group_algebra(n: usize, field: TableField) -> Result<Self> {
        let mut s = vec![vec![vec![ExactScalar::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                s[a][b][(a + b) % n] = ExactScalar::one();
            }
        }
        Self::new(field, s)
    }

    pub fn dim(&self) -> usize {
        self.structure.len()
    }

    pub fn field(&self) -> TableField {
        self.field
    }

    pub fn structure(&self) -> &[Vec<Vec<ExactScalar>>] {
        &self.structure
    }

    pub fn basis(&self, i: usize) -> Vec<ExactScalar> {
        let mut v = vec![ExactScalar::zero(); self.dim()];
        v[i] = ExactScalar::one();
        v
    }

    pub fn element(&self, coords: Vec<ExactScalar>) -> Result<Vec<ExactScalar>> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidValue(format!("expected {} coordinates", self.dim())));
        }
        coords.into_iter().map(|c| self.field.reduce(c)).collect()
    }

    pub fn scalar(&self, c: ExactScalar) -> Result<Vec<ExactScalar>> {
        let c = self.field.reduce(c)?;
        self.one.iter().map(|u| self.field.reduce(u * &c)).collect()
    }

    fn raw_mul(&self, a: &[ExactScalar], b: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        let n = self.dim();
        let mut out = vec![ExactScalar::zero(); n];
        for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let ab = ai * bj;
                for (o, s) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !s.is_zero() {
                        *o += &(&ab * s);
                    }
                }
            }
        }
        out.into_iter().map(|c| self.field.reduce(c)).collect()
    }

    /// Matrix of left multiplication by `a`, column `j` = `a·eⱼ`.
    fn left_matrix(&self, a: &[ExactScalar]) -> Result<Vec<Vec<ExactScalar>>> {
        let n = self.dim();
        let cols = (0..n).map(|j| self.raw_mul(a, &self.basis(j))).collect::<Result<Vec<_>>>()?;
        Ok((0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect())
    }

    fn find_unit(&self) -> Result<Vec<ExactScalar>> {
        let n = self.dim();
        let candidate = match self.field {
            TableField::Gaussian => {
                // Solve u·eⱼ = eⱼ for all j: n² linear equations in the n coordinates of u.
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for j in 0..n {
                    for k in 0..n {
                        rows.push((0..n).map(|i| self.structure[i][j][k].clone()).collect());
                        rhs.push(if j == k { ExactScalar::one() } else { ExactScalar::zero() });
                    }
                }
                solve(&rows, n, &rhs)
            }
            TableField::Zmod(_) => self.enumerate().find(|u| (0..n).all(|j| self.raw_mul(u, &self.basis(j)).ok() == Some(self.basis(j)))),
        };
        let u = candidate.ok_or_else(|| Error::InvalidAlgebra("no unit element".into()))?;
        if (0..n).all(|j| self.raw_mul(&self.basis(j), &u).ok() == Some(self.basis(j))) {
            Ok(u)
        } else {
            Err(Error::InvalidAlgebra("left unit is not a right unit".into()))
        }
    }

    fn enumerate(&self) -> impl Iterator<Item = Vec<ExactScalar>> + '_ {
        let TableField::Zmod(m) = self.field else { unreachable!("finite fields only") };
        let n = self.dim() as u32;
        let total = m.checked_pow(n).filter(|&t| t <= MAX_ENUMERATION).unwrap_or(0);
        (0..total).map(move |mut idx| {
            (0..n)
                .map(|_| {
                    let c = idx % m;
                    idx /= m;
                    ExactScalar::from_int(c as i64)
                })
                .collect()
        })
    }
}

/// A linear map between table algebras, as a square matrix acting on coordinates.
pub type TableMorphism = Vec<Vec<ExactScalar>>;

fn mat_vec(m: &TableMorphism, v: &[ExactScalar]) -> Vec<ExactScalar> {
    m.iter().map(|row| row.iter().zip(v).fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)).collect()
}

impl LocalAlgebra for TableAlgebra {
    type Elem = Vec<ExactScalar>;
    type Morph = TableMorphism;

    fn one(&self) -> Vec<ExactScalar> {
        self.one.clone()
    }

    fn mul(&self, a: &Vec<ExactScalar>, b: &Vec<ExactScalar>) -> Result<Vec<ExactScalar>> {
        self.raw_mul(a, b)
    }

    fn inverse(&self, a: &Vec<ExactScalar>) -> Result<Vec<ExactScalar>> {
        let n = self.dim();
        let right = match self.field {
            TableField::Gaussian => solve(&self.left_matrix(a)?, n, &self.one),
            TableField::Zmod(m) => {
                if m.checked_pow(n as u32).is_none_or(|t| t > MAX_ENUMERATION) {
                    return Err(Error::Unsupported(format!("unit search over (ℤ/{m})^{n} is too large")));
                }
                self.enumerate().find(|b| self.raw_mul(a, b).ok().as_ref() == Some(&self.one))
            }
        };
        match right {
            Some(b) if self.raw_mul(&b, a)? == self.one => Ok(b),
            _ => Err(Error::NotInvertible("no two-sided inverse in the table algebra".into())),
        }
    }

    fn elem_eq(&self, a: &Vec<ExactScalar>, b: &Vec<ExactScalar>) -> Result<Truth> {
        Ok(Truth::from_bool(a == b))
    }

    fn apply(&self, f: &TableMorphism, a: &Vec<ExactScalar>) -> Result<Vec<ExactScalar>> {
        if f.len() != self.dim() || f.iter().any(|r| r.len() != self.dim()) {
            return Err(Error::InvalidValue("morphism matrix has the wrong shape".into()));
        }
        mat_vec(f, a).into_iter().map(|c| self.field.reduce(c)).collect()
    }

    fn compose(&self, f: &TableMorphism, g: &TableMorphism) -> TableMorphism {
        let n = self.dim();
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let v = (0..n).fold(ExactScalar::zero(), |acc, k| acc + &f[r][k] * &g[k][c]);
                        self.field.reduce(v).expect("entries stay in the field")
                    })
                    .collect()
            })
            .collect()
    }

    fn ad(&self, a: &Vec<ExactScalar>) -> Result<TableMorphism> {
        let inv = self.inverse(a)?;
        let n = self.dim();
        let cols = (0..n).map(|j| self.raw_mul(&self.raw_mul(a, &self.basis(j))?, &inv)).collect::<Result<Vec<_>>>()?;
        Ok((0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect())
    }

    fn identity(&self) -> TableMorphism {
        (0..self.dim()).map(|i| self.basis(i)).collect()
    }

    fn morph_eq(&self, f: &TableMorphism, g: &TableMorphism) -> Result<Truth> {
        Ok(Truth::from_bool(f == g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::int;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn matrix_algebra_inverse_and_ad() {
        let m2 = TableAlgebra::matrices(2, TableField::Gaussian).unwrap();
        assert_eq!(m2.one(), vec![q(1), q(0), q(0), q(1)]);
        // [[1,1],[0,1]] has inverse [[1,-1],[0,1]].
        let a = vec![q(1), q(1), q(0), q(1)];
        assert_eq!(m2.inverse(&a).unwrap(), vec![q(1), q(-1), q(0), q(1)]);
        assert!(matches!(m2.inverse(&vec![q(1), q(0), q(0), q(0)]), Err(Error::NotInvertible(_))));
        let ad = m2.ad(&a).unwrap();
        let b = vec![q(0), q(0), q(1), q(0)];
        let expect = m2.mul(&m2.mul(&a, &b).unwrap(), &m2.inverse(&a).unwrap()).unwrap();
        assert_eq!(m2.apply(&ad, &b).unwrap(), expect);
    }

    #[test]
    fn finite_coefficients() {
        let g = TableAlgebra::cyclic_group_algebra(2, TableField::Zmod(3)).unwrap();
        // ℤ/3[ℤ/2] ≅ 𝔽₃ × 𝔽₃, so 2 + 2g ↦ (1, 0) is a zero divisor and 2g is a unit.
        assert!(g.inverse(&vec![q(2), q(2)]).is_err());
        let v = g.inverse(&vec![q(0), q(2)]).unwrap();
        assert_eq!(v, vec![q(0), q(2)]);
        let u = vec![q(1), q(1)];
        assert_eq!(g.scalar(ExactScalar::from_rational(int(-1))).unwrap(), vec![q(2), q(0)]);
        // Over ℤ/2, 1 + g squares to 0.
        let g2 = TableAlgebra::cyclic_group_algebra(2, TableField::Zmod(2)).unwrap();
        assert!(g2.inverse(&u).is_err());
    }

    #[test]
    fn rejects_nonassociative_tables() {
        let mut s = vec![vec![vec![q(0); 2]; 2]; 2];
        s[0][0][0] = q(1);
        s[0][1][1] = q(1);
        s[1][0][1] = q(1);
        s[1][1][0] = q(1);
        s[1][1][1] = q(1);
        assert!(TableAlgebra::new(TableField::Gaussian, s.clone()).is_ok());
        s[1][1] = vec![q(0), q(1)];
        s[0][1] = vec![q(1), q(0)];
        assert!(TableAlgebra::new(TableField::Gaussian, s).is_err());
    }
}
