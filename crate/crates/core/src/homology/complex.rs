use super::cochain::Cochain;
use super::coeff::CoefficientGroup;
use super::nerve::CoverNerve;
use super::snf::IntMatrix;
use crate::error::{Error, Result};

/// A finite cochain complex of free abelian groups `C⁰ → C¹ → …`, tensored
/// with a coefficient group. `diffs[k]` is the integer matrix of `d: Cᵏ → Cᵏ⁺¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    coeff: CoefficientGroup,
    dims: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl CochainComplex {
    pub fn new(coeff: CoefficientGroup, dims: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if dims.is_empty() || diffs.len() + 1 != dims.len() {
            return Err(Error::InvalidValue("complex needs one differential between consecutive degrees".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::InvalidValue(format!("differential {k} has the wrong shape")));
            }
        }
        for k in 0..diffs.len().saturating_sub(1) {
            if !diffs[k + 1].mul(&diffs[k]).is_zero() {
                return Err(Error::InvalidValue(format!("d∘d ≠ 0 at degree {k}")));
            }
        }
        Ok(Self { coeff, dims, diffs })
    }

    pub fn from_nerve(nerve: &CoverNerve, coeff: CoefficientGroup) -> Self {
        let dims: Vec<usize> = (0..=nerve.dim()).map(|k| nerve.count(k)).collect();
        let diffs = (0..nerve.dim())
            .map(|k| {
                let mut m = IntMatrix::zeros(dims[k + 1], dims[k]);
                for (r, s) in nerve.simplices(k + 1).iter().enumerate() {
                    for i in 0..s.len() {
                        let f: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                        m[(r, nerve.index_of(&f).expect("closed"))] += if i % 2 == 0 { 1 } else { -1 };
                    }
                }
                m
            })
            .collect();
        Self { coeff, dims, diffs }
    }

    /// The complex of a point: `ℤ` in degree 0.
    pub fn point(coeff: CoefficientGroup) -> Self {
        Self { coeff, dims: vec![1], diffs: vec![] }
    }

    pub fn coeff(&self) -> CoefficientGroup {
        self.coeff
    }

    pub fn with_coeff(&self, coeff: CoefficientGroup) -> Self {
        Self { coeff, ..self.clone() }
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `d: Cᵏ → Cᵏ⁺¹`, the zero map outside the stored range.
    pub fn differential(&self, k: usize) -> IntMatrix {
        self.diffs.get(k).cloned().unwrap_or_else(|| IntMatrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    /// `d⁻¹` convention: the map into `Cᵏ` from `Cᵏ⁻¹`, zero for `k = 0`.
    pub fn incoming(&self, k: usize) -> IntMatrix {
        if k == 0 {
            IntMatrix::zeros(self.dim(0), 0)
        } else {
            self.differential(k - 1)
        }
    }

    pub fn apply(&self, c: &Cochain) -> Result<Cochain> {
        apply_matrix(&self.differential(c.degree()), c, c.degree() + 1)
    }

    /// Total complex of `C ⊗ D`: `d(a⊗b) = da⊗b + (−1)^p a⊗db` for `a ∈ Cᵖ`.
    /// The basis of degree `n` lists the blocks `(p, n−p)` by increasing `p`,
    /// each block in row-major order `(i, j) ↦ i·dim Dᵠ + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.coeff != other.coeff {
            return Err(Error::CoefficientMismatch { left: self.coeff.to_string(), right: other.coeff.to_string() });
        }
        let top = self.top_degree() + other.top_degree();
        let offsets: Vec<Vec<usize>> = (0..=top + 1)
            .map(|n| {
                let mut acc = 0;
                (0..=n)
                    .map(|p| {
                        let o = acc;
                        acc += self.dim(p) * other.dim(n - p);
                        o
                    })
                    .collect()
            })
            .collect();
        let total = |n: usize| (0..=n).map(|p| self.dim(p) * other.dim(n - p)).sum::<usize>();
        let dims: Vec<usize> = (0..=top).map(total).collect();
        let mut diffs = Vec::new();
        for n in 0..top {
            let mut m = IntMatrix::zeros(dims[n + 1], dims[n]);
            for p in 0..=n {
                let q = n - p;
                let (dc, dd) = (self.differential(p), other.differential(q));
                let (cp, dq) = (self.dim(p), other.dim(q));
                let src = offsets[n][p];
                for i in 0..cp {
                    for j in 0..dq {
                        let col = src + i * dq + j;
                        // dC ⊗ 1 lands in block (p+1, q).
                        for i2 in 0..self.dim(p + 1) {
                            let v = dc[(i2, i)];
                            if v != 0 {
                                m[(offsets[n + 1][p + 1] + i2 * dq + j, col)] += v;
                            }
                        }
                        // ±1 ⊗ dD lands in block (p, q+1).
                        let sign = if p % 2 == 0 { 1 } else { -1 };
                        let dq1 = other.dim(q + 1);
                        for j2 in 0..dq1 {
                            let v = dd[(j2, j)];
                            if v != 0 {
                                m[(offsets[n + 1][p] + i * dq1 + j2, col)] += sign * v;
                            }
                        }
                    }
                }
            }
            diffs.push(m);
        }
        Self::new(self.coeff, dims, diffs)
    }
}

pub(crate) fn apply_matrix(m: &IntMatrix, c: &Cochain, degree: usize) -> Result<Cochain> {
    if m.cols() != c.len() {
        return Err(Error::InvalidValue(format!("cochain has {} values, map expects {}", c.len(), m.cols())));
    }
    let g = c.coeff();
    let values = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .zip(c.values())
                .filter(|(&a, _)| a != 0)
                .fold(g.zero(), |acc, (&a, v)| g.add(&acc, &g.scale(v, a)))
        })
        .collect();
    Cochain::new(degree, g, values)
}

#[cfg(test)]
mod tests {
    use super::super::nerve::models;
    use super::*;

    #[test]
    fn nerve_complex_is_a_complex() {
        for n in [models::circle(), models::sphere(), models::torus(), models::projective_plane()] {
            let c = CochainComplex::from_nerve(&n, CoefficientGroup::Z);
            assert!(CochainComplex::new(CoefficientGroup::Z, c.dims.clone(), c.diffs.clone()).is_ok());
        }
    }

    #[test]
    fn tensor_squares_to_zero_and_mismatch() {
        let s = CochainComplex::from_nerve(&models::circle(), CoefficientGroup::Q);
        let t = s.tensor(&s).unwrap();
        assert_eq!(t.dims, vec![9, 18, 9]);
        let z = s.with_coeff(CoefficientGroup::Z);
        assert!(matches!(s.tensor(&z), Err(Error::CoefficientMismatch { .. })));
    }
}
