//! Dense integer matrices and Smith normal form.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<i128>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Block diagonal / block placement helper: writes `block` at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// `col[dst] += c · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self[(i, c)] = -self[(i, c)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`, `dᵢ ≥ 0`.
/// The inverses of `U` and `V` are tracked alongside.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<i128> {
        self.diagonal().into_iter().filter(|&d| d > 1).collect()
    }
}

struct Work {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        self.m.add_row(dst, src, c);
        self.u.add_row(dst, src, c);
        self.u_inv.add_col(src, dst, -c);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        self.m.add_col(dst, src, c);
        self.v.add_col(dst, src, c);
        self.v_inv.add_row(src, dst, -c);
    }

    fn negate_row(&mut self, r: usize) {
        self.m.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = (a.rows, a.cols);
    let mut w = Work {
        m: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block, first in row-major order.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = w.m[(i, j)].abs();
                if v != 0 && best.is_none_or(|(bi, bj)| v < w.m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.m[(t, t)];
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.m[(i, t)] / p;
                if q != 0 {
                    w.add_row(i, t, -q);
                }
                if w.m[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = w.m[(t, j)] / p;
                if q != 0 {
                    w.add_col(j, t, -q);
                }
                if w.m[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                // A remainder is now smaller than the pivot; move it into place.
                let mut best = (t, t);
                for i in t + 1..rows {
                    let v = w.m[(i, t)].abs();
                    if v != 0 && v < w.m[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = w.m[(t, j)].abs();
                    if v != 0 && v < w.m[best].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let bad = (t + 1..rows).find_map(|i| (t + 1..cols).find(|&j| w.m[(i, j)] % p != 0).map(|_| i));
            match bad {
                Some(i) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.m[(t, t)] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = (0..rows.min(cols)).take_while(|&i| w.m[(i, i)] != 0).count();
    Snf { u: w.u, u_inv: w.u_inv, d: w.m, v: w.v, v_inv: w.v_inv, rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        s
    }

    #[test]
    fn identity_and_unit() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(check(&IntMatrix::from_rows(&[vec![1]])).diagonal(), vec![1]);
    }

    #[test]
    fn two_by_two() {
        // gcd of entries is 2 and |det| = 8, so the invariant factors are 2, 4.
        let s = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn divisibility_fixup_and_empty() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
        let s = check(&IntMatrix::zeros(0, 3));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 0]]));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_rows(&[vec![3, -6, 9, 0], vec![4, 1, -2, 7], vec![0, 5, 5, -5]]);
        let s1 = check(&a);
        let s2 = smith_normal_form(&a);
        assert_eq!(s1.u, s2.u);
        assert_eq!(s1.v, s2.v);
    }
}
