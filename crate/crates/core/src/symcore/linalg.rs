//! Dense exact linear algebra over `ℚ(i)`.

use super::scalar::ExactScalar;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<ExactScalar>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d = &*d - &(&f * s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : A v = 0}`, one vector per free column, with a 1 in that column.
pub fn nullspace(rows: &[Vec<ExactScalar>], ncols: usize) -> Vec<Vec<ExactScalar>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![ExactScalar::zero(); ncols];
            v[f] = ExactScalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

/// Some solution of `A v = b`, if one exists.
pub fn solve(rows: &[Vec<ExactScalar>], ncols: usize, rhs: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
    let mut m: Vec<Vec<ExactScalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut v = vec![ExactScalar::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = m[r][ncols].clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let dot = row.iter().zip(v).fold(s(0), |acc, (x, y)| acc + x * y);
                assert!(dot.is_zero());
            }
        }
        let x = solve(&a, 3, &[s(6), s(12)]).unwrap();
        assert_eq!(x[0], s(6));
        assert!(solve(&a, 3, &[s(1), s(1)]).is_none());
    }
}
