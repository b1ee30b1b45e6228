use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nerve of a finite cover: a downward-closed family of vertex sets.
/// Vertices are `0..n` in their natural order; every simplex is stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverNerve {
    vertices: usize,
    // simplices[k] lists the k-simplices in lexicographic order.
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerveJson {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl CoverNerve {
    /// Builds the downward closure of `generators`. Every vertex is a 0-simplex.
    pub fn new(vertices: usize, generators: &[Vec<usize>]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidNerve("a nerve needs at least one vertex".into()));
        }
        let mut all: BTreeSet<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
        for g in generators {
            if g.is_empty() {
                return Err(Error::InvalidNerve("empty simplex".into()));
            }
            if let Some(&v) = g.iter().find(|&&v| v >= vertices) {
                return Err(Error::InvalidNerve(format!("vertex {v} out of range 0..{vertices}")));
            }
            let mut s = g.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != g.len() {
                return Err(Error::InvalidNerve(format!("repeated vertex in {g:?}")));
            }
            if s.len() > 24 {
                return Err(Error::InvalidNerve("simplex dimension too large".into()));
            }
            for mask in 1u32..(1 << s.len()) {
                all.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
            }
        }
        let dim = all.iter().map(Vec::len).max().unwrap_or(1) - 1;
        let mut simplices = vec![Vec::new(); dim + 1];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        for level in &mut simplices {
            level.sort();
        }
        let index = simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(Self { vertices, simplices, index })
    }

    pub fn from_json(j: &NerveJson) -> Result<Self> {
        Self::new(j.vertices, &j.simplices)
    }

    /// Maximal simplices only.
    pub fn to_json(&self) -> NerveJson {
        let mut maximal = Vec::new();
        for k in (0..=self.dim()).rev() {
            for s in &self.simplices[k] {
                let covered = self.simplices.get(k + 1).is_some_and(|up| {
                    up.iter().any(|t| s.iter().all(|v| t.contains(v)))
                });
                if !covered {
                    maximal.push(s.clone());
                }
            }
        }
        maximal.sort();
        NerveJson { vertices: self.vertices, simplices: maximal }
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index_of(simplex).is_some()
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<usize> {
        self.index_of(&[i, j])
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.vertices];
        if perm.len() != self.vertices || perm.iter().any(|&p| p >= self.vertices || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidNerve("relabelling is not a permutation".into()));
        }
        let gens: Vec<Vec<usize>> = self.simplices.iter().flatten().map(|s| s.iter().map(|&v| perm[v]).collect()).collect();
        Self::new(self.vertices, &gens)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }
}

/// Small standard nerves.
pub mod models {
    use super::CoverNerve;

    pub fn point() -> CoverNerve {
        CoverNerve::new(1, &[]).unwrap()
    }

    /// Three arcs around a circle.
    pub fn circle() -> CoverNerve {
        CoverNerve::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    /// Boundary of the tetrahedron.
    pub fn sphere() -> CoverNerve {
        CoverNerve::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    /// Seven-vertex torus.
    pub fn torus() -> CoverNerve {
        let mut t = Vec::new();
        for i in 0..7 {
            t.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            t.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        CoverNerve::new(7, &t).unwrap()
    }

    /// Six-vertex real projective plane.
    pub fn projective_plane() -> CoverNerve {
        let faces = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];
        CoverNerve::new(6, &faces.iter().map(|f| f.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// The full simplex on `n` vertices.
    pub fn simplex(n: usize) -> CoverNerve {
        CoverNerve::new(n, &[(0..n).collect()]).unwrap()
    }

    pub fn by_name(name: &str) -> Option<CoverNerve> {
        match name {
            "point" => Some(point()),
            "circle" | "S1" => Some(circle()),
            "sphere" | "S2" => Some(sphere()),
            "torus" | "T2" => Some(torus()),
            "rp2" | "RP2" => Some(projective_plane()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let s = models::sphere();
        assert_eq!((s.count(0), s.count(1), s.count(2)), (4, 6, 4));
        assert_eq!(s.euler_characteristic(), 2);
        let t = models::torus();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
        assert_eq!(t.euler_characteristic(), 0);
        let p = models::projective_plane();
        assert_eq!((p.count(0), p.count(1), p.count(2)), (6, 15, 10));
        assert_eq!(p.euler_characteristic(), 1);
        assert_eq!(models::circle().simplices(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CoverNerve::new(2, &[vec![0, 2]]).is_err());
        assert!(CoverNerve::new(2, &[vec![]]).is_err());
        assert!(CoverNerve::new(2, &[vec![1, 1]]).is_err());
        assert!(CoverNerve::new(0, &[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = models::torus();
        let j = t.to_json();
        assert_eq!(j.simplices.len(), 14);
        assert_eq!(CoverNerve::from_json(&j).unwrap(), t);
    }
}
