use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on the elements `0..n`, given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidGroup("table is not an n×n table with entries in 0..n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        Self::from_table((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).unwrap()
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Permutations of three letters, composed as `(a·b)(x) = a(b(x))`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = [a[b[0]], a[b[1]], a[b[2]]];
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_homomorphism_to(&self, target: &Self, map: &[usize]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&v| v < target.order())
            && (0..self.order()).all(|a| (0..self.order()).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }

    fn is_automorphism(&self, map: &[usize]) -> bool {
        let mut seen = vec![false; self.order()];
        self.is_homomorphism_to(self, map) && map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }
}

/// `d: G⁻¹ → G⁰` with `G⁰` acting on `G⁻¹` by `δ`; `action[f][a] = δ(f)(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    g1: FiniteGroup,
    g0: FiniteGroup,
    d: Vec<usize>,
    action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossedModuleJson {
    pub g_minus1: GroupJson,
    pub g0: GroupJson,
    pub d: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl CrossedModule {
    pub fn new(g1: FiniteGroup, g0: FiniteGroup, d: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCrossedModule(m));
        if !g1.is_homomorphism_to(&g0, &d) {
            return bad("d is not a homomorphism".into());
        }
        if action.len() != g0.order() || action.iter().any(|a| !g1.is_automorphism(a)) {
            return bad("δ(f) must be an automorphism of G⁻¹ for every f".into());
        }
        for f in 0..g0.order() {
            for g in 0..g0.order() {
                let fg = g0.mul(f, g);
                if (0..g1.order()).any(|a| action[fg][a] != action[f][action[g][a]]) {
                    return bad(format!("δ is not an action at ({f}, {g})"));
                }
            }
            for a in 0..g1.order() {
                if d[action[f][a]] != g0.mul(g0.mul(f, d[a]), g0.inv(f)) {
                    return bad(format!("d(δ(f)(a)) ≠ f·d(a)·f⁻¹ at f={f}, a={a}"));
                }
            }
        }
        for a in 0..g1.order() {
            for b in 0..g1.order() {
                if action[d[a]][b] != g1.mul(g1.mul(a, b), g1.inv(a)) {
                    return bad(format!("δ(d(a)) ≠ ad(a) at a={a}, b={b}"));
                }
            }
        }
        Ok(Self { g1, g0, d, action })
    }

    /// `1 → G`: plain `G`-valued cohomology.
    pub fn discrete(g: FiniteGroup) -> Self {
        let n = g.order();
        Self::new(FiniteGroup::trivial(), g, vec![0], vec![vec![0]; n]).unwrap()
    }

    /// `G → 1`, defined for abelian `G`.
    pub fn shifted(g: FiniteGroup) -> Result<Self> {
        if !g.is_abelian() {
            return Err(Error::NonAbelian);
        }
        let n = g.order();
        Self::new(g, FiniteGroup::trivial(), vec![0; n], vec![(0..n).collect()])
    }

    /// `G → G` the identity, acting by conjugation.
    pub fn identity_of(g: FiniteGroup) -> Self {
        let n = g.order();
        let action = (0..n).map(|f| (0..n).map(|a| g.mul(g.mul(f, a), g.inv(f))).collect()).collect();
        Self::new(g.clone(), g, (0..n).collect(), action).unwrap()
    }

    pub fn g1(&self) -> &FiniteGroup {
        &self.g1
    }

    pub fn g0(&self) -> &FiniteGroup {
        &self.g0
    }

    pub fn d(&self, a: usize) -> usize {
        self.d[a]
    }

    pub fn act(&self, f: usize, a: usize) -> usize {
        self.action[f][a]
    }

    pub fn from_json(j: &CrossedModuleJson) -> Result<Self> {
        Self::new(
            FiniteGroup::from_table(j.g_minus1.table.clone())?,
            FiniteGroup::from_table(j.g0.table.clone())?,
            j.d.clone(),
            j.action.clone(),
        )
    }

    pub fn to_json(&self) -> CrossedModuleJson {
        CrossedModuleJson {
            g_minus1: GroupJson { table: self.g1.table.clone() },
            g0: GroupJson { table: self.g0.table.clone() },
            d: self.d.clone(),
            action: self.action.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups() {
        assert_eq!(FiniteGroup::cyclic(4).element_order(1), 4);
        let s3 = FiniteGroup::symmetric3();
        assert!(!s3.is_abelian());
        assert_eq!(s3.element_order(4), 3);
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn crossed_modules() {
        assert!(CrossedModule::shifted(FiniteGroup::cyclic(3)).is_ok());
        assert!(matches!(CrossedModule::shifted(FiniteGroup::symmetric3()), Err(Error::NonAbelian)));
        let id = CrossedModule::identity_of(FiniteGroup::symmetric3());
        assert_eq!(id.act(1, 4), 5);
        // The zero map with trivial action is fine: ad is trivial on an abelian group.
        let z2 = FiniteGroup::cyclic(2);
        assert!(CrossedModule::new(z2.clone(), z2.clone(), vec![0, 0], vec![vec![0, 1]; 2]).is_ok());
        // A non-homomorphism d.
        assert!(CrossedModule::new(z2.clone(), z2, vec![1, 1], vec![vec![0, 1]; 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = CrossedModule::identity_of(FiniteGroup::cyclic(3));
        let text = serde_json::to_string(&x.to_json()).unwrap();
        let back: CrossedModuleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(CrossedModule::from_json(&back).unwrap(), x);
    }
}
