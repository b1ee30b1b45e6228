use serde::{Deserialize, Serialize};

use super::group::{CrossedModule, FiniteGroup};
use super::search::{Budget, Csp};
use crate::error::{Error, Result};
use crate::homology::{cohomology, CoefficientGroup, CoverNerve};

/// `f` holds `f_ij ∈ G⁰` per edge, `alpha` holds `α_ijk ∈ G⁻¹` per triangle,
/// both in the nerve's simplex order (vertices increasing).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoGroupCocycle {
    pub f: Vec<usize>,
    pub alpha: Vec<usize>,
}

/// A coboundary witness `(g_i, β_ij)` with `g_i f_ij = d(β_ij) f'_ij g_j` and
/// `δ(g_i)(α_ijk) β_ik = β_ij δ(f'_ij)(β_jk) α'_ijk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub g: Vec<usize>,
    pub beta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub simplex: Vec<usize>,
    pub condition: &'static str,
}

impl TwoGroupCocycle {
    pub fn trivial(n: &CoverNerve, g: &CrossedModule) -> Self {
        Self { f: vec![g.g0().identity(); n.count(1)], alpha: vec![g.g1().identity(); n.count(2)] }
    }

    fn check_complete(&self, n: &CoverNerve, g: &CrossedModule) -> Result<()> {
        if self.f.len() != n.count(1) || self.alpha.len() != n.count(2) {
            return Err(Error::IncompleteAssignment(format!(
                "need {} edge values and {} triangle values, got {} and {}",
                n.count(1),
                n.count(2),
                self.f.len(),
                self.alpha.len()
            )));
        }
        if self.f.iter().any(|&v| v >= g.g0().order()) || self.alpha.iter().any(|&v| v >= g.g1().order()) {
            return Err(Error::IncompleteAssignment("value outside its group".into()));
        }
        Ok(())
    }
}

fn edge(n: &CoverNerve, i: usize, j: usize) -> usize {
    n.edge(i, j).expect("face of a simplex")
}

fn tri(n: &CoverNerve, i: usize, j: usize, k: usize) -> usize {
    n.index_of(&[i, j, k]).expect("face of a simplex")
}

/// `f_ij f_jk = d(α_ijk) f_ik`.
fn triangle_holds(g: &CrossedModule, f: [usize; 3], alpha: usize) -> bool {
    let g0 = g.g0();
    g0.mul(f[0], f[1]) == g0.mul(g.d(alpha), f[2])
}

/// `α_ijk α_ikl = δ(f_ij)(α_jkl) α_ijl`.
fn tetra_holds(g: &CrossedModule, f_ij: usize, a: [usize; 4]) -> bool {
    let g1 = g.g1();
    let [ijk, ikl, jkl, ijl] = a;
    g1.mul(ijk, ikl) == g1.mul(g.act(f_ij, jkl), ijl)
}

pub fn verify_cocycle(n: &CoverNerve, g: &CrossedModule, c: &TwoGroupCocycle) -> Result<Option<Violation>> {
    c.check_complete(n, g)?;
    for s in n.simplices(2) {
        let (i, j, k) = (s[0], s[1], s[2]);
        let f = [c.f[edge(n, i, j)], c.f[edge(n, j, k)], c.f[edge(n, i, k)]];
        if !triangle_holds(g, f, c.alpha[tri(n, i, j, k)]) {
            return Ok(Some(Violation { simplex: s.clone(), condition: "f_ij f_jk = d(α_ijk) f_ik" }));
        }
    }
    for s in n.simplices(3) {
        let (i, j, k, l) = (s[0], s[1], s[2], s[3]);
        let a = [c.alpha[tri(n, i, j, k)], c.alpha[tri(n, i, k, l)], c.alpha[tri(n, j, k, l)], c.alpha[tri(n, i, j, l)]];
        if !tetra_holds(g, c.f[edge(n, i, j)], a) {
            return Ok(Some(Violation { simplex: s.clone(), condition: "α_ijk α_ikl = δ(f_ij)(α_jkl) α_ijl" }));
        }
    }
    Ok(None)
}

pub fn is_cocycle(n: &CoverNerve, g: &CrossedModule, c: &TwoGroupCocycle) -> Result<bool> {
    Ok(verify_cocycle(n, g, c)?.is_none())
}

/// The cocycle `c'` related to `c` by the gauge `(g_i, β_ij)`.
pub fn apply_gauge(n: &CoverNerve, g: &CrossedModule, c: &TwoGroupCocycle, gauge: &Gauge) -> Result<TwoGroupCocycle> {
    c.check_complete(n, g)?;
    if gauge.g.len() != n.count(0) || gauge.beta.len() != n.count(1) {
        return Err(Error::IncompleteAssignment("gauge needs one g per vertex and one β per edge".into()));
    }
    let (g0, g1) = (g.g0(), g.g1());
    let f: Vec<usize> = n
        .simplices(1)
        .iter()
        .enumerate()
        .map(|(e, s)| {
            let x = g0.mul(g0.mul(gauge.g[s[0]], c.f[e]), g0.inv(gauge.g[s[1]]));
            g0.mul(g0.inv(g.d(gauge.beta[e])), x)
        })
        .collect();
    let alpha = n
        .simplices(2)
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let (i, j, k) = (s[0], s[1], s[2]);
            let (bij, bjk, bik) = (gauge.beta[edge(n, i, j)], gauge.beta[edge(n, j, k)], gauge.beta[edge(n, i, k)]);
            let lhs = g1.mul(g.act(gauge.g[i], c.alpha[t]), bik);
            let pre = g1.mul(bij, g.act(f[edge(n, i, j)], bjk));
            g1.mul(g1.inv(pre), lhs)
        })
        .collect();
    Ok(TwoGroupCocycle { f, alpha })
}

/// Domain listing the identity first, so searches try it first.
fn domain(group: &FiniteGroup) -> Vec<usize> {
    let e = group.identity();
    std::iter::once(e).chain((0..group.order()).filter(|&x| x != e)).collect()
}

/// Variable order for gauge searches (vertices `0..nv`, then edges): fixed
/// edges first, then greedily the edge closing the most triangles, each
/// preceded by its unvisited endpoints. Closed triangles make later edges
/// forced, which keeps the search narrow.
fn gauge_search_order(n: &CoverNerve, fixed: &[bool]) -> Vec<usize> {
    let nv = n.count(0);
    let edges = n.simplices(1);
    let mut cofaces: Vec<Vec<[usize; 2]>> = vec![Vec::new(); edges.len()];
    for s in n.simplices(2) {
        let es = [edge(n, s[0], s[1]), edge(n, s[1], s[2]), edge(n, s[0], s[2])];
        for (a, &e) in es.iter().enumerate() {
            cofaces[e].push([es[(a + 1) % 3], es[(a + 2) % 3]]);
        }
    }
    let mut seen_v = vec![false; nv];
    let mut seen_e = vec![false; edges.len()];
    let mut order = Vec::new();
    let visit = |e: usize, seen_v: &mut Vec<bool>, seen_e: &mut Vec<bool>, order: &mut Vec<usize>| {
        for &v in &edges[e] {
            if !std::mem::replace(&mut seen_v[v], true) {
                order.push(v);
            }
        }
        seen_e[e] = true;
        order.push(nv + e);
    };
    for e in (0..edges.len()).filter(|&e| fixed[e]) {
        visit(e, &mut seen_v, &mut seen_e, &mut order);
    }
    while let Some(best) = (0..edges.len())
        .filter(|&e| !seen_e[e])
        .max_by_key(|&e| {
            let closed = cofaces[e].iter().filter(|o| seen_e[o[0]] && seen_e[o[1]]).count();
            let touching = edges[e].iter().filter(|&&v| seen_v[v]).count();
            (closed, touching, std::cmp::Reverse(e))
        })
    {
        visit(best, &mut seen_v, &mut seen_e, &mut order);
    }
    order.extend((0..nv).filter(|&v| !seen_v[v]));
    order
}

/// Spanning forest of the 1-skeleton, greedy in edge order.
fn spanning_forest(n: &CoverNerve) -> Vec<bool> {
    let mut comp: Vec<usize> = (0..n.count(0)).collect();
    n.simplices(1)
        .iter()
        .map(|s| {
            let (a, b) = (comp[s[0]], comp[s[1]]);
            if a == b {
                return false;
            }
            for c in comp.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
            true
        })
        .collect()
}

/// Searches for a gauge from `c1` to `c2`.
///
/// A gauge can itself be moved by `γᵢ ∈ G⁻¹`: `gᵢ ↦ d(γᵢ)gᵢ`,
/// `β_ij ↦ γᵢ β_ij δ(f'_ij)(γ_j)⁻¹`. Walking a spanning forest this makes
/// `β = e` on forest edges, so only the remaining edges are searched.
pub fn are_cohomologous(
    n: &CoverNerve,
    g: &CrossedModule,
    c1: &TwoGroupCocycle,
    c2: &TwoGroupCocycle,
    budget: &mut Budget,
) -> Result<Option<Gauge>> {
    search_gauge(n, g, c1, c2, budget, true)
}

fn search_gauge(
    n: &CoverNerve,
    g: &CrossedModule,
    c1: &TwoGroupCocycle,
    c2: &TwoGroupCocycle,
    budget: &mut Budget,
    fix_forest: bool,
) -> Result<Option<Gauge>> {
    c1.check_complete(n, g)?;
    c2.check_complete(n, g)?;
    let nv = n.count(0);
    let (g0, g1) = (g.g0(), g.g1());
    let mut domains = vec![domain(g0); nv];
    let forest = if fix_forest { spanning_forest(n) } else { vec![false; n.count(1)] };
    domains.extend(forest.iter().map(|&t| if t { vec![g1.identity()] } else { domain(g1) }));
    let mut csp = Csp::new(domains);
    for (e, s) in n.simplices(1).iter().enumerate() {
        let (i, j) = (s[0], s[1]);
        csp.constrain(vec![i, j, nv + e], move |a| {
            // g_i f_ij = d(β_ij) f'_ij g_j
            g0.mul(a[i], c1.f[e]) == g0.mul(g0.mul(g.d(a[nv + e]), c2.f[e]), a[j])
        });
    }
    for (t, s) in n.simplices(2).iter().enumerate() {
        let (i, j, k) = (s[0], s[1], s[2]);
        let (eij, ejk, eik) = (edge(n, i, j), edge(n, j, k), edge(n, i, k));
        csp.constrain(vec![i, nv + eij, nv + ejk, nv + eik], move |a| {
            let lhs = g1.mul(g.act(a[i], c1.alpha[t]), a[nv + eik]);
            let rhs = g1.mul(g1.mul(a[nv + eij], g.act(c2.f[eij], a[nv + ejk])), c2.alpha[t]);
            lhs == rhs
        });
    }
    let mut found = None;
    csp.run(&gauge_search_order(n, &forest), budget, |a| {
        found = Some(Gauge { g: a[..nv].to_vec(), beta: a[nv..].to_vec() });
        false
    })?;
    Ok(found)
}

/// Edges and triangles that may be gauged to the identity: a spanning forest
/// of `f`-edges, and triangles removed by elementary collapses.
#[derive(Clone, Debug)]
pub struct GaugeFixing {
    pub tree: Vec<bool>,
    pub collapsed: Vec<bool>,
}

pub fn gauge_fixing(n: &CoverNerve) -> GaugeFixing {
    let ne = n.count(1);
    let nt = n.count(2);
    let tri_edges: Vec<[usize; 3]> =
        n.simplices(2).iter().map(|s| [edge(n, s[0], s[1]), edge(n, s[1], s[2]), edge(n, s[0], s[2])]).collect();
    let mut alive_tri = vec![true; nt];
    let mut edge_used = vec![false; ne];
    let mut collapsed = vec![false; nt];
    let mut cofaces = vec![0usize; ne];
    for es in &tri_edges {
        for &e in es {
            cofaces[e] += 1;
        }
    }
    let mut kept = vec![false; nt];
    loop {
        let pick = (0..nt)
            .filter(|&t| alive_tri[t] && !kept[t])
            .find_map(|t| tri_edges[t].iter().find(|&&e| cofaces[e] == 1).map(|&e| (t, e)));
        match pick {
            Some((t, e)) => {
                alive_tri[t] = false;
                collapsed[t] = true;
                edge_used[e] = true;
                for &x in &tri_edges[t] {
                    cofaces[x] -= 1;
                }
            }
            // Nothing is free: keep a triangle with α unconstrained and take it out.
            None => match (0..nt).find(|&t| alive_tri[t] && !kept[t]) {
                Some(t) => {
                    kept[t] = true;
                    alive_tri[t] = false;
                    for &x in &tri_edges[t] {
                        cofaces[x] -= 1;
                    }
                }
                None => break,
            },
        }
    }
    // Kruskal in edge order over the edges not consumed by collapses.
    let mut parent: Vec<usize> = (0..n.count(0)).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut tree = vec![false; ne];
    for (e, s) in n.simplices(1).iter().enumerate() {
        if edge_used[e] {
            continue;
        }
        let (a, b) = (find(&mut parent, s[0]), find(&mut parent, s[1]));
        if a != b {
            parent[a] = b;
            tree[e] = true;
        }
    }
    GaugeFixing { tree, collapsed }
}

/// Gauge-fixed cocycles: `f = e` on the spanning forest and `α = e` on collapsed
/// triangles. Every class has at least one member; sorted lexicographically.
pub fn gauge_fixed_cocycles(n: &CoverNerve, g: &CrossedModule, budget: &mut Budget) -> Result<Vec<TwoGroupCocycle>> {
    let fix = gauge_fixing(n);
    let ne = n.count(1);
    let (g0, g1) = (g.g0(), g.g1());
    let mut domains: Vec<Vec<usize>> =
        fix.tree.iter().map(|&t| if t { vec![g0.identity()] } else { domain(g0) }).collect();
    domains.extend(fix.collapsed.iter().map(|&c| if c { vec![g1.identity()] } else { domain(g1) }));
    let mut csp = Csp::new(domains);
    for (t, s) in n.simplices(2).iter().enumerate() {
        let es = [edge(n, s[0], s[1]), edge(n, s[1], s[2]), edge(n, s[0], s[2])];
        csp.constrain(vec![es[0], es[1], es[2], ne + t], move |a| triangle_holds(g, [a[es[0]], a[es[1]], a[es[2]]], a[ne + t]));
    }
    for s in n.simplices(3) {
        let (i, j, k, l) = (s[0], s[1], s[2], s[3]);
        let ts = [tri(n, i, j, k), tri(n, i, k, l), tri(n, j, k, l), tri(n, i, j, l)];
        let fij = edge(n, i, j);
        csp.constrain(vec![fij, ne + ts[0], ne + ts[1], ne + ts[2], ne + ts[3]], move |a| {
            tetra_holds(g, a[fij], [a[ne + ts[0]], a[ne + ts[1]], a[ne + ts[2]], a[ne + ts[3]]])
        });
    }
    let mut order = Vec::new();
    for v in 0..n.count(0) {
        order.extend(n.simplices(1).iter().enumerate().filter(|(_, s)| s[1] == v).map(|(e, _)| e));
        order.extend(n.simplices(2).iter().enumerate().filter(|(_, s)| s[2] == v).map(|(t, _)| ne + t));
    }
    let mut out = Vec::new();
    csp.run(&order, budget, |a| {
        out.push(TwoGroupCocycle { f: a[..ne].to_vec(), alpha: a[ne..].to_vec() });
        true
    })?;
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1PointedSet {
    /// One representative per class, the lexicographically smallest gauge-fixed cocycle.
    pub classes: Vec<TwoGroupCocycle>,
    /// Index of the class of the trivial cocycle.
    pub base_point: usize,
}

pub fn h1_pointed_set(n: &CoverNerve, g: &CrossedModule, budget: &mut Budget) -> Result<H1PointedSet> {
    let candidates = gauge_fixed_cocycles(n, g, budget)?;
    let mut classes: Vec<TwoGroupCocycle> = Vec::new();
    for c in candidates {
        let mut new = true;
        for r in &classes {
            if are_cohomologous(n, g, r, &c, budget)?.is_some() {
                new = false;
                break;
            }
        }
        if new {
            classes.push(c);
        }
    }
    let trivial = TwoGroupCocycle::trivial(n, g);
    let mut base_point = None;
    for (i, r) in classes.iter().enumerate() {
        if are_cohomologous(n, g, r, &trivial, budget)?.is_some() {
            base_point = Some(i);
            break;
        }
    }
    Ok(H1PointedSet { classes, base_point: base_point.expect("the trivial cocycle is gauge-fixed") })
}

/// Index of the class of `c` among `h1.classes`.
pub fn class_index(n: &CoverNerve, g: &CrossedModule, h1: &H1PointedSet, c: &TwoGroupCocycle, budget: &mut Budget) -> Result<usize> {
    for (i, r) in h1.classes.iter().enumerate() {
        if are_cohomologous(n, g, r, c, budget)?.is_some() {
            return Ok(i);
        }
    }
    Err(Error::NotACocycle("cocycle matches no class".into()))
}

/// Sections of `H⁻¹`: locally constant `ker d`-valued 0-cochains.
pub fn h_minus1(n: &CoverNerve, g: &CrossedModule) -> Vec<Vec<usize>> {
    let ker: Vec<usize> = (0..g.g1().order()).filter(|&a| g.d(a) == g.g0().identity()).collect();
    let nv = n.count(0);
    let mut comp: Vec<usize> = (0..nv).collect();
    for s in n.simplices(1) {
        let (a, b) = (comp[s[0]], comp[s[1]]);
        for c in comp.iter_mut() {
            if *c == b {
                *c = a;
            }
        }
    }
    let roots: Vec<usize> = (0..nv).filter(|&v| comp[v] == v).collect();
    let mut out = vec![vec![0; nv]];
    for &r in &roots {
        out = out
            .into_iter()
            .flat_map(|sec| {
                ker.iter()
                    .map(|&k| {
                        let mut s = sec.clone();
                        for v in 0..nv {
                            if comp[v] == r {
                                s[v] = k;
                            }
                        }
                        s
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// Classes of self-equivalences `(g_i, β_ij)` of the trivial cocycle, modulo
/// 2-morphisms `a_i`: `g_i = d(β_ij) g_j`, `β_ik = β_ij β_jk`, and
/// `(g, β) ~ (d(a_i) g_i, a_i β_ij a_j⁻¹)`.
pub fn h0_pointed_set(n: &CoverNerve, g: &CrossedModule, budget: &mut Budget) -> Result<Vec<Gauge>> {
    let nv = n.count(0);
    let (g0, g1) = (g.g0(), g.g1());
    let tree = gauge_fixing(n).tree;
    let objects = |fix_tree: bool| {
        let mut domains = vec![domain(g0); nv];
        domains.extend(tree.iter().map(|&t| if t && fix_tree { vec![g1.identity()] } else { domain(g1) }));
        let mut csp = Csp::new(domains);
        for (e, s) in n.simplices(1).iter().enumerate() {
            let (i, j) = (s[0], s[1]);
            csp.constrain(vec![i, j, nv + e], move |a| a[i] == g0.mul(g.d(a[nv + e]), a[j]));
        }
        for s in n.simplices(2) {
            let (eij, ejk, eik) = (edge(n, s[0], s[1]), edge(n, s[1], s[2]), edge(n, s[0], s[2]));
            csp.constrain(vec![nv + eij, nv + ejk, nv + eik], move |a| a[nv + eik] == g1.mul(a[nv + eij], a[nv + ejk]));
        }
        csp
    };
    let csp = objects(true);
    let mut reps: Vec<Gauge> = Vec::new();
    let mut cands = Vec::new();
    csp.run(&gauge_search_order(n, &tree), budget, |a| {
        cands.push(Gauge { g: a[..nv].to_vec(), beta: a[nv..].to_vec() });
        true
    })?;
    for c in cands {
        let mut new = true;
        for r in &reps {
            let mut eq = Csp::new(vec![domain(g1); nv]);
            for v in 0..nv {
                let (r, c) = (r.clone(), c.clone());
                eq.constrain(vec![v], move |a| c.g[v] == g0.mul(g.d(a[v]), r.g[v]));
            }
            for (e, s) in n.simplices(1).iter().enumerate() {
                let (i, j) = (s[0], s[1]);
                let (rb, cb) = (r.beta[e], c.beta[e]);
                eq.constrain(vec![i, j], move |a| cb == g1.mul(g1.mul(a[i], rb), g1.inv(a[j])));
            }
            let mut hit = false;
            eq.run(&(0..nv).collect::<Vec<_>>(), budget, |_| {
                hit = true;
                false
            })?;
            if hit {
                new = false;
                break;
            }
        }
        if new {
            reps.push(c);
        }
    }
    Ok(reps)
}

/// Crossed module whose `H¹` should match `H^{1+i}(·; G)`: `1 → G` for `i = 0`,
/// `G → 1` for `i = 1`.
pub fn shift_module(g: &FiniteGroup, i: u8) -> Result<CrossedModule> {
    match i {
        0 => Ok(CrossedModule::discrete(g.clone())),
        1 => CrossedModule::shifted(g.clone()),
        _ => Err(Error::Unsupported(format!("shift {i}; only 0 and 1 are defined"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianComparison {
    pub agrees: bool,
    pub degree: usize,
    pub h1_classes: usize,
    pub abelian_order: u128,
    /// Elementary divisors (prime powers, sorted) on both sides.
    pub h1_structure: Vec<u64>,
    pub abelian_structure: Vec<u64>,
}

/// Compares `H¹(X; [G⁻¹ → G⁰])` against abelian cohomology, for crossed modules of
/// abelian groups with trivial action whose `d` is injective (compared with
/// `H¹(X; coker d)`) or surjective (compared with `H²(X; ker d)`).
pub fn compare_with_abelian(n: &CoverNerve, g: &CrossedModule, budget: &mut Budget) -> Result<AbelianComparison> {
    let (g0, g1) = (g.g0(), g.g1());
    if !g0.is_abelian() || !g1.is_abelian() {
        return Err(Error::NonAbelian);
    }
    if (0..g0.order()).any(|f| (0..g1.order()).any(|a| g.act(f, a) != a)) {
        return Err(Error::Unsupported("comparison needs a trivial action".into()));
    }
    let image: Vec<bool> = {
        let mut im = vec![false; g0.order()];
        for a in 0..g1.order() {
            im[g.d(a)] = true;
        }
        im
    };
    let ker: Vec<usize> = (0..g1.order()).filter(|&a| g.d(a) == g0.identity()).collect();
    let injective = ker.len() == 1;
    let surjective = image.iter().all(|&b| b);
    let (degree, coeff_orders) = if injective {
        // Orders of cosets in G⁰ / d(G⁻¹), one per coset.
        let mut seen = vec![false; g0.order()];
        let mut orders = Vec::new();
        for b in 0..g0.order() {
            if seen[b] {
                continue;
            }
            for a in 0..g1.order() {
                seen[g0.mul(b, g.d(a))] = true;
            }
            let mut x = b;
            let mut k = 1;
            while !image[x] {
                x = g0.mul(x, b);
                k += 1;
            }
            orders.push(k as u64);
        }
        (1, orders)
    } else if surjective {
        (2, ker.iter().map(|&a| g1.element_order(a) as u64).collect())
    } else {
        return Err(Error::Unsupported("d must be injective or surjective".into()));
    };

    let mut abelian_structure = Vec::new();
    for q in elementary_divisors(&coeff_orders) {
        let h = cohomology(n, CoefficientGroup::zmod(q)?, degree);
        for d in h.torsion() {
            abelian_structure.extend(factor_prime_powers(d as u64));
        }
    }
    abelian_structure.sort_unstable();
    let abelian_order: u128 = abelian_structure.iter().map(|&q| q as u128).product();

    let h1 = h1_pointed_set(n, g, budget)?;
    let mut orders = Vec::with_capacity(h1.classes.len());
    let trivial = TwoGroupCocycle::trivial(n, g);
    for c in &h1.classes {
        let mut power = c.clone();
        let mut k = 1u64;
        while are_cohomologous(n, g, &power, &trivial, budget)?.is_none() {
            power = pointwise_product(g, &power, c);
            k += 1;
        }
        orders.push(k);
    }
    let h1_structure = elementary_divisors(&orders);
    Ok(AbelianComparison {
        agrees: h1.classes.len() as u128 == abelian_order && h1_structure == abelian_structure,
        degree,
        h1_classes: h1.classes.len(),
        abelian_order,
        h1_structure,
        abelian_structure,
    })
}

fn pointwise_product(g: &CrossedModule, a: &TwoGroupCocycle, b: &TwoGroupCocycle) -> TwoGroupCocycle {
    TwoGroupCocycle {
        f: a.f.iter().zip(&b.f).map(|(&x, &y)| g.g0().mul(x, y)).collect(),
        alpha: a.alpha.iter().zip(&b.alpha).map(|(&x, &y)| g.g1().mul(x, y)).collect(),
    }
}

fn factor_prime_powers(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while d > 1 {
        if d.is_multiple_of(p) {
            let mut q = 1;
            while d.is_multiple_of(p) {
                d /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    out
}

/// Elementary divisors of a finite abelian group from the orders of all its elements.
pub fn elementary_divisors(orders: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for q in factor_prime_powers(orders.len() as u64) {
        let p = smallest_prime(q);
        let e_max = q.ilog(p);
        // r[k] = log_p |G[p^k]|; r[k] − r[k−1] factors have exponent at least k.
        let r: Vec<u32> = (0..=e_max)
            .map(|k| {
                let pk = p.pow(k);
                (orders.iter().filter(|&&o| pk % o == 0).count() as u64).ilog(p)
            })
            .collect();
        let at_least: Vec<u32> = r.windows(2).map(|w| w[1] - w[0]).chain(std::iter::once(0)).collect();
        for k in 1..=e_max {
            for _ in 0..at_least[k as usize - 1] - at_least[k as usize] {
                out.push(p.pow(k));
            }
        }
    }
    out.sort_unstable();
    out
}

fn smallest_prime(q: u64) -> u64 {
    (2..=q).find(|p| q.is_multiple_of(*p)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::models;

    fn budget() -> Budget {
        Budget::new(super::super::search::DEFAULT_BUDGET)
    }

    #[test]
    fn forest_gauge_fixing_loses_nothing() {
        let s3 = FiniteGroup::symmetric3();
        for n in [models::circle(), models::simplex(3), models::sphere()] {
            for xm in [CrossedModule::discrete(s3.clone()), CrossedModule::identity_of(s3.clone())] {
                let cands = gauge_fixed_cocycles(&n, &xm, &mut budget()).unwrap();
                for a in cands.iter().take(6) {
                    for b in cands.iter().take(6) {
                        let fixed = search_gauge(&n, &xm, a, b, &mut budget(), true).unwrap();
                        let free = search_gauge(&n, &xm, a, b, &mut budget(), false).unwrap();
                        assert_eq!(fixed.is_some(), free.is_some());
                        if let Some(gauge) = fixed {
                            assert_eq!(&apply_gauge(&n, &xm, a, &gauge).unwrap(), b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn elementary_divisor_oracle() {
        let z4 = FiniteGroup::cyclic(4);
        let orders: Vec<u64> = (0..4).map(|a| z4.element_order(a) as u64).collect();
        assert_eq!(elementary_divisors(&orders), vec![4]);
        // Z/2 × Z/2 × Z/3
        assert_eq!(elementary_divisors(&[1, 2, 2, 2, 3, 3, 6, 6, 6, 3, 6, 6]), vec![2, 2, 3]);
        assert_eq!(elementary_divisors(&[1]), Vec::<u64>::new());
    }

    #[test]
    fn trivial_and_vacuous_cocycles() {
        let s1 = models::circle();
        let g = CrossedModule::discrete(FiniteGroup::cyclic(3));
        assert!(is_cocycle(&s1, &g, &TwoGroupCocycle::trivial(&s1, &g)).unwrap());
        assert!(is_cocycle(&s1, &g, &TwoGroupCocycle { f: vec![1, 2, 0], alpha: vec![] }).unwrap());
        assert!(matches!(
            verify_cocycle(&s1, &g, &TwoGroupCocycle { f: vec![1], alpha: vec![] }),
            Err(Error::IncompleteAssignment(_))
        ));
    }

    #[test]
    fn sphere_generator_and_perturbation() {
        let s2 = models::sphere();
        let g = CrossedModule::shifted(FiniteGroup::cyclic(2)).unwrap();
        let gen = TwoGroupCocycle { f: vec![0; 6], alpha: vec![1, 0, 0, 0] };
        // No 3-simplices, so every assignment is a cocycle.
        assert!(is_cocycle(&s2, &g, &gen).unwrap());
        let h1 = h1_pointed_set(&s2, &g, &mut budget()).unwrap();
        assert_eq!(h1.classes.len(), 2);
        let trivial = TwoGroupCocycle::trivial(&s2, &g);
        assert!(are_cohomologous(&s2, &g, &trivial, &gen, &mut budget()).unwrap().is_none());
        let w = are_cohomologous(&s2, &g, &gen, &gen, &mut budget()).unwrap().unwrap();
        assert!(w.g.iter().all(|&x| x == 0) && w.beta.iter().all(|&x| x == 0));

        // The full 3-simplex has a tetrahedron: perturbing one face breaks the condition.
        let t = models::simplex(4);
        let ok = TwoGroupCocycle { f: vec![0; 6], alpha: vec![1, 1, 0, 0] };
        assert!(is_cocycle(&t, &g, &ok).unwrap());
        let bad = TwoGroupCocycle { f: vec![0; 6], alpha: vec![1, 0, 0, 0] };
        assert_eq!(verify_cocycle(&t, &g, &bad).unwrap().unwrap().simplex, vec![0, 1, 2, 3]);
    }

    #[test]
    fn gauge_action_preserves_cocycles() {
        let s2 = models::sphere();
        let g = CrossedModule::identity_of(FiniteGroup::symmetric3());
        let c = TwoGroupCocycle::trivial(&s2, &g);
        let gauge = Gauge { g: vec![1, 4, 2, 5], beta: vec![3, 1, 0, 2, 5, 4] };
        let c2 = apply_gauge(&s2, &g, &c, &gauge).unwrap();
        assert!(is_cocycle(&s2, &g, &c2).unwrap());
        assert!(are_cohomologous(&s2, &g, &c, &c2, &mut budget()).unwrap().is_some());
    }

    #[test]
    fn small_h1_counts() {
        let s1 = models::circle();
        let h = |g: CrossedModule| h1_pointed_set(&s1, &g, &mut budget()).unwrap().classes.len();
        assert_eq!(h(CrossedModule::discrete(FiniteGroup::cyclic(2))), 2);
        assert_eq!(h(CrossedModule::shifted(FiniteGroup::cyclic(2)).unwrap()), 1);
        assert_eq!(h(CrossedModule::discrete(FiniteGroup::trivial())), 1);
        // Conjugacy classes of S3: H¹(S¹; S3) = Hom(Z, S3)/conj has 3 elements.
        assert_eq!(h(CrossedModule::discrete(FiniteGroup::symmetric3())), 3);
        assert_eq!(h(CrossedModule::identity_of(FiniteGroup::cyclic(2))), 1);
    }

    #[test]
    fn comparisons() {
        let s1 = models::circle();
        let cmp = compare_with_abelian(&s1, &CrossedModule::discrete(FiniteGroup::cyclic(3)), &mut budget()).unwrap();
        assert!(cmp.agrees);
        assert_eq!(cmp.h1_classes, 3);
        let s2 = models::sphere();
        let cmp = compare_with_abelian(&s2, &CrossedModule::shifted(FiniteGroup::cyclic(2)).unwrap(), &mut budget()).unwrap();
        assert!(cmp.agrees && cmp.h1_classes == 2);
        let cmp = compare_with_abelian(&s2, &CrossedModule::identity_of(FiniteGroup::cyclic(2)), &mut budget()).unwrap();
        assert!(cmp.agrees && cmp.h1_classes == 1);
        assert!(matches!(
            compare_with_abelian(&s1, &CrossedModule::discrete(FiniteGroup::symmetric3()), &mut budget()),
            Err(Error::NonAbelian)
        ));
    }

    #[test]
    fn degree_zero_and_minus_one() {
        let s1 = models::circle();
        // (Z/2 → 1): H⁰ = H¹(S¹; Z/2), H⁻¹ = Z/2.
        let g = CrossedModule::shifted(FiniteGroup::cyclic(2)).unwrap();
        assert_eq!(h0_pointed_set(&s1, &g, &mut budget()).unwrap().len(), 2);
        assert_eq!(h_minus1(&s1, &g).len(), 2);
        // (1 → Z/3): H⁰ = Z/3 global sections, H⁻¹ trivial.
        let g = CrossedModule::discrete(FiniteGroup::cyclic(3));
        assert_eq!(h0_pointed_set(&s1, &g, &mut budget()).unwrap().len(), 3);
        assert_eq!(h_minus1(&s1, &g).len(), 1);
    }

    #[test]
    fn budget_exceeded_is_explicit() {
        let t = models::torus();
        let g = CrossedModule::discrete(FiniteGroup::cyclic(4));
        assert!(matches!(h1_pointed_set(&t, &g, &mut Budget::new(10)), Err(Error::BudgetExceeded { .. })));
    }
}
