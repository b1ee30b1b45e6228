//! Property tests. Structured inputs come from the seeded generators in
//! `microcech::acceptance::gen`, so proptest shrinks over seeds and sizes.

use microcech::acceptance::gen;
use microcech::classify::kunneth_agrees;
use microcech::homology::{coboundary, cohomology, cup_product, models, pullback, Cochain, CoeffValue, CoefficientGroup, CoverNerve};
use microcech::microdiff::{adjoint, formal_inverse, MicrodiffOperator};
use microcech::symcore::{int, rat, symbol_from_json, symbol_to_json};
use microcech::twogroup::{h1_pointed_set, Budget, CrossedModule, FiniteGroup};
use proptest::prelude::*;

fn nerve(i: usize) -> CoverNerve {
    match i % 5 {
        0 => models::point(),
        1 => models::circle(),
        2 => models::sphere(),
        3 => models::torus(),
        _ => models::projective_plane(),
    }
}

fn coeff(i: usize) -> CoefficientGroup {
    [CoefficientGroup::Z, CoefficientGroup::Zmod(2), CoefficientGroup::Zmod(6), CoefficientGroup::Q, CoefficientGroup::QmodZ, CoefficientGroup::RCx]
        [i % 6]
}

fn agree(a: &MicrodiffOperator, b: &MicrodiffOperator) -> bool {
    a.agrees_with(b) == Some(true)
}

fn inverse_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

fn permutation(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut gen::rng(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn product_is_associative(seed: u64, nvars in 1usize..=2, window in 2usize..=4, o in 0usize..3) {
        let mut rng = gen::rng(seed);
        let orders = [int(1), rat(-1, 2), rat(2, 3)];
        let p = gen::operator(&mut rng, nvars, orders[o].clone(), window);
        let q = gen::operator(&mut rng, nvars, int(0), window);
        let r = gen::operator(&mut rng, nvars, rat(1, 3), window);
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert!(agree(&left, &right));
        let one = MicrodiffOperator::identity(nvars, window).unwrap();
        prop_assert!(agree(&p.mul(&one).unwrap(), &p));
    }

    #[test]
    fn adjoint_is_an_anti_involution(seed: u64, nvars in 1usize..=2, window in 2usize..=4) {
        let mut rng = gen::rng(seed);
        let p = gen::operator(&mut rng, nvars, int(1), window);
        let q = gen::operator(&mut rng, nvars, int(-1), window);
        prop_assert!(agree(&adjoint(&adjoint(&p).unwrap()).unwrap(), &p));
        let pq = adjoint(&p.mul(&q).unwrap()).unwrap();
        let qp = adjoint(&q).unwrap().mul(&adjoint(&p).unwrap()).unwrap();
        prop_assert!(agree(&pq, &qp));
    }

    #[test]
    fn inverse_is_two_sided(seed: u64, nvars in 1usize..=2, s in -2i64..=2, window in 2usize..=4) {
        let mut rng = gen::rng(seed);
        let p = gen::invertible(&mut rng, nvars, s, window);
        let inv = formal_inverse(&p).unwrap();
        let one = MicrodiffOperator::identity(nvars, window).unwrap();
        prop_assert!(agree(&p.mul(&inv).unwrap(), &one));
        prop_assert!(agree(&inv.mul(&p).unwrap(), &one));
    }

    #[test]
    fn symbol_json_round_trips(seed: u64, nvars in 1usize..=3, window in 1usize..=5) {
        let mut rng = gen::rng(seed);
        let p = gen::operator(&mut rng, nvars, rat(-3, 4), window);
        let back = symbol_from_json(&symbol_to_json(p.symbol())).unwrap();
        prop_assert_eq!(&back, p.symbol());
    }

    #[test]
    fn coboundary_squares_to_zero(seed: u64, n in 0usize..5, c in 0usize..6, k in 0usize..2) {
        let nv = nerve(n);
        let g = coeff(c);
        let a = gen::cochain(&mut gen::rng(seed), nv.count(k), k, g);
        let dd = coboundary(&nv, &coboundary(&nv, &a).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn coboundary_satisfies_leibniz(seed: u64, n in 1usize..5) {
        let nv = nerve(n);
        let mut rng = gen::rng(seed);
        let a = gen::cochain(&mut rng, nv.count(1), 1, CoefficientGroup::Z);
        let b = gen::cochain(&mut rng, nv.count(0), 0, CoefficientGroup::Z);
        let lhs = coboundary(&nv, &cup_product(&nv, &a, &b).unwrap()).unwrap();
        let rhs = cup_product(&nv, &coboundary(&nv, &a).unwrap(), &b).unwrap()
            .sub(&cup_product(&nv, &a, &coboundary(&nv, &b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_coboundary(seed: u64, n in 1usize..5, c in 0usize..6, k in 0usize..2) {
        let target = nerve(n);
        let perm = permutation(seed, target.vertices());
        let source = target.relabel(&perm).unwrap();
        let map = inverse_permutation(&perm);
        let a = gen::cochain(&mut gen::rng(seed ^ 1), target.count(k), k, coeff(c));
        let up_then_d = coboundary(&source, &pullback(&map, &source, &target, &a).unwrap()).unwrap();
        let d_then_up = pullback(&map, &source, &target, &coboundary(&target, &a).unwrap()).unwrap();
        prop_assert_eq!(up_then_d, d_then_up);
        let back = pullback(&perm, &target, &source, &pullback(&map, &source, &target, &a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn cohomology_is_relabel_invariant(seed: u64, n in 0usize..5, c in 0usize..6) {
        let nv = nerve(n);
        let relabeled = nv.relabel(&permutation(seed, nv.vertices())).unwrap();
        for k in 0..=2 {
            let a = cohomology(&nv, coeff(c), k);
            let b = cohomology(&relabeled, coeff(c), k);
            prop_assert_eq!(a.summands(), b.summands());
        }
    }

    #[test]
    fn classes_survive_coboundary_shifts(seed: u64, n in 1usize..5, c in 0usize..6, k in 1usize..=2) {
        let nv = nerve(n);
        let p = cohomology(&nv, coeff(c), k);
        let mut rng = gen::rng(seed);
        let coords = gen::coordinates(&mut rng, &p);
        let z = gen::cocycle_in_class(&mut rng, &nv, &p, &coords);
        let reduced = p.coordinates(&p.element_from_coordinates(&coords).unwrap()).unwrap();
        prop_assert!(p.is_cocycle(&z).unwrap());
        prop_assert_eq!(p.coordinates(&z).unwrap(), reduced);
    }

    #[test]
    fn kunneth_holds_for_trivial_circle_bundles(n in 0usize..5, c in 0usize..4) {
        prop_assert!(kunneth_agrees(&nerve(n), coeff(c)).unwrap());
    }

    #[test]
    fn h1_class_count_is_relabel_invariant(seed: u64, n in 1usize..3, which in 0usize..3) {
        let nv = nerve(n);
        let relabeled = nv.relabel(&permutation(seed, nv.vertices())).unwrap();
        let g = match which {
            0 => CrossedModule::discrete(FiniteGroup::cyclic(3)),
            1 => CrossedModule::shifted(FiniteGroup::cyclic(2)).unwrap(),
            _ => CrossedModule::discrete(FiniteGroup::symmetric3()),
        };
        let a = h1_pointed_set(&nv, &g, &mut Budget::new(5_000_000)).unwrap();
        let b = h1_pointed_set(&relabeled, &g, &mut Budget::new(5_000_000)).unwrap();
        prop_assert_eq!(a.classes.len(), b.classes.len());
    }
}

/// Counts cocycles and coboundaries by enumerating every cochain.
fn brute_force_order(nv: &CoverNerve, m: u64, k: usize) -> u128 {
    let g = CoefficientGroup::Zmod(m);
    let all = |len: usize| {
        (0..(m as u128).pow(len as u32)).map(move |mut code| {
            let vals: Vec<CoeffValue> = (0..len)
                .map(|_| {
                    let v = (code % m as u128) as i128;
                    code /= m as u128;
                    CoeffValue::Int(v)
                })
                .collect();
            Cochain::new(k, g, vals).unwrap()
        })
    };
    let cocycles = all(nv.count(k)).filter(|c| coboundary(nv, c).unwrap().is_zero()).count() as u128;
    if k == 0 {
        return cocycles;
    }
    let mut images = std::collections::HashSet::new();
    let lower = nv.count(k - 1);
    for code in 0..(m as u128).pow(lower as u32) {
        let mut code = code;
        let vals: Vec<CoeffValue> = (0..lower)
            .map(|_| {
                let v = (code % m as u128) as i128;
                code /= m as u128;
                CoeffValue::Int(v)
            })
            .collect();
        images.insert(coboundary(nv, &Cochain::new(k - 1, g, vals).unwrap()).unwrap().values().to_vec());
    }
    cocycles / images.len() as u128
}

#[test]
fn finite_cohomology_matches_enumeration() {
    for (nv, name) in [(models::circle(), "circle"), (models::sphere(), "sphere")] {
        for m in [2u64, 3, 4] {
            for k in 0..=1 {
                let expected = brute_force_order(&nv, m, k);
                let got = cohomology(&nv, CoefficientGroup::Zmod(m), k).order().unwrap();
                assert_eq!(got, expected, "{name} Z/{m} degree {k}");
            }
        }
    }
}

#[test]
fn torus_cup_product_is_unimodular() {
    let t = models::torus();
    let h1 = cohomology(&t, CoefficientGroup::Z, 1);
    let h2 = cohomology(&t, CoefficientGroup::Z, 2);
    let gens = h1.generators().unwrap();
    assert_eq!(gens.len(), 2);
    let ab = h2.coordinates(&cup_product(&t, &gens[0], &gens[1]).unwrap()).unwrap();
    let ba = h2.coordinates(&cup_product(&t, &gens[1], &gens[0]).unwrap()).unwrap();
    assert!(ab == vec![int(1)] || ab == vec![int(-1)], "{ab:?}");
    assert_eq!(ba, vec![-ab[0].clone()]);
    for g in &gens {
        assert_eq!(h2.coordinates(&cup_product(&t, g, g).unwrap()).unwrap(), vec![int(0)]);
    }
}
