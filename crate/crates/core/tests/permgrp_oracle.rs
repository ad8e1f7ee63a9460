//! Schreier-Sims orders and memberships against exhaustive closure.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use grpkit::{Permutation, PermutationGroup};

fn exhaustive(deg: usize, gens: &[Permutation], cap: usize) -> Option<HashSet<Permutation>> {
    let mut seen = HashSet::new();
    let id = Permutation::identity(deg);
    seen.insert(id.clone());
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                stack.push(y);
            }
        }
    }
    Some(seen)
}

fn arb_perm(deg: usize) -> impl Strategy<Value = Permutation> {
    Just((0..deg as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn arb_group() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (2usize..=8).prop_flat_map(|deg| (Just(deg), prop::collection::vec(arb_perm(deg), 1..=3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn order_matches_closure((deg, gens) in arb_group()) {
        if let Some(elements) = exhaustive(deg, &gens, 5000) {
            let g = PermutationGroup::new(deg, gens.clone()).unwrap();
            prop_assert_eq!(g.order(), BigUint::from(elements.len()));
            for e in elements.iter().take(50) {
                prop_assert!(g.is_member(e).unwrap());
            }
        }
    }

    #[test]
    fn membership_matches_closure((deg, gens, probe) in arb_group().prop_flat_map(|(d, g)| (Just(d), Just(g), arb_perm(d)))) {
        if let Some(elements) = exhaustive(deg, &gens, 5000) {
            let g = PermutationGroup::new(deg, gens).unwrap();
            prop_assert_eq!(g.is_member(&probe).unwrap(), elements.contains(&probe));
        }
    }
}

#[test]
fn classical_orders() {
    assert_eq!(PermutationGroup::symmetric(7).order(), BigUint::from(5040u32));
    assert_eq!(PermutationGroup::alternating(6).order(), BigUint::from(360u32));
    for n in 2..=6 {
        let s = PermutationGroup::symmetric(n);
        let count = exhaustive(n, s.generators(), 5000).unwrap().len();
        assert_eq!(s.order(), BigUint::from(count));
    }
}

#[test]
fn simplicity_of_small_groups() {
    assert!(PermutationGroup::alternating(5).is_simple(1000).unwrap());
    assert!(!PermutationGroup::alternating(4).is_simple(1000).unwrap());
    assert!(!PermutationGroup::symmetric(5).is_simple(1000).unwrap());
}
