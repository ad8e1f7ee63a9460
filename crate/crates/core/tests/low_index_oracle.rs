//! Low-index search against brute-force subgroup enumeration in small
//! finite groups given both by a presentation and by permutations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use grpkit::low_index::{low_index_subgroups_with, LowIndexOptions};
use grpkit::{parse_presentation, Permutation};

fn perm(deg: usize, cycles: &[&[u32]]) -> Permutation {
    Permutation::from_cycles(deg, cycles).unwrap()
}

/// All elements reachable from the identity by right multiplication.
fn closure(deg: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![Permutation::identity(deg)];
    seen.insert(stack[0].clone());
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Every subgroup, as joins of cyclic subgroups until nothing new appears.
fn all_subgroups(deg: usize, elements: &[Permutation]) -> HashSet<BTreeSet<Permutation>> {
    let mut subs: HashSet<BTreeSet<Permutation>> = elements.iter().map(|e| closure(deg, &[e.clone()])).collect();
    loop {
        let list: Vec<_> = subs.iter().cloned().collect();
        let mut grown = false;
        for a in &list {
            for b in &list {
                let gens: Vec<Permutation> = a.iter().chain(b.iter()).cloned().collect();
                if subs.insert(closure(deg, &gens)) {
                    grown = true;
                }
            }
        }
        if !grown {
            return subs;
        }
    }
}

/// index -> sorted class sizes, over conjugacy classes of subgroups.
fn oracle(deg: usize, gens: &[Permutation]) -> BTreeMap<usize, Vec<usize>> {
    let elements: Vec<Permutation> = closure(deg, gens).into_iter().collect();
    let order = elements.len();
    let mut remaining = all_subgroups(deg, &elements);
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    while let Some(h) = remaining.iter().next().cloned() {
        let class: HashSet<BTreeSet<Permutation>> = elements
            .iter()
            .map(|g| h.iter().map(|x| x.conjugate_by(g)).collect())
            .collect();
        for c in &class {
            remaining.remove(c);
        }
        out.entry(order / h.len()).or_default().push(class.len());
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

fn check(presentation: &str, deg: usize, gens: Vec<Permutation>) {
    let p = parse_presentation(presentation).unwrap();
    let images: HashMap<usize, &Permutation> = gens.iter().enumerate().collect();
    for r in p.relators() {
        let value = r.letters().iter().fold(Permutation::identity(deg), |acc, l| {
            let g = images[&l.generator()];
            acc.then(&if l.is_inverse() { g.inverse() } else { g.clone() })
        });
        assert!(value.is_identity(), "permutations must satisfy {presentation}");
    }
    let expected = oracle(deg, &gens);
    let order = closure(deg, &gens).len();
    assert_eq!(order % expected.keys().max().unwrap(), 0);
    let opts = LowIndexOptions {
        parallel: false,
        ..LowIndexOptions::default()
    };
    let found = low_index_subgroups_with(&p, 1, order, &opts).unwrap();
    let mut actual: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for rec in &found {
        assert!(rec.representative.relators_close(&p));
        actual.entry(rec.index).or_default().push(rec.class_size);
    }
    for v in actual.values_mut() {
        v.sort();
    }
    assert_eq!(actual, expected, "{presentation}");
}

#[test]
fn cyclic_six() {
    check("group<a | a^6>", 6, vec![perm(6, &[&[0, 1, 2, 3, 4, 5]])]);
}

#[test]
fn symmetric_three() {
    check(
        "group<a,b | a^3, b^2, (a*b)^2>",
        3,
        vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])],
    );
}

#[test]
fn alternating_four() {
    check(
        "group<a,b | a^3, b^2, (a*b)^3>",
        4,
        vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[0, 1], &[2, 3]])],
    );
}

#[test]
fn dihedral_twelve() {
    check(
        "group<a,b | a^6, b^2, (a*b)^2>",
        6,
        vec![perm(6, &[&[0, 1, 2, 3, 4, 5]]), perm(6, &[&[1, 5], &[2, 4]])],
    );
}

#[test]
fn symmetric_four() {
    check(
        "group<a,b | a^4, b^2, (a*b)^3>",
        4,
        vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])],
    );
}
