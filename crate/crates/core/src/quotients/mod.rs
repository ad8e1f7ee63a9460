//! Counting homomorphisms and epimorphisms from a finitely presented group
//! onto a finite permutation group by backtracking over generator images.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::coset_enum::normalized_relators;
use crate::permgrp::{PermGroupError, Permutation, PermutationGroup};
use crate::presentations::{Presentation, Word};

/// Largest target order accepted.
pub const TARGET_ORDER_BUDGET: u64 = 10_000;
/// Largest target order for which the automorphism group is enumerated.
pub const AUT_ORDER_BUDGET: u64 = 200;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error("target order {order} exceeds the budget {budget}")]
    BudgetExceeded { order: BigUint, budget: u64 },
    #[error("{total} epimorphisms is not divisible by the automorphism group order {aut_order}")]
    NonDivisible { total: u64, aut_order: u64 },
    #[error("unknown target {0:?} (expected one of A4, A5, S3, PSL27, Z2, Z3, Z5)")]
    UnknownTarget(String),
}

impl From<PermGroupError> for QuotientError {
    fn from(e: PermGroupError) -> Self {
        match e {
            PermGroupError::BudgetExceeded { order, budget } => {
                QuotientError::BudgetExceeded { order, budget }
            }
            PermGroupError::DegreeMismatch { .. } => unreachable!("targets are built consistently"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpiCount {
    pub total: u64,
    pub aut_order: u64,
    pub classes: u64,
}

/// Built-in target groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    A4,
    A5,
    S3,
    Psl27,
    Z2,
    Z3,
    Z5,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::A4,
        Target::A5,
        Target::S3,
        Target::Psl27,
        Target::Z2,
        Target::Z3,
        Target::Z5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::A4 => "A4",
            Target::A5 => "A5",
            Target::S3 => "S3",
            Target::Psl27 => "PSL27",
            Target::Z2 => "Z2",
            Target::Z3 => "Z3",
            Target::Z5 => "Z5",
        }
    }

    pub fn group(self) -> PermutationGroup {
        let p = |deg: usize, cycles: &[&[u32]]| Permutation::from_cycles(deg, cycles).unwrap();
        let (deg, gens) = match self {
            Target::A4 => (4, vec![p(4, &[&[0, 1, 2]]), p(4, &[&[0, 1], &[2, 3]])]),
            Target::A5 => (5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[0, 1, 2]])]),
            Target::S3 => (3, vec![p(3, &[&[0, 1, 2]]), p(3, &[&[0, 1]])]),
            // x -> x + 1 and x -> -1/x on the projective line over F7,
            // with infinity as point 7.
            Target::Psl27 => (
                8,
                vec![
                    p(8, &[&[0, 1, 2, 3, 4, 5, 6]]),
                    p(8, &[&[0, 7], &[1, 6], &[2, 3], &[4, 5]]),
                ],
            ),
            Target::Z2 => (2, vec![p(2, &[&[0, 1]])]),
            Target::Z3 => (3, vec![p(3, &[&[0, 1, 2]])]),
            Target::Z5 => (5, vec![p(5, &[&[0, 1, 2, 3, 4]])]),
        };
        PermutationGroup::new(deg, gens).unwrap()
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = QuotientError;
    fn from_str(s: &str) -> Result<Self, QuotientError> {
        Target::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| QuotientError::UnknownTarget(s.to_string()))
    }
}

fn checked_elements(q: &PermutationGroup) -> Result<Vec<Permutation>, QuotientError> {
    Ok(q.elements(TARGET_ORDER_BUDGET)?)
}

fn eval(w: &Word, images: &[Permutation], inverses: &[Permutation], degree: usize) -> Permutation {
    w.letters().iter().fold(Permutation::identity(degree), |acc, l| {
        let g = l.generator();
        acc.then(if l.is_inverse() { &inverses[g] } else { &images[g] })
    })
}

struct Backtrack<'a> {
    degree: usize,
    order: BigUint,
    /// `candidates[g]`: elements allowed as the image of generator `g`.
    candidates: Vec<Vec<&'a Permutation>>,
    /// `checks[g]`: relators whose largest generator is `g`.
    checks: Vec<Vec<Word>>,
    surjective_only: bool,
    memo: Mutex<HashMap<Vec<Permutation>, bool>>,
}

impl Backtrack<'_> {
    fn generates(&self, images: &[Permutation]) -> bool {
        let mut key: Vec<Permutation> = images.iter().filter(|g| !g.is_identity()).cloned().collect();
        key.sort();
        key.dedup();
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return v;
        }
        let v = PermutationGroup::new(self.degree, key.clone()).unwrap().order() == self.order;
        self.memo.lock().unwrap().insert(key, v);
        v
    }

    fn count(&self, images: &mut Vec<Permutation>, inverses: &mut Vec<Permutation>) -> u64 {
        let g = images.len();
        if g == self.candidates.len() {
            return u64::from(!self.surjective_only || self.generates(images));
        }
        let mut total = 0;
        for &c in &self.candidates[g] {
            images.push(c.clone());
            inverses.push(c.inverse());
            let ok = self.checks[g]
                .iter()
                .all(|r| eval(r, images, inverses, self.degree).is_identity());
            if ok {
                total += self.count(images, inverses);
            }
            images.pop();
            inverses.pop();
        }
        total
    }
}

/// Counts generator-image tuples satisfying every relator of `p`.
/// `prune_orders` restricts each image to orders dividing the exponent of
/// any relator that is a power of that generator alone.
pub(crate) fn count_tuples(
    p: &Presentation,
    q: &PermutationGroup,
    surjective_only: bool,
    prune_orders: bool,
) -> Result<u64, QuotientError> {
    let elements = checked_elements(q)?;
    let k = p.n_generators();
    let relators = normalized_relators(p);
    let mut exponent: Vec<Option<u64>> = vec![None; k];
    let mut checks: Vec<Vec<Word>> = vec![Vec::new(); k];
    for r in &relators {
        let g_max = r.max_generator().expect("nonempty relator");
        checks[g_max].push(r.clone());
        let g0 = r.letters()[0].generator();
        if r.letters().iter().all(|l| l.generator() == g0) {
            let m = r.len() as u64;
            exponent[g0] = Some(exponent[g0].map_or(m, |e| num_integer::gcd(e, m)));
        }
    }
    let orders: Vec<u64> = elements.iter().map(|e| e.order()).collect();
    let candidates: Vec<Vec<&Permutation>> = (0..k)
        .map(|g| {
            elements
                .iter()
                .zip(&orders)
                .filter(|(_, &o)| !prune_orders || exponent[g].map_or(true, |m| m % o == 0))
                .map(|(e, _)| e)
                .collect()
        })
        .collect();
    let bt = Backtrack {
        degree: q.degree(),
        order: q.order(),
        candidates,
        checks,
        surjective_only,
        memo: Mutex::new(HashMap::new()),
    };
    if k == 0 {
        return Ok(u64::from(!surjective_only || bt.order == BigUint::from(1u32)));
    }
    // Split on the first generator's image; the sum is order independent.
    let total = bt.candidates[0]
        .par_iter()
        .map(|&c| {
            let mut images = vec![c.clone()];
            let mut inverses = vec![c.inverse()];
            let ok = bt.checks[0]
                .iter()
                .all(|r| eval(r, &images, &inverses, bt.degree).is_identity());
            if ok {
                bt.count(&mut images, &mut inverses)
            } else {
                0
            }
        })
        .sum();
    Ok(total)
}

/// Number of homomorphisms from the group presented by `p` to `q`.
pub fn count_homomorphisms(p: &Presentation, q: &PermutationGroup) -> Result<u64, QuotientError> {
    count_tuples(p, q, false, true)
}

/// Number of surjective homomorphisms, and that number divided by `|Aut(q)|`.
/// When `aut_order` is omitted it is computed, for targets of order at
/// most [`AUT_ORDER_BUDGET`].
pub fn count_epimorphisms(
    p: &Presentation,
    q: &PermutationGroup,
    aut_order: Option<u64>,
) -> Result<EpiCount, QuotientError> {
    let aut_order = match aut_order {
        Some(a) => a,
        None => automorphism_group_order(q)?,
    };
    let total = count_tuples(p, q, true, true)?;
    if total % aut_order != 0 {
        return Err(QuotientError::NonDivisible { total, aut_order });
    }
    Ok(EpiCount {
        total,
        aut_order,
        classes: total / aut_order,
    })
}

/// `|Aut(q)|`, by testing every assignment of the generators of `q` to
/// elements of matching order for extension to a bijective homomorphism.
pub fn automorphism_group_order(q: &PermutationGroup) -> Result<u64, QuotientError> {
    let order = q.order();
    if order > BigUint::from(AUT_ORDER_BUDGET) {
        return Err(QuotientError::BudgetExceeded {
            order,
            budget: AUT_ORDER_BUDGET,
        });
    }
    let elements = checked_elements(q)?;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let gens: Vec<&Permutation> = q.generators().iter().collect();
    // Spanning tree of the Cayley graph: each non-identity element is
    // parent * generator.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; elements.len()];
    let mut order_bfs = vec![index[&Permutation::identity(q.degree())]];
    let mut seen = vec![false; elements.len()];
    seen[order_bfs[0]] = true;
    let mut i = 0;
    while i < order_bfs.len() {
        let e = order_bfs[i];
        for (s, g) in gens.iter().enumerate() {
            let f = index[&elements[e].then(g)];
            if !seen[f] {
                seen[f] = true;
                parent[f] = Some((e, s));
                order_bfs.push(f);
            }
        }
        i += 1;
    }
    let gen_orders: Vec<u64> = gens.iter().map(|g| g.order()).collect();
    let choices: Vec<Vec<usize>> = gen_orders
        .iter()
        .map(|o| (0..elements.len()).filter(|&e| elements[e].order() == *o).collect())
        .collect();
    let mut count = 0u64;
    let mut tuple = vec![0usize; gens.len()];
    let mut image = vec![0usize; elements.len()];
    let identity = order_bfs[0];
    let full = elements.len() as u64;
    loop {
        // Extend along the tree, then verify every Cayley edge.
        image[identity] = identity;
        for &e in &order_bfs[1..] {
            let (par, s) = parent[e].unwrap();
            image[e] = index[&elements[image[par]].then(&elements[tuple[s]])];
        }
        let hom = (0..elements.len()).all(|e| {
            gens.iter().enumerate().all(|(s, g)| {
                let f = index[&elements[e].then(g)];
                image[f] == index[&elements[image[e]].then(&elements[tuple[s]])]
            })
        });
        if hom {
            let images: Vec<Permutation> = tuple.iter().map(|&t| elements[t].clone()).collect();
            let sub = PermutationGroup::new(q.degree(), images).unwrap();
            if sub.order() == BigUint::from(full) {
                count += 1;
            }
        }
        // Next tuple.
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                return Ok(count);
            }
            let idx = choices[pos].iter().position(|&c| c == tuple[pos]);
            let next = match idx {
                Some(j) if j + 1 < choices[pos].len() => Some(choices[pos][j + 1]),
                None if !choices[pos].is_empty() => Some(choices[pos][0]),
                _ => None,
            };
            match next {
                Some(n) => {
                    tuple[pos] = n;
                    break;
                }
                None => {
                    tuple[pos] = choices[pos][0];
                    pos += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{catalog, parse_presentation, CatalogKey};

    #[test]
    fn target_orders() {
        let orders: Vec<u64> = Target::ALL.iter().map(|t| t.group().order_u64().unwrap()).collect();
        assert_eq!(orders, vec![12, 60, 6, 168, 2, 3, 5]);
        assert_eq!("psl27".parse::<Target>().unwrap(), Target::Psl27);
        assert!("A6".parse::<Target>().is_err());
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(automorphism_group_order(&Target::A4.group()).unwrap(), 24);
        assert_eq!(automorphism_group_order(&Target::S3.group()).unwrap(), 6);
        assert_eq!(automorphism_group_order(&Target::Z5.group()).unwrap(), 4);
        assert_eq!(automorphism_group_order(&Target::Z2.group()).unwrap(), 1);
        let s6 = PermutationGroup::symmetric(6);
        assert!(matches!(
            automorphism_group_order(&s6),
            Err(QuotientError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn small_counts() {
        let p = parse_presentation("group<a | a^3>").unwrap();
        let e = count_epimorphisms(&p, &Target::Z3.group(), Some(2)).unwrap();
        assert_eq!((e.total, e.classes), (2, 1));
        let p = parse_presentation("group<a | a^2>").unwrap();
        assert_eq!(count_homomorphisms(&p, &Target::S3.group()).unwrap(), 4);
        assert_eq!(count_homomorphisms(&p, &PermutationGroup::trivial(1)).unwrap(), 1);
        let err = count_epimorphisms(&p, &Target::Z2.group(), Some(2)).unwrap_err();
        assert_eq!(err, QuotientError::NonDivisible { total: 1, aut_order: 2 });
    }

    #[test]
    fn gamma_onto_a4() {
        let e = count_epimorphisms(catalog(CatalogKey::Gamma), &Target::A4.group(), None).unwrap();
        assert_eq!(e.aut_order, 24);
        assert_eq!(e.classes, 1);
    }

    #[test]
    fn gamma_onto_simple_targets() {
        let p = catalog(CatalogKey::Gamma);
        assert_eq!(count_epimorphisms(p, &Target::A5.group(), Some(120)).unwrap().classes, 1);
        assert_eq!(count_epimorphisms(p, &Target::Psl27.group(), Some(336)).unwrap().classes, 2);
    }

    #[test]
    fn pruning_is_sound() {
        for key in [CatalogKey::Gamma, CatalogKey::Lambda1, CatalogKey::Gamma0] {
            for t in [Target::A4, Target::S3, Target::Z2, Target::Z3] {
                let p = catalog(key);
                let q = t.group();
                for surj in [false, true] {
                    assert_eq!(
                        count_tuples(p, &q, surj, true).unwrap(),
                        count_tuples(p, &q, surj, false).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn homs_bound_epis() {
        let p = catalog(CatalogKey::Gamma);
        for t in Target::ALL {
            let q = t.group();
            assert!(count_homomorphisms(p, &q).unwrap() >= count_tuples(p, &q, true, true).unwrap());
        }
    }
}
