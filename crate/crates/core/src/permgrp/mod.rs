//! Finite permutation groups backed by a deterministic Schreier–Sims
//! stabilizer chain.

mod chain;
mod perm;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

pub use chain::StabChain;
pub use perm::{NotABijection, Permutation};

/// Default element budget for [`PermutationGroup::is_simple`].
pub const DEFAULT_ELEMENT_BUDGET: u64 = 100_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum PermGroupError {
    #[error("permutation of degree {found} used with a group of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order {order} exceeds the element budget {budget}")]
    BudgetExceeded { order: BigUint, budget: u64 },
}

/// A permutation group given by generators, with a lazily built
/// stabilizer chain.
#[derive(Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermGroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermGroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermutationGroup::new(degree, Vec::new()).expect("no generators")
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
            let cycle: Vec<u32> = (0..degree as u32).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
        }
        PermutationGroup::new(degree, gens).unwrap()
    }

    pub fn alternating(degree: usize) -> Self {
        let gens = (2..degree as u32)
            .map(|k| Permutation::from_cycles(degree, &[&[0, 1, k]]).unwrap())
            .collect();
        PermutationGroup::new(degree, gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    fn check_degree(&self, p: &Permutation) -> Result<(), PermGroupError> {
        if p.degree() != self.degree {
            Err(PermGroupError::DegreeMismatch {
                expected: self.degree,
                found: p.degree(),
            })
        } else {
            Ok(())
        }
    }

    pub fn is_member(&self, p: &Permutation) -> Result<bool, PermGroupError> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let p = out[i];
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    out.push(q);
                }
            }
            i += 1;
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// Every element, in breadth-first order from the identity.
    pub fn elements(&self, budget: u64) -> Result<Vec<Permutation>, PermGroupError> {
        let order = self.order();
        if order > BigUint::from(budget) {
            return Err(PermGroupError::BudgetExceeded { order, budget });
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &self.generators {
                let next = out[i].then(g);
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    out.push(next);
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// The smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<PermutationGroup, PermGroupError> {
        for s in seeds {
            self.check_degree(s)?;
        }
        let mut gens: Vec<Permutation> = Vec::new();
        let mut closure = PermutationGroup::trivial(self.degree);
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        for s in seeds {
            if !closure.chain().contains(s) {
                gens.push(s.clone());
                closure = PermutationGroup::new(self.degree, gens.clone())?;
                queue.push_back(s.clone());
            }
        }
        while let Some(x) = queue.pop_front() {
            for y in &self.generators {
                let c = x.conjugate_by(y);
                if !closure.chain().contains(&c) {
                    gens.push(c.clone());
                    closure = PermutationGroup::new(self.degree, gens.clone())?;
                    queue.push_back(c);
                }
            }
        }
        Ok(closure)
    }

    /// Representatives of the conjugacy classes (first element of each class
    /// in [`elements`](Self::elements) order).
    pub fn conjugacy_class_representatives(
        &self,
        budget: u64,
    ) -> Result<Vec<Permutation>, PermGroupError> {
        let elements = self.elements(budget)?;
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut class_of = vec![usize::MAX; elements.len()];
        let mut reps = Vec::new();
        let inverses: Vec<Permutation> = self.generators.iter().map(|g| g.inverse()).collect();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let class = reps.len();
            reps.push(elements[start].clone());
            class_of[start] = class;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for (g, ginv) in self.generators.iter().zip(&inverses) {
                    let c = ginv.then(&elements[i]).then(g);
                    let j = index[&c];
                    if class_of[j] == usize::MAX {
                        class_of[j] = class;
                        stack.push(j);
                    }
                }
            }
        }
        Ok(reps)
    }

    /// Simplicity by exhaustive sweep: every nonidentity class representative
    /// must normally generate the whole group. The trivial group is not simple.
    pub fn is_simple(&self, element_budget: u64) -> Result<bool, PermGroupError> {
        let order = self.order();
        if order > BigUint::from(element_budget) {
            return Err(PermGroupError::BudgetExceeded {
                order,
                budget: element_budget,
            });
        }
        if order == BigUint::from(1u32) {
            return Ok(false);
        }
        for rep in self.conjugacy_class_representatives(element_budget)? {
            if rep.is_identity() {
                continue;
            }
            if self.normal_closure(&[rep])?.order() != order {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(deg: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(deg, cycles).unwrap()
    }

    fn s3() -> PermutationGroup {
        PermutationGroup::new(3, vec![perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(PermutationGroup::trivial(1).order(), BigUint::from(1u32));
        assert_eq!(s3().order(), BigUint::from(6u32));
        assert_eq!(PermutationGroup::alternating(5).order(), BigUint::from(60u32));
        assert_eq!(PermutationGroup::symmetric(7).order(), BigUint::from(5040u32));
    }

    #[test]
    fn membership() {
        let a4 = PermutationGroup::alternating(4);
        assert!(a4.is_member(&Permutation::identity(4)).unwrap());
        for g in a4.generators() {
            assert!(a4.is_member(g).unwrap());
        }
        assert!(!a4.is_member(&perm(4, &[&[0, 1]])).unwrap());
        assert!(a4.is_member(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn normal_closures() {
        let g = s3();
        assert_eq!(
            g.normal_closure(&[Permutation::identity(3)]).unwrap().order(),
            BigUint::from(1u32)
        );
        assert_eq!(
            g.normal_closure(&[perm(3, &[&[0, 1, 2]])]).unwrap().order(),
            BigUint::from(3u32)
        );
        assert_eq!(
            g.normal_closure(&[perm(3, &[&[0, 1]])]).unwrap().order(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn simplicity() {
        assert!(!s3().is_simple(DEFAULT_ELEMENT_BUDGET).unwrap());
        assert!(PermutationGroup::alternating(5).is_simple(DEFAULT_ELEMENT_BUDGET).unwrap());
        assert!(!PermutationGroup::alternating(4).is_simple(DEFAULT_ELEMENT_BUDGET).unwrap());
        assert!(PermutationGroup::new(3, vec![perm(3, &[&[0, 1, 2]])])
            .unwrap()
            .is_simple(10)
            .unwrap());
        assert!(matches!(
            PermutationGroup::symmetric(8).is_simple(1000),
            Err(PermGroupError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn transitivity() {
        assert!(!PermutationGroup::trivial(2).is_transitive());
        assert!(PermutationGroup::trivial(1).is_transitive());
        let g = PermutationGroup::new(4, vec![perm(4, &[&[0, 1]]), perm(4, &[&[2, 3]])]).unwrap();
        assert!(!g.is_transitive());
        assert!(PermutationGroup::alternating(4).is_transitive());
    }

    #[test]
    fn class_reps_of_a5() {
        let reps = PermutationGroup::alternating(5)
            .conjugacy_class_representatives(1000)
            .unwrap();
        assert_eq!(reps.len(), 5);
    }
}
