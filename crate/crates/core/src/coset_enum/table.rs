use crate::permgrp::{Permutation, PermutationGroup};
use crate::presentations::{Letter, Presentation, Word};

use super::CosetEnumError;

/// Marker for an undefined entry in partial tables.
pub const UNDEFINED: u32 = u32::MAX;

/// A closed, consistent coset table.
///
/// Rows are cosets; columns are ordered `g0, g0^-1, g1, g1^-1, ...`
/// (see [`Letter::column`]). Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CosetTable {
    n_generators: usize,
    n_cosets: usize,
    entries: Vec<u32>,
    subgroup_generators: Vec<Word>,
}

impl CosetTable {
    /// Wraps row-major entries after checking closure and consistency.
    pub fn from_entries(
        n_generators: usize,
        entries: Vec<u32>,
        subgroup_generators: Vec<Word>,
    ) -> Result<Self, CosetEnumError> {
        let width = 2 * n_generators;
        if width == 0 {
            if !entries.is_empty() {
                return Err(CosetEnumError::InvalidTable("entries for zero generators".into()));
            }
            return Ok(CosetTable {
                n_generators,
                n_cosets: 1,
                entries,
                subgroup_generators,
            });
        }
        if entries.is_empty() || entries.len() % width != 0 {
            return Err(CosetEnumError::InvalidTable(format!(
                "{} entries is not a positive multiple of {width}",
                entries.len()
            )));
        }
        let t = CosetTable {
            n_generators,
            n_cosets: entries.len() / width,
            entries,
            subgroup_generators,
        };
        t.check_closed_and_consistent()?;
        Ok(t)
    }

    pub(crate) fn from_entries_unchecked(
        n_generators: usize,
        entries: Vec<u32>,
        subgroup_generators: Vec<Word>,
    ) -> Self {
        let width = (2 * n_generators).max(1);
        let n_cosets = if n_generators == 0 { 1 } else { entries.len() / width };
        CosetTable {
            n_generators,
            n_cosets,
            entries,
            subgroup_generators,
        }
    }

    /// Table of the whole group (one coset, every generator fixes it).
    pub fn trivial(n_generators: usize) -> Self {
        CosetTable {
            n_generators,
            n_cosets: 1,
            entries: vec![0; 2 * n_generators],
            subgroup_generators: (0..n_generators).map(Word::generator).collect(),
        }
    }

    pub fn n_cosets(&self) -> usize {
        self.n_cosets
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn width(&self) -> usize {
        2 * self.n_generators
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub(crate) fn set_subgroup_generators(&mut self, gens: Vec<Word>) {
        self.subgroup_generators = gens;
    }

    #[inline]
    pub fn entry(&self, coset: usize, column: usize) -> usize {
        self.entries[coset * self.width() + column] as usize
    }

    #[inline]
    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.entry(coset, letter.column())
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn row(&self, coset: usize) -> &[u32] {
        let w = self.width();
        &self.entries[coset * w..(coset + 1) * w]
    }

    fn check_closed_and_consistent(&self) -> Result<(), CosetEnumError> {
        let n = self.n_cosets;
        for c in 0..n {
            for col in 0..self.width() {
                let d = self.entries[c * self.width() + col];
                if d as usize >= n {
                    return Err(CosetEnumError::InvalidTable(format!(
                        "entry ({c},{col}) = {d} out of range"
                    )));
                }
                if self.entry(d as usize, col ^ 1) != c {
                    return Err(CosetEnumError::InvalidTable(format!(
                        "entry ({c},{col}) = {d} has no matching inverse entry"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every relator traced from every coset returns to that coset.
    pub fn relators_close(&self, p: &Presentation) -> bool {
        (0..self.n_cosets).all(|c| p.relators().iter().all(|r| self.trace(c, r) == c))
    }

    /// Every subgroup generator fixes coset 0.
    pub fn subgroup_closes(&self) -> bool {
        self.subgroup_generators.iter().all(|w| self.trace(0, w) == 0)
    }

    /// The permutation that generator `g` induces on the cosets.
    pub fn generator_permutation(&self, g: usize) -> Permutation {
        let images = (0..self.n_cosets)
            .map(|c| self.entry(c, 2 * g) as u32)
            .collect();
        Permutation::from_images_unchecked(images)
    }

    pub fn is_standard(&self) -> bool {
        let mut next = 1;
        for &d in &self.entries {
            let d = d as usize;
            if d == next {
                next += 1;
            } else if d > next {
                return false;
            }
        }
        true
    }

    /// Renumbers cosets in order of first appearance in a row-major scan
    /// starting from `base`, which becomes coset 0.
    pub fn rebased(&self, base: usize) -> CosetTable {
        let n = self.n_cosets;
        let w = self.width();
        let mut old_to_new = vec![UNDEFINED; n];
        let mut new_to_old = Vec::with_capacity(n);
        old_to_new[base] = 0;
        new_to_old.push(base);
        let mut i = 0;
        while i < new_to_old.len() {
            let old = new_to_old[i];
            for col in 0..w {
                let d = self.entry(old, col);
                if old_to_new[d] == UNDEFINED {
                    old_to_new[d] = new_to_old.len() as u32;
                    new_to_old.push(d);
                }
            }
            i += 1;
        }
        // Closed tables of transitive actions reach every coset.
        debug_assert_eq!(new_to_old.len(), n);
        let mut entries = Vec::with_capacity(n * w);
        for &old in &new_to_old {
            for col in 0..w {
                entries.push(old_to_new[self.entry(old, col)]);
            }
        }
        CosetTable {
            n_generators: self.n_generators,
            n_cosets: new_to_old.len(),
            entries,
            subgroup_generators: self.subgroup_generators.clone(),
        }
    }

    /// Canonical first-appearance numbering with the same base coset.
    pub fn standardize(&self) -> CosetTable {
        self.rebased(0)
    }

    /// Applies an arbitrary relabeling `perm[old] = new` (0 must stay
    /// wherever the caller wants the subgroup coset).
    pub fn relabeled(&self, perm: &[usize]) -> CosetTable {
        let n = self.n_cosets;
        let w = self.width();
        let mut entries = vec![0; n * w];
        for old in 0..n {
            for col in 0..w {
                entries[perm[old] * w + col] = perm[self.entry(old, col)] as u32;
            }
        }
        CosetTable {
            n_generators: self.n_generators,
            n_cosets: n,
            entries,
            subgroup_generators: self.subgroup_generators.clone(),
        }
    }

    /// The permutation representation on cosets.
    pub fn coset_action(&self) -> PermutationGroup {
        let gens = (0..self.n_generators)
            .map(|g| self.generator_permutation(g))
            .collect();
        PermutationGroup::new(self.n_cosets, gens).expect("generator degrees match")
    }
}
