//! Todd–Coxeter coset enumeration (HLT with lookahead).
//!
//! The enumerator keeps one mutable arena of cosets. Coincidences are
//! resolved through a union-find forest, processed from a queue until no
//! consequence remains, before any new coset is defined.

mod table;

use crate::permgrp::PermutationGroup;
use crate::presentations::{Letter, Presentation, PresentationError, Word};

pub use table::{CosetTable, UNDEFINED};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CosetEnumError {
    #[error("coset enumeration exceeded {0} live cosets")]
    LimitExceeded(usize),
    #[error(transparent)]
    InvalidWord(#[from] PresentationError),
    #[error("invalid coset table: {0}")]
    InvalidTable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: DEFAULT_MAX_COSETS,
        }
    }
}

/// Cyclically reduces each relator and rotates it to start at an
/// occurrence of its least generator index. Empty results are dropped.
pub(crate) fn normalized_relators(p: &Presentation) -> Vec<Word> {
    p.relators()
        .iter()
        .map(Word::cyclic_reduce)
        .filter(|w| !w.is_empty())
        .map(|w| {
            let least = w.letters().iter().map(|l| l.generator()).min().unwrap();
            let k = w.letters().iter().position(|l| l.generator() == least).unwrap();
            w.rotate(k)
        })
        .collect()
}

struct Enumerator {
    width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(n_generators: usize, max_cosets: usize) -> Self {
        let width = 2 * n_generators;
        Enumerator {
            width,
            table: vec![UNDEFINED; width],
            parent: vec![0],
            live: 1,
            max_cosets,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: usize, col: usize) -> u32 {
        self.table[c * self.width + col]
    }

    #[inline]
    fn set(&mut self, c: usize, col: usize, d: u32) {
        self.table[c * self.width + col] = d;
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = c;
        while self.parent[c] as usize != r {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), CosetEnumError> {
        if self.live >= self.max_cosets {
            return Err(CosetEnumError::LimitExceeded(self.max_cosets));
        }
        let d = self.len();
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat(UNDEFINED).take(self.width));
        self.live += 1;
        self.set(c, col, d as u32);
        self.set(d, col ^ 1, c as u32);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep as u32;
        self.live -= 1;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for col in 0..self.width {
                let f = self.get(e, col);
                if f == UNDEFINED {
                    continue;
                }
                let f = f as usize;
                self.set(f, col ^ 1, UNDEFINED);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let x = self.get(e1, col);
                if x != UNDEFINED {
                    self.merge(f1, x as usize, &mut queue);
                    continue;
                }
                let y = self.get(f1, col ^ 1);
                if y != UNDEFINED {
                    self.merge(e1, y as usize, &mut queue);
                    continue;
                }
                self.set(e1, col, f1 as u32);
                self.set(f1, col ^ 1, e1 as u32);
            }
        }
    }

    /// Scans `w` from `c`; defines new cosets when `fill` is set, otherwise
    /// only records deductions and coincidences.
    fn scan(&mut self, c: usize, w: &[Letter], fill: bool) -> Result<(), CosetEnumError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                let d = self.get(f, w[i].column());
                if d == UNDEFINED {
                    break;
                }
                f = d as usize;
                i += 1;
            }
            if i as isize > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let d = self.get(b, w[j as usize].inverse().column());
                if d == UNDEFINED {
                    break;
                }
                b = d as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                let col = w[i].column();
                self.set(f, col, b as u32);
                self.set(b, col ^ 1, f as u32);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i].column())?;
        }
    }

    fn lookahead(&mut self, relators: &[Word]) {
        let mut c = 0;
        while c < self.len() {
            for r in relators {
                if !self.is_live(c) {
                    break;
                }
                let _ = self.scan(c, r.letters(), false);
            }
            c += 1;
        }
    }

    /// Scan with fill, retrying once after a lookahead pass when the coset
    /// cap is hit.
    fn scan_fill(&mut self, c: usize, w: &[Letter], relators: &[Word]) -> Result<(), CosetEnumError> {
        match self.scan(c, w, true) {
            Err(CosetEnumError::LimitExceeded(_)) => {
                self.lookahead(relators);
                if !self.is_live(c) {
                    return Ok(());
                }
                self.scan(c, w, true)
            }
            other => other,
        }
    }

    fn run(&mut self, relators: &[Word], subgens: &[Word]) -> Result<(), CosetEnumError> {
        for w in subgens {
            self.scan_fill(0, w.letters(), relators)?;
        }
        let mut c = 0;
        while c < self.len() {
            if self.is_live(c) {
                for r in relators {
                    if !self.is_live(c) {
                        break;
                    }
                    self.scan_fill(c, r.letters(), relators)?;
                }
            }
            if self.is_live(c) {
                for col in 0..self.width {
                    if !self.is_live(c) {
                        break;
                    }
                    if self.get(c, col) == UNDEFINED {
                        if let Err(e) = self.define(c, col) {
                            self.lookahead(relators);
                            if !self.is_live(c) || self.get(c, col) != UNDEFINED {
                                continue;
                            }
                            if self.live >= self.max_cosets {
                                return Err(e);
                            }
                            self.define(c, col)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Compacts live cosets to `0..live` preserving order.
    fn into_table(mut self, n_generators: usize, subgens: Vec<Word>) -> CosetTable {
        let n = self.len();
        let mut new_index = vec![UNDEFINED; n];
        let mut next = 0;
        for c in 0..n {
            if self.is_live(c) {
                new_index[c] = next;
                next += 1;
            }
        }
        let mut entries = Vec::with_capacity(next as usize * self.width);
        for c in 0..n {
            if !self.is_live(c) {
                continue;
            }
            for col in 0..self.width {
                let d = self.get(c, col) as usize;
                let d = self.rep(d);
                entries.push(new_index[d]);
            }
        }
        CosetTable::from_entries_unchecked(n_generators, entries, subgens).standardize()
    }
}

/// Enumerates the cosets of the subgroup generated by `subgens`.
///
/// Returns a standardized, closed table whose size is the subgroup index,
/// or [`CosetEnumError::LimitExceeded`] once the live-coset cap is reached.
pub fn enumerate(
    p: &Presentation,
    subgens: &[Word],
    limits: EnumerationLimits,
) -> Result<CosetTable, CosetEnumError> {
    for w in subgens {
        p.check_word(w)?;
    }
    if limits.max_cosets == 0 {
        return Err(CosetEnumError::LimitExceeded(0));
    }
    let relators = normalized_relators(p);
    let subgens_reduced: Vec<Word> = subgens.iter().map(Word::free_reduce).collect();
    let mut e = Enumerator::new(p.n_generators(), limits.max_cosets);
    e.run(&relators, &subgens_reduced)?;
    Ok(e.into_table(p.n_generators(), subgens_reduced))
}

/// The permutation group induced by the generators on the cosets.
pub fn coset_action(t: &CosetTable) -> PermutationGroup {
    t.coset_action()
}

pub fn standardize(t: &CosetTable) -> CosetTable {
    t.standardize()
}
