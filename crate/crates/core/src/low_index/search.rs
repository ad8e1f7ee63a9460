use std::cmp::Ordering as CmpOrdering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::coset_enum::UNDEFINED;
use crate::presentations::Word;

/// A complete table found by the search, with its normalizer index.
pub(crate) struct Found {
    pub entries: Vec<u32>,
    pub n_cosets: usize,
    pub class_size: usize,
}

/// Shared, read-only search parameters.
pub(crate) struct Search {
    width: usize,
    n_min: usize,
    n_max: usize,
    /// `cycles[col]`: every cyclic rotation of every relator and its
    /// inverse that begins with column `col`, as column sequences.
    cycles: Vec<Vec<Vec<u8>>>,
    budget: u64,
    nodes: AtomicU64,
    exhausted: AtomicBool,
}

#[derive(Clone)]
struct State {
    table: Vec<u32>,
    n_cosets: usize,
    /// Every entry before this row-major position is defined.
    cursor: usize,
}

enum Step {
    Complete,
    Branch(usize),
}

impl Search {
    pub fn new(n_generators: usize, relators: &[Word], n_min: usize, n_max: usize, budget: u64) -> Self {
        let width = 2 * n_generators;
        let mut cycles: Vec<Vec<Vec<u8>>> = vec![Vec::new(); width];
        for r in relators {
            for w in [r.clone(), r.inverse()] {
                let cols: Vec<u8> = w.letters().iter().map(|l| l.column() as u8).collect();
                for k in 0..cols.len() {
                    let rot: Vec<u8> = cols[k..].iter().chain(&cols[..k]).copied().collect();
                    let first = rot[0] as usize;
                    if !cycles[first].contains(&rot) {
                        cycles[first].push(rot);
                    }
                }
            }
        }
        Search {
            width,
            n_min,
            n_max,
            cycles,
            budget,
            nodes: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted.load(Ordering::Relaxed)
    }

    /// Runs the search; `parallel_frontier` is the number of subtrees to
    /// aim for before handing work to the thread pool (0 runs serially).
    pub fn run(&self, parallel_frontier: usize) -> Vec<Found> {
        let root = State {
            table: vec![UNDEFINED; self.n_max * self.width],
            n_cosets: 1,
            cursor: 0,
        };
        let mut found = Vec::new();
        let mut frontier = vec![root];
        if parallel_frontier > 0 {
            let mut scratch = Scratch::new(self.n_max);
            while !frontier.is_empty() && frontier.len() < parallel_frontier {
                let mut next = Vec::new();
                for s in frontier {
                    self.expand_once(s, &mut next, &mut found, &mut scratch);
                }
                frontier = next;
                if self.exhausted() {
                    return found;
                }
            }
            let rest: Vec<Vec<Found>> = frontier
                .into_par_iter()
                .map_init(
                    || Scratch::new(self.n_max),
                    |scratch, mut s| {
                        let mut out = Vec::new();
                        scratch.trail.clear();
                        self.dfs(&mut s, scratch, &mut out);
                        out
                    },
                )
                .collect();
            found.extend(rest.into_iter().flatten());
        } else {
            let mut scratch = Scratch::new(self.n_max);
            for mut s in frontier {
                self.dfs(&mut s, &mut scratch, &mut found);
            }
        }
        found
    }

    fn first_undefined(&self, s: &mut State) -> Step {
        let end = s.n_cosets * self.width;
        while s.cursor < end {
            if s.table[s.cursor] == UNDEFINED {
                return Step::Branch(s.cursor);
            }
            s.cursor += 1;
        }
        Step::Complete
    }

    /// Counts one surviving definition against the budget.
    fn charge_node(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Whether coset `d` may be the target of entry `pos`; the new coset
    /// `s.n_cosets` is allowed while below `n_max`.
    #[inline]
    fn is_candidate(&self, s: &State, pos: usize, d: usize) -> bool {
        if d == s.n_cosets {
            return d < self.n_max;
        }
        s.table[d * self.width + ((pos % self.width) ^ 1)] == UNDEFINED
    }

    /// Sets entry `pos` to `d` (adding a coset if `d` is new) and closes
    /// under deductions. Returns false on contradiction or non-canonicity.
    fn try_assign(&self, s: &mut State, pos: usize, d: usize, sc: &mut Scratch) -> bool {
        let c = pos / self.width;
        let col = pos % self.width;
        if d == s.n_cosets {
            s.n_cosets += 1;
        }
        self.set(s, c, col, d, &mut sc.trail);
        sc.queue.clear();
        sc.queue.push((c, col));
        while let Some((c, col)) = sc.queue.pop() {
            for w in &self.cycles[col] {
                if !self.scan(s, c, w, &mut sc.trail, &mut sc.queue) {
                    return false;
                }
            }
        }
        self.canonical_check(s, sc).is_some()
    }

    #[inline]
    fn set(&self, s: &mut State, c: usize, col: usize, d: usize, trail: &mut Vec<usize>) {
        let a = c * self.width + col;
        let b = d * self.width + (col ^ 1);
        s.table[a] = d as u32;
        s.table[b] = c as u32;
        trail.push(a);
        trail.push(b);
    }

    /// Traces the cycle `w` from coset `c`; records a deduction when exactly
    /// one entry is missing. Returns false on a coincidence.
    #[inline]
    fn scan(
        &self,
        s: &mut State,
        c: usize,
        w: &[u8],
        trail: &mut Vec<usize>,
        queue: &mut Vec<(usize, usize)>,
    ) -> bool {
        let t = &s.table;
        let width = self.width;
        let at = |coset: usize, col: usize| t[coset * width + col];
        let mut f = c;
        let mut i = 0;
        while i < w.len() {
            let x = at(f, w[i] as usize);
            if x == UNDEFINED {
                break;
            }
            f = x as usize;
            i += 1;
        }
        if i == w.len() {
            return f == c;
        }
        let mut b = c;
        let mut j = w.len() - 1;
        while j > i {
            let x = at(b, w[j] as usize ^ 1);
            if x == UNDEFINED {
                break;
            }
            b = x as usize;
            j -= 1;
        }
        if j == i {
            // Exactly one entry missing: it is forced.
            let col = w[i] as usize;
            if at(b, col ^ 1) != UNDEFINED {
                return false;
            }
            self.set(s, f, col, b, trail);
            queue.push((f, col));
        }
        true
    }

    fn undo(&self, s: &mut State, trail: &mut Vec<usize>, mark: usize) {
        for &p in &trail[mark..] {
            s.table[p] = UNDEFINED;
        }
        trail.truncate(mark);
    }

    /// Compares each base-point relabeling of the (partial) table against
    /// the table itself. Returns None if some relabeling is provably
    /// smaller, otherwise the number of base points that reproduce the
    /// table exactly (meaningful only for complete tables).
    fn canonical_check(&self, s: &State, sc: &mut Scratch) -> Option<usize> {
        let n = s.n_cosets;
        let w = self.width;
        let t = &s.table;
        let old_to_new = &mut sc.old_to_new;
        let new_to_old = &mut sc.new_to_old;
        let mut stabilizing = 1;
        'bases: for base in 1..n {
            for &o in new_to_old.iter() {
                old_to_new[o] = UNDEFINED;
            }
            new_to_old.clear();
            old_to_new[base] = 0;
            new_to_old.push(base);
            for i in 0..n {
                let Some(&old) = new_to_old.get(i) else {
                    continue 'bases;
                };
                for col in 0..w {
                    let mine = t[i * w + col];
                    let target = t[old * w + col];
                    if target == UNDEFINED || mine == UNDEFINED {
                        continue 'bases;
                    }
                    let mut relabeled = old_to_new[target as usize];
                    if relabeled == UNDEFINED {
                        relabeled = new_to_old.len() as u32;
                        old_to_new[target as usize] = relabeled;
                        new_to_old.push(target as usize);
                    }
                    match relabeled.cmp(&mine) {
                        CmpOrdering::Less => return None,
                        CmpOrdering::Greater => continue 'bases,
                        CmpOrdering::Equal => {}
                    }
                }
            }
            stabilizing += 1;
        }
        Some(stabilizing)
    }

    fn record(&self, s: &State, out: &mut Vec<Found>, sc: &mut Scratch) {
        if s.n_cosets < self.n_min {
            return;
        }
        let stabilizing = self.canonical_check(s, sc).expect("checked at assignment");
        out.push(Found {
            entries: s.table[..s.n_cosets * self.width].to_vec(),
            n_cosets: s.n_cosets,
            class_size: s.n_cosets / stabilizing,
        });
    }

    fn dfs(&self, s: &mut State, sc: &mut Scratch, out: &mut Vec<Found>) {
        let pos = match self.first_undefined(s) {
            Step::Complete => {
                self.record(s, out, sc);
                return;
            }
            Step::Branch(pos) => pos,
        };
        let saved_cursor = s.cursor;
        let saved_n = s.n_cosets;
        for d in 0..=saved_n {
            if self.exhausted() {
                return;
            }
            if !self.is_candidate(s, pos, d) {
                continue;
            }
            let mark = sc.trail.len();
            if self.try_assign(s, pos, d, sc) && self.charge_node() {
                self.dfs(s, sc, out);
            }
            self.undo(s, &mut sc.trail, mark);
            s.n_cosets = saved_n;
            s.cursor = saved_cursor;
        }
    }

    fn expand_once(&self, mut s: State, next: &mut Vec<State>, out: &mut Vec<Found>, sc: &mut Scratch) {
        let pos = match self.first_undefined(&mut s) {
            Step::Complete => {
                self.record(&s, out, sc);
                return;
            }
            Step::Branch(pos) => pos,
        };
        for d in 0..=s.n_cosets {
            if !self.is_candidate(&s, pos, d) {
                continue;
            }
            let mut child = s.clone();
            sc.trail.clear();
            if self.try_assign(&mut child, pos, d, sc) && self.charge_node() {
                next.push(child);
            }
        }
    }
}

/// Per-worker buffers reused across nodes.
struct Scratch {
    trail: Vec<usize>,
    queue: Vec<(usize, usize)>,
    old_to_new: Vec<u32>,
    new_to_old: Vec<usize>,
}

impl Scratch {
    fn new(n_max: usize) -> Self {
        Scratch {
            trail: Vec::new(),
            queue: Vec::new(),
            old_to_new: vec![UNDEFINED; n_max],
            new_to_old: Vec::with_capacity(n_max),
        }
    }
}
