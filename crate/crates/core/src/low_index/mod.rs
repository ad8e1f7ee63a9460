//! Conjugacy classes of finite-index subgroups by backtracking over
//! partial standardized coset tables.
//!
//! Each complete table found is the lexicographically least standardized
//! table in its conjugacy class: partial tables that some base-point
//! relabeling already beats are pruned during the search.

mod search;

use std::env;

use crate::coset_enum::{normalized_relators, CosetTable};
use crate::intlinalg::{abelian_invariants, AbelianInvariants};
use crate::permgrp::PermutationGroup;
use crate::presentations::{Presentation, Word};
use crate::rewrite;

/// Default cap on branch definitions.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const NODE_BUDGET_ENV: &str = "GRPKIT_NODE_BUDGET";

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum LowIndexError {
    #[error("invalid index range [{n_min}, {n_max}]")]
    InvalidRange { n_min: usize, n_max: usize },
    #[error("low-index search exceeded its node budget of {0}")]
    BudgetExceeded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowIndexOptions {
    pub node_budget: u64,
    /// Split the top of the search tree across the rayon pool.
    pub parallel: bool,
}

impl Default for LowIndexOptions {
    /// Budget from `GRPKIT_NODE_BUDGET` when set and valid.
    fn default() -> Self {
        let node_budget = env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_NODE_BUDGET);
        LowIndexOptions {
            node_budget,
            parallel: true,
        }
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClassRecord {
    /// Lexicographically least standardized table of the class.
    pub representative: CosetTable,
    pub index: usize,
    /// Number of conjugates, `[G : N_G(H)]`.
    pub class_size: usize,
    /// Nontrivial Schreier generators of the representative.
    pub generators_as_words: Vec<Word>,
}

impl SubgroupClassRecord {
    pub fn abelian_invariants(&self, p: &Presentation) -> AbelianInvariants {
        abelian_invariants(&rewrite::reidemeister_schreier(p, &self.representative))
    }

    /// Image of the coset action; its kernel is the normal core.
    pub fn core_image(&self) -> PermutationGroup {
        self.representative.coset_action()
    }
}

/// All conjugacy classes of subgroups with index in `[n_min, n_max]`,
/// sorted by index and then by table.
pub fn low_index_subgroups(
    p: &Presentation,
    n_min: usize,
    n_max: usize,
) -> Result<Vec<SubgroupClassRecord>, LowIndexError> {
    low_index_subgroups_with(p, n_min, n_max, &LowIndexOptions::default())
}

pub fn low_index_subgroups_with(
    p: &Presentation,
    n_min: usize,
    n_max: usize,
    options: &LowIndexOptions,
) -> Result<Vec<SubgroupClassRecord>, LowIndexError> {
    if n_min == 0 || n_min > n_max {
        return Err(LowIndexError::InvalidRange { n_min, n_max });
    }
    let k = p.n_generators();
    if k == 0 {
        let t = CosetTable::trivial(0);
        return Ok(if n_min == 1 { vec![record(t, 1)] } else { Vec::new() });
    }
    let relators = normalized_relators(p);
    let s = search::Search::new(k, &relators, n_min, n_max, options.node_budget);
    let frontier = if options.parallel {
        64 * rayon::current_num_threads()
    } else {
        0
    };
    let found = s.run(frontier);
    if s.exhausted() {
        return Err(LowIndexError::BudgetExceeded(options.node_budget));
    }
    log::debug!(
        "low-index [{n_min}, {n_max}]: {} classes, {} nodes",
        found.len(),
        s.nodes()
    );
    let mut records: Vec<SubgroupClassRecord> = found
        .into_iter()
        .map(|f| {
            let t = CosetTable::from_entries_unchecked(k, f.entries, Vec::new());
            debug_assert_eq!(t.n_cosets(), f.n_cosets);
            record(t, f.class_size)
        })
        .collect();
    records.sort_by(|a, b| {
        (a.index, a.representative.entries()).cmp(&(b.index, b.representative.entries()))
    });
    Ok(records)
}

fn record(mut t: CosetTable, class_size: usize) -> SubgroupClassRecord {
    let gens = rewrite::schreier_generators(&t);
    t.set_subgroup_generators(gens.clone());
    SubgroupClassRecord {
        index: t.n_cosets(),
        representative: t,
        class_size,
        generators_as_words: gens,
    }
}

/// `[G : N_G(H)]` for the coset-0 stabilizer `H` of `t`: the index divided
/// by the number of base points whose standardized relabeling equals the
/// standardized table.
pub fn normalizer_index(_p: &Presentation, t: &CosetTable) -> usize {
    let std = t.standardize();
    let fixing = (0..t.n_cosets()).filter(|&b| t.rebased(b) == std).count();
    t.n_cosets() / fixing
}

/// Coset-action image of `t`; its order is `[G : core(H)]`.
pub fn core_table(_p: &Presentation, t: &CosetTable) -> PermutationGroup {
    t.coset_action()
}
