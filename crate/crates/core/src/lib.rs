//! Computational group theory toolkit: finitely presented groups, coset
//! enumeration, low-index subgroups, Reidemeister–Schreier rewriting,
//! integer Smith normal form, permutation groups, prime splitting and
//! epimorphism counting, plus a manifest-driven verification harness.

pub mod arith;
pub mod coset_enum;
pub mod intlinalg;
pub mod low_index;
pub mod permgrp;
pub mod presentations;
pub mod quotients;
pub mod rewrite;
pub mod scenarios;
pub mod verify;

pub use coset_enum::{enumerate, CosetTable, EnumerationLimits};
pub use intlinalg::{abelian_invariants, AbelianInvariants, IntegerMatrix};
pub use low_index::{low_index_subgroups, LowIndexOptions, SubgroupClassRecord};
pub use permgrp::{Permutation, PermutationGroup};
pub use presentations::{catalog, parse_presentation, CatalogKey, Letter, Presentation, Word};
